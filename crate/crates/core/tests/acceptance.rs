//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use gncg::dynamics::{self, CycleCertificate, Rule};
use gncg::equilibria::{self, Level, DEFAULT_BR_CAP};
use gncg::families;
use gncg::game::{self, induced_network};
use gncg::optima::{self, DEFAULT_OPT_CAP};
use gncg::random;
use gncg::{HostGraph, HostKind, Rational, StrategyProfile, Weight};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn w(num: i128, den: i128) -> Weight {
    Weight::ratio(num, den)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn certified_ne(host: &HostGraph, s: &StrategyProfile, alpha: &Weight) -> bool {
    equilibria::certify(host, s, alpha, Level::NE, DEFAULT_BR_CAP).map(|r| r.stable()).unwrap_or(false)
}

fn c1_tree_star() -> Outcome {
    let alpha = Weight::int(2);
    let b = families::tree_star_family(5, &alpha).map_err(|e| e.to_string())?;
    let (ne, opt) = (&b.profiles["NE"], &b.profiles["OPT"]);
    let cost_ne = game::social_cost(&b.host, ne, &alpha).unwrap();
    let cost_opt = game::social_cost(&b.host, opt, &alpha).unwrap();
    ensure(cost_ne == Weight::int(70), || format!("cost(NE) = {cost_ne}"))?;
    ensure(cost_opt == Weight::int(40), || format!("cost(OPT) = {cost_opt}"))?;
    ensure(cost_ne / cost_opt == w(7, 4), || "ratio differs from 7/4".into())?;
    ensure(common::social_cost(&b.host, ne, &alpha) == cost_ne, || "oracle disagrees on cost(NE)".into())?;
    ensure(common::optimum_cost(&b.host, &alpha) == cost_opt, || "OPT profile is not optimal".into())?;
    ensure(certified_ne(&b.host, ne, &alpha) && common::is_nash(&b.host, ne, &alpha), || "NE profile not certified".into())?;
    ensure(certified_ne(&b.host, opt, &alpha) && common::is_nash(&b.host, opt, &alpha), || "OPT tree not certified NE".into())?;
    Ok("n=5 alpha=2: cost(NE)=70 cost(OPT)=40 ratio=7/4; NE and OPT tree certified".into())
}

fn four_node_formula(a: Weight) -> Weight {
    let i = Weight::int;
    let num = i(3) * a * a * a + i(24) * a * a + i(40) * a + i(24);
    let den = a * a * a + i(10) * a * a + i(32) * a + i(24);
    num / den
}

fn c2_four_node() -> Outcome {
    let mut out = Vec::new();
    for alpha in [Weight::int(1), Weight::int(2), Weight::int(5)] {
        let b = families::four_node_family(&alpha).map_err(|e| e.to_string())?;
        let ne = common::social_cost(&b.host, &b.profiles["NE"], &alpha);
        let opt = common::optimum_cost(&b.host, &alpha);
        let measured = game::social_cost(&b.host, &b.profiles["NE"], &alpha).unwrap()
            / game::social_cost(&b.host, &b.profiles["OPT"], &alpha).unwrap();
        ensure(ne / opt == measured, || format!("alpha={alpha}: oracle ratio {} vs {measured}", ne / opt))?;
        ensure(measured == four_node_formula(alpha), || format!("alpha={alpha}: ratio {measured} off the polynomial"))?;
        ensure(certified_ne(&b.host, &b.profiles["NE"], &alpha), || format!("alpha={alpha}: star not NE"))?;
        ensure(common::is_nash(&b.host, &b.profiles["NE"], &alpha), || format!("alpha={alpha}: oracle rejects star"))?;
        out.push(format!("alpha={alpha}: {measured}"));
    }
    ensure(out[0].ends_with("91/67"), || "alpha=1 must give 91/67".into())?;
    Ok(out.join(", "))
}

fn c3_one_norm() -> Outcome {
    let alpha = Weight::int(2);
    let mut out = Vec::new();
    for (d, expect) in [(2usize, w(7, 4)), (3, w(11, 6))] {
        let b = families::rd_one_norm_family(d, &alpha).map_err(|e| e.to_string())?;
        let ne = common::social_cost(&b.host, &b.profiles["NE"], &alpha);
        let opt = common::social_cost(&b.host, &b.profiles["OPT"], &alpha);
        ensure(ne / opt == expect, || format!("d={d}: ratio {} expected {expect}", ne / opt))?;
        let lib = b.social_cost_of("NE").unwrap() / b.social_cost_of("OPT").unwrap();
        ensure(lib == expect, || format!("d={d}: library ratio {lib}"))?;
        if d == 2 {
            ensure(common::optimum_cost(&b.host, &alpha) == opt, || "d=2: OPT profile is not optimal".into())?;
            ensure(certified_ne(&b.host, &b.profiles["NE"], &alpha), || "d=2: NE not certified".into())?;
            ensure(common::is_nash(&b.host, &b.profiles["NE"], &alpha), || "d=2: oracle rejects NE".into())?;
        }
        out.push(format!("d={d}: {expect}"));
    }
    Ok(format!("alpha=2 {}; d=2 NE certified", out.join(", ")))
}

fn c4_algorithm_one() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let alphas = [w(1, 4), w(3, 4), w(1, 1)];
    let mut cases = 0;
    for _ in 0..200 {
        let h = random::one_two_host(6, &mut rng);
        for alpha in &alphas {
            let fast = optima::optimum_one_two(&h, alpha).map_err(|e| e.to_string())?;
            let exact = optima::optimum_exact(&h, alpha, DEFAULT_OPT_CAP).map_err(|e| e.to_string())?;
            ensure(fast.social_cost == exact.social_cost, || {
                format!("alpha={alpha}: {:?} vs {:?}", fast.social_cost, exact.social_cost)
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases}/{cases} cases equal (200 hosts, n=6)"))
}

fn enumerate(host: &HostGraph, alpha: &Weight) -> Result<Vec<StrategyProfile>, String> {
    equilibria::enumerate_nash_equilibria(host, alpha, 10).map_err(|e| e.to_string())
}

fn c5_metric_poa() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut count = 0;
    let mut worst = 0.0f64;
    for i in 0..50 {
        let h = random::metric_host(4, 9, &mut rng);
        for alpha in [w(1, 2), w(1, 1), w(2, 1), w(4, 1)] {
            let opt = optima::optimum_exact(&h, &alpha, DEFAULT_OPT_CAP).unwrap().social_cost.unwrap();
            ensure(opt == common::optimum_cost(&h, &alpha), || format!("host {i}: optimum disagrees with oracle"))?;
            let bound = (alpha + Weight::int(2)) / Weight::int(2);
            for s in enumerate(&h, &alpha)? {
                if i < 10 {
                    ensure(common::is_nash(&h, &s, &alpha), || format!("host {i}: oracle rejects an enumerated NE"))?;
                }
                let c = game::social_cost(&h, &s, &alpha).unwrap();
                ensure(c <= bound * opt, || format!("host {i} alpha={alpha}: ratio {} > {bound}", c / opt))?;
                let st = common::stretch(&h, &s.edges());
                ensure(st <= alpha + Weight::one(), || format!("host {i} alpha={alpha}: stretch {st}"))?;
                worst = worst.max((c / opt / bound).to_f64());
                count += 1;
            }
        }
    }
    Ok(format!("{count} equilibria checked; max ratio/bound = {worst:.4}"))
}

fn c6_poa_one() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut low = 0;
    let mut high = 0;
    for i in 0..50 {
        let h = random::one_two_host(4, &mut rng);
        let a = w(1, 4);
        let opt = optima::optimum_one_two(&h, &a).unwrap();
        for s in enumerate(&h, &a)? {
            ensure(s.edges() == opt.edges, || format!("host {i}: NE {:?} differs from optimum {:?}", s.edges(), opt.edges))?;
            low += 1;
        }
        for a in [w(3, 4), w(1, 1)] {
            let opt = optima::optimum_one_two(&h, &a).unwrap();
            for s in enumerate(&h, &a)? {
                let edges = s.edges();
                ensure(edges.iter().all(|e| opt.edges.contains(e)), || format!("host {i} alpha={a}: NE edge outside optimum"))?;
                let g = induced_network(&h, &s).unwrap();
                for (u, v) in h.pairs() {
                    if h.weight(u, v) == Weight::one() && !edges.contains(&(u, v)) {
                        ensure(g.distance(u, v) == Weight::int(2), || {
                            format!("host {i} alpha={a}: missing 1-edge ({u},{v}) at distance {}", g.distance(u, v))
                        })?;
                    }
                }
                high += 1;
            }
        }
    }
    ensure(low > 0 && high > 0, || "no equilibria found".into())?;
    Ok(format!("alpha=1/4: {low} NE equal the optimum; alpha in {{3/4, 1}}: {high} NE inside the optimum"))
}

fn c7_tree_ne() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut count = 0;
    for i in 0..20 {
        let h = random::tree_host(4, 6, &mut rng);
        let tree = optima::optimum_tree(&h, None).unwrap();
        for alpha in [w(1, 2), w(2, 1)] {
            let all = enumerate(&h, &alpha)?;
            ensure(!all.is_empty(), || format!("host {i}: no NE"))?;
            ensure(all.iter().any(|s| s.edges() == tree.edges), || format!("host {i} alpha={alpha}: tree itself is never NE"))?;
            for s in all {
                let edges = s.edges();
                ensure(edges.len() == 3 && common::is_acyclic(4, &edges), || format!("host {i} alpha={alpha}: NE {edges:?} is not a tree"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} equilibria on 20 tree metrics, all spanning trees"))
}

fn star(n: usize, center: usize) -> StrategyProfile {
    let owned: Vec<(usize, usize)> = (0..n).filter(|&v| v != center).map(|v| (center, v)).collect();
    StrategyProfile::from_owned_edges(n, &owned).unwrap()
}

fn c8_stars() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut count = 0;
    for i in 0..20 {
        let h = random::one_two_host(8, &mut rng);
        for alpha in [Weight::int(3), Weight::int(5)] {
            for c in 0..8 {
                let s = star(8, c);
                let r = equilibria::certify(&h, &s, &alpha, Level::NE, DEFAULT_BR_CAP).unwrap();
                ensure(r.ge.stable, || format!("host {i} alpha={alpha} center {c}: GE witness {:?}", r.ge.witness))?;
                ensure(r.stable() && r.ne_certified_exactly, || format!("host {i} alpha={alpha} center {c}: not NE"))?;
                if i < 3 && c < 2 {
                    ensure(common::is_nash(&h, &s, &alpha), || format!("host {i}: oracle rejects star"))?;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} center-owned stars certified NE (n=8)"))
}

/// Applies the best improving addition until no agent has one.
fn add_only_dynamics(h: &HostGraph, s: &StrategyProfile, alpha: &Weight) -> StrategyProfile {
    let mut s = s.clone();
    for _ in 0..1000 {
        let mv = (0..h.n()).find_map(|u| equilibria::improving_additions(h, &s, u, alpha).unwrap().into_iter().next());
        match mv {
            Some(m) => s = m.apply(&s).unwrap(),
            None => return s,
        }
    }
    panic!("add-only dynamics did not stop");
}

fn c9_approximation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut ae_count, mut ge_count) = (0, 0);
    let (mut max_ge_ae, mut max_ne_ge, mut max_ne_ae) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..50 {
        let n = rng.gen_range(3..=6);
        let h = random::metric_host(n, 9, &mut rng);
        for alpha in [w(1, 2), w(1, 1), w(2, 1)] {
            let init = random::connected_profile(n, 0.3, &mut rng);
            let one = Weight::one();
            let ae = add_only_dynamics(&h, &init, &alpha);
            let r = equilibria::certify(&h, &ae, &alpha, Level::NE, DEFAULT_BR_CAP).unwrap();
            ensure(r.ae.stable, || format!("host {i}: add-only limit is not AE"))?;
            let beta_ne = r.beta_ne.unwrap();
            ensure(r.beta_ge <= alpha + one, || format!("host {i} alpha={alpha}: AE beta_ge {}", r.beta_ge))?;
            ensure(beta_ne <= Weight::int(3) * (alpha + one), || format!("host {i} alpha={alpha}: AE beta_ne {beta_ne}"))?;
            max_ge_ae = max_ge_ae.max((r.beta_ge / (alpha + one)).to_f64());
            max_ne_ae = max_ne_ae.max((beta_ne / (Weight::int(3) * (alpha + one))).to_f64());
            ae_count += 1;

            let t = dynamics::run(&h, &alpha, &init, Rule::GreedySingle, dynamics::Scheduler::RoundRobin, 2000, DEFAULT_BR_CAP)
                .unwrap();
            let ge = match t.outcome {
                dynamics::Outcome::Converged { profile } => profile,
                other => return Err(format!("host {i}: greedy dynamics ended with {other:?}")),
            };
            let r = equilibria::certify(&h, &ge, &alpha, Level::NE, DEFAULT_BR_CAP).unwrap();
            ensure(r.ge.stable && r.ae.stable, || format!("host {i}: greedy limit is not GE"))?;
            let beta_ne = r.beta_ne.unwrap();
            ensure(beta_ne <= Weight::int(3), || format!("host {i} alpha={alpha}: GE beta_ne {beta_ne}"))?;
            ensure(r.beta_ge <= alpha + one, || format!("host {i} alpha={alpha}: GE beta_ge {}", r.beta_ge))?;
            ensure(beta_ne <= Weight::int(3) * (alpha + one), || format!("host {i}: GE beta_ne above 3(alpha+1)"))?;
            max_ne_ge = max_ne_ge.max(beta_ne.to_f64() / 3.0);
            ge_count += 1;
        }
    }
    Ok(format!(
        "{ae_count} AE and {ge_count} GE profiles; max beta_ge/(a+1) (AE) {max_ge_ae:.4}, beta_ne/3 (GE) {max_ne_ge:.4}, beta_ne/3(a+1) (AE) {max_ne_ae:.4}"
    ))
}

fn c10_opt_spanner() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let n = rng.gen_range(3..=6);
        let h = if i % 2 == 0 { random::general_host(n, 1, 9, &mut rng) } else { random::metric_host(n, 9, &mut rng) };
        for alpha in [Weight::int(1), Weight::int(4)] {
            let opt = optima::optimum_exact(&h, &alpha, DEFAULT_OPT_CAP).unwrap();
            let bound = alpha / Weight::int(2) + Weight::one();
            let st = opt.stretch(&h);
            ensure(st == common::stretch(&h, &opt.edges), || format!("host {i}: stretch disagrees with oracle"))?;
            ensure(st <= bound, || format!("host {i} alpha={alpha}: stretch {st} > {bound}"))?;
            if n <= 5 {
                ensure(opt.social_cost == Some(common::optimum_cost(&h, &alpha)), || format!("host {i}: optimum disagrees with oracle"))?;
            }
            worst = worst.max((st / bound).to_f64());
        }
    }
    Ok(format!("50 hosts, max stretch/bound = {worst:.4}"))
}

fn random_set_system<R: Rng>(rng: &mut R) -> (Vec<usize>, Vec<Vec<usize>>) {
    let k = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=4);
    let universe: Vec<usize> = (0..k).collect();
    let mut sets: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let mut s: Vec<usize> = universe.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            if s.is_empty() {
                s.push(rng.gen_range(0..k));
            }
            s
        })
        .collect();
    for &e in &universe {
        if !sets.iter().any(|s| s.contains(&e)) {
            let i = rng.gen_range(0..m);
            sets[i].push(e);
            sets[i].sort_unstable();
        }
    }
    (universe, sets)
}

fn check_cover_response(b: &families::InstanceBundle, universe: &[usize], sets: &[Vec<usize>]) -> Result<(), String> {
    let u = b.designated_agent.unwrap();
    let (br, _) = equilibria::best_response_exact(&b.host, &b.profiles["G"], u, &b.alpha, DEFAULT_BR_CAP)
        .map_err(|e| e.to_string())?;
    let a = &b.groups["a"];
    let chosen: Vec<usize> = br.iter().filter_map(|v| a.iter().position(|x| x == v)).collect();
    ensure(chosen.len() == br.len(), || format!("{}: best response {br:?} buys non-set nodes", b.name))?;
    let covered: BTreeSet<usize> = chosen.iter().flat_map(|&i| sets[i].iter().copied()).collect();
    ensure(universe.iter().all(|e| covered.contains(e)), || format!("{}: best response {br:?} is not a cover", b.name))?;
    let min = families::min_set_cover_size(universe, sets).unwrap();
    ensure(chosen.len() == min, || format!("{}: best response uses {} sets, minimum is {min}", b.name, chosen.len()))
}

fn random_cover<R: Rng>(vertices: usize, edges: &[(usize, usize)], rng: &mut R) -> Vec<usize> {
    loop {
        let c: Vec<usize> = (0..vertices).filter(|_| rng.gen_bool(0.5)).collect();
        if edges.iter().all(|(a, b)| c.contains(a) || c.contains(b)) {
            return c;
        }
    }
}

fn smallest_cover(vertices: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    (0u32..(1 << vertices))
        .filter(|m| edges.iter().all(|&(a, b)| m >> a & 1 == 1 || m >> b & 1 == 1))
        .min_by_key(|m| m.count_ones())
        .map(|m| (0..vertices).filter(|i| m >> i & 1 == 1).collect())
        .unwrap()
}

fn c11_reductions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let l = Rational::from_integer(60);
    let eps = Rational::new(1, 100);
    let beta = Rational::from_integer(1);
    for _ in 0..20 {
        let (universe, sets) = random_set_system(&mut rng);
        let t = families::set_cover_tree_instance(&universe, &sets, l, eps, beta).map_err(|e| e.to_string())?;
        check_cover_response(&t, &universe, &sets)?;
        let p = families::set_cover_points_instance(&universe, &sets, l, eps, beta).map_err(|e| e.to_string())?;
        check_cover_response(&p, &universe, &sets)?;
    }
    let (mut minimum, mut larger) = (0, 0);
    for _ in 0..20 {
        let vertices = rng.gen_range(2..=5);
        let mut all: Vec<(usize, usize)> = (0..vertices).flat_map(|a| ((a + 1)..vertices).map(move |b| (a, b))).collect();
        all.shuffle(&mut rng);
        let m = rng.gen_range(1..=4.min(all.len()));
        let edges: Vec<(usize, usize)> = all[..m].to_vec();
        let min = families::min_vertex_cover_size(vertices, &edges);
        for cover in [smallest_cover(vertices, &edges), random_cover(vertices, &edges, &mut rng)] {
            let b = families::vertex_cover_instance(vertices, &edges, &cover).map_err(|e| e.to_string())?;
            let is_min = cover.len() == min;
            let stable = certified_ne(&b.host, &b.profiles["G"], &b.alpha);
            ensure(stable == is_min, || format!("graph {edges:?} cover {cover:?}: NE verdict {stable}, minimum {is_min}"))?;
            if is_min {
                minimum += 1;
            } else {
                larger += 1;
            }
        }
    }
    Ok(format!("20 tree + 20 planar set-cover instances matched; vertex cover: {minimum} minimum NE, {larger} larger not NE"))
}

fn c12_general() -> Outcome {
    let alpha = Weight::int(2);
    let b = families::general_triangle(&alpha).map_err(|e| e.to_string())?;
    ensure(b.host.kind() == &HostKind::General, || "triangle host should be non-metric".into())?;
    let ratio = b.social_cost_of("NE").unwrap() / b.social_cost_of("OPT").unwrap();
    ensure(ratio == Weight::int(2), || format!("triangle ratio {ratio}"))?;
    let sigma = game::pair_sigma(&b.host, &b.profiles["NE"], &b.profiles["OPT"], 0, 2, &alpha).unwrap();
    ensure(sigma == Weight::int(4), || format!("pair sigma {sigma}"))?;
    ensure(certified_ne(&b.host, &b.profiles["NE"], &alpha) && common::is_nash(&b.host, &b.profiles["NE"], &alpha), || "triangle NE not certified".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut count = 0;
    let mut worst = 0.0f64;
    for i in 0..30 {
        let h = random::non_metric_host(4, 0, 9, &mut rng);
        for alpha in [w(1, 2), w(1, 1), w(2, 1)] {
            let opt = optima::optimum_exact(&h, &alpha, DEFAULT_OPT_CAP).unwrap().social_cost.unwrap();
            let half = (alpha + Weight::int(2)) / Weight::int(2);
            for s in enumerate(&h, &alpha)? {
                let c = game::social_cost(&h, &s, &alpha).unwrap();
                ensure(c <= half * half * opt, || format!("host {i} alpha={alpha}: ratio {}", c / opt))?;
                if opt.is_zero() {
                    continue;
                }
                worst = worst.max((c / opt / (half * half)).to_f64());
                count += 1;
            }
        }
    }
    Ok(format!("triangle: ratio 2, sigma 4; {count} NE on 30 non-metric hosts, max ratio/bound = {worst:.4}"))
}

/// Re-checks a certificate with the brute-force oracle.
fn oracle_accepts(h: &HostGraph, cert: &CycleCertificate) -> bool {
    let len = cert.steps.len();
    let movers: BTreeSet<usize> = cert.steps.iter().map(|s| s.mover).collect();
    len >= 2
        && movers.len() >= 2
        && cert.steps.iter().enumerate().all(|(i, st)| {
            let next = st.profile.with_strategy(st.mover, st.strategy.clone()).unwrap();
            let before = common::agent_cost(h, &st.profile, st.mover, &cert.alpha);
            let after = common::agent_cost(h, &next, st.mover, &cert.alpha);
            let optimal = cert.rule != Rule::ExactBr || after == common::best_cost(h, &st.profile, st.mover, &cert.alpha);
            after < before && optimal && next == cert.steps[(i + 1) % len].profile
        })
}

fn mutations(cert: &CycleCertificate, n: usize, rng: &mut ChaCha8Rng) -> Vec<CycleCertificate> {
    let mut out = Vec::new();
    for k in 0..20 {
        let mut c = cert.clone();
        let i = rng.gen_range(0..c.steps.len());
        match k % 4 {
            0 => {
                c.steps.remove(i);
            }
            1 => {
                let j = (i + 1) % c.steps.len();
                c.steps.swap(i, j);
            }
            2 => {
                let current = c.steps[i].profile.strategy(c.steps[i].mover).clone();
                c.steps[i].strategy = current;
            }
            _ => {
                let mover = c.steps[i].mover;
                let t = (mover + 1 + rng.gen_range(0..n - 1)) % n;
                if !c.steps[i].strategy.remove(&t) {
                    c.steps[i].strategy.insert(t);
                }
            }
        }
        out.push(c);
    }
    out
}

fn c13_fip() -> Outcome {
    let h = families::brc_points();
    let grid: Vec<Weight> = (1..=50).map(|i| w(i, 10)).collect();
    let found = dynamics::cycle_search(&h, &grid, 8, 10, 13).map_err(|e| e.to_string())?;
    for c in &found {
        ensure(dynamics::verify_cycle(&h, &c.alpha, c, c.rule).accepted(), || "search returned a rejected certificate".into())?;
        ensure(oracle_accepts(&h, c), || format!("oracle rejects the cycle at alpha={}", c.alpha))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut rejected = 0;
    if let Some(c) = found.first() {
        for m in mutations(c, h.n(), &mut rng) {
            ensure(!dynamics::verify_cycle(&h, &m.alpha, &m, m.rule).accepted(), || "a mutated certificate was accepted".into())?;
            rejected += 1;
        }
    }
    ensure(!found.is_empty(), || "no cycle found on the 10-point set".into())?;
    let br = found.iter().filter(|c| c.rule == Rule::ExactBr).count();
    let first = found.iter().find(|c| c.rule == Rule::ExactBr).unwrap_or(&found[0]);
    Ok(format!(
        "{} certificates ({br} best-response), e.g. {} at alpha={} length {} movers {:?}; {rejected}/20 mutations rejected",
        found.len(),
        first.rule,
        first.alpha,
        first.len(),
        first.movers()
    ))
}

fn c14_spanner_ownership() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let k = w(3, 2);
    let mut count = 0;
    for i in 0..20 {
        let h = random::one_two_host(5, &mut rng);
        let spanner = optima::min_weight_spanner(&h, &k, DEFAULT_OPT_CAP).map_err(|e| e.to_string())?;
        ensure(common::stretch(&h, &spanner.edges) <= k, || format!("host {i}: not a 3/2-spanner"))?;
        for alpha in [w(1, 2), w(3, 4), w(1, 1)] {
            let s = optima::spanner_ne_ownership(&h, &spanner, &alpha, optima::DEFAULT_ORIENTATION_CAP)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("host {i} alpha={alpha}: no NE orientation"))?;
            ensure(s.edges() == spanner.edges && s.is_single_owner(), || format!("host {i}: orientation changes the edge set"))?;
            ensure(common::is_nash(&h, &s, &alpha), || format!("host {i} alpha={alpha}: oracle rejects orientation"))?;
            count += 1;
        }
    }
    Ok(format!("{count}/{count} spanners received a NE ownership (n=5)"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "tree-metric lower-bound family", budget: secs(5), run: c1_tree_star },
        Criterion { id: 2, name: "four-node family", budget: secs(5), run: c2_four_node },
        Criterion { id: 3, name: "1-norm star family", budget: secs(10), run: c3_one_norm },
        Criterion { id: 4, name: "one-two optimum vs exhaustive optimum", budget: secs(300), run: c4_algorithm_one },
        Criterion { id: 5, name: "metric PoA bound and NE stretch", budget: secs(600), run: c5_metric_poa },
        Criterion { id: 6, name: "one-two equilibria inside the optimum", budget: secs(600), run: c6_poa_one },
        Criterion { id: 7, name: "tree-metric equilibria are trees", budget: secs(300), run: c7_tree_ne },
        Criterion { id: 8, name: "star stability on one-two hosts", budget: secs(60), run: c8_stars },
        Criterion { id: 9, name: "approximation chain AE/GE/NE", budget: secs(900), run: c9_approximation },
        Criterion { id: 10, name: "optimum stretch", budget: secs(300), run: c10_opt_spanner },
        Criterion { id: 11, name: "reduction instances", budget: secs(600), run: c11_reductions },
        Criterion { id: 12, name: "general PoA bound and triangle", budget: secs(600), run: c12_general },
        Criterion { id: 13, name: "best-response cycles (FIP)", budget: secs(1800), run: c13_fip },
        Criterion { id: 14, name: "3/2-spanner NE ownership", budget: secs(600), run: c14_spanner_ownership },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > c.budget => Err(format!("{detail}; exceeded time budget")),
            r => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} C{:<2} {}: {detail} [{:.2}s, budget {}s]",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
