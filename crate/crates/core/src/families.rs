//! Generators for lower-bound families and reduction instances.

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{social_cost, StrategyProfile};
use crate::hostgraph::HostGraph;
use crate::optima::optimum_one_two;
use crate::weight::{Rational, Weight, DEFAULT_EPSILON};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prediction {
    pub value: Weight,
    pub formula: String,
}

/// A generated instance with named profiles and predicted values.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceBundle {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub host: HostGraph,
    pub alpha: Weight,
    pub profiles: BTreeMap<String, StrategyProfile>,
    pub predictions: BTreeMap<String, Prediction>,
    pub designated_agent: Option<usize>,
    /// Named node groups of the construction (set nodes, element nodes, ...).
    pub groups: BTreeMap<String, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredictionCheck {
    pub name: String,
    pub predicted: Weight,
    pub measured: Weight,
    pub matches: bool,
}

impl InstanceBundle {
    fn new(name: &str, host: HostGraph, alpha: Weight) -> Self {
        InstanceBundle {
            name: name.into(),
            params: BTreeMap::new(),
            host,
            alpha,
            profiles: BTreeMap::new(),
            predictions: BTreeMap::new(),
            designated_agent: None,
            groups: BTreeMap::new(),
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    fn profile(mut self, key: &str, s: StrategyProfile) -> Self {
        self.profiles.insert(key.into(), s);
        self
    }

    fn predict(mut self, key: &str, value: Weight, formula: &str) -> Self {
        self.predictions.insert(key.into(), Prediction { value, formula: formula.into() });
        self
    }

    /// `name=value` pairs joined by `;`.
    pub fn params_string(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }

    pub fn social_cost_of(&self, profile: &str) -> Result<Weight> {
        let s = self
            .profiles
            .get(profile)
            .ok_or_else(|| Error::Precondition(format!("bundle {} has no profile `{profile}`", self.name)))?;
        social_cost(&self.host, s, &self.alpha)
    }

    /// Compares every cost prediction (`cost_<PROFILE>`) and the `ratio`
    /// prediction with costs measured on the bundle's profiles.
    pub fn verify_predictions(&self) -> Result<Vec<PredictionCheck>> {
        let mut out = Vec::new();
        for (name, p) in &self.predictions {
            let measured = if let Some(profile) = name.strip_prefix("cost_") {
                if !self.profiles.contains_key(profile) {
                    continue;
                }
                self.social_cost_of(profile)?
            } else if name == "ratio" {
                self.social_cost_of("NE")? / self.social_cost_of("OPT")?
            } else {
                continue;
            };
            let matches = p.value.cmp_eps(&measured, DEFAULT_EPSILON * (1.0 + measured.to_f64().abs())).is_eq();
            out.push(PredictionCheck { name: name.clone(), predicted: p.value, measured, matches });
        }
        Ok(out)
    }
}

fn exact_alpha(alpha: &Weight) -> Result<Rational> {
    match alpha {
        Weight::Exact(r) if r.is_positive() => Ok(*r),
        _ => Err(Error::Alpha(alpha.to_string())),
    }
}

fn q(v: i128) -> Rational {
    Rational::from_integer(v)
}

/// Star tree with center `0`, edge `(0,1)` of weight 1 and `n-2` edges of
/// weight `2/alpha`. `OPT` is the tree bought by the center; `NE` is the
/// spanning star at node 1, bought by node 1.
pub fn tree_star_family(n: usize, alpha: &Weight) -> Result<InstanceBundle> {
    let a = exact_alpha(alpha)?;
    if n < 3 {
        return Err(Error::Precondition(format!("tree star family needs n >= 3, got {n}")));
    }
    let leaf = q(2) / a;
    let mut edges = vec![(0, 1, Weight::one())];
    edges.extend((2..n).map(|i| (0, i, Weight::Exact(leaf))));
    let host = HostGraph::from_tree(n, edges)?;
    let opt = StrategyProfile::from_owned_edges(n, &(1..n).map(|i| (0, i)).collect::<Vec<_>>())?;
    let ne = StrategyProfile::from_owned_edges(n, &(0..n).filter(|&i| i != 1).map(|i| (1, i)).collect::<Vec<_>>())?;
    let m = q(n as i128 - 2);
    let factor = q(2 * n as i128 - 2) + a;
    let cost_opt = factor * (m * leaf + q(1));
    let cost_ne = factor * (m * (q(1) + leaf) + q(1));
    Ok(InstanceBundle::new("tree-star", host, *alpha)
        .param("n", n)
        .profile("OPT", opt)
        .profile("NE", ne)
        .predict("cost_OPT", Weight::Exact(cost_opt), "(2n+alpha-2)*((n-2)*2/alpha+1)")
        .predict("cost_NE", Weight::Exact(cost_ne), "(2n+alpha-2)*((n-2)*(1+2/alpha)+1)")
        .predict("ratio", Weight::Exact(cost_ne / cost_opt), "((n-2)*(1+2/alpha)+1)/((n-2)*2/alpha+1)")
        .predict("bound", Weight::Exact((a + q(2)) / q(2)), "(alpha+2)/2"))
}

/// Points `v_0..v_n` on a line at positions `0` and `(1+2/alpha)^(i-1)`.
/// `OPT` is the path, `NE` the star at `v_0` bought by `v_0`.
pub fn geometric_path_family(n: usize, alpha: &Weight) -> Result<InstanceBundle> {
    let a = exact_alpha(alpha)?;
    if n < 1 {
        return Err(Error::Precondition("geometric path family needs n >= 1".into()));
    }
    let r = q(1) + q(2) / a;
    let mut pos = vec![q(0)];
    let mut x = q(1);
    for _ in 1..=n {
        pos.push(x);
        x *= r;
    }
    let host = HostGraph::from_points(pos.iter().map(|&p| vec![p]).collect(), q(1))?;
    let nodes = n + 1;
    let path = StrategyProfile::from_owned_edges(nodes, &(1..nodes).map(|i| (i - 1, i)).collect::<Vec<_>>())?;
    let star = StrategyProfile::from_owned_edges(nodes, &(1..nodes).map(|i| (0, i)).collect::<Vec<_>>())?;
    let total: Rational = pos.iter().sum();
    let mut pair_sum = q(0);
    for i in 0..nodes {
        for j in (i + 1)..nodes {
            pair_sum += pos[j] - pos[i];
        }
    }
    let cost_path = a * pos[n] + q(2) * pair_sum;
    let cost_star = a * total + q(2 * n as i128) * total;
    Ok(InstanceBundle::new("geometric-path", host, *alpha)
        .param("n", n)
        .profile("OPT", path)
        .profile("NE", star)
        .predict("cost_OPT", Weight::Exact(cost_path), "alpha*x_n + 2*sum_{i<j}(x_j-x_i)")
        .predict("cost_NE", Weight::Exact(cost_star), "(alpha+2n)*sum_i x_i")
        .predict("ratio", Weight::Exact(cost_star / cost_path), "cost_NE/cost_OPT")
        .predict("bound", Weight::Exact((a + q(2)) / q(2)), "(alpha+2)/2"))
}

/// The geometric path on four nodes.
pub fn four_node_family(alpha: &Weight) -> Result<InstanceBundle> {
    let a = exact_alpha(alpha)?;
    let mut b = geometric_path_family(3, alpha)?;
    b.name = "four-node".into();
    b.params.clear();
    let ratio = (q(3) * a * a * a + q(24) * a * a + q(40) * a + q(24)) / (a * a * a + q(10) * a * a + q(32) * a + q(24));
    Ok(b.predict("ratio", Weight::Exact(ratio), "(3a^3+24a^2+40a+24)/(a^3+10a^2+32a+24)"))
}

/// `2d+1` points under the 1-norm: origin, `e_1`, `-2/alpha e_1` and
/// `+-2/alpha e_i` for `i >= 2`. `OPT` is the star at the origin, `NE` the
/// star at `e_1` bought by its center.
pub fn rd_one_norm_family(d: usize, alpha: &Weight) -> Result<InstanceBundle> {
    let a = exact_alpha(alpha)?;
    if d < 1 {
        return Err(Error::Precondition("dimension must be at least 1".into()));
    }
    let t = q(2) / a;
    let axis = |i: usize, x: Rational| {
        let mut v = vec![q(0); d];
        v[i] = x;
        v
    };
    let mut pts = vec![vec![q(0); d], axis(0, q(1)), axis(0, -t)];
    for i in 1..d {
        pts.push(axis(i, t));
        pts.push(axis(i, -t));
    }
    let n = pts.len();
    let host = HostGraph::from_points(pts, q(1))?;
    let opt = StrategyProfile::from_owned_edges(n, &(1..n).map(|i| (0, i)).collect::<Vec<_>>())?;
    let ne = StrategyProfile::from_owned_edges(n, &(0..n).filter(|&i| i != 1).map(|i| (1, i)).collect::<Vec<_>>())?;
    let m = q(2 * d as i128 - 1);
    let factor = q(2 * n as i128 - 2) + a;
    let cost_opt = factor * (m * t + q(1));
    let cost_ne = factor * (m * (q(1) + t) + q(1));
    Ok(InstanceBundle::new("rd-one-norm", host, *alpha)
        .param("d", d)
        .profile("OPT", opt)
        .profile("NE", ne)
        .predict("cost_OPT", Weight::Exact(cost_opt), "(2n+alpha-2)*((2d-1)*2/alpha+1)")
        .predict("cost_NE", Weight::Exact(cost_ne), "(2n+alpha-2)*((2d-1)*(1+2/alpha)+1)")
        .predict("ratio", Weight::Exact(q(1) + a / (q(2) + a / m)), "1+alpha/(2+alpha/(2d-1))")
        .predict("bound", Weight::Exact((a + q(2)) / q(2)), "(alpha+2)/2"))
}

/// Hub `0`, clique `1..=N`, and `N` leaves per clique vertex. At `alpha = 1`
/// the hub is 1-connected to every node and the `NE` profile omits the
/// hub-leaf edges; below 1 the hub-leaf pairs are 2-edges and `NE` is the
/// subgraph of all 1-edges. `OPT` is computed exactly.
pub fn one_two_lb_family(big_n: usize, alpha: &Weight) -> Result<InstanceBundle> {
    let a = exact_alpha(alpha)?;
    if big_n < 2 {
        return Err(Error::Precondition(format!("N must be at least 2, got {big_n}")));
    }
    if a < Rational::new(1, 2) || a > q(1) {
        return Err(Error::Precondition(format!("alpha = {a} outside [1/2, 1]")));
    }
    let at_one = a == q(1);
    let nn = big_n as i128;
    let n = big_n * big_n + big_n + 1;
    let clique: Vec<usize> = (1..=big_n).collect();
    let leaves_of = |c: usize| -> Vec<usize> { (0..big_n).map(|j| big_n + 1 + (c - 1) * big_n + j).collect() };
    let leaves: Vec<usize> = clique.iter().flat_map(|&c| leaves_of(c)).collect();
    let mut w = vec![vec![Weight::int(2); n]; n];
    for (u, row) in w.iter_mut().enumerate() {
        row[u] = Weight::zero();
    }
    let ones = |u: usize, v: usize, w: &mut Vec<Vec<Weight>>| {
        w[u][v] = Weight::one();
        w[v][u] = Weight::one();
    };
    let mut owned = Vec::new();
    for &c in &clique {
        ones(0, c, &mut w);
        owned.push((0, c));
        for &d in clique.iter().filter(|&&d| d > c) {
            ones(c, d, &mut w);
            owned.push((c, d));
        }
        for l in leaves_of(c) {
            ones(c, l, &mut w);
            owned.push((c, l));
        }
    }
    if at_one {
        for &l in &leaves {
            ones(0, l, &mut w);
        }
    }
    let host = HostGraph::build_one_two(n, w)?;
    let ne = StrategyProfile::from_owned_edges(n, &owned)?;
    let opt = optimum_one_two(&host, alpha)?.to_profile(n)?;
    let edges = q(nn + nn * (nn - 1) / 2 + nn * nn);
    let pair_dist = q(nn + 2 * nn * nn + nn * (nn - 1) / 2 + nn * nn + 2 * nn * nn * (nn - 1) + nn * nn * (nn - 1)
        + 3 * nn * nn * nn * (nn - 1) / 2);
    let cost_ne = a * edges + q(2) * pair_dist;
    let mut b = InstanceBundle::new("one-two-lb", host.clone(), *alpha)
        .param("N", big_n)
        .profile("OPT", opt)
        .profile("NE", ne)
        .predict("cost_NE", Weight::Exact(cost_ne), "alpha*|E| + 2*sum of pair distances in the hub/clique/star graph");
    b.groups.insert("clique".into(), clique);
    b.groups.insert("leaves".into(), leaves);
    if at_one {
        b = b.predict("bound", Weight::ratio(3, 2), "3/2");
    } else {
        let total: Weight = host.pairs().iter().map(|&(u, v)| host.weight(u, v)).sum();
        let full = Weight::Exact(a + q(2)) * total;
        b = b
            .predict("cost_OPT_upper", full, "(alpha+2)*total host weight (complete host)")
            .predict("ratio_vs_upper", Weight::Exact(cost_ne) / full, "cost_NE/cost_OPT_upper")
            .predict("bound", Weight::Exact(q(3) / (a + q(2))), "3/(alpha+2)");
    }
    Ok(b)
}

/// Three nodes with `w(0,1) = 0`, `w(1,2) = 1`, `w(0,2) = (alpha+2)/2`.
/// `NE`: node 0 buys both edges at node 0; `OPT`: the path through node 1.
pub fn general_triangle(alpha: &Weight) -> Result<InstanceBundle> {
    let a = exact_alpha(alpha)?;
    let heavy = Weight::Exact((a + q(2)) / q(2));
    let w = vec![
        vec![Weight::zero(), Weight::zero(), heavy],
        vec![Weight::zero(), Weight::zero(), Weight::one()],
        vec![heavy, Weight::one(), Weight::zero()],
    ];
    let host = HostGraph::build_general(3, w)?.classified();
    let ne = StrategyProfile::from_owned_edges(3, &[(0, 1), (0, 2)])?;
    let opt = StrategyProfile::from_owned_edges(3, &[(0, 1), (1, 2)])?;
    let bound = (a + q(2)) / q(2);
    Ok(InstanceBundle::new("general-triangle", host, *alpha)
        .profile("OPT", opt)
        .profile("NE", ne)
        .predict("cost_OPT", Weight::Exact(a + q(4)), "alpha+4")
        .predict("cost_NE", Weight::Exact((a + q(2)) * (a + q(4)) / q(2)), "(alpha+2)(alpha+4)/2")
        .predict("ratio", Weight::Exact(bound), "(alpha+2)/2")
        .predict("sigma_0_2", Weight::Exact(bound * bound), "((alpha+2)/2)^2")
        .predict("bound", Weight::Exact(bound * bound), "((alpha+2)/2)^2"))
}

fn check_set_cover(universe: &[usize], sets: &[Vec<usize>]) -> Result<()> {
    if universe.is_empty() || sets.is_empty() {
        return Err(Error::Precondition("universe and set family must be non-empty".into()));
    }
    for (i, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return Err(Error::Precondition(format!("set {i} is empty")));
        }
        if let Some(e) = s.iter().find(|e| !universe.contains(e)) {
            return Err(Error::Precondition(format!("set {i} contains {e}, not in the universe")));
        }
    }
    if let Some(e) = universe.iter().find(|e| !sets.iter().any(|s| s.contains(e))) {
        return Err(Error::Precondition(format!("element {e} is not covered")));
    }
    Ok(())
}

fn check_reduction_constants(k: usize, l: Rational, eps: Rational, beta: Rational) -> Result<()> {
    if !l.is_positive() || !eps.is_positive() || !beta.is_positive() {
        return Err(Error::Precondition("L, epsilon and beta must be positive".into()));
    }
    if beta <= q(k as i128) * eps {
        return Err(Error::Precondition(format!("beta = {beta} must exceed k*epsilon = {}", q(k as i128) * eps)));
    }
    if beta * q(3) >= l {
        return Err(Error::Precondition(format!("beta = {beta} must be below L/3")));
    }
    Ok(())
}

/// Size of a smallest subfamily covering the universe.
pub fn min_set_cover_size(universe: &[usize], sets: &[Vec<usize>]) -> Option<usize> {
    let m = sets.len();
    (0u64..(1 << m))
        .filter(|mask| universe.iter().all(|e| (0..m).any(|i| mask >> i & 1 == 1 && sets[i].contains(e))))
        .map(|mask| mask.count_ones() as usize)
        .min()
}

/// Tree-metric reduction from set cover with `alpha = 1`. Nodes: `u = 0`,
/// `c = 1`, set nodes `a_i`, helper nodes `b_i`, element nodes `p_j`.
pub fn set_cover_tree_instance(
    universe: &[usize],
    sets: &[Vec<usize>],
    l: Rational,
    eps: Rational,
    beta: Rational,
) -> Result<InstanceBundle> {
    check_set_cover(universe, sets)?;
    let (k, m) = (universe.len(), sets.len());
    check_reduction_constants(k, l, eps, beta)?;
    let a_nodes: Vec<usize> = (0..m).map(|i| 2 + i).collect();
    let b_nodes: Vec<usize> = (0..m).map(|i| 2 + m + i).collect();
    let p_nodes: Vec<usize> = (0..k).map(|j| 2 + 2 * m + j).collect();
    let n = 2 + 2 * m + k;
    let half = (l - beta) / q(2);
    let mut tree = vec![(0, 1, Weight::Exact(l - eps))];
    for i in 0..m {
        tree.push((1, a_nodes[i], Weight::Exact(eps)));
        tree.push((0, b_nodes[i], Weight::Exact(half)));
    }
    for (j, e) in universe.iter().enumerate() {
        let first = sets.iter().position(|s| s.contains(e)).expect("checked cover");
        tree.push((a_nodes[first], p_nodes[j], Weight::Exact(l)));
    }
    let host = HostGraph::from_tree(n, tree)?;
    let mut owned = vec![(1, 0)];
    for i in 0..m {
        owned.push((b_nodes[i], 0));
        owned.push((b_nodes[i], a_nodes[i]));
    }
    owned.extend(membership_edges(universe, sets, &a_nodes, &p_nodes));
    reduction_bundle("set-cover-tree", host, owned, universe, sets, (a_nodes, b_nodes, p_nodes), (l, eps, beta))
}

fn membership_edges(universe: &[usize], sets: &[Vec<usize>], a: &[usize], p: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        for (j, e) in universe.iter().enumerate() {
            if s.contains(e) {
                out.push((a[i], p[j]));
            }
        }
    }
    out
}

fn reduction_bundle(
    name: &str,
    host: HostGraph,
    owned: Vec<(usize, usize)>,
    universe: &[usize],
    sets: &[Vec<usize>],
    (a_nodes, b_nodes, p_nodes): (Vec<usize>, Vec<usize>, Vec<usize>),
    (l, eps, beta): (Rational, Rational, Rational),
) -> Result<InstanceBundle> {
    let n = host.n();
    let g = StrategyProfile::from_owned_edges(n, &owned)?;
    let min = min_set_cover_size(universe, sets).expect("checked cover");
    let mut b = InstanceBundle::new(name, host, Weight::one())
        .param("L", l)
        .param("epsilon", eps)
        .param("beta", beta)
        .param("k", universe.len())
        .param("m", sets.len())
        .profile("G", g)
        .predict("min_cover_size", Weight::int(min as i128), "size of a minimum set cover (exhaustive)");
    b.designated_agent = Some(0);
    b.groups.insert("a".into(), a_nodes);
    b.groups.insert("b".into(), b_nodes);
    b.groups.insert("p".into(), p_nodes);
    Ok(b)
}

/// Point on the circle of radius `r` from the rational parametrization
/// `((1-t^2)/(1+t^2), 2t/(1+t^2))`.
fn circle_point(r: Rational, t: Rational) -> Vec<Rational> {
    let den = q(1) + t * t;
    vec![r * (q(1) - t * t) / den, r * q(2) * t / den]
}

/// Planar 2-norm reduction from set cover with `alpha = 1`. Nodes: `u = 0`,
/// set nodes `a_i` on a short arc of radius `L`, helper nodes `b_i` at
/// distance `(L-beta)/2` from `u` opposite to `a_i`, element nodes on a
/// short arc of radius `2L`.
pub fn set_cover_points_instance(
    universe: &[usize],
    sets: &[Vec<usize>],
    l: Rational,
    eps: Rational,
    beta: Rational,
) -> Result<InstanceBundle> {
    check_set_cover(universe, sets)?;
    let (k, m) = (universe.len(), sets.len());
    check_reduction_constants(k, l, eps, beta)?;
    // arc length is about 2*t*radius for small t
    let spread = |count: usize, radius: Rational, i: usize| -> Rational {
        if count <= 1 {
            q(0)
        } else {
            eps / (q(2) * radius) * q(i as i128) / q(count as i128 - 1)
        }
    };
    let mut pts = vec![vec![q(0), q(0)]];
    let mut dirs = Vec::new();
    for i in 0..m {
        let unit = circle_point(q(1), spread(m, l, i));
        pts.push(unit.iter().map(|x| x * l).collect());
        dirs.push(unit);
    }
    let half = (l - beta) / q(2);
    for dir in &dirs {
        pts.push(dir.iter().map(|x| -x * half).collect());
    }
    for j in 0..k {
        pts.push(circle_point(q(2) * l, spread(k, q(2) * l, j)));
    }
    let a_nodes: Vec<usize> = (0..m).map(|i| 1 + i).collect();
    let b_nodes: Vec<usize> = (0..m).map(|i| 1 + m + i).collect();
    let p_nodes: Vec<usize> = (0..k).map(|j| 1 + 2 * m + j).collect();
    let host = HostGraph::from_points(pts, q(2))?;
    let tol = 1e-9 * to_f64(l);
    let (lf, ef, hf) = (to_f64(l), to_f64(eps), to_f64(half));
    for i in 0..m {
        let (a, b) = (a_nodes[i], b_nodes[i]);
        check_distance(&host, 0, a, lf, tol)?;
        check_distance(&host, 0, b, hf, tol)?;
        check_distance(&host, b, a, hf + lf, tol)?;
        for &r in &a_nodes {
            if host.weight(a, r).to_f64() > ef + tol {
                return Err(Error::Precondition("set nodes are spread wider than epsilon".into()));
            }
        }
        for &p in &p_nodes {
            let w = host.weight(a, p).to_f64();
            if w < lf - tol || w > lf + ef + tol {
                return Err(Error::Precondition("set-element distance outside [L, L+epsilon]".into()));
            }
        }
    }
    for &p in &p_nodes {
        check_distance(&host, 0, p, 2.0 * lf, tol)?;
    }
    let mut owned = Vec::new();
    for i in 0..m {
        owned.push((b_nodes[i], 0));
        owned.push((b_nodes[i], a_nodes[i]));
    }
    owned.extend(membership_edges(universe, sets, &a_nodes, &p_nodes));
    reduction_bundle("set-cover-points", host, owned, universe, sets, (a_nodes, b_nodes, p_nodes), (l, eps, beta))
}

fn to_f64(r: Rational) -> f64 {
    Weight::Exact(r).to_f64()
}

fn check_distance(host: &HostGraph, u: usize, v: usize, expected: f64, tol: f64) -> Result<()> {
    let w = host.weight(u, v).to_f64();
    if (w - expected).abs() > tol {
        return Err(Error::Precondition(format!("distance ({u},{v}) is {w}, expected {expected}")));
    }
    Ok(())
}

/// Size of a smallest vertex cover.
pub fn min_vertex_cover_size(vertices: usize, edges: &[(usize, usize)]) -> usize {
    (0u64..(1 << vertices))
        .filter(|mask| edges.iter().all(|&(a, b)| mask >> a & 1 == 1 || mask >> b & 1 == 1))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// One-two reduction from vertex cover with `alpha = 1`. Nodes: `u = 0`,
/// vertex nodes `a_i`, then two edge nodes per edge. Every 1-edge is bought
/// by a vertex node (the lower one between two vertex nodes) and `u` buys
/// the 2-edges to the vertex nodes of `cover`.
pub fn vertex_cover_instance(vertices: usize, edges: &[(usize, usize)], cover: &[usize]) -> Result<InstanceBundle> {
    if vertices == 0 || vertices > 30 {
        return Err(Error::Precondition(format!("vertex count {vertices} outside 1..=30")));
    }
    for &(a, b) in edges {
        if a >= vertices || b >= vertices || a == b {
            return Err(Error::Precondition(format!("invalid edge ({a},{b})")));
        }
    }
    if let Some(v) = cover.iter().find(|&&v| v >= vertices) {
        return Err(Error::Precondition(format!("cover vertex {v} out of range")));
    }
    if let Some(&(a, b)) = edges.iter().find(|(a, b)| !cover.contains(a) && !cover.contains(b)) {
        return Err(Error::Precondition(format!("edge ({a},{b}) is not covered")));
    }
    let a_nodes: Vec<usize> = (0..vertices).map(|i| 1 + i).collect();
    let p_nodes: Vec<usize> = (0..edges.len()).map(|j| 1 + vertices + 2 * j).collect();
    let n = 1 + vertices + 2 * edges.len();
    let mut w = vec![vec![Weight::int(2); n]; n];
    for (u, row) in w.iter_mut().enumerate() {
        row[u] = Weight::zero();
    }
    let mut owned = Vec::new();
    let mut one = |x: usize, y: usize| {
        w[x][y] = Weight::one();
        w[y][x] = Weight::one();
        owned.push((x, y));
    };
    for i in 0..vertices {
        for j in (i + 1)..vertices {
            one(a_nodes[i], a_nodes[j]);
        }
    }
    for (j, &(x, y)) in edges.iter().enumerate() {
        for v in [x, y] {
            one(a_nodes[v], p_nodes[j]);
            one(a_nodes[v], p_nodes[j] + 1);
        }
    }
    let mut cover_sorted: Vec<usize> = cover.to_vec();
    cover_sorted.sort_unstable();
    cover_sorted.dedup();
    owned.extend(cover_sorted.iter().map(|&v| (0, a_nodes[v])));
    let host = HostGraph::build_one_two(n, w)?;
    let s = StrategyProfile::from_owned_edges(n, &owned)?;
    let min = min_vertex_cover_size(vertices, edges);
    let mut b = InstanceBundle::new("vertex-cover", host, Weight::one())
        .param("vertices", vertices)
        .param("edges", edges.len())
        .param("cover", cover_sorted.len())
        .profile("G", s)
        .predict("min_vertex_cover_size", Weight::int(min as i128), "size of a minimum vertex cover (exhaustive)")
        .predict(
            "is_ne",
            Weight::int((cover_sorted.len() == min) as i128),
            "1 iff the bought cover is minimum",
        );
    b.designated_agent = Some(0);
    b.groups.insert("a".into(), a_nodes);
    b.groups.insert("p".into(), p_nodes.iter().flat_map(|&p| [p, p + 1]).collect());
    Ok(b)
}

/// Ten points in the plane under the 1-norm.
pub fn brc_points() -> HostGraph {
    let coords = [(3, 0), (0, 3), (2, 2), (0, 2), (1, 1), (4, 3), (2, 0), (4, 1), (1, 4), (1, 0)];
    HostGraph::from_points(coords.iter().map(|&(x, y)| vec![q(x), q(y)]).collect(), Rational::one())
        .expect("fixed point set is valid")
}

/// Names accepted by [`by_name`].
pub const FAMILY_NAMES: [&str; 6] = ["tree-star", "geometric-path", "four-node", "rd-one-norm", "one-two-lb", "general-triangle"];

/// Builds a lower-bound family from its name and a size parameter
/// (`n` for tree-star and geometric-path, `d` for rd-one-norm, `N` for one-two-lb).
pub fn by_name(name: &str, size: Option<usize>, alpha: &Weight) -> Result<InstanceBundle> {
    let need = |what: &str| size.ok_or_else(|| Error::Precondition(format!("family {name} needs --{what}")));
    match name {
        "tree-star" => tree_star_family(need("n")?, alpha),
        "geometric-path" => geometric_path_family(need("n")?, alpha),
        "four-node" => four_node_family(alpha),
        "rd-one-norm" => rd_one_norm_family(need("d")?, alpha),
        "one-two-lb" => one_two_lb_family(need("N")?, alpha),
        "general-triangle" => general_triangle(alpha),
        _ => Err(Error::Precondition(format!("unknown family `{name}` (known: {})", FAMILY_NAMES.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_star_costs() {
        let b = tree_star_family(5, &Weight::int(2)).unwrap();
        assert_eq!(b.predictions["cost_OPT"].value, Weight::int(40));
        assert_eq!(b.predictions["cost_NE"].value, Weight::int(70));
        assert_eq!(b.predictions["ratio"].value, Weight::ratio(7, 4));
        assert!(b.verify_predictions().unwrap().iter().all(|c| c.matches));
        assert_eq!(b.host.weight(2, 3), Weight::int(2));
        let big = tree_star_family(50, &Weight::int(2)).unwrap();
        assert_eq!(big.predictions["ratio"].value, Weight::ratio(97, 49));
        assert!(tree_star_family(2, &Weight::int(2)).is_err());
    }

    #[test]
    fn path_and_four_node() {
        let b = geometric_path_family(2, &Weight::int(2)).unwrap();
        assert_eq!(b.social_cost_of("OPT").unwrap(), Weight::int(12));
        assert_eq!(b.social_cost_of("NE").unwrap(), Weight::int(18));
        let f = four_node_family(&Weight::one()).unwrap();
        assert_eq!(f.social_cost_of("NE").unwrap(), Weight::int(91));
        assert_eq!(f.social_cost_of("OPT").unwrap(), Weight::int(67));
        assert!(f.verify_predictions().unwrap().iter().all(|c| c.matches));
        let f2 = four_node_family(&Weight::int(2)).unwrap();
        assert_eq!(f2.predictions["ratio"].value, Weight::ratio(28, 17));
    }

    #[test]
    fn one_norm_points() {
        let b = rd_one_norm_family(2, &Weight::int(2)).unwrap();
        assert_eq!(b.host.weight(1, 2), Weight::int(2));
        assert_eq!(b.predictions["ratio"].value, Weight::ratio(7, 4));
        assert!(b.verify_predictions().unwrap().iter().all(|c| c.matches));
        let b3 = rd_one_norm_family(3, &Weight::int(2)).unwrap();
        assert_eq!(b3.predictions["ratio"].value, Weight::ratio(11, 6));
    }

    #[test]
    fn triangle() {
        let b = general_triangle(&Weight::int(2)).unwrap();
        assert_eq!(b.social_cost_of("OPT").unwrap(), Weight::int(6));
        assert_eq!(b.social_cost_of("NE").unwrap(), Weight::int(12));
        assert!(b.verify_predictions().unwrap().iter().all(|c| c.matches));
    }

    #[test]
    fn one_two_lb_shape() {
        let b = one_two_lb_family(2, &Weight::one()).unwrap();
        assert_eq!(b.host.n(), 7);
        assert!(b.verify_predictions().unwrap().iter().all(|c| c.matches));
        assert!(one_two_lb_family(2, &Weight::ratio(1, 4)).is_err());
        let b = one_two_lb_family(2, &Weight::ratio(3, 4)).unwrap();
        assert!(b.verify_predictions().unwrap().iter().all(|c| c.matches));
    }

    #[test]
    fn brc_weights() {
        let h = brc_points();
        assert_eq!(h.weight(0, 9), Weight::int(2));
        assert_eq!(h.weight(4, 2), Weight::int(2));
        assert!(h.check_metric().is_empty());
    }

    #[test]
    fn reduction_constraints() {
        let u = [1, 2];
        let x = vec![vec![1, 2], vec![2]];
        let l = q(100);
        let e = Rational::new(1, 100);
        assert!(set_cover_tree_instance(&u, &x, l, e, q(1)).is_ok());
        assert!(set_cover_points_instance(&u, &x, l, e, Rational::new(1, 50)).is_err());
        assert!(set_cover_points_instance(&u, &[vec![1]], l, e, q(1)).is_err());
        assert!(vertex_cover_instance(2, &[(0, 1)], &[]).is_err());
        assert_eq!(min_set_cover_size(&u, &x), Some(1));
        assert_eq!(min_vertex_cover_size(3, &[(0, 1), (1, 2), (0, 2)]), 2);
    }
}
