//! Improving-move dynamics, cycle detection and cycle certificates.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::equilibria::{check_cap, AgentView, Move, MoveKind, DEFAULT_BR_CAP};
use crate::error::{Error, Result};
use crate::game::StrategyProfile;
use crate::hostgraph::HostGraph;
use crate::random::connected_profile;
use crate::scalar::{improves, tied, with_kernel, AnyKernel, Kernel, Scalar};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// The mover switches to its exact best response.
    ExactBr,
    /// The mover applies its best single add, delete or swap.
    GreedySingle,
}

impl FromStr for Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-br" | "br" => Ok(Rule::ExactBr),
            "greedy-single" | "greedy" => Ok(Rule::GreedySingle),
            _ => Err(Error::parse(format!("unknown rule `{s}` (expected exact-br or greedy-single)"))),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::ExactBr => "exact-br",
            Rule::GreedySingle => "greedy-single",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Scheduler {
    RoundRobin,
    Random { seed: u64 },
}

impl FromStr for Scheduler {
    type Err = Error;
    /// `round-robin` or `random` (seed 0), `random:<seed>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "round-robin" => Ok(Scheduler::RoundRobin),
            None if s == "random" => Ok(Scheduler::Random { seed: 0 }),
            Some(("random", seed)) => seed
                .parse()
                .map(|seed| Scheduler::Random { seed })
                .map_err(|_| Error::parse(format!("bad scheduler seed `{seed}`"))),
            _ => Err(Error::parse(format!("unknown scheduler `{s}` (expected round-robin or random[:seed])"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub agent: usize,
    #[serde(rename = "move")]
    pub mv: Move,
    pub profile_hash: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleStep {
    /// Profile before the move.
    pub profile: StrategyProfile,
    pub mover: usize,
    pub strategy: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleCertificate {
    pub rule: Rule,
    pub alpha: Weight,
    pub steps: Vec<CycleStep>,
}

impl CycleCertificate {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn movers(&self) -> BTreeSet<usize> {
        self.steps.iter().map(|s| s.mover).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Outcome {
    Converged { profile: StrategyProfile },
    Cycle { certificate: CycleCertificate },
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DynamicsTrace {
    pub initial: StrategyProfile,
    pub rule: Rule,
    pub scheduler: Scheduler,
    pub max_steps: usize,
    pub steps: Vec<TraceStep>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CycleVerdict {
    Accepted,
    Rejected { step: usize, reason: String },
}

impl CycleVerdict {
    pub fn accepted(&self) -> bool {
        matches!(self, CycleVerdict::Accepted)
    }
}

pub fn profile_hash(s: &StrategyProfile) -> u64 {
    let mut h = DefaultHasher::new();
    s.hash(&mut h);
    h.finish()
}

/// The rule's move for `u`, if it strictly improves.
fn rule_move<T: Scalar>(k: &Kernel<T>, s: &StrategyProfile, u: usize, rule: Rule) -> Option<Move> {
    let view = AgentView::new(k, s, u);
    match rule {
        Rule::ExactBr => {
            let before = view.current_cost();
            let (best, cost) = view.best_response();
            improves(cost, before, k.eps).then(|| view.to_move(MoveKind::Strategy { targets: best }, before, cost))
        }
        Rule::GreedySingle => {
            let (before, moves) = view.improving(false);
            moves.into_iter().next().map(|m| view.to_move(m.kind, before, m.cost))
        }
    }
}

/// Dynamics in which only `agents` are scheduled; convergence means every
/// scheduled agent is stable.
fn run_kernel<T: Scalar>(
    k: &Kernel<T>,
    init: &StrategyProfile,
    rule: Rule,
    scheduler: Scheduler,
    max_steps: usize,
    agents: &[usize],
) -> Result<DynamicsTrace> {
    let n = agents.len();
    let mut rng = match scheduler {
        Scheduler::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        Scheduler::RoundRobin => None,
    };
    let mut history = vec![init.clone()];
    let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
    seen.entry(profile_hash(init)).or_default().push(0);
    let mut steps = Vec::new();
    let mut stable = vec![false; n];
    let mut stable_count = 0;
    let mut next_agent = 0;
    let outcome = loop {
        if stable_count == n {
            break Outcome::Converged { profile: history.last().cloned().unwrap_or_else(|| init.clone()) };
        }
        if steps.len() >= max_steps {
            break Outcome::BudgetExhausted;
        }
        let slot = match rng.as_mut() {
            Some(r) => r.gen_range(0..n),
            None => {
                let slot = next_agent;
                next_agent = (next_agent + 1) % n;
                slot
            }
        };
        let u = agents[slot];
        let cur = history.last().expect("history is never empty");
        let Some(mv) = rule_move(k, cur, u, rule) else {
            if !stable[slot] {
                stable[slot] = true;
                stable_count += 1;
            }
            continue;
        };
        let next = mv.apply(cur)?;
        let hash = profile_hash(&next);
        steps.push(TraceStep { agent: u, mv, profile_hash: hash });
        stable.iter_mut().for_each(|x| *x = false);
        stable_count = 0;
        let earlier = seen.get(&hash).and_then(|idx| idx.iter().copied().find(|&i| history[i] == next));
        history.push(next);
        if let Some(start) = earlier {
            let cycle = (start..history.len() - 1)
                .map(|i| CycleStep {
                    profile: history[i].clone(),
                    mover: steps[i].agent,
                    strategy: history[i + 1].strategy(steps[i].agent).clone(),
                })
                .collect();
            let alpha = Weight::zero();
            break Outcome::Cycle { certificate: CycleCertificate { rule, alpha, steps: cycle } };
        }
        seen.entry(hash).or_default().push(history.len() - 1);
    };
    Ok(DynamicsTrace { initial: init.clone(), rule, scheduler, max_steps, steps, outcome })
}

/// Runs improving dynamics from `init` until convergence, a repeated
/// profile, or `max_steps` moves.
pub fn run(
    host: &HostGraph,
    alpha: &Weight,
    init: &StrategyProfile,
    rule: Rule,
    scheduler: Scheduler,
    max_steps: usize,
    cap: usize,
) -> Result<DynamicsTrace> {
    init.check_host(host)?;
    if rule == Rule::ExactBr {
        check_cap("exact best response", host.n(), cap)?;
    }
    let kernel = AnyKernel::new(host, alpha)?;
    let agents: Vec<usize> = (0..host.n()).collect();
    let mut trace = with_kernel!(&kernel, k => run_kernel(k, init, rule, scheduler, max_steps, &agents))?;
    if let Outcome::Cycle { certificate } = &mut trace.outcome {
        certificate.alpha = *alpha;
    }
    Ok(trace)
}

fn is_single_move(old: &BTreeSet<usize>, new: &BTreeSet<usize>) -> bool {
    let added = new.difference(old).count();
    let removed = old.difference(new).count();
    matches!((added, removed), (1, 0) | (0, 1) | (1, 1))
}

fn verify_kernel<T: Scalar>(k: &Kernel<T>, cert: &CycleCertificate, rule: Rule) -> CycleVerdict {
    let reject = |step: usize, reason: String| CycleVerdict::Rejected { step, reason };
    let len = cert.steps.len();
    if len < 2 {
        return reject(0, format!("a cycle needs at least two steps, got {len}"));
    }
    for (i, step) in cert.steps.iter().enumerate() {
        if step.profile.n() != k.n {
            return reject(i, format!("profile has {} agents, host has {}", step.profile.n(), k.n));
        }
        if step.mover >= k.n {
            return reject(i, format!("mover {} out of range", step.mover));
        }
        let Ok(next) = step.profile.with_strategy(step.mover, step.strategy.clone()) else {
            return reject(i, "strategy targets are invalid".into());
        };
        let view = AgentView::new(k, &step.profile, step.mover);
        let before = view.current_cost();
        let new: Vec<usize> = step.strategy.iter().copied().collect();
        let after = view.cost_of(&new);
        if !improves(after, before, k.eps) {
            return reject(i, format!("move of agent {} is not strictly improving", step.mover));
        }
        match rule {
            Rule::ExactBr => {
                let (_, best) = view.best_response();
                if !tied(after, best, k.eps) {
                    return reject(i, format!("strategy of agent {} is not a best response", step.mover));
                }
            }
            Rule::GreedySingle => {
                if !is_single_move(step.profile.strategy(step.mover), &step.strategy) {
                    return reject(i, format!("agent {} changes more than one edge", step.mover));
                }
            }
        }
        let expected = &cert.steps[(i + 1) % len].profile;
        if &next != expected {
            let what = if i + 1 == len { "sequence does not close" } else { "next profile does not follow" };
            return reject(i, what.into());
        }
    }
    CycleVerdict::Accepted
}

/// Checks a cycle certificate: every step strictly improves its mover
/// (best-response steps must also be cost-minimal, greedy steps a single
/// add, delete or swap) and the last step returns to the first profile.
pub fn verify_cycle(host: &HostGraph, alpha: &Weight, cert: &CycleCertificate, rule: Rule) -> CycleVerdict {
    match AnyKernel::new(host, alpha) {
        Ok(kernel) => with_kernel!(&kernel, k => verify_kernel(k, cert, rule)),
        Err(e) => CycleVerdict::Rejected { step: 0, reason: e.to_string() },
    }
}

/// Step budget of one walk in [`cycle_search`].
const SEARCH_WALK_STEPS: usize = 200;

/// Random-restart search for improving-move cycles of length at most
/// `max_len`. Each restart draws a random connected single-owner profile,
/// runs randomly scheduled dynamics from it and then round-robin dynamics
/// restricted to every pair of agents; restarts alternate between the two
/// rules. Every returned certificate has been checked with [`verify_cycle`].
pub fn cycle_search(
    host: &HostGraph,
    alpha_grid: &[Weight],
    max_len: usize,
    restarts: usize,
    seed: u64,
) -> Result<Vec<CycleCertificate>> {
    check_cap("exact best response", host.n(), DEFAULT_BR_CAP)?;
    let n = host.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<CycleCertificate> = Vec::new();
    if max_len < 2 || n < 2 {
        return Ok(found);
    }
    let everyone: Vec<usize> = (0..n).collect();
    for alpha in alpha_grid {
        let kernel = AnyKernel::new(host, alpha)?;
        for r in 0..restarts {
            let rule = if r % 2 == 0 { Rule::ExactBr } else { Rule::GreedySingle };
            let init = connected_profile(n, rng.gen_range(0.0..0.5), &mut rng);
            let scheduler = Scheduler::Random { seed: rng.gen() };
            let mut traces = vec![with_kernel!(&kernel, k => run_kernel(k, &init, rule, scheduler, SEARCH_WALK_STEPS, &everyone))?];
            for u in 0..n {
                for v in (u + 1)..n {
                    let pair = [u, v];
                    traces.push(with_kernel!(&kernel, k => run_kernel(k, &init, rule, Scheduler::RoundRobin, 2 * max_len, &pair))?);
                }
            }
            for trace in traces {
                if let Outcome::Cycle { mut certificate } = trace.outcome {
                    certificate.alpha = *alpha;
                    if certificate.len() <= max_len
                        && !found.iter().any(|c| same_cycle(c, &certificate))
                        && with_kernel!(&kernel, k => verify_kernel(k, &certificate, rule)).accepted()
                    {
                        found.push(certificate);
                    }
                }
            }
        }
    }
    Ok(found)
}

/// Equal up to rotation, for the same rule and price.
fn same_cycle(a: &CycleCertificate, b: &CycleCertificate) -> bool {
    if a.rule != b.rule || a.alpha != b.alpha || a.len() != b.len() {
        return false;
    }
    let len = a.len();
    (0..len).any(|shift| (0..len).all(|i| a.steps[i] == b.steps[(i + shift) % len]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hostgraph::int_matrix;

    fn two_nodes() -> HostGraph {
        HostGraph::build_general(2, int_matrix(&[&[0, 1], &[1, 0]])).unwrap()
    }

    #[test]
    fn two_nodes_converge_to_single_edge() {
        let h = two_nodes();
        let t = run(&h, &Weight::int(2), &StrategyProfile::empty(2), Rule::ExactBr, Scheduler::RoundRobin, 10, DEFAULT_BR_CAP)
            .unwrap();
        assert!(t.steps.len() <= 2);
        match t.outcome {
            Outcome::Converged { profile } => assert_eq!(profile.edges(), vec![(0, 1)]),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn budget_is_respected() {
        let h = two_nodes();
        let t = run(&h, &Weight::one(), &StrategyProfile::empty(2), Rule::GreedySingle, Scheduler::RoundRobin, 0, 20)
            .unwrap();
        assert_eq!(t.outcome, Outcome::BudgetExhausted);
    }

    #[test]
    fn parses_rules_and_schedulers() {
        assert_eq!("exact-br".parse::<Rule>().unwrap(), Rule::ExactBr);
        assert_eq!("random:5".parse::<Scheduler>().unwrap(), Scheduler::Random { seed: 5 });
        assert_eq!("round-robin".parse::<Scheduler>().unwrap(), Scheduler::RoundRobin);
        assert!("sideways".parse::<Scheduler>().is_err());
    }

    #[test]
    fn short_certificates_are_rejected() {
        let h = two_nodes();
        let cert = CycleCertificate { rule: Rule::ExactBr, alpha: Weight::one(), steps: vec![] };
        assert!(!verify_cycle(&h, &Weight::one(), &cert, Rule::ExactBr).accepted());
        assert!(cycle_search(&h, &[Weight::one()], 1, 5, 0).unwrap().is_empty());
    }

    #[test]
    fn non_improving_step_is_reported() {
        let h = two_nodes();
        let empty = StrategyProfile::empty(2);
        let one = StrategyProfile::from_sets(vec![vec![1], vec![]]).unwrap();
        let cert = CycleCertificate {
            rule: Rule::GreedySingle,
            alpha: Weight::one(),
            steps: vec![
                CycleStep { profile: empty.clone(), mover: 0, strategy: BTreeSet::from([1]) },
                CycleStep { profile: one, mover: 0, strategy: BTreeSet::new() },
            ],
        };
        assert_eq!(
            verify_cycle(&h, &Weight::one(), &cert, Rule::GreedySingle),
            CycleVerdict::Rejected { step: 1, reason: "move of agent 0 is not strictly improving".into() }
        );
    }
}
