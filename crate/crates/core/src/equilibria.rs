//! Improving moves, best responses and equilibrium certification.
//!
//! All searches for one agent `u` share a precomputed view: with `D'` the
//! distances of the network without `u`'s own edges, node `v` is reached
//! from `u` at `min_x w(u,x) + D'(x,v)` where `x` ranges over `u`'s targets
//! and the nodes that already bought an edge to `u`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::StrategyProfile;
use crate::hostgraph::HostGraph;
use crate::scalar::{improves, tied, with_kernel, AnyKernel, Kernel, Scalar};
use crate::weight::Weight;

pub const DEFAULT_BR_CAP: usize = 20;

/// Number of unordered pairs up to which every single-owner profile is enumerated.
pub const DEFAULT_ENUMERATION_PAIRS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MoveKind {
    Add { target: usize },
    Delete { target: usize },
    Swap { from: usize, to: usize },
    Strategy { targets: Vec<usize> },
}

impl MoveKind {
    fn rank(&self) -> (u8, usize, usize) {
        match self {
            MoveKind::Add { target } => (0, *target, 0),
            MoveKind::Delete { target } => (1, *target, 0),
            MoveKind::Swap { from, to } => (2, *to, *from),
            MoveKind::Strategy { .. } => (3, 0, 0),
        }
    }

    /// The strategy that results from applying this move to `current`.
    pub fn apply_to(&self, current: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut s = current.clone();
        match self {
            MoveKind::Add { target } => {
                s.insert(*target);
            }
            MoveKind::Delete { target } => {
                s.remove(target);
            }
            MoveKind::Swap { from, to } => {
                s.remove(from);
                s.insert(*to);
            }
            MoveKind::Strategy { targets } => s = targets.iter().copied().collect(),
        }
        s
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveKind::Add { target } => write!(f, "add {target}"),
            MoveKind::Delete { target } => write!(f, "delete {target}"),
            MoveKind::Swap { from, to } => write!(f, "swap {from}->{to}"),
            MoveKind::Strategy { targets } => write!(f, "strategy {targets:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Move {
    pub agent: usize,
    pub kind: MoveKind,
    pub cost_before: Weight,
    pub cost_after: Weight,
    pub delta: Weight,
}

impl Move {
    pub fn apply(&self, s: &StrategyProfile) -> Result<StrategyProfile> {
        s.with_strategy(self.agent, self.kind.apply_to(s.strategy(self.agent)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Level {
    AE,
    GE,
    NE,
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AE" => Ok(Level::AE),
            "GE" => Ok(Level::GE),
            "NE" => Ok(Level::NE),
            _ => Err(Error::parse(format!("unknown level `{s}` (expected AE, GE or NE)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub stable: bool,
    pub witness: Option<Move>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub level: Level,
    pub ae: Verdict,
    pub ge: Verdict,
    /// Present only when the exact best response was run.
    pub ne: Option<Verdict>,
    pub beta_ge: Weight,
    pub beta_ne: Option<Weight>,
    pub ne_certified_exactly: bool,
    /// Tolerance used for float hosts; absent in exact mode.
    pub epsilon: Option<f64>,
}

impl EquilibriumReport {
    /// Verdict at the requested level.
    pub fn stable(&self) -> bool {
        match self.level {
            Level::AE => self.ae.stable,
            Level::GE => self.ge.stable,
            Level::NE => self.ne.as_ref().map(|v| v.stable).unwrap_or(false),
        }
    }
}

/// Candidate single move in kernel units.
#[derive(Clone, Debug)]
pub(crate) struct RawMove<T> {
    pub kind: MoveKind,
    pub cost: T,
}

/// Everything needed to price any strategy of agent `u` against fixed opponents.
pub(crate) struct AgentView<'k, T> {
    k: &'k Kernel<T>,
    u: usize,
    /// `rows[x*n + v] = w(u,x) + D'(x,v)`.
    rows: Vec<T>,
    /// Distances provided by edges other agents bought to `u`.
    base: Vec<T>,
    current: Vec<usize>,
}

impl<'k, T: Scalar> AgentView<'k, T> {
    pub fn new(k: &'k Kernel<T>, s: &StrategyProfile, u: usize) -> Self {
        let n = k.n;
        let d = k.apsp(s.owned_edges().filter(|&(a, _)| a != u));
        let mut rows = vec![T::INF; n * n];
        for x in (0..n).filter(|&x| x != u) {
            let wx = k.weight(u, x);
            for v in 0..n {
                rows[x * n + v] = wx.plus(d[x * n + v]);
            }
        }
        let mut base = vec![T::INF; n];
        base[u] = T::ZERO;
        for a in (0..n).filter(|&a| a != u && s.owns(a, u)) {
            min_into(&mut base, &rows[a * n..(a + 1) * n]);
        }
        AgentView { k, u, rows, base, current: s.strategy(u).iter().copied().collect() }
    }

    fn row(&self, x: usize) -> &[T] {
        let n = self.k.n;
        &self.rows[x * n..(x + 1) * n]
    }

    fn owned(&self, set: &[usize]) -> T {
        set.iter().fold(T::ZERO, |acc, &x| acc.plus(self.k.weight(self.u, x)))
    }

    fn reach(&self, set: &[usize]) -> Vec<T> {
        let mut m = self.base.clone();
        for &x in set {
            min_into(&mut m, self.row(x));
        }
        m
    }

    fn total(&self, owned: T, reach: &[T]) -> T {
        self.k.cost(owned, sum(reach))
    }

    pub fn cost_of(&self, set: &[usize]) -> T {
        self.total(self.owned(set), &self.reach(set))
    }

    pub fn current_cost(&self) -> T {
        self.cost_of(&self.current)
    }

    /// Exhaustive minimum over all target sets with deterministic tie-breaking.
    pub fn best_response(&self) -> (Vec<usize>, T) {
        let n = self.k.n;
        let xs: Vec<usize> = (0..n).filter(|&x| x != self.u).collect();
        let m = xs.len();
        let mut sufmin = vec![self.base.clone(); m + 1];
        for i in (0..m).rev() {
            let mut next = sufmin[i + 1].clone();
            min_into(&mut next, self.row(xs[i]));
            sufmin[i] = next;
        }
        let mut search = BrSearch {
            view: self,
            xs: &xs,
            sufmin: &sufmin,
            bufs: vec![self.base.clone(); m + 1],
            chosen: Vec::with_capacity(m),
            best: self.current.clone(),
            best_cost: self.current_cost(),
        };
        search.dfs(0, T::ZERO);
        (search.best, search.best_cost)
    }

    /// All add, delete and swap candidates with their resulting cost.
    pub fn single_moves(&self, adds_only: bool) -> Vec<RawMove<T>> {
        let n = self.k.n;
        let cur = &self.current;
        let owned = self.owned(cur);
        let reach = self.reach(cur);
        let outside: Vec<usize> = (0..n).filter(|&x| x != self.u && !cur.contains(&x)).collect();
        let mut out = Vec::new();
        for &x in &outside {
            let cost = self.k.cost(owned.plus(self.k.weight(self.u, x)), sum_min(&reach, self.row(x)));
            out.push(RawMove { kind: MoveKind::Add { target: x }, cost });
        }
        if adds_only {
            return out;
        }
        for (i, &x) in cur.iter().enumerate() {
            let rest: Vec<usize> = cur.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &y)| y).collect();
            let rest_owned = self.owned(&rest);
            let rest_reach = self.reach(&rest);
            out.push(RawMove { kind: MoveKind::Delete { target: x }, cost: self.total(rest_owned, &rest_reach) });
            for &y in &outside {
                let cost = self.k.cost(rest_owned.plus(self.k.weight(self.u, y)), sum_min(&rest_reach, self.row(y)));
                out.push(RawMove { kind: MoveKind::Swap { from: x, to: y }, cost });
            }
        }
        out
    }

    /// Strictly improving single moves, best first.
    pub fn improving(&self, adds_only: bool) -> (T, Vec<RawMove<T>>) {
        let before = self.current_cost();
        let eps = self.k.eps;
        let mut moves: Vec<RawMove<T>> =
            self.single_moves(adds_only).into_iter().filter(|m| improves(m.cost, before, eps)).collect();
        moves.sort_by(|a, b| greedy_order(a, b, eps));
        (before, moves)
    }

    pub fn to_move(&self, kind: MoveKind, before: T, after: T) -> Move {
        let cost_before = self.k.cost_weight(before);
        let cost_after = self.k.cost_weight(after);
        let delta = if cost_before.is_finite() { cost_before - cost_after } else { Weight::Infinite };
        Move { agent: self.u, kind, cost_before, cost_after, delta }
    }
}

fn greedy_order<T: Scalar>(a: &RawMove<T>, b: &RawMove<T>, eps: T) -> Ordering {
    if tied(a.cost, b.cost, eps) {
        a.kind.rank().cmp(&b.kind.rank())
    } else if a.cost < b.cost {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

struct BrSearch<'a, 'k, T> {
    view: &'a AgentView<'k, T>,
    xs: &'a [usize],
    sufmin: &'a [Vec<T>],
    bufs: Vec<Vec<T>>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    best_cost: T,
}

impl<T: Scalar> BrSearch<'_, '_, T> {
    fn dfs(&mut self, i: usize, owned: T) {
        let k = self.view.k;
        let eps = k.eps;
        let bound = k.cost(owned, sum_min(&self.bufs[i], &self.sufmin[i]));
        if improves(self.best_cost, bound, eps) {
            return;
        }
        if i == self.xs.len() {
            let better = improves(bound, self.best_cost, eps)
                || (tied(bound, self.best_cost, eps)
                    && (self.chosen.len(), &self.chosen).cmp(&(self.best.len(), &self.best)) == Ordering::Less);
            if better {
                self.best.clone_from(&self.chosen);
                self.best_cost = bound;
            }
            return;
        }
        let x = self.xs[i];
        {
            let (lo, hi) = self.bufs.split_at_mut(i + 1);
            hi[0].copy_from_slice(&lo[i]);
        }
        self.dfs(i + 1, owned);
        {
            let (lo, hi) = self.bufs.split_at_mut(i + 1);
            let row = self.view.row(x);
            for ((dst, &a), &b) in hi[0].iter_mut().zip(lo[i].iter()).zip(row) {
                *dst = a.min_of(b);
            }
        }
        self.chosen.push(x);
        self.dfs(i + 1, owned.plus(k.weight(self.view.u, x)));
        self.chosen.pop();
    }
}

#[inline]
fn min_into<T: Scalar>(acc: &mut [T], row: &[T]) {
    for (a, &b) in acc.iter_mut().zip(row) {
        *a = a.min_of(b);
    }
}

#[inline]
fn sum<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::ZERO, |acc, &x| acc.plus(x))
}

#[inline]
fn sum_min<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::ZERO, |acc, (&x, &y)| acc.plus(x.min_of(y)))
}

fn check_inputs(host: &HostGraph, s: &StrategyProfile, alpha: &Weight) -> Result<AnyKernel> {
    s.check_host(host)?;
    AnyKernel::new(host, alpha)
}

fn check_agent(host: &HostGraph, u: usize) -> Result<()> {
    if u >= host.n() {
        return Err(Error::Profile(format!("agent {u} outside 0..{}", host.n())));
    }
    Ok(())
}

pub(crate) fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::CapExceeded { what, size, cap });
    }
    Ok(())
}

/// Strictly improving adds, deletes and swaps for `u`, best first.
pub fn improving_single_moves(host: &HostGraph, s: &StrategyProfile, u: usize, alpha: &Weight) -> Result<Vec<Move>> {
    improving_moves(host, s, u, alpha, false)
}

/// Strictly improving single-edge purchases for `u`, best first.
pub fn improving_additions(host: &HostGraph, s: &StrategyProfile, u: usize, alpha: &Weight) -> Result<Vec<Move>> {
    improving_moves(host, s, u, alpha, true)
}

fn improving_moves(host: &HostGraph, s: &StrategyProfile, u: usize, alpha: &Weight, adds_only: bool) -> Result<Vec<Move>> {
    check_agent(host, u)?;
    let kernel = check_inputs(host, s, alpha)?;
    Ok(with_kernel!(&kernel, k => {
        let view = AgentView::new(k, s, u);
        let (before, moves) = view.improving(adds_only);
        moves.into_iter().map(|m| view.to_move(m.kind, before, m.cost)).collect()
    }))
}

/// Exact best response of `u`: minimum cost, then fewest edges, then the
/// lexicographically smallest target list.
pub fn best_response_exact(
    host: &HostGraph,
    s: &StrategyProfile,
    u: usize,
    alpha: &Weight,
    cap: usize,
) -> Result<(BTreeSet<usize>, Weight)> {
    check_agent(host, u)?;
    check_cap("exact best response", host.n(), cap)?;
    let kernel = check_inputs(host, s, alpha)?;
    Ok(with_kernel!(&kernel, k => {
        let (best, cost) = AgentView::new(k, s, u).best_response();
        (best.into_iter().collect(), k.cost_weight(cost))
    }))
}

/// Repeatedly applies `u`'s best single move until none improves.
pub fn greedy_stable_response(host: &HostGraph, s: &StrategyProfile, u: usize, alpha: &Weight) -> Result<BTreeSet<usize>> {
    check_agent(host, u)?;
    let kernel = check_inputs(host, s, alpha)?;
    let mut cur = s.clone();
    loop {
        let next = with_kernel!(&kernel, k => {
            let view = AgentView::new(k, &cur, u);
            view.improving(false).1.into_iter().next().map(|m| m.kind)
        });
        match next {
            Some(kind) => {
                let strat = kind.apply_to(cur.strategy(u));
                cur.set_strategy(u, strat)?;
            }
            None => return Ok(cur.strategy(u).clone()),
        }
    }
}

/// Per-agent ratio `current / best` with the division conventions of [`Weight`].
fn ratio<T: Scalar>(k: &Kernel<T>, current: T, best: T) -> Weight {
    let best = best.min_of(current);
    k.cost_weight(current) / k.cost_weight(best)
}

fn max_weight(a: Weight, b: Weight) -> Weight {
    if b > a {
        b
    } else {
        a
    }
}

fn certify_kernel<T: Scalar>(k: &Kernel<T>, s: &StrategyProfile, level: Level) -> EquilibriumReport {
    let n = k.n;
    let mut ae = Verdict { stable: true, witness: None };
    let mut ge = Verdict { stable: true, witness: None };
    let mut ne = (level == Level::NE).then_some(Verdict { stable: true, witness: None });
    let mut beta_ge = Weight::one();
    let mut beta_ne = (level == Level::NE).then_some(Weight::one());
    for u in 0..n {
        let view = AgentView::new(k, s, u);
        let (before, moves) = view.improving(false);
        if ae.stable {
            if let Some(m) = moves.iter().find(|m| matches!(m.kind, MoveKind::Add { .. })) {
                ae = Verdict { stable: false, witness: Some(view.to_move(m.kind.clone(), before, m.cost)) };
            }
        }
        if let Some(m) = moves.first() {
            if ge.stable {
                ge = Verdict { stable: false, witness: Some(view.to_move(m.kind.clone(), before, m.cost)) };
            }
            beta_ge = max_weight(beta_ge, ratio(k, before, m.cost));
        }
        if let (Some(verdict), Some(beta)) = (ne.as_mut(), beta_ne.as_mut()) {
            let (best, cost) = view.best_response();
            if improves(cost, before, k.eps) {
                if verdict.stable {
                    *verdict = Verdict {
                        stable: false,
                        witness: Some(view.to_move(MoveKind::Strategy { targets: best }, before, cost)),
                    };
                }
                *beta = max_weight(*beta, ratio(k, before, cost));
            }
        }
    }
    EquilibriumReport {
        level,
        ae,
        ge,
        ne_certified_exactly: ne.is_some(),
        ne,
        beta_ge,
        beta_ne,
        epsilon: (k.eps_f64 > 0.0).then_some(k.eps_f64),
    }
}

/// Certifies `s` at the requested level. AE and GE verdicts are always
/// included; the NE verdict requires `n <= cap`.
pub fn certify(host: &HostGraph, s: &StrategyProfile, alpha: &Weight, level: Level, cap: usize) -> Result<EquilibriumReport> {
    if level == Level::NE {
        check_cap("NE certification", host.n(), cap)?;
    }
    let kernel = check_inputs(host, s, alpha)?;
    Ok(with_kernel!(&kernel, k => certify_kernel(k, s, level)))
}

/// `(beta_ge, beta_ne)`.
pub fn approx_factors(host: &HostGraph, s: &StrategyProfile, alpha: &Weight, cap: usize) -> Result<(Weight, Weight)> {
    let r = certify(host, s, alpha, Level::NE, cap)?;
    Ok((r.beta_ge, r.beta_ne.unwrap_or(Weight::one())))
}

pub(crate) fn is_nash_kernel<T: Scalar>(k: &Kernel<T>, s: &StrategyProfile) -> bool {
    (0..k.n).all(|u| {
        let view = AgentView::new(k, s, u);
        let before = view.current_cost();
        if view.single_moves(false).iter().any(|m| improves(m.cost, before, k.eps)) {
            return false;
        }
        !improves(view.best_response().1, before, k.eps)
    })
}

pub fn is_nash(host: &HostGraph, s: &StrategyProfile, alpha: &Weight, cap: usize) -> Result<bool> {
    check_cap("NE certification", host.n(), cap)?;
    let kernel = check_inputs(host, s, alpha)?;
    Ok(with_kernel!(&kernel, k => is_nash_kernel(k, s)))
}

/// Every single-owner profile in `{absent, lower owns, higher owns}^pairs` order.
pub fn single_owner_profiles(n: usize, max_pairs: usize) -> Result<impl Iterator<Item = StrategyProfile>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
    check_cap("single-owner profile enumeration", pairs.len(), max_pairs)?;
    let total = 3usize.pow(pairs.len() as u32);
    Ok((0..total).map(move |mut code| {
        let mut s = StrategyProfile::empty(n);
        let mut sets = vec![BTreeSet::new(); n];
        for &(u, v) in &pairs {
            match code % 3 {
                1 => {
                    sets[u].insert(v);
                }
                2 => {
                    sets[v].insert(u);
                }
                _ => {}
            }
            code /= 3;
        }
        for (u, set) in sets.into_iter().enumerate() {
            s.set_strategy(u, set).expect("targets in range");
        }
        s
    }))
}

/// All single-owner Nash equilibria of a small host.
pub fn enumerate_nash_equilibria(host: &HostGraph, alpha: &Weight, max_pairs: usize) -> Result<Vec<StrategyProfile>> {
    let profiles = single_owner_profiles(host.n(), max_pairs)?;
    let kernel = AnyKernel::new(host, alpha)?;
    Ok(with_kernel!(&kernel, k => profiles.filter(|s| is_nash_kernel(k, s)).collect()))
}
