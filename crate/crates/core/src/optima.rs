//! Social optima and minimum-weight spanners.

use serde::Serialize;

use crate::equilibria::{check_cap, is_nash_kernel, DEFAULT_BR_CAP};
use crate::error::{Error, Result};
use crate::game::{edge_set_distances, stretch_of, StrategyProfile};
use crate::hostgraph::{HostGraph, HostKind};
use crate::scalar::{check_alpha, improves, tied, with_kernel, AnyKernel, Kernel, Scalar};
use crate::weight::Weight;

pub const DEFAULT_OPT_CAP: usize = 7;
/// Largest edge count whose `2^|E|` ownership orientations are searched.
pub const DEFAULT_ORIENTATION_CAP: usize = 18;

/// A set of host edges, each paid for once.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeSet {
    pub edges: Vec<(usize, usize)>,
    pub total_weight: Weight,
    pub social_cost: Option<Weight>,
    pub alpha: Option<Weight>,
}

impl EdgeSet {
    /// Normalizes `edges` to sorted `(min, max)` pairs and evaluates them.
    pub fn new(host: &HostGraph, edges: &[(usize, usize)], alpha: Option<&Weight>) -> Result<EdgeSet> {
        let n = host.n();
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::Precondition(format!("({u},{v}) is not a host edge")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        let total_weight: Weight = norm.iter().map(|&(u, v)| host.weight(u, v)).sum();
        let social_cost = match alpha {
            Some(a) => {
                check_alpha(a)?;
                let dist: Weight = edge_set_distances(host, &norm).into_iter().sum();
                Some(*a * total_weight + dist)
            }
            None => None,
        };
        Ok(EdgeSet { edges: norm, total_weight, social_cost, alpha: alpha.copied() })
    }

    /// Single-owner profile in which the lower endpoint buys each edge.
    pub fn to_profile(&self, n: usize) -> Result<StrategyProfile> {
        StrategyProfile::from_owned_edges(n, &self.edges)
    }

    pub fn stretch(&self, host: &HostGraph) -> Weight {
        stretch_of(host, &edge_set_distances(host, &self.edges))
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }
}

/// `d'(i,j) = min(d(i,j), d(i,a) + w + d(b,j), d(i,b) + w + d(a,j))`.
fn add_edge<T: Scalar>(n: usize, src: &[T], dst: &mut [T], a: usize, b: usize, w: T) {
    for i in 0..n {
        let via_a = src[i * n + a].plus(w);
        let via_b = src[i * n + b].plus(w);
        for j in 0..n {
            let c1 = via_a.plus(src[b * n + j]);
            let c2 = via_b.plus(src[a * n + j]);
            dst[i * n + j] = src[i * n + j].min_of(c1).min_of(c2);
        }
    }
}

fn empty_distances<T: Scalar>(n: usize) -> Vec<T> {
    let mut d = vec![T::INF; n * n];
    for i in 0..n {
        d[i * n + i] = T::ZERO;
    }
    d
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect()
}

/// Include/exclude search over host edges with incremental distance updates.
struct EdgeSearch<'a, T, F> {
    k: &'a Kernel<T>,
    pairs: Vec<(usize, usize)>,
    bufs: Vec<Vec<T>>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    best_obj: T,
    found: bool,
    /// Objective of a complete edge set from its weight and distances, or
    /// `None` when infeasible.
    leaf: F,
    /// Lower bound on the objective from the weight chosen so far.
    partial: fn(&Kernel<T>, T) -> T,
}

impl<T: Scalar, F: Fn(T, &[T]) -> Option<T>> EdgeSearch<'_, T, F> {
    fn consider(&mut self, obj: T) {
        let eps = self.k.eps;
        let better = !self.found
            || improves(obj, self.best_obj, eps)
            || (tied(obj, self.best_obj, eps) && (self.chosen.len(), &self.chosen) < (self.best.len(), &self.best));
        if better {
            self.found = true;
            self.best_obj = obj;
            self.best.clone_from(&self.chosen);
        }
    }

    fn dfs(&mut self, i: usize, weight: T) {
        let eps = self.k.eps;
        if self.found && improves(self.best_obj, (self.partial)(self.k, weight), eps) {
            return;
        }
        if i == self.pairs.len() {
            if let Some(obj) = (self.leaf)(weight, &self.bufs[i]) {
                self.consider(obj);
            }
            return;
        }
        let n = self.k.n;
        let (a, b) = self.pairs[i];
        let w = self.k.weight(a, b);
        {
            let (lo, hi) = self.bufs.split_at_mut(i + 1);
            add_edge(n, &lo[i], &mut hi[0], a, b, w);
        }
        self.chosen.push(i);
        self.dfs(i + 1, weight.plus(w));
        self.chosen.pop();
        {
            let (lo, hi) = self.bufs.split_at_mut(i + 1);
            hi[0].copy_from_slice(&lo[i]);
        }
        self.dfs(i + 1, weight);
    }
}

fn run_search<T: Scalar, F: Fn(T, &[T]) -> Option<T>>(
    k: &Kernel<T>,
    leaf: F,
    partial: fn(&Kernel<T>, T) -> T,
) -> Option<Vec<(usize, usize)>> {
    let n = k.n;
    let pairs = all_pairs(n);
    let m = pairs.len();
    let mut search = EdgeSearch {
        k,
        bufs: vec![empty_distances(n); m + 1],
        pairs,
        chosen: Vec::new(),
        best: Vec::new(),
        best_obj: T::INF,
        found: false,
        leaf,
        partial,
    };
    search.dfs(0, T::ZERO);
    let pairs = &search.pairs;
    search.found.then(|| search.best.iter().map(|&i| pairs[i]).collect())
}

fn optimum_kernel<T: Scalar>(k: &Kernel<T>) -> Option<Vec<(usize, usize)>> {
    run_search(
        k,
        |w, d| Some(k.cost(w, d.iter().fold(T::ZERO, |acc, &x| acc.plus(x)))),
        |k, w| k.cost(w, T::ZERO),
    )
}

fn spanner_kernel<T: Scalar>(k: &Kernel<T>, bound: Option<(i128, i128)>) -> Option<Vec<(usize, usize)>> {
    let dh = k.apsp(all_pairs(k.n).into_iter());
    let bound = bound.map(|(p, q)| (T::from_i128(p), T::from_i128(q)));
    let eps = k.eps;
    run_search(
        k,
        |w, d| {
            let ok = d.iter().zip(&dh).all(|(&dg, &h)| match bound {
                None => !dg.is_inf(),
                Some((p, q)) => !dg.is_inf() && q.times(dg) <= p.times(h).plus(eps),
            });
            ok.then_some(w)
        },
        |_, w| w,
    )
}

/// Edge set minimizing `alpha * total_weight + sum of all distances`;
/// ties go to fewer edges, then the lexicographically smallest edge list.
pub fn optimum_exact(host: &HostGraph, alpha: &Weight, cap: usize) -> Result<EdgeSet> {
    check_cap("exact social optimum", host.n(), cap)?;
    let kernel = AnyKernel::new(host, alpha)?;
    let edges = with_kernel!(&kernel, k => optimum_kernel(k)).unwrap_or_default();
    EdgeSet::new(host, &edges, Some(alpha))
}

/// Complete edge set minus every 2-edge closing a triangle with two 1-edges.
pub fn optimum_one_two(host: &HostGraph, alpha: &Weight) -> Result<EdgeSet> {
    if host.kind() != &HostKind::OneTwo {
        return Err(Error::WrongKind { expected: "one_two", actual: host.kind().name().into() });
    }
    check_alpha(alpha)?;
    if *alpha > Weight::one() {
        return Err(Error::Precondition(format!("alpha = {alpha} exceeds 1")));
    }
    let n = host.n();
    let one = Weight::one();
    let edges: Vec<(usize, usize)> = all_pairs(n)
        .into_iter()
        .filter(|&(u, v)| {
            host.weight(u, v) == one
                || !(0..n).any(|x| x != u && x != v && host.weight(u, x) == one && host.weight(x, v) == one)
        })
        .collect();
    EdgeSet::new(host, &edges, Some(alpha))
}

/// The defining tree of a tree-metric host.
pub fn optimum_tree(host: &HostGraph, alpha: Option<&Weight>) -> Result<EdgeSet> {
    match host.kind() {
        HostKind::Tree { edges } => {
            let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.u, e.v)).collect();
            EdgeSet::new(host, &pairs, alpha)
        }
        other => Err(Error::WrongKind { expected: "tree", actual: other.name().into() }),
    }
}

/// Minimum-weight edge set with `d_G(u,v) <= k * d_H(u,v)` for all pairs.
/// `k = Infinite` only asks for connectivity.
pub fn min_weight_spanner(host: &HostGraph, k: &Weight, cap: usize) -> Result<EdgeSet> {
    check_cap("minimum-weight spanner", host.n(), cap)?;
    let (num, den) = match k {
        Weight::Infinite => (None, None),
        Weight::Exact(r) if *r >= num_rational::Ratio::from_integer(1) => (Some(*r.numer()), Some(*r.denom())),
        Weight::Exact(_) => return Err(Error::Precondition(format!("stretch bound {k} is below 1"))),
        Weight::Float(_) => return Err(Error::Precondition("stretch bound must be exact or inf".into())),
    };
    let kernel = AnyKernel::with_multipliers(host, &Weight::one());
    let bound = num.zip(den);
    let edges = with_kernel!(&kernel, kk => spanner_kernel(kk, bound));
    match edges {
        Some(e) => EdgeSet::new(host, &e, None),
        None => Err(Error::Precondition(format!("no subgraph of the host is a {k}-spanner"))),
    }
}

/// Searches single-owner orientations of `spanner` for one that is a Nash
/// equilibrium at `alpha`; orientations are tried in binary order with the
/// lower endpoint owning first.
pub fn spanner_ne_ownership(
    host: &HostGraph,
    spanner: &EdgeSet,
    alpha: &Weight,
    cap: usize,
) -> Result<Option<StrategyProfile>> {
    if host.kind() != &HostKind::OneTwo {
        return Err(Error::WrongKind { expected: "one_two", actual: host.kind().name().into() });
    }
    check_alpha(alpha)?;
    if *alpha < Weight::ratio(1, 2) || *alpha > Weight::one() {
        return Err(Error::Precondition(format!("alpha = {alpha} outside [1/2, 1]")));
    }
    check_cap("spanner orientation search", spanner.edges.len(), cap)?;
    check_cap("NE certification", host.n(), DEFAULT_BR_CAP)?;
    let kernel = AnyKernel::new(host, alpha)?;
    let m = spanner.edges.len();
    for mask in 0u64..(1u64 << m) {
        let owned: Vec<(usize, usize)> = spanner
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| if mask >> i & 1 == 0 { (u, v) } else { (v, u) })
            .collect();
        let s = StrategyProfile::from_owned_edges(host.n(), &owned)?;
        if with_kernel!(&kernel, k => is_nash_kernel(k, &s)) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hostgraph::int_matrix;

    fn k3(a: i64, b: i64, c: i64) -> HostGraph {
        HostGraph::build_general(3, int_matrix(&[&[0, a, c], &[a, 0, b], &[c, b, 0]])).unwrap()
    }

    #[test]
    fn one_two_triangle_optimum() {
        let h = HostGraph::build_one_two(3, k3(1, 1, 2).weights()).unwrap();
        let alpha = Weight::ratio(2, 5);
        let opt = optimum_exact(&h, &alpha, DEFAULT_OPT_CAP).unwrap();
        assert_eq!(opt.edges, vec![(0, 1), (1, 2)]);
        assert_eq!(opt.social_cost, Some(Weight::ratio(44, 5)));
        let alg = optimum_one_two(&h, &alpha).unwrap();
        assert_eq!(alg.edges, opt.edges);
        let all2 = HostGraph::build_one_two(3, k3(2, 2, 2).weights()).unwrap();
        assert_eq!(optimum_one_two(&all2, &alpha).unwrap().edges.len(), 3);
        assert!(optimum_one_two(&h, &Weight::int(2)).is_err());
        assert!(optimum_one_two(&k3(1, 1, 1), &alpha).is_err());
    }

    #[test]
    fn zero_one_triangle_optimum() {
        // w(0,1)=0, w(1,2)=1, w(0,2)=2
        let h = k3(0, 1, 2);
        let opt = optimum_exact(&h, &Weight::int(2), DEFAULT_OPT_CAP).unwrap();
        assert_eq!(opt.edges, vec![(0, 1), (1, 2)]);
        assert_eq!(opt.social_cost, Some(Weight::int(6)));
    }

    #[test]
    fn tree_optimum_is_defining_tree() {
        let h = HostGraph::from_tree(4, vec![(0, 1, Weight::int(2)), (1, 2, Weight::int(1)), (1, 3, Weight::int(3))]).unwrap();
        let alpha = Weight::one();
        let t = optimum_tree(&h, Some(&alpha)).unwrap();
        let e = optimum_exact(&h, &alpha, DEFAULT_OPT_CAP).unwrap();
        assert_eq!(t, e);
        assert!(optimum_tree(&k3(1, 1, 1), None).is_err());
    }

    #[test]
    fn spanners() {
        let h = HostGraph::build_one_two(3, k3(1, 1, 2).weights()).unwrap();
        let s = min_weight_spanner(&h, &Weight::ratio(3, 2), DEFAULT_OPT_CAP).unwrap();
        assert_eq!(s.edges, vec![(0, 1), (1, 2)]);
        let mst = min_weight_spanner(&k3(3, 1, 2), &Weight::Infinite, DEFAULT_OPT_CAP).unwrap();
        assert_eq!(mst.total_weight, Weight::int(3));
        // every edge is tight only on its own pair
        let exact = min_weight_spanner(&k3(2, 2, 3), &Weight::one(), DEFAULT_OPT_CAP).unwrap();
        assert_eq!(exact.edges.len(), 3);
        let tight = min_weight_spanner(&k3(1, 1, 2), &Weight::one(), DEFAULT_OPT_CAP).unwrap();
        assert_eq!(tight.edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn spanner_orientation_on_triangle() {
        let h = HostGraph::build_one_two(3, k3(1, 1, 2).weights()).unwrap();
        let sp = min_weight_spanner(&h, &Weight::ratio(3, 2), DEFAULT_OPT_CAP).unwrap();
        let s = spanner_ne_ownership(&h, &sp, &Weight::ratio(3, 4), DEFAULT_ORIENTATION_CAP).unwrap();
        assert!(s.is_some());
        assert!(spanner_ne_ownership(&h, &sp, &Weight::ratio(1, 4), DEFAULT_ORIENTATION_CAP).is_err());
    }

    #[test]
    fn incremental_update_matches_floyd_warshall() {
        let h = HostGraph::build_general(4, int_matrix(&[&[0, 5, 1, 9], &[5, 0, 2, 1], &[1, 2, 0, 7], &[9, 1, 7, 0]])).unwrap();
        let edges = [(0, 2), (2, 1), (1, 3)];
        let direct = edge_set_distances(&h, &edges);
        let mut d: Vec<i128> = empty_distances(4);
        for &(a, b) in &edges {
            let mut next = d.clone();
            add_edge(4, &d, &mut next, a, b, h.weight(a, b).as_rational().unwrap().to_integer());
            d = next;
        }
        let via: Vec<Weight> = d.into_iter().map(|x| x.to_weight(1)).collect();
        assert_eq!(via, direct);
    }
}
