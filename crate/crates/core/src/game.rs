//! Strategy profiles, induced networks, agent and social cost.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hostgraph::HostGraph;
use crate::scalar::{with_kernel, AnyKernel};
use crate::weight::Weight;

/// Per-agent target sets `S_u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct StrategyProfile {
    strategies: Vec<BTreeSet<usize>>,
}

impl StrategyProfile {
    /// Profile in which nobody buys anything.
    pub fn empty(n: usize) -> Self {
        StrategyProfile { strategies: vec![BTreeSet::new(); n] }
    }

    pub fn from_sets(sets: Vec<Vec<usize>>) -> Result<Self> {
        let n = sets.len();
        let mut strategies = Vec::with_capacity(n);
        for (u, targets) in sets.into_iter().enumerate() {
            let mut s = BTreeSet::new();
            for v in targets {
                if v >= n {
                    return Err(Error::Profile(format!("agent {u} targets {v}, outside 0..{n}")));
                }
                if v == u {
                    return Err(Error::Profile(format!("agent {u} targets itself")));
                }
                s.insert(v);
            }
            strategies.push(s);
        }
        Ok(StrategyProfile { strategies })
    }

    /// Single-owner profile: for each `(a, b)` agent `a` buys the edge.
    pub fn from_owned_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut sets = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n {
                return Err(Error::Profile(format!("owner {a} outside 0..{n}")));
            }
            sets[a].push(b);
        }
        StrategyProfile::from_sets(sets)
    }

    pub fn n(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategy(&self, u: usize) -> &BTreeSet<usize> {
        &self.strategies[u]
    }

    pub fn strategies(&self) -> &[BTreeSet<usize>] {
        &self.strategies
    }

    pub fn set_strategy(&mut self, u: usize, targets: BTreeSet<usize>) -> Result<()> {
        let n = self.n();
        if let Some(&v) = targets.iter().find(|&&v| v >= n || v == u) {
            return Err(Error::Profile(format!("agent {u} cannot target {v}")));
        }
        self.strategies[u] = targets;
        Ok(())
    }

    pub fn with_strategy(&self, u: usize, targets: BTreeSet<usize>) -> Result<Self> {
        let mut s = self.clone();
        s.set_strategy(u, targets)?;
        Ok(s)
    }

    pub fn owns(&self, u: usize, v: usize) -> bool {
        self.strategies[u].contains(&v)
    }

    /// Every `(owner, target)` pair.
    pub fn owned_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.strategies.iter().enumerate().flat_map(|(u, s)| s.iter().map(move |&v| (u, v)))
    }

    /// Undirected edge set `E(s)` as sorted `(min, max)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let set: BTreeSet<(usize, usize)> = self.owned_edges().map(|(u, v)| (u.min(v), u.max(v))).collect();
        set.into_iter().collect()
    }

    /// Edges bought by both endpoints.
    pub fn double_owned(&self) -> Vec<(usize, usize)> {
        self.owned_edges().filter(|&(u, v)| u < v && self.owns(v, u)).collect()
    }

    pub fn is_single_owner(&self) -> bool {
        self.double_owned().is_empty()
    }

    pub fn to_sets(&self) -> Vec<Vec<usize>> {
        self.strategies.iter().map(|s| s.iter().copied().collect()).collect()
    }

    pub(crate) fn check_host(&self, host: &HostGraph) -> Result<()> {
        if self.n() != host.n() {
            return Err(Error::Profile(format!("profile has {} agents, host has {} nodes", self.n(), host.n())));
        }
        Ok(())
    }
}

impl TryFrom<Vec<Vec<usize>>> for StrategyProfile {
    type Error = Error;
    fn try_from(sets: Vec<Vec<usize>>) -> Result<Self> {
        StrategyProfile::from_sets(sets)
    }
}

impl From<StrategyProfile> for Vec<Vec<usize>> {
    fn from(s: StrategyProfile) -> Self {
        s.to_sets()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ownership {
    Lower,
    Higher,
    Both,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetworkEdge {
    pub u: usize,
    pub v: usize,
    pub weight: Weight,
    pub owner: Ownership,
}

/// Undirected weighted network `G(s)` with its distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    n: usize,
    edges: Vec<NetworkEdge>,
    dist: Vec<Weight>,
}

impl Network {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[NetworkEdge] {
        &self.edges
    }

    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    pub fn has_double_ownership(&self) -> bool {
        self.edges.iter().any(|e| e.owner == Ownership::Both)
    }

    pub fn distance(&self, u: usize, v: usize) -> Weight {
        self.dist[u * self.n + v]
    }

    /// Row-major distance matrix, `Infinite` where no path exists.
    pub fn distances(&self) -> &[Weight] {
        &self.dist
    }

    pub fn distance_rows(&self) -> Vec<Vec<Weight>> {
        self.dist.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn distance_sum(&self, u: usize) -> Weight {
        (0..self.n).map(|v| self.distance(u, v)).sum()
    }

    pub fn is_connected(&self) -> bool {
        self.dist.iter().all(|d| d.is_finite())
    }

    pub fn is_acyclic(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    /// Largest distance between two nodes (`Infinite` if disconnected).
    pub fn diameter(&self) -> Weight {
        self.dist.iter().copied().fold(Weight::zero(), |a, b| if b > a { b } else { a })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub edge_cost: Weight,
    pub distance_cost: Weight,
    pub total: Weight,
}

/// Distances of an edge set over host weights, as public weights.
pub(crate) fn edge_set_distances(host: &HostGraph, edges: &[(usize, usize)]) -> Vec<Weight> {
    let kernel = AnyKernel::with_multipliers(host, &Weight::one());
    with_kernel!(&kernel, k => {
        k.apsp(edges.iter().copied()).into_iter().map(|d| k.dist_weight(d)).collect()
    })
}

pub fn induced_network(host: &HostGraph, s: &StrategyProfile) -> Result<Network> {
    s.check_host(host)?;
    let edges: Vec<NetworkEdge> = s
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let owner = match (s.owns(u, v), s.owns(v, u)) {
                (true, true) => Ownership::Both,
                (true, false) => Ownership::Lower,
                _ => Ownership::Higher,
            };
            NetworkEdge { u, v, weight: host.weight(u, v), owner }
        })
        .collect();
    let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.u, e.v)).collect();
    let dist = edge_set_distances(host, &pairs);
    Ok(Network { n: host.n(), edges, dist })
}

pub fn agent_cost(host: &HostGraph, s: &StrategyProfile, u: usize, alpha: &Weight) -> Result<CostBreakdown> {
    let g = induced_network(host, s)?;
    agent_cost_in(host, s, &g, u, alpha)
}

/// Agent cost when the induced network is already available.
pub fn agent_cost_in(host: &HostGraph, s: &StrategyProfile, g: &Network, u: usize, alpha: &Weight) -> Result<CostBreakdown> {
    crate::scalar::check_alpha(alpha)?;
    if u >= host.n() {
        return Err(Error::Profile(format!("agent {u} outside 0..{}", host.n())));
    }
    let owned: Weight = s.strategy(u).iter().map(|&v| host.weight(u, v)).sum();
    let edge_cost = *alpha * owned;
    let distance_cost = g.distance_sum(u);
    Ok(CostBreakdown { edge_cost, distance_cost, total: edge_cost + distance_cost })
}

pub fn agent_costs(host: &HostGraph, s: &StrategyProfile, alpha: &Weight) -> Result<Vec<CostBreakdown>> {
    let g = induced_network(host, s)?;
    (0..host.n()).map(|u| agent_cost_in(host, s, &g, u, alpha)).collect()
}

pub fn social_cost(host: &HostGraph, s: &StrategyProfile, alpha: &Weight) -> Result<Weight> {
    Ok(agent_costs(host, s, alpha)?.into_iter().map(|c| c.total).sum())
}

/// `max d_G(u,v) / d_H(u,v)` over pairs; pairs at host distance zero must
/// also be at network distance zero, otherwise the stretch is infinite.
pub fn stretch(host: &HostGraph, g: &Network) -> Weight {
    stretch_of(host, g.distances())
}

pub(crate) fn stretch_of(host: &HostGraph, dist: &[Weight]) -> Weight {
    let n = host.n();
    let mut worst = Weight::one();
    for u in 0..n {
        for v in (u + 1)..n {
            let dg = dist[u * n + v];
            let dh = host.host_distance(u, v);
            if dh.is_zero() {
                if !dg.is_zero() {
                    return Weight::Infinite;
                }
                continue;
            }
            if !dg.is_finite() {
                return Weight::Infinite;
            }
            let r = dg / dh;
            if r > worst {
                worst = r;
            }
        }
    }
    worst
}

/// Pair cost ratio `(alpha*w*x + 2*d_G) / (alpha*w*x' + 2*d_G')` of the pair
/// `(u, v)` between two profiles, where `x` is the number of owners of the
/// edge `(u, v)`.
pub fn pair_sigma(
    host: &HostGraph,
    s: &StrategyProfile,
    reference: &StrategyProfile,
    u: usize,
    v: usize,
    alpha: &Weight,
) -> Result<Weight> {
    let owners = |p: &StrategyProfile| Weight::int(p.owns(u, v) as i128 + p.owns(v, u) as i128);
    let pair = |p: &StrategyProfile| -> Result<Weight> {
        let g = induced_network(host, p)?;
        Ok(*alpha * host.weight(u, v) * owners(p) + Weight::int(2) * g.distance(u, v))
    };
    Ok(pair(s)? / pair(reference)?)
}
