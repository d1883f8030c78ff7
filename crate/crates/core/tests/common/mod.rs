//! Brute-force reference implementations used as oracles by the test targets.
#![allow(dead_code)]

use gncg::{HostGraph, StrategyProfile, Weight};

/// Floyd-Warshall over public weights.
pub fn distances(host: &HostGraph, edges: &[(usize, usize)]) -> Vec<Vec<Weight>> {
    let n = host.n();
    let mut d = vec![vec![Weight::Infinite; n]; n];
    for (u, row) in d.iter_mut().enumerate() {
        row[u] = Weight::zero();
    }
    for &(u, v) in edges {
        let w = host.weight(u, v);
        if w < d[u][v] {
            d[u][v] = w;
            d[v][u] = w;
        }
    }
    for x in 0..n {
        for u in 0..n {
            if d[u][x] == Weight::Infinite {
                continue;
            }
            for v in 0..n {
                let via = d[u][x] + d[x][v];
                if via < d[u][v] {
                    d[u][v] = via;
                }
            }
        }
    }
    d
}

pub fn host_distances(host: &HostGraph) -> Vec<Vec<Weight>> {
    distances(host, &host.pairs())
}

fn owned_edges(s: &StrategyProfile) -> Vec<(usize, usize)> {
    (0..s.n()).flat_map(|u| s.strategy(u).iter().map(move |&v| (u, v))).collect()
}

pub fn agent_cost(host: &HostGraph, s: &StrategyProfile, u: usize, alpha: &Weight) -> Weight {
    let d = distances(host, &owned_edges(s));
    let bought: Weight = s.strategy(u).iter().map(|&v| host.weight(u, v)).sum();
    let dist: Weight = d[u].iter().copied().sum();
    *alpha * bought + dist
}

pub fn social_cost(host: &HostGraph, s: &StrategyProfile, alpha: &Weight) -> Weight {
    (0..s.n()).map(|u| agent_cost(host, s, u, alpha)).sum()
}

/// Social cost of an edge set with every edge paid once.
pub fn edge_set_cost(host: &HostGraph, edges: &[(usize, usize)], alpha: &Weight) -> Weight {
    let d = distances(host, edges);
    let bought: Weight = edges.iter().map(|&(u, v)| host.weight(u, v)).sum();
    let dist: Weight = d.iter().flatten().copied().sum();
    *alpha * bought + dist
}

/// Cheapest strategy cost of `u` over all subsets of the other agents.
pub fn best_cost(host: &HostGraph, s: &StrategyProfile, u: usize, alpha: &Weight) -> Weight {
    let others: Vec<usize> = (0..s.n()).filter(|&v| v != u).collect();
    let mut best = Weight::Infinite;
    for mask in 0u32..(1 << others.len()) {
        let targets = others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
        let t = s.with_strategy(u, targets).expect("valid targets");
        let c = agent_cost(host, &t, u, alpha);
        if c < best {
            best = c;
        }
    }
    best
}

/// Nash check by trying every strategy of every agent.
pub fn is_nash(host: &HostGraph, s: &StrategyProfile, alpha: &Weight) -> bool {
    (0..s.n()).all(|u| !(best_cost(host, s, u, alpha) < agent_cost(host, s, u, alpha)))
}

/// Minimum social cost over all edge subsets.
pub fn optimum_cost(host: &HostGraph, alpha: &Weight) -> Weight {
    let pairs = host.pairs();
    let mut best = Weight::Infinite;
    for mask in 0u64..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let c = edge_set_cost(host, &edges, alpha);
        if c < best {
            best = c;
        }
    }
    best
}

/// Largest `d_G / d_H` over pairs with `d_H > 0`.
pub fn stretch(host: &HostGraph, edges: &[(usize, usize)]) -> Weight {
    let dh = host_distances(host);
    let dg = distances(host, edges);
    let mut worst = Weight::one();
    for (u, v) in host.pairs() {
        if dh[u][v].is_zero() {
            if !dg[u][v].is_zero() {
                return Weight::Infinite;
            }
            continue;
        }
        let r = dg[u][v] / dh[u][v];
        if r > worst {
            worst = r;
        }
    }
    worst
}

pub fn is_acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}
