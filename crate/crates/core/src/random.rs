//! Random hosts and profiles for experiments and property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::game::StrategyProfile;
use crate::hostgraph::HostGraph;
use crate::scalar::floyd_warshall;
use crate::weight::Weight;

fn to_rows(n: usize, flat: &[i128]) -> Vec<Vec<Weight>> {
    flat.chunks(n).map(|r| r.iter().map(|&x| Weight::int(x)).collect()).collect()
}

fn random_matrix<R: Rng>(n: usize, rng: &mut R, lo: i128, hi: i128) -> Vec<i128> {
    let mut w = vec![0i128; n * n];
    for u in 0..n {
        for v in (u + 1)..n {
            let x = rng.gen_range(lo..=hi);
            w[u * n + v] = x;
            w[v * n + u] = x;
        }
    }
    w
}

/// Shortest-path closure of random integer weights in `1..=max_weight`.
pub fn metric_host<R: Rng>(n: usize, max_weight: i128, rng: &mut R) -> HostGraph {
    let mut w = random_matrix(n, rng, 1, max_weight.max(1));
    floyd_warshall(n, &mut w);
    HostGraph::build_metric(n, to_rows(n, &w)).expect("shortest-path closure is metric")
}

/// Every off-diagonal weight is 1 or 2 with equal probability.
pub fn one_two_host<R: Rng>(n: usize, rng: &mut R) -> HostGraph {
    let w = random_matrix(n, rng, 1, 2);
    HostGraph::build_one_two(n, to_rows(n, &w)).expect("valid one-two matrix")
}

/// Random integer weights in `lo..=hi`, without any triangle condition.
pub fn general_host<R: Rng>(n: usize, lo: i128, hi: i128, rng: &mut R) -> HostGraph {
    let w = random_matrix(n, rng, lo, hi);
    HostGraph::build_general(n, to_rows(n, &w)).expect("valid general matrix")
}

/// General host that violates the triangle inequality somewhere.
pub fn non_metric_host<R: Rng>(n: usize, lo: i128, hi: i128, rng: &mut R) -> HostGraph {
    loop {
        let h = general_host(n, lo, hi, rng);
        if !h.check_metric().is_empty() {
            return h;
        }
    }
}

/// Random labelled tree: node `order[i]` attaches to an earlier node.
pub fn random_tree_edges<R: Rng>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    (1..n).map(|i| (order[rng.gen_range(0..i)], order[i])).collect()
}

/// Tree metric of a random tree with weights in `1..=max_weight`.
pub fn tree_host<R: Rng>(n: usize, max_weight: i128, rng: &mut R) -> HostGraph {
    let edges = random_tree_edges(n, rng)
        .into_iter()
        .map(|(u, v)| (u, v, Weight::int(rng.gen_range(1..=max_weight.max(1)))))
        .collect();
    HostGraph::from_tree(n, edges).expect("random tree is a tree")
}

/// Connected single-owner profile: a random spanning tree plus each other
/// pair with probability `extra`, every edge bought by a random endpoint.
pub fn connected_profile<R: Rng>(n: usize, extra: f64, rng: &mut R) -> StrategyProfile {
    let mut edges = random_tree_edges(n, rng);
    let mut present = vec![false; n * n];
    for &(u, v) in &edges {
        present[u * n + v] = true;
        present[v * n + u] = true;
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if !present[u * n + v] && rng.gen_bool(extra) {
                edges.push((u, v));
            }
        }
    }
    let owned: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(u, v)| if rng.gen_bool(0.5) { (u, v) } else { (v, u) })
        .collect();
    StrategyProfile::from_owned_edges(n, &owned).expect("edges in range")
}
