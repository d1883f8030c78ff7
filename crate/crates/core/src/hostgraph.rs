//! Complete weighted host graphs.
//!
//! A host is validated on construction (square, symmetric, nonnegative,
//! zero diagonal) and is immutable afterwards. Exact hosts keep an integer
//! copy of their weights scaled by the common denominator for the search
//! kernels.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{floyd_warshall, Scalar};
use crate::weight::{common_denominator, Rational, Weight, DEFAULT_EPSILON};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub weight: Weight,
}

/// Provenance of a host graph.
#[derive(Clone, Debug, PartialEq)]
pub enum HostKind {
    General,
    Metric,
    OneTwo,
    /// Metric closure of the retained spanning tree.
    Tree { edges: Vec<TreeEdge> },
    /// Points in `R^d` under the `p`-norm.
    Points { p: Rational, coords: Vec<Vec<Rational>> },
}

impl HostKind {
    pub fn name(&self) -> &'static str {
        match self {
            HostKind::General => "general",
            HostKind::Metric => "metric",
            HostKind::OneTwo => "one_two",
            HostKind::Tree { .. } => "tree",
            HostKind::Points { .. } => "points",
        }
    }

    /// Kinds whose weights satisfy the triangle inequality by construction.
    pub fn is_metric(&self) -> bool {
        !matches!(self, HostKind::General)
    }
}

impl fmt::Display for HostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A triple `(u, x, v)` with `w(u,v) > w(u,x) + w(x,v)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricViolation {
    pub u: usize,
    pub x: usize,
    pub v: usize,
    /// `w(u,v) - w(u,x) - w(x,v)`, positive.
    pub slack: Weight,
}

#[derive(Clone, Debug)]
pub(crate) enum Repr {
    Exact { scale: i128, w: Vec<i128> },
    Float { w: Vec<f64> },
}

#[derive(Clone, Debug)]
pub struct HostGraph {
    n: usize,
    kind: HostKind,
    weights: Vec<Weight>,
    repr: Repr,
    dh: OnceLock<Vec<Weight>>,
}

impl PartialEq for HostGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.kind == other.kind && self.weights == other.weights
    }
}

fn validate_matrix(n: usize, rows: &[Vec<Weight>]) -> Result<Vec<Weight>> {
    if n == 0 {
        return Err(Error::Shape { n, detail: "host needs at least one node".into() });
    }
    if rows.len() != n {
        return Err(Error::Shape { n, detail: format!("{} rows", rows.len()) });
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Shape { n, detail: format!("row {i} has {} entries", r.len()) });
    }
    for u in 0..n {
        if !rows[u][u].is_zero() {
            return Err(Error::NonzeroDiagonal(u));
        }
        for v in 0..n {
            let w = rows[u][v];
            if w.is_negative() {
                return Err(Error::NegativeWeight(u, v));
            }
            if let Weight::Float(f) = w {
                if f.is_nan() {
                    return Err(Error::NegativeWeight(u, v));
                }
            }
        }
        for v in (u + 1)..n {
            let (a, b) = (rows[u][v], rows[v][u]);
            let same = match (a, b) {
                (Weight::Exact(x), Weight::Exact(y)) => x == y,
                _ => a.cmp_eps(&b, 0.0).is_eq(),
            };
            if !same {
                return Err(Error::Asymmetric(u, v));
            }
        }
    }
    Ok(rows.iter().flatten().copied().collect())
}

fn build_repr(weights: &[Weight]) -> Repr {
    let all_exact = weights.iter().all(|w| !matches!(w, Weight::Float(_)));
    if all_exact {
        let scale = common_denominator(weights.iter().filter_map(|w| w.as_rational()).collect::<Vec<_>>().iter());
        let w = weights
            .iter()
            .map(|w| match w {
                Weight::Exact(r) => r.numer() * (scale / r.denom()),
                _ => i128::INF,
            })
            .collect();
        Repr::Exact { scale, w }
    } else {
        Repr::Float { w: weights.iter().map(|w| w.to_f64()).collect() }
    }
}

impl HostGraph {
    fn from_validated(n: usize, kind: HostKind, weights: Vec<Weight>) -> HostGraph {
        let repr = build_repr(&weights);
        HostGraph { n, kind, weights, repr, dh: OnceLock::new() }
    }

    /// General host from a full matrix. `Weight::Infinite` marks an edge
    /// that cannot be bought.
    pub fn build_general(n: usize, weights: Vec<Vec<Weight>>) -> Result<HostGraph> {
        let flat = validate_matrix(n, &weights)?;
        Ok(HostGraph::from_validated(n, HostKind::General, flat))
    }

    /// Re-tags a general host as metric when the triangle inequality holds.
    pub fn classified(mut self) -> HostGraph {
        if self.kind == HostKind::General && self.check_metric().is_empty() {
            self.kind = HostKind::Metric;
        }
        self
    }

    /// Metric host; rejects matrices that violate the triangle inequality.
    pub fn build_metric(n: usize, weights: Vec<Vec<Weight>>) -> Result<HostGraph> {
        let host = HostGraph::build_general(n, weights)?;
        if let Some(v) = host.check_metric().first() {
            return Err(Error::NotMetric(v.u, v.x, v.v));
        }
        Ok(HostGraph { kind: HostKind::Metric, ..host })
    }

    /// 1-2 host; every off-diagonal weight must be 1 or 2.
    pub fn build_one_two(n: usize, weights: Vec<Vec<Weight>>) -> Result<HostGraph> {
        let host = HostGraph::build_general(n, weights)?;
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    let w = host.weight(u, v);
                    if w != Weight::int(1) && w != Weight::int(2) {
                        return Err(Error::NotOneTwo(u, v));
                    }
                }
            }
        }
        Ok(HostGraph { kind: HostKind::OneTwo, ..host })
    }

    /// Points under the `p`-norm. `p = 1` stays exact; larger `p` uses floats.
    pub fn from_points(coords: Vec<Vec<Rational>>, p: Rational) -> Result<HostGraph> {
        if coords.is_empty() {
            return Err(Error::Points("empty point list".into()));
        }
        let d = coords[0].len();
        if let Some(i) = coords.iter().position(|c| c.len() != d) {
            return Err(Error::Points(format!("point {i} has dimension {} instead of {d}", coords[i].len())));
        }
        if p < Rational::from_integer(1) {
            return Err(Error::Points(format!("norm exponent {p} is below 1")));
        }
        let n = coords.len();
        let exact = p == Rational::from_integer(1);
        let pf = p.numer().to_f64().unwrap_or(f64::NAN) / p.denom().to_f64().unwrap_or(f64::NAN);
        let mut weights = vec![Weight::zero(); n * n];
        for u in 0..n {
            for v in (u + 1)..n {
                let w = if exact {
                    Weight::Exact(coords[u].iter().zip(&coords[v]).map(|(a, b)| (a - b).abs()).sum())
                } else {
                    let s: f64 = coords[u]
                        .iter()
                        .zip(&coords[v])
                        .map(|(a, b)| {
                            let diff = (a - b).abs();
                            let x = diff.numer().to_f64().unwrap_or(f64::NAN) / diff.denom().to_f64().unwrap_or(f64::NAN);
                            if pf == 2.0 {
                                x * x
                            } else {
                                x.powf(pf)
                            }
                        })
                        .sum();
                    Weight::Float(if pf == 2.0 { s.sqrt() } else { s.powf(1.0 / pf) })
                };
                weights[u * n + v] = w;
                weights[v * n + u] = w;
            }
        }
        Ok(HostGraph::from_validated(n, HostKind::Points { p, coords }, weights))
    }

    /// Metric closure of a weighted spanning tree on `n` nodes.
    pub fn from_tree(n: usize, edges: Vec<(usize, usize, Weight)>) -> Result<HostGraph> {
        if n == 0 {
            return Err(Error::Tree("no nodes".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::Tree(format!("{} edges on {n} nodes; a spanning tree has {}", edges.len(), n - 1)));
        }
        let mut adj: Vec<Vec<(usize, Weight)>> = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(Error::Tree(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::Tree(format!("self-loop at {u}")));
            }
            if !w.is_finite() || w.is_negative() || w.is_zero() {
                return Err(Error::Tree(format!("edge ({u},{v}) needs a positive finite weight, got {w}")));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        let mut weights = vec![Weight::zero(); n * n];
        for s in 0..n {
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            let mut count = 1;
            while let Some(x) = queue.pop_front() {
                for &(y, w) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        weights[s * n + y] = weights[s * n + x] + w;
                        queue.push_back(y);
                    }
                }
            }
            if count != n {
                return Err(Error::Tree("edge list contains a cycle or is disconnected".into()));
            }
        }
        let tree = edges
            .into_iter()
            .map(|(u, v, weight)| TreeEdge { u: u.min(v), v: u.max(v), weight })
            .collect();
        Ok(HostGraph::from_validated(n, HostKind::Tree { edges: tree }, weights))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &HostKind {
        &self.kind
    }

    pub fn weight(&self, u: usize, v: usize) -> Weight {
        self.weights[u * self.n + v]
    }

    pub fn weights(&self) -> Vec<Vec<Weight>> {
        self.weights.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// True when all weights are exact rationals (or the infinite sentinel).
    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact { .. })
    }

    pub(crate) fn repr(&self) -> &Repr {
        &self.repr
    }

    pub(crate) fn float_weights(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Float { w } => w.clone(),
            Repr::Exact { .. } => self.weights.iter().map(|w| w.to_f64()).collect(),
        }
    }

    /// Every triple violating the triangle inequality, with its slack.
    pub fn check_metric(&self) -> Vec<MetricViolation> {
        let n = self.n;
        let mut out = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let direct = self.weight(u, v);
                for x in 0..n {
                    if x == u || x == v {
                        continue;
                    }
                    let via = self.weight(u, x) + self.weight(x, v);
                    let eps = if self.is_exact() { 0.0 } else { DEFAULT_EPSILON };
                    if direct.cmp_eps(&via, eps).is_gt() {
                        let slack = if via.is_finite() { direct - via } else { Weight::Infinite };
                        out.push(MetricViolation { u, x, v, slack });
                    }
                }
            }
        }
        out
    }

    /// Host shortest-path distances `d_H`; equal to the weights on metric kinds.
    pub fn host_shortest_paths(&self) -> &[Weight] {
        self.dh.get_or_init(|| {
            if self.kind.is_metric() {
                return self.weights.clone();
            }
            let n = self.n;
            match &self.repr {
                Repr::Exact { scale, w } => {
                    let mut d = w.clone();
                    floyd_warshall(n, &mut d);
                    d.into_iter().map(|x| x.to_weight(*scale)).collect()
                }
                Repr::Float { w } => {
                    let mut d = w.clone();
                    floyd_warshall(n, &mut d);
                    d.into_iter().map(|x| x.to_weight(1)).collect()
                }
            }
        })
    }

    pub fn host_distance(&self, u: usize, v: usize) -> Weight {
        self.host_shortest_paths()[u * self.n + v]
    }

    /// The same host with every weight multiplied by `c > 0`.
    pub fn scaled(&self, c: Rational) -> Result<HostGraph> {
        if !c.is_positive() {
            return Err(Error::Precondition(format!("scale factor {c} must be positive")));
        }
        let factor = Weight::Exact(c);
        let weights: Vec<Weight> = self.weights.iter().map(|w| *w * factor).collect();
        let kind = match &self.kind {
            HostKind::Tree { edges } => HostKind::Tree {
                edges: edges.iter().map(|e| TreeEdge { weight: e.weight * factor, ..e.clone() }).collect(),
            },
            HostKind::Points { p, coords } => HostKind::Points {
                p: *p,
                coords: coords.iter().map(|c0| c0.iter().map(|x| x * c).collect()).collect(),
            },
            HostKind::OneTwo if c != Rational::from_integer(1) => HostKind::Metric,
            other => other.clone(),
        };
        Ok(HostGraph::from_validated(self.n, kind, weights))
    }

    /// Number of unordered pairs.
    pub fn pair_count(&self) -> usize {
        self.n * (self.n.saturating_sub(1)) / 2
    }

    /// Unordered pairs `(u, v)`, `u < v`, in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect()
    }
}

/// Convenience for building matrices of small integers.
pub fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<Weight>> {
    rows.iter().map(|r| r.iter().map(|&x| Weight::from(x)).collect()).collect()
}
