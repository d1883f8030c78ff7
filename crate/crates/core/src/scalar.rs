//! Numeric kernels shared by every search.
//!
//! Exact hosts are scaled to integers (`i128`) by the common denominator
//! of their weights, and `alpha = a/b` turns agent cost into
//! `a * owned_weight + b * distance_sum`, so all hot loops run on plain
//! integers. Float hosts use `f64` with an absolute tolerance.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::hostgraph::{HostGraph, Repr};
use crate::weight::{Rational, Weight, DEFAULT_EPSILON};

pub(crate) trait Scalar: Copy + PartialOrd + Debug + Send + Sync + 'static {
    const ZERO: Self;
    const INF: Self;

    fn is_inf(self) -> bool;
    /// Saturating at `INF`.
    fn plus(self, o: Self) -> Self;
    /// `INF * 0 = 0`, otherwise saturating.
    fn times(self, o: Self) -> Self;
    fn to_weight(self, den: i128) -> Weight;
    fn from_i128(x: i128) -> Self;

    #[inline]
    fn min_of(self, o: Self) -> Self {
        if o < self {
            o
        } else {
            self
        }
    }
}

impl Scalar for i128 {
    const ZERO: Self = 0;
    const INF: Self = i128::MAX;

    #[inline]
    fn is_inf(self) -> bool {
        self == i128::MAX
    }
    #[inline]
    fn plus(self, o: Self) -> Self {
        if self == i128::MAX || o == i128::MAX {
            i128::MAX
        } else {
            self + o
        }
    }
    #[inline]
    fn times(self, o: Self) -> Self {
        if self == 0 || o == 0 {
            0
        } else if self == i128::MAX || o == i128::MAX {
            i128::MAX
        } else {
            self * o
        }
    }
    #[inline]
    fn to_weight(self, den: i128) -> Weight {
        if self.is_inf() {
            Weight::Infinite
        } else {
            Weight::Exact(Rational::new(self, den))
        }
    }
    fn from_i128(x: i128) -> Self {
        x
    }
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const INF: Self = f64::INFINITY;

    #[inline]
    fn is_inf(self) -> bool {
        self == f64::INFINITY
    }
    #[inline]
    fn plus(self, o: Self) -> Self {
        self + o
    }
    #[inline]
    fn times(self, o: Self) -> Self {
        if self == 0.0 || o == 0.0 {
            0.0
        } else {
            self * o
        }
    }
    #[inline]
    fn to_weight(self, _den: i128) -> Weight {
        if self.is_inf() {
            Weight::Infinite
        } else {
            Weight::Float(self)
        }
    }
    fn from_i128(x: i128) -> Self {
        x as f64
    }
}

/// `a` is strictly better (smaller) than `b` by more than `eps`.
#[inline]
pub(crate) fn improves<T: Scalar>(a: T, b: T, eps: T) -> bool {
    !a.is_inf() && (b.is_inf() || a.plus(eps) < b)
}

/// `a` and `b` are equal up to `eps` (both infinite counts as equal).
#[inline]
pub(crate) fn tied<T: Scalar>(a: T, b: T, eps: T) -> bool {
    if a.is_inf() || b.is_inf() {
        return a.is_inf() && b.is_inf();
    }
    !(a.plus(eps) < b) && !(b.plus(eps) < a)
}

/// In-place Floyd–Warshall on an `n*n` matrix with `INF` for missing edges.
pub(crate) fn floyd_warshall<T: Scalar>(n: usize, d: &mut [T]) {
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik.is_inf() {
                continue;
            }
            for j in 0..n {
                let dkj = d[k * n + j];
                if dkj.is_inf() {
                    continue;
                }
                let via = dik.plus(dkj);
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
}

/// Host plus edge price, specialised to one numeric domain.
#[derive(Clone, Debug)]
pub(crate) struct Kernel<T> {
    pub n: usize,
    /// Host weights, row-major.
    pub w: Vec<T>,
    /// Multiplier applied to owned edge weight.
    pub price: T,
    /// Multiplier applied to distance sums.
    pub dmul: T,
    pub eps: T,
    /// Denominator turning a kernel cost into a real cost.
    pub cost_den: i128,
    /// Denominator turning a kernel distance into a real distance.
    pub dist_den: i128,
    pub eps_f64: f64,
}

pub(crate) enum AnyKernel {
    Exact(Kernel<i128>),
    Float(Kernel<f64>),
}

/// Runs `$body` with `$k` bound to the concrete kernel.
macro_rules! with_kernel {
    ($any:expr, $k:ident => $body:expr) => {
        match $any {
            $crate::scalar::AnyKernel::Exact($k) => $body,
            $crate::scalar::AnyKernel::Float($k) => $body,
        }
    };
}
pub(crate) use with_kernel;

pub(crate) fn check_alpha(alpha: &Weight) -> Result<()> {
    if !alpha.is_finite() || alpha.is_negative() || alpha.is_zero() {
        return Err(Error::Alpha(alpha.to_string()));
    }
    Ok(())
}

impl<T: Scalar> Kernel<T> {
    #[inline]
    pub fn weight(&self, u: usize, v: usize) -> T {
        self.w[u * self.n + v]
    }

    #[inline]
    pub fn cost(&self, owned: T, dist: T) -> T {
        self.price.times(owned).plus(self.dmul.times(dist))
    }

    pub fn cost_weight(&self, c: T) -> Weight {
        c.to_weight(self.cost_den)
    }

    pub fn dist_weight(&self, d: T) -> Weight {
        d.to_weight(self.dist_den)
    }

    /// Adjacency matrix of an edge list (diagonal zero, `INF` elsewhere).
    pub fn adjacency<'a>(&self, edges: impl Iterator<Item = (usize, usize)>) -> Vec<T> {
        let n = self.n;
        let mut d = vec![T::INF; n * n];
        for i in 0..n {
            d[i * n + i] = T::ZERO;
        }
        for (u, v) in edges {
            let w = self.weight(u, v);
            if w < d[u * n + v] {
                d[u * n + v] = w;
                d[v * n + u] = w;
            }
        }
        d
    }

    pub fn apsp(&self, edges: impl Iterator<Item = (usize, usize)>) -> Vec<T> {
        let mut d = self.adjacency(edges);
        floyd_warshall(self.n, &mut d);
        d
    }
}

impl AnyKernel {
    /// Builds the kernel for `host` at edge price `alpha`.
    pub fn new(host: &HostGraph, alpha: &Weight) -> Result<AnyKernel> {
        check_alpha(alpha)?;
        Ok(AnyKernel::with_multipliers(host, alpha))
    }

    /// Kernel whose cost is `alpha * owned + distance` without the
    /// positivity check on `alpha` (used for pure distance work with `alpha = 0`).
    pub fn with_multipliers(host: &HostGraph, alpha: &Weight) -> AnyKernel {
        let n = host.n();
        match (host.repr(), alpha) {
            (Repr::Exact { scale, w }, Weight::Exact(a)) => AnyKernel::Exact(Kernel {
                n,
                w: w.clone(),
                price: *a.numer(),
                dmul: *a.denom(),
                eps: 0,
                cost_den: scale * a.denom(),
                dist_den: *scale,
                eps_f64: 0.0,
            }),
            _ => AnyKernel::Float(Kernel {
                n,
                w: host.float_weights(),
                price: alpha.to_f64(),
                dmul: 1.0,
                eps: DEFAULT_EPSILON,
                cost_den: 1,
                dist_den: 1,
                eps_f64: DEFAULT_EPSILON,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floyd_warshall_three_nodes() {
        // weights (0,1)=0, (1,2)=1, (0,2)=2: shortcut through node 1
        let inf = i128::INF;
        let mut d = vec![0, 0, 2, 0, 0, 1, 2, 1, 0];
        floyd_warshall(3, &mut d);
        assert_eq!(d[2], 1);
        let mut e = vec![0, inf, inf, 0];
        floyd_warshall(2, &mut e);
        assert!(e[1].is_inf());
    }

    #[test]
    fn strict_improvement_respects_tolerance() {
        assert!(improves(1i128, 2, 0));
        assert!(!improves(2i128, 2, 0));
        assert!(improves(5i128, i128::INF, 0));
        assert!(!improves(i128::INF, i128::INF, 0));
        assert!(!improves(1.0, 1.0 + 1e-12, 1e-9));
        assert!(tied(1.0, 1.0 + 1e-12, 1e-9));
        assert!(tied(f64::INF, f64::INF, 1e-9));
    }
}
