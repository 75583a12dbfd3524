//! Quadrature rules over the poloidal angle and the normal offset, and the
//! measure-weighted inner product built on them.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::TorusGeometry;

/// One-dimensional rule: strictly increasing nodes with positive weights
/// summing to the length of `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl Grid1D {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Degenerate rule used for surface models: the single node `at` with
    /// weight 1, so sums reduce to point evaluation.
    pub fn single_point(at: f64) -> Self {
        Self {
            nodes: vec![at],
            weights: vec![1.0],
            lo: at,
            hi: at,
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Evaluates `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let nf = n as f64;
    let dp = nf * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// `n`-point Gauss–Legendre rule on `[lo, hi]`, exact for polynomials of
/// degree `≤ 2n − 1`.
///
/// Roots of `P_n` are polished by Newton iteration from the usual cosine
/// estimates; `n = 1` is the midpoint rule.
pub fn gauss_legendre(n: usize, lo: f64, hi: f64) -> Result<Grid1D> {
    if n == 0 {
        return Err(Error::Argument("Gauss-Legendre rule needs at least one node".into()));
    }
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::Argument(format!(
            "Gauss-Legendre interval must satisfy lo < hi (got [{lo}, {hi}])"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    if n == 1 {
        weights[0] = 2.0;
    } else {
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut converged = false;
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let step = p / dp;
                x -= step;
                if step.abs() <= 1e-15 {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Numerical(format!(
                    "Newton iteration for Legendre root {i} of P_{n} did not converge"
                )));
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // roots come out in decreasing order; mirror into both halves
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
    }
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    Ok(Grid1D {
        nodes: nodes.iter().map(|x| mid + half * x).collect(),
        weights: weights.iter().map(|w| half * w).collect(),
        lo,
        hi,
    })
}

/// Equally spaced rule on `[0, 2π)` with nodes `2πi/n` and weights `2π/n`.
///
/// Exact for trigonometric polynomials of degree `< n`: every `cos(jθ)`,
/// `sin(jθ)` with `0 < j < n` sums to zero.
pub fn periodic_trapezoid(n: usize) -> Result<Grid1D> {
    if n == 0 {
        return Err(Error::Argument("periodic trapezoid rule needs at least one node".into()));
    }
    let h = 2.0 * PI / n as f64;
    Ok(Grid1D {
        nodes: (0..n).map(|i| h * i as f64).collect(),
        weights: vec![h; n],
        lo: 0.0,
        hi: 2.0 * PI,
    })
}

/// Tensor-product grid over `(θ, q)` with the measure `M(θ, q)` folded in.
///
/// Samples are stored θ-major: index `i * n_q + j` holds `(θ_i, q_j)`. The
/// azimuthal integral contributes the constant factor `2π`.
#[derive(Debug, Clone)]
pub struct ProductGrid {
    theta: Grid1D,
    q: Grid1D,
    measure: Vec<f64>,
    volume: Vec<f64>,
    phi_factor: f64,
}

impl ProductGrid {
    /// Grid for the finite-layer model; every node must lie inside the
    /// coordinate patch.
    pub fn layer(geom: &TorusGeometry, theta: Grid1D, q: Grid1D) -> Result<Self> {
        let mut measure = Vec::with_capacity(theta.len() * q.len());
        for &t in theta.nodes() {
            for &qq in q.nodes() {
                measure.push(geom.measure(geom.point(t, qq)?));
            }
        }
        Ok(Self::from_parts(theta, q, measure))
    }

    /// Grid for surface models: `q` collapses to the single node 0 and the
    /// measure is the surface density `M(θ, 0)`.
    pub fn surface(geom: &TorusGeometry, theta: Grid1D) -> Result<Self> {
        Self::layer(geom, theta, Grid1D::single_point(0.0))
    }

    fn from_parts(theta: Grid1D, q: Grid1D, measure: Vec<f64>) -> Self {
        let phi_factor = 2.0 * PI;
        let nq = q.len();
        let volume = measure
            .iter()
            .enumerate()
            .map(|(idx, m)| phi_factor * theta.weights()[idx / nq] * q.weights()[idx % nq] * m)
            .collect();
        Self {
            theta,
            q,
            measure,
            volume,
            phi_factor,
        }
    }

    pub fn theta(&self) -> &Grid1D {
        &self.theta
    }

    pub fn q(&self) -> &Grid1D {
        &self.q
    }

    pub fn measure_values(&self) -> &[f64] {
        &self.measure
    }

    pub fn phi_factor(&self) -> f64 {
        self.phi_factor
    }

    pub fn len(&self) -> usize {
        self.measure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measure.is_empty()
    }

    /// Iterates over `(θ, q)` in storage order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.theta
            .nodes()
            .iter()
            .flat_map(move |&t| self.q.nodes().iter().map(move |&q| (t, q)))
    }

    /// Samples `f` at every grid point.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        self.points().map(|(t, q)| f(t, q)).collect()
    }

    /// `2π Σ w_i w_j M(θ_i, q_j) f(θ_i, q_j) g(θ_i, q_j)`.
    ///
    /// The product `f·g` is formed first, so the result is exactly symmetric
    /// in its arguments.
    pub fn inner_product(&self, f: &[f64], g: &[f64]) -> Result<f64> {
        if f.len() != self.len() || g.len() != self.len() {
            return Err(Error::Argument(format!(
                "sample length mismatch: grid has {} points, got {} and {}",
                self.len(),
                f.len(),
                g.len()
            )));
        }
        Ok(self
            .volume
            .iter()
            .zip(f.iter().zip(g))
            .map(|(dv, (a, b))| dv * (a * b))
            .sum())
    }
}
