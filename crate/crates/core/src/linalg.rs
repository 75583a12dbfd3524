//! Small dense linear algebra: weighted Gram–Schmidt over sampled basis
//! functions, cyclic Jacobi for symmetric matrices, and an `S^{-1/2}`
//! reduction of the generalized problem used to cross-check the pipeline.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::basis::BasisFunction;
use crate::error::{Error, Result};
use crate::quadrature::ProductGrid;

/// Square row-major matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix({}x{})", self.n, self.n)?;
        for r in 0..self.n {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.n + c]
    }
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Argument("matrix rows must form a square array".into()));
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::Argument("matrix entries must be finite".into()));
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.n).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |r, c| self[(c, r)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.n, |r, c| self[(r, c)] - other[(r, c)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `‖A − Aᵀ‖_F / ‖A‖_F` (zero for the zero matrix).
    pub fn asymmetry(&self) -> f64 {
        let norm = self.frobenius_norm();
        if norm == 0.0 {
            return 0.0;
        }
        self.sub(&self.transpose()).frobenius_norm() / norm
    }

    /// `½(A + Aᵀ)`.
    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.n, |r, c| 0.5 * (self[(r, c)] + self[(c, r)]))
    }

    /// `C A Cᵀ`.
    pub fn congruence(&self, c: &Self) -> Self {
        c.matmul(self).matmul(&c.transpose())
    }
}

/// Orthonormal states expressed over the raw basis: row `r` of
/// `coefficients` expands state `r`.
#[derive(Debug, Clone)]
pub struct OrthoBasis {
    pub coefficients: DenseMatrix,
    /// Ratio of the extreme eigenvalues of the overlap matrix.
    pub gram_condition: f64,
}

/// Largest acceptable overlap condition number.
pub const MAX_GRAM_CONDITION: f64 = 1e12;
/// Relative pivot below which a function counts as linearly dependent.
pub const DEPENDENCE_TOLERANCE: f64 = 1e-12;

/// Samples each basis function at every grid point.
pub fn sample_basis(basis: &[BasisFunction], grid: &ProductGrid) -> Vec<Vec<f64>> {
    basis
        .iter()
        .map(|f| grid.sample(|t, q| f.value(t, q)))
        .collect()
}

/// Gram matrix of sampled functions under the grid's weighted inner product.
pub fn overlap_from_samples(samples: &[Vec<f64>], grid: &ProductGrid) -> Result<DenseMatrix> {
    let n = samples.len();
    let mut s = DenseMatrix::zeros(n);
    for r in 0..n {
        for c in r..n {
            let v = grid.inner_product(&samples[r], &samples[c])?;
            s[(r, c)] = v;
            s[(c, r)] = v;
        }
    }
    Ok(s)
}

/// `S_rs = ⟨Φ_r, Φ_s⟩` with the measure `M(θ, q)`.
pub fn overlap_matrix(basis: &[BasisFunction], grid: &ProductGrid) -> Result<DenseMatrix> {
    if basis.is_empty() {
        return Err(Error::Argument("overlap matrix of an empty basis".into()));
    }
    overlap_from_samples(&sample_basis(basis, grid), grid)
}

/// Modified Gram–Schmidt on the sampled functions, with one full
/// reorthogonalization pass, in the given order.
///
/// Coefficients are tracked alongside the samples so the result is the
/// lower-triangular `C` with `C S Cᵀ = I`.
pub fn gram_schmidt(basis: &[BasisFunction], grid: &ProductGrid) -> Result<OrthoBasis> {
    if basis.is_empty() {
        return Err(Error::Argument("Gram-Schmidt on an empty basis".into()));
    }
    let samples = sample_basis(basis, grid);
    let ortho = gram_schmidt_samples(&samples, grid)?;
    let overlap = overlap_from_samples(&samples, grid)?;
    let gram_condition = condition_number(&overlap)?;
    if gram_condition > MAX_GRAM_CONDITION {
        return Err(Error::IllConditioned(gram_condition));
    }
    Ok(OrthoBasis {
        coefficients: ortho,
        gram_condition,
    })
}

fn gram_schmidt_samples(samples: &[Vec<f64>], grid: &ProductGrid) -> Result<DenseMatrix> {
    let n = samples.len();
    let mut done_samples: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut coeffs = DenseMatrix::zeros(n);
    for r in 0..n {
        let mut v = samples[r].clone();
        let mut c = vec![0.0; n];
        c[r] = 1.0;
        let initial = grid.inner_product(&v, &v)?.sqrt();
        for _pass in 0..2 {
            for (s, u) in done_samples.iter().enumerate() {
                let proj = grid.inner_product(u, &v)?;
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
                for k in 0..=s {
                    c[k] -= proj * coeffs[(s, k)];
                }
            }
        }
        let norm = grid.inner_product(&v, &v)?.sqrt();
        if !(norm > DEPENDENCE_TOLERANCE * initial) {
            return Err(Error::LinearDependence {
                index: r,
                pivot: norm,
                initial,
            });
        }
        for vi in &mut v {
            *vi /= norm;
        }
        for k in 0..=r {
            coeffs[(r, k)] = c[k] / norm;
        }
        done_samples.push(v);
    }
    Ok(coeffs)
}

fn condition_number(s: &DenseMatrix) -> Result<f64> {
    let values: Vec<f64> = symmetric_eigen(s)?.into_iter().map(|p| p.value).collect();
    let lo = values[0];
    let hi = *values.last().unwrap();
    if lo <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(hi / lo)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit vector; sign fixed so the largest-magnitude component is positive.
    pub vector: Vec<f64>,
}

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenpairs of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending (stable on ties).
///
/// Sweeps stop once the off-diagonal Frobenius norm drops below
/// `1e-13 ‖A‖_F`.
pub fn symmetric_eigen(a: &DenseMatrix) -> Result<Vec<EigenPair>> {
    let n = a.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = a.frobenius_norm();
    if !scale.is_finite() {
        return Err(Error::Argument("matrix has non-finite entries".into()));
    }
    if a.sub(&a.transpose()).max_abs() > 1e-8 * a.max_abs() {
        return Err(Error::Argument("symmetric_eigen requires a symmetric matrix".into()));
    }
    let mut m = a.symmetrized();
    let mut v = DenseMatrix::identity(n);
    let threshold = 1e-13 * scale;

    let off_norm = |m: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    s += m[(r, c)] * m[(r, c)];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&m) > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Numerical(format!(
                "Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                // rotation angle that zeroes m[p][q]; smaller root for stability
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut pairs: Vec<EigenPair> = (0..n)
        .map(|i| {
            let mut vector = v.column(i);
            let lead = vector
                .iter()
                .copied()
                .fold(0.0f64, |best, x| if x.abs() > best.abs() { x } else { best });
            if lead < 0.0 {
                vector.iter_mut().for_each(|x| *x = -*x);
            }
            EigenPair {
                value: m[(i, i)],
                vector,
            }
        })
        .collect();
    pairs.sort_by(|x, y| x.value.total_cmp(&y.value));
    Ok(pairs)
}

/// Eigenvalues of `H c = λ S c` via `S^{-1/2} H S^{-1/2}`.
///
/// Independent of Gram–Schmidt; used for cross-checks and diagnostics.
pub fn generalized_eigen_oracle(h: &DenseMatrix, s: &DenseMatrix) -> Result<Vec<f64>> {
    if h.dim() != s.dim() {
        return Err(Error::Argument("H and S dimensions differ".into()));
    }
    let s_pairs = symmetric_eigen(s)?;
    if s_pairs.first().is_some_and(|p| p.value <= 0.0) {
        return Err(Error::Argument("overlap matrix is not positive definite".into()));
    }
    let n = s.dim();
    let inv_sqrt = DenseMatrix::from_fn(n, |r, c| {
        s_pairs
            .iter()
            .map(|p| p.vector[r] * p.vector[c] / p.value.sqrt())
            .sum()
    });
    let reduced = h.symmetrized().congruence(&inv_sqrt).symmetrized();
    Ok(symmetric_eigen(&reduced)?.into_iter().map(|p| p.value).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BasisSpec, Model, Parity, QFactor, ThetaFactor, build_basis};
    use crate::geometry::TorusGeometry;
    use crate::quadrature::periodic_trapezoid;
    use std::f64::consts::PI;

    fn surface_grid(major: f64, minor: f64) -> ProductGrid {
        let geom = TorusGeometry::new(major, minor).unwrap();
        ProductGrid::surface(&geom, periodic_trapezoid(64).unwrap()).unwrap()
    }

    fn cosines(n: usize) -> Vec<BasisFunction> {
        build_basis(&BasisSpec::new(Model::SurfaceBare, n, 0, 0, Parity::Even), None).unwrap()
    }

    #[test]
    fn overlap_off_diagonal_for_half_aspect_ratio() {
        // M(θ,0) = aR (1 + α cosθ); divide by aR so that ⟨1,1⟩ = (2π)·2π and
        // the remaining 2π is the φ factor
        let (major, minor) = (2.0, 1.0);
        let s = overlap_matrix(&cosines(2), &surface_grid(major, minor)).unwrap();
        let norm = minor * major * 2.0 * PI;
        assert!((s[(0, 0)] / norm - 2.0 * PI).abs() < 1e-13);
        assert!((s[(0, 1)] / norm - PI / 2.0).abs() < 1e-13);
        assert_eq!(s[(0, 1)], s[(1, 0)]);
    }

    #[test]
    fn overlap_is_diagonal_in_flat_limit() {
        let s = overlap_matrix(&cosines(4), &surface_grid(1e12, 1.0)).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                if r != c {
                    assert!(s[(r, c)].abs() < 1e-10 * s[(r, r)]);
                }
            }
        }
    }

    #[test]
    fn gram_schmidt_projection_coefficient() {
        let grid = surface_grid(2.0, 1.0);
        let basis = cosines(2);
        let ortho = gram_schmidt(&basis, &grid).unwrap();
        let c = &ortho.coefficients;
        assert_eq!(c[(0, 1)], 0.0);
        // second state ∝ cosθ − α/2
        assert!((c[(1, 0)] / c[(1, 1)] + 0.25).abs() < 1e-13);
        let s = overlap_matrix(&basis, &grid).unwrap();
        let id = s.congruence(c);
        assert!(id.sub(&DenseMatrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_flat_limit_is_diagonal() {
        let grid = surface_grid(1e12, 1.0);
        let ortho = gram_schmidt(&cosines(4), &grid).unwrap();
        let c = &ortho.coefficients;
        for r in 0..4 {
            for k in 0..r {
                assert!(c[(r, k)].abs() < 1e-10 * c[(r, r)].abs());
            }
        }
        assert!(ortho.gram_condition > 1.9 && ortho.gram_condition < 2.1);
    }

    #[test]
    fn gram_schmidt_keeps_orthonormal_inputs() {
        // on a flat grid with unit measure, scaled cosines are orthonormal
        let grid = surface_grid(1e12, 1.0);
        let one = cosines(1);
        let s = overlap_matrix(&one, &grid).unwrap();
        let ortho = gram_schmidt(&one, &grid).unwrap();
        assert!((ortho.coefficients[(0, 0)] - 1.0 / s[(0, 0)].sqrt()).abs() < 1e-20);
    }

    #[test]
    fn gram_schmidt_detects_dependence() {
        let grid = surface_grid(500.0, 250.0);
        let f = BasisFunction::new(QFactor::Constant, ThetaFactor::new(Parity::Even, 1).unwrap(), 0);
        let err = gram_schmidt(&[f, f], &grid).unwrap_err();
        assert!(matches!(err, Error::LinearDependence { index: 1, .. }));
    }

    #[test]
    fn jacobi_examples() {
        let pairs = symmetric_eigen(&DenseMatrix::identity(3)).unwrap();
        assert_eq!(pairs.iter().map(|p| p.value).collect::<Vec<_>>(), vec![1.0; 3]);

        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let pairs = symmetric_eigen(&a).unwrap();
        assert!((pairs[0].value - 1.0).abs() < 1e-14);
        assert!((pairs[1].value - 3.0).abs() < 1e-14);

        let pairs = symmetric_eigen(&DenseMatrix::from_diagonal(&[-5.0, 0.0, 7.0])).unwrap();
        let values: Vec<f64> = pairs.iter().map(|p| p.value).collect();
        assert_eq!(values, vec![-5.0, 0.0, 7.0]);
        for (i, p) in pairs.iter().enumerate() {
            let mut unit = vec![0.0; 3];
            unit[i] = 1.0;
            assert_eq!(p.vector, unit);
        }
    }

    #[test]
    fn jacobi_ties_keep_original_order() {
        let pairs = symmetric_eigen(&DenseMatrix::from_diagonal(&[2.0, 1.0, 2.0])).unwrap();
        assert_eq!(pairs[1].vector, vec![1.0, 0.0, 0.0]);
        assert_eq!(pairs[2].vector, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn jacobi_rejects_asymmetric() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(symmetric_eigen(&a).is_err());
    }

    #[test]
    fn oracle_examples() {
        let h = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let values = generalized_eigen_oracle(&h, &DenseMatrix::identity(2)).unwrap();
        assert!((values[0] - 1.0).abs() < 1e-14 && (values[1] - 3.0).abs() < 1e-14);

        let s = DenseMatrix::from_rows(&[
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, 0.2],
            vec![0.5, 0.2, 2.0],
        ])
        .unwrap();
        for v in generalized_eigen_oracle(&s, &s).unwrap() {
            assert!((v - 1.0).abs() < 1e-13);
        }

        let not_pd = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(
            generalized_eigen_oracle(&h, &not_pd),
            Err(Error::Argument(_))
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn symmetric(n: usize) -> impl Strategy<Value = DenseMatrix> {
            proptest::collection::vec(-10.0f64..10.0, n * n).prop_map(move |v| {
                DenseMatrix::from_fn(n, |r, c| {
                    let (a, b) = if r <= c { (r, c) } else { (c, r) };
                    v[a * n + b]
                })
            })
        }

        proptest! {
            #[test]
            fn jacobi_reconstructs_and_matches_nalgebra(a in (1usize..9).prop_flat_map(symmetric)) {
                let n = a.dim();
                let pairs = symmetric_eigen(&a).unwrap();
                let v = DenseMatrix::from_fn(n, |r, c| pairs[c].vector[r]);
                let lambda = DenseMatrix::from_diagonal(&pairs.iter().map(|p| p.value).collect::<Vec<_>>());
                let rebuilt = v.matmul(&lambda).matmul(&v.transpose());
                prop_assert!(rebuilt.sub(&a).frobenius_norm() < 1e-12 * a.frobenius_norm().max(1e-300));
                let vtv = v.transpose().matmul(&v);
                prop_assert!(vtv.sub(&DenseMatrix::identity(n)).max_abs() < 1e-13);
                prop_assert!(pairs.windows(2).all(|w| w[0].value <= w[1].value));

                let reference = nalgebra::DMatrix::from_fn(n, n, |r, c| a[(r, c)]);
                let mut expected: Vec<f64> = reference.symmetric_eigenvalues().iter().copied().collect();
                expected.sort_by(f64::total_cmp);
                for (p, e) in pairs.iter().zip(&expected) {
                    prop_assert!((p.value - e).abs() < 1e-11 * a.frobenius_norm().max(1.0));
                }
            }

            #[test]
            fn oracle_matches_gram_schmidt_route(
                a in symmetric(4),
                b in proptest::collection::vec(-1.0f64..1.0, 16),
            ) {
                // S = BBᵀ + I is safely positive definite
                let bm = DenseMatrix::from_fn(4, |r, c| b[r * 4 + c]);
                let s = DenseMatrix::from_fn(4, |r, c| {
                    (0..4).map(|k| bm[(r, k)] * bm[(c, k)]).sum::<f64>() + if r == c { 1.0 } else { 0.0 }
                });
                // Cholesky-style route: L⁻¹ from Gram–Schmidt on coefficient space
                let chol = cholesky_inverse(&s);
                let projected = a.congruence(&chol).symmetrized();
                let via_gs: Vec<f64> = symmetric_eigen(&projected).unwrap().into_iter().map(|p| p.value).collect();
                let via_oracle = generalized_eigen_oracle(&a, &s).unwrap();
                for (x, y) in via_gs.iter().zip(&via_oracle) {
                    prop_assert!((x - y).abs() < 1e-10 * a.frobenius_norm().max(1.0));
                }
            }
        }

        /// Classical Gram–Schmidt in the S inner product on unit vectors.
        fn cholesky_inverse(s: &DenseMatrix) -> DenseMatrix {
            let n = s.dim();
            let mut c = DenseMatrix::zeros(n);
            for r in 0..n {
                let mut v = vec![0.0; n];
                v[r] = 1.0;
                for k in 0..r {
                    let u = c.row(k).to_vec();
                    let proj: f64 = u.iter().zip(s.matvec(&v)).map(|(a, b)| a * b).sum();
                    for i in 0..n {
                        v[i] -= proj * u[i];
                    }
                }
                let norm = v.iter().zip(s.matvec(&v)).map(|(a, b)| a * b).sum::<f64>().sqrt();
                for i in 0..n {
                    c[(r, i)] = v[i] / norm;
                }
            }
            c
        }
    }
}
