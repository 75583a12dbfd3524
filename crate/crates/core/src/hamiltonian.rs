//! The three model operators and their matrices over a trial basis.
//!
//! * Layer: `H_q ψ = −½ [ψ_θθ/a_q² − sinθ/(a_q F_q) ψ_θ − m²/F_q² ψ + 2h ψ_q + ψ_qq] + V_n(q) ψ`,
//!   eigenvalue `E` in Å⁻².
//! * Surface: the dimensionless operator
//!   `−[ψ_θθ − α sinθ/F ψ_θ − m²α²/F² ψ] + 2a² V_C ψ`, eigenvalue `β = 2Ea²`.
//!   The bare model drops the `V_C` term.
//!
//! The `φ` dependence `e^{imφ}` is handled analytically.

use crate::basis::{BasisFunction, Confinement, Model};
use crate::error::{Error, Result};
use crate::geometry::TorusGeometry;
use crate::linalg::{DenseMatrix, overlap_from_samples, sample_basis};
use crate::quadrature::ProductGrid;

/// Relative asymmetry of the raw Hamiltonian matrix above which assembly fails.
pub const MAX_ASYMMETRY: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelOperator {
    model: Model,
    geom: TorusGeometry,
    conf: Option<Confinement>,
    m: i32,
}

/// Matrices of one model over one basis.
#[derive(Debug, Clone)]
pub struct Assembled {
    /// Symmetrized Hamiltonian `½(H_raw + H_rawᵀ)`.
    pub h: DenseMatrix,
    pub s: DenseMatrix,
    /// `‖H_raw − H_rawᵀ‖_F / ‖H_raw‖_F` before symmetrization.
    pub asymmetry: f64,
}

impl ModelOperator {
    pub fn layer(geom: TorusGeometry, conf: Confinement, m: i32) -> Self {
        Self {
            model: Model::Layer,
            geom,
            conf: Some(conf),
            m,
        }
    }

    pub fn surface_hard_constraint(geom: TorusGeometry, m: i32) -> Self {
        Self {
            model: Model::SurfaceHardConstraint,
            geom,
            conf: None,
            m,
        }
    }

    pub fn surface_bare(geom: TorusGeometry, m: i32) -> Self {
        Self {
            model: Model::SurfaceBare,
            geom,
            conf: None,
            m,
        }
    }

    pub fn new(model: Model, geom: TorusGeometry, conf: Option<Confinement>, m: i32) -> Result<Self> {
        match (model, conf) {
            (Model::Layer, Some(conf)) => Ok(Self::layer(geom, conf, m)),
            (Model::Layer, None) => Err(Error::Argument(
                "layer model requires a confinement potential".into(),
            )),
            (Model::SurfaceHardConstraint, _) => Ok(Self::surface_hard_constraint(geom, m)),
            (Model::SurfaceBare, _) => Ok(Self::surface_bare(geom, m)),
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn geometry(&self) -> &TorusGeometry {
        &self.geom
    }

    pub fn confinement(&self) -> Option<&Confinement> {
        self.conf.as_ref()
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// `(H_q f)(θ, q)` in Å⁻².
    pub fn apply_layer(&self, f: &BasisFunction, theta: f64, q: f64) -> Result<f64> {
        match self.conf {
            Some(conf) if self.model == Model::Layer => Ok(self.layer_action(&conf, f, theta, q)),
            _ => Err(Error::Contract(format!(
                "apply_layer called on the {} model",
                self.model.as_str()
            ))),
        }
    }

    /// Dimensionless surface action whose eigenvalue is `β`.
    pub fn apply_surface(&self, f: &BasisFunction, theta: f64) -> Result<f64> {
        if self.model == Model::Layer {
            return Err(Error::Contract("apply_surface called on the layer model".into()));
        }
        Ok(self.surface_action(f, theta))
    }

    fn apply(&self, f: &BasisFunction, theta: f64, q: f64) -> f64 {
        match self.conf {
            Some(conf) if self.model == Model::Layer => self.layer_action(&conf, f, theta, q),
            _ => self.surface_action(f, theta),
        }
    }

    fn layer_action(&self, conf: &Confinement, f: &BasisFunction, theta: f64, q: f64) -> f64 {
        let d = f.eval_derivatives(theta, q);
        let (sin, cos) = theta.sin_cos();
        let a_q = self.geom.minor_radius() + q;
        let f_q = self.geom.major_radius() + a_q * cos;
        let two_h = 1.0 / a_q + cos / f_q;
        let m2 = f64::from(self.m) * f64::from(self.m);
        let laplacian = d.d_theta2 / (a_q * a_q) - sin / (a_q * f_q) * d.d_theta
            - m2 / (f_q * f_q) * d.value
            + two_h * d.d_q
            + d.d_q2;
        -0.5 * laplacian + conf.potential(q) * d.value
    }

    fn surface_action(&self, f: &BasisFunction, theta: f64) -> f64 {
        let d = f.eval_derivatives(theta, 0.0);
        let alpha = self.geom.aspect_ratio();
        let (sin, _) = theta.sin_cos();
        let big_f = self.geom.surface_factor(theta);
        let m_alpha = f64::from(self.m) * alpha;
        let mut out = -(d.d_theta2 - alpha * sin / big_f * d.d_theta)
            + m_alpha * m_alpha / (big_f * big_f) * d.value;
        if self.model == Model::SurfaceHardConstraint {
            out += self.scaled_curvature_potential(theta) * d.value;
        }
        out
    }

    /// `2a² V_C(θ) = −1/(4F²)`.
    pub fn scaled_curvature_potential(&self, theta: f64) -> f64 {
        let a = self.geom.minor_radius();
        2.0 * a * a * self.geom.curvature_potential(theta)
    }

    fn check_basis(&self, basis: &[BasisFunction], grid: &ProductGrid) -> Result<()> {
        if basis.is_empty() {
            return Err(Error::Argument("cannot assemble over an empty basis".into()));
        }
        let surface_grid = grid.q().len() == 1 && grid.q().nodes()[0] == 0.0;
        if self.model.is_surface() && !surface_grid {
            return Err(Error::Contract("surface model assembled on a layer grid".into()));
        }
        if self.model == Model::Layer && surface_grid {
            return Err(Error::Contract("layer model assembled on a surface grid".into()));
        }
        Ok(())
    }

    /// Overlap and Hamiltonian matrices by applying the operator to the ket
    /// and integrating against the bra.
    pub fn assemble(&self, basis: &[BasisFunction], grid: &ProductGrid) -> Result<Assembled> {
        self.check_basis(basis, grid)?;
        let samples = sample_basis(basis, grid);
        let actions: Vec<Vec<f64>> = basis
            .iter()
            .map(|f| grid.sample(|t, q| self.apply(f, t, q)))
            .collect();
        let s = overlap_from_samples(&samples, grid)?;
        let n = basis.len();
        let mut raw = DenseMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                raw[(r, c)] = grid.inner_product(&samples[r], &actions[c])?;
            }
        }
        let asymmetry = raw.asymmetry();
        if !(asymmetry <= MAX_ASYMMETRY) {
            return Err(Error::Asymmetry(asymmetry));
        }
        Ok(Assembled {
            h: raw.symmetrized(),
            s,
            asymmetry,
        })
    }

    /// Matrix of `2a² V_C` over a surface basis.
    pub fn curvature_potential_matrix(&self, basis: &[BasisFunction], grid: &ProductGrid) -> Result<DenseMatrix> {
        let samples = sample_basis(basis, grid);
        let vc = grid.sample(|t, _| self.scaled_curvature_potential(t));
        let weighted: Vec<Vec<f64>> = samples
            .iter()
            .map(|s| s.iter().zip(&vc).map(|(a, b)| a * b).collect())
            .collect();
        let n = basis.len();
        let mut out = DenseMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = grid.inner_product(&samples[r], &weighted[c])?;
            }
        }
        Ok(out)
    }
}
