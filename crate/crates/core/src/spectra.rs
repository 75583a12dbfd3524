//! End-to-end solve: grid → basis → matrices → Gram–Schmidt → Jacobi →
//! `β` extraction and normalized eigenfunctions.

use serde::{Deserialize, Serialize};

use crate::basis::{BasisFunction, BasisSpec, Confinement, Model, OscillatorExponent, Parity, build_basis};
use crate::error::{Error, Result};
use crate::geometry::TorusGeometry;
use crate::hamiltonian::ModelOperator;
use crate::linalg::{gram_schmidt, sample_basis, symmetric_eigen};
use crate::quadrature::{ProductGrid, gauss_legendre, periodic_trapezoid};

/// Basis sizes used when reproducing the published tables.
pub const TABLE_N_THETA_LAYER: usize = 3;
pub const TABLE_N_Q_LAYER: usize = 2;
/// Surface reference spectra need `cos 0θ … cos 4θ` to converge.
pub const TABLE_N_THETA_SURFACE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub n_theta: usize,
    pub n_q: usize,
    /// Oscillator truncation in standard deviations of `|ψ|²`.
    pub sigma_multiple: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            n_theta: 64,
            n_q: 40,
            sigma_multiple: 6.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub geometry: GeometryConfig,
    pub confinement: Option<Confinement>,
    pub basis: BasisSpec,
    pub quadrature: QuadratureConfig,
    pub table_reproduction: bool,
}

/// Serializable mirror of [`TorusGeometry`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    pub major_radius: f64,
    pub minor_radius: f64,
}

impl GeometryConfig {
    pub fn build(&self) -> Result<TorusGeometry> {
        TorusGeometry::new(self.major_radius, self.minor_radius)
    }
}

impl From<TorusGeometry> for GeometryConfig {
    fn from(g: TorusGeometry) -> Self {
        Self {
            major_radius: g.major_radius(),
            minor_radius: g.minor_radius(),
        }
    }
}

impl SolveConfig {
    pub fn new(geom: TorusGeometry, confinement: Option<Confinement>, basis: BasisSpec) -> Self {
        Self {
            geometry: geom.into(),
            confinement,
            basis,
            quadrature: QuadratureConfig::default(),
            table_reproduction: false,
        }
    }

    /// Paper-sized layer problem: 3 θ × 2 q functions, `m = 0`, even parity.
    pub fn table_layer(geom: TorusGeometry, confinement: Confinement) -> Self {
        let mut cfg = Self::new(
            geom,
            Some(confinement),
            BasisSpec::new(Model::Layer, TABLE_N_THETA_LAYER, TABLE_N_Q_LAYER, 0, Parity::Even),
        );
        cfg.table_reproduction = true;
        cfg
    }

    /// Reference surface problem with `cos 0θ … cos 4θ`, `m = 0`.
    pub fn table_surface(geom: TorusGeometry, model: Model) -> Self {
        let mut cfg = Self::new(geom, None, BasisSpec::new(model, TABLE_N_THETA_SURFACE, 1, 0, Parity::Even));
        cfg.table_reproduction = true;
        cfg
    }

    pub fn model(&self) -> Model {
        self.basis.model
    }

    pub fn validate(&self) -> Result<TorusGeometry> {
        let geom = self.geometry.build()?;
        self.basis.validate()?;
        if self.model() == Model::Layer && self.confinement.is_none() {
            return Err(Error::Argument("layer model requires a confinement potential".into()));
        }
        if self.quadrature.n_theta == 0 || (self.model() == Model::Layer && self.quadrature.n_q == 0) {
            return Err(Error::Argument("quadrature point counts must be positive".into()));
        }
        if self.table_reproduction {
            let expected_theta = if self.model().is_surface() {
                TABLE_N_THETA_SURFACE
            } else {
                TABLE_N_THETA_LAYER
            };
            let b = &self.basis;
            let layer_ok = self.model().is_surface() || b.n_q == TABLE_N_Q_LAYER;
            if b.n_theta != expected_theta || !layer_ok || b.m != 0 || b.parity != Parity::Even || b.first_theta_mode != 0 {
                return Err(Error::Argument(format!(
                    "table reproduction requires n_theta = {expected_theta}{}, m = 0 and even parity",
                    if self.model().is_surface() { "" } else { ", n_q = 2" }
                )));
            }
            if let Some(Confinement::Oscillator { exponent: OscillatorExponent::Paper, .. }) = self.confinement {
                return Err(Error::Argument(
                    "table reproduction uses the physical oscillator exponent".into(),
                ));
            }
        }
        Ok(geom)
    }

    /// Product grid matching the model and confinement.
    pub fn grid(&self, geom: &TorusGeometry) -> Result<ProductGrid> {
        let theta = periodic_trapezoid(self.quadrature.n_theta)?;
        match (self.model(), self.confinement) {
            (Model::Layer, Some(conf)) => {
                let (lo, hi) = conf.interval(geom, self.quadrature.sigma_multiple)?;
                ProductGrid::layer(geom, theta, gauss_legendre(self.quadrature.n_q, lo, hi)?)
            }
            _ => ProductGrid::surface(geom, theta),
        }
    }
}

/// Subtracts the normal-mode ground energy and scales by `2a²`.
///
/// Surface models carry no normal energy, so `β = 2a²E` there.
pub fn beta_from_energy(energy: f64, cfg: &SolveConfig) -> f64 {
    let a = cfg.geometry.minor_radius;
    let normal = match (cfg.model(), cfg.confinement) {
        (Model::Layer, Some(conf)) => conf.normal_ground_energy(),
        _ => 0.0,
    };
    2.0 * a * a * (energy - normal)
}

/// Rescales `coeffs` so that `∫ ψ² M dθ dφ dq = 1`.
///
/// Returns the scaled coefficients and `|norm − 1|` after scaling.
pub fn normalize_state(coeffs: &[f64], basis: &[BasisFunction], grid: &ProductGrid) -> Result<(Vec<f64>, f64)> {
    if coeffs.len() != basis.len() {
        return Err(Error::Argument("coefficient count differs from basis size".into()));
    }
    let psi = state_samples(coeffs, &sample_basis(basis, grid));
    let norm2 = grid.inner_product(&psi, &psi)?;
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return Err(Error::Numerical("cannot normalize a zero-norm state".into()));
    }
    let scale = norm2.sqrt().recip();
    let scaled: Vec<f64> = coeffs.iter().map(|c| c * scale).collect();
    let psi = state_samples(&scaled, &sample_basis(basis, grid));
    let residual = (grid.inner_product(&psi, &psi)? - 1.0).abs();
    Ok((scaled, residual))
}

fn state_samples(coeffs: &[f64], samples: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; samples.first().map_or(0, Vec::len)];
    for (c, s) in coeffs.iter().zip(samples) {
        for (o, v) in out.iter_mut().zip(s) {
            *o += c * v;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisLabel {
    pub q_index: usize,
    pub theta_mode: u32,
    pub parity: Parity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct State {
    /// Å⁻²
    pub energy: f64,
    pub beta: f64,
    /// Normal-mode index carrying the largest share of `Σ c²`.
    pub q_sector: usize,
    /// Normalized expansion over the raw basis.
    pub coefficients: Vec<f64>,
    pub norm_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub asymmetry: f64,
    pub gram_condition: f64,
    /// Largest `|C S Cᵀ − I|` entry.
    pub orthonormality_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub config: SolveConfig,
    pub basis: Vec<BasisLabel>,
    /// Sorted ascending.
    pub states: Vec<State>,
    pub diagnostics: Diagnostics,
}

impl SpectralResult {
    pub fn betas(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.beta).collect()
    }

    /// Indices of states whose normal motion is in the ground mode.
    pub fn ground_sector(&self) -> Vec<usize> {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, s)| s.q_sector == 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn ground_sector_betas(&self) -> Vec<f64> {
        self.ground_sector().into_iter().map(|i| self.states[i].beta).collect()
    }
}

pub fn solve(cfg: &SolveConfig) -> Result<SpectralResult> {
    let geom = cfg.validate()?;
    let grid = cfg.grid(&geom)?;
    let basis = build_basis(&cfg.basis, cfg.confinement.as_ref())?;
    let op = ModelOperator::new(cfg.model(), geom, cfg.confinement, cfg.basis.m)?;
    let assembled = op.assemble(&basis, &grid)?;
    let ortho = gram_schmidt(&basis, &grid)?;
    let c = &ortho.coefficients;
    let orthonormality_error = assembled
        .s
        .congruence(c)
        .sub(&crate::linalg::DenseMatrix::identity(basis.len()))
        .max_abs();

    let projected = assembled.h.congruence(c).symmetrized();
    let pairs = symmetric_eigen(&projected)?;
    let n = basis.len();
    let n_sectors = basis.iter().map(|f| f.q_index).max().unwrap_or(0) + 1;
    let mut states = Vec::with_capacity(n);
    for pair in pairs {
        // raw coefficients: ψ = Σ_r y_r φ_r with φ_r = Σ_k C[r][k] Φ_k
        let raw: Vec<f64> = (0..n).map(|k| (0..n).map(|r| pair.vector[r] * c[(r, k)]).sum()).collect();
        let (coefficients, norm_residual) = normalize_state(&raw, &basis, &grid)?;
        let mut mass = vec![0.0; n_sectors];
        for (f, x) in basis.iter().zip(&coefficients) {
            mass[f.q_index] += x * x;
        }
        let q_sector = mass
            .iter()
            .enumerate()
            .fold(0, |best, (j, &w)| if w > mass[best] { j } else { best });
        let (energy, beta) = if cfg.model().is_surface() {
            let a = geom.minor_radius();
            (pair.value / (2.0 * a * a), pair.value)
        } else {
            (pair.value, beta_from_energy(pair.value, cfg))
        };
        states.push(State {
            energy,
            beta,
            q_sector,
            coefficients,
            norm_residual,
        });
    }
    Ok(SpectralResult {
        config: *cfg,
        basis: basis
            .iter()
            .map(|f| BasisLabel {
                q_index: f.q_index,
                theta_mode: f.theta_mode(),
                parity: f.theta_factor.parity,
            })
            .collect(),
        states,
        diagnostics: crate::spectra::Diagnostics {
            asymmetry: assembled.asymmetry,
            gram_condition: ortho.gram_condition,
            orthonormality_error,
        },
    })
}

/// Reference term used to scale a θ series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientConvention {
    /// Divide by the `n = 0` coefficient.
    ConstantTerm,
    /// Divide by the `cos θ` coefficient.
    CosThetaTerm,
}

/// θ-series ratios of one state, taken from its dominant normal mode and
/// ordered by θ mode.
pub fn format_coefficients(
    result: &SpectralResult,
    state_index: usize,
    convention: CoefficientConvention,
) -> Result<Vec<f64>> {
    let state = result.states.get(state_index).ok_or_else(|| {
        Error::Argument(format!("state index {state_index} out of range ({} states)", result.states.len()))
    })?;
    let mut series: Vec<(u32, f64)> = result
        .basis
        .iter()
        .zip(&state.coefficients)
        .filter(|(label, _)| label.q_index == state.q_sector)
        .map(|(label, &c)| (label.theta_mode, c))
        .collect();
    series.sort_by_key(|&(n, _)| n);
    let parity = result.basis.first().map_or(Parity::Even, |l| l.parity);
    let wanted = match convention {
        CoefficientConvention::ConstantTerm => 0,
        CoefficientConvention::CosThetaTerm => 1,
    };
    let reference = series
        .iter()
        .find(|&&(n, _)| n == wanted && parity == Parity::Even)
        .map(|&(_, c)| c)
        .ok_or_else(|| Error::Convention(format!("basis has no {convention:?} to normalize by")))?;
    if reference.abs() < 1e-12 {
        return Err(Error::Convention(format!(
            "reference coefficient {reference:e} is too small to normalize by"
        )));
    }
    Ok(series.into_iter().map(|(_, c)| c / reference).collect())
}

/// Renders ratios as `1 - 0.3676 cos θ + 0.0693 cos 2θ`, skipping terms more
/// than an order of magnitude below the smallest of the first three.
pub fn display_series(ratios: &[f64], parity: Parity) -> String {
    let printed = &ratios[..ratios.len().min(3)];
    let smallest = printed
        .iter()
        .map(|r| r.abs())
        .filter(|&r| r > 1e-12)
        .fold(f64::INFINITY, f64::min);
    let first = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let mut out = String::new();
    for (i, &r) in ratios.iter().enumerate() {
        if r.abs() <= 1e-12 || (i >= 3 && r.abs() < 0.1 * smallest) {
            continue;
        }
        let n = first + i;
        let term = match (parity, n) {
            (Parity::Even, 0) => String::new(),
            (Parity::Even, 1) => "cos θ".into(),
            (Parity::Even, n) => format!("cos {n}θ"),
            (Parity::Odd, 1) => "sin θ".into(),
            (Parity::Odd, n) => format!("sin {n}θ"),
        };
        let unit = (r.abs() - 1.0).abs() < 1e-12;
        let magnitude = if unit && !term.is_empty() {
            String::new()
        } else if unit {
            "1".into()
        } else {
            format!("{:.4}", r.abs())
        };
        let body = match (magnitude.is_empty(), term.is_empty()) {
            (true, _) => term,
            (false, true) => magnitude,
            (false, false) => format!("{magnitude} {term}"),
        };
        if out.is_empty() {
            if r < 0.0 {
                out.push('-');
            }
            out.push_str(&body);
        } else {
            out.push_str(if r < 0.0 { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() { "0".into() } else { out }
}
