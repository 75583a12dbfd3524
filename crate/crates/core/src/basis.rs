//! Trial functions: products of a normal-mode factor in `q` and a
//! trigonometric factor in `θ`, with closed-form derivatives.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::TorusGeometry;

/// Which of the three Hamiltonians is being solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Finite layer around the surface, full three-dimensional kinetic energy.
    Layer,
    /// Surface with the curvature potential of the `q → 0` limit.
    SurfaceHardConstraint,
    /// Surface without the curvature potential.
    SurfaceBare,
}

impl Model {
    pub fn is_surface(self) -> bool {
        !matches!(self, Model::Layer)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Model::Layer => "layer",
            Model::SurfaceHardConstraint => "surface_hard_constraint",
            Model::SurfaceBare => "surface_bare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    /// `cos(nθ)`, `n ≥ 0`
    Even,
    /// `sin(nθ)`, `n ≥ 1`
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Gaussian width used for oscillator trial functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OscillatorExponent {
    /// `e^{−ωq²}`, as printed next to the basis definitions.
    Paper,
    /// `e^{−ωq²/2}`, the ground state of `ω²q²/2`.
    Physical,
}

impl OscillatorExponent {
    pub fn as_str(self) -> &'static str {
        match self {
            OscillatorExponent::Paper => "paper",
            OscillatorExponent::Physical => "physical",
        }
    }

    fn coefficient(self, omega: f64) -> f64 {
        match self {
            OscillatorExponent::Paper => omega,
            OscillatorExponent::Physical => 0.5 * omega,
        }
    }
}

/// Normal-direction confining potential `V_n(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Confinement {
    /// Infinite walls at `±L/2`.
    HardwallCentered { width: f64 },
    /// Infinite walls at `0` and `L`.
    HardwallOffset { width: f64 },
    /// `V_n = ω² q² / 2`.
    Oscillator {
        omega: f64,
        exponent: OscillatorExponent,
    },
}

impl Confinement {
    pub fn hardwall_centered(width: f64) -> Result<Self> {
        check_positive("confinement width L", width)?;
        Ok(Confinement::HardwallCentered { width })
    }

    pub fn hardwall_offset(width: f64) -> Result<Self> {
        check_positive("confinement width L", width)?;
        Ok(Confinement::HardwallOffset { width })
    }

    pub fn oscillator(omega: f64, exponent: OscillatorExponent) -> Result<Self> {
        check_positive("oscillator stiffness omega", omega)?;
        Ok(Confinement::Oscillator { omega, exponent })
    }

    pub fn kind_str(&self) -> &'static str {
        match self {
            Confinement::HardwallCentered { .. } => "hardwall_centered",
            Confinement::HardwallOffset { .. } => "hardwall_offset",
            Confinement::Oscillator { .. } => "oscillator",
        }
    }

    /// Potential inside the support; hard walls are enforced by the basis.
    pub fn potential(&self, q: f64) -> f64 {
        match *self {
            Confinement::Oscillator { omega, .. } => 0.5 * omega * omega * q * q,
            _ => 0.0,
        }
    }

    /// Ground energy of the normal motion alone: `π²/2L²` or `ω/2`.
    pub fn normal_ground_energy(&self) -> f64 {
        match *self {
            Confinement::HardwallCentered { width } | Confinement::HardwallOffset { width } => {
                PI * PI / (2.0 * width * width)
            }
            Confinement::Oscillator { omega, .. } => 0.5 * omega,
        }
    }

    /// Integration interval in `q`.
    ///
    /// Oscillator functions are truncated at `sigma_multiple` standard
    /// deviations of `|ψ|²` and clipped to the coordinate patch; hard walls
    /// must fit inside the patch.
    pub fn interval(&self, geom: &TorusGeometry, sigma_multiple: f64) -> Result<(f64, f64)> {
        let (patch_lo, patch_hi) = geom.offset_range();
        match *self {
            Confinement::HardwallCentered { width } => {
                check_inside(-0.5 * width, 0.5 * width, patch_lo, patch_hi)
            }
            Confinement::HardwallOffset { width } => check_inside(0.0, width, patch_lo, patch_hi),
            Confinement::Oscillator { omega, exponent } => {
                check_positive("quadrature sigma multiple", sigma_multiple)?;
                // |e^{-c q²}|² = e^{-2c q²} has standard deviation 1/(2√c)
                let sigma = 0.5 / exponent.coefficient(omega).sqrt();
                let half = sigma_multiple * sigma;
                let margin = 1e-9 * (patch_hi - patch_lo);
                Ok(((-half).max(patch_lo + margin), half.min(patch_hi - margin)))
            }
        }
    }
}

fn check_positive(what: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Argument(format!("{what} must be positive and finite (got {value})")))
    }
}

fn check_inside(lo: f64, hi: f64, patch_lo: f64, patch_hi: f64) -> Result<(f64, f64)> {
    if lo <= patch_lo || hi >= patch_hi {
        return Err(Error::Domain(format!(
            "hard walls [{lo}, {hi}] extend outside the coordinate patch ({patch_lo}, {patch_hi})"
        )));
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub model: Model,
    pub n_theta: usize,
    /// Ignored by surface models.
    pub n_q: usize,
    pub m: i32,
    pub parity: Parity,
    /// Lowest `n` in `cos(nθ)`/`sin(nθ)`.
    pub first_theta_mode: u32,
}

impl BasisSpec {
    pub fn new(model: Model, n_theta: usize, n_q: usize, m: i32, parity: Parity) -> Self {
        let first_theta_mode = match parity {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        Self {
            model,
            n_theta,
            n_q,
            m,
            parity,
            first_theta_mode,
        }
    }

    pub fn with_first_theta_mode(mut self, first: u32) -> Self {
        self.first_theta_mode = first;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_theta == 0 {
            return Err(Error::Argument("basis needs at least one theta function".into()));
        }
        if self.model == Model::Layer && self.n_q == 0 {
            return Err(Error::Argument("layer basis needs at least one q function".into()));
        }
        if self.parity == Parity::Odd && self.first_theta_mode == 0 {
            return Err(Error::Argument(
                "odd-parity theta functions sin(n theta) start at n = 1".into(),
            ));
        }
        Ok(())
    }

    /// Number of functions produced by [`build_basis`].
    pub fn len(&self) -> usize {
        if self.model.is_surface() {
            self.n_theta
        } else {
            self.n_theta * self.n_q
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Value and first two derivatives of a one-variable factor.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Jet {
    v: f64,
    d1: f64,
    d2: f64,
}

/// `cos(nθ)` or `sin(nθ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaFactor {
    pub parity: Parity,
    pub n: u32,
}

impl ThetaFactor {
    pub fn new(parity: Parity, n: u32) -> Result<Self> {
        if parity == Parity::Odd && n == 0 {
            return Err(Error::Argument("sin(0 theta) vanishes identically".into()));
        }
        Ok(Self { parity, n })
    }

    fn jet(&self, theta: f64) -> Jet {
        let n = f64::from(self.n);
        let (s, c) = (n * theta).sin_cos();
        match self.parity {
            Parity::Even => Jet {
                v: c,
                d1: -n * s,
                d2: -n * n * c,
            },
            Parity::Odd => Jet {
                v: s,
                d1: n * c,
                d2: -n * n * s,
            },
        }
    }
}

/// Normal-mode factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QFactor {
    /// Surface models: no `q` dependence.
    Constant,
    /// `cos(kq)`
    Cos { k: f64 },
    /// `sin(kq)`
    Sin { k: f64 },
    /// `e^{−c q²} H_order(s q)` with physicists' Hermite polynomials.
    Hermite { c: f64, s: f64, order: u32 },
}

/// `(H_j(x), H_j'(x), H_j''(x))` from `H_{j+1} = 2x H_j − 2j H_{j−1}`.
fn hermite(order: u32, x: f64) -> (f64, f64, f64) {
    let mut table = vec![1.0, 2.0 * x];
    for j in 1..order as usize {
        let next = 2.0 * x * table[j] - 2.0 * j as f64 * table[j - 1];
        table.push(next);
    }
    let j = order as usize;
    let jf = j as f64;
    let h = table[j];
    let dh = if j >= 1 { 2.0 * jf * table[j - 1] } else { 0.0 };
    let ddh = if j >= 2 { 4.0 * jf * (jf - 1.0) * table[j - 2] } else { 0.0 };
    (h, dh, ddh)
}

impl QFactor {
    /// `j`-th function (0-based) of the natural ladder for `conf`.
    pub fn ladder(conf: &Confinement, j: u32) -> Self {
        match *conf {
            Confinement::HardwallCentered { width } => {
                let mode = f64::from(j + 1);
                let k = mode * PI / width;
                if j % 2 == 0 {
                    QFactor::Cos { k }
                } else {
                    QFactor::Sin { k }
                }
            }
            Confinement::HardwallOffset { width } => QFactor::Sin {
                k: f64::from(j + 1) * PI / width,
            },
            Confinement::Oscillator { omega, exponent } => QFactor::Hermite {
                c: exponent.coefficient(omega),
                s: omega.sqrt(),
                order: j,
            },
        }
    }

    fn jet(&self, q: f64) -> Jet {
        match *self {
            QFactor::Constant => Jet { v: 1.0, d1: 0.0, d2: 0.0 },
            QFactor::Cos { k } => {
                let (s, c) = (k * q).sin_cos();
                Jet {
                    v: c,
                    d1: -k * s,
                    d2: -k * k * c,
                }
            }
            QFactor::Sin { k } => {
                let (s, c) = (k * q).sin_cos();
                Jet {
                    v: s,
                    d1: k * c,
                    d2: -k * k * s,
                }
            }
            QFactor::Hermite { c, s, order } => {
                let g = (-c * q * q).exp();
                let g1 = -2.0 * c * q * g;
                let g2 = (4.0 * c * c * q * q - 2.0 * c) * g;
                let (h, dh, ddh) = hermite(order, s * q);
                let p1 = s * dh;
                let p2 = s * s * ddh;
                Jet {
                    v: g * h,
                    d1: g1 * h + g * p1,
                    d2: g2 * h + 2.0 * g1 * p1 + g * p2,
                }
            }
        }
    }
}

/// Value and partial derivatives of a basis function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub value: f64,
    pub d_theta: f64,
    pub d_theta2: f64,
    pub d_q: f64,
    pub d_q2: f64,
}

/// `Φ(θ, q) = χ_j(q) · t_n(θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFunction {
    pub q_factor: QFactor,
    pub theta_factor: ThetaFactor,
    /// Position on the normal-mode ladder (0 for surface models).
    pub q_index: usize,
}

impl BasisFunction {
    pub fn new(q_factor: QFactor, theta_factor: ThetaFactor, q_index: usize) -> Self {
        Self {
            q_factor,
            theta_factor,
            q_index,
        }
    }

    pub fn theta_mode(&self) -> u32 {
        self.theta_factor.n
    }

    pub fn value(&self, theta: f64, q: f64) -> f64 {
        self.q_factor.jet(q).v * self.theta_factor.jet(theta).v
    }

    pub fn eval_derivatives(&self, theta: f64, q: f64) -> Derivatives {
        let t = self.theta_factor.jet(theta);
        let n = self.q_factor.jet(q);
        Derivatives {
            value: n.v * t.v,
            d_theta: n.v * t.d1,
            d_theta2: n.v * t.d2,
            d_q: n.d1 * t.v,
            d_q2: n.d2 * t.v,
        }
    }

    /// Short human-readable label such as `cos(2θ)·sin(2πq/L)`.
    pub fn label(&self) -> String {
        let t = match (self.theta_factor.parity, self.theta_factor.n) {
            (Parity::Even, 0) => "1".to_string(),
            (Parity::Even, 1) => "cos θ".to_string(),
            (Parity::Even, n) => format!("cos {n}θ"),
            (Parity::Odd, 1) => "sin θ".to_string(),
            (Parity::Odd, n) => format!("sin {n}θ"),
        };
        match self.q_factor {
            QFactor::Constant => t,
            QFactor::Cos { k } => format!("{t}·cos({k:.6}q)"),
            QFactor::Sin { k } => format!("{t}·sin({k:.6}q)"),
            QFactor::Hermite { c, order, .. } => format!("{t}·exp(-{c}q²)H{order}"),
        }
    }
}

/// Builds the basis in q-major order: `(j = 0, n = first..)`, then `(j = 1, …)`.
///
/// Gram–Schmidt runs in this order, which fixes the signs of reported
/// coefficients.
pub fn build_basis(spec: &BasisSpec, conf: Option<&Confinement>) -> Result<Vec<BasisFunction>> {
    spec.validate()?;
    let thetas = (0..spec.n_theta as u32)
        .map(|i| ThetaFactor::new(spec.parity, spec.first_theta_mode + i))
        .collect::<Result<Vec<_>>>()?;
    if spec.model.is_surface() {
        return Ok(thetas
            .into_iter()
            .map(|t| BasisFunction::new(QFactor::Constant, t, 0))
            .collect());
    }
    let conf = conf.ok_or_else(|| {
        Error::Argument("layer model requires a confinement potential".into())
    })?;
    let mut out = Vec::with_capacity(spec.len());
    for j in 0..spec.n_q {
        let qf = QFactor::ladder(conf, j as u32);
        out.extend(thetas.iter().map(|&t| BasisFunction::new(qf, t, j)));
    }
    Ok(out)
}
