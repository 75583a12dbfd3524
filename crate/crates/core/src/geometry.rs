//! Coordinates in a shell around a torus.
//!
//! A point is addressed by the poloidal angle `theta`, the azimuthal angle
//! `phi` and the signed offset `q` along the outward surface normal:
//!
//! ```text
//! r(θ, φ, q) = (R + a cosθ) ρ̂ + a sinθ ẑ + q n̂
//! ds² = (a + q)² dθ² + (R + (a + q) cosθ)² dφ² + dq²
//! ```
//!
//! Nothing depends on `phi`, so it never shows up in the API. Lengths are in
//! Å and energies in Å⁻² (ħ = m = 1).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusGeometry {
    major: f64,
    minor: f64,
}

/// A point inside the coordinate patch of a particular [`TorusGeometry`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerPoint {
    pub theta: f64,
    pub q: f64,
}

/// Metric scale factors `a_q = a + q` (θ direction) and
/// `F_q = R + a_q cosθ` (φ direction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricFactors {
    pub a_q: f64,
    pub f_q: f64,
}

/// Mean curvature `h` (Å⁻¹) and Gaussian curvature `k` (Å⁻²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvaturePair {
    pub h: f64,
    pub k: f64,
}

impl CurvaturePair {
    /// `h² − k = ¼(k₁ − k₂)²`, never negative up to rounding.
    pub fn umbilic_deviation(&self) -> f64 {
        self.h * self.h - self.k
    }
}

impl TorusGeometry {
    pub fn new(major_radius: f64, minor_radius: f64) -> Result<Self> {
        if !(major_radius.is_finite() && minor_radius.is_finite()) {
            return Err(Error::Domain("torus radii must be finite".into()));
        }
        if major_radius <= 0.0 || minor_radius <= 0.0 {
            return Err(Error::Domain(format!(
                "torus radii must be positive (R = {major_radius}, a = {minor_radius})"
            )));
        }
        if minor_radius >= major_radius {
            return Err(Error::Domain(format!(
                "minor radius must be smaller than major radius, a < R (R = {major_radius}, a = {minor_radius})"
            )));
        }
        Ok(Self {
            major: major_radius,
            minor: minor_radius,
        })
    }

    pub fn major_radius(&self) -> f64 {
        self.major
    }

    pub fn minor_radius(&self) -> f64 {
        self.minor
    }

    /// `α = a / R`, strictly inside (0, 1).
    pub fn aspect_ratio(&self) -> f64 {
        self.minor / self.major
    }

    /// Dimensionless surface factor `F = 1 + α cosθ`.
    pub fn surface_factor(&self, theta: f64) -> f64 {
        1.0 + self.aspect_ratio() * theta.cos()
    }

    /// Validates `(theta, q)` against the coordinate patch.
    pub fn point(&self, theta: f64, q: f64) -> Result<LayerPoint> {
        if !(theta.is_finite() && q.is_finite()) {
            return Err(Error::Domain("layer coordinates must be finite".into()));
        }
        let a_q = self.minor + q;
        let f_q = self.major + a_q * theta.cos();
        if a_q <= 0.0 || f_q <= 0.0 {
            return Err(Error::Domain(format!(
                "point (theta = {theta}, q = {q}) lies outside the coordinate patch (a + q = {a_q}, R + (a + q)cos(theta) = {f_q})"
            )));
        }
        Ok(LayerPoint { theta, q })
    }

    /// Largest open interval of normal offsets valid at every `theta`.
    pub fn offset_range(&self) -> (f64, f64) {
        (-self.minor, self.major - self.minor)
    }

    pub fn metric_factors(&self, p: LayerPoint) -> MetricFactors {
        let a_q = self.minor + p.q;
        MetricFactors {
            a_q,
            f_q: self.major + a_q * p.theta.cos(),
        }
    }

    /// Curvatures of the parallel surface at offset `q`: `k₁ = 1/a_q`,
    /// `k₂ = cosθ / F_q`.
    pub fn curvatures(&self, p: LayerPoint) -> CurvaturePair {
        let MetricFactors { a_q, f_q } = self.metric_factors(p);
        let k1 = 1.0 / a_q;
        let k2 = p.theta.cos() / f_q;
        CurvaturePair {
            h: 0.5 * (k1 + k2),
            k: k1 * k2,
        }
    }

    /// Curvature potential `V_C = −1 / (8 a² F²)` of the hard-constraint
    /// limit. Equals `−(h² − k)/2` on the surface.
    pub fn curvature_potential(&self, theta: f64) -> f64 {
        let f = self.surface_factor(theta);
        -1.0 / (8.0 * self.minor * self.minor * f * f)
    }

    /// Volume density `M(θ, q) = a_q F_q`; the surface density is `M(θ, 0)`.
    pub fn measure(&self, p: LayerPoint) -> f64 {
        let MetricFactors { a_q, f_q } = self.metric_factors(p);
        a_q * f_q
    }

    /// Norm-rescaling factor `W = 1 + 2q h₀ + q² k₀` with surface (q = 0)
    /// curvatures, so that `M(θ, q) = M(θ, 0) W(θ, q)` holds exactly.
    pub fn rescale_factor(&self, p: LayerPoint) -> f64 {
        let surface = self.curvatures(LayerPoint { theta: p.theta, q: 0.0 });
        1.0 + 2.0 * p.q * surface.h + p.q * p.q * surface.k
    }
}
