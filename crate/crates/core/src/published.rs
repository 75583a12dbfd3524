//! Published reference values for the six configurations at R = 500 Å,
//! a = 250 Å, and helpers that build the matching solver configs.

use crate::basis::{Confinement, Model, OscillatorExponent};
use crate::error::Result;
use crate::geometry::TorusGeometry;
use crate::spectra::SolveConfig;

pub const MAJOR_RADIUS: f64 = 500.0;
pub const MINOR_RADIUS: f64 = 250.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Column {
    HardwallL25,
    HardwallL10,
    OscillatorOmega005,
    OscillatorOmega01,
    SurfaceHardConstraint,
    SurfaceBare,
}

impl Column {
    pub const ALL: [Column; 6] = [
        Column::HardwallL25,
        Column::HardwallL10,
        Column::OscillatorOmega005,
        Column::OscillatorOmega01,
        Column::SurfaceHardConstraint,
        Column::SurfaceBare,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Column::HardwallL25 => "L=25",
            Column::HardwallL10 => "L=10",
            Column::OscillatorOmega005 => "omega=0.05",
            Column::OscillatorOmega01 => "omega=0.1",
            Column::SurfaceHardConstraint => "H_C",
            Column::SurfaceBare => "H_0",
        }
    }

    pub fn is_layer(self) -> bool {
        !matches!(self, Column::SurfaceHardConstraint | Column::SurfaceBare)
    }

    pub fn config(self) -> Result<SolveConfig> {
        let geom = TorusGeometry::new(MAJOR_RADIUS, MINOR_RADIUS)?;
        let osc = |omega| Confinement::oscillator(omega, OscillatorExponent::Physical);
        Ok(match self {
            Column::HardwallL25 => SolveConfig::table_layer(geom, Confinement::hardwall_centered(25.0)?),
            Column::HardwallL10 => SolveConfig::table_layer(geom, Confinement::hardwall_centered(10.0)?),
            Column::OscillatorOmega005 => SolveConfig::table_layer(geom, osc(0.05)?),
            Column::OscillatorOmega01 => SolveConfig::table_layer(geom, osc(0.1)?),
            Column::SurfaceHardConstraint => SolveConfig::table_surface(geom, Model::SurfaceHardConstraint),
            Column::SurfaceBare => SolveConfig::table_surface(geom, Model::SurfaceBare),
        })
    }

    /// `(β₀, β₁, β₂)`.
    pub fn betas(self) -> [f64; 3] {
        match self {
            Column::HardwallL25 => [-0.3405, 0.6618, 3.7919],
            Column::HardwallL10 => [-0.3406, 0.6610, 3.7886],
            Column::OscillatorOmega005 => [-0.3489, 0.6515, 3.7800],
            Column::OscillatorOmega01 => [-0.3488, 0.6446, 3.7876],
            Column::SurfaceHardConstraint => [-0.3511, 0.6386, 3.6529],
            Column::SurfaceBare => [0.0, 1.1223, 4.0520],
        }
    }

    /// Ground state `(1, cos θ, cos 2θ)` ratios over the constant term.
    /// The bare ground state is the constant alone.
    pub fn ground_ratios(self) -> &'static [f64] {
        match self {
            Column::HardwallL25 => &[1.0, -0.3676, 0.0693],
            Column::HardwallL10 => &[1.0, -0.3675, 0.0693],
            Column::OscillatorOmega005 => &[1.0, -0.3580, 0.0669],
            Column::OscillatorOmega01 => &[1.0, -0.3567, 0.0654],
            Column::SurfaceHardConstraint => &[1.0, -0.3679, 0.0784],
            Column::SurfaceBare => &[1.0],
        }
    }

    /// First excited state ratios over the `cos θ` term.
    pub fn excited_ratios(self) -> &'static [f64] {
        match self {
            Column::HardwallL25 => &[-0.0842, 1.0, -0.1369],
            Column::HardwallL10 => &[-0.0842, 1.0, -0.1370],
            Column::OscillatorOmega005 => &[-0.0879, 1.0, -0.1358],
            Column::OscillatorOmega01 => &[-0.0877, 1.0, -0.1362],
            Column::SurfaceHardConstraint => &[-0.0851, 1.0, -0.1540],
            Column::SurfaceBare => &[-0.2500, 1.0, -0.0820],
        }
    }
}
