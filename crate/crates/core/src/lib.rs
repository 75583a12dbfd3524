//! Low-lying spectra of a particle near a torus.
//!
//! Three models are solved with the same machinery: a particle confined to a
//! finite layer around the surface (hard walls or an oscillator in the
//! normal direction), the `q → 0` surface limit carrying the curvature
//! potential `V_C`, and the bare surface Hamiltonian without it. Each model
//! is expanded in products of normal-mode and trigonometric trial functions,
//! orthonormalized by weighted Gram–Schmidt and diagonalized with Jacobi.
//!
//! ```no_run
//! use torus_layer::{Confinement, SolveConfig, TorusGeometry, solve};
//!
//! let geom = TorusGeometry::new(500.0, 250.0)?;
//! let cfg = SolveConfig::table_layer(geom, Confinement::hardwall_centered(25.0)?);
//! let result = solve(&cfg)?;
//! println!("{:?}", result.ground_sector_betas());
//! # Ok::<(), torus_layer::Error>(())
//! ```

pub mod basis;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod hamiltonian;
pub mod linalg;
pub mod published;
pub mod quadrature;
pub mod spectra;

pub use basis::{BasisFunction, BasisSpec, Confinement, Model, OscillatorExponent, Parity, build_basis};
pub use error::{Error, Result};
pub use geometry::{CurvaturePair, LayerPoint, MetricFactors, TorusGeometry};
pub use hamiltonian::{Assembled, ModelOperator};
pub use linalg::{DenseMatrix, OrthoBasis, generalized_eigen_oracle, gram_schmidt, overlap_matrix, symmetric_eigen};
pub use quadrature::{Grid1D, ProductGrid, gauss_legendre, periodic_trapezoid};
pub use spectra::{
    CoefficientConvention, QuadratureConfig, SolveConfig, SpectralResult, State, beta_from_energy,
    format_coefficients, normalize_state, solve,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
