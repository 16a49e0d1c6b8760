//! pslab-core: a numerical laboratory for pseudospectra.
//!
//! The crate evaluates and contours `Psi_T(z) = ||(T - z)^{-1}||^{-1}` for
//! dense complex matrices and for finite sections of banded infinite
//! operator models, checks a family of resolvent-norm inequalities
//! empirically, constructs nilpotent matrices whose pseudospectra realize a
//! prescribed chain of nested domains, and runs matrix-square-root
//! oscillation experiments through a triangular-Toeplitz functional
//! calculus.

pub mod checks;
pub mod contour;
pub mod cx;
pub mod eigen;
pub mod error;
pub mod field;
pub mod hardy;
pub mod linalg;
pub mod matfun;
pub mod matrix;
pub mod models;
pub mod render;
pub mod sample;
pub mod series;
pub mod shapes;
pub mod svd;

pub use checks::{PropertyReport, Witness};
pub use contour::LevelSet;
pub use cx::{cx, Cx};
pub use error::{Error, Result};
pub use field::{GridSpec, ScalarField};
pub use hardy::{DomainSpec, HardyBasis, NilpotentBlock, QuadratureRule};
pub use matfun::OscillationScanResult;
pub use matrix::CMatrix;
pub use models::OperatorModel;
pub use sample::Lcg64;
pub use series::PowerSeries;
pub use shapes::{ShapeProblem, ShapeResult};
