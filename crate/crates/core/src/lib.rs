//! Two-time wave functions for a pair of massless Dirac particles in 1+1
//! dimensions, interacting only through boundary conditions on the set of
//! coincidence points.
//!
//! The solution of the initial boundary value problem is evaluated in closed
//! form by tracing multi-time characteristics back to the initial surface or
//! to the coincidence set. Around that evaluator sit the verification tools:
//! tensor current and continuity residuals, hypersurface quadrature of the
//! normalization integral, Lorentz boosts of solutions, single-time slices
//! with Schmidt spectra, and exchange antisymmetry.
//!
//! Units are natural (`c = 1`) and the metric signature is `diag(1, -1)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conservation;
pub mod current;
pub mod error;
pub mod geometry;
pub mod interaction;
pub mod lorentz;
pub mod scenario;
pub mod solver;
pub mod spinor;

pub use error::{Error, Result};
pub use geometry::{Configuration, RegionLabel, RelativeCoords};
pub use scenario::Scenario;
pub use solver::{Side, WaveFunction};
pub use spinor::{SpinOperator, Spinor4};

pub use num_complex::Complex64;
