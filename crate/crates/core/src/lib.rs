//! Separability analysis for bipartite quantum states through correlation
//! matrices of local orthonormal operator bases.
//!
//! The central object is a two-parameter family of entanglement criteria:
//! the correlation matrix of a state has its identity row and column scaled
//! by nonnegative factors (x, y), and the trace norm of the result is
//! compared against a bound every separable state obeys. Classical tests
//! arise as points of the family: plain realignment (CCNR) at (1, 1), the
//! de Vicente test at (0, 0), and stronger choices such as the ESIC point
//! (sqrt(d1+1), sqrt(d2+1)).
//!
//! On the embedded isotropic family the detection threshold of every (x, y)
//! criterion has a closed form, including the exact minimum over the whole
//! family, which coincides with the threshold of the enhanced
//! (marginal-subtracted) realignment test. The [`analytic`] module carries
//! those formulas; [`criteria`] evaluates the tests numerically through the
//! SVD so the two routes can cross-validate each other.
//!
//! Modules:
//!
//! - [`linalg`]: dense complex matrices, realignment, partial transpose and
//!   trace, trace norms, Hermitian spectra.
//! - [`states`]: validated density matrices, the isotropic and Werner-like
//!   families, seeded random-state generators.
//! - [`bases`]: generalized Gell-Mann and rotated canonical bases,
//!   correlation matrices, scaling, separability bounds.
//! - [`criteria`]: criterion evaluation, reports, numerical threshold
//!   location by bisection.
//! - [`analytic`]: closed-form thresholds, the quadratic route, the
//!   minimizing hyperbola, and related polynomial identities.

pub mod analytic;
pub mod bases;
pub mod criteria;
pub mod error;
pub mod linalg;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{BipartiteShape, CMatrix, CVector, Factor, C64};
