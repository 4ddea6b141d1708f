//! Geometric side of the Selberg trace formula for odd-dimensional finite
//! volume hyperbolic manifolds, small-time heat-trace expansions with
//! logarithmic terms, and zeta-regularized determinants / analytic torsion.

// `!(x > 0.0)` is the idiom used throughout to reject NaN along with the bound
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod error;
pub mod expansion;
pub mod geometry;
pub mod plancherel;
pub mod quad;
pub mod rep_theory;
pub mod scalar;
pub mod series;
pub mod special;
pub mod stationary_phase;
pub mod trace_formula;
pub mod zeta_torsion;

pub use error::{Error, Result};
