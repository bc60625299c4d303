//! Exact computations for finite-dimensional asymmetric normed spaces.
//!
//! Asymmetric norms are polyhedral gauges `p(x) = max_i ⟨a_i, x⟩`, so every
//! supremum over a unit ball is a linear program or a vertex enumeration and
//! all arithmetic is exact.

pub mod asym_space;
pub mod bilinear_ops;
pub mod error;
pub mod exec;
pub mod linear_ops;
pub mod polyhedral;
pub mod precompact;
pub mod rational;

pub use asym_space::{AsymNorm, NormedCone, QuasiMetric};
pub use error::{Error, Result};
pub use exec::Exec;
pub use polyhedral::{Caps, Halfspace, LpOutcome, LpStatus, Polyhedron, VRep};
pub use rational::{Extended, Rational, Vector};
