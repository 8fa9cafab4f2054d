//! Executable cocycle calculus for gauge anomalies.
//!
//! The crate evaluates Lie algebra 2- and 3-cocycles of current algebras
//! exactly on trigonometric/polynomial fields, builds the loop-group central
//! extension and its path-group 3-cocycle by quadrature, models the Schwinger
//! term on truncated fermionic Fock spaces, and computes MacLane obstruction
//! classes of finite group extensions.

#![allow(clippy::needless_range_loop)]

pub mod cocycles;
pub mod error;
pub mod exact;
pub mod extension;
pub mod field;
pub mod fock;
pub mod lie;
pub mod loopgroup;
pub mod suite;

pub use error::{Error, Result};
pub use exact::{ExactScalar, GaussRat};
pub use field::{Domain, FourierField, ValueKind};
pub use lie::{LieAlgebraSpec, LieElement};
