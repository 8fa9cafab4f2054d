//! Finite-dimensional Lie algebras: exact matrix representations, structure
//! constants, trace forms, and the Chevalley–Eilenberg coboundary.

mod algebra;
mod cochain;
mod format;
mod matrix;

pub use algebra::{
    bracket, builtin, same_algebra, su2, su2_adjoint, su3, u1, un, LieAlgebraSpec, LieElement,
    BUILTIN_NAMES,
};
pub use cochain::{ce_coboundary, combinations, cyclic_coboundary_2, sort_with_sign, ConstantCochain};
pub use format::{parse_algebra, write_algebra};
pub use matrix::{ExactDecomposer, QMat};
