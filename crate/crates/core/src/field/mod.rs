//! Exact calculus of Lie-algebra-valued forms, quadrature on disks and balls,
//! and SU(2)-valued maps with analytic derivatives.

mod format;
mod fourier;
mod groupmap;
mod quadrature;
mod random;
pub mod su2;

pub use format::{parse_fields, write_field};
pub use fourier::{Domain, FourierField, Mode, ValueKind, WedgeMode, MAX_POLY_DEGREE};
pub use groupmap::{ad, GroupMap, Jet, MapDomain};
pub use quadrature::{gauss_legendre, quad_integrate, quad_rule, Axis, QuadDomain, QuadResult, MIN_RESOLUTION};
pub use random::{random_field, random_loop, random_path, RandomFieldSpec};
