//! Lie-algebra-level cocycles of current and path algebras, evaluated exactly.
//!
//! The coboundary of a 2-cochain is taken in the cyclic form
//! `δc(X,Y,Z) = c(X,[Y,Z]) + c(Y,[Z,X]) + c(Z,[X,Y])`, with Lie-derivative
//! terms `𝓛_X c(A;Y,Z) = c([A,X] + dX; Y, Z)` when `c` depends linearly on a
//! connection `A`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{gr, gr_frac, rat, ExactScalar, GaussRat};
use crate::field::{Domain, FourierField, ValueKind, WedgeMode};
use crate::lie::same_algebra;

/// How a reported value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Quadrature,
    Floating,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityDefect {
    pub identity: String,
    /// Exact defect rendered as a polynomial in π, or a float.
    pub defect: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CocycleReport {
    pub formula: String,
    pub inputs: String,
    pub value: String,
    pub defects: Vec<IdentityDefect>,
    pub provenance: Provenance,
}

impl CocycleReport {
    pub fn exact(formula: &str, inputs: String, value: &ExactScalar, defects: Vec<(&str, ExactScalar)>) -> Self {
        Self {
            formula: formula.into(),
            inputs,
            value: value.to_string(),
            defects: defects
                .into_iter()
                .map(|(name, d)| IdentityDefect {
                    identity: name.into(),
                    holds: d.is_zero(),
                    defect: d.to_string(),
                })
                .collect(),
            provenance: Provenance::Exact,
        }
    }

    pub fn all_hold(&self) -> bool {
        self.defects.iter().all(|d| d.holds)
    }
}

fn require(f: &FourierField, domain: Domain, degree: usize, what: &str) -> Result<()> {
    if f.domain() != domain {
        return Err(Error::DomainMismatch(format!(
            "{what} must live on {}, got {}",
            domain.name(),
            f.domain().name()
        )));
    }
    if f.degree() != degree || f.kind() != ValueKind::Lie {
        return Err(Error::Degree(format!(
            "{what} must be a Lie-valued {degree}-form, got degree {}",
            f.degree()
        )));
    }
    Ok(())
}

fn same(a: &FourierField, b: &FourierField) -> Result<()> {
    if !same_algebra(a.algebra(), b.algebra()) {
        return Err(Error::AlgebraMismatch(format!(
            "{} vs {}",
            a.algebra().name(),
            b.algebra().name()
        )));
    }
    Ok(())
}

fn bracket(x: &FourierField, y: &FourierField) -> Result<FourierField> {
    x.wedge_bracket(y, WedgeMode::Commutator)
}

/// `q · π^k`.
fn factor(re: Rational64Pair, k: i32) -> ExactScalar {
    ExactScalar::monomial(gr_frac(rat(re.0, re.1), rat(re.2, re.3)), k)
}

type Rational64Pair = (i64, i64, i64, i64);

/// Affine cocycle `c(X,Y) = (1/2π) ∫_{S¹} tr X dY`.
pub fn affine_cocycle(x: &FourierField, y: &FourierField) -> Result<ExactScalar> {
    require(x, Domain::T1, 0, "X")?;
    require(y, Domain::T1, 0, "Y")?;
    same(x, y)?;
    let v = x.integrate_trace_wedge(&y.d()?)?;
    Ok(factor((1, 2, 0, 1), -1) * v)
}

/// `c([X,Y],Z) + c([Y,Z],X) + c([Z,X],Y)`.
pub fn affine_jacobi_defect(x: &FourierField, y: &FourierField, z: &FourierField) -> Result<ExactScalar> {
    Ok(affine_cocycle(&bracket(x, y)?, z)?
        + affine_cocycle(&bracket(y, z)?, x)?
        + affine_cocycle(&bracket(z, x)?, y)?)
}

fn require_path(x: &FourierField, what: &str) -> Result<()> {
    require(x, Domain::Interval, 0, what)?;
    if x.value_at_start()?.iter().any(|c| c != &GaussRat::from(rat(0, 1))) {
        return Err(Error::Precondition(format!("{what}(0) ≠ 0: paths must start at the identity")));
    }
    Ok(())
}

/// Path-algebra cocycle `c(X,Y) = (1/4πi) ∫_{[0,2π]} tr(X dY − Y dX)`.
pub fn path_cocycle(x: &FourierField, y: &FourierField) -> Result<ExactScalar> {
    require_path(x, "X")?;
    require_path(y, "Y")?;
    same(x, y)?;
    let v = x.integrate_trace_wedge(&y.d()?)? - y.integrate_trace_wedge(&x.d()?)?;
    // 1/(4πi) = −i/4 · π⁻¹
    Ok(factor((0, 1, -1, 4), -1) * v)
}

/// `δc(X,Y,Z)` for the path cocycle, in the cyclic form.
pub fn path_coboundary(x: &FourierField, y: &FourierField, z: &FourierField) -> Result<ExactScalar> {
    Ok(path_cocycle(x, &bracket(y, z)?)?
        + path_cocycle(y, &bracket(z, x)?)?
        + path_cocycle(z, &bracket(x, y)?)?)
}

/// Endpoint 3-cocycle `dα(X,Y,Z) = −(1/4πi) tr X[Y,Z]|_{2π}`.
pub fn path_three_cocycle(x: &FourierField, y: &FourierField, z: &FourierField) -> Result<ExactScalar> {
    require_path(x, "X")?;
    require_path(y, "Y")?;
    require_path(z, "Z")?;
    let alg = x.algebra();
    let (xe, ye, ze) = (x.value_at_end()?, y.value_at_end()?, z.value_at_end()?);
    let t = alg.trace_pair(&xe, &alg.bracket_coeffs(&ye, &ze));
    // −1/(4πi) = i/4 · π⁻¹
    Ok(factor((0, 1, 1, 4), -1) * ExactScalar::from_gauss(t))
}

/// `δc(X,Y,Z) + dα(X,Y,Z)`; zero for all paths.
///
/// Integrating `d tr X[Y,Z]` over `[0, 2π]` gives `δc = (1/4πi) tr X[Y,Z]|_{2π}`
/// for the cyclic coboundary, i.e. `δc = −dα`.
pub fn path_coboundary_defect(x: &FourierField, y: &FourierField, z: &FourierField) -> Result<ExactScalar> {
    Ok(path_coboundary(x, y, z)? + path_three_cocycle(x, y, z)?)
}

/// `δc(X,Y,Z) − dα(X,Y,Z)`, which equals `2δc` and so is nonzero whenever the
/// endpoint bracket is.
pub fn path_coboundary_defect_opposite_sign(
    x: &FourierField,
    y: &FourierField,
    z: &FourierField,
) -> Result<ExactScalar> {
    Ok(path_coboundary(x, y, z)? - path_three_cocycle(x, y, z)?)
}

/// `(1/24π²) ∫ tr A[dX,dY]` on a 3-dimensional domain (T³ or T²×[0,1]),
/// with `[dX,dY] = dX∧dY − dY∧dX`.
fn mf_integral(a: &FourierField, x: &FourierField, y: &FourierField) -> Result<ExactScalar> {
    let br = bracket(&x.d()?, &y.d()?)?;
    Ok(factor((1, 24, 0, 1), -2) * a.integrate_trace_wedge(&br)?)
}

fn mf_identity(domain: Domain, a: &FourierField, x: &FourierField, y: &FourierField, z: &FourierField) -> Result<ExactScalar> {
    require(a, domain, 1, "A")?;
    for (f, n) in [(x, "X"), (y, "Y"), (z, "Z")] {
        require(f, domain, 0, n)?;
        same(a, f)?;
    }
    let lie = |x: &FourierField| -> Result<FourierField> { bracket(a, x)?.add(&x.d()?) };
    let mut acc = ExactScalar::zero();
    for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
        acc += &mf_integral(a, p, &bracket(q, r)?)?;
        acc += &mf_integral(&lie(p)?, q, r)?;
    }
    Ok(acc)
}

/// `c(A;X,Y) = (1/24π²) ∫_{T³} tr A[dX,dY]`.
pub fn mf_cocycle(a: &FourierField, x: &FourierField, y: &FourierField) -> Result<ExactScalar> {
    require(a, Domain::T3, 1, "A")?;
    require(x, Domain::T3, 0, "X")?;
    require(y, Domain::T3, 0, "Y")?;
    same(a, x)?;
    same(a, y)?;
    mf_integral(a, x, y)
}

/// `Σ_cyc c(A;X,[Y,Z]) + 𝓛_X c(A;Y,Z)` on T³.
pub fn mf_cocycle_identity_defect(
    a: &FourierField,
    x: &FourierField,
    y: &FourierField,
    z: &FourierField,
) -> Result<ExactScalar> {
    mf_identity(Domain::T3, a, x, y, z)
}

/// `dα(X,Y,Z) = −(1/8π²) ∫_{T²} tr X[dY,dZ]`, `[dY,dZ] = dY∧dZ − dZ∧dY`.
pub fn boundary_three_cocycle(x: &FourierField, y: &FourierField, z: &FourierField) -> Result<ExactScalar> {
    require(x, Domain::T2, 0, "X")?;
    require(y, Domain::T2, 0, "Y")?;
    require(z, Domain::T2, 0, "Z")?;
    same(x, y)?;
    same(x, z)?;
    let br = bracket(&y.d()?, &z.d()?)?;
    Ok(factor((-1, 8, 0, 1), -2) * x.integrate_trace_wedge(&br)?)
}

/// Bulk side of the boundary check: the cyclic Lie-derivative sum of
/// `c_N(A;X,Y) = (1/24π²) ∫_N tr A[dX,dY]` on `N = T²×[0,1]`.
pub fn boundary_bulk_coboundary(
    a: &FourierField,
    x: &FourierField,
    y: &FourierField,
    z: &FourierField,
) -> Result<ExactScalar> {
    mf_identity(Domain::T2xInterval, a, x, y, z)
}

/// `Σ_{∂N} ± dα` with `∂N = T²|_{s=1} − T²|_{s=0}`.
pub fn boundary_side(x: &FourierField, y: &FourierField, z: &FourierField) -> Result<ExactScalar> {
    let at = |end| -> Result<ExactScalar> {
        boundary_three_cocycle(
            &x.restrict_interval_end(end)?,
            &y.restrict_interval_end(end)?,
            &z.restrict_interval_end(end)?,
        )
    };
    Ok(at(1)? - at(0)?)
}

/// Bulk coboundary plus the boundary 3-cocycle over `∂N`; zero.
///
/// The connection terms cancel pointwise and the `dX` terms integrate by
/// Stokes to `(1/8π²) ∫_{∂N} tr X[dY,dZ] = −Σ_{∂N} dα`, the same relation
/// `δc = −dα` as for paths.
pub fn boundary_coboundary_defect(
    a: &FourierField,
    x: &FourierField,
    y: &FourierField,
    z: &FourierField,
) -> Result<ExactScalar> {
    Ok(boundary_bulk_coboundary(a, x, y, z)? + boundary_side(x, y, z)?)
}

/// Bulk coboundary minus the boundary 3-cocycle over `∂N`.
pub fn boundary_coboundary_defect_opposite_sign(
    a: &FourierField,
    x: &FourierField,
    y: &FourierField,
    z: &FourierField,
) -> Result<ExactScalar> {
    Ok(boundary_bulk_coboundary(a, x, y, z)? - boundary_side(x, y, z)?)
}

/// `i n tr(AB)` if `m + n = 0`, else 0: the single-mode affine cocycle.
pub fn affine_single_mode(m: i32, n: i32, tr_ab: &GaussRat) -> ExactScalar {
    if m + n != 0 {
        return ExactScalar::zero();
    }
    ExactScalar::from_gauss(gr(0, i64::from(n)) * tr_ab)
}
