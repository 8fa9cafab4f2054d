use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::matrix::{ExactDecomposer, QMat};
use crate::error::{Error, Result};
use crate::exact::{gr, gr_frac, rat, GaussRat};

/// A finite-dimensional matrix Lie algebra with exact structure constants.
///
/// Structure constants follow `[T_a, T_b] = Σ_c f^c_{ab} T_c`; the trace
/// form is `tr(T_a T_b)` in the representation given by the basis matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraSpec {
    name: String,
    size: usize,
    basis: Vec<QMat>,
    structure: Vec<GaussRat>,
    trace_form: Vec<GaussRat>,
}

impl LieAlgebraSpec {
    /// Builds a spec from representation matrices, computing structure
    /// constants exactly. Rejects dependent bases and non-closed brackets.
    pub fn from_matrices(name: impl Into<String>, basis: Vec<QMat>) -> Result<Self> {
        let name = name.into();
        let dim = basis.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra(format!("{name}: empty basis")));
        }
        let size = basis[0].size();
        if basis.iter().any(|m| m.size() != size) {
            return Err(Error::InvalidAlgebra(format!(
                "{name}: basis matrices of different sizes"
            )));
        }
        let dec = ExactDecomposer::new(basis.iter().map(|m| m.entries().to_vec()).collect())
            .ok_or_else(|| Error::InvalidAlgebra(format!("{name}: basis is linearly dependent")))?;
        let mut structure = vec![GaussRat::zero(); dim * dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let br = basis[a].commutator(&basis[b]);
                let coeffs = dec.decompose(br.entries()).ok_or_else(|| {
                    Error::InvalidAlgebra(format!("{name}: [T_{a}, T_{b}] leaves the span"))
                })?;
                for (c, v) in coeffs.into_iter().enumerate() {
                    structure[(a * dim + b) * dim + c] = v;
                }
            }
        }
        let mut trace_form = vec![GaussRat::zero(); dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                trace_form[a * dim + b] = (&basis[a] * &basis[b]).trace();
            }
        }
        Ok(Self {
            name,
            size,
            basis,
            structure,
            trace_form,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Size of the representation matrices.
    pub fn rep_size(&self) -> usize {
        self.size
    }

    pub fn basis(&self) -> &[QMat] {
        &self.basis
    }

    /// f^c_{ab}.
    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> &GaussRat {
        let d = self.dim();
        &self.structure[(a * d + b) * d + c]
    }

    /// tr(T_a T_b).
    pub fn trace_form(&self, a: usize, b: usize) -> &GaussRat {
        &self.trace_form[a * self.dim() + b]
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().all(Zero::is_zero)
    }

    /// Coefficient-level bracket without an algebra check.
    pub fn bracket_coeffs(&self, x: &[GaussRat], y: &[GaussRat]) -> Vec<GaussRat> {
        let d = self.dim();
        let mut out = vec![GaussRat::zero(); d];
        for a in 0..d {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..d {
                if y[b].is_zero() {
                    continue;
                }
                let xy = &x[a] * &y[b];
                for (c, slot) in out.iter_mut().enumerate() {
                    let f = self.structure_constant(a, b, c);
                    if !f.is_zero() {
                        *slot = &*slot + &xy * f;
                    }
                }
            }
        }
        out
    }

    /// tr(XY) from coefficients.
    pub fn trace_pair(&self, x: &[GaussRat], y: &[GaussRat]) -> GaussRat {
        let d = self.dim();
        let mut acc = GaussRat::zero();
        for a in 0..d {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..d {
                let t = self.trace_form(a, b);
                if !y[b].is_zero() && !t.is_zero() {
                    acc += &x[a] * &y[b] * t;
                }
            }
        }
        acc
    }

    pub fn matrix_of(&self, x: &[GaussRat]) -> QMat {
        self.basis
            .iter()
            .zip(x)
            .fold(QMat::zeros(self.size), |acc, (m, c)| &acc + &m.scale(c))
    }

    /// Checks matrix brackets, Jacobi, and trace-form symmetry/invariance.
    pub fn check_invariants(&self) -> bool {
        let d = self.dim();
        for a in 0..d {
            for b in 0..d {
                let lhs = self.basis[a].commutator(&self.basis[b]);
                let mut e = vec![GaussRat::zero(); d];
                for (c, slot) in e.iter_mut().enumerate() {
                    *slot = self.structure_constant(a, b, c).clone();
                }
                if lhs != self.matrix_of(&e) {
                    return false;
                }
                if self.trace_form(a, b) != self.trace_form(b, a) {
                    return false;
                }
            }
        }
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for dd in 0..d {
                        let mut s = GaussRat::zero();
                        for e in 0..d {
                            s = s
                                + self.structure_constant(a, e, dd) * self.structure_constant(b, c, e)
                                + self.structure_constant(b, e, dd) * self.structure_constant(c, a, e)
                                + self.structure_constant(c, e, dd) * self.structure_constant(a, b, e);
                        }
                        if !s.is_zero() {
                            return false;
                        }
                    }
                    // tr([T_a,T_b] T_c) + tr(T_b [T_a,T_c]) = 0
                    let mut s = GaussRat::zero();
                    for e in 0..d {
                        s = s
                            + self.structure_constant(a, b, e) * self.trace_form(e, c)
                            + self.trace_form(b, e) * self.structure_constant(a, c, e);
                    }
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for LieAlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {}, {}x{} rep)", self.name, self.dim(), self.size, self.size)
    }
}

/// An element of a Lie algebra, stored as basis coefficients.
#[derive(Clone, Debug)]
pub struct LieElement {
    algebra: Arc<LieAlgebraSpec>,
    coeffs: Vec<GaussRat>,
}

impl PartialEq for LieElement {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.coeffs == other.coeffs
    }
}

pub fn same_algebra(a: &Arc<LieAlgebraSpec>, b: &Arc<LieAlgebraSpec>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl LieElement {
    pub fn new(algebra: Arc<LieAlgebraSpec>, coeffs: Vec<GaussRat>) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::AlgebraMismatch(format!(
                "{} coefficients for {}-dimensional {}",
                coeffs.len(),
                algebra.dim(),
                algebra.name()
            )));
        }
        Ok(Self { algebra, coeffs })
    }

    pub fn zero(algebra: Arc<LieAlgebraSpec>) -> Self {
        let d = algebra.dim();
        Self {
            algebra,
            coeffs: vec![GaussRat::zero(); d],
        }
    }

    pub fn basis(algebra: Arc<LieAlgebraSpec>, a: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.coeffs[a] = gr(1, 0);
        e
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraSpec> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn matrix(&self) -> QMat {
        self.algebra.matrix_of(&self.coeffs)
    }

    pub fn trace_with(&self, other: &Self) -> Result<GaussRat> {
        self.check_same(other)?;
        Ok(self.algebra.trace_pair(&self.coeffs, &other.coeffs))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(format!(
                "{} vs {}",
                self.algebra.name(),
                other.algebra.name()
            )))
        }
    }
}

/// `[X, Y]` computed from structure constants.
pub fn bracket(x: &LieElement, y: &LieElement) -> Result<LieElement> {
    x.check_same(y)?;
    Ok(LieElement {
        algebra: x.algebra.clone(),
        coeffs: x.algebra.bracket_coeffs(&x.coeffs, &y.coeffs),
    })
}

fn q(re: (i64, i64), im: (i64, i64)) -> GaussRat {
    gr_frac(rat(re.0, re.1), rat(im.0, im.1))
}

fn mat(n: usize, entries: &[(usize, usize, GaussRat)]) -> QMat {
    let mut m = QMat::zeros(n);
    for (r, c, v) in entries {
        m.set(*r, *c, v.clone());
    }
    m
}

/// u(1) in its defining 1×1 representation, basis `i`.
pub fn u1() -> LieAlgebraSpec {
    LieAlgebraSpec::from_matrices("u1", vec![mat(1, &[(0, 0, gr(0, 1))])]).expect("u1")
}

/// su(2) with antihermitian basis `iσ_a/2`.
pub fn su2() -> LieAlgebraSpec {
    let h = q((0, 1), (1, 2));
    let t1 = mat(2, &[(0, 1, h.clone()), (1, 0, h.clone())]);
    let t2 = mat(2, &[(0, 1, q((1, 2), (0, 1))), (1, 0, q((-1, 2), (0, 1)))]);
    let t3 = mat(2, &[(0, 0, h.clone()), (1, 1, -h)]);
    LieAlgebraSpec::from_matrices("su2", vec![t1, t2, t3]).expect("su2")
}

/// su(2) in the spin-1 representation, realized as the adjoint
/// representation of the `iσ_a/2` basis so every entry stays rational.
pub fn su2_adjoint() -> LieAlgebraSpec {
    let fund = su2();
    let basis = (0..3)
        .map(|a| {
            let mut m = QMat::zeros(3);
            for b in 0..3 {
                for c in 0..3 {
                    m.set(c, b, fund.structure_constant(a, b, c).clone());
                }
            }
            m
        })
        .collect();
    LieAlgebraSpec::from_matrices("su2-adj", basis).expect("su2 adjoint")
}

/// su(3) with basis `iλ_a/2`, where the eighth Gell-Mann matrix is rescaled
/// to `diag(1, 1, -2)` to keep entries rational.
pub fn su3() -> LieAlgebraSpec {
    let h = q((0, 1), (1, 2));
    let mh = -h.clone();
    let r = q((1, 2), (0, 1));
    let mr = -r.clone();
    let basis = vec![
        mat(3, &[(0, 1, h.clone()), (1, 0, h.clone())]),
        mat(3, &[(0, 1, r.clone()), (1, 0, mr.clone())]),
        mat(3, &[(0, 0, h.clone()), (1, 1, mh.clone())]),
        mat(3, &[(0, 2, h.clone()), (2, 0, h.clone())]),
        mat(3, &[(0, 2, r.clone()), (2, 0, mr.clone())]),
        mat(3, &[(1, 2, h.clone()), (2, 1, h.clone())]),
        mat(3, &[(1, 2, r), (2, 1, mr)]),
        mat(3, &[(0, 0, h.clone()), (1, 1, h), (2, 2, gr(0, -1))]),
    ];
    LieAlgebraSpec::from_matrices("su3", basis).expect("su3")
}

/// u(n) with antihermitian basis `iE_kk`, `E_kl − E_lk`, `i(E_kl + E_lk)`.
pub fn un(n: usize) -> Result<LieAlgebraSpec> {
    if n == 0 || n > 4 {
        return Err(Error::InvalidAlgebra(format!("u({n}) not built in (1 ≤ n ≤ 4)")));
    }
    let mut basis = Vec::new();
    for k in 0..n {
        basis.push(mat(n, &[(k, k, gr(0, 1))]));
    }
    for k in 0..n {
        for l in (k + 1)..n {
            basis.push(mat(n, &[(k, l, gr(1, 0)), (l, k, gr(-1, 0))]));
            basis.push(mat(n, &[(k, l, gr(0, 1)), (l, k, gr(0, 1))]));
        }
    }
    LieAlgebraSpec::from_matrices(format!("u{n}"), basis)
}

/// Built-in algebras by name: `u1`, `su2`, `su2-adj`, `su3`, `u2`, `u3`, `u4`.
pub fn builtin(name: &str) -> Result<LieAlgebraSpec> {
    match name {
        "u1" => Ok(u1()),
        "su2" => Ok(su2()),
        "su2-adj" => Ok(su2_adjoint()),
        "su3" => Ok(su3()),
        "u2" => un(2),
        "u3" => un(3),
        "u4" => un(4),
        other => Err(Error::InvalidAlgebra(format!("unknown built-in algebra `{other}`"))),
    }
}

pub const BUILTIN_NAMES: &[&str] = &["u1", "su2", "su2-adj", "su3", "u2", "u3", "u4"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_satisfy_invariants() {
        for name in BUILTIN_NAMES {
            let alg = builtin(name).unwrap();
            assert!(alg.check_invariants(), "{name}");
        }
    }

    #[test]
    fn su2_bracket_by_matrix_multiplication() {
        let alg = Arc::new(su2());
        let t1 = LieElement::basis(alg.clone(), 0);
        let t2 = LieElement::basis(alg.clone(), 1);
        let br = bracket(&t1, &t2).unwrap();
        // [iσ1/2, iσ2/2] = -iσ3/2, computed directly from the 2x2 matrices.
        let direct = t1.matrix().commutator(&t2.matrix());
        assert_eq!(br.matrix(), direct);
        assert_eq!(br.coeffs(), &[gr(0, 0), gr(0, 0), gr(-1, 0)]);
        let expected = mat(2, &[(0, 0, q((0, 1), (-1, 2))), (1, 1, q((0, 1), (1, 2)))]);
        assert_eq!(direct, expected);
    }

    #[test]
    fn bracket_trivial_cases() {
        let alg = Arc::new(su3());
        let x = LieElement::new(alg.clone(), (0..8).map(|k| gr(k, 1 - k)).collect()).unwrap();
        assert!(bracket(&x, &x).unwrap().is_zero());
        assert!(bracket(&x, &LieElement::zero(alg)).unwrap().is_zero());
    }

    #[test]
    fn mismatched_algebras_rejected() {
        let x = LieElement::basis(Arc::new(su2()), 0);
        let y = LieElement::basis(Arc::new(su2_adjoint()), 0);
        assert!(matches!(bracket(&x, &y), Err(Error::AlgebraMismatch(_))));
    }

    #[test]
    fn spin_half_and_spin_one_traces_differ_by_index_four() {
        let fund = su2();
        let adj = su2_adjoint();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(fund.structure_constant(a, b, 0), adj.structure_constant(a, b, 0));
                assert_eq!(&(fund.trace_form(a, b) * gr(4, 0)), adj.trace_form(a, b));
            }
        }
    }

    #[test]
    fn non_closed_basis_rejected() {
        let a = mat(2, &[(0, 1, gr(1, 0))]);
        let b = mat(2, &[(1, 0, gr(1, 0))]);
        assert!(LieAlgebraSpec::from_matrices("bad", vec![a, b]).is_err());
    }
}
