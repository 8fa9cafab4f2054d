//! Lie-algebra-valued trigonometric-polynomial differential forms.
//!
//! A term is `c · e^{i k·θ} · s^p · dx^I` where `θ` are the periodic
//! coordinates, `s ∈ [0, 1]` the non-periodic coordinate (if any) and `I` a set of
//! coordinate indices. Coordinates are ordered periodic first, interval
//! last, and `dx^{i_1}∧…∧dx^{i_r}` with `i_1 < … < i_r` is the positive basis
//! element; the top form `dθ^1∧…∧dθ^d(∧ds)` is positively oriented.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{gr, gr_conj, gr_frac, rat, ExactScalar, GaussRat};
use crate::lie::{same_algebra, LieAlgebraSpec, QMat};

/// Maximum polynomial degree in the non-periodic coordinate.
pub const MAX_POLY_DEGREE: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    /// Circle, θ ∈ [0, 2π).
    T1,
    T2,
    T3,
    /// The path interval `[0, 2π]` in the normalized coordinate `s = t/2π`.
    Interval,
    /// `T² × [0, 1]`, coordinates `(θ¹, θ², s)`.
    T2xInterval,
}

impl Domain {
    pub fn periodic_dims(self) -> usize {
        match self {
            Domain::T1 => 1,
            Domain::T2 | Domain::T2xInterval => 2,
            Domain::T3 => 3,
            Domain::Interval => 0,
        }
    }

    pub fn has_interval(self) -> bool {
        matches!(self, Domain::Interval | Domain::T2xInterval)
    }

    pub fn dim(self) -> usize {
        self.periodic_dims() + usize::from(self.has_interval())
    }

    pub fn top_form(self) -> u8 {
        ((1u16 << self.dim()) - 1) as u8
    }

    pub fn name(self) -> &'static str {
        match self {
            Domain::T1 => "T1",
            Domain::T2 => "T2",
            Domain::T3 => "T3",
            Domain::Interval => "I",
            Domain::T2xInterval => "T2xI",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "T1" => Domain::T1,
            "T2" => Domain::T2,
            "T3" => Domain::T3,
            "I" | "interval" => Domain::Interval,
            "T2xI" => Domain::T2xInterval,
            _ => return None,
        })
    }
}

/// What the coefficient vectors of a field mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueKind {
    /// Complex scalar (one coefficient).
    Scalar,
    /// Coefficients in the algebra basis.
    Lie,
    /// Row-major matrix in the algebra's representation (enveloping algebra).
    Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WedgeMode {
    /// Matrix product of the coefficients.
    Product,
    /// Lie bracket of the coefficients.
    Commutator,
}

/// Index of one basis term: wavevector, polynomial degree, form mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub k: [i32; 3],
    pub poly: u32,
    pub form: u8,
}

impl Mode {
    pub fn new(k: [i32; 3], poly: u32, form: u8) -> Self {
        Self { k, poly, form }
    }

    pub fn is_zero_mode(&self) -> bool {
        self.k == [0, 0, 0]
    }
}

#[derive(Clone, Debug)]
pub struct FourierField {
    domain: Domain,
    degree: usize,
    kind: ValueKind,
    algebra: Arc<LieAlgebraSpec>,
    terms: BTreeMap<Mode, Vec<GaussRat>>,
}

impl PartialEq for FourierField {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.degree == other.degree
            && self.kind == other.kind
            && same_algebra(&self.algebra, &other.algebra)
            && self.terms == other.terms
    }
}

fn popcount(x: u8) -> usize {
    x.count_ones() as usize
}

fn add_into(slot: &mut [GaussRat], v: &[GaussRat], factor: &GaussRat) {
    for (s, x) in slot.iter_mut().zip(v) {
        if !x.is_zero() {
            *s = &*s + x * factor;
        }
    }
}

impl FourierField {
    pub fn zero(domain: Domain, degree: usize, kind: ValueKind, algebra: Arc<LieAlgebraSpec>) -> Self {
        Self {
            domain,
            degree,
            kind,
            algebra,
            terms: BTreeMap::new(),
        }
    }

    /// A single term `coeffs · e^{ik·θ} s^poly dx^form`.
    pub fn mode(
        domain: Domain,
        kind: ValueKind,
        algebra: Arc<LieAlgebraSpec>,
        mode: Mode,
        coeffs: Vec<GaussRat>,
    ) -> Result<Self> {
        let mut f = Self::zero(domain, popcount(mode.form), kind, algebra);
        f.add_term(mode, coeffs)?;
        Ok(f)
    }

    /// Constant 0-form.
    pub fn constant(domain: Domain, algebra: Arc<LieAlgebraSpec>, coeffs: Vec<GaussRat>) -> Result<Self> {
        Self::mode(domain, ValueKind::Lie, algebra, Mode::new([0; 3], 0, 0), coeffs)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraSpec> {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mode, &Vec<GaussRat>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn value_len(&self) -> usize {
        value_len(self.kind, &self.algebra)
    }

    /// Adds a term, validating the mode against the domain and degree.
    pub fn add_term(&mut self, mode: Mode, coeffs: Vec<GaussRat>) -> Result<()> {
        let dim = self.domain.dim();
        let pd = self.domain.periodic_dims();
        if coeffs.len() != self.value_len() {
            return Err(Error::AlgebraMismatch(format!(
                "{} coefficients, expected {}",
                coeffs.len(),
                self.value_len()
            )));
        }
        if mode.k.iter().skip(pd).any(|&k| k != 0) {
            return Err(Error::DomainMismatch(format!(
                "wavevector {:?} has components beyond the {} periodic directions of {}",
                mode.k,
                pd,
                self.domain.name()
            )));
        }
        if !self.domain.has_interval() && mode.poly != 0 {
            return Err(Error::DomainMismatch(format!(
                "{} has no polynomial direction",
                self.domain.name()
            )));
        }
        if mode.poly > MAX_POLY_DEGREE {
            return Err(Error::Degree(format!(
                "polynomial degree {} exceeds {MAX_POLY_DEGREE}",
                mode.poly
            )));
        }
        if u32::from(mode.form) >> dim != 0 || popcount(mode.form) != self.degree {
            return Err(Error::Degree(format!(
                "form mask {:#b} invalid for a {}-form on {}",
                mode.form,
                self.degree,
                self.domain.name()
            )));
        }
        self.accumulate(mode, &coeffs, &gr(1, 0));
        Ok(())
    }

    fn accumulate(&mut self, mode: Mode, coeffs: &[GaussRat], factor: &GaussRat) {
        let len = self.value_len();
        let slot = self
            .terms
            .entry(mode)
            .or_insert_with(|| vec![GaussRat::zero(); len]);
        add_into(slot, coeffs, factor);
        if slot.iter().all(Zero::is_zero) {
            self.terms.remove(&mode);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!(
                "{} vs {}",
                self.domain.name(),
                other.domain.name()
            )));
        }
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch(format!(
                "{} vs {}",
                self.algebra.name(),
                other.algebra.name()
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, factor: &GaussRat) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree || self.kind != other.kind {
            return Err(Error::Degree(format!(
                "cannot add a {}-form to a {}-form",
                other.degree, self.degree
            )));
        }
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.accumulate(*m, v, factor);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, &gr(1, 0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, &gr(-1, 0))
    }

    pub fn scale(&self, q: &GaussRat) -> Self {
        let mut out = Self::zero(self.domain, self.degree, self.kind, self.algebra.clone());
        if q.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(*m, v.iter().map(|x| x * q).collect());
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Result<Self> {
        let dim = self.domain.dim();
        if self.degree >= dim {
            return Err(Error::Degree(format!(
                "d of a top-degree ({}) form on {}",
                self.degree,
                self.domain.name()
            )));
        }
        let pd = self.domain.periodic_dims();
        let mut out = Self::zero(self.domain, self.degree + 1, self.kind, self.algebra.clone());
        for (m, v) in &self.terms {
            for j in 0..dim {
                let bit = 1u8 << j;
                if m.form & bit != 0 {
                    continue;
                }
                let (factor, poly) = if j < pd {
                    if m.k[j] == 0 {
                        continue;
                    }
                    (gr(0, i64::from(m.k[j])), m.poly)
                } else {
                    if m.poly == 0 {
                        continue;
                    }
                    (gr(i64::from(m.poly), 0), m.poly - 1)
                };
                let sign = if popcount(m.form & (bit - 1)).is_multiple_of(2) { 1 } else { -1 };
                let factor = factor * gr(sign, 0);
                out.accumulate(Mode::new(m.k, poly, m.form | bit), v, &factor);
            }
        }
        Ok(out)
    }

    /// Wedge product with the coefficient product, or the commutator
    /// `a∧b − b∧a`. The latter is the graded bracket unless both degrees are
    /// odd, in which case coefficients anticommute and the result is
    /// matrix-valued.
    pub fn wedge_bracket(&self, other: &Self, mode: WedgeMode) -> Result<Self> {
        if mode == WedgeMode::Commutator && self.degree % 2 == 1 && other.degree % 2 == 1 {
            let ab = self.wedge_bracket(other, WedgeMode::Product)?;
            let ba = other.wedge_bracket(self, WedgeMode::Product)?;
            return ab.sub(&ba);
        }
        let pairing = match (self.kind, other.kind, mode) {
            (ValueKind::Lie, ValueKind::Lie, WedgeMode::Commutator) => Pairing::Bracket,
            (ValueKind::Lie, ValueKind::Lie, WedgeMode::Product) => Pairing::LieProduct,
            (ValueKind::Scalar, _, _) | (_, ValueKind::Scalar, _) => Pairing::ScalarScale,
            (_, _, WedgeMode::Product) => Pairing::MatrixProduct,
            (_, _, WedgeMode::Commutator) => Pairing::MatrixCommutator,
        };
        self.wedge_with(other, pairing)
    }

    /// `tr(a ∧ b)` as a scalar form.
    pub fn wedge_trace(&self, other: &Self) -> Result<Self> {
        match (self.kind, other.kind) {
            (ValueKind::Lie, ValueKind::Lie) => self.wedge_with(other, Pairing::Trace),
            _ => self.wedge_bracket(other, WedgeMode::Product)?.trace(),
        }
    }

    fn wedge_with(&self, other: &Self, pairing: Pairing) -> Result<Self> {
        self.check_compatible(other)?;
        let deg = self.degree + other.degree;
        if deg > self.domain.dim() {
            return Err(Error::Degree(format!(
                "wedge of a {}-form and a {}-form exceeds dimension {}",
                self.degree,
                other.degree,
                self.domain.dim()
            )));
        }
        let kind = pairing.output_kind(self.kind, other.kind);
        let alg = &self.algebra;
        let mut out = Self::zero(self.domain, deg, kind, alg.clone());
        let one = gr(1, 0);
        let minus = gr(-1, 0);
        for (m1, v1) in &self.terms {
            for (m2, v2) in &other.terms {
                if m1.form & m2.form != 0 {
                    continue;
                }
                let poly = m1.poly + m2.poly;
                if poly > MAX_POLY_DEGREE {
                    return Err(Error::Degree(format!(
                        "product polynomial degree {poly} exceeds {MAX_POLY_DEGREE}"
                    )));
                }
                let mut swaps = 0;
                for b in 0..8 {
                    if m2.form & (1 << b) != 0 {
                        swaps += popcount(m1.form >> (b + 1));
                    }
                }
                let k = [m1.k[0] + m2.k[0], m1.k[1] + m2.k[1], m1.k[2] + m2.k[2]];
                let value = pairing.apply(alg, self.kind, other.kind, v1, v2);
                let factor = if swaps % 2 == 0 { &one } else { &minus };
                out.accumulate(Mode::new(k, poly, m1.form | m2.form), &value, factor);
            }
        }
        Ok(out)
    }

    /// Pointwise trace; Lie and Matrix kinds become scalars.
    pub fn trace(&self) -> Result<Self> {
        let mut out = Self::zero(self.domain, self.degree, ValueKind::Scalar, self.algebra.clone());
        for (m, v) in &self.terms {
            let t = match self.kind {
                ValueKind::Scalar => v[0].clone(),
                ValueKind::Lie => self.algebra.matrix_of(v).trace(),
                ValueKind::Matrix => {
                    let n = self.algebra.rep_size();
                    (0..n).fold(GaussRat::zero(), |acc, r| acc + &v[r * n + r])
                }
            };
            out.accumulate(*m, &[t], &gr(1, 0));
        }
        Ok(out)
    }

    /// Exact integral of a top-degree scalar form.
    pub fn integrate(&self) -> Result<ExactScalar> {
        if self.degree != self.domain.dim() {
            return Err(Error::Degree(format!(
                "integrate needs a top-degree ({}) form on {}, got degree {}",
                self.domain.dim(),
                self.domain.name(),
                self.degree
            )));
        }
        if self.kind != ValueKind::Scalar {
            return Err(Error::Precondition("integrate needs a scalar-valued form".into()));
        }
        let mut acc = ExactScalar::zero();
        for (m, v) in &self.terms {
            if m.is_zero_mode() {
                acc += &integral_of_monomial(self.domain, m.poly).scale(&v[0]);
            }
        }
        Ok(acc)
    }

    /// Integral of `tr(a ∧ b)` without materializing the product form; only
    /// wavevector pairs summing to zero contribute.
    pub fn integrate_trace_wedge(&self, other: &Self) -> Result<ExactScalar> {
        self.check_compatible(other)?;
        if self.degree + other.degree != self.domain.dim() {
            return Err(Error::Degree("integrand is not a top-degree form".into()));
        }
        if self.kind == ValueKind::Scalar || other.kind == ValueKind::Scalar {
            return self.wedge_trace(other)?.integrate();
        }
        let alg = &self.algebra;
        let both_lie = self.kind == ValueKind::Lie && other.kind == ValueKind::Lie;
        let top = self.domain.top_form();
        let mut by_poly: BTreeMap<u32, GaussRat> = BTreeMap::new();
        for (m1, v1) in &self.terms {
            for (m2, v2) in &other.terms {
                if m1.form | m2.form != top
                    || m1.form & m2.form != 0
                    || m1.k[0] + m2.k[0] != 0
                    || m1.k[1] + m2.k[1] != 0
                    || m1.k[2] + m2.k[2] != 0
                {
                    continue;
                }
                let mut swaps = 0;
                for b in 0..8 {
                    if m2.form & (1 << b) != 0 {
                        swaps += popcount(m1.form >> (b + 1));
                    }
                }
                let t = if both_lie {
                    alg.trace_pair(v1, v2)
                } else {
                    let p = Pairing::MatrixProduct.apply(alg, self.kind, other.kind, v1, v2);
                    let n = alg.rep_size();
                    (0..n).fold(GaussRat::zero(), |acc, r| acc + &p[r * n + r])
                };
                let t = if swaps % 2 == 0 { t } else { -t };
                let slot = by_poly.entry(m1.poly + m2.poly).or_insert_with(GaussRat::zero);
                *slot = &*slot + t;
            }
        }
        Ok(by_poly
            .into_iter()
            .map(|(p, c)| integral_of_monomial(self.domain, p).scale(&c))
            .sum())
    }

    /// Restriction of a form on `T² × [0,1]` to the slice `s = end` (0 or 1).
    pub fn restrict_interval_end(&self, end: u8) -> Result<Self> {
        if self.domain != Domain::T2xInterval {
            return Err(Error::DomainMismatch("restriction needs T2xI".into()));
        }
        let ds = 1u8 << 2;
        let mut out = Self::zero(Domain::T2, self.degree, self.kind, self.algebra.clone());
        for (m, v) in &self.terms {
            if m.form & ds != 0 || (end == 0 && m.poly != 0) {
                continue;
            }
            out.accumulate(Mode::new(m.k, 0, m.form), v, &gr(1, 0));
        }
        Ok(out)
    }

    /// Value of a 0-form on the interval at `t = 0`.
    pub fn value_at_start(&self) -> Result<Vec<GaussRat>> {
        self.check_interval_zero_form()?;
        let mut out = vec![GaussRat::zero(); self.value_len()];
        if let Some(v) = self.terms.get(&Mode::new([0; 3], 0, 0)) {
            out.clone_from(v);
        }
        Ok(out)
    }

    /// Value of a 0-form on the interval at `t = 2π` (`s = 1`).
    pub fn value_at_end(&self) -> Result<Vec<GaussRat>> {
        self.check_interval_zero_form()?;
        let mut out = vec![GaussRat::zero(); self.value_len()];
        for v in self.terms.values() {
            add_into(&mut out, v, &gr(1, 0));
        }
        Ok(out)
    }

    fn check_interval_zero_form(&self) -> Result<()> {
        if self.domain != Domain::Interval || self.degree != 0 {
            return Err(Error::DomainMismatch("needs a 0-form on the interval".into()));
        }
        Ok(())
    }

    /// Whether coefficients satisfy `c(−k) = −c(k)†`, i.e. the field takes
    /// values in the compact real form spanned by the antihermitian basis.
    pub fn is_real_form(&self) -> bool {
        if self.kind != ValueKind::Lie {
            return false;
        }
        self.terms.iter().all(|(m, v)| {
            let neg = Mode::new([-m.k[0], -m.k[1], -m.k[2]], m.poly, m.form);
            match self.terms.get(&neg) {
                Some(w) => v.iter().zip(w).all(|(a, b)| gr_conj(a) == *b),
                None => false,
            }
        })
    }

    /// Numerical evaluation of the coefficient vector at a point
    /// (periodic coordinates first, then the interval coordinate).
    pub fn eval_c64(&self, point: &[f64], form: u8) -> Vec<num_complex::Complex64> {
        let pd = self.domain.periodic_dims();
        let mut out = vec![num_complex::Complex64::new(0.0, 0.0); self.value_len()];
        for (m, v) in &self.terms {
            if m.form != form {
                continue;
            }
            let phase: f64 = (0..pd).map(|j| f64::from(m.k[j]) * point[j]).sum();
            let mut w = num_complex::Complex64::from_polar(1.0, phase);
            if self.domain.has_interval() {
                w *= point[pd].powi(m.poly as i32);
            }
            for (o, c) in out.iter_mut().zip(v) {
                *o += crate::exact::gr_to_c64(c) * w;
            }
        }
        out
    }
}

fn value_len(kind: ValueKind, alg: &LieAlgebraSpec) -> usize {
    match kind {
        ValueKind::Scalar => 1,
        ValueKind::Lie => alg.dim(),
        ValueKind::Matrix => alg.rep_size() * alg.rep_size(),
    }
}

/// ∫ s^p over the domain against the positive top form.
fn integral_of_monomial(domain: Domain, poly: u32) -> ExactScalar {
    let p = i64::from(poly);
    match domain {
        Domain::T1 | Domain::T2 | Domain::T3 => {
            let d = domain.periodic_dims() as u32;
            ExactScalar::monomial(gr(1i64 << d, 0), d as i32)
        }
        Domain::Interval => ExactScalar::monomial(gr_frac(rat(1, p + 1), rat(0, 1)), 0),
        // (2π)² ∫_0^1 s^p ds
        Domain::T2xInterval => ExactScalar::monomial(gr_frac(rat(4, p + 1), rat(0, 1)), 2),
    }
}

#[derive(Clone, Copy)]
enum Pairing {
    Bracket,
    LieProduct,
    MatrixProduct,
    MatrixCommutator,
    ScalarScale,
    Trace,
}

impl Pairing {
    fn output_kind(self, a: ValueKind, b: ValueKind) -> ValueKind {
        match self {
            Pairing::Bracket => ValueKind::Lie,
            Pairing::LieProduct | Pairing::MatrixProduct | Pairing::MatrixCommutator => {
                ValueKind::Matrix
            }
            Pairing::Trace => ValueKind::Scalar,
            Pairing::ScalarScale => {
                if a == ValueKind::Scalar {
                    b
                } else {
                    a
                }
            }
        }
    }

    fn apply(
        self,
        alg: &LieAlgebraSpec,
        ka: ValueKind,
        kb: ValueKind,
        a: &[GaussRat],
        b: &[GaussRat],
    ) -> Vec<GaussRat> {
        let as_matrix = |k: ValueKind, v: &[GaussRat]| -> QMat {
            match k {
                ValueKind::Lie => alg.matrix_of(v),
                _ => {
                    let n = alg.rep_size();
                    QMat::from_rows(v.chunks(n).map(<[GaussRat]>::to_vec).collect())
                        .expect("square matrix coefficients")
                }
            }
        };
        match self {
            Pairing::Bracket => alg.bracket_coeffs(a, b),
            Pairing::Trace => vec![alg.trace_pair(a, b)],
            Pairing::LieProduct | Pairing::MatrixProduct => {
                (&as_matrix(ka, a) * &as_matrix(kb, b)).entries().to_vec()
            }
            Pairing::MatrixCommutator => as_matrix(ka, a)
                .commutator(&as_matrix(kb, b))
                .entries()
                .to_vec(),
            Pairing::ScalarScale => {
                if ka == ValueKind::Scalar {
                    b.iter().map(|x| x * &a[0]).collect()
                } else {
                    a.iter().map(|x| x * &b[0]).collect()
                }
            }
        }
    }
}

impl fmt::Display for FourierField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-form on {} ({} terms, {:?})",
            self.degree,
            self.domain.name(),
            self.terms.len(),
            self.kind
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::random::{random_field, RandomFieldSpec};
    use crate::lie::su2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn su2a() -> Arc<LieAlgebraSpec> {
        Arc::new(su2())
    }

    fn unit(a: usize) -> Vec<GaussRat> {
        let mut v = vec![GaussRat::zero(); 3];
        v[a] = gr(1, 0);
        v
    }

    fn scalar(domain: Domain, mode: Mode, c: GaussRat) -> FourierField {
        FourierField::mode(domain, ValueKind::Scalar, su2a(), mode, vec![c]).unwrap()
    }

    #[test]
    fn d_of_constant_is_zero() {
        let x = FourierField::constant(Domain::T3, su2a(), unit(1)).unwrap();
        assert!(x.d().unwrap().is_zero());
    }

    #[test]
    fn d_of_single_mode_on_circle() {
        let x = FourierField::mode(Domain::T1, ValueKind::Lie, su2a(), Mode::new([1, 0, 0], 0, 0), unit(2)).unwrap();
        let dx = x.d().unwrap();
        let expect = FourierField::mode(
            Domain::T1,
            ValueKind::Lie,
            su2a(),
            Mode::new([1, 0, 0], 0, 1),
            vec![GaussRat::zero(), GaussRat::zero(), gr(0, 1)],
        )
        .unwrap();
        assert_eq!(dx, expect);
    }

    #[test]
    fn d_squared_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for domain in [Domain::T3, Domain::T2xInterval, Domain::T2] {
            for deg in 0..domain.dim() - 1 {
                let x = random_field(domain, deg, su2a(), RandomFieldSpec::default(), &mut rng);
                assert!(x.d().unwrap().d().unwrap().is_zero());
            }
        }
    }

    #[test]
    fn top_degree_d_rejected() {
        let x = FourierField::zero(Domain::T2, 2, ValueKind::Lie, su2a());
        assert!(matches!(x.d(), Err(Error::Degree(_))));
    }

    #[test]
    fn wedge_of_coordinate_one_forms() {
        let a = scalar(Domain::T2, Mode::new([0; 3], 0, 0b01), gr(3, 0));
        let b = scalar(Domain::T2, Mode::new([0; 3], 0, 0b10), gr(0, 2));
        let ab = a.wedge_bracket(&b, WedgeMode::Product).unwrap();
        assert_eq!(ab, scalar(Domain::T2, Mode::new([0; 3], 0, 0b11), gr(0, 6)));
        let ba = b.wedge_bracket(&a, WedgeMode::Product).unwrap();
        assert_eq!(ba, scalar(Domain::T2, Mode::new([0; 3], 0, 0b11), gr(0, -6)));
    }

    #[test]
    fn bracket_of_equal_generator_forms_vanishes() {
        let x = FourierField::mode(Domain::T3, ValueKind::Lie, su2a(), Mode::new([1, 2, 0], 0, 0), unit(0)).unwrap();
        let dx = x.d().unwrap();
        assert!(dx.wedge_bracket(&dx, WedgeMode::Commutator).unwrap().is_zero());
    }

    #[test]
    fn wedge_degree_overflow_rejected() {
        let a = scalar(Domain::T2, Mode::new([0; 3], 0, 0b11), gr(1, 0));
        let b = scalar(Domain::T2, Mode::new([0; 3], 0, 0b01), gr(1, 0));
        assert!(matches!(a.wedge_bracket(&b, WedgeMode::Product), Err(Error::Degree(_))));
    }

    #[test]
    fn trace_a_bracket_dx_dy_single_modes() {
        // u(2), T = iE₀₀: A = T e^{-i(θ2+θ3)} dθ1, X = T e^{iθ2}, Y = T e^{iθ3}.
        // dX∧dY − dY∧dX = 2E₀₀ dθ23, A∧(…) = 2i E₀₀ dθ123, ∫ tr = 16iπ³.
        let alg = Arc::new(crate::lie::un(2).unwrap());
        let t = |k: [i32; 3], form: u8| {
            let mut v = vec![GaussRat::zero(); 4];
            v[0] = gr(1, 0);
            FourierField::mode(Domain::T3, ValueKind::Lie, alg.clone(), Mode::new(k, 0, form), v).unwrap()
        };
        let a = t([0, -1, -1], 1);
        let x = t([0, 1, 0], 0);
        let y = t([0, 0, 1], 0);
        let br = x.d().unwrap().wedge_bracket(&y.d().unwrap(), WedgeMode::Commutator).unwrap();
        assert_eq!(br.kind(), ValueKind::Matrix);
        let v = a.wedge_trace(&br).unwrap().integrate().unwrap();
        assert_eq!(v, ExactScalar::monomial(gr(0, 16), 3));
        assert_eq!(a.integrate_trace_wedge(&br).unwrap(), v);
        // su(2) has no symmetric invariant: the same expression vanishes.
        let s = su2a();
        let m = |k: [i32; 3], form: u8, g: usize| {
            FourierField::mode(Domain::T3, ValueKind::Lie, s.clone(), Mode::new(k, 0, form), unit(g)).unwrap()
        };
        let br = m([0, 1, 0], 0, 1).d().unwrap().wedge_bracket(&m([0, 0, 1], 0, 2).d().unwrap(), WedgeMode::Commutator).unwrap();
        assert!(m([0, -1, -1], 1, 0).integrate_trace_wedge(&br).unwrap().is_zero());
    }

    #[test]
    fn commutator_of_one_forms_is_antisymmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let alg = Arc::new(crate::lie::su3());
        for _ in 0..5 {
            let a = random_field(Domain::T3, 1, alg.clone(), RandomFieldSpec::default(), &mut rng);
            let b = random_field(Domain::T3, 1, alg.clone(), RandomFieldSpec::default(), &mut rng);
            let ab = a.wedge_bracket(&b, WedgeMode::Commutator).unwrap();
            let ba = b.wedge_bracket(&a, WedgeMode::Commutator).unwrap();
            assert!(ab.add(&ba).unwrap().is_zero());
        }
    }

    #[test]
    fn integrate_examples() {
        let e = scalar(Domain::T1, Mode::new([1, 0, 0], 0, 1), gr(1, 0));
        assert!(e.integrate().unwrap().is_zero());
        let one = scalar(Domain::T1, Mode::new([0; 3], 0, 1), gr(1, 0));
        assert_eq!(one.integrate().unwrap(), ExactScalar::monomial(gr(2, 0), 1));
        // t dt = (2π)² s ds
        let s = scalar(Domain::Interval, Mode::new([0; 3], 1, 1), gr(1, 0));
        let t_dt = ExactScalar::monomial(gr(4, 0), 2) * s.integrate().unwrap();
        assert_eq!(t_dt, ExactScalar::monomial(gr(2, 0), 2));
    }

    #[test]
    fn integrate_rejects_non_top_forms() {
        let x = scalar(Domain::T2, Mode::new([0; 3], 0, 1), gr(1, 0));
        assert!(matches!(x.integrate(), Err(Error::Degree(_))));
    }

    #[test]
    fn stokes_on_torus_and_cylinder() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let spec = RandomFieldSpec { terms: 5, ..Default::default() };
        for _ in 0..10 {
            let w = random_field(Domain::T2, 1, su2a(), spec, &mut rng).trace().unwrap();
            let w = w.add(&scalar(Domain::T2, Mode::new([0; 3], 0, 1), gr(1, 0))).unwrap();
            assert!(w.d().unwrap().integrate().unwrap().is_zero());

            let w = random_field(Domain::T2xInterval, 2, su2a(), spec, &mut rng);
            let w = w
                .wedge_bracket(&FourierField::constant(Domain::T2xInterval, su2a(), unit(0)).unwrap(), WedgeMode::Product)
                .unwrap()
                .trace()
                .unwrap()
                .add(&scalar(Domain::T2xInterval, Mode::new([0; 3], 2, 0b011), gr(1, 1)))
                .unwrap();
            let bulk = w.d().unwrap().integrate().unwrap();
            let top = w.restrict_interval_end(1).unwrap().integrate().unwrap();
            let bottom = w.restrict_interval_end(0).unwrap().integrate().unwrap();
            assert_eq!(bulk, &top - &bottom);
            assert!(!bulk.is_zero() || top.is_zero());
        }
    }

    #[test]
    fn random_real_form_fields_are_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let x = random_field(Domain::T3, 1, su2a(), RandomFieldSpec::default(), &mut rng);
            assert!(x.is_zero() || x.is_real_form());
        }
    }

    #[test]
    fn numerical_evaluation_matches_terms() {
        let x = FourierField::mode(Domain::T2xInterval, ValueKind::Lie, su2a(), Mode::new([1, -1, 0], 2, 0), unit(1)).unwrap();
        let v = x.eval_c64(&[0.3, 0.5, 0.5], 0);
        let expect = num_complex::Complex64::from_polar(0.25, -0.2);
        assert!((v[1] - expect).norm() < 1e-15);
    }
}
