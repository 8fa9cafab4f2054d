//! Exact scalars: Gaussian rationals and polynomials in π with Gaussian
//! rational coefficients.
//!
//! Every cocycle value on trigonometric or polynomial fields is an
//! [`ExactScalar`]; equality is coefficient-wise and therefore exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A rational number of arbitrary size.
pub type Rational = BigRational;

/// A complex number with rational real and imaginary parts.
pub type GaussRat = Complex<BigRational>;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn gr(re: i64, im: i64) -> GaussRat {
    Complex::new(rat(re, 1), rat(im, 1))
}

pub fn gr_frac(re: Rational, im: Rational) -> GaussRat {
    Complex::new(re, im)
}

pub fn gr_i() -> GaussRat {
    gr(0, 1)
}

pub fn gr_to_c64(z: &GaussRat) -> Complex64 {
    Complex64::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

/// Complex conjugate of a Gaussian rational.
pub fn gr_conj(z: &GaussRat) -> GaussRat {
    Complex::new(z.re.clone(), -z.im.clone())
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Formats a Gaussian rational in the token grammar accepted by [`parse_gauss`].
pub fn fmt_gauss(z: &GaussRat) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (true, true) => "0".to_string(),
        (false, true) => fmt_rational(&z.re),
        (true, false) => format!("{}i", fmt_rational(&z.im)),
        (false, false) => {
            let sign = if z.im.is_negative() { "" } else { "+" };
            format!("{}{}{}i", fmt_rational(&z.re), sign, fmt_rational(&z.im))
        }
    }
}

fn parse_rational(tok: &str) -> Option<Rational> {
    let tok = tok.trim();
    if tok.is_empty() {
        return None;
    }
    match tok.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(tok.parse().ok()?)),
    }
}

/// Parses a Gaussian rational token.
///
/// Accepted forms: `3`, `-1/2`, `i`, `-i`, `2i`, `1/2i` (meaning i/2),
/// `1/2+3/4i`, `-1-i`. No whitespace inside a token.
pub fn parse_gauss(tok: &str) -> Option<GaussRat> {
    let tok = tok.trim();
    if tok.is_empty() {
        return None;
    }
    let Some(body) = tok.strip_suffix('i') else {
        return Some(Complex::new(parse_rational(tok)?, Rational::zero()));
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(k, _)| k)
        .last();
    let (re_tok, im_tok) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_tok.is_empty() {
        Rational::zero()
    } else {
        parse_rational(re_tok)?
    };
    let im = match im_tok {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        t => parse_rational(t.strip_prefix('+').unwrap_or(t))?,
    };
    Some(Complex::new(re, im))
}

/// Σ_k q_k π^k with Gaussian rational q_k; k may be negative.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExactScalar {
    terms: BTreeMap<i32, GaussRat>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_gauss(q: GaussRat) -> Self {
        Self::monomial(q, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_gauss(gr(n, 0))
    }

    /// `q · π^k`.
    pub fn monomial(q: GaussRat, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(k, q);
        }
        Self { terms }
    }

    pub fn pi_pow(k: i32) -> Self {
        Self::monomial(gr(1, 0), k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of π^k.
    pub fn coeff(&self, k: i32) -> GaussRat {
        self.terms.get(&k).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussRat)> {
        self.terms.iter().map(|(k, q)| (*k, q))
    }

    pub fn scale(&self, q: &GaussRat) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c * q))
                .collect(),
        }
    }

    /// Multiplies by π^k.
    pub fn shift_pi(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(j, c)| (j + k, c.clone())).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, gr_conj(c))).collect(),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(k, q)| gr_to_c64(q) * std::f64::consts::PI.powi(*k))
            .sum()
    }

    fn add_term(&mut self, k: i32, q: &GaussRat) {
        if q.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(GaussRat::zero);
        *slot = &*slot + q;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, q)| match k {
                0 => format!("({})", fmt_gauss(q)),
                1 => format!("({})·π", fmt_gauss(q)),
                _ => format!("({})·π^{}", fmt_gauss(q), k),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        for (k, q) in &rhs.terms {
            self.add_term(*k, q);
        }
    }
}

impl Add<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(mut self, rhs: ExactScalar) -> ExactScalar {
        self += &rhs;
        self
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            terms: self.terms.iter().map(|(k, q)| (*k, -q.clone())).collect(),
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl Sub<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        self + &(-rhs)
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: ExactScalar) -> ExactScalar {
        &self - &rhs
    }
}

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = ExactScalar::zero();
        for (j, p) in &self.terms {
            for (k, q) in &rhs.terms {
                out.add_term(j + k, &(p * q));
            }
        }
        out
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        &self * &rhs
    }
}

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        let mut acc = ExactScalar::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

/// Parses a Gaussian rational or reports the offending token with its line.
pub fn parse_gauss_at(tok: &str, line: usize) -> Result<GaussRat> {
    parse_gauss(tok).ok_or_else(|| Error::Parse {
        line,
        message: format!("invalid Gaussian rational `{tok}`"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_gauss("3"), Some(gr(3, 0)));
        assert_eq!(parse_gauss("-i"), Some(gr(0, -1)));
        assert_eq!(parse_gauss("i"), Some(gr(0, 1)));
        assert_eq!(parse_gauss("1/2i"), Some(gr_frac(rat(0, 1), rat(1, 2))));
        assert_eq!(
            parse_gauss("1/2-3/4i"),
            Some(gr_frac(rat(1, 2), rat(-3, 4)))
        );
        assert_eq!(parse_gauss("-1-i"), Some(gr(-1, -1)));
        assert_eq!(parse_gauss("-1/3"), Some(gr_frac(rat(-1, 3), rat(0, 1))));
        assert!(parse_gauss("1/0").is_none());
        assert!(parse_gauss("x").is_none());
    }

    #[test]
    fn fmt_round_trip() {
        for z in [gr(0, 0), gr(2, -3), gr_frac(rat(1, 2), rat(5, 7)), gr(0, -1)] {
            assert_eq!(parse_gauss(&fmt_gauss(&z)), Some(z));
        }
    }

    #[test]
    fn pi_arithmetic() {
        let two_pi = ExactScalar::monomial(gr(2, 0), 1);
        let sq = &two_pi * &two_pi;
        assert_eq!(sq, ExactScalar::monomial(gr(4, 0), 2));
        let z = &sq - &sq;
        assert!(z.is_zero());
        let inv = ExactScalar::monomial(gr_frac(rat(1, 24), rat(0, 1)), -2);
        let cube = &(&two_pi * &two_pi) * &two_pi;
        assert_eq!(&inv * &cube, ExactScalar::monomial(gr_frac(rat(1, 3), rat(0, 1)), 1));
        assert!((two_pi.to_c64().re - 2.0 * std::f64::consts::PI).abs() < 1e-15);
    }
}
