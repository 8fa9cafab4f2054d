//! Seeded random fields for property sweeps.

use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

use super::fourier::{Domain, FourierField, Mode, ValueKind};
use crate::exact::{gr_conj, gr_frac, rat, GaussRat};
use crate::lie::LieAlgebraSpec;

#[derive(Clone, Copy, Debug)]
pub struct RandomFieldSpec {
    pub terms: usize,
    pub max_k: i32,
    pub max_poly: u32,
    /// Impose `x(−k) = conj(x(k))` so the field lies in the compact real form.
    pub real_form: bool,
}

impl Default for RandomFieldSpec {
    fn default() -> Self {
        Self {
            terms: 3,
            max_k: 2,
            max_poly: 2,
            real_form: true,
        }
    }
}

fn small_rational<R: Rng>(rng: &mut R) -> GaussRat {
    gr_frac(
        rat(rng.random_range(-4..=4), rng.random_range(1..=3)),
        rat(rng.random_range(-4..=4), rng.random_range(1..=3)),
    )
}

/// Random Lie-valued `degree`-form on `domain`.
pub fn random_field<R: Rng>(
    domain: Domain,
    degree: usize,
    algebra: Arc<LieAlgebraSpec>,
    spec: RandomFieldSpec,
    rng: &mut R,
) -> FourierField {
    let dim = domain.dim();
    let pd = domain.periodic_dims();
    let masks: Vec<u8> = (0u8..(1 << dim))
        .filter(|m| m.count_ones() as usize == degree)
        .collect();
    let mut f = FourierField::zero(domain, degree, ValueKind::Lie, algebra.clone());
    if masks.is_empty() {
        return f;
    }
    for _ in 0..spec.terms {
        let mut k = [0i32; 3];
        for kj in k.iter_mut().take(pd) {
            *kj = rng.random_range(-spec.max_k..=spec.max_k);
        }
        let poly = if domain.has_interval() {
            rng.random_range(0..=spec.max_poly)
        } else {
            0
        };
        let form = masks[rng.random_range(0..masks.len())];
        let gen = rng.random_range(0..algebra.dim());
        let mut c = small_rational(rng);
        let mut v = vec![GaussRat::zero(); algebra.dim()];
        if spec.real_form && k == [0, 0, 0] {
            c = gr_frac(c.re.clone(), rat(0, 1));
        }
        v[gen] = c.clone();
        f.add_term(Mode::new(k, poly, form), v).expect("valid random term");
        if spec.real_form && k != [0, 0, 0] {
            let mut w = vec![GaussRat::zero(); algebra.dim()];
            w[gen] = gr_conj(&c);
            f.add_term(Mode::new([-k[0], -k[1], -k[2]], poly, form), w)
                .expect("valid random term");
        }
    }
    f
}

/// Random polynomial path `X(s) = Σ ξ_p s^p` (`1 ≤ p ≤ max_degree`) on the
/// interval, so `X(0) = 0`. Real coefficients keep it in the compact form.
pub fn random_path<R: Rng>(
    algebra: Arc<LieAlgebraSpec>,
    max_degree: u32,
    rng: &mut R,
) -> FourierField {
    let mut f = FourierField::zero(Domain::Interval, 0, ValueKind::Lie, algebra.clone());
    let n = rng.random_range(1..=3);
    for _ in 0..n {
        let p = rng.random_range(1..=max_degree);
        let mut v = vec![GaussRat::zero(); algebra.dim()];
        let gen = rng.random_range(0..algebra.dim());
        v[gen] = gr_frac(
            rat(rng.random_range(-4..=4), rng.random_range(1..=3)),
            rat(0, 1),
        );
        f.add_term(Mode::new([0; 3], p, 0), v).expect("valid path term");
    }
    f
}

/// Random loop: `s(1 − s) · P(s)` with `P` random of degree `≤ max_degree − 2`,
/// vanishing at both ends.
pub fn random_loop<R: Rng>(
    algebra: Arc<LieAlgebraSpec>,
    max_degree: u32,
    rng: &mut R,
) -> FourierField {
    assert!(max_degree >= 2, "loops need degree at least 2");
    let d = algebra.dim();
    let mut f = FourierField::zero(Domain::Interval, 0, ValueKind::Lie, algebra.clone());
    for p in 0..=(max_degree - 2) {
        let gen = rng.random_range(0..d);
        let c = gr_frac(
            rat(rng.random_range(-4..=4), rng.random_range(1..=3)),
            rat(0, 1),
        );
        let mut v = vec![GaussRat::zero(); d];
        v[gen] = c.clone();
        f.add_term(Mode::new([0; 3], p + 1, 0), v.clone()).expect("valid loop term");
        v[gen] = -c;
        f.add_term(Mode::new([0; 3], p + 2, 0), v).expect("valid loop term");
    }
    f
}
