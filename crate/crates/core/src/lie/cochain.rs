//! Constant-coefficient Chevalley–Eilenberg cochains with trivial coefficients.
//!
//! Convention (all degrees):
//!
//! ```text
//! (δc)(x_0, …, x_p) = Σ_{i<j} (−1)^{i+j} c([x_i, x_j], x_0, …, x̂_i, …, x̂_j, …, x_p)
//! ```
//!
//! At degree 2 this is exactly the cyclic form
//! `c(X,[Y,Z]) + c(Y,[Z,X]) + c(Z,[X,Y])`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

use super::algebra::LieAlgebraSpec;
use crate::exact::{gr_frac, rat, GaussRat};

/// Strictly increasing `k`-subsets of `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Sorts a tuple, returning the permutation sign, or `None` on a repeat.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstantCochain {
    algebra: Arc<LieAlgebraSpec>,
    degree: usize,
    values: BTreeMap<Vec<usize>, GaussRat>,
}

impl ConstantCochain {
    pub fn zero(algebra: Arc<LieAlgebraSpec>, degree: usize) -> Self {
        Self {
            algebra,
            degree,
            values: BTreeMap::new(),
        }
    }

    /// Builds a cochain from its values on increasing basis tuples.
    pub fn from_fn(
        algebra: Arc<LieAlgebraSpec>,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> GaussRat,
    ) -> Self {
        let values = combinations(algebra.dim(), degree)
            .into_iter()
            .filter_map(|t| {
                let v = f(&t);
                (!v.is_zero()).then_some((t, v))
            })
            .collect();
        Self {
            algebra,
            degree,
            values,
        }
    }

    /// `tr X[Y,Z]` restricted to constant elements.
    pub fn trace_triple(algebra: Arc<LieAlgebraSpec>) -> Self {
        let alg = algebra.clone();
        Self::from_fn(algebra, 3, |t| {
            let d = alg.dim();
            (0..d).fold(GaussRat::zero(), |acc, e| {
                acc + alg.trace_form(t[0], e) * alg.structure_constant(t[1], t[2], e)
            })
        })
    }

    /// Random cochain with small rational values.
    pub fn random<R: Rng>(algebra: Arc<LieAlgebraSpec>, degree: usize, rng: &mut R) -> Self {
        Self::from_fn(algebra, degree, |_| {
            gr_frac(
                rat(rng.random_range(-5..=5), rng.random_range(1..=4)),
                rat(rng.random_range(-5..=5), rng.random_range(1..=4)),
            )
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraSpec> {
        &self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Value on an arbitrary tuple of basis indices (antisymmetric extension).
    pub fn eval_basis(&self, idx: &[usize]) -> GaussRat {
        assert_eq!(idx.len(), self.degree, "cochain arity");
        match sort_with_sign(idx) {
            None => GaussRat::zero(),
            Some((sorted, sign)) => match self.values.get(&sorted) {
                Some(v) if sign > 0 => v.clone(),
                Some(v) => -v.clone(),
                None => GaussRat::zero(),
            },
        }
    }

    /// Multilinear evaluation on coefficient vectors.
    pub fn eval(&self, args: &[Vec<GaussRat>]) -> GaussRat {
        assert_eq!(args.len(), self.degree, "cochain arity");
        let mut acc = GaussRat::zero();
        for (tuple, v) in &self.values {
            // Sum over permutations of the stored increasing tuple.
            for (perm, sign) in permutations(self.degree) {
                let mut term = v.clone();
                for (slot, &p) in perm.iter().enumerate() {
                    let coeff = &args[slot][tuple[p]];
                    if coeff.is_zero() {
                        term = GaussRat::zero();
                        break;
                    }
                    term *= coeff;
                }
                if !term.is_zero() {
                    acc = if sign > 0 { acc + term } else { acc - term };
                }
            }
        }
        acc
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let sign = sort_with_sign(&p).map(|(_, s)| s).unwrap_or(1);
            (p, sign)
        })
        .collect()
}

/// Chevalley–Eilenberg coboundary for trivial coefficients.
pub fn ce_coboundary(c: &ConstantCochain) -> ConstantCochain {
    let alg = c.algebra.clone();
    let d = alg.dim();
    let p = c.degree;
    ConstantCochain::from_fn(alg.clone(), p + 1, |x| {
        let mut acc = GaussRat::zero();
        for i in 0..=p {
            for j in (i + 1)..=p {
                let rest: Vec<usize> = (0..=p)
                    .filter(|&k| k != i && k != j)
                    .map(|k| x[k])
                    .collect();
                let mut inner = GaussRat::zero();
                for e in 0..d {
                    let f = alg.structure_constant(x[i], x[j], e);
                    if f.is_zero() {
                        continue;
                    }
                    let mut args = Vec::with_capacity(p);
                    args.push(e);
                    args.extend_from_slice(&rest);
                    let v = c.eval_basis(&args);
                    if !v.is_zero() {
                        inner += f * v;
                    }
                }
                if (i + j) % 2 == 0 {
                    acc += inner;
                } else {
                    acc -= inner;
                }
            }
        }
        acc
    })
}

/// Degree-2 coboundary in the cyclic form, evaluated on coefficient vectors.
pub fn cyclic_coboundary_2(
    c: &ConstantCochain,
    x: &[GaussRat],
    y: &[GaussRat],
    z: &[GaussRat],
) -> GaussRat {
    let alg = &c.algebra;
    let yz = alg.bracket_coeffs(y, z);
    let zx = alg.bracket_coeffs(z, x);
    let xy = alg.bracket_coeffs(x, y);
    c.eval(&[x.to_vec(), yz]) + c.eval(&[y.to_vec(), zx]) + c.eval(&[z.to_vec(), xy])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gr;
    use crate::lie::algebra::{su2, su3, u1, un};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit(d: usize, a: usize) -> Vec<GaussRat> {
        let mut v = vec![GaussRat::zero(); d];
        v[a] = gr(1, 0);
        v
    }

    #[test]
    fn zero_maps_to_zero() {
        let alg = Arc::new(su2());
        for p in 0..3 {
            assert!(ce_coboundary(&ConstantCochain::zero(alg.clone(), p)).is_zero());
        }
    }

    #[test]
    fn abelian_degree_one_is_closed() {
        let alg = Arc::new(u1());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = ConstantCochain::random(alg, 1, &mut rng);
        assert!(ce_coboundary(&c).is_zero());
        let alg = Arc::new(un(1).unwrap());
        let c = ConstantCochain::random(alg, 1, &mut rng);
        assert!(ce_coboundary(&c).is_zero());
    }

    #[test]
    fn trace_triple_closed_by_brute_force() {
        // Brute force over all basis 4-tuples using only structure constants
        // and the trace form, independent of ce_coboundary.
        for alg in [Arc::new(su2()), Arc::new(un(2).unwrap())] {
            let c3 = ConstantCochain::trace_triple(alg.clone());
            let d = alg.dim();
            let tr3 = |a: usize, b: usize, c: usize| -> GaussRat {
                let bc = alg.basis()[b].commutator(&alg.basis()[c]);
                (&alg.basis()[a] * &bc).trace()
            };
            for x in 0..d {
                for y in 0..d {
                    for z in 0..d {
                        for w in 0..d {
                            let idx = [x, y, z, w];
                            let mut s = GaussRat::zero();
                            for i in 0..4 {
                                for j in (i + 1)..4 {
                                    let rest: Vec<usize> =
                                        (0..4).filter(|&k| k != i && k != j).map(|k| idx[k]).collect();
                                    let br = alg.basis()[idx[i]].commutator(&alg.basis()[idx[j]]);
                                    let r1 = alg.basis()[rest[0]].commutator(&alg.basis()[rest[1]]);
                                    let v = (&br * &r1).trace();
                                    s = if (i + j) % 2 == 0 { s + v } else { s - v };
                                }
                            }
                            assert!(s.is_zero());
                        }
                    }
                }
            }
            assert_eq!(c3.eval_basis(&[0, 1, 2]), tr3(0, 1, 2));
            assert!(ce_coboundary(&c3).is_zero());
        }
    }

    #[test]
    fn degree_two_matches_cyclic_form() {
        let alg = Arc::new(su3());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = ConstantCochain::random(alg.clone(), 2, &mut rng);
        let dc = ce_coboundary(&c);
        let d = alg.dim();
        for (a, b, e) in [(0, 1, 2), (3, 4, 7), (1, 5, 6), (2, 6, 7)] {
            let lhs = dc.eval_basis(&[a, b, e]);
            let rhs = cyclic_coboundary_2(&c, &unit(d, a), &unit(d, b), &unit(d, e));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn delta_squared_vanishes_on_random_cochains() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let algs = [Arc::new(su2()), Arc::new(un(2).unwrap())];
        let mut count = 0;
        for alg in &algs {
            for p in 0..alg.dim() - 1 {
                for _ in 0..8 {
                    let c = ConstantCochain::random(alg.clone(), p, &mut rng);
                    assert!(ce_coboundary(&ce_coboundary(&c)).is_zero());
                    count += 1;
                }
            }
        }
        let su3 = Arc::new(su3());
        for p in 0..3 {
            for _ in 0..6 {
                let c = ConstantCochain::random(su3.clone(), p, &mut rng);
                assert!(ce_coboundary(&ce_coboundary(&c)).is_zero());
                count += 1;
            }
        }
        assert!(count >= 50);
    }
}
