//! Dense square matrices over the Gaussian rationals.

use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::exact::{gr_conj, gr_to_c64, GaussRat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    n: usize,
    data: Vec<GaussRat>,
}

impl QMat {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![GaussRat::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m.data[k * n + k] = GaussRat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussRat>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussRat {
        &self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussRat) {
        self.data[r * self.n + c] = v;
    }

    pub fn entries(&self) -> &[GaussRat] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> GaussRat {
        (0..self.n).fold(GaussRat::zero(), |acc, k| acc + self.get(k, k))
    }

    pub fn scale(&self, q: &GaussRat) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| x * q).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                m.set(r, c, gr_conj(self.get(c, r)));
            }
        }
        m
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn to_c64(&self) -> nalgebra::DMatrix<num_complex::Complex64> {
        nalgebra::DMatrix::from_fn(self.n, self.n, |r, c| gr_to_c64(self.get(r, c)))
    }
}

impl Add for &QMat {
    type Output = QMat;
    fn add(self, rhs: &QMat) -> QMat {
        QMat {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &QMat {
    type Output = QMat;
    fn sub(self, rhs: &QMat) -> QMat {
        QMat {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &QMat {
    type Output = QMat;
    fn mul(self, rhs: &QMat) -> QMat {
        let n = self.n;
        let mut out = QMat::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        let slot = &mut out.data[r * n + c];
                        *slot = &*slot + a * b;
                    }
                }
            }
        }
        out
    }
}

/// Exact least-squares-free solver for `Σ_a x_a v_a = w` where the `v_a` are
/// fixed vectors. Row-reduces once; each solve is then a small product.
#[derive(Clone, Debug)]
pub struct ExactDecomposer {
    rows: Vec<usize>,
    inverse: Vec<Vec<GaussRat>>,
    vectors: Vec<Vec<GaussRat>>,
}

impl ExactDecomposer {
    /// Returns `None` when the vectors are linearly dependent.
    pub fn new(vectors: Vec<Vec<GaussRat>>) -> Option<Self> {
        let k = vectors.len();
        if k == 0 {
            return Some(Self {
                rows: vec![],
                inverse: vec![],
                vectors,
            });
        }
        let len = vectors[0].len();
        // Greedily pick pivot coordinates by elimination on the transposed system.
        let mut work: Vec<Vec<GaussRat>> = vectors.clone();
        let mut rows = Vec::with_capacity(k);
        for a in 0..k {
            let pivot = (0..len).find(|&r| !work[a][r].is_zero())?;
            rows.push(pivot);
            let pv = work[a][pivot].clone();
            for b in (a + 1)..k {
                if work[b][pivot].is_zero() {
                    continue;
                }
                let factor = &work[b][pivot] / &pv;
                for r in 0..len {
                    let delta = &work[a][r] * &factor;
                    work[b][r] = &work[b][r] - delta;
                }
            }
        }
        // Square system M x = w[rows] with M[r][a] = v_a[rows[r]].
        let m: Vec<Vec<GaussRat>> = rows
            .iter()
            .map(|&r| vectors.iter().map(|v| v[r].clone()).collect())
            .collect();
        let inverse = invert(m)?;
        Some(Self {
            rows,
            inverse,
            vectors,
        })
    }

    /// Coefficients of `w`, or `None` if `w` is outside the span.
    pub fn decompose(&self, w: &[GaussRat]) -> Option<Vec<GaussRat>> {
        let rhs: Vec<&GaussRat> = self.rows.iter().map(|&r| &w[r]).collect();
        let x: Vec<GaussRat> = self
            .inverse
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&rhs)
                    .fold(GaussRat::zero(), |acc, (a, b)| acc + a * *b)
            })
            .collect();
        for (r, wr) in w.iter().enumerate() {
            let recon = self
                .vectors
                .iter()
                .zip(&x)
                .fold(GaussRat::zero(), |acc, (v, c)| acc + &v[r] * c);
            if &recon != wr {
                return None;
            }
        }
        Some(x)
    }
}

fn invert(mut m: Vec<Vec<GaussRat>>) -> Option<Vec<Vec<GaussRat>>> {
    let n = m.len();
    let mut inv: Vec<Vec<GaussRat>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| if r == c { GaussRat::one() } else { GaussRat::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        inv.swap(col, p);
        let pv = m[col][col].clone();
        for c in 0..n {
            m[col][c] = &m[col][c] / &pv;
            inv[col][c] = &inv[col][c] / &pv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..n {
                let d = &m[col][c] * &f;
                m[r][c] = &m[r][c] - d;
                let d = &inv[col][c] * &f;
                inv[r][c] = &inv[r][c] - d;
            }
        }
    }
    Some(inv)
}
