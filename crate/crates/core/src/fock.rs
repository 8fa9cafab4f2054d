//! Truncated fermionic Fock space over a polarized one-particle space.
//!
//! Generators are normalized as `a*(u)a(v) + a(v)a*(u) = 2⟨v,u⟩`, i.e.
//! `a = √2 c` with `c` the usual Jordan–Wigner operators. Currents, the
//! Schwinger term and implementers are built from `c`, so
//! `ρ̂(X) = ½ Σ X_mn :a*_m a_n: = Σ X_mn :c*_m c_n:`.
//!
//! The Fock basis is labelled by excitation masks relative to the Dirac sea
//! (negative modes filled): index `i` has occupation `i ⊕ vac`. The vacuum is
//! index 0 and comes first in the lexicographic order.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Mat = DMatrix<Complex64>;

/// Largest mode count for which the Fock space is built.
pub const MAX_MODES: usize = 14;
/// Largest mode count for the implementer solve (dense `2^d × 2^d`).
pub const MAX_IMPLEMENTER_MODES: usize = 10;

const UNITARITY_TOL: f64 = 1e-12;
/// Relative size below which the projected vacuum counts as lost.
const OVERLAP_TOL: f64 = 1e-8;
const GAUGE_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// One-particle mode: Fourier index and internal color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ModeLabel {
    pub n: i32,
    pub color: u8,
}

/// `H = H₊ ⊕ H₋` with `ε = +1` on `n ≥ 0` and `−1` on `n < 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarizedSpace {
    n_min: i32,
    n_max: i32,
    colors: u8,
    modes: Vec<ModeLabel>,
}

impl PolarizedSpace {
    /// Modes `n ∈ [n_min, n_max]` for each color, ordered by `(n, color)`.
    pub fn with_range(n_min: i32, n_max: i32, colors: u8) -> Result<Self> {
        if n_min > 0 || n_max < 0 || n_min > n_max {
            return Err(Error::Precondition(format!(
                "mode range [{n_min}, {n_max}] must contain 0"
            )));
        }
        if colors == 0 || colors > 2 {
            return Err(Error::Precondition(format!("{colors} colors (1 or 2 supported)")));
        }
        let modes: Vec<ModeLabel> = (n_min..=n_max)
            .flat_map(|n| (0..colors).map(move |color| ModeLabel { n, color }))
            .collect();
        Ok(Self {
            n_min,
            n_max,
            colors,
            modes,
        })
    }

    /// `n ∈ {−Λ, …, Λ}`, `d = colors·(2Λ+1)`.
    pub fn symmetric(lambda: u32, colors: u8) -> Result<Self> {
        let l = lambda as i32;
        Self::with_range(-l, l, colors)
    }

    /// `d` modes of one color: `n ∈ {−⌈d/2⌉, …, ⌊d/2⌋ − 1}` for even `d`,
    /// symmetric for odd `d`.
    pub fn with_dim(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Precondition("need at least two modes".into()));
        }
        let neg = (d / 2) as i32;
        Self::with_range(-neg, d as i32 - neg - 1, 1)
    }

    pub fn dim(&self) -> usize {
        self.modes.len()
    }

    pub fn colors(&self) -> u8 {
        self.colors
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn index_of(&self, n: i32, color: u8) -> Option<usize> {
        self.modes.iter().position(|m| m.n == n && m.color == color)
    }

    pub fn is_positive(&self, j: usize) -> bool {
        self.modes[j].n >= 0
    }

    pub fn epsilon(&self) -> Mat {
        Mat::from_fn(self.dim(), self.dim(), |i, j| {
            if i != j {
                ZERO
            } else if self.is_positive(i) {
                ONE
            } else {
                -ONE
            }
        })
    }

    /// Largest `|n|` with both `±n` in range.
    pub fn cutoff(&self) -> i32 {
        (-self.n_min).min(self.n_max)
    }

    /// `2|n| ≤ Λ`: modes away from the truncation edge.
    pub fn in_safe_window(&self, j: usize) -> bool {
        2 * self.modes[j].n.abs() <= self.cutoff()
    }

    /// Bitmask of the negative modes: the Dirac sea.
    pub fn vacuum_mask(&self) -> usize {
        self.modes
            .iter()
            .enumerate()
            .filter(|(_, m)| m.n < 0)
            .fold(0, |acc, (j, _)| acc | (1 << j))
    }

    fn check_matrix(&self, x: &Mat, what: &str) -> Result<()> {
        if x.nrows() != self.dim() || x.ncols() != self.dim() {
            return Err(Error::DomainMismatch(format!(
                "{what} is {}x{}, space has {} modes",
                x.nrows(),
                x.ncols(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// Sparse operator on the Fock space, stored by rows.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    dim: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl FockOperator {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            rows: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            rows: (0..dim).map(|i| vec![(i, ONE)]).collect(),
        }
    }

    /// Sums duplicate entries and drops exact zeros.
    pub fn from_triplets(dim: usize, mut t: Vec<(usize, usize, Complex64)>) -> Self {
        t.sort_by_key(|&(i, j, _)| (i, j));
        let mut rows = vec![Vec::new(); dim];
        for (i, j, v) in t {
            let row: &mut Vec<(usize, Complex64)> = &mut rows[i];
            match row.last_mut() {
                Some((jj, acc)) if *jj == j => *acc += v,
                _ => row.push((j, v)),
            }
        }
        for row in &mut rows {
            row.retain(|(_, v)| *v != ZERO);
        }
        Self { dim, rows }
    }

    /// Dense operator from its columns.
    pub fn from_columns(cols: &[Vec<Complex64>]) -> Self {
        let dim = cols.len();
        let mut rows = vec![Vec::new(); dim];
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                if v != ZERO {
                    rows[i].push((j, v));
                }
            }
        }
        Self { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.rows[i]
            .iter()
            .find(|(jj, _)| *jj == j)
            .map_or(ZERO, |&(_, v)| v)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, a)| a * v[j]).sum())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        let mut e = vec![ZERO; self.dim];
        e[j] = ONE;
        self.apply(&e)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&(j, v)| (j, v * s)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, ONE)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -ONE)
    }

    fn combine(&self, other: &Self, s: Complex64) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut t = Vec::with_capacity(self.nnz() + other.nnz());
        for (i, r) in self.rows.iter().enumerate() {
            t.extend(r.iter().map(|&(j, v)| (i, j, v)));
        }
        for (i, r) in other.rows.iter().enumerate() {
            t.extend(r.iter().map(|&(j, v)| (i, j, v * s)));
        }
        Self::from_triplets(self.dim, t)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut acc = vec![ZERO; self.dim];
        let mut touched = vec![false; self.dim];
        let mut idx = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for &(k, a) in row {
                    for &(j, b) in &other.rows[k] {
                        if !touched[j] {
                            touched[j] = true;
                            idx.push(j);
                        }
                        acc[j] += a * b;
                    }
                }
                idx.sort_unstable();
                let out: Vec<(usize, Complex64)> = idx
                    .iter()
                    .filter(|&&j| acc[j] != ZERO)
                    .map(|&j| (j, acc[j]))
                    .collect();
                for &j in &idx {
                    acc[j] = ZERO;
                    touched[j] = false;
                }
                idx.clear();
                out
            })
            .collect();
        Self { dim: self.dim, rows }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn adjoint(&self) -> Self {
        let mut t = Vec::with_capacity(self.nnz());
        for (i, r) in self.rows.iter().enumerate() {
            t.extend(r.iter().map(|&(j, v)| (j, i, v.conj())));
        }
        Self::from_triplets(self.dim, t)
    }

    /// `√(‖·‖₁ ‖·‖_∞)`, an upper bound for the operator norm.
    pub fn norm_bound(&self) -> f64 {
        let inf = self
            .rows
            .iter()
            .map(|r| r.iter().map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut cols = vec![0.0; self.dim];
        for r in &self.rows {
            for &(j, v) in r {
                cols[j] += v.norm();
            }
        }
        let one = cols.into_iter().fold(0.0, f64::max);
        (one * inf).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter().map(|(_, v)| v.norm()))
            .fold(0.0, f64::max)
    }
}

/// Outcome of the exhaustive CAR check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CarCheck {
    pub modes: usize,
    pub relations: usize,
    pub violations: usize,
    pub vacuum_violations: usize,
}

impl CarCheck {
    pub fn exact(&self) -> bool {
        self.violations == 0 && self.vacuum_violations == 0
    }
}

/// The generators `a_j`, `a*_j` for every mode of a polarized space.
#[derive(Clone, Debug)]
pub struct CarGenerators {
    space: PolarizedSpace,
    vac: usize,
}

/// Jordan–Wigner sign of mode `j` in occupation `occ`.
fn jw_sign(occ: usize, j: usize) -> i64 {
    if (occ & ((1 << j) - 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl CarGenerators {
    pub fn new(space: &PolarizedSpace) -> Result<Self> {
        if space.dim() > MAX_MODES {
            return Err(Error::DimensionBound(format!(
                "{} modes exceed the Fock-space limit {MAX_MODES}",
                space.dim()
            )));
        }
        Ok(Self {
            vac: space.vacuum_mask(),
            space: space.clone(),
        })
    }

    pub fn space(&self) -> &PolarizedSpace {
        &self.space
    }

    pub fn fock_dim(&self) -> usize {
        1 << self.space.dim()
    }

    /// `c_j |i⟩ = s |i′⟩`.
    pub fn lower(&self, j: usize, i: usize) -> Option<(usize, i64)> {
        let occ = i ^ self.vac;
        (occ >> j & 1 == 1).then(|| ((occ & !(1 << j)) ^ self.vac, jw_sign(occ, j)))
    }

    /// `c*_j |i⟩ = s |i′⟩`.
    pub fn raise(&self, j: usize, i: usize) -> Option<(usize, i64)> {
        let occ = i ^ self.vac;
        (occ >> j & 1 == 0).then(|| ((occ | (1 << j)) ^ self.vac, jw_sign(occ, j)))
    }

    fn op_from(&self, f: impl Fn(usize) -> Option<(usize, i64)>, scale: f64) -> FockOperator {
        let t = (0..self.fock_dim())
            .filter_map(|i| f(i).map(|(k, s)| (k, i, Complex64::new(scale * s as f64, 0.0))))
            .collect();
        FockOperator::from_triplets(self.fock_dim(), t)
    }

    /// `a_j = √2 c_j`.
    pub fn annihilator(&self, j: usize) -> FockOperator {
        self.op_from(|i| self.lower(j, i), std::f64::consts::SQRT_2)
    }

    /// `a*_j = √2 c*_j`.
    pub fn creator(&self, j: usize) -> FockOperator {
        self.op_from(|i| self.raise(j, i), std::f64::consts::SQRT_2)
    }

    /// `Σ_k u_k c_k v` (antilinear in `u` as an annihilator: pass `ū`).
    fn apply_lower(&self, coeffs: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; v.len()];
        for (k, &a) in coeffs.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (i, &x) in v.iter().enumerate() {
                if x != ZERO {
                    if let Some((t, s)) = self.lower(k, i) {
                        out[t] += a * x * s as f64;
                    }
                }
            }
        }
        out
    }

    fn apply_raise(&self, coeffs: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; v.len()];
        for (k, &a) in coeffs.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (i, &x) in v.iter().enumerate() {
                if x != ZERO {
                    if let Some((t, s)) = self.raise(k, i) {
                        out[t] += a * x * s as f64;
                    }
                }
            }
        }
        out
    }

    /// Checks `{a*_i, a_j} = 2δ_ij`, `{a_i, a_j} = 0`, `{a*_i, a*_j} = 0` on
    /// every basis vector in integer arithmetic (`a*a` carries the factor
    /// `√2·√2 = 2`), and the vacuum conditions.
    pub fn car_check(&self) -> CarCheck {
        let d = self.space.dim();
        let n = self.fock_dim();
        let mut violations = 0;
        let mut relations = 0;
        type Step<'a> = &'a dyn Fn(usize, usize) -> Option<(usize, i64)>;
        let lower = |j: usize, i: usize| self.lower(j, i);
        let raise = |j: usize, i: usize| self.raise(j, i);
        let pairs: [(Step, Step, bool); 3] = [(&raise, &lower, true), (&lower, &lower, false), (&raise, &raise, false)];
        for i in 0..d {
            for j in 0..d {
                for (p, q, mixed) in pairs.iter() {
                    relations += 1;
                    let target = if *mixed && i == j { 2 } else { 0 };
                    for b in 0..n {
                        let mut acc: Vec<(usize, i64)> = Vec::with_capacity(2);
                        if let Some((b1, s1)) = q(j, b) {
                            if let Some((b2, s2)) = p(i, b1) {
                                acc.push((b2, 2 * s1 * s2));
                            }
                        }
                        if let Some((b1, s1)) = p(i, b) {
                            if let Some((b2, s2)) = q(j, b1) {
                                acc.push((b2, 2 * s1 * s2));
                            }
                        }
                        let mut on_b = 0;
                        let mut off = false;
                        let mut merged: Vec<(usize, i64)> = Vec::new();
                        for (k, v) in acc {
                            match merged.iter_mut().find(|(kk, _)| *kk == k) {
                                Some((_, w)) => *w += v,
                                None => merged.push((k, v)),
                            }
                        }
                        for (k, v) in merged {
                            if k == b {
                                on_b += v;
                            } else if v != 0 {
                                off = true;
                            }
                        }
                        if off || on_b != target {
                            violations += 1;
                        }
                    }
                }
            }
        }
        let vacuum_violations = (0..d)
            .filter(|&j| {
                if self.space.is_positive(j) {
                    self.lower(j, 0).is_some()
                } else {
                    self.raise(j, 0).is_some()
                }
            })
            .count();
        CarCheck {
            modes: d,
            relations,
            violations,
            vacuum_violations,
        }
    }
}

/// `c(X,Y) = ¼ tr ε[ε,X][ε,Y]`.
pub fn schwinger_cocycle(space: &PolarizedSpace, x: &Mat, y: &Mat) -> Result<Complex64> {
    space.check_matrix(x, "X")?;
    space.check_matrix(y, "Y")?;
    let e = space.epsilon();
    let cx = &e * x - x * &e;
    let cy = &e * y - y * &e;
    Ok((e * cx * cy).trace() * 0.25)
}

/// `ρ̂(X) = Σ X_mn :c*_m c_n:` with `⟨0|ρ̂(X)|0⟩ = 0`.
pub fn current(gens: &CarGenerators, x: &Mat) -> Result<FockOperator> {
    let space = gens.space();
    space.check_matrix(x, "X")?;
    let mut t = Vec::new();
    let d = space.dim();
    for n in 0..d {
        for m in 0..d {
            let a = x[(m, n)];
            if a == ZERO {
                continue;
            }
            for i in 0..gens.fock_dim() {
                if let Some((i1, s1)) = gens.lower(n, i) {
                    if let Some((i2, s2)) = gens.raise(m, i1) {
                        t.push((i2, i, a * (s1 * s2) as f64));
                    }
                }
            }
        }
    }
    let sea: Complex64 = (0..d).filter(|&m| !space.is_positive(m)).map(|m| x[(m, m)]).sum();
    if sea != ZERO {
        t.extend((0..gens.fock_dim()).map(|i| (i, i, -sea)));
    }
    Ok(FockOperator::from_triplets(gens.fock_dim(), t))
}

/// Shift `e_{n,a} ↦ Σ_b T_ba e_{n+m,b}` restricted to the safe window.
/// `color = None` uses the identity on colors.
pub fn shift_operator(space: &PolarizedSpace, m: i32, color: Option<&Mat>) -> Result<Mat> {
    let c = space.colors() as usize;
    let t = match color {
        Some(t) if t.nrows() != c || t.ncols() != c => {
            return Err(Error::DomainMismatch(format!("color matrix must be {c}x{c}")))
        }
        Some(t) => t.clone(),
        None => Mat::identity(c, c),
    };
    let d = space.dim();
    let mut x = Mat::zeros(d, d);
    for (j, mode) in space.modes().iter().enumerate() {
        if !space.in_safe_window(j) {
            continue;
        }
        for b in 0..c as u8 {
            if let Some(k) = space.index_of(mode.n + m, b) {
                if space.in_safe_window(k) {
                    x[(k, j)] += t[(b as usize, mode.color as usize)];
                }
            }
        }
    }
    Ok(x)
}

/// `[ρ̂(X), ρ̂(Y)] − ρ̂([X,Y]) − c(X,Y)` and the central value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnomalyResult {
    /// Operator-norm bound of the defect over the whole truncated Fock space.
    pub defect: f64,
    pub central_re: f64,
    pub central_im: f64,
}

impl AnomalyResult {
    pub fn central(&self) -> Complex64 {
        Complex64::new(self.central_re, self.central_im)
    }
}

/// Checks the Schwinger term on Fock space. Both operators must be supported
/// on the safe window, where truncated and untruncated commutators agree.
pub fn anomaly_defect(gens: &CarGenerators, x: &Mat, y: &Mat) -> Result<AnomalyResult> {
    let space = gens.space();
    for (m, name) in [(x, "X"), (y, "Y")] {
        space.check_matrix(m, name)?;
        for i in 0..space.dim() {
            for j in 0..space.dim() {
                if m[(i, j)] != ZERO && !(space.in_safe_window(i) && space.in_safe_window(j)) {
                    let (a, b) = (space.modes()[i], space.modes()[j]);
                    return Err(Error::SafeWindow(format!(
                        "{name} couples n = {} and n = {} beyond |n| ≤ {}/2",
                        a.n,
                        b.n,
                        space.cutoff()
                    )));
                }
            }
        }
    }
    let rx = current(gens, x)?;
    let ry = current(gens, y)?;
    let rxy = current(gens, &(x * y - y * x))?;
    let c = schwinger_cocycle(space, x, y)?;
    let d = rx
        .commutator(&ry)
        .sub(&rxy)
        .sub(&FockOperator::identity(gens.fock_dim()).scale(c));
    Ok(AnomalyResult {
        defect: d.norm_bound(),
        central_re: c.re,
        central_im: c.im,
    })
}

/// `‖[ε, g]‖_F`, the truncated Hilbert–Schmidt diagnostic.
pub fn hs_norm(space: &PolarizedSpace, g: &Mat) -> f64 {
    let e = space.epsilon();
    (&e * g - g * &e).norm()
}

pub fn unitarity_defect(g: &Mat) -> f64 {
    let n = g.nrows();
    (g.adjoint() * g - Mat::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// How the implementer's phase was fixed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaugeReport {
    /// Basis index of the first nonzero coordinate of `Γ|0⟩` (made positive).
    pub gauge_index: usize,
    /// `|⟨0|Γ|0⟩|`.
    pub vacuum_overlap: f64,
    /// Norm of the projected reference vacuum before normalization.
    pub projected_norm: f64,
    pub hs_norm: f64,
}

#[derive(Clone, Debug)]
pub struct Implementer {
    pub gamma: FockOperator,
    pub report: GaugeReport,
}

fn gen_check(space: &PolarizedSpace, g: &Mat) -> Result<()> {
    space.check_matrix(g, "g")?;
    if space.dim() > MAX_IMPLEMENTER_MODES {
        return Err(Error::DimensionBound(format!(
            "{} modes exceed the implementer limit {MAX_IMPLEMENTER_MODES}",
            space.dim()
        )));
    }
    let u = unitarity_defect(g);
    if u > UNITARITY_TOL {
        return Err(Error::Precondition(format!("g is not unitary (defect {u:.3e})")));
    }
    Ok(())
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `Γ(g)|0⟩`: the common null vector of `c(g e_j)` (`j ∈ H₊`) and
/// `c*(g e_j)` (`j ∈ H₋`), selected by projecting the reference vacuum with
/// the commuting projectors `1 − n(g e_j)` and `n(g e_j)`, then gauged.
fn implementer_vacuum(gens: &CarGenerators, g: &Mat) -> Result<(Vec<Complex64>, GaugeReport)> {
    let space = gens.space();
    let mut v = vec![ZERO; gens.fock_dim()];
    v[0] = ONE;
    for j in 0..space.dim() {
        let col: Vec<Complex64> = g.column(j).iter().copied().collect();
        let conj: Vec<Complex64> = col.iter().map(|z| z.conj()).collect();
        v = if space.is_positive(j) {
            gens.apply_lower(&conj, &gens.apply_raise(&col, &v))
        } else {
            gens.apply_raise(&col, &gens.apply_lower(&conj, &v))
        };
        if norm(&v) < OVERLAP_TOL {
            let m = space.modes()[j];
            return Err(Error::SingularIntertwiner {
                mode: j,
                message: format!(
                    "the reference vacuum has no overlap with the image vacuum (mode n = {}, color {})",
                    m.n, m.color
                ),
            });
        }
    }
    let projected_norm = norm(&v);
    let vmax = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let gauge_index = v.iter().position(|z| z.norm() > GAUGE_TOL * vmax).unwrap_or(0);
    let phase = v[gauge_index].conj() / (v[gauge_index].norm() * projected_norm);
    for z in &mut v {
        *z *= phase;
    }
    let report = GaugeReport {
        gauge_index,
        vacuum_overlap: v[0].norm(),
        projected_norm,
        hs_norm: hs_norm(space, g),
    };
    Ok((v, report))
}

/// `Γ(g)` with `Γ a*(u) Γ⁻¹ = a*(gu)`, phase fixed by the gauge.
///
/// Basis states are `Π c*_p Π c_q |0⟩` (positive `p`, negative `q` in the
/// excitation mask), so `Γ|S⟩ = Π c*(g e_p) Π c(g e_q) Γ|0⟩` column by column.
pub fn bogoliubov_implementer(gens: &CarGenerators, g: &Mat) -> Result<Implementer> {
    let space = gens.space();
    gen_check(space, g)?;
    let (omega, report) = implementer_vacuum(gens, g)?;
    let d = space.dim();
    let cols_g: Vec<Vec<Complex64>> = (0..d).map(|j| g.column(j).iter().copied().collect()).collect();
    let unit = |j: usize| {
        let mut e = vec![ZERO; d];
        e[j] = ONE;
        e
    };
    let n = gens.fock_dim();
    let mut cols = Vec::with_capacity(n);
    for mask in 0..n {
        let mut basis = vec![ZERO; n];
        basis[0] = ONE;
        let mut image = omega.clone();
        for j in (0..d).filter(|j| mask >> j & 1 == 1) {
            if space.is_positive(j) {
                basis = gens.apply_raise(&unit(j), &basis);
                image = gens.apply_raise(&cols_g[j], &image);
            } else {
                basis = gens.apply_lower(&unit(j), &basis);
                let conj: Vec<Complex64> = cols_g[j].iter().map(|z| z.conj()).collect();
                image = gens.apply_lower(&conj, &image);
            }
        }
        let s = basis[mask];
        debug_assert!((s.norm() - 1.0).abs() < 1e-12);
        cols.push(image.into_iter().map(|z| z * s.conj()).collect::<Vec<_>>());
    }
    Ok(Implementer {
        gamma: FockOperator::from_columns(&cols),
        report,
    })
}

/// `max_j ‖Γ c*_j − c*(g e_j) Γ‖` (operator-norm bound).
pub fn intertwining_residual(gens: &CarGenerators, g: &Mat, gamma: &FockOperator) -> f64 {
    let d = gens.space().dim();
    let c: Vec<FockOperator> = (0..d).map(|j| gens.op_from(|i| gens.raise(j, i), 1.0)).collect();
    (0..d)
        .map(|j| {
            let mut rhs = FockOperator::zero(gens.fock_dim());
            for (k, ck) in c.iter().enumerate() {
                if g[(k, j)] != ZERO {
                    rhs = rhs.add(&ck.scale(g[(k, j)]));
                }
            }
            gamma.mul(&c[j]).sub(&rhs.mul(gamma)).norm_bound()
        })
        .fold(0.0, f64::max)
}

/// `Φ(g,g′)` with `Γ(g)Γ(g′) = Φ(g,g′) Γ(gg′)`, read off on the vacuum.
pub fn phase_two_cocycle(gens: &CarGenerators, g: &Mat, gp: &Mat) -> Result<Complex64> {
    phase_with(gens, g, gp, ONE, ONE, ONE)
}

/// Same, for implementers regauged as `Γ′(h) = ψ(h)⁻¹ Γ(h)`.
fn phase_with(
    gens: &CarGenerators,
    g: &Mat,
    gp: &Mat,
    psi_g: Complex64,
    psi_gp: Complex64,
    psi_ggp: Complex64,
) -> Result<Complex64> {
    let gg = g * gp;
    let space = gens.space();
    gen_check(space, g)?;
    gen_check(space, gp)?;
    let gamma_g = bogoliubov_implementer(gens, g)?.gamma.scale(psi_g.inv());
    let (v_gp, _) = implementer_vacuum(gens, gp)?;
    let (v_gg, _) = implementer_vacuum(gens, &gg)?;
    let lhs: Vec<Complex64> = gamma_g.apply(&v_gp).into_iter().map(|z| z / psi_gp).collect();
    let rhs: Vec<Complex64> = v_gg.into_iter().map(|z| z / psi_ggp).collect();
    Ok(dot(&rhs, &lhs) / dot(&rhs, &rhs))
}

/// `Φ(g,g′)Φ(gg′,g″) / (Φ(g,g′g″)Φ(g′,g″))`.
pub fn phase_cocycle_ratio(gens: &CarGenerators, g: &Mat, gp: &Mat, gpp: &Mat) -> Result<Complex64> {
    let a = phase_two_cocycle(gens, g, gp)?;
    let b = phase_two_cocycle(gens, &(g * gp), gpp)?;
    let c = phase_two_cocycle(gens, g, &(gp * gpp))?;
    let d = phase_two_cocycle(gens, gp, gpp)?;
    Ok(a * b / (c * d))
}

/// Result of regauging implementers by a phase function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftCheck {
    pub phi: Complex64,
    pub phi_prime: Complex64,
    /// `Φ·ψ(gg′)ψ(g)⁻¹ψ(g′)⁻¹`.
    pub predicted: Complex64,
    pub defect: f64,
}

/// Recomputes `Φ′` from the regauged implementers `Γ′ = ψ⁻¹Γ` and compares
/// with `Φ ψ(gg′) ψ(g)⁻¹ ψ(g′)⁻¹`.
pub fn lift_coboundary_check(
    gens: &CarGenerators,
    g: &Mat,
    gp: &Mat,
    psi: &dyn Fn(&Mat) -> Complex64,
) -> Result<LiftCheck> {
    let gg = g * gp;
    let (a, b, c) = (psi(g), psi(gp), psi(&gg));
    let phi = phase_two_cocycle(gens, g, gp)?;
    let phi_prime = phase_with(gens, g, gp, a, b, c)?;
    let predicted = phi * c / (a * b);
    Ok(LiftCheck {
        phi,
        phi_prime,
        predicted,
        defect: (phi_prime - predicted).norm(),
    })
}

/// Phase of `det g₊₊`.
pub fn det_phase_plus(space: &PolarizedSpace, g: &Mat) -> Complex64 {
    let idx: Vec<usize> = (0..space.dim()).filter(|&j| space.is_positive(j)).collect();
    let block = Mat::from_fn(idx.len(), idx.len(), |i, j| g[(idx[i], idx[j])]);
    let det = block.determinant();
    det / det.norm()
}

/// `exp(scale·H)` with `H` a random antihermitian matrix with entries of
/// size at most 1.
pub fn random_unitary<R: rand::Rng + ?Sized>(d: usize, scale: f64, rng: &mut R) -> Mat {
    random_antihermitian(d, rng).scale_c(scale).exp()
}

pub fn random_antihermitian<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> Mat {
    let mut h = Mat::zeros(d, d);
    for i in 0..d {
        h[(i, i)] = Complex64::new(0.0, rng.random_range(-1.0..1.0));
        for j in 0..i {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            h[(i, j)] = z;
            h[(j, i)] = -z.conj();
        }
    }
    h
}

/// Random unitary commuting with `ε`.
pub fn random_block_unitary<R: rand::Rng + ?Sized>(space: &PolarizedSpace, scale: f64, rng: &mut R) -> Mat {
    let mut h = random_antihermitian(space.dim(), rng);
    for i in 0..space.dim() {
        for j in 0..space.dim() {
            if space.is_positive(i) != space.is_positive(j) {
                h[(i, j)] = ZERO;
            }
        }
    }
    h.scale_c(scale).exp()
}

trait ScaleC {
    fn scale_c(self, s: f64) -> Self;
}

impl ScaleC for Mat {
    fn scale_c(self, s: f64) -> Self {
        self.map(|z| z * s)
    }
}
