//! Obstruction theory for extensions of finite groups, a toy gauge groupoid
//! carrying the `ω`/`Φ` cocycle chain, and the Čech lifting cocycle of
//! projective transition data.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Finite groups

/// A finite group as an interned multiplication table; element 0 is the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub name: String,
    pub labels: Vec<String>,
    pub table: Vec<Vec<usize>>,
    #[serde(skip)]
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(name: impl Into<String>, labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let mut g = Self {
            name: name.into(),
            labels,
            table,
            inverses: Vec::new(),
        };
        g.validate()?;
        Ok(g)
    }

    /// Checks the axioms and fills the inverse table.
    pub fn validate(&mut self) -> Result<()> {
        let n = self.table.len();
        let bad = |m: String| Error::Instance(format!("group {}: {m}", self.name));
        if n == 0 || self.labels.len() != n {
            return Err(bad(format!("{} labels for a table of size {n}", self.labels.len())));
        }
        if self.table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(bad("table is not a closed square".into()));
        }
        if (0..n).any(|x| self.table[0][x] != x || self.table[x][0] != x) {
            return Err(bad("element 0 is not the identity".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]] {
                        return Err(bad(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| self.table[a][b] == 0) {
                Some(b) => inv.push(b),
                None => return Err(bad(format!("element {a} has no inverse"))),
            }
        }
        self.inverses = inv;
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(format!("Z{n}"), (0..n).map(|a| a.to_string()).collect(), table).expect("cyclic group")
    }

    /// `G × H` with `(g, h) ↦ g·|H| + h`.
    pub fn product(g: &Self, h: &Self) -> Self {
        let (m, n) = (g.order(), h.order());
        let labels = (0..m * n)
            .map(|i| format!("({},{})", g.labels[i / n], h.labels[i % n]))
            .collect();
        let table = (0..m * n)
            .map(|i| {
                (0..m * n)
                    .map(|j| g.mul(i / n, j / n) * n + h.mul(i % n, j % n))
                    .collect()
            })
            .collect();
        Self::new(format!("{}x{}", g.name, h.name), labels, table).expect("direct product")
    }

    /// `Z/n₁ × … × Z/n_k`, elements in mixed radix (last factor fastest).
    pub fn abelian(orders: &[u64]) -> Self {
        orders
            .iter()
            .map(|&n| Self::cyclic(n as usize))
            .reduce(|a, b| Self::product(&a, &b))
            .unwrap_or_else(|| Self::cyclic(1))
    }

    /// Permutations of three letters, composed as `(στ)(x) = σ(τ(x))`.
    pub fn s3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [2, 1, 0], [0, 2, 1]];
        let labels = vec!["e", "r", "r2", "t01", "t02", "t12"].into_iter().map(String::from).collect();
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
        let table = perms
            .iter()
            .map(|s| perms.iter().map(|t| idx([s[t[0]], s[t[1]], s[t[2]]])).collect())
            .collect();
        Self::new("S3", labels, table).expect("S3")
    }

    /// Quaternion group; element `2u + s` is `(−1)^s q_u` with
    /// `q = (1, i, j, k)`.
    pub fn q8() -> Self {
        // unit products: q_a q_b = sign · q_c
        let unit = |a: usize, b: usize| -> (usize, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (x, 0),
                (x, y) if x == y => (0, 1),
                (1, 2) => (3, 0),
                (2, 3) => (1, 0),
                (3, 1) => (2, 0),
                (2, 1) => (3, 1),
                (3, 2) => (1, 1),
                _ => (2, 1),
            }
        };
        let names = ["1", "i", "j", "k"];
        let labels = (0..8)
            .map(|e| format!("{}{}", if e % 2 == 1 { "-" } else { "" }, names[e / 2]))
            .collect();
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (c, s) = unit(x / 2, y / 2);
                        2 * c + (s + x % 2 + y % 2) % 2
                    })
                    .collect()
            })
            .collect();
        Self::new("Q8", labels, table).expect("Q8")
    }
}

fn check_hom(name: &str, map: &[usize], from: &FiniteGroup, to: &FiniteGroup) -> Result<()> {
    if map.len() != from.order() || map.iter().any(|&x| x >= to.order()) {
        return Err(Error::Instance(format!("{name}: wrong size or range")));
    }
    for a in 0..from.order() {
        for b in 0..from.order() {
            if map[from.mul(a, b)] != to.mul(map[a], map[b]) {
                return Err(Error::Instance(format!("{name} is not a homomorphism at ({a}, {b})")));
            }
        }
    }
    Ok(())
}

fn check_exact(
    what: &str,
    incl: &[usize],
    sub: &FiniteGroup,
    mid: &FiniteGroup,
    proj: &[usize],
    quo: &FiniteGroup,
) -> Result<()> {
    let mut seen = vec![false; mid.order()];
    for &x in incl {
        if seen[x] {
            return Err(Error::Instance(format!("{what}: inclusion is not injective")));
        }
        seen[x] = true;
    }
    let mut hit = vec![false; quo.order()];
    for &y in proj {
        hit[y] = true;
    }
    if hit.iter().any(|h| !h) {
        return Err(Error::Instance(format!("{what}: projection is not surjective")));
    }
    for x in 0..mid.order() {
        if seen[x] != (proj[x] == 0) {
            return Err(Error::Instance(format!(
                "{what}: image of {} differs from the kernel at element {x}",
                sub.name
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Extension instances

/// `1 → N → F → G → 1` with a section `s`, a central extension
/// `1 → a → N̂ → N → 1`, and for each `g ∈ G` an automorphism of `N̂` lifting
/// conjugation by `s(g)` and fixing `a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtensionInstance {
    pub name: String,
    pub n: FiniteGroup,
    pub f: FiniteGroup,
    pub g: FiniteGroup,
    /// `N → F`.
    pub incl: Vec<usize>,
    /// `F → G`.
    pub proj: Vec<usize>,
    /// Cyclic orders of `a`.
    pub a_orders: Vec<u64>,
    pub nhat: FiniteGroup,
    /// `a → N̂`, with `a` enumerated as [`FiniteGroup::abelian`].
    pub a_incl: Vec<usize>,
    /// `N̂ → N`.
    pub nhat_proj: Vec<usize>,
    /// `s: G → F`.
    pub section: Vec<usize>,
    /// `aut[g]`: automorphism of `N̂` over conjugation by `s(g)`.
    pub aut: Vec<Vec<usize>>,
}

/// A normalized cochain `G^p → a`, components in the cyclic factors of `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupCochain {
    pub degree: usize,
    pub group_order: usize,
    pub a_orders: Vec<u64>,
    /// Indexed by the tuple read as a base-`|G|` number, first argument most
    /// significant.
    pub values: Vec<Vec<u64>>,
}

impl GroupCochain {
    pub fn zero(degree: usize, group_order: usize, a_orders: &[u64]) -> Self {
        Self {
            degree,
            group_order,
            a_orders: a_orders.to_vec(),
            values: vec![vec![0; a_orders.len()]; group_order.pow(degree as u32)],
        }
    }

    pub fn index(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &x| acc * self.group_order + x)
    }

    pub fn get(&self, args: &[usize]) -> &[u64] {
        &self.values[self.index(args)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    /// Vanishes whenever an argument is the identity.
    pub fn is_normalized(&self) -> bool {
        tuples(self.group_order, self.degree)
            .filter(|t| t.contains(&0))
            .all(|t| self.get(&t).iter().all(|&x| x == 0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (v, w) in out.values.iter_mut().zip(&other.values) {
            for ((x, &y), &n) in v.iter_mut().zip(w).zip(&self.a_orders) {
                *x = (*x + n - y) % n;
            }
        }
        out
    }
}

fn tuples(n: usize, p: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(p as u32)).map(move |mut i| {
        let mut t = vec![0; p];
        for k in (0..p).rev() {
            t[k] = i % n;
            i /= n;
        }
        t
    })
}

/// Digits of an element of `Z/n₁ × …` in the mixed-radix enumeration.
fn digits(mut x: usize, orders: &[u64]) -> Vec<u64> {
    let mut d = vec![0; orders.len()];
    for k in (0..orders.len()).rev() {
        d[k] = (x as u64) % orders[k];
        x /= orders[k] as usize;
    }
    d
}

fn from_digits(d: &[u64], orders: &[u64]) -> usize {
    d.iter().zip(orders).fold(0, |acc, (&x, &n)| acc * n as usize + (x % n) as usize)
}

/// `(δc)(g₁,…,g_{p+1})` for the trivial action.
pub fn coboundary(g: &FiniteGroup, c: &GroupCochain) -> GroupCochain {
    let p = c.degree;
    let mut out = GroupCochain::zero(p + 1, c.group_order, &c.a_orders);
    for t in tuples(g.order(), p + 1) {
        let mut acc: Vec<i64> = c.get(&t[1..]).iter().map(|&x| x as i64).collect();
        for i in 0..p {
            let mut s = t.clone();
            s[i] = g.mul(t[i], t[i + 1]);
            s.remove(i + 1);
            let sign = if i % 2 == 0 { -1 } else { 1 };
            for (a, &v) in acc.iter_mut().zip(c.get(&s)) {
                *a += sign * v as i64;
            }
        }
        let sign = if p.is_multiple_of(2) { -1 } else { 1 };
        for (a, &v) in acc.iter_mut().zip(c.get(&t[..p])) {
            *a += sign * v as i64;
        }
        let idx = out.index(&t);
        out.values[idx] = acc
            .iter()
            .zip(&c.a_orders)
            .map(|(&x, &n)| x.rem_euclid(n as i64) as u64)
            .collect();
    }
    out
}

impl ExtensionInstance {
    /// Checks exactness, centrality, normalization of the section and the
    /// automorphism data.
    pub fn validate(&mut self) -> Result<()> {
        for grp in [&mut self.n, &mut self.f, &mut self.g, &mut self.nhat] {
            grp.validate()?;
        }
        let a = FiniteGroup::abelian(&self.a_orders);
        check_hom("N -> F", &self.incl, &self.n, &self.f)?;
        check_hom("F -> G", &self.proj, &self.f, &self.g)?;
        check_hom("a -> N^", &self.a_incl, &a, &self.nhat)?;
        check_hom("N^ -> N", &self.nhat_proj, &self.nhat, &self.n)?;
        check_exact("1 -> N -> F -> G -> 1", &self.incl, &self.n, &self.f, &self.proj, &self.g)?;
        check_exact("1 -> a -> N^ -> N -> 1", &self.a_incl, &a, &self.nhat, &self.nhat_proj, &self.n)?;
        for &z in &self.a_incl {
            if (0..self.nhat.order()).any(|x| self.nhat.mul(z, x) != self.nhat.mul(x, z)) {
                return Err(Error::Instance(format!("a is not central in N^ (element {z})")));
            }
        }
        if self.section.len() != self.g.order() || self.section.iter().any(|&x| x >= self.f.order()) {
            return Err(Error::Instance("section has the wrong size".into()));
        }
        if self.section[0] != 0 {
            return Err(Error::Instance("section is not normalized: s(e) != e".into()));
        }
        for (g, &s) in self.section.iter().enumerate() {
            if self.proj[s] != g {
                return Err(Error::Instance(format!(
                    "section maps {} into the coset of {}",
                    self.g.labels[g], self.g.labels[self.proj[s]]
                )));
            }
        }
        if self.aut.len() != self.g.order() {
            return Err(Error::Instance("need one automorphism of N^ per element of G".into()));
        }
        for g in 0..self.g.order() {
            let phi = &self.aut[g];
            check_hom(&format!("aut[{g}]"), phi, &self.nhat, &self.nhat)?;
            let mut seen = vec![false; phi.len()];
            for &x in phi {
                seen[x] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::Instance(format!("aut[{g}] is not bijective")));
            }
            for x in 0..self.nhat.order() {
                let n = self.nhat_proj[x];
                if self.nhat_proj[phi[x]] != self.conj_n(g, n) {
                    return Err(Error::Instance(format!("aut[{g}] does not lift conjugation by s(g)")));
                }
            }
            if self.a_incl.iter().any(|&z| phi[z] != z) {
                return Err(Error::Instance(format!("aut[{g}] moves a")));
            }
        }
        if self.aut[0].iter().enumerate().any(|(i, &x)| i != x) {
            return Err(Error::Instance("aut[e] is not the identity".into()));
        }
        let sigma = self.sigma()?;
        let lift = self.default_lift(&sigma);
        for g in 0..self.g.order() {
            for h in 0..self.g.order() {
                let gh = self.g.mul(g, h);
                let sh = lift[g * self.g.order() + h];
                for x in 0..self.nhat.order() {
                    let lhs = self.aut[g][self.aut[h][x]];
                    let inner = self.nhat.mul(self.nhat.mul(sh, self.aut[gh][x]), self.nhat.inv(sh));
                    if lhs != inner {
                        return Err(Error::Instance(format!(
                            "aut[{g}]aut[{h}] != Inn(sigma^)aut[{gh}] on N^ element {x}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn n_of(&self, f: usize) -> Option<usize> {
        self.incl.iter().position(|&x| x == f)
    }

    /// `s(g) n s(g)⁻¹` in `N`.
    fn conj_n(&self, g: usize, n: usize) -> usize {
        let s = self.section[g];
        let x = self.f.mul(self.f.mul(s, self.incl[n]), self.f.inv(s));
        self.n_of(x).expect("N is normal")
    }

    /// `σ(g,g′) = s(g)s(g′)s(gg′)⁻¹ ∈ N`, flattened as `g·|G| + g′`.
    pub fn sigma(&self) -> Result<Vec<usize>> {
        let k = self.g.order();
        let mut out = Vec::with_capacity(k * k);
        for g in 0..k {
            for h in 0..k {
                let s = self.f.mul(
                    self.f.mul(self.section[g], self.section[h]),
                    self.f.inv(self.section[self.g.mul(g, h)]),
                );
                out.push(self.n_of(s).ok_or_else(|| {
                    Error::Instance(format!("s({g})s({h})s({g}{h})^-1 is not in N"))
                })?);
            }
        }
        Ok(out)
    }

    /// `σ(g,g′)σ(gg′,g″) [s(g)σ(g′,g″)s(g)⁻¹ σ(g,g′g″)]⁻¹` for every triple;
    /// all entries are the identity.
    pub fn sigma_relation_defects(&self, sigma: &[usize]) -> Vec<usize> {
        let k = self.g.order();
        let n = &self.n;
        tuples(k, 3)
            .map(|t| {
                let (a, b, c) = (t[0], t[1], t[2]);
                let lhs = n.mul(sigma[a * k + b], sigma[self.g.mul(a, b) * k + c]);
                let rhs = n.mul(self.conj_n(a, sigma[b * k + c]), sigma[a * k + self.g.mul(b, c)]);
                n.mul(lhs, n.inv(rhs))
            })
            .collect()
    }

    /// Smallest-index preimage of each `σ(g,g′)` in `N̂`.
    pub fn default_lift(&self, sigma: &[usize]) -> Vec<usize> {
        sigma
            .iter()
            .map(|&s| (0..self.nhat.order()).find(|&x| self.nhat_proj[x] == s).expect("surjective"))
            .collect()
    }

    /// Multiplies the lift pointwise by `a`-valued data (a 2-cochain).
    pub fn shift_lift(&self, lift: &[usize], by: &GroupCochain) -> Vec<usize> {
        lift.iter()
            .enumerate()
            .map(|(i, &x)| self.nhat.mul(x, self.a_incl[from_digits(&by.values[i], &self.a_orders)]))
            .collect()
    }

    /// Replaces the section by `s′(g) = n(g)s(g)` and the automorphisms by
    /// `Inn(n̂(g))∘aut[g]`, `n̂(g)` the smallest preimage of `n(g)`.
    pub fn with_section(&self, section: Vec<usize>) -> Result<Self> {
        let mut out = self.clone();
        for g in 0..self.g.order() {
            let d = self.f.mul(section[g], self.f.inv(self.section[g]));
            let n = self.n_of(d).ok_or_else(|| {
                Error::Instance(format!("new section leaves the coset of {}", self.g.labels[g]))
            })?;
            let nh = (0..self.nhat.order()).find(|&x| self.nhat_proj[x] == n).expect("surjective");
            out.aut[g] = (0..self.nhat.order())
                .map(|x| self.nhat.mul(self.nhat.mul(nh, self.aut[g][x]), self.nhat.inv(nh)))
                .collect();
        }
        out.section = section;
        out.validate()?;
        Ok(out)
    }
}

/// The same `N → F → G` with `N̂ = N × a` and automorphisms acting by
/// conjugation on `N` and trivially on `a`; the product lift has `α = 0`.
pub fn split_instance(inst: &ExtensionInstance) -> Result<ExtensionInstance> {
    let a = FiniteGroup::abelian(&inst.a_orders);
    let nhat = FiniteGroup::product(&inst.n, &a);
    let m = a.order();
    let aut = (0..inst.g.order())
        .map(|g| (0..nhat.order()).map(|x| inst.conj_n(g, x / m) * m + x % m).collect())
        .collect();
    let mut out = ExtensionInstance {
        name: format!("{}-split", inst.name),
        a_incl: (0..m).collect(),
        nhat_proj: (0..nhat.order()).map(|x| x / m).collect(),
        nhat,
        aut,
        ..inst.clone()
    };
    out.validate()?;
    Ok(out)
}

/// `σ` for the instance with the relation cocycle relation checked exhaustively.
pub fn sigma_from_section(inst: &ExtensionInstance) -> Result<Vec<usize>> {
    let sigma = inst.sigma()?;
    if let Some(i) = inst.sigma_relation_defects(&sigma).iter().position(|&d| d != 0) {
        return Err(Error::Instance(format!("cocycle relation fails at triple {i}")));
    }
    Ok(sigma)
}

/// `α` from `σ̂(g,g′)σ̂(gg′,g″) = aut_g(σ̂(g′,g″)) σ̂(g,g′g″) α(g,g′,g″)`.
pub fn obstruction_class(inst: &ExtensionInstance, lift: &[usize]) -> Result<GroupCochain> {
    let sigma = inst.sigma()?;
    let k = inst.g.order();
    if lift.len() != k * k {
        return Err(Error::Instance("lift has the wrong size".into()));
    }
    for g in 0..k {
        for h in 0..k {
            if inst.nhat_proj[lift[g * k + h]] != sigma[g * k + h] {
                return Err(Error::LiftInconsistent(g, h, "lift does not project to sigma".into()));
            }
        }
    }
    let nh = &inst.nhat;
    let a_index: BTreeMap<usize, usize> = inst.a_incl.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut alpha = GroupCochain::zero(3, k, &inst.a_orders);
    for t in tuples(k, 3) {
        let (a, b, c) = (t[0], t[1], t[2]);
        let lhs = nh.mul(lift[a * k + b], lift[inst.g.mul(a, b) * k + c]);
        let rhs = nh.mul(inst.aut[a][lift[b * k + c]], lift[a * k + inst.g.mul(b, c)]);
        let x = nh.mul(nh.inv(rhs), lhs);
        let i = *a_index.get(&x).ok_or_else(|| {
            Error::Instance(format!("alpha{t:?} does not lie in a; the automorphism data is inconsistent"))
        })?;
        let idx = alpha.index(&t);
        alpha.values[idx] = digits(i, &inst.a_orders);
    }
    Ok(alpha)
}

/// Number of quadruples where `δα ≠ 0`.
pub fn pentagon_violations(g: &FiniteGroup, alpha: &GroupCochain) -> usize {
    coboundary(g, alpha).values.iter().filter(|v| v.iter().any(|&x| x != 0)).count()
}

// ---------------------------------------------------------------------------
// Bar resolution over Z/n

/// Rows: nondegenerate `(p+1)`-tuples; columns: nondegenerate `p`-tuples.
fn bar_matrix(g: &FiniteGroup, p: usize) -> Vec<Vec<i64>> {
    let k = g.order();
    let nd = |q: usize| -> Vec<Vec<usize>> { tuples(k - 1, q).map(|t| t.iter().map(|x| x + 1).collect()).collect() };
    let cols = nd(p);
    let col_index: BTreeMap<Vec<usize>, usize> = cols.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    nd(p + 1)
        .into_iter()
        .map(|t| {
            let mut row = vec![0i64; cols.len()];
            let mut add = |s: Vec<usize>, sign: i64| {
                if let Some(&j) = col_index.get(&s) {
                    row[j] += sign;
                }
            };
            add(t[1..].to_vec(), 1);
            for i in 0..p {
                let mut s = t.clone();
                s[i] = g.mul(t[i], t[i + 1]);
                s.remove(i + 1);
                add(s, if i % 2 == 0 { -1 } else { 1 });
            }
            add(t[..p].to_vec(), if p.is_multiple_of(2) { -1 } else { 1 });
            row
        })
        .collect()
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b % a == 0 {
        return (a, 1, 0);
    }
    let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, b, 1i64, 0i64, 0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

/// Diagonal entries of a matrix equivalent to `m` over `Z/n` under
/// unimodular row and column operations.
fn diagonalize_mod(mut m: Vec<Vec<i64>>, n: i64) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for r in &mut m {
        for x in r.iter_mut() {
            *x = x.rem_euclid(n);
        }
    }
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        'find: for (i, row) in m.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => gcd(x, n) < gcd(m[bi][bj], n),
                    };
                    if better {
                        best = Some((i, j));
                        if gcd(x, n) == 1 {
                            break 'find;
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for r in &mut m {
            r.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let b = m[i][t];
                if b == 0 {
                    continue;
                }
                let a = m[t][t];
                let (g, x, y) = ext_gcd(a, b);
                let (ag, bg) = (a / g, b / g);
                for j in t..cols {
                    let (u, v) = (m[t][j], m[i][j]);
                    m[t][j] = (x * u + y * v).rem_euclid(n);
                    m[i][j] = (-bg * u + ag * v).rem_euclid(n);
                }
            }
            for j in t + 1..cols {
                let b = m[t][j];
                if b == 0 {
                    continue;
                }
                let a = m[t][t];
                let (g, x, y) = ext_gcd(a, b);
                let (ag, bg) = (a / g, b / g);
                for row in m.iter_mut().skip(t) {
                    let (u, v) = (row[t], row[j]);
                    row[t] = (x * u + y * v).rem_euclid(n);
                    row[j] = (-bg * u + ag * v).rem_euclid(n);
                }
            }
            for row in m.iter().skip(t + 1) {
                if row[t] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        diag.push(m[t][t]);
        t += 1;
    }
    diag
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `|im|` of the map `(Z/n)^cols → (Z/n)^rows` given by `m`.
fn image_order(m: Vec<Vec<i64>>, n: i64) -> u128 {
    diagonalize_mod(m, n).into_iter().map(|d| (n / gcd(d, n)) as u128).product()
}

fn transpose_append(m: &[Vec<i64>], extra: &[i64]) -> Vec<Vec<i64>> {
    m.iter().zip(extra).map(|(r, &e)| {
        let mut r = r.clone();
        r.push(e);
        r
    }).collect()
}

/// Order of `H³(G, a)` from the normalized bar complex, with trivial action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H3Summary {
    pub group: String,
    pub a_orders: Vec<u64>,
    pub cochain_ranks: [usize; 3],
    pub cocycles: u128,
    pub coboundaries: u128,
    pub order: u128,
    pub composite_vanishes: bool,
}

pub const MAX_BAR_ORDER: usize = 8;

pub fn h3_bar_resolution(g: &FiniteGroup, a_orders: &[u64]) -> Result<H3Summary> {
    let a_size: u64 = a_orders.iter().product();
    if g.order() > MAX_BAR_ORDER || a_size as usize > MAX_BAR_ORDER {
        return Err(Error::DimensionBound(format!(
            "|G| = {}, |a| = {a_size}; both must be at most {MAX_BAR_ORDER}",
            g.order()
        )));
    }
    let d2 = bar_matrix(g, 2);
    let d3 = bar_matrix(g, 3);
    let k = g.order() - 1;
    let ranks = [k * k, k * k * k, k.pow(4)];
    let composite_vanishes = d3.iter().all(|row| {
        (0..ranks[0]).all(|j| row.iter().enumerate().map(|(i, &x)| x * d2[i][j]).sum::<i64>() == 0)
    });
    let (mut cocycles, mut coboundaries) = (1u128, 1u128);
    for &n in a_orders {
        let n = n as i64;
        let im3 = image_order(d3.clone(), n);
        cocycles *= (n as u128).pow(ranks[1] as u32) / im3;
        coboundaries *= image_order(d2.clone(), n);
    }
    Ok(H3Summary {
        group: g.name.clone(),
        a_orders: a_orders.to_vec(),
        cochain_ranks: ranks,
        cocycles,
        coboundaries,
        order: cocycles / coboundaries,
        composite_vanishes,
    })
}

/// Whether a normalized 3-cocycle is `δ` of a normalized 2-cochain.
pub fn is_coboundary(g: &FiniteGroup, alpha: &GroupCochain) -> bool {
    let d2 = bar_matrix(g, 2);
    let k = g.order();
    let rows: Vec<Vec<usize>> = tuples(k - 1, 3).map(|t| t.iter().map(|x| x + 1).collect()).collect();
    alpha.a_orders.iter().enumerate().all(|(c, &n)| {
        let rhs: Vec<i64> = rows.iter().map(|t| alpha.get(t)[c] as i64).collect();
        image_order(d2.clone(), n as i64) == image_order(transpose_append(&d2, &rhs), n as i64)
    })
}

// ---------------------------------------------------------------------------
// Built-in instances

fn identity_map(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// `Z/2 → Z/4 → Z/2` with `N̂ = Z/4 ⊃ a = Z/2`.
pub fn instance_z4() -> ExtensionInstance {
    ExtensionInstance {
        name: "z4".into(),
        n: FiniteGroup::cyclic(2),
        f: FiniteGroup::cyclic(4),
        g: FiniteGroup::cyclic(2),
        incl: vec![0, 2],
        proj: vec![0, 1, 0, 1],
        a_orders: vec![2],
        nhat: FiniteGroup::cyclic(4),
        a_incl: vec![0, 2],
        nhat_proj: vec![0, 1, 0, 1],
        section: vec![0, 1],
        aut: vec![identity_map(4); 2],
    }
}

/// The `Z/4` instance with `N̂ = N × a` split.
pub fn instance_trivial() -> ExtensionInstance {
    let nhat = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
    ExtensionInstance {
        name: "z4-split".into(),
        nhat,
        a_incl: vec![0, 1],
        nhat_proj: vec![0, 0, 1, 1],
        aut: vec![identity_map(4); 2],
        ..instance_z4()
    }
}

/// `A₃ → S₃ → Z/2` with `N̂ = Z/6 ⊃ a = Z/2`; the transposition acts by
/// inversion.
pub fn instance_s3() -> ExtensionInstance {
    let f = FiniteGroup::s3();
    ExtensionInstance {
        name: "s3".into(),
        n: FiniteGroup::cyclic(3),
        incl: vec![0, 1, 2],
        proj: vec![0, 0, 0, 1, 1, 1],
        g: FiniteGroup::cyclic(2),
        f,
        a_orders: vec![2],
        nhat: FiniteGroup::cyclic(6),
        a_incl: vec![0, 3],
        nhat_proj: (0..6).map(|x| x % 3).collect(),
        section: vec![0, 3],
        aut: vec![identity_map(6), (0..6).map(|x| (6 - x) % 6).collect()],
    }
}

/// `⟨i⟩ → Q₈ → Z/2` with `N̂ = Z/8 ⊃ a = Z/2`, `s(1) = j`, and conjugation
/// by `j` lifted as `x ↦ −x`. The obstruction class is nontrivial.
pub fn instance_q8() -> ExtensionInstance {
    let f = FiniteGroup::q8();
    // i^k for k = 0..3 is 1, i, -1, -i
    let incl = vec![0, 2, 1, 3];
    let proj = (0..8).map(|e| usize::from(e / 2 >= 2)).collect();
    ExtensionInstance {
        name: "q8".into(),
        n: FiniteGroup::cyclic(4),
        f,
        g: FiniteGroup::cyclic(2),
        incl,
        proj,
        a_orders: vec![2],
        nhat: FiniteGroup::cyclic(8),
        a_incl: vec![0, 4],
        nhat_proj: (0..8).map(|x| x % 4).collect(),
        section: vec![0, 4],
        aut: vec![identity_map(8), (0..8).map(|x| (8 - x) % 8).collect()],
    }
}

pub fn builtin_instances() -> Vec<ExtensionInstance> {
    vec![instance_trivial(), instance_z4(), instance_s3(), instance_q8()]
}

/// Reads a JSON list of instances and validates each.
pub fn parse_instances(text: &str) -> Result<Vec<ExtensionInstance>> {
    let mut v: Vec<ExtensionInstance> = serde_json::from_str(text)?;
    for inst in &mut v {
        inst.validate()?;
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// Toy gauge groupoid

pub type M2c = Matrix2<Complex64>;

/// Connections are 2×2 hermitian matrices `A` with real coordinates
/// `(A₁₁, A₂₂, Re A₁₂, Im A₁₂)`; the gauge group is the diagonal torus of
/// `U(2)`, elements carried by their angles `θ ∈ R²` so that the group law
/// is exact addition. `A^g = g⁻¹Ag`; the conjugator is
/// `T_A = exp(diag(L A))` for a fixed complex-linear `L: R⁴ → C²`, unitary
/// exactly when `L` is imaginary on the sampled connections. The central
/// extension is twisted by `β(θ,θ′) = exp(iκ(θ₁θ′₂ − θ₂θ′₁))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToyGroupoid {
    pub l: [[(f64, f64); 4]; 2],
    pub kappa: f64,
}

const UNITARY_TOL: f64 = 1e-12;

fn conn_coords(a: &M2c) -> [f64; 4] {
    [a[(0, 0)].re, a[(1, 1)].re, a[(0, 1)].re, a[(0, 1)].im]
}

pub fn torus_matrix(theta: [f64; 2]) -> M2c {
    M2c::new(
        Complex64::from_polar(1.0, theta[0]),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, theta[1]),
    )
}

/// Toy phase function `ψ(A, g)`.
pub type ToyPhase<'a> = &'a dyn Fn(&M2c, [f64; 2]) -> Complex64;

impl ToyGroupoid {
    pub fn act(&self, a: &M2c, g: [f64; 2]) -> M2c {
        let u = torus_matrix(g);
        u.adjoint() * a * u
    }

    /// `L A`, rejecting a non-unitary `T_A`.
    fn t_angles(&self, a: &M2c) -> Result<[f64; 2]> {
        let x = conn_coords(a);
        let mut out = [0.0; 2];
        for (k, row) in self.l.iter().enumerate() {
            let z: Complex64 = row.iter().zip(x).map(|(&(re, im), c)| Complex64::new(re, im) * c).sum();
            if z.re.abs() > UNITARY_TOL {
                return Err(Error::Precondition(format!(
                    "T_A is not unitary: |exp(L A)_{k}| = {}",
                    z.re.exp()
                )));
            }
            out[k] = z.im;
        }
        Ok(out)
    }

    pub fn t_matrix(&self, a: &M2c) -> Result<M2c> {
        Ok(torus_matrix(self.t_angles(a)?))
    }

    /// Angles of `ω(A;g) = T_A g T_{A^g}⁻¹`.
    pub fn omega(&self, a: &M2c, g: [f64; 2]) -> Result<[f64; 2]> {
        let t0 = self.t_angles(a)?;
        let t1 = self.t_angles(&self.act(a, g))?;
        Ok([t0[0] + g[0] - t1[0], t0[1] + g[1] - t1[1]])
    }

    pub fn beta(&self, x: [f64; 2], y: [f64; 2]) -> Complex64 {
        Complex64::from_polar(1.0, self.kappa * (x[0] * y[1] - x[1] * y[0]))
    }

    /// `Φ(A;g,g′)` with `ω̂(A;gg′) = Φ ω̂(A;g) ω̂(A^g;g′)` in the β-twisted
    /// extension, lifts `ω̂(A;g) = (ω(A;g), ψ(A,g))`.
    pub fn phi(&self, a: &M2c, g: [f64; 2], gp: [f64; 2], psi: ToyPhase) -> Result<Complex64> {
        let ag = self.act(a, g);
        let ggp = [g[0] + gp[0], g[1] + gp[1]];
        let w1 = self.omega(a, g)?;
        let w2 = self.omega(&ag, gp)?;
        Ok(psi(a, ggp) / (psi(a, g) * psi(&ag, gp) * self.beta(w1, w2)))
    }

    /// `c(A;X,Y) = 2∂_t∂_s Φ(A;e^{tX},e^{sY})|₀` for `ψ ≡ 1`:
    /// `−2iκ (u_X ∧ u_Y)` with `u_X = X − L[A, X̂]`, `X̂ = i diag(X)`.
    pub fn c_closed_form(&self, a: &M2c, x: [f64; 2], y: [f64; 2]) -> Result<Complex64> {
        let u = |v: [f64; 2]| -> Result<[f64; 2]> {
            let xh = torus_generator(v);
            let t = self.t_angles(&(a * xh - xh * a))?;
            Ok([v[0] - t[0], v[1] - t[1]])
        };
        let (ux, uy) = (u(x)?, u(y)?);
        Ok(Complex64::new(0.0, -2.0 * self.kappa) * (ux[0] * uy[1] - ux[1] * uy[0]))
    }
}

fn torus_generator(v: [f64; 2]) -> M2c {
    M2c::new(
        Complex64::new(0.0, v[0]),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, v[1]),
    )
}

/// One toy sample: a connection, three gauge elements, two Lie directions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToySample {
    pub a: M2c,
    pub g: [[f64; 2]; 3],
    pub x: [f64; 2],
    pub y: [f64; 2],
}

pub fn random_toy_sample<R: rand::Rng + ?Sized>(rng: &mut R) -> ToySample {
    let mut r = || rng.random_range(-1.0..1.0);
    let off = Complex64::new(r(), r());
    let a = M2c::new(Complex64::new(r(), 0.0), off, off.conj(), Complex64::new(r(), 0.0));
    let g = [[3.0 * r(), 3.0 * r()], [3.0 * r(), 3.0 * r()], [3.0 * r(), 3.0 * r()]];
    ToySample {
        a,
        g,
        x: [r(), r()],
        y: [r(), r()],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ToyReport {
    pub samples: usize,
    /// `max |(A^g)^{g′} − A^{gg′}|`.
    pub action_defect: f64,
    /// `max |ω(A;gg′) − ω(A;g)ω(A^g;g′)|` as matrices.
    pub one_cocycle_defect: f64,
    /// `max |Φ(A;g,g′)Φ(A;gg′,g″) − Φ(A;g,g′g″)Φ(A^g;g′,g″)|`.
    pub two_cocycle_defect: f64,
    /// Same identity for the second phase choice.
    pub two_cocycle_defect_regauged: f64,
    /// `max |Φ′ − Φ·δχ|` with `ψ′ = ψχ`.
    pub coboundary_defect: f64,
    /// `max |2∂_t∂_sΦ − c_closed|` by central differences.
    pub derivative_defect: f64,
}

pub const TOY_FD_STEP: f64 = 1e-3;

/// Runs the `ω`/`Φ` chain on the samples with phase choices `ψ` and `ψ′`.
pub fn toy_omega_chain(t: &ToyGroupoid, samples: &[ToySample], psi: ToyPhase, psi2: ToyPhase) -> Result<ToyReport> {
    let one = |_: &M2c, _: [f64; 2]| Complex64::new(1.0, 0.0);
    let add = |a: [f64; 2], b: [f64; 2]| [a[0] + b[0], a[1] + b[1]];
    let mut r = ToyReport {
        samples: samples.len(),
        action_defect: 0.0,
        one_cocycle_defect: 0.0,
        two_cocycle_defect: 0.0,
        two_cocycle_defect_regauged: 0.0,
        coboundary_defect: 0.0,
        derivative_defect: 0.0,
    };
    for s in samples {
        let [g, gp, gpp] = s.g;
        let a = &s.a;
        let ag = t.act(a, g);
        let agg = t.act(a, add(g, gp));
        r.action_defect = r.action_defect.max((t.act(&ag, gp) - agg).norm());

        let lhs = torus_matrix(t.omega(a, add(g, gp))?);
        let rhs = torus_matrix(t.omega(a, g)?) * torus_matrix(t.omega(&ag, gp)?);
        let tm = t.t_matrix(a)? * torus_matrix(g) * t.t_matrix(&ag)?.adjoint();
        r.one_cocycle_defect = r.one_cocycle_defect.max((lhs - rhs).norm()).max((tm - torus_matrix(t.omega(a, g)?)).norm());

        for (p, slot) in [(psi, 0), (psi2, 1)] {
            let l = t.phi(a, g, gp, p)? * t.phi(a, add(g, gp), gpp, p)?;
            let rr = t.phi(a, g, add(gp, gpp), p)? * t.phi(&ag, gp, gpp, p)?;
            let d = (l - rr).norm();
            if slot == 0 {
                r.two_cocycle_defect = r.two_cocycle_defect.max(d);
            } else {
                r.two_cocycle_defect_regauged = r.two_cocycle_defect_regauged.max(d);
            }
        }
        let chi = |b: &M2c, h: [f64; 2]| psi2(b, h) / psi(b, h);
        let predicted = t.phi(a, g, gp, psi)? * chi(a, add(g, gp)) / (chi(a, g) * chi(&ag, gp));
        r.coboundary_defect = r.coboundary_defect.max((t.phi(a, g, gp, psi2)? - predicted).norm());

        let h = TOY_FD_STEP;
        let f = |ts: f64, ss: f64| t.phi(a, [ts * s.x[0], ts * s.x[1]], [ss * s.y[0], ss * s.y[1]], &one);
        let fd = (f(h, h)? - f(h, -h)? - f(-h, h)? + f(-h, -h)?) / (4.0 * h * h);
        let closed = t.c_closed_form(a, s.x, s.y)?;
        r.derivative_defect = r.derivative_defect.max((2.0 * fd - closed).norm());
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Čech lifting

/// Projective transition matrices `g_{αβ}` for `α < β` on an index set
/// `0..size`; `g_{βα} = g_{αβ}⁻¹` and `g_{αα} = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CechData {
    pub size: usize,
    pub transitions: BTreeMap<(usize, usize), DMatrix<Complex64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CechResult {
    /// `f_{αβγ}` indexed by `(α·k + β)·k + γ`.
    pub f: Vec<Complex64>,
    /// Max over all quadruples of `|f_{αβγ} f_{αβδ}⁻¹ f_{αγδ} f_{βγδ}⁻¹ − 1|`.
    pub tetrahedron_defect: f64,
}

impl CechResult {
    pub fn get(&self, k: usize, a: usize, b: usize, c: usize) -> Complex64 {
        self.f[(a * k + b) * k + c]
    }
}

const SCALAR_TOL: f64 = 1e-10;

fn gauge_first_positive(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    // column-major iteration; take the first entry in row-major order
    let mut first = None;
    'rows: for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m[(i, j)].norm() > 1e-12 * scale {
                first = Some(m[(i, j)]);
                break 'rows;
            }
        }
    }
    match first {
        Some(z) => m * (z.conj() / z.norm()),
        None => m.clone(),
    }
}

/// `ĝ_{αβ}ĝ_{βγ}ĝ_{γα} = f_{αβγ}·1` with the first nonzero entry (row-major)
/// of each `ĝ_{αβ}`, `α < β`, made positive real, and the gauge phases
/// `μ_{αβ}` (for `α < β`) applied on top.
pub fn cech_lift_with_gauge(data: &CechData, mu: &dyn Fn(usize, usize) -> Complex64) -> Result<CechResult> {
    let k = data.size;
    let dim = data
        .transitions
        .values()
        .next()
        .map_or(1, |m| m.nrows());
    let mut lifts: BTreeMap<(usize, usize), DMatrix<Complex64>> = BTreeMap::new();
    for a in 0..k {
        lifts.insert((a, a), DMatrix::identity(dim, dim));
        for b in a + 1..k {
            let g = data.transitions.get(&(a, b)).ok_or_else(|| {
                Error::Precondition(format!("missing transition ({a}, {b})"))
            })?;
            let gh = gauge_first_positive(g) * mu(a, b);
            let inv = gh.clone().try_inverse().ok_or_else(|| {
                Error::Precondition(format!("transition ({a}, {b}) is singular"))
            })?;
            lifts.insert((a, b), gh);
            lifts.insert((b, a), inv);
        }
    }
    let mut f = vec![Complex64::new(1.0, 0.0); k * k * k];
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let p = &lifts[&(a, b)] * &lifts[&(b, c)] * &lifts[&(c, a)];
                let z = p.trace() / dim as f64;
                let dev = (&p - DMatrix::identity(dim, dim) * z).norm();
                if dev > SCALAR_TOL * z.norm().max(1.0) {
                    return Err(Error::NotScalar(a, b, c, dev));
                }
                f[(a * k + b) * k + c] = z;
            }
        }
    }
    let mut worst: f64 = 0.0;
    let at = |a: usize, b: usize, c: usize| f[(a * k + b) * k + c];
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                for d in 0..k {
                    let v = at(a, b, c) / at(a, b, d) * at(a, c, d) / at(b, c, d);
                    worst = worst.max((v - 1.0).norm());
                }
            }
        }
    }
    Ok(CechResult {
        f,
        tetrahedron_defect: worst,
    })
}

pub fn cech_lift(data: &CechData) -> Result<CechResult> {
    cech_lift_with_gauge(data, &|_, _| Complex64::new(1.0, 0.0))
}

/// `g_{αβ} = e^{iφ_{αβ}} u_α u_β⁻¹` for random unitaries `u_α` and phases.
pub fn random_cech_data<R: rand::Rng + ?Sized>(size: usize, dim: usize, rng: &mut R) -> CechData {
    let us: Vec<DMatrix<Complex64>> = (0..size).map(|_| crate::fock::random_unitary(dim, 1.0, rng)).collect();
    let mut transitions = BTreeMap::new();
    for a in 0..size {
        for b in a + 1..size {
            let ph = Complex64::from_polar(1.0, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI));
            transitions.insert((a, b), &us[a] * us[b].adjoint() * ph);
        }
    }
    CechData { size, transitions }
}
