//! SU(2)-valued maps on charts, evaluated together with their left
//! Maurer–Cartan form.

use std::fmt;
use std::sync::Arc;

use super::quadrature::QuadDomain;
use super::su2::{alg, alg_coords, left_jacobian, su2_exp, unitarity_defect, M2, V3};

/// Value and left logarithmic partials `g⁻¹∂_j g = i l_j·σ` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub g: M2,
    pub l: [V3; 3],
}

/// `Ad_g w`: `g (i w·σ) g⁻¹ = i (Ad_g w)·σ`.
pub fn ad(g: &M2, w: &V3) -> V3 {
    alg_coords(&(g * alg(w) * g.adjoint()))
}

impl Jet {
    pub fn constant(g: M2) -> Self {
        Self {
            g,
            l: [V3::zeros(); 3],
        }
    }

    /// Jet of `exp(i v·σ)` given `v` and its partials.
    pub fn exp(v: &V3, dv: &[V3; 3]) -> Self {
        let j = left_jacobian(v);
        Self {
            g: su2_exp(v),
            l: [j * dv[0], j * dv[1], j * dv[2]],
        }
    }

    /// `(fg)⁻¹∂(fg) = Ad_{g⁻¹}(f⁻¹∂f) + g⁻¹∂g`.
    pub fn mul(&self, other: &Jet) -> Jet {
        let gi = other.g.adjoint();
        Jet {
            g: self.g * other.g,
            l: [
                ad(&gi, &self.l[0]) + other.l[0],
                ad(&gi, &self.l[1]) + other.l[1],
                ad(&gi, &self.l[2]) + other.l[2],
            ],
        }
    }

    /// `(f⁻¹)⁻¹∂(f⁻¹) = −Ad_f(f⁻¹∂f)`.
    pub fn inv(&self) -> Jet {
        Jet {
            g: self.g.adjoint(),
            l: [
                -ad(&self.g, &self.l[0]),
                -ad(&self.g, &self.l[1]),
                -ad(&self.g, &self.l[2]),
            ],
        }
    }

    /// Right partial `∂_j g g⁻¹` in coordinates.
    pub fn right(&self, j: usize) -> V3 {
        ad(&self.g, &self.l[j])
    }
}

/// Chart on which a map is defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapDomain {
    /// `t ∈ [0, 2π]`.
    Interval,
    /// Polar `(r, θ)` on the unit disk.
    Disk,
    /// Spherical `(r, ϑ, φ)` on the unit ball.
    Ball,
    /// `(s, r, θ)` on `[0, 1] × D`.
    Cone,
}

impl MapDomain {
    pub fn dim(self) -> usize {
        match self {
            MapDomain::Interval => 1,
            MapDomain::Disk => 2,
            MapDomain::Ball | MapDomain::Cone => 3,
        }
    }

    pub fn quad_domain(self) -> QuadDomain {
        match self {
            MapDomain::Interval => QuadDomain::interval(),
            MapDomain::Disk => QuadDomain::disk(),
            MapDomain::Ball => QuadDomain::ball(),
            MapDomain::Cone => QuadDomain::cone(),
        }
    }
}

type JetFn = dyn Fn(&[f64]) -> Jet + Send + Sync;

/// A smooth map from a chart into SU(2) with analytic derivatives.
#[derive(Clone)]
pub struct GroupMap {
    domain: MapDomain,
    label: String,
    f: Arc<JetFn>,
}

impl fmt::Debug for GroupMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupMap({:?}, {})", self.domain, self.label)
    }
}

impl GroupMap {
    pub fn new(
        domain: MapDomain,
        label: impl Into<String>,
        f: impl Fn(&[f64]) -> Jet + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn constant(domain: MapDomain, g: M2) -> Self {
        Self::new(domain, "const", move |_| Jet::constant(g))
    }

    pub fn identity(domain: MapDomain) -> Self {
        Self::constant(domain, M2::identity())
    }

    /// `x ↦ exp(i ξ(x)·σ)` where `gen` returns `ξ` and its partials.
    pub fn exp_of(
        domain: MapDomain,
        label: impl Into<String>,
        gen: impl Fn(&[f64]) -> (V3, [V3; 3]) + Send + Sync + 'static,
    ) -> Self {
        Self::new(domain, label, move |x| {
            let (v, dv) = gen(x);
            Jet::exp(&v, &dv)
        })
    }

    pub fn domain(&self) -> MapDomain {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn jet(&self, x: &[f64]) -> Jet {
        (self.f)(x)
    }

    pub fn value(&self, x: &[f64]) -> M2 {
        self.jet(x).g
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GroupMap) -> GroupMap {
        assert_eq!(self.domain, other.domain, "product of maps on different charts");
        let (a, b) = (self.f.clone(), other.f.clone());
        GroupMap::new(
            self.domain,
            format!("({})({})", self.label, other.label),
            move |x| a(x).mul(&b(x)),
        )
    }

    /// Pointwise inverse.
    pub fn inv(&self) -> GroupMap {
        let a = self.f.clone();
        GroupMap::new(self.domain, format!("({})^-1", self.label), move |x| a(x).inv())
    }

    /// `x ↦ c(x) f(x) c(x)⁻¹`.
    pub fn conj_by(&self, c: &GroupMap) -> GroupMap {
        c.mul(self).mul(&c.inv())
    }

    /// Pulls back along a chart change `y ↦ (x(y), ∂x/∂y)` into `domain`.
    pub fn pullback(
        &self,
        domain: MapDomain,
        chart: impl Fn(&[f64]) -> (Vec<f64>, Vec<[f64; 3]>) + Send + Sync + 'static,
    ) -> GroupMap {
        let a = self.f.clone();
        let n_src = self.domain.dim();
        GroupMap::new(domain, format!("{}∘chart", self.label), move |y| {
            let (x, dx) = chart(y);
            let j = a(&x);
            let mut l = [V3::zeros(); 3];
            for (k, lk) in l.iter_mut().enumerate() {
                for (i, row) in dx.iter().enumerate().take(n_src) {
                    *lk += j.l[i] * row[k];
                }
            }
            Jet { g: j.g, l }
        })
    }

    /// Largest unitarity defect over the given points.
    pub fn unitarity_defect(&self, points: &[Vec<f64>]) -> f64 {
        points
            .iter()
            .map(|p| unitarity_defect(&self.value(p)))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::su2::su2_exp;
    use num_complex::Complex64;

    fn sample_map() -> GroupMap {
        GroupMap::exp_of(MapDomain::Disk, "f", |x| {
            let (r, t) = (x[0], x[1]);
            (
                V3::new(0.4 * r * t.cos(), 0.3 * r * r, 0.2 * t.sin()),
                [
                    V3::new(0.4 * t.cos(), 0.6 * r, 0.0),
                    V3::new(-0.4 * r * t.sin(), 0.0, 0.2 * t.cos()),
                    V3::zeros(),
                ],
            )
        })
    }

    fn other_map() -> GroupMap {
        GroupMap::exp_of(MapDomain::Disk, "g", |x| {
            let (r, t) = (x[0], x[1]);
            (
                V3::new(0.1 * r, -0.5 * r * (2.0 * t).sin(), 0.3),
                [
                    V3::new(0.1, -0.5 * (2.0 * t).sin(), 0.0),
                    V3::new(0.0, -r * (2.0 * t).cos(), 0.0),
                    V3::zeros(),
                ],
            )
        })
    }

    fn fd_left(m: &GroupMap, x: &[f64], j: usize) -> V3 {
        let h = 1e-6;
        let mut xp = x.to_vec();
        xp[j] += h;
        let mut xm = x.to_vec();
        xm[j] -= h;
        let dg = (m.value(&xp) - m.value(&xm)) / Complex64::new(2.0 * h, 0.0);
        alg_coords(&(m.value(x).adjoint() * dg))
    }

    #[test]
    fn composite_jets_match_difference_quotients() {
        let f = sample_map();
        let g = other_map();
        for m in [f.mul(&g), f.inv(), g.conj_by(&f), f.mul(&g.inv()).mul(&f)] {
            for x in [[0.3, 1.0], [0.9, 5.5], [0.01, 0.2]] {
                let jet = m.jet(&x);
                for j in 0..2 {
                    assert!((jet.l[j] - fd_left(&m, &x, j)).norm() < 1e-7);
                }
                assert!(unitarity_defect(&jet.g) < 1e-12);
            }
        }
    }

    #[test]
    fn constant_map_has_zero_form() {
        let m = GroupMap::constant(MapDomain::Ball, su2_exp(&V3::new(0.1, 0.2, 0.3)));
        assert_eq!(m.jet(&[0.5, 0.5, 0.5]).l, [V3::zeros(); 3]);
    }
}
