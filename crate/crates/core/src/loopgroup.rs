//! Central extension of the loop group realized on disk maps, and the
//! 3-cocycle of the path group obtained from it.
//!
//! Points of the extension are pairs `(φ, λ)` with `φ: D → SU(2)` filling a
//! loop and `λ ∈ U(1)`. Products carry the phase `e^{γ(φ,φ′)}`, and pairs
//! with equal boundary loops are identified through `γ + W`.
//!
//! All integrals are over charts in polar (disk) or spherical (ball)
//! coordinates. Maps are `GroupMap`s, so derivatives are analytic and only
//! the final integration is approximated.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::su2::{left_jacobian_inv, su2_angle, su2_exp, su2_log_principal, M2, V3};
use crate::field::{quad_integrate, GroupMap, Jet, MapDomain, QuadDomain, QuadResult};

/// Largest admissible `|log g|` for chart elements.
pub const CHART_RADIUS: f64 = 0.5;
/// Default nodes per axis on the disk.
pub const DISK_RESOLUTION: usize = 32;
/// Default nodes per axis on the ball.
pub const BALL_RESOLUTION: usize = 24;

/// Largest rotation angle accepted when taking logarithms of fillings.
const LOG_LIMIT: f64 = 1.5;
const BOUNDARY_TOL: f64 = 1e-10;
const PHASE_TOL: f64 = 1e-12;

fn det(a: &V3, b: &V3, c: &V3) -> f64 {
    a.dot(&b.cross(c))
}

fn expect_domain(m: &GroupMap, d: MapDomain, what: &str) -> Result<()> {
    if m.domain() != d {
        return Err(Error::DomainMismatch(format!(
            "{what} is defined on {:?}, expected {d:?}",
            m.domain()
        )));
    }
    Ok(())
}

/// Unit disk as integrated here: the polar rectangle `[0,1] × [0,2π]`.
pub fn disk_quad() -> QuadDomain {
    QuadDomain::disk()
}

/// `[0,1] × D` for cone fillings.
pub fn cone_quad() -> QuadDomain {
    let mut q = QuadDomain::cone();
    q.axes[2] = disk_quad().axes[1];
    q
}

/// `W = (1/12πi) ∫ tr(g⁻¹dg)³` over a 3-dimensional chart.
///
/// In coordinates `tr(g⁻¹dg)³ = 12 det(l₁,l₂,l₃) dx¹∧dx²∧dx³`.
pub fn wzw_ball(g: &GroupMap, n: usize) -> Result<QuadResult> {
    let domain = match g.domain() {
        MapDomain::Ball => QuadDomain::ball(),
        MapDomain::Cone => cone_quad(),
        d => {
            return Err(Error::DomainMismatch(format!(
                "WZW integral needs a 3-dimensional chart, got {d:?}"
            )))
        }
    };
    let scale = Complex64::new(0.0, -1.0 / PI);
    quad_integrate(
        |x| {
            let j = g.jet(x);
            scale * det(&j.l[0], &j.l[1], &j.l[2])
        },
        &domain,
        n,
    )
}

/// `γ(f,f′) = (1/4πi) ∫_D tr f⁻¹df ∧ df′f′⁻¹`.
pub fn gamma(f: &GroupMap, fp: &GroupMap, n: usize) -> Result<QuadResult> {
    expect_domain(f, MapDomain::Disk, "f")?;
    expect_domain(fp, MapDomain::Disk, "f'")?;
    // tr(iσ·a iσ·b) = −2a·b, so the prefactor is −2/(4πi) = i/2π.
    let scale = Complex64::new(0.0, 0.5 / PI);
    quad_integrate(
        |x| {
            let a = f.jet(x);
            let b = fp.jet(x);
            let (br, bt) = (b.right(0), b.right(1));
            scale * (a.l[0].dot(&bt) - a.l[1].dot(&br))
        },
        &disk_quad(),
        n,
    )
}

/// `(s, r, θ) ↦ exp(s log h(r, θ))`, the cone filling of a disk map that is
/// trivial on the boundary.
pub fn cone_filling(h: &GroupMap) -> Result<GroupMap> {
    expect_domain(h, MapDomain::Disk, "h")?;
    let h = h.clone();
    Ok(GroupMap::new(MapDomain::Cone, format!("cone({})", h.label()), move |x| {
        let j = h.jet(&x[1..]);
        let (eta, deta) = log_jet(&j);
        let s = x[0];
        Jet::exp(&(eta * s), &[eta, deta[0] * s, deta[1] * s])
    }))
}

/// `log g` together with its partials `∂_j log g = J⁻¹ l_j`.
fn log_jet(j: &Jet) -> (V3, [V3; 3]) {
    let eta = su2_log_principal(&j.g);
    let ji = left_jacobian_inv(&eta);
    (eta, [ji * j.l[0], ji * j.l[1], ji * j.l[2]])
}

/// Fails with the offending node if `m` leaves the logarithm chart on any
/// node used by a disk rule of resolution `n` or `n/2`.
fn check_log_chart(m: &GroupMap, n: usize) -> Result<()> {
    for k in [n, (n / 2).max(2)] {
        let axes: Vec<Vec<(f64, f64)>> = disk_quad().axes.iter().map(|a| a.nodes(k)).collect();
        for &(r, _) in &axes[0] {
            for &(t, _) in &axes[1] {
                let angle = su2_angle(&m.value(&[r, t]));
                if angle > LOG_LIMIT {
                    return Err(Error::NoLogarithm {
                        location: vec![r, t],
                        angle,
                    });
                }
            }
        }
    }
    Ok(())
}

fn boundary_defect(m: &GroupMap, target: impl Fn(f64) -> M2) -> f64 {
    (0..64)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / 64.0;
            (m.value(&[1.0, t]) - target(t)).norm()
        })
        .fold(0.0, f64::max)
}

/// `W(h)` for `h: D → SU(2)` with `h|∂D = e`, using the cone filling.
///
/// The cone is oriented by `dr∧ds∧dθ`, the orientation for which the
/// identification `(φ,λ) ≡ (φh, λ e^{γ(φ,h)+W(h)})` is transitive, i.e.
/// `W(h₁h₂) = W(h₁) + W(h₂) + γ(h₁,h₂)`.
///
/// Along the cone `l_s = η` and `l_{r,θ} = s J(sη) ∂η`, so the integrand is
/// `s² det J(sη) det(η, ∂_r η, ∂_θ η)` with `det J(v) = sinc²|v|`. The
/// `s`-integral is done in closed form, `∫₀¹ sin²(sa)/a² ds = (2a − sin 2a)/4a³`,
/// leaving a disk integral. [`wzw_ball`] of [`cone_filling`] (oriented by
/// `ds∧dr∧dθ`) gives the negative value with the `s` direction sampled.
pub fn wzw_of_disk_map(h: &GroupMap, n: usize) -> Result<QuadResult> {
    expect_domain(h, MapDomain::Disk, "h")?;
    let dev = boundary_defect(h, |_| M2::identity());
    if dev > BOUNDARY_TOL {
        return Err(Error::Precondition(format!(
            "h differs from e on the boundary by {dev:.3e}"
        )));
    }
    check_log_chart(h, n)?;
    let scale = Complex64::new(0.0, 1.0 / PI);
    quad_integrate(
        |x| {
            let (eta, d) = log_jet(&h.jet(x));
            scale * cone_weight(eta.norm()) * det(&eta, &d[0], &d[1])
        },
        &disk_quad(),
        n,
    )
}

/// `(2a − sin 2a)/(4a³)`.
fn cone_weight(a: f64) -> f64 {
    if a < 1e-3 {
        let a2 = a * a;
        1.0 / 3.0 - a2 / 15.0 + 2.0 * a2 * a2 / 315.0
    } else {
        (2.0 * a - (2.0 * a).sin()) / (4.0 * a * a * a)
    }
}

/// `γ(φ,h) + W(h)`: the phase relating `(φ, λ)` and `(φh, λ e^{…})`.
pub fn equivalence_phase(phi: &GroupMap, h: &GroupMap, n: usize) -> Result<Complex64> {
    let w = wzw_of_disk_map(h, n)?;
    Ok(gamma(phi, h, n)?.value + w.value)
}

/// A chart element `g` with its geodesic path `F(g)(t) = exp((t/2π) log g)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathChoice {
    g: M2,
    log: V3,
}

impl PathChoice {
    pub fn new(g: M2) -> Result<Self> {
        let log = su2_log_principal(&g);
        Self::check(log)?;
        Ok(Self { g, log })
    }

    /// `exp(i v·σ)`.
    pub fn from_log(v: V3) -> Result<Self> {
        Self::check(v)?;
        Ok(Self { g: su2_exp(&v), log: v })
    }

    pub fn identity() -> Self {
        Self {
            g: M2::identity(),
            log: V3::zeros(),
        }
    }

    fn check(v: V3) -> Result<()> {
        if v.norm() >= CHART_RADIUS {
            return Err(Error::Chart(format!(
                "|log g| = {:.4} is outside the chart radius {CHART_RADIUS}",
                v.norm()
            )));
        }
        Ok(())
    }

    pub fn element(&self) -> M2 {
        self.g
    }

    pub fn log(&self) -> V3 {
        self.log
    }

    /// `g h`, checked against the chart.
    pub fn mul(&self, other: &PathChoice) -> Result<PathChoice> {
        PathChoice::new(self.g * other.g)
    }

    /// `F(g)` on `[0, 2π]`.
    pub fn path(&self) -> GroupMap {
        let v = self.log;
        GroupMap::exp_of(MapDomain::Interval, "F", move |x| {
            let s = x[0] / (2.0 * PI);
            (v * s, [v / (2.0 * PI), V3::zeros(), V3::zeros()])
        })
    }

    /// Radial extension `(r, θ) ↦ exp(r (θ/2π) log g)` of the path.
    pub fn disk_extension(&self) -> GroupMap {
        let v = self.log;
        GroupMap::exp_of(MapDomain::Disk, "F~", move |x| {
            let (r, s) = (x[0], x[1] / (2.0 * PI));
            (v * (r * s), [v * s, v * (r / (2.0 * PI)), V3::zeros()])
        })
    }
}

/// A loop based at `e` together with a disk filling and a phase.
#[derive(Clone, Debug)]
pub struct LoopWithDisk {
    pub boundary: GroupMap,
    pub filling: GroupMap,
    pub phase: Complex64,
    pub resolution: usize,
}

impl LoopWithDisk {
    /// Checks the filling against the boundary loop and `|λ| = 1`.
    pub fn new(boundary: GroupMap, filling: GroupMap, phase: Complex64, resolution: usize) -> Result<Self> {
        expect_domain(&boundary, MapDomain::Interval, "boundary loop")?;
        expect_domain(&filling, MapDomain::Disk, "filling")?;
        let dev = boundary_defect(&filling, |t| boundary.value(&[t]));
        if dev > BOUNDARY_TOL {
            return Err(Error::Precondition(format!(
                "filling differs from the boundary loop by {dev:.3e}"
            )));
        }
        if (phase.norm() - 1.0).abs() > PHASE_TOL {
            return Err(Error::Precondition(format!("phase has modulus {}", phase.norm())));
        }
        Ok(Self {
            boundary,
            filling,
            phase,
            resolution,
        })
    }

    /// `(ℓ, λ)` with the radial-exponential filling of `ℓ`.
    pub fn radial(boundary: GroupMap, phase: Complex64, resolution: usize) -> Result<Self> {
        let filling = radial_filling(&boundary)?;
        Self::new(boundary, filling, phase, resolution)
    }

    /// The unit `(e, 1)`.
    pub fn unit(resolution: usize) -> Self {
        Self {
            boundary: GroupMap::identity(MapDomain::Interval),
            filling: GroupMap::identity(MapDomain::Disk),
            phase: Complex64::new(1.0, 0.0),
            resolution,
        }
    }

    /// Largest distance of the boundary loop from `e` over a fixed sample.
    pub fn max_distance_from_identity(&self) -> f64 {
        (0..=128)
            .map(|i| su2_angle(&self.boundary.value(&[2.0 * PI * i as f64 / 128.0])))
            .fold(0.0, f64::max)
    }

    /// `‖ℓ(2π) − ℓ(0)‖`.
    pub fn closure_defect(&self) -> f64 {
        (self.boundary.value(&[2.0 * PI]) - self.boundary.value(&[0.0])).norm()
    }
}

/// `φ(r, θ) = exp(r ξ(θ))` with `ξ = log ℓ`.
pub fn radial_filling(l: &GroupMap) -> Result<GroupMap> {
    expect_domain(l, MapDomain::Interval, "loop")?;
    for i in 0..=256 {
        let t = 2.0 * PI * i as f64 / 256.0;
        let angle = su2_angle(&l.value(&[t]));
        if angle > LOG_LIMIT {
            return Err(Error::NoLogarithm {
                location: vec![t],
                angle,
            });
        }
    }
    let l = l.clone();
    Ok(GroupMap::exp_of(MapDomain::Disk, format!("fill({})", l.label()), move |x| {
        let (r, t) = (x[0], x[1]);
        let (xi, dxi) = log_jet(&l.jet(&[t]));
        (xi * r, [xi, dxi[0] * r, V3::zeros()])
    }))
}

/// `[(f,λ)]·[(f′,λ′)] = [(ff′, λλ′ e^{γ(f,f′)})]`.
pub fn extension_product(p: &LoopWithDisk, q: &LoopWithDisk) -> Result<LoopWithDisk> {
    if p.resolution != q.resolution {
        return Err(Error::Precondition(format!(
            "quadrature grids differ: {} vs {}",
            p.resolution, q.resolution
        )));
    }
    let g = gamma(&p.filling, &q.filling, p.resolution)?;
    Ok(LoopWithDisk {
        boundary: p.boundary.mul(&q.boundary),
        filling: p.filling.mul(&q.filling),
        phase: p.phase * q.phase * g.value.exp(),
        resolution: p.resolution,
    })
}

/// `σ(g₁,g₂) = F(g₁)F(g₂)F(g₁g₂)⁻¹` with its radial filling and phase 1.
pub fn sigma_loop(g1: &PathChoice, g2: &PathChoice, resolution: usize) -> Result<LoopWithDisk> {
    let g12 = g1.mul(g2)?;
    let l = g1.path().mul(&g2.path()).mul(&g12.path().inv());
    LoopWithDisk::radial(l, Complex64::new(1.0, 0.0), resolution)
}

/// The lifted action of the path `F(g)` on the extension, realized as
/// conjugation by the disk extension `F̃` in the γ-twisted group of disk
/// maps: `(φ, λ) ↦ (F̃φF̃⁻¹, λ e^{κ})` with
/// `κ = γ(F̃,φ) + γ(F̃φ,F̃⁻¹) − γ(F̃,F̃⁻¹)`.
pub fn aut_action(g: &PathChoice, phi: &GroupMap, n: usize) -> Result<(GroupMap, Complex64)> {
    let ft = g.disk_extension();
    let fi = ft.inv();
    let conj = ft.mul(phi).mul(&fi);
    let kappa = gamma(&ft, phi, n)?.value + gamma(&ft.mul(phi), &fi, n)?.value - gamma(&ft, &fi, n)?.value;
    Ok((conj, kappa))
}

/// Exponent of α together with the summed quadrature error estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaValue {
    pub exponent: Complex64,
    pub value: Complex64,
    pub error: f64,
}

/// The 3-cocycle from local data.
///
/// With `σ̂(g,g′) = [(φ_{g,g′}, 1)]`, comparing `σ̂(g₁,g₂)σ̂(g₁g₂,g₃)` with
/// `Aut(g₁)[σ̂(g₂,g₃)]·σ̂(g₁,g₂g₃)` gives
/// `α = exp[γ(φ₁₂,φ₁₂,₃) − κ − γ(ψ,φ₁,₂₃) − γ(ψφ₁,₂₃,h) − W(h)]` where
/// `ψ = F̃₁φ₂₃F̃₁⁻¹` and `h = (ψφ₁,₂₃)⁻¹φ₁₂φ₁₂,₃` is trivial on `∂D`.
pub fn alpha3(g1: &PathChoice, g2: &PathChoice, g3: &PathChoice, n: usize) -> Result<AlphaValue> {
    let g12 = g1.mul(g2)?;
    let g23 = g2.mul(g3)?;
    g12.mul(g3)?;
    let phi12 = sigma_loop(g1, g2, n)?.filling;
    let phi12_3 = sigma_loop(&g12, g3, n)?.filling;
    let phi23 = sigma_loop(g2, g3, n)?.filling;
    let phi1_23 = sigma_loop(g1, &g23, n)?.filling;

    let (psi, kappa) = aut_action(g1, &phi23, n)?;
    let left = phi12.mul(&phi12_3);
    let right = psi.mul(&phi1_23);
    let h = right.inv().mul(&left);

    let a = gamma(&phi12, &phi12_3, n)?;
    let b = gamma(&psi, &phi1_23, n)?;
    let c = gamma(&right, &h, n)?;
    let w = wzw_of_disk_map(&h, n)?;
    let exponent = a.value - kappa - b.value - c.value - w.value;
    Ok(AlphaValue {
        exponent,
        value: exponent.exp(),
        error: a.error + b.error + c.error + w.error,
    })
}

/// `|α(g₂,g₃,g₄) α(g₁g₂,g₃,g₄)⁻¹ α(g₁,g₂g₃,g₄) α(g₁,g₂,g₃g₄)⁻¹ α(g₁,g₂,g₃) − 1|`.
pub fn pentagon_defect(g: [&PathChoice; 4], n: usize) -> Result<f64> {
    let [g1, g2, g3, g4] = g;
    let g12 = g1.mul(g2)?;
    let g23 = g2.mul(g3)?;
    let g34 = g3.mul(g4)?;
    let p = alpha3(g2, g3, g4, n)?.value / alpha3(&g12, g3, g4, n)?.value
        * alpha3(g1, &g23, g4, n)?.value
        / alpha3(g1, g2, &g34, n)?.value
        * alpha3(g1, g2, g3, n)?.value;
    Ok((p - 1.0).norm())
}

/// Degree-`k` map of the ball: `(r, ϑ, φ) ↦ exp(iπ k r n̂·σ)`, which sends
/// the boundary sphere to `(−1)^k`. For `k = 2` this is the pointwise square
/// of the degree-1 map.
pub fn degree_map(k: i32) -> GroupMap {
    let c = PI * k as f64;
    GroupMap::exp_of(MapDomain::Ball, format!("deg{k}"), move |x| {
        let (r, th, ph) = (x[0], x[1], x[2]);
        let n = V3::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos());
        let n_th = V3::new(th.cos() * ph.cos(), th.cos() * ph.sin(), -th.sin());
        let n_ph = V3::new(-th.sin() * ph.sin(), th.sin() * ph.cos(), 0.0);
        (n * (c * r), [n * c, n_th * (c * r), n_ph * (c * r)])
    })
}

/// `x ↦ exp(i a(x) σ₃)` on the disk, given `a` and its `(r, θ)` partials.
pub fn diagonal_disk_map(
    label: &str,
    a: impl Fn(f64, f64) -> (f64, f64, f64) + Send + Sync + 'static,
) -> GroupMap {
    GroupMap::exp_of(MapDomain::Disk, label, move |x| {
        let (v, dr, dt) = a(x[0], x[1]);
        (V3::new(0.0, 0.0, v), [V3::new(0.0, 0.0, dr), V3::new(0.0, 0.0, dt), V3::zeros()])
    })
}

/// Near-identity chart element with `|log g| ≤ radius`, uniform in the ball.
pub fn random_chart_element<R: rand::Rng + ?Sized>(rng: &mut R, radius: f64) -> PathChoice {
    loop {
        let v = V3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if v.norm() <= 1.0 {
            if let Ok(p) = PathChoice::from_log(v * radius) {
                return p;
            }
        }
    }
}

/// Diagonal-torus element `exp(i a σ₃)`.
pub fn torus_element(a: f64) -> Result<PathChoice> {
    PathChoice::from_log(V3::new(0.0, 0.0, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

    fn bump(v: [V3; 4]) -> GroupMap {
        GroupMap::exp_of(MapDomain::Disk, "h", move |x| {
            let (r, t) = (x[0], x[1]);
            let b = 1.0 - r * r;
            let e = v[0] + v[1] * (r * t.cos()) + v[2] * (r * t.sin()) + v[3] * (r * r * (2.0 * t).cos());
            let er = v[1] * t.cos() + v[2] * t.sin() + v[3] * (2.0 * r * (2.0 * t).cos());
            let et = v[1] * (-r * t.sin()) + v[2] * (r * t.cos()) - v[3] * (2.0 * r * r * (2.0 * t).sin());
            (e * b, [er * b - e * (2.0 * r), et * b, V3::zeros()])
        })
    }

    fn random_bump(rng: &mut ChaCha8Rng, scale: f64) -> GroupMap {
        bump([0; 4].map(|_| random_chart_element(rng, scale).log()))
    }

    fn smooth_disk_map(v: V3, w: V3) -> GroupMap {
        GroupMap::exp_of(MapDomain::Disk, "phi", move |x| {
            let (r, t) = (x[0], x[1]);
            (
                v * (r * t.cos()) + w * (r * r),
                [v * t.cos() + w * (2.0 * r), v * (-r * t.sin()), V3::zeros()],
            )
        })
    }

    #[test]
    fn wzw_degree_maps() {
        for k in [1, 2] {
            let rs: Vec<QuadResult> = [6, 12, 24].iter().map(|&n| wzw_ball(&degree_map(k), n).unwrap()).collect();
            let w = rs[2].value / TWO_PI_I;
            assert!((w.norm() - k as f64).abs() < 1e-3, "{w}");
            assert!(rs[1].error * 4.0 <= rs[0].error && rs[2].error * 4.0 <= rs[1].error);
        }
        let c = GroupMap::constant(MapDomain::Ball, su2_exp(&V3::new(0.2, 0.1, 0.0)));
        assert_eq!(wzw_ball(&c, 8).unwrap().value, Complex64::new(0.0, 0.0));
        assert!(matches!(wzw_ball(&GroupMap::identity(MapDomain::Disk), 8), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn gamma_vanishes_on_constants() {
        let f = smooth_disk_map(V3::new(0.3, 0.1, -0.2), V3::new(0.0, 0.4, 0.1));
        let c = GroupMap::constant(MapDomain::Disk, su2_exp(&V3::new(0.1, 0.2, 0.3)));
        assert!(gamma(&f, &c, 16).unwrap().value.norm() < 1e-12);
        assert!(gamma(&c, &f, 16).unwrap().value.norm() < 1e-12);
    }

    #[test]
    fn gamma_torus_oracle() {
        // a = x, b = y: −(1/2πi)·π = i/2.
        let a = diagonal_disk_map("x", |r, t| (r * t.cos(), t.cos(), -r * t.sin()));
        let b = diagonal_disk_map("y", |r, t| (r * t.sin(), t.sin(), r * t.cos()));
        let g = gamma(&a, &b, 16).unwrap().value;
        assert!((g - Complex64::new(0.0, 0.5)).norm() < 1e-8);
        // b = y + y³: ∫(1 + 3y²) = 7π/4, γ = 7i/8.
        let b3 = diagonal_disk_map("y+y3", |r, t| {
            let y = r * t.sin();
            (y + y * y * y, t.sin() * (1.0 + 3.0 * y * y), r * t.cos() * (1.0 + 3.0 * y * y))
        });
        let g = gamma(&a, &b3, 16).unwrap().value;
        assert!((g - Complex64::new(0.0, 0.875)).norm() < 1e-8);
    }

    #[test]
    fn polyakov_wiegmann() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..4 {
            let (h1, h2) = (random_bump(&mut rng, 0.3), random_bump(&mut rng, 0.3));
            let n = 24;
            let w12 = wzw_of_disk_map(&h1.mul(&h2), n).unwrap().value;
            let w1 = wzw_of_disk_map(&h1, n).unwrap().value;
            let w2 = wzw_of_disk_map(&h2, n).unwrap().value;
            let g = gamma(&h1, &h2, n).unwrap().value;
            assert!(g.norm() > 1e-6);
            assert!((w12 - w1 - w2 - g).norm() < 1e-10);
        }
    }

    #[test]
    fn closed_form_cone_matches_sampled_cone() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = random_bump(&mut rng, 0.4);
        let a = wzw_of_disk_map(&h, 16).unwrap().value;
        let b = wzw_ball(&cone_filling(&h).unwrap(), 16).unwrap().value;
        assert!(a.norm() > 1e-6);
        assert!((a + b).norm() < 1e-10);
    }

    #[test]
    fn wzw_requires_trivial_boundary() {
        let f = smooth_disk_map(V3::new(0.3, 0.1, -0.2), V3::zeros());
        assert!(matches!(wzw_of_disk_map(&f, 8), Err(Error::Precondition(_))));
        let big = bump([V3::new(0.0, 0.0, 2.0), V3::zeros(), V3::zeros(), V3::zeros()]);
        match wzw_of_disk_map(&big, 8) {
            Err(Error::NoLogarithm { location, angle }) => {
                assert_eq!(location.len(), 2);
                assert!(angle > LOG_LIMIT);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equivalence_phase_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let phi = smooth_disk_map(V3::new(0.3, 0.1, -0.2), V3::new(0.0, 0.4, 0.1));
        let e = GroupMap::identity(MapDomain::Disk);
        assert!(equivalence_phase(&phi, &e, 16).unwrap().norm() < 1e-14);
        let h = random_bump(&mut rng, 0.3);
        let c = GroupMap::constant(MapDomain::Disk, su2_exp(&V3::new(0.1, 0.0, 0.2)));
        let w = wzw_of_disk_map(&h, 16).unwrap().value;
        assert!((equivalence_phase(&c, &h, 16).unwrap() - w).norm() < 1e-12);
        // φ′ = φh: going there and back composes to the identity.
        for n in [16, 32] {
            let phip = phi.mul(&h);
            let there = equivalence_phase(&phi, &h, n).unwrap();
            let back = equivalence_phase(&phip, &h.inv(), n).unwrap();
            assert!((there + back).norm() < 1e-6);
            let hh = phi.inv().mul(&phip);
            assert!((equivalence_phase(&phi, &hh, n).unwrap() - there).norm() < 1e-10);
        }
    }

    #[test]
    fn extension_product_cases() {
        let n = 16;
        let l = GroupMap::exp_of(MapDomain::Interval, "l", |x| {
            let t = x[0];
            (V3::new(0.2 * t.sin(), 0.1 * (1.0 - t.cos()), 0.0), [V3::new(0.2 * t.cos(), 0.1 * t.sin(), 0.0), V3::zeros(), V3::zeros()])
        });
        let p = LoopWithDisk::radial(l, Complex64::from_polar(1.0, 0.3), n).unwrap();
        let q = extension_product(&p, &LoopWithDisk::unit(n)).unwrap();
        assert!((q.phase - p.phase).norm() < 1e-14);
        assert!((q.filling.value(&[0.4, 1.0]) - p.filling.value(&[0.4, 1.0])).norm() < 1e-14);

        let mut e1 = LoopWithDisk::unit(n);
        e1.phase = Complex64::from_polar(1.0, 0.5);
        let mut e2 = LoopWithDisk::unit(n);
        e2.phase = Complex64::from_polar(1.0, -1.2);
        let e12 = extension_product(&e1, &e2).unwrap();
        assert!((e12.phase - Complex64::from_polar(1.0, -0.7)).norm() < 1e-14);

        assert!(matches!(extension_product(&p, &LoopWithDisk::unit(32)), Err(Error::Precondition(_))));
    }

    #[test]
    fn extension_product_torus_phase() {
        let n = 16;
        let bx = GroupMap::exp_of(MapDomain::Interval, "x", |x| {
            (V3::new(0.0, 0.0, x[0].cos()), [V3::new(0.0, 0.0, -x[0].sin()), V3::zeros(), V3::zeros()])
        });
        let by = GroupMap::exp_of(MapDomain::Interval, "y", |x| {
            (V3::new(0.0, 0.0, x[0].sin()), [V3::new(0.0, 0.0, x[0].cos()), V3::zeros(), V3::zeros()])
        });
        let a = diagonal_disk_map("x", |r, t| (r * t.cos(), t.cos(), -r * t.sin()));
        let b = diagonal_disk_map("y", |r, t| (r * t.sin(), t.sin(), r * t.cos()));
        let p = LoopWithDisk::new(bx, a, Complex64::new(1.0, 0.0), n).unwrap();
        let q = LoopWithDisk::new(by, b, Complex64::new(1.0, 0.0), n).unwrap();
        let pq = extension_product(&p, &q).unwrap();
        assert!((pq.phase - Complex64::new(0.0, 0.5).exp()).norm() < 1e-8);
    }

    #[test]
    fn loop_with_disk_invariants() {
        let l = PathChoice::from_log(V3::new(0.1, 0.2, 0.0)).unwrap();
        let loop_ = l.path().mul(&l.path().inv());
        let wrong = smooth_disk_map(V3::new(0.3, 0.0, 0.0), V3::zeros());
        assert!(matches!(LoopWithDisk::new(loop_.clone(), wrong, Complex64::new(1.0, 0.0), 8), Err(Error::Precondition(_))));
        let fill = radial_filling(&loop_).unwrap();
        assert!(matches!(LoopWithDisk::new(loop_, fill, Complex64::new(1.1, 0.0), 8), Err(Error::Precondition(_))));
    }

    #[test]
    fn path_choice_chart() {
        assert!(matches!(PathChoice::from_log(V3::new(0.6, 0.0, 0.0)), Err(Error::Chart(_))));
        let p = PathChoice::from_log(V3::new(0.3, -0.1, 0.2)).unwrap();
        assert!((p.path().value(&[0.0]) - M2::identity()).norm() < 1e-12);
        assert!((p.path().value(&[2.0 * PI]) - p.element()).norm() < 1e-12);
        let q = PathChoice::new(p.element()).unwrap();
        assert!((q.log() - p.log()).norm() < 1e-12);
        let a = PathChoice::from_log(V3::new(0.3, 0.0, 0.0)).unwrap();
        assert!(matches!(a.mul(&a), Err(Error::Chart(_))));
    }

    #[test]
    fn sigma_loop_cases() {
        let n = 16;
        let g = PathChoice::from_log(V3::new(0.1, -0.2, 0.15)).unwrap();
        let s = sigma_loop(&g, &PathChoice::identity(), n).unwrap();
        assert!(s.max_distance_from_identity() < 1e-12);
        let (a, b) = (torus_element(0.2).unwrap(), torus_element(-0.13).unwrap());
        assert!(sigma_loop(&a, &b, n).unwrap().max_distance_from_identity() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let (a, b) = (random_chart_element(&mut rng, 0.24), random_chart_element(&mut rng, 0.24));
            let s = sigma_loop(&a, &b, n).unwrap();
            assert!(s.closure_defect() < 1e-12);
            assert!(s.max_distance_from_identity() < CHART_RADIUS);
            assert!(s.max_distance_from_identity() > 1e-4);
        }
    }

    #[test]
    fn alpha_normalized_and_torus() {
        let n = 16;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (a, b) = (random_chart_element(&mut rng, 0.15), random_chart_element(&mut rng, 0.15));
        let e = PathChoice::identity();
        for t in [[&e, &a, &b], [&a, &e, &b], [&a, &b, &e]] {
            assert!((alpha3(t[0], t[1], t[2], n).unwrap().value - 1.0).norm() < 1e-12);
        }
        let tor: Vec<PathChoice> = [0.1, -0.05, 0.12].iter().map(|&x| torus_element(x).unwrap()).collect();
        assert!((alpha3(&tor[0], &tor[1], &tor[2], n).unwrap().value - 1.0).norm() < 1e-6);
        let g = alpha3(&a, &b, &random_chart_element(&mut rng, 0.15), n).unwrap();
        assert!((g.value.norm() - 1.0).abs() < 1e-12);
        assert!(g.exponent.norm() > 1e-8);
    }

    #[test]
    fn pentagon_decreases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2 {
            let g: Vec<PathChoice> = (0..4).map(|_| random_chart_element(&mut rng, 0.12)).collect();
            let q = [&g[0], &g[1], &g[2], &g[3]];
            let d8 = pentagon_defect(q, 8).unwrap();
            let d16 = pentagon_defect(q, 16).unwrap();
            assert!(d16 < 1e-4 && d16 < d8, "{d8} {d16}");
        }
        let tor: Vec<PathChoice> = [0.1, -0.05, 0.12, 0.07].iter().map(|&x| torus_element(x).unwrap()).collect();
        assert!(pentagon_defect([&tor[0], &tor[1], &tor[2], &tor[3]], 8).unwrap() < 1e-6);
        let e = PathChoice::identity();
        assert!(pentagon_defect([&tor[0], &e, &tor[1], &tor[2]], 8).unwrap() < 1e-12);
    }
}
