//! SU(2) in the parametrization `g = exp(i v·σ)`, `v ∈ R³`, with the
//! closed-form differential of the exponential.
//!
//! For `g = exp(i v·σ)` one has `g⁻¹dg = i (J(v) dv)·σ` with
//! `J(v) = I + a Ω + b Ω²`, `Ω = [2v]_×`, `φ = 2|v|`,
//! `a = (1 − cos φ)/φ²`, `b = (φ − sin φ)/φ³`. The right form
//! `dg g⁻¹` uses `Ω = −[2v]_×`.

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type M2 = Matrix2<Complex64>;
pub type V3 = Vector3<f64>;

const SERIES_CUTOFF: f64 = 1e-3;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli() -> [M2; 3] {
    [
        M2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        M2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)),
        M2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)),
    ]
}

/// `i w·σ`.
pub fn alg(w: &V3) -> M2 {
    M2::new(
        c(0.0, w.z),
        c(w.y, w.x),
        c(-w.y, w.x),
        c(0.0, -w.z),
    )
}

/// Inverse of [`alg`] on traceless antihermitian matrices.
pub fn alg_coords(m: &M2) -> V3 {
    let z = 0.5 * (m[(0, 0)].im - m[(1, 1)].im);
    let x = 0.5 * (m[(0, 1)].im + m[(1, 0)].im);
    let y = 0.5 * (m[(0, 1)].re - m[(1, 0)].re);
    V3::new(x, y, z)
}

pub fn skew(u: &V3) -> Matrix3<f64> {
    Matrix3::new(0.0, -u.z, u.y, u.z, 0.0, -u.x, -u.y, u.x, 0.0)
}

/// `sin x / x`.
fn sinc(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        1.0 - x * x / 6.0 + x.powi(4) / 120.0
    } else {
        x.sin() / x
    }
}

pub fn su2_exp(v: &V3) -> M2 {
    let t = v.norm();
    let s = sinc(t);
    let cs = t.cos();
    M2::new(
        c(cs, s * v.z),
        c(s * v.y, s * v.x),
        c(-s * v.y, s * v.x),
        c(cs, -s * v.z),
    )
}

/// Rotation angle `|log g|` in `[0, π]`.
pub fn su2_angle(g: &M2) -> f64 {
    let w0 = 0.5 * (g[(0, 0)].re + g[(1, 1)].re);
    let n = alg_coords(g).norm();
    n.atan2(w0)
}

/// Principal logarithm `v` with `g = exp(i v·σ)`, `|v| ≤ π`.
pub fn su2_log_principal(g: &M2) -> V3 {
    let w0 = 0.5 * (g[(0, 0)].re + g[(1, 1)].re);
    let n = alg_coords(g);
    let t = n.norm().atan2(w0);
    n / sinc(t)
}

/// Principal logarithm `v` with `g = exp(i v·σ)`, `|v| ≤ max_angle`.
pub fn su2_log(g: &M2, max_angle: f64) -> Result<V3> {
    let t = su2_angle(g);
    if t > max_angle {
        return Err(Error::NoLogarithm {
            location: vec![],
            angle: t,
        });
    }
    Ok(su2_log_principal(g))
}

fn jacobian_coeffs(phi: f64) -> (f64, f64) {
    if phi < SERIES_CUTOFF {
        let p2 = phi * phi;
        (0.5 - p2 / 24.0 + p2 * p2 / 720.0, 1.0 / 6.0 - p2 / 120.0 + p2 * p2 / 5040.0)
    } else {
        ((1.0 - phi.cos()) / (phi * phi), (phi - phi.sin()) / (phi * phi * phi))
    }
}

/// `J` with `g⁻¹dg = i (J dv)·σ`.
pub fn left_jacobian(v: &V3) -> Matrix3<f64> {
    let om = skew(&(2.0 * v));
    let (a, b) = jacobian_coeffs(2.0 * v.norm());
    Matrix3::identity() + om * a + om * om * b
}

/// `J` with `dg g⁻¹ = i (J dv)·σ`.
pub fn right_jacobian(v: &V3) -> Matrix3<f64> {
    left_jacobian(&(-v))
}

/// Closed-form inverse of [`left_jacobian`] (valid for `|v| < π/2`).
pub fn left_jacobian_inv(v: &V3) -> Matrix3<f64> {
    let om = skew(&(2.0 * v));
    let phi = 2.0 * v.norm();
    let cc = if phi < SERIES_CUTOFF {
        let p2 = phi * phi;
        1.0 / 12.0 + p2 / 720.0 + p2 * p2 / 30240.0
    } else {
        (1.0 - 0.5 * phi / (0.5 * phi).tan()) / (phi * phi)
    };
    Matrix3::identity() - om * 0.5 + om * om * cc
}

/// `max |g†g − 1|` entrywise.
pub fn unitarity_defect(g: &M2) -> f64 {
    (g.adjoint() * g - M2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_left(v: &V3, j: usize) -> V3 {
        let h = 1e-6;
        let mut vp = *v;
        vp[j] += h;
        let mut vm = *v;
        vm[j] -= h;
        let g = su2_exp(v);
        let dg = (su2_exp(&vp) - su2_exp(&vm)) / c(2.0 * h, 0.0);
        alg_coords(&(g.adjoint() * dg))
    }

    #[test]
    fn exp_matches_series_and_is_unitary() {
        let v = V3::new(0.3, -0.2, 0.5);
        let g = su2_exp(&v);
        assert!(unitarity_defect(&g) < 1e-15);
        assert!((g.determinant() - c(1.0, 0.0)).norm() < 1e-14);
        let x = alg(&v);
        let mut series = M2::identity();
        let mut term = M2::identity();
        for k in 1..30 {
            term = term * x / c(k as f64, 0.0);
            series += term;
        }
        assert!((series - g).norm() < 1e-14);
    }

    #[test]
    fn log_inverts_exp() {
        for v in [V3::new(0.3, -0.2, 0.5), V3::new(1e-5, 0.0, 2e-5), V3::zeros(), V3::new(0.0, 2.5, 0.0)] {
            let w = su2_log(&su2_exp(&v), 3.0).unwrap();
            assert!((w - v).norm() < 1e-12, "{v:?} {w:?}");
        }
        assert!(su2_log(&su2_exp(&V3::new(0.0, 3.05, 0.0)), 3.0).is_err());
    }

    #[test]
    fn jacobians_match_difference_quotients() {
        for v in [V3::new(0.3, -0.2, 0.5), V3::new(2e-4, 1e-4, -3e-4), V3::new(1.1, 0.4, 0.0)] {
            let jl = left_jacobian(&v);
            let jr = right_jacobian(&v);
            for j in 0..3 {
                let fd = fd_left(&v, j);
                assert!((jl.column(j) - fd).norm() < 1e-8);
                let h = 1e-6;
                let mut vp = v;
                vp[j] += h;
                let mut vm = v;
                vm[j] -= h;
                let dg = (su2_exp(&vp) - su2_exp(&vm)) / c(2.0 * h, 0.0);
                let fr = alg_coords(&(dg * su2_exp(&v).adjoint()));
                assert!((jr.column(j) - fr).norm() < 1e-8);
            }
            assert!((left_jacobian_inv(&v) * jl - Matrix3::identity()).norm() < 1e-12);
        }
    }

    #[test]
    fn alg_round_trip() {
        let w = V3::new(0.1, -2.0, 0.7);
        assert!((alg_coords(&alg(&w)) - w).norm() < 1e-15);
        let s = pauli();
        let m = s[0] * c(0.0, w.x) + s[1] * c(0.0, w.y) + s[2] * c(0.0, w.z);
        assert!((m - alg(&w)).norm() < 1e-15);
    }
}
