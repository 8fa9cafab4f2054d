//! Tensor-product quadrature with a two-resolution error estimate.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One coordinate direction of a box-shaped chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Axis {
    /// Gauss–Legendre nodes on `[a, b]`.
    Legendre { a: f64, b: f64 },
    /// Equispaced midpoint nodes on a period `[a, b)`; spectrally accurate
    /// for smooth periodic integrands.
    Periodic { a: f64, b: f64 },
}

impl Axis {
    pub fn nodes(&self, n: usize) -> Vec<(f64, f64)> {
        match *self {
            Axis::Legendre { a, b } => gauss_legendre(n)
                .into_iter()
                .map(|(x, w)| (0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w))
                .collect(),
            Axis::Periodic { a, b } => {
                let h = (b - a) / n as f64;
                (0..n).map(|j| (a + (j as f64 + 0.5) * h, h)).collect()
            }
        }
    }
}

/// A chart together with its orientation: the integrand is the coefficient
/// of `dx^1 ∧ … ∧ dx^n` in chart coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadDomain {
    pub name: &'static str,
    pub axes: Vec<Axis>,
}

impl QuadDomain {
    pub fn interval() -> Self {
        Self {
            name: "interval",
            axes: vec![Axis::Legendre { a: 0.0, b: 2.0 * PI }],
        }
    }

    pub fn circle() -> Self {
        Self {
            name: "circle",
            axes: vec![Axis::Periodic { a: 0.0, b: 2.0 * PI }],
        }
    }

    pub fn torus(d: usize) -> Self {
        Self {
            name: "torus",
            axes: vec![Axis::Periodic { a: 0.0, b: 2.0 * PI }; d],
        }
    }

    /// Unit disk in polar coordinates `(r, θ)`, oriented by `dr ∧ dθ`.
    pub fn disk() -> Self {
        Self {
            name: "disk",
            axes: vec![
                Axis::Legendre { a: 0.0, b: 1.0 },
                Axis::Periodic { a: 0.0, b: 2.0 * PI },
            ],
        }
    }

    /// Unit ball in spherical coordinates `(r, ϑ, φ)`, oriented by
    /// `dr ∧ dϑ ∧ dφ` (the standard orientation of R³).
    pub fn ball() -> Self {
        Self {
            name: "ball",
            axes: vec![
                Axis::Legendre { a: 0.0, b: 1.0 },
                Axis::Legendre { a: 0.0, b: PI },
                Axis::Periodic { a: 0.0, b: 2.0 * PI },
            ],
        }
    }

    /// `[0, 1] × D` with coordinates `(s, r, θ)`.
    pub fn cone() -> Self {
        Self {
            name: "cone",
            axes: vec![
                Axis::Legendre { a: 0.0, b: 1.0 },
                Axis::Legendre { a: 0.0, b: 1.0 },
                Axis::Periodic { a: 0.0, b: 2.0 * PI },
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// `|Q_n − Q_{n/2}|`.
    pub error: f64,
    pub resolution: usize,
    pub nodes: usize,
}

/// Minimum nodes per dimension.
pub const MIN_RESOLUTION: usize = 4;

/// Tensor-product rule with `n` nodes per axis. Summation order is fixed.
pub fn quad_rule<F>(f: &F, domain: &QuadDomain, n: usize) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64,
{
    let rules: Vec<Vec<(f64, f64)>> = domain.axes.iter().map(|a| a.nodes(n)).collect();
    let dim = rules.len();
    let mut idx = vec![0usize; dim];
    let mut x = vec![0.0; dim];
    let mut acc = Complex64::new(0.0, 0.0);
    loop {
        let mut w = 1.0;
        for j in 0..dim {
            let (xj, wj) = rules[j][idx[j]];
            x[j] = xj;
            w *= wj;
        }
        let v = f(&x);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite { node: x.clone() });
        }
        acc += v * w;
        let mut j = dim;
        loop {
            if j == 0 {
                return Ok(acc);
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < n {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Integrates at resolution `n` and estimates the error against `n/2`.
pub fn quad_integrate<F>(f: F, domain: &QuadDomain, n: usize) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> Complex64,
{
    if n < MIN_RESOLUTION {
        return Err(Error::Precondition(format!(
            "resolution {n} below the minimum {MIN_RESOLUTION}"
        )));
    }
    let fine = quad_rule(&f, domain, n)?;
    let coarse = quad_rule(&f, domain, (n / 2).max(2))?;
    Ok(QuadResult {
        value: fine,
        error: (fine - coarse).norm(),
        resolution: n,
        nodes: n.pow(domain.dim() as u32),
    })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
