//! Verification suites and their reports.
//!
//! A suite is a fixed, seeded list of checks. Each check records a value, a
//! defect and the tolerance it is judged against: exact checks require a zero
//! defect, quadrature and finite-difference checks use the configured
//! tolerance, and roundoff-limited floating checks carry their own.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cocycles::{
    affine_cocycle, affine_jacobi_defect, affine_single_mode, boundary_coboundary_defect, mf_cocycle,
    mf_cocycle_identity_defect, path_coboundary, path_coboundary_defect, path_three_cocycle, Provenance,
};
use crate::error::{Error, Result};
use crate::extension::{
    builtin_instances, coboundary, h3_bar_resolution, is_coboundary, obstruction_class, parse_instances,
    pentagon_violations, random_cech_data, random_toy_sample, sigma_from_section, split_instance, cech_lift,
    cech_lift_with_gauge, toy_omega_chain, ExtensionInstance, FiniteGroup, GroupCochain, ToyGroupoid, M2c,
};
use crate::field::{random_field, random_loop, random_path, write_field, Domain, FourierField, Mode, RandomFieldSpec, ValueKind};
use crate::fock::{
    anomaly_defect, bogoliubov_implementer, intertwining_residual, phase_cocycle_ratio, phase_two_cocycle,
    random_antihermitian, random_block_unitary, random_unitary, schwinger_cocycle, shift_operator, CarGenerators,
    Mat, PolarizedSpace,
};
use crate::lie::{su2, su3, u1, un, LieAlgebraSpec};
use crate::loopgroup::{
    alpha3, degree_map, pentagon_defect, random_chart_element, torus_element, wzw_ball, PathChoice,
};

pub const MIN_SUITE_RESOLUTION: usize = 8;
pub const MAX_SUITE_RESOLUTION: usize = 128;
/// Roundoff-limited checks in double precision.
pub const FLOAT_TOL: f64 = 1e-12;
/// Error estimates at or below this level count as converged.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;
/// Radius of the near-identity sample for pentagon quadruples.
pub const PENTAGON_RADIUS: f64 = 0.12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Affine,
    Path,
    Mf,
    Boundary,
    Wzw,
    Pentagon,
    Car,
    Schwinger,
    Implementer,
    Obstruction,
    H3,
    ToyChain,
    Cech,
    All,
}

impl SuiteName {
    pub const EACH: [SuiteName; 13] = [
        SuiteName::Affine,
        SuiteName::Path,
        SuiteName::Mf,
        SuiteName::Boundary,
        SuiteName::Wzw,
        SuiteName::Pentagon,
        SuiteName::Car,
        SuiteName::Schwinger,
        SuiteName::Implementer,
        SuiteName::Obstruction,
        SuiteName::H3,
        SuiteName::ToyChain,
        SuiteName::Cech,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteName::Affine => "affine",
            SuiteName::Path => "path",
            SuiteName::Mf => "mf",
            SuiteName::Boundary => "boundary",
            SuiteName::Wzw => "wzw",
            SuiteName::Pentagon => "pentagon",
            SuiteName::Car => "car",
            SuiteName::Schwinger => "schwinger",
            SuiteName::Implementer => "implementer",
            SuiteName::Obstruction => "obstruction",
            SuiteName::H3 => "h3",
            SuiteName::ToyChain => "toy-chain",
            SuiteName::Cech => "cech",
            SuiteName::All => "all",
        }
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::EACH
            .iter()
            .chain(std::iter::once(&SuiteName::All))
            .find(|n| n.name() == s)
            .copied()
            .ok_or_else(|| Error::Precondition(format!("unknown suite {s:?}")))
    }
}

impl std::fmt::Display for SuiteName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: SuiteName,
    pub seed: u64,
    pub resolution: usize,
    pub tolerance: f64,
    pub instances: Option<PathBuf>,
    /// Record wall-clock time; off by default so reports are reproducible.
    #[serde(default)]
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: SuiteName::All,
            seed: 1,
            resolution: 32,
            tolerance: 1e-4,
            instances: None,
            timing: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Precondition(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if !(MIN_SUITE_RESOLUTION..=MAX_SUITE_RESOLUTION).contains(&self.resolution) {
            return Err(Error::Precondition(format!(
                "resolution {} outside [{MIN_SUITE_RESOLUTION}, {MAX_SUITE_RESOLUTION}]",
                self.resolution
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    pub inputs_digest: String,
    pub value: String,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: SuiteConfig,
    pub conventions: Vec<(String, String)>,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_clock_seconds: Option<f64>,
}

impl Report {
    pub fn empty(config: SuiteConfig) -> Self {
        Self {
            tool: "cocyclelab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config,
            conventions: conventions(),
            checks: Vec::new(),
            summary: Summary { total: 0, passed: 0, failed: 0 },
            wall_clock_seconds: None,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    fn finish(&mut self) {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        self.summary = Summary {
            total: self.checks.len(),
            passed,
            failed: self.checks.len() - passed,
        };
    }
}

/// Conventions every reported number depends on.
pub fn conventions() -> Vec<(String, String)> {
    [
        ("trace", "matrix trace in the defining representation of each algebra"),
        ("interval", "paths are parametrized by s = t/2pi in [0, 1]"),
        ("orientation", "dtheta1^dtheta2^dtheta3 on T3; periodic coordinates precede the interval on T2xI; the cone over a disk is oriented by dr^ds^dtheta"),
        ("graded-bracket", "[a, b] = a^b - b^a on matrix-valued forms"),
        ("three-cocycle-sign", "delta c = -d alpha, alpha(X,Y,Z) = -(1/4pi i) tr X[Y,Z] at the path endpoint"),
        ("polarization", "H+ holds the modes n >= 0, so n = 0 is unoccupied in the vacuum"),
        ("fock-basis", "basis index is the excitation mask relative to the vacuum; the vacuum has index 0"),
        ("implementer-gauge", "first vacuum-column coordinate above 1e-10 of the maximum is made positive real"),
        ("cech-gauge", "first nonzero row-major entry of each lifted transition g_ab, a < b, is positive real; g_ba is its inverse"),
        ("group-cochains", "normalized bar cochains with trivial action, written additively in a = Z/n1 x ... x Z/nk"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

struct Checks<'a> {
    suite: SuiteName,
    tol: f64,
    out: &'a mut Vec<CheckRecord>,
}

impl Checks<'_> {
    fn push(&mut self, name: String, inputs: &str, value: String, defect: f64, tol: f64, prov: Provenance) {
        let defect = if defect == 0.0 { 0.0 } else { defect };
        let pass = if prov == Provenance::Exact { defect == 0.0 } else { defect <= tol };
        self.out.push(CheckRecord {
            suite: self.suite.name().into(),
            name,
            inputs_digest: digest(inputs),
            value,
            defect,
            tolerance: if prov == Provenance::Exact { 0.0 } else { tol },
            pass,
            provenance: match prov {
                Provenance::Exact => "exact",
                Provenance::Quadrature => "quadrature",
                Provenance::Floating => "floating",
            }
            .into(),
        });
    }

    /// `defect` counts failing instances.
    fn exact(&mut self, name: impl Into<String>, inputs: &str, value: String, failures: usize) {
        self.push(name.into(), inputs, value, failures as f64, 0.0, Provenance::Exact);
    }

    fn quad(&mut self, name: impl Into<String>, inputs: &str, value: String, defect: f64) {
        let tol = self.tol;
        self.push(name.into(), inputs, value, defect, tol, Provenance::Quadrature);
    }

    fn float(&mut self, name: impl Into<String>, inputs: &str, value: String, defect: f64, tol: f64) {
        self.push(name.into(), inputs, value, defect, tol, Provenance::Floating);
    }
}

/// Loads extension instances from the configured file, or the built-ins.
pub fn load_instances(config: &SuiteConfig) -> Result<Vec<ExtensionInstance>> {
    match &config.instances {
        None => Ok(builtin_instances()),
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            parse_instances(&text).map_err(|e| match e {
                Error::Json(j) => Error::Parse {
                    line: j.line(),
                    message: j.to_string(),
                },
                other => other,
            })
        }
    }
}

pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    let instances = load_instances(config)?;
    let start = Instant::now();
    let mut report = Report::empty(config.clone());
    let suites: Vec<SuiteName> = if config.suite == SuiteName::All {
        SuiteName::EACH.to_vec()
    } else {
        vec![config.suite]
    };
    for s in suites {
        // each suite draws from its own stream so suites are independent
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(s as u64);
        let mut c = Checks {
            suite: s,
            tol: config.tolerance,
            out: &mut report.checks,
        };
        match s {
            SuiteName::Affine => suite_affine(&mut c, &mut rng)?,
            SuiteName::Path => suite_path(&mut c, &mut rng)?,
            SuiteName::Mf => suite_mf(&mut c, &mut rng)?,
            SuiteName::Boundary => suite_boundary(&mut c, &mut rng)?,
            SuiteName::Wzw => suite_wzw(&mut c, config.resolution)?,
            SuiteName::Pentagon => suite_pentagon(&mut c, &mut rng, config.resolution)?,
            SuiteName::Car => suite_car(&mut c)?,
            SuiteName::Schwinger => suite_schwinger(&mut c, &mut rng)?,
            SuiteName::Implementer => suite_implementer(&mut c, &mut rng)?,
            SuiteName::Obstruction => suite_obstruction(&mut c, &mut rng, &instances)?,
            SuiteName::H3 => suite_h3(&mut c)?,
            SuiteName::ToyChain => suite_toy(&mut c, &mut rng)?,
            SuiteName::Cech => suite_cech(&mut c, &mut rng)?,
            SuiteName::All => unreachable!(),
        }
    }
    report.finish();
    if config.timing {
        report.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

fn fields_text(fs: &[&FourierField]) -> String {
    fs.iter().enumerate().map(|(i, f)| write_field(&format!("f{i}"), f)).collect()
}

fn unit_mode(domain: Domain, alg: &Arc<LieAlgebraSpec>, k: i32, a: usize) -> Result<FourierField> {
    let mut v = vec![num_traits::Zero::zero(); alg.dim()];
    v[a] = crate::exact::gr(1, 0);
    FourierField::mode(domain, ValueKind::Lie, alg.clone(), Mode::new([k, 0, 0], 0, 0), v)
}

pub const AFFINE_MAX_MODE: i32 = 8;
pub const AFFINE_SWEEP: usize = 200;

fn suite_affine(c: &mut Checks, rng: &mut ChaCha8Rng) -> Result<()> {
    for alg in [Arc::new(su2()), Arc::new(u1())] {
        let mut failures = 0;
        let mut count = 0;
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                for m in -AFFINE_MAX_MODE..=AFFINE_MAX_MODE {
                    for n in -AFFINE_MAX_MODE..=AFFINE_MAX_MODE {
                        let x = unit_mode(Domain::T1, &alg, m, a)?;
                        let y = unit_mode(Domain::T1, &alg, n, b)?;
                        count += 1;
                        if affine_cocycle(&x, &y)? != affine_single_mode(m, n, alg.trace_form(a, b)) {
                            failures += 1;
                        }
                    }
                }
            }
        }
        c.exact(
            format!("single-mode closed form [{}]", alg.name()),
            &format!("{} |m|,|n|<={AFFINE_MAX_MODE}", alg.name()),
            format!("{count} pairs"),
            failures,
        );
    }
    let alg = Arc::new(su2());
    let spec = RandomFieldSpec::default();
    let mut failures = 0;
    let mut text = String::new();
    for _ in 0..AFFINE_SWEEP {
        let f: Vec<FourierField> = (0..3).map(|_| random_field(Domain::T1, 0, alg.clone(), spec, rng)).collect();
        text.push_str(&fields_text(&[&f[0], &f[1], &f[2]]));
        if !affine_jacobi_defect(&f[0], &f[1], &f[2])?.is_zero() {
            failures += 1;
        }
    }
    c.exact("jacobi sweep [su2]", &text, format!("{AFFINE_SWEEP} triples"), failures);
    Ok(())
}

pub const PATH_SWEEP: usize = 200;
pub const PATH_MAX_DEGREE: u32 = 6;
pub const LOOP_SWEEP: usize = 20;

fn suite_path(c: &mut Checks, rng: &mut ChaCha8Rng) -> Result<()> {
    let alg = Arc::new(su2());
    let mut failures = 0;
    let mut nonzero = 0;
    let mut text = String::new();
    for _ in 0..PATH_SWEEP {
        let f: Vec<FourierField> = (0..3).map(|_| random_path(alg.clone(), PATH_MAX_DEGREE, rng)).collect();
        text.push_str(&fields_text(&[&f[0], &f[1], &f[2]]));
        if !path_coboundary_defect(&f[0], &f[1], &f[2])?.is_zero() {
            failures += 1;
        }
        if !path_three_cocycle(&f[0], &f[1], &f[2])?.is_zero() {
            nonzero += 1;
        }
    }
    c.exact(
        "coboundary of the path cocycle [su2]",
        &text,
        format!("{PATH_SWEEP} triples, {nonzero} with nonzero endpoint term"),
        failures,
    );
    let mut failures = 0;
    let mut text = String::new();
    for _ in 0..LOOP_SWEEP {
        let f: Vec<FourierField> = (0..3).map(|_| random_loop(alg.clone(), PATH_MAX_DEGREE, rng)).collect();
        text.push_str(&fields_text(&[&f[0], &f[1], &f[2]]));
        if !path_coboundary(&f[0], &f[1], &f[2])?.is_zero() || !path_three_cocycle(&f[0], &f[1], &f[2])?.is_zero() {
            failures += 1;
        }
    }
    c.exact("loops: both sides vanish [su2]", &text, format!("{LOOP_SWEEP} triples"), failures);
    Ok(())
}

pub const MF_SWEEP: usize = 25;
pub const MF_SPEC: RandomFieldSpec = RandomFieldSpec {
    terms: 5,
    max_k: 1,
    max_poly: 0,
    real_form: true,
};

fn suite_mf(c: &mut Checks, rng: &mut ChaCha8Rng) -> Result<()> {
    let alg = Arc::new(un(2)?);
    let mut failures = 0;
    let mut nonzero = 0;
    let mut text = String::new();
    for _ in 0..MF_SWEEP {
        let a = random_field(Domain::T3, 1, alg.clone(), MF_SPEC, rng);
        let f: Vec<FourierField> = (0..3).map(|_| random_field(Domain::T3, 0, alg.clone(), MF_SPEC, rng)).collect();
        text.push_str(&fields_text(&[&a, &f[0], &f[1], &f[2]]));
        if !mf_cocycle_identity_defect(&a, &f[0], &f[1], &f[2])?.is_zero() {
            failures += 1;
        }
        if !mf_cocycle(&a, &f[0], &f[1])?.is_zero() {
            nonzero += 1;
        }
    }
    c.exact(
        "cocycle identity with Lie-derivative terms [u2]",
        &text,
        format!("{MF_SWEEP} instances, {nonzero} with nonzero c(A;X,Y)"),
        failures,
    );
    Ok(())
}

pub const BOUNDARY_SWEEP: usize = 25;
pub const BOUNDARY_SPEC: RandomFieldSpec = RandomFieldSpec {
    terms: 3,
    max_k: 1,
    max_poly: 2,
    real_form: true,
};

fn suite_boundary(c: &mut Checks, rng: &mut ChaCha8Rng) -> Result<()> {
    for (alg, count) in [(Arc::new(un(2)?), BOUNDARY_SWEEP - 5), (Arc::new(su3()), 5)] {
        let mut failures = 0;
        let mut text = String::new();
        for _ in 0..count {
            let a = random_field(Domain::T2xInterval, 1, alg.clone(), BOUNDARY_SPEC, rng);
            let f: Vec<FourierField> =
                (0..3).map(|_| random_field(Domain::T2xInterval, 0, alg.clone(), BOUNDARY_SPEC, rng)).collect();
            text.push_str(&fields_text(&[&a, &f[0], &f[1], &f[2]]));
            if !boundary_coboundary_defect(&a, &f[0], &f[1], &f[2])?.is_zero() {
                failures += 1;
            }
        }
        c.exact(
            format!("bulk coboundary equals boundary term [{}]", alg.name()),
            &text,
            format!("{count} instances"),
            failures,
        );
    }
    Ok(())
}

fn suite_wzw(c: &mut Checks, resolution: usize) -> Result<()> {
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let levels = [resolution / 4, resolution / 2, resolution];
    for k in [1, 2] {
        let g = degree_map(k);
        let rs = levels
            .iter()
            .map(|&n| wzw_ball(&g, n.max(crate::field::MIN_RESOLUTION)))
            .collect::<Result<Vec<_>>>()?;
        let w = rs[2].value / two_pi_i;
        let inputs = format!("degree map k={k} n={levels:?}");
        c.quad(format!("|W/2pi i| = {k}"), &inputs, format!("{:.12}", w.norm()), (w.norm() - k as f64).abs());
        c.quad(format!("error estimate [k={k}]"), &inputs, format!("{:.3e}", rs[2].error), rs[2].error);
        let shrinks = rs.windows(2).all(|p| p[1].error * 4.0 <= p[0].error || p[1].error <= ROUNDOFF_FLOOR);
        c.exact(
            format!("error estimate shrinks 4x per refinement [k={k}]"),
            &inputs,
            rs.iter().map(|r| format!("{:.3e}", r.error)).collect::<Vec<_>>().join(" "),
            usize::from(!shrinks),
        );
    }
    Ok(())
}

pub const PENTAGON_QUADRUPLES: usize = 20;
/// Absolute sums stay below the chart radius so every product is in the chart.
pub const TORUS_QUADRUPLES: [[f64; 4]; 3] = [
    [0.1, -0.05, 0.12, 0.07],
    [0.2, 0.1, -0.15, 0.04],
    [-0.11, 0.13, 0.08, -0.14],
];

fn suite_pentagon(c: &mut Checks, rng: &mut ChaCha8Rng, n: usize) -> Result<()> {
    for i in 0..PENTAGON_QUADRUPLES {
        let g: Vec<PathChoice> = (0..4).map(|_| random_chart_element(rng, PENTAGON_RADIUS)).collect();
        let inputs: String = g.iter().map(|p| format!("{:?}", p.log().as_slice())).collect();
        let q = [&g[0], &g[1], &g[2], &g[3]];
        let coarse = pentagon_defect(q, n)?;
        let fine = pentagon_defect(q, 2 * n)?;
        let err = alpha3(&g[0], &g[1], &g[2], n)?.error;
        c.quad(format!("pentagon [{i}] n={n}"), &inputs, format!("{coarse:.3e}"), coarse);
        c.quad(format!("alpha quadrature error [{i}] n={n}"), &inputs, format!("{err:.3e}"), err);
        c.exact(
            format!("pentagon decreases [{i}] n={n}->{}", 2 * n),
            &inputs,
            format!("{coarse:.3e} -> {fine:.3e}"),
            usize::from(fine >= coarse),
        );
    }
    for (i, a) in TORUS_QUADRUPLES.iter().enumerate() {
        let g = a.iter().map(|&x| torus_element(x)).collect::<Result<Vec<_>>>()?;
        let d = pentagon_defect([&g[0], &g[1], &g[2], &g[3]], n)?;
        c.quad(format!("pentagon torus [{i}] n={n}"), &format!("{a:?}"), format!("{d:.3e}"), d);
    }
    Ok(())
}

pub const CAR_DIM: usize = 12;

fn suite_car(c: &mut Checks) -> Result<()> {
    let space = PolarizedSpace::with_dim(CAR_DIM)?;
    let gens = CarGenerators::new(&space)?;
    let r = gens.car_check();
    c.exact(
        format!("CAR relations d={CAR_DIM}"),
        &format!("d={CAR_DIM}"),
        format!("{} relations on {} modes", r.relations, r.modes),
        r.violations + r.vacuum_violations,
    );
    for m in 1..=3 {
        let space = PolarizedSpace::symmetric(2 * m as u32, 1)?;
        let gens = CarGenerators::new(&space)?;
        let x = shift_operator(&space, m, None)?;
        let y = shift_operator(&space, -m, None)?;
        let r = anomaly_defect(&gens, &x, &y)?;
        let inputs = format!("shift m={m} cutoff={}", 2 * m);
        c.float(format!("anomaly defect [m={m}]"), &inputs, format!("{:.3e}", r.defect), r.defect, FLOAT_TOL);
        let z = r.central();
        c.float(
            format!("|central value| = {m}"),
            &inputs,
            format!("{:.12}", z.norm()),
            (z.norm() - m as f64).abs(),
            FLOAT_TOL,
        );
    }
    Ok(())
}

fn suite_schwinger(c: &mut Checks, rng: &mut ChaCha8Rng) -> Result<()> {
    for m in 1..=3i32 {
        let vals = [2 * m, 2 * m + 2, 2 * m + 4]
            .iter()
            .map(|&l| {
                let space = PolarizedSpace::symmetric(l as u32, 1)?;
                schwinger_cocycle(&space, &shift_operator(&space, m, None)?, &shift_operator(&space, -m, None)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let stable = vals.iter().all(|v| *v == vals[0]);
        c.exact(
            format!("cutoff stability [m={m}]"),
            &format!("shift m={m} cutoffs {} {} {}", 2 * m, 2 * m + 2, 2 * m + 4),
            format!("{}", vals[0]),
            usize::from(!stable || vals[0] != Complex64::new(-(m as f64), 0.0)),
        );
    }
    let space = PolarizedSpace::symmetric(4, 1)?;
    let d = space.dim();
    let mut worst_anti: f64 = 0.0;
    let mut worst_block: f64 = 0.0;
    for _ in 0..10 {
        let x = random_antihermitian(d, rng);
        let y = random_antihermitian(d, rng);
        let b = random_block_unitary(&space, 0.5, rng);
        worst_anti = worst_anti.max((schwinger_cocycle(&space, &x, &y)? + schwinger_cocycle(&space, &y, &x)?).norm());
        worst_block = worst_block.max(schwinger_cocycle(&space, &b, &y)?.norm());
    }
    c.float("antisymmetry", "10 random pairs, cutoff 4", format!("{worst_anti:.3e}"), worst_anti, FLOAT_TOL);
    c.float(
        "vanishes on block-diagonal operators",
        "10 random pairs, cutoff 4",
        format!("{worst_block:.3e}"),
        worst_block,
        FLOAT_TOL,
    );
    Ok(())
}

pub const IMPLEMENTER_DIM: usize = 8;
pub const IMPLEMENTER_PAIRS: usize = 10;
pub const FD_STEP: f64 = 1e-3;

fn mat_text(ms: &[&Mat]) -> String {
    ms.iter().map(|m| format!("{m:?}")).collect()
}

fn suite_implementer(c: &mut Checks, rng: &mut ChaCha8Rng) -> Result<()> {
    let d = IMPLEMENTER_DIM;
    let space = PolarizedSpace::with_dim(d)?;
    let gens = CarGenerators::new(&space)?;
    let mut worst_fd: f64 = 0.0;
    let mut text = String::new();
    for i in 0..IMPLEMENTER_PAIRS {
        let x = random_antihermitian(d, rng);
        let y = random_antihermitian(d, rng);
        text.push_str(&mat_text(&[&x, &y]));
        let h = FD_STEP;
        let phi = |t: f64, s: f64| phase_two_cocycle(&gens, &x.map(|z| z * t).exp(), &y.map(|z| z * s).exp());
        let fd = (phi(h, h)? - phi(h, -h)? - phi(-h, h)? + phi(-h, -h)?) / (4.0 * h * h);
        let expect = schwinger_cocycle(&space, &x, &y)? * 0.5;
        let err = (fd - expect).norm();
        worst_fd = worst_fd.max(err);
        c.quad(
            format!("mixed derivative of the phase cocycle [{i}]"),
            &mat_text(&[&x, &y]),
            format!("{fd:.8} vs {expect:.8}"),
            err,
        );
    }
    let mut worst_res: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..3 {
        let (a, b, g) = (random_unitary(d, 0.3, rng), random_unitary(d, 0.3, rng), random_unitary(d, 0.3, rng));
        let imp = bogoliubov_implementer(&gens, &a)?;
        worst_res = worst_res.max(intertwining_residual(&gens, &a, &imp.gamma));
        worst_ratio = worst_ratio.max((phase_cocycle_ratio(&gens, &a, &b, &g)? - 1.0).norm());
    }
    c.float("intertwining residual", "3 random unitaries", format!("{worst_res:.3e}"), worst_res, 1e-10);
    c.float("phase 2-cocycle identity", "3 random triples", format!("{worst_ratio:.3e}"), worst_ratio, 1e-10);
    Ok(())
}

fn random_two_cochain(k: usize, a_orders: &[u64], rng: &mut ChaCha8Rng) -> GroupCochain {
    let mut b = GroupCochain::zero(2, k, a_orders);
    for g in 1..k {
        for h in 1..k {
            let i = b.index(&[g, h]);
            b.values[i] = a_orders.iter().map(|&n| rng.random_range(0..n)).collect();
        }
    }
    b
}

fn suite_obstruction(c: &mut Checks, rng: &mut ChaCha8Rng, instances: &[ExtensionInstance]) -> Result<()> {
    for inst in instances {
        let inputs = serde_json::to_string(inst)?;
        let tag = &inst.name;
        let sigma = inst.sigma()?;
        let violations = inst.sigma_relation_defects(&sigma).iter().filter(|&&d| d != 0).count();
        c.exact(format!("section cocycle relation [{tag}]"), &inputs, format!("{} triples", sigma.len() * inst.g.order()), violations);
        sigma_from_section(inst)?;
        let lift = inst.default_lift(&sigma);
        let alpha = obstruction_class(inst, &lift)?;
        c.exact(
            format!("pentagon identity [{tag}]"),
            &inputs,
            format!("{} quadruples", inst.g.order().pow(4)),
            pentagon_violations(&inst.g, &alpha),
        );
        let trivial = is_coboundary(&inst.g, &alpha);
        c.exact(
            format!("obstruction class [{tag}]"),
            &inputs,
            if trivial { "trivial" } else { "nontrivial" }.into(),
            0,
        );
        let split = split_instance(inst)?;
        let split_alpha = obstruction_class(&split, &split.default_lift(&split.sigma()?))?;
        c.exact(
            format!("split extension has zero alpha [{tag}]"),
            &inputs,
            "alpha = 0".into(),
            usize::from(!split_alpha.is_zero()),
        );
        let b = random_two_cochain(inst.g.order(), &inst.a_orders, rng);
        let shifted = obstruction_class(inst, &inst.shift_lift(&lift, &b))?;
        let diff = shifted.sub(&alpha);
        let exact_shift = diff == coboundary(&inst.g, &b);
        c.exact(
            format!("lift change shifts alpha by a coboundary [{tag}]"),
            &format!("{inputs}{:?}", b.values),
            "alpha' - alpha = delta b".into(),
            usize::from(!exact_shift || !is_coboundary(&inst.g, &diff)),
        );
    }
    Ok(())
}

pub const H3_CASES: [(usize, u64, u128); 4] = [(2, 2, 2), (3, 3, 3), (4, 2, 2), (2, 3, 1)];

fn suite_h3(c: &mut Checks) -> Result<()> {
    for (n, a, expect) in H3_CASES {
        let g = FiniteGroup::cyclic(n);
        let h = h3_bar_resolution(&g, &[a])?;
        let inputs = format!("G=Z/{n} a=Z/{a}");
        c.exact(format!("|H3(Z/{n}, Z/{a})| = {expect}"), &inputs, format!("|H3| = {}", h.order), usize::from(h.order != expect));
        c.exact(
            format!("delta3 delta2 = 0 [Z/{n}]"),
            &inputs,
            format!("ranks {:?}", h.cochain_ranks),
            usize::from(!h.composite_vanishes),
        );
    }
    Ok(())
}

pub fn default_toy() -> ToyGroupoid {
    ToyGroupoid {
        l: [
            [(0.0, 0.3), (0.0, -0.2), (0.0, 0.7), (0.0, 0.1)],
            [(0.0, -0.4), (0.0, 0.5), (0.0, 0.2), (0.0, -0.6)],
        ],
        kappa: 0.8,
    }
}

pub const TOY_SAMPLES: usize = 50;

fn suite_toy(c: &mut Checks, rng: &mut ChaCha8Rng) -> Result<()> {
    let t = default_toy();
    let samples: Vec<_> = (0..TOY_SAMPLES).map(|_| random_toy_sample(rng)).collect();
    let psi = |_: &M2c, _: [f64; 2]| Complex64::new(1.0, 0.0);
    let psi2 = |a: &M2c, g: [f64; 2]| Complex64::from_polar(1.0, a[(0, 1)].re * g[0] + (g[1] * g[0]).sin());
    let r = toy_omega_chain(&t, &samples, &psi, &psi2)?;
    let inputs = format!("{t:?} {TOY_SAMPLES} samples");
    c.float("gauge action composes", &inputs, format!("{:.3e}", r.action_defect), r.action_defect, FLOAT_TOL);
    c.float("omega 1-cocycle", &inputs, format!("{:.3e}", r.one_cocycle_defect), r.one_cocycle_defect, FLOAT_TOL);
    c.float("Phi 2-cocycle", &inputs, format!("{:.3e}", r.two_cocycle_defect), r.two_cocycle_defect, FLOAT_TOL);
    c.float(
        "Phi 2-cocycle, second phase choice",
        &inputs,
        format!("{:.3e}", r.two_cocycle_defect_regauged),
        r.two_cocycle_defect_regauged,
        FLOAT_TOL,
    );
    c.float("phase choices differ by a coboundary", &inputs, format!("{:.3e}", r.coboundary_defect), r.coboundary_defect, FLOAT_TOL);
    c.quad("second derivative matches c(A;X,Y)", &inputs, format!("{:.3e}", r.derivative_defect), r.derivative_defect);
    Ok(())
}

pub const CECH_INDICES: usize = 4;
pub const CECH_DIM: usize = 3;

fn suite_cech(c: &mut Checks, rng: &mut ChaCha8Rng) -> Result<()> {
    let data = random_cech_data(CECH_INDICES, CECH_DIM, rng);
    let inputs: String = data.transitions.values().map(|m| format!("{m:?}")).collect();
    let r = cech_lift(&data)?;
    c.float("tetrahedron identity", &inputs, format!("{:.3e}", r.tetrahedron_defect), r.tetrahedron_defect, FLOAT_TOL);
    let phases: Vec<f64> = (0..CECH_INDICES * CECH_INDICES).map(|_| rng.random_range(-3.0..3.0)).collect();
    let k = CECH_INDICES;
    let mu = |a: usize, b: usize| Complex64::from_polar(1.0, phases[a * k + b]);
    let mu_full = |a: usize, b: usize| match a.cmp(&b) {
        std::cmp::Ordering::Less => mu(a, b),
        std::cmp::Ordering::Greater => mu(b, a).inv(),
        std::cmp::Ordering::Equal => Complex64::new(1.0, 0.0),
    };
    let r2 = cech_lift_with_gauge(&data, &mu)?;
    let mut worst: f64 = 0.0;
    for a in 0..k {
        for b in 0..k {
            for g in 0..k {
                let ratio = r2.get(k, a, b, g) / r.get(k, a, b, g);
                worst = worst.max((ratio - mu_full(a, b) * mu_full(b, g) * mu_full(g, a)).norm());
            }
        }
    }
    c.float(
        "gauge change is a Cech coboundary",
        &format!("{inputs}{phases:?}"),
        format!("{worst:.3e}"),
        worst,
        FLOAT_TOL,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// Serialization

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Precondition(format!("unknown format {s:?}"))),
        }
    }
}

pub const CSV_HEADER: [&str; 8] = ["suite", "name", "inputs_digest", "value", "defect", "tolerance", "pass", "provenance"];

pub fn emit_report(report: &Report, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(report)?;
            v.push(b'\n');
            Ok(v)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Precondition(format!("csv: {e}"));
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            for c in &report.checks {
                w.write_record([
                    c.suite.as_str(),
                    &c.name,
                    &c.inputs_digest,
                    &c.value,
                    &format!("{:e}", c.defect),
                    &format!("{:e}", c.tolerance),
                    if c.pass { "true" } else { "false" },
                    &c.provenance,
                ])
                .map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| Error::Precondition(format!("csv: {e}")))
        }
        Format::Text => {
            let mut s = String::new();
            let cfg = &report.config;
            let _ = writeln!(
                s,
                "{} {}  suite={} seed={} resolution={} tol={:e}",
                report.tool, report.version, cfg.suite, cfg.seed, cfg.resolution, cfg.tolerance
            );
            for c in &report.checks {
                let _ = writeln!(
                    s,
                    "{:4} {:12} {:<55} {:>11.3e} <= {:<9.1e} {:10} {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.suite,
                    c.name,
                    c.defect,
                    c.tolerance,
                    c.provenance,
                    c.value
                );
            }
            let _ = writeln!(
                s,
                "{} checks, {} passed, {} failed",
                report.summary.total, report.summary.passed, report.summary.failed
            );
            if let Some(t) = report.wall_clock_seconds {
                let _ = writeln!(s, "wall clock {t:.2} s");
            }
            Ok(s.into_bytes())
        }
    }
}

/// Parses a report emitted as JSON.
pub fn parse_report(bytes: &[u8]) -> Result<Report> {
    Ok(serde_json::from_slice(bytes)?)
}

/// `(name, pass)` pairs from an emitted CSV report.
pub fn csv_pass_vector(bytes: &[u8]) -> Result<Vec<(String, bool)>> {
    let mut r = csv::Reader::from_reader(bytes);
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        out.push((rec[1].to_string(), &rec[6] == "true"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(suite: SuiteName) -> SuiteConfig {
        SuiteConfig {
            suite,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn config_bounds() {
        let mut c = cfg(SuiteName::H3);
        c.tolerance = 0.0;
        assert!(matches!(run_suite(&c), Err(Error::Precondition(_))));
        let mut c = cfg(SuiteName::H3);
        c.resolution = 4;
        assert!(run_suite(&c).is_err());
        assert_eq!("toy-chain".parse::<SuiteName>().unwrap(), SuiteName::ToyChain);
        assert!("nope".parse::<SuiteName>().is_err());
    }

    #[test]
    fn h3_suite_reports_order_two() {
        let r = run_suite(&cfg(SuiteName::H3)).unwrap();
        assert!(r.all_pass());
        assert!(r.checks.iter().any(|c| c.value == "|H3| = 2" && c.name.contains("Z/2, Z/2")));
    }

    #[test]
    fn affine_suite_exact() {
        let r = run_suite(&cfg(SuiteName::Affine)).unwrap();
        assert!(r.all_pass());
        assert!(r.checks.iter().all(|c| c.defect == 0.0 && c.provenance == "exact"));
    }

    #[test]
    fn empty_report_formats() {
        let r = Report::empty(cfg(SuiteName::Cech));
        let j = emit_report(&r, Format::Json).unwrap();
        assert_eq!(parse_report(&j).unwrap(), r);
        assert!(csv_pass_vector(&emit_report(&r, Format::Csv).unwrap()).unwrap().is_empty());
        assert!(String::from_utf8(emit_report(&r, Format::Text).unwrap()).unwrap().contains("0 checks"));
    }

    #[test]
    fn json_csv_consistent_and_deterministic() {
        let c = cfg(SuiteName::Obstruction);
        let a = run_suite(&c).unwrap();
        let b = run_suite(&c).unwrap();
        let ja = emit_report(&a, Format::Json).unwrap();
        assert_eq!(ja, emit_report(&b, Format::Json).unwrap());
        assert_eq!(parse_report(&ja).unwrap(), a);
        let v = csv_pass_vector(&emit_report(&a, Format::Csv).unwrap()).unwrap();
        let w: Vec<(String, bool)> = a.checks.iter().map(|c| (c.name.clone(), c.pass)).collect();
        assert_eq!(v, w);
        assert!(a.all_pass());
        assert!(a.checks.iter().any(|c| c.value == "nontrivial"));
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest("abc"), "ba7816bf8f01cfea");
    }
}
