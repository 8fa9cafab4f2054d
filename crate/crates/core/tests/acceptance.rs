//! Acceptance criteria, one PASS/FAIL line each. Runtime budgets are part of
//! each criterion.

use std::sync::Arc;
use std::time::{Duration, Instant};

use cocyclelab::cocycles::{
    affine_cocycle, affine_jacobi_defect, affine_single_mode, boundary_coboundary_defect, boundary_side, mf_cocycle,
    mf_cocycle_identity_defect, path_coboundary, path_coboundary_defect, path_three_cocycle,
};
use cocyclelab::exact::gr;
use cocyclelab::extension::{
    builtin_instances, cech_lift, cech_lift_with_gauge, coboundary, h3_bar_resolution, is_coboundary,
    obstruction_class, pentagon_violations, random_cech_data, split_instance, FiniteGroup, GroupCochain,
};
use cocyclelab::field::{random_field, random_loop, random_path, Domain, FourierField, Mode, RandomFieldSpec, ValueKind};
use cocyclelab::fock::{
    anomaly_defect, phase_two_cocycle, random_antihermitian, schwinger_cocycle, shift_operator, CarGenerators,
    PolarizedSpace,
};
use cocyclelab::lie::{su2, su3, u1, un, LieAlgebraSpec};
use cocyclelab::loopgroup::{degree_map, pentagon_defect, random_chart_element, torus_element, wzw_ball, PathChoice};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn criterion(id: usize, title: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let pass = out.pass && elapsed <= budget;
    println!(
        "{} criterion {id:2}: {title} ({}; {:.1} s of {} s)",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    pass
}

fn unit_mode(domain: Domain, alg: &Arc<LieAlgebraSpec>, k: i32, a: usize) -> FourierField {
    let mut v = vec![Zero::zero(); alg.dim()];
    v[a] = gr(1, 0);
    FourierField::mode(domain, ValueKind::Lie, alg.clone(), Mode::new([k, 0, 0], 0, 0), v).unwrap()
}

fn c1_affine() -> Outcome {
    let mut mismatches = 0;
    let mut pairs = 0;
    for alg in [Arc::new(su2()), Arc::new(u1())] {
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                for m in -8..=8 {
                    for n in -8..=8 {
                        let x = unit_mode(Domain::T1, &alg, m, a);
                        let y = unit_mode(Domain::T1, &alg, n, b);
                        pairs += 1;
                        if affine_cocycle(&x, &y).unwrap() != affine_single_mode(m, n, alg.trace_form(a, b)) {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
    }
    let alg = Arc::new(su2());
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut jacobi = 0;
    for _ in 0..200 {
        let f: Vec<_> = (0..3).map(|_| random_field(Domain::T1, 0, alg.clone(), RandomFieldSpec::default(), &mut rng)).collect();
        if !affine_jacobi_defect(&f[0], &f[1], &f[2]).unwrap().is_zero() {
            jacobi += 1;
        }
    }
    Outcome {
        pass: mismatches == 0 && jacobi == 0,
        detail: format!("{mismatches}/{pairs} closed-form mismatches, {jacobi}/200 nonzero Jacobi defects"),
    }
}

fn c2_path() -> Outcome {
    let alg = Arc::new(su2());
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut bad = 0;
    let mut nonzero = 0;
    for _ in 0..200 {
        let f: Vec<_> = (0..3).map(|_| random_path(alg.clone(), 6, &mut rng)).collect();
        if !path_coboundary_defect(&f[0], &f[1], &f[2]).unwrap().is_zero() {
            bad += 1;
        }
        if !path_three_cocycle(&f[0], &f[1], &f[2]).unwrap().is_zero() {
            nonzero += 1;
        }
    }
    let mut loops_bad = 0;
    for _ in 0..20 {
        let f: Vec<_> = (0..3).map(|_| random_loop(alg.clone(), 6, &mut rng)).collect();
        if !path_coboundary(&f[0], &f[1], &f[2]).unwrap().is_zero() || !path_three_cocycle(&f[0], &f[1], &f[2]).unwrap().is_zero() {
            loops_bad += 1;
        }
    }
    Outcome {
        pass: bad == 0 && loops_bad == 0 && nonzero > 0,
        detail: format!("{bad}/200 nonzero defects ({nonzero} nontrivial), {loops_bad}/20 loop failures"),
    }
}

fn c3_mf() -> Outcome {
    let spec = RandomFieldSpec { terms: 5, max_k: 1, max_poly: 0, real_form: true };
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let (mut bad, mut nonzero) = (0, 0);
    // 20 u(2) instances, where the cocycle is generically nonzero, and 5 su(2)
    for (alg, count) in [(Arc::new(un(2).unwrap()), 20), (Arc::new(su2()), 5)] {
        for _ in 0..count {
            let a = random_field(Domain::T3, 1, alg.clone(), spec, &mut rng);
            let f: Vec<_> = (0..3).map(|_| random_field(Domain::T3, 0, alg.clone(), spec, &mut rng)).collect();
            if !mf_cocycle_identity_defect(&a, &f[0], &f[1], &f[2]).unwrap().is_zero() {
                bad += 1;
            }
            if !mf_cocycle(&a, &f[0], &f[1]).unwrap().is_zero() {
                nonzero += 1;
            }
        }
    }
    Outcome {
        pass: bad == 0 && nonzero > 0,
        detail: format!("{bad}/25 nonzero defects, {nonzero} nonzero cocycle values"),
    }
}

fn c4_boundary() -> Outcome {
    let spec = RandomFieldSpec { terms: 3, max_k: 1, max_poly: 2, real_form: true };
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let (mut bad, mut nonzero) = (0, 0);
    for (alg, count) in [(Arc::new(un(2).unwrap()), 15), (Arc::new(su3()), 5), (Arc::new(su2()), 5)] {
        for _ in 0..count {
            let a = random_field(Domain::T2xInterval, 1, alg.clone(), spec, &mut rng);
            let f: Vec<_> = (0..3).map(|_| random_field(Domain::T2xInterval, 0, alg.clone(), spec, &mut rng)).collect();
            if !boundary_coboundary_defect(&a, &f[0], &f[1], &f[2]).unwrap().is_zero() {
                bad += 1;
            }
            if !boundary_side(&f[0], &f[1], &f[2]).unwrap().is_zero() {
                nonzero += 1;
            }
        }
    }
    Outcome {
        pass: bad == 0 && nonzero > 0,
        detail: format!("{bad}/25 nonzero defects, {nonzero} nonzero boundary terms"),
    }
}

fn c5_wzw() -> Outcome {
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut pass = true;
    let mut detail = Vec::new();
    for k in [1, 2] {
        let start = Instant::now();
        let rs: Vec<_> = [6, 12, 24].iter().map(|&n| wzw_ball(&degree_map(k), n).unwrap()).collect();
        let w = (rs[2].value / two_pi_i).norm();
        let shrink = rs[1].error * 4.0 <= rs[0].error && rs[2].error * 4.0 <= rs[1].error;
        let in_time = start.elapsed() <= Duration::from_secs(60);
        pass &= (w - k as f64).abs() < 1e-3 && shrink && in_time;
        detail.push(format!("|W/2pi i| = {w:.9} errors {:.1e} {:.1e} {:.1e}", rs[0].error, rs[1].error, rs[2].error));
    }
    Outcome { pass, detail: detail.join("; ") }
}

fn c6_pentagon() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let (mut worst, mut not_decreasing) = (0.0f64, 0);
    for _ in 0..20 {
        let g: Vec<PathChoice> = (0..4).map(|_| random_chart_element(&mut rng, 0.12)).collect();
        let q = [&g[0], &g[1], &g[2], &g[3]];
        let d32 = pentagon_defect(q, 32).unwrap();
        let d64 = pentagon_defect(q, 64).unwrap();
        worst = worst.max(d32);
        if d64 >= d32 {
            not_decreasing += 1;
        }
    }
    let mut torus_worst = 0.0f64;
    for a in [[0.1, -0.05, 0.12, 0.07], [0.2, 0.1, -0.15, 0.04], [-0.11, 0.13, 0.08, -0.14]] {
        let g: Vec<PathChoice> = a.iter().map(|&x| torus_element(x).unwrap()).collect();
        torus_worst = torus_worst.max(pentagon_defect([&g[0], &g[1], &g[2], &g[3]], 32).unwrap());
    }
    Outcome {
        pass: worst < 1e-4 && not_decreasing == 0 && torus_worst < 1e-6,
        detail: format!("max defect {worst:.2e} at n=32, {not_decreasing}/20 not decreasing at n=64, torus {torus_worst:.1e}"),
    }
}

fn c7_car() -> Outcome {
    let space = PolarizedSpace::with_dim(12).unwrap();
    let car = CarGenerators::new(&space).unwrap().car_check();
    let mut anomaly_ok = true;
    let mut values = Vec::new();
    for m in 1..=3i32 {
        let space = PolarizedSpace::symmetric(2 * m as u32, 1).unwrap();
        let gens = CarGenerators::new(&space).unwrap();
        let x = shift_operator(&space, m, None).unwrap();
        let y = shift_operator(&space, -m, None).unwrap();
        let r = anomaly_defect(&gens, &x, &y).unwrap();
        anomaly_ok &= r.defect < 1e-12 && (r.central().norm() - m as f64).abs() < 1e-12;
        values.push(format!("{:.1}", r.central().norm()));
    }
    let mut stable = true;
    for m in 1..=3i32 {
        let vals: Vec<Complex64> = [2 * m, 2 * m + 2, 2 * m + 4]
            .iter()
            .map(|&l| {
                let space = PolarizedSpace::symmetric(l as u32, 1).unwrap();
                schwinger_cocycle(&space, &shift_operator(&space, m, None).unwrap(), &shift_operator(&space, -m, None).unwrap()).unwrap()
            })
            .collect();
        stable &= vals.iter().all(|v| *v == vals[0]);
    }
    Outcome {
        pass: car.exact() && anomaly_ok && stable,
        detail: format!(
            "{} CAR relations, {} violations; |central| = {}; cutoff-stable {stable}",
            car.relations,
            car.violations + car.vacuum_violations,
            values.join(",")
        ),
    }
}

fn c8_implementer() -> Outcome {
    let space = PolarizedSpace::with_dim(8).unwrap();
    let gens = CarGenerators::new(&space).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let h = 1e-3;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let x = random_antihermitian(8, &mut rng);
        let y = random_antihermitian(8, &mut rng);
        let phi = |t: f64, s: f64| phase_two_cocycle(&gens, &x.map(|z| z * t).exp(), &y.map(|z| z * s).exp()).unwrap();
        let fd = (phi(h, h) - phi(h, -h) - phi(-h, h) + phi(-h, -h)) / (4.0 * h * h);
        let expect = schwinger_cocycle(&space, &x, &y).unwrap() * 0.5;
        worst = worst.max((fd - expect).norm());
    }
    Outcome {
        pass: worst < 1e-4,
        detail: format!("max |fd - c/2| = {worst:.2e} over 10 pairs"),
    }
}

fn c9_obstruction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut failures = Vec::new();
    let mut classes = Vec::new();
    for inst in builtin_instances() {
        let lift = inst.default_lift(&inst.sigma().unwrap());
        let alpha = obstruction_class(&inst, &lift).unwrap();
        if pentagon_violations(&inst.g, &alpha) != 0 {
            failures.push(format!("{} pentagon", inst.name));
        }
        let split = split_instance(&inst).unwrap();
        if !obstruction_class(&split, &split.default_lift(&split.sigma().unwrap())).unwrap().is_zero() {
            failures.push(format!("{} split", inst.name));
        }
        for _ in 0..5 {
            let k = inst.g.order();
            let mut b = GroupCochain::zero(2, k, &inst.a_orders);
            for g in 1..k {
                for h in 1..k {
                    let i = b.index(&[g, h]);
                    b.values[i] = inst.a_orders.iter().map(|&n| rng.random_range(0..n)).collect();
                }
            }
            let shifted = obstruction_class(&inst, &inst.shift_lift(&lift, &b)).unwrap();
            if shifted.sub(&alpha) != coboundary(&inst.g, &b) {
                failures.push(format!("{} lift change", inst.name));
            }
        }
        classes.push(format!("{}:{}", inst.name, if is_coboundary(&inst.g, &alpha) { "0" } else { "nonzero" }));
    }
    let h2 = h3_bar_resolution(&FiniteGroup::cyclic(2), &[2]).unwrap();
    let h3 = h3_bar_resolution(&FiniteGroup::cyclic(3), &[3]).unwrap();
    let orders_ok = h2.order == 2 && h3.order == 3 && h2.composite_vanishes && h3.composite_vanishes;
    Outcome {
        pass: failures.is_empty() && orders_ok,
        detail: format!(
            "classes {}; |H3(Z2,Z2)| = {}, |H3(Z3,Z3)| = {}; failures {:?}",
            classes.join(" "),
            h2.order,
            h3.order,
            failures
        ),
    }
}

fn c10_cech() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let data = random_cech_data(4, 3, &mut rng);
    let r = cech_lift(&data).unwrap();
    let phases: Vec<f64> = (0..16).map(|_| rng.random_range(-3.0..3.0)).collect();
    let mu = |a: usize, b: usize| Complex64::from_polar(1.0, phases[a * 4 + b]);
    let full = |a: usize, b: usize| match a.cmp(&b) {
        std::cmp::Ordering::Less => mu(a, b),
        std::cmp::Ordering::Greater => mu(b, a).inv(),
        std::cmp::Ordering::Equal => Complex64::new(1.0, 0.0),
    };
    let r2 = cech_lift_with_gauge(&data, &mu).unwrap();
    let mut worst = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let ratio = r2.get(4, a, b, c) / r.get(4, a, b, c);
                worst = worst.max((ratio - full(a, b) * full(b, c) * full(c, a)).norm());
            }
        }
    }
    Outcome {
        pass: r.tetrahedron_defect < 1e-12 && r2.tetrahedron_defect < 1e-12 && worst < 1e-12,
        detail: format!("tetrahedron {:.1e}, gauge coboundary {worst:.1e}", r.tetrahedron_defect),
    }
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "affine cocycle closed form and Jacobi", secs(10), c1_affine),
        criterion(2, "path coboundary theorem", secs(30), c2_path),
        criterion(3, "three-torus cocycle consistency", secs(120), c3_mf),
        criterion(4, "boundary coboundary", secs(120), c4_boundary),
        criterion(5, "WZW integrality", secs(120), c5_wzw),
        criterion(6, "pentagon identity", secs(300), c6_pentagon),
        criterion(7, "CAR and anomaly", secs(60), c7_car),
        criterion(8, "implementer second derivative", secs(120), c8_implementer),
        criterion(9, "obstruction engine", secs(60), c9_obstruction),
        criterion(10, "Cech lifting", secs(10), c10_cech),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, p)| !**p).map(|(i, _)| i + 1).collect();
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
