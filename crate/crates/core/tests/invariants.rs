use std::sync::Arc;

use cocyclelab::cocycles::{affine_cocycle, affine_jacobi_defect, path_coboundary_defect};
use cocyclelab::extension::{
    builtin_instances, cech_lift, cech_lift_with_gauge, coboundary, obstruction_class, parse_instances,
    random_cech_data, GroupCochain,
};
use cocyclelab::field::{random_field, random_path, Domain, RandomFieldSpec};
use cocyclelab::fock::{random_antihermitian, schwinger_cocycle, PolarizedSpace};
use cocyclelab::lie::{su2, su3};
use cocyclelab::suite::{emit_report, parse_report, run_suite, Format, SuiteConfig, SuiteName};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn affine_antisymmetric_and_jacobi(seed in any::<u64>(), three in any::<bool>()) {
        let alg = Arc::new(if three { su3() } else { su2() });
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f: Vec<_> = (0..3).map(|_| random_field(Domain::T1, 0, alg.clone(), RandomFieldSpec::default(), &mut rng)).collect();
        let xy = affine_cocycle(&f[0], &f[1]).unwrap();
        let yx = affine_cocycle(&f[1], &f[0]).unwrap();
        prop_assert!((xy + yx).is_zero());
        prop_assert!(affine_jacobi_defect(&f[0], &f[1], &f[2]).unwrap().is_zero());
    }

    #[test]
    fn path_coboundary_exact(seed in any::<u64>(), degree in 1u32..5) {
        let alg = Arc::new(su2());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f: Vec<_> = (0..3).map(|_| random_path(alg.clone(), degree, &mut rng)).collect();
        prop_assert!(path_coboundary_defect(&f[0], &f[1], &f[2]).unwrap().is_zero());
    }

    #[test]
    fn lift_change_shifts_by_coboundary(which in 0usize..4, seed in any::<u64>()) {
        let inst = &builtin_instances()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lift = inst.default_lift(&inst.sigma().unwrap());
        let alpha = obstruction_class(inst, &lift).unwrap();
        let k = inst.g.order();
        let mut b = GroupCochain::zero(2, k, &inst.a_orders);
        for g in 1..k {
            for h in 1..k {
                let i = b.index(&[g, h]);
                b.values[i] = inst.a_orders.iter().map(|&n| rng.random_range(0..n)).collect();
            }
        }
        let shifted = obstruction_class(inst, &inst.shift_lift(&lift, &b)).unwrap();
        prop_assert_eq!(shifted.sub(&alpha), coboundary(&inst.g, &b));
    }

    #[test]
    fn schwinger_antisymmetric(seed in any::<u64>(), d in 2usize..8) {
        let space = PolarizedSpace::with_dim(2 * d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_antihermitian(2 * d, &mut rng);
        let y = random_antihermitian(2 * d, &mut rng);
        let s = schwinger_cocycle(&space, &x, &y).unwrap() + schwinger_cocycle(&space, &y, &x).unwrap();
        prop_assert!(s.norm() < 1e-10);
    }

    #[test]
    fn cech_tetrahedron_and_gauge(seed in any::<u64>(), size in 2usize..5, dim in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = random_cech_data(size, dim, &mut rng);
        let r = cech_lift(&data).unwrap();
        prop_assert!(r.tetrahedron_defect < 1e-12);
        let phase: f64 = rng.random_range(-3.0..3.0);
        let r2 = cech_lift_with_gauge(&data, &|a, b| Complex64::from_polar(1.0, phase * (a + 2 * b) as f64)).unwrap();
        prop_assert!(r2.tetrahedron_defect < 1e-12);
    }
}

#[test]
fn instance_json_round_trip() {
    let text = serde_json::to_string(&builtin_instances()).unwrap();
    let back = parse_instances(&text).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn suite_reports_are_deterministic() {
    for suite in [SuiteName::Obstruction, SuiteName::ToyChain, SuiteName::Implementer] {
        let config = SuiteConfig { suite, seed: 11, ..SuiteConfig::default() };
        let a = emit_report(&run_suite(&config).unwrap(), Format::Json).unwrap();
        let b = emit_report(&run_suite(&config).unwrap(), Format::Json).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_report(&a).unwrap().summary.failed, 0);
    }
}
