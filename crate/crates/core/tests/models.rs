mod common;

use common::{c, sum_matrix, Lcg};
use havqds_core::models::{driver_hamiltonian, problem_hamiltonian, schedule_s, schedule_sdot};
use havqds_core::{build_h_ad, build_h_cd1, build_pool, cd_alpha1, sample_sk, SkInstance};

fn random_instance(rng: &mut Lcg, n: usize, with_fields: bool) -> SkInstance {
    let couplings = (0..n * (n - 1) / 2).map(|_| rng.range(-1.0, 1.0)).collect();
    let fields = (0..n)
        .map(|_| if with_fields { rng.range(-1.0, 1.0) } else { 0.0 })
        .collect();
    SkInstance::new(n, couplings, fields, 0).unwrap()
}

/// The first-order CD term equals `i s' alpha_1 [H_AD, d_s H_AD]` as dense matrices.
#[test]
fn cd_term_is_the_nested_commutator() {
    let mut rng = Lcg(17);
    for case in 0..40 {
        let n = 2 + case % 3;
        let inst = random_instance(&mut rng, n, case % 2 == 0);
        let total = rng.range(0.5, 10.0);
        let t = rng.range(0.0, total);
        let s = schedule_s(t, total).unwrap();
        let h = sum_matrix(&build_h_ad(&inst, s).unwrap());
        let ds = sum_matrix(&problem_hamiltonian(&inst).unwrap()) - sum_matrix(&driver_hamiltonian(n).unwrap());
        let factor = c(0.0, schedule_sdot(t, total).unwrap() * cd_alpha1(&inst, s));
        let expected = (&h * &ds - &ds * &h) * factor;
        let cd = sum_matrix(&build_h_cd1(&inst, t, total).unwrap());
        let err = (cd - expected).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "case {case}: {err:e}");
    }
}

#[test]
fn adiabatic_path_interpolates_linearly() {
    let inst = sample_sk(4, 2).unwrap();
    let h0 = sum_matrix(&build_h_ad(&inst, 0.0).unwrap());
    let h1 = sum_matrix(&build_h_ad(&inst, 1.0).unwrap());
    for s in [0.1, 0.5, 0.77] {
        let mid = sum_matrix(&build_h_ad(&inst, s).unwrap());
        let lin = &h0 * c(1.0 - s, 0.0) + &h1 * c(s, 0.0);
        assert!((mid - lin).iter().all(|v| v.norm() < 1e-14));
    }
}

/// Every CD string on the path appears in the pool, so expansion can reach it.
#[test]
fn pool_contains_the_cd_strings() {
    let mut rng = Lcg(5);
    for n in 2..=6 {
        let inst = random_instance(&mut rng, n, true);
        let pool = build_pool(n).unwrap();
        let cd = build_h_cd1(&inst, 0.3, 1.0).unwrap();
        for (_, p) in cd.terms() {
            assert!(pool.operators().contains(p), "{}", p.label());
        }
        assert_eq!(pool.len(), 2 * n + 3 * n * (n - 1) / 2);
    }
}
