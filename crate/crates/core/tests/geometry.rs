mod common;

use common::{c, Lcg};
use havqds_core::variational::{
    derivative_states, geometry, imaginary_time_step, mclachlan_distance, realtime_geometry, solve_regularized, Ansatz,
};
use havqds_core::{Complex64, PauliString, StateVector, WeightedPauliSum};
use nalgebra::{DMatrix, DVector};

const EPS: f64 = 1e-5;

fn random_hamiltonian(rng: &mut Lcg, n: usize) -> WeightedPauliSum {
    let terms: Vec<(f64, PauliString)> = (0..2 + rng.below(5)).map(|_| (rng.range(-1.0, 1.0), rng.non_identity_pauli(n))).collect();
    WeightedPauliSum::new(n, terms).unwrap()
}

fn random_ansatz(rng: &mut Lcg, n: usize, size: usize) -> Ansatz {
    let mut ansatz = Ansatz::new(rng.state(n));
    for _ in 0..size {
        ansatz.push(rng.non_identity_pauli(n), rng.range(-1.5, 1.5)).unwrap();
    }
    ansatz
}

fn shifted(ansatz: &Ansatz, mu: usize, by: f64) -> Vec<Complex64> {
    let mut angles = ansatz.angles().to_vec();
    angles[mu] += by;
    let mut moved = ansatz.clone();
    moved.set_angles(&angles).unwrap();
    moved.prepare().into_amplitudes()
}

/// Central-difference tangent vectors.
fn fd_derivatives(ansatz: &Ansatz) -> Vec<Vec<Complex64>> {
    (0..ansatz.len())
        .map(|mu| {
            let (up, down) = (shifted(ansatz, mu, EPS), shifted(ansatz, mu, -EPS));
            up.iter().zip(&down).map(|(a, b)| (a - b) / (2.0 * EPS)).collect()
        })
        .collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[test]
fn geometry_matches_finite_differences() {
    let mut rng = Lcg(11);
    for case in 0..60 {
        let n = 2 + case % 3;
        let size = 2 + rng.below(3);
        let ansatz = random_ansatz(&mut rng, n, size);
        let h = random_hamiltonian(&mut rng, n);
        let snap = geometry(&ansatz, &h).unwrap();
        let psi = ansatz.prepare().into_amplitudes();
        let h_psi = h.apply(&psi);
        let energy = dot(&psi, &h_psi).re;
        let d = fd_derivatives(&ansatz);
        for mu in 0..size {
            let o_mu = dot(&psi, &d[mu]);
            let f_mu = dot(&d[mu], &h_psi);
            assert!((snap.c[mu] - 2.0 * (f_mu + o_mu * energy).im).abs() < 1e-6, "case {case}");
            assert!((snap.c_r[mu] - f_mu.re).abs() < 1e-6);
            for nu in 0..size {
                let o_nu = dot(&psi, &d[nu]);
                let g = dot(&d[mu], &d[nu]);
                assert!((snap.a[(mu, nu)] - 2.0 * (g + o_mu.conj() * o_nu.conj()).re).abs() < 1e-6);
                assert!((snap.a_r[(mu, nu)] - g.re).abs() < 1e-6);
            }
            // Natural-gradient reading: C_R is half the energy gradient.
            let e_up = h.expectation(&StateVector::from_amplitudes(shifted(&ansatz, mu, EPS)).unwrap()).unwrap();
            let e_down = h.expectation(&StateVector::from_amplitudes(shifted(&ansatz, mu, -EPS)).unwrap()).unwrap();
            assert!((snap.c_r[mu] - 0.25 * (e_up - e_down) / EPS).abs() < 1e-6);
        }
        assert_eq!(snap.a, snap.a.transpose());
        assert_eq!(snap.a_r, snap.a_r.transpose());
        assert!(snap.a_r.clone().symmetric_eigenvalues().min() > -1e-10);
        for (exact, fd) in derivative_states(&ansatz).iter().zip(&d) {
            assert!(exact.amplitudes().iter().zip(fd).all(|(a, b)| (a - b).norm() < 1e-6));
        }
    }
}

#[test]
fn rabi_system_is_exact() {
    let mut ansatz = Ansatz::new(StateVector::zero(1).unwrap());
    ansatz.push("X".parse().unwrap(), 0.0).unwrap();
    let h = WeightedPauliSum::new(1, [(1.0, "X".parse().unwrap())]).unwrap();
    let (a, cv) = realtime_geometry(&ansatz, &h).unwrap();
    assert!((a[(0, 0)] - 2.0).abs() < 1e-12);
    assert!((cv[0] - 2.0).abs() < 1e-12);
    let theta_dot = solve_regularized(&a, &cv, 1e-6).unwrap().x;
    assert!((theta_dot[0] - 1.0).abs() < 1e-6);
    // A dense solve of the unregularized system gives the exact flow.
    assert!((a.clone().lu().solve(&cv).unwrap()[0] - 1.0).abs() < 1e-12);
    let variance = h.variance(&ansatz.prepare()).unwrap();
    assert!(mclachlan_distance(&a, &cv, variance, &DVector::from_element(1, 1.0)).unwrap() < 1e-12);
}

#[test]
fn phase_products_enter_with_a_plus_sign() {
    // A Z rotation on |+> followed by an X rotation gives <psi|d psi> != 0.
    let mut ansatz = Ansatz::new(StateVector::plus(1).unwrap());
    ansatz.push("Z".parse().unwrap(), 0.3).unwrap();
    ansatz.push("X".parse().unwrap(), 0.5).unwrap();
    let h = WeightedPauliSum::new(1, [(0.7, "Z".parse().unwrap()), (0.2, "Y".parse().unwrap())]).unwrap();
    let snap = geometry(&ansatz, &h).unwrap();
    let psi = ansatz.prepare().into_amplitudes();
    let d: Vec<Vec<Complex64>> = derivative_states(&ansatz).into_iter().map(|s| s.into_amplitudes()).collect();
    let o: Vec<Complex64> = d.iter().map(|v| dot(&psi, v)).collect();
    assert!(o[1].norm() > 0.1);
    let without = DMatrix::from_fn(2, 2, |i, j| 2.0 * dot(&d[i], &d[j]).re);
    let plus = DMatrix::from_fn(2, 2, |i, j| 2.0 * (dot(&d[i], &d[j]) + o[i].conj() * o[j].conj()).re);
    let minus = DMatrix::from_fn(2, 2, |i, j| 2.0 * (dot(&d[i], &d[j]) - o[i].conj() * o[j]).re);
    assert!((&snap.a - &plus).norm() < 1e-12);
    assert!((&snap.a - &minus).norm() < 1e-12);
    assert!((&snap.a - &without).norm() > 1e-3);
}

#[test]
fn distance_is_minimal_at_the_normal_equations() {
    let mut rng = Lcg(5);
    let ansatz = random_ansatz(&mut rng, 3, 4);
    let h = random_hamiltonian(&mut rng, 3);
    let snap = geometry(&ansatz, &h).unwrap();
    let best = snap.a.clone().pseudo_inverse(1e-12).unwrap() * &snap.c;
    let d_best = mclachlan_distance(&snap.a, &snap.c, snap.variance, &best).unwrap();
    for _ in 0..100 {
        let kick = DVector::from_fn(4, |_, _| rng.range(-0.1, 0.1));
        let d = mclachlan_distance(&snap.a, &snap.c, snap.variance, &(&best + kick)).unwrap();
        assert!(d >= d_best - 1e-12);
    }
}

#[test]
fn eigenstate_has_zero_distance() {
    let h = havqds_core::models::driver_hamiltonian(3).unwrap();
    let ansatz = Ansatz::plus(3).unwrap();
    let snap = geometry(&ansatz, &h).unwrap();
    assert_eq!(snap.a.len(), 0);
    assert!(snap.variance.abs() < 1e-14);
    assert!(mclachlan_distance(&snap.a, &snap.c, snap.variance, &DVector::zeros(0)).unwrap() < 1e-12);
}

#[test]
fn solver_closed_forms() {
    let lambda = 1e-6;
    let b = DVector::from_row_slice(&[0.3, -1.2, 2.0]);
    let x = solve_regularized(&DMatrix::identity(3, 3), &b, lambda).unwrap().x;
    assert!((&x - &b).norm() <= 1e-6 * b.norm());
    let singular = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let x = solve_regularized(&singular, &DVector::from_row_slice(&[1.0, 0.0]), lambda).unwrap().x;
    assert!((x[0] - 1.0 / (1.0 + lambda)).abs() < 1e-15 && x[1] == 0.0);
    let well = DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 2.0]);
    let rhs = DVector::from_row_slice(&[1.0, 1.0]);
    let tiny = solve_regularized(&well, &rhs, 1e-12).unwrap().x;
    assert!((tiny - well.lu().solve(&rhs).unwrap()).norm() < 1e-8);
}

#[test]
fn imaginary_step_on_single_qubit() {
    let mut ansatz = Ansatz::new(StateVector::zero(1).unwrap());
    ansatz.push("Y".parse().unwrap(), std::f64::consts::FRAC_PI_4).unwrap();
    let z = WeightedPauliSum::new(1, [(1.0, "Z".parse().unwrap())]).unwrap();
    imaginary_time_step(&mut ansatz, &z, 1e-6, 0.05).unwrap();
    assert!((ansatz.angles()[0] - (std::f64::consts::FRAC_PI_4 + 0.05)).abs() < 1e-6);
}

/// Energy never rises by more than 1e-8 over one imaginary step on small
/// random systems whose metric `A_R` is nonsingular.
#[test]
fn imaginary_steps_descend_on_small_systems() {
    let mut rng = Lcg(2024);
    let mut worst = f64::NEG_INFINITY;
    let mut redundant = 0;
    for _ in 0..1000 {
        let n = 1 + rng.below(3);
        let size = 1 + rng.below(4);
        let mut ansatz = random_ansatz(&mut rng, n, size);
        let h = random_hamiltonian(&mut rng, n);
        if geometry(&ansatz, &h).unwrap().a_r.symmetric_eigenvalues().min() < 1e-8 {
            redundant += 1;
            continue;
        }
        let step = imaginary_time_step(&mut ansatz, &h, 1e-6, 0.05).unwrap();
        let after = h.expectation(&ansatz.prepare()).unwrap();
        worst = worst.max(after - step.energy_before);
    }
    assert!(redundant < 300, "only {} systems were nonsingular", 1000 - redundant);
    assert!(worst <= 1e-8, "largest energy increase {worst:e}");
}

/// Four rotations on one qubit over-parameterize the state; the regularized
/// Euler step then moves along a near-null direction of `A_R` far enough for
/// second-order terms to raise the energy.
#[test]
fn redundant_ansatz_can_overshoot() {
    let mut rng = Lcg(2024);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let n = 1 + rng.below(3);
        let size = 1 + rng.below(4);
        let mut ansatz = random_ansatz(&mut rng, n, size);
        let h = random_hamiltonian(&mut rng, n);
        let step = imaginary_time_step(&mut ansatz, &h, 1e-6, 0.05).unwrap();
        worst = worst.max(h.expectation(&ansatz.prepare()).unwrap() - step.energy_before);
    }
    assert!(worst > 1e-4);
}

#[test]
fn expansion_keeps_the_state() {
    let inst = havqds_core::sample_sk(4, 9).unwrap();
    let h = havqds_core::build_h_ad(&inst, 0.4).unwrap();
    let mut rng = Lcg(3);
    let mut ansatz = Ansatz::plus(4).unwrap();
    for _ in 0..3 {
        ansatz.push(rng.non_identity_pauli(4), rng.range(-1.0, 1.0)).unwrap();
    }
    let before = ansatz.prepare();
    let outcome = havqds_core::variational::adaptive_expand(&mut ansatz, &h, &havqds_core::build_pool(4).unwrap(), &Default::default()).unwrap();
    assert!(!outcome.added.is_empty());
    assert_eq!(ansatz.prepare(), before);
    assert_eq!(c(before.fidelity(&ansatz.prepare()).unwrap(), 0.0).re, before.fidelity(&before).unwrap());
}
