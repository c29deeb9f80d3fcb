mod common;

use common::{basis, density, hermitian, rng, state, unbiased_pair, TOL};
use proptest::prelude::*;
use qstat_core::measurement::{
    deterministic_value, error_contribution, expectation_from_deterministic, joint_quasiprobability,
    optimal_assignment, ozawa_error, EstimateAssignment, EstimateMode, Povm,
};
use qstat_core::{c64, expectation, Operator};

fn labels(dim: usize) -> Vec<String> {
    (0..dim).map(|k| k.to_string()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn complex_optimum_has_zero_error(seed in any::<u64>(), dim in 2usize..=6) {
        let mut r = rng(seed);
        let a = hermitian(&mut r, dim);
        let m_basis = basis(&mut r, dim);
        let psi = state(&mut r, dim);
        let names = labels(dim);
        let povm = Povm::projective(&m_basis, Some(&names), &TOL).unwrap();
        let est = optimal_assignment(&a, &m_basis, &names, &psi, EstimateMode::Complex, &TOL).unwrap();
        prop_assert!(ozawa_error(&a, &povm, &est, &psi).unwrap() <= 1e-12);
        for (m, (_, v)) in m_basis.vectors().iter().zip(est.values()) {
            prop_assert!(error_contribution(&a, m, v, &psi).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn real_optimum_leaves_imaginary_residual(seed in any::<u64>(), dim in 2usize..=5, shift in -0.5..0.5f64) {
        let mut r = rng(seed);
        let a = hermitian(&mut r, dim);
        let m_basis = basis(&mut r, dim);
        let psi = state(&mut r, dim);
        let names = labels(dim);
        let povm = Povm::projective(&m_basis, Some(&names), &TOL).unwrap();
        let est = optimal_assignment(&a, &m_basis, &names, &psi, EstimateMode::RealRestricted, &TOL).unwrap();
        let eps = ozawa_error(&a, &povm, &est, &psi).unwrap();
        let residual: f64 = m_basis
            .vectors()
            .iter()
            .map(|m| {
                let w = deterministic_value(&a, &psi, m, &TOL).unwrap();
                w.im * w.im * m.inner(&psi).unwrap().norm_sqr()
            })
            .sum();
        prop_assert!((eps - residual).abs() < 1e-10);
        let moved = EstimateAssignment::real(est.values().enumerate().map(|(k, (l, v))| {
            (l.to_string(), if k == 0 { v.re + shift } else { v.re })
        }));
        prop_assert!(ozawa_error(&a, &povm, &moved, &psi).unwrap() >= eps - 1e-12);
    }

    #[test]
    fn deterministic_values_average_to_expectation(seed in any::<u64>(), dim in 2usize..=6) {
        let mut r = rng(seed);
        let a = hermitian(&mut r, dim);
        let rho = density(&mut r, dim);
        let (bp, bm) = unbiased_pair(&mut r, dim);
        let value = expectation_from_deterministic(&a, &rho, &bp, &bm, &TOL).unwrap();
        prop_assert!((value - expectation(&a, &rho).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn joint_quasiprobability_marginal(seed in any::<u64>(), dim in 2usize..=6) {
        // summing over the a-basis recovers the POVM probability
        let mut r = rng(seed);
        let m = state(&mut r, dim);
        let element = Operator::outer(&m, &m).unwrap();
        let psi = state(&mut r, dim);
        let a_basis = basis(&mut r, dim);
        let total: f64 = a_basis.vectors().iter().map(|a| joint_quasiprobability(&element, a, &psi).unwrap()).sum();
        prop_assert!((total - m.inner(&psi).unwrap().norm_sqr()).abs() < 1e-12);
    }
}

#[test]
fn zero_estimates_measure_the_second_moment() {
    let mut r = rng(7);
    let a = hermitian(&mut r, 3);
    let psi = state(&mut r, 3);
    let povm = Povm::projective(&basis(&mut r, 3), None, &TOL).unwrap();
    let est = EstimateAssignment::complex((0..3).map(|k| (k.to_string(), c64(0.0, 0.0))));
    let a2 = (&a * &a).matrix_element(&psi, &psi).unwrap().re;
    assert!((ozawa_error(&a, &povm, &est, &psi).unwrap() - a2).abs() < 1e-12);
}

#[test]
fn joint_quasiprobability_goes_negative_for_some_qubit_angle() {
    let zero = qstat_core::StateVector::from_real(&[1.0, 0.0]).unwrap();
    let minus = qstat_core::StateVector::from_real(&[1.0, -1.0]).unwrap();
    let value_at = |theta: f64| {
        let phi = qstat_core::StateVector::from_real(&[theta.cos(), theta.sin()]).unwrap();
        joint_quasiprobability(&Operator::outer(&phi, &phi).unwrap(), &minus, &zero).unwrap()
    };
    let (theta_min, min) = (0..=1000)
        .map(|k| core::f64::consts::PI * k as f64 / 1000.0)
        .map(|t| (t, value_at(t)))
        .fold((0.0, f64::MAX), |best, x| if x.1 < best.1 { x } else { best });
    assert!(min < -0.1, "most negative value {min} at {theta_min}");

    // the value is cos(t)(cos(t) - sin(t)) / 2, negative only for pi/4 < t < pi/2
    let eighth = core::f64::consts::PI / 8.0;
    assert!(value_at(eighth) > 0.0);
    let three_eighths = value_at(3.0 * eighth);
    assert!((three_eighths - (3.0 * eighth).cos() * ((3.0 * eighth).cos() - (3.0 * eighth).sin()) / 2.0).abs() < 1e-15);
    assert!(three_eighths < -0.1);
}
