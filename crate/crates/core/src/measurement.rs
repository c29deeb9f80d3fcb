//! POVM statistics, the Ozawa error functional and deterministic values.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::float;
use crate::hilbert::{check_dims, inner, Basis, DensityOperator, Operator, StateVector};
use crate::{Error, Result, Tolerances};

/// One labelled POVM element.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmOutcome {
    pub label: String,
    pub element: Operator,
}

impl PovmOutcome {
    pub fn new(label: impl Into<String>, element: Operator) -> Self {
        Self {
            label: label.into(),
            element,
        }
    }
}

/// Validated positive operator-valued measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    outcomes: Vec<PovmOutcome>,
}

impl Povm {
    /// Validates the outcomes and rejects them if any check fails.
    pub fn new(outcomes: Vec<PovmOutcome>, tol: &Tolerances) -> Result<Self> {
        let report = validate_povm(&outcomes, tol)?;
        if !report.passed {
            return Err(Error::InvalidPovm(format!(
                "completeness deviation {:e}, positivity deviation {:e}, hermiticity deviation {:e}",
                report.completeness_deviation, report.positivity_deviation, report.hermiticity_deviation
            )));
        }
        Ok(Self { outcomes })
    }

    /// Projective measurement onto `basis`; labels default to the indices.
    pub fn projective(basis: &Basis, labels: Option<&[String]>, tol: &Tolerances) -> Result<Self> {
        if let Some(labels) = labels {
            check_dims(basis.dim(), labels.len())?;
        }
        let outcomes = basis
            .vectors()
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let label = labels.map_or_else(|| format!("{k}"), |l| l[k].clone());
                Ok(PovmOutcome::new(label, Operator::outer(v, v)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(outcomes, tol)
    }

    #[inline]
    pub fn outcomes(&self) -> &[PovmOutcome] {
        &self.outcomes
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.outcomes[0].element.dim()
    }
}

/// Outcome of [`validate_povm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PovmReport {
    pub passed: bool,
    /// Max-entry norm of `sum_m E_m - I`.
    pub completeness_deviation: f64,
    /// Largest negative eigenvalue magnitude over all elements.
    pub positivity_deviation: f64,
    pub hermiticity_deviation: f64,
}

pub fn validate_povm(outcomes: &[PovmOutcome], tol: &Tolerances) -> Result<PovmReport> {
    let first = outcomes.first().ok_or(Error::EmptyPovm)?;
    let d = first.element.dim();
    let mut sum = Operator::zeros(d)?;
    let mut positivity_deviation: f64 = 0.0;
    let mut hermiticity_deviation: f64 = 0.0;
    let mut hermitian = true;
    for outcome in outcomes {
        check_dims(d, outcome.element.dim())?;
        sum = sum.try_add(&outcome.element)?;
        hermiticity_deviation = hermiticity_deviation.max(outcome.element.hermiticity_deviation());
        hermitian &= outcome.element.is_hermitian(tol);
        let min = outcome.element.hermitian_eigenvalues()[0];
        positivity_deviation = positivity_deviation.max(-min);
    }
    let completeness_deviation = sum.max_abs_diff(&Operator::identity(d)?)?;
    Ok(PovmReport {
        passed: hermitian && positivity_deviation <= tol.psd && completeness_deviation <= tol.norm,
        completeness_deviation,
        positivity_deviation,
        hermiticity_deviation,
    })
}

/// `<psi|E_m|psi>`. Values within `tol.norm` outside `[0, 1]` are clamped.
pub fn povm_probability(element: &Operator, psi: &StateVector, tol: &Tolerances) -> Result<f64> {
    element.require_hermitian(tol)?;
    let min_eigenvalue = element.hermitian_eigenvalues()[0];
    if min_eigenvalue < -tol.psd {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    let p = element.matrix_element(psi, psi)?.re;
    if p < -tol.norm || p > 1.0 + tol.norm {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Whether estimates may carry an imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMode {
    RealRestricted,
    Complex,
}

/// Per-outcome estimates of the target observable, keyed by outcome label.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateAssignment {
    values: BTreeMap<String, Complex64>,
    mode: EstimateMode,
}

impl EstimateAssignment {
    pub fn real<S: Into<String>>(values: impl IntoIterator<Item = (S, f64)>) -> Self {
        Self {
            values: values
                .into_iter()
                .map(|(k, v)| (k.into(), Complex64::new(v, 0.0)))
                .collect(),
            mode: EstimateMode::RealRestricted,
        }
    }

    pub fn complex<S: Into<String>>(values: impl IntoIterator<Item = (S, Complex64)>) -> Self {
        Self {
            values: values.into_iter().map(|(k, v)| (k.into(), v)).collect(),
            mode: EstimateMode::Complex,
        }
    }

    #[inline]
    pub fn mode(&self) -> EstimateMode {
        self.mode
    }

    pub fn get(&self, label: &str) -> Option<Complex64> {
        self.values.get(label).copied()
    }

    pub fn values(&self) -> impl Iterator<Item = (&str, Complex64)> {
        self.values.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

/// `eps^2(A) = sum_m <psi|(A_m - A)† E_m (A_m - A)|psi>`.
///
/// The adjoint on the left factor keeps the functional real and
/// non-negative for complex estimates; for real estimates it is the
/// original expression.
pub fn ozawa_error(a_op: &Operator, povm: &Povm, est: &EstimateAssignment, psi: &StateVector) -> Result<f64> {
    check_dims(a_op.dim(), psi.dim())?;
    check_dims(a_op.dim(), povm.dim())?;
    let a_psi = a_op.apply(psi.amplitudes())?;
    let mut total = 0.0;
    for outcome in povm.outcomes() {
        let estimate = est
            .get(&outcome.label)
            .ok_or_else(|| Error::MissingEstimate(outcome.label.clone()))?;
        let residual: Vec<Complex64> = psi
            .amplitudes()
            .iter()
            .zip(&a_psi)
            .map(|(&p, &ap)| estimate * p - ap)
            .collect();
        let image = outcome.element.apply(&residual)?;
        total += inner(&residual, &image).re;
    }
    Ok(total)
}

/// `eps(A, m) = <m|(A - A_m)|psi> = (A(psi, m) - A_m) <m|psi>`.
pub fn error_contribution(
    a_op: &Operator,
    m: &StateVector,
    estimate: Complex64,
    psi: &StateVector,
) -> Result<Complex64> {
    check_dims(a_op.dim(), m.dim())?;
    Ok(a_op.matrix_element(m, psi)? - estimate * m.inner(psi)?)
}

/// `P(m, a|psi) = Re(<psi|E_m|a><a|psi>)`; may be negative.
pub fn joint_quasiprobability(element: &Operator, a: &StateVector, psi: &StateVector) -> Result<f64> {
    check_dims(element.dim(), a.dim())?;
    Ok((element.matrix_element(psi, a)? * a.inner(psi)?).re)
}

/// Weak value `A(psi, m) = <m|A|psi> / <m|psi>`.
pub fn deterministic_value(a_op: &Operator, psi: &StateVector, m: &StateVector, tol: &Tolerances) -> Result<Complex64> {
    check_dims(a_op.dim(), psi.dim())?;
    let ov = m.inner(psi)?;
    let magnitude = float::norm(ov);
    if magnitude <= tol.overlap {
        return Err(Error::OrthogonalConditions { magnitude });
    }
    Ok(a_op.matrix_element(m, psi)? / ov)
}

/// Error-minimizing estimate for outcome `m`: the complex weak value, or its
/// real part when estimates are restricted to real numbers.
pub fn optimal_estimate(
    a_op: &Operator,
    m: &StateVector,
    psi: &StateVector,
    mode: EstimateMode,
    tol: &Tolerances,
) -> Result<Complex64> {
    let value = deterministic_value(a_op, psi, m, tol)?;
    Ok(match mode {
        EstimateMode::Complex => value,
        EstimateMode::RealRestricted => Complex64::new(value.re, 0.0),
    })
}

/// Optimal estimates for every outcome of a projective measurement onto `basis`.
pub fn optimal_assignment(
    a_op: &Operator,
    basis: &Basis,
    labels: &[String],
    psi: &StateVector,
    mode: EstimateMode,
    tol: &Tolerances,
) -> Result<EstimateAssignment> {
    check_dims(basis.dim(), labels.len())?;
    let mut values = BTreeMap::new();
    for (label, m) in labels.iter().zip(basis.vectors()) {
        values.insert(label.clone(), optimal_estimate(a_op, m, psi, mode, tol)?);
    }
    Ok(EstimateAssignment { values, mode })
}

/// Eigenvalue of `op` for `state`, or an error if `state` is not an eigenvector.
pub fn eigenvalue_of(op: &Operator, state: &StateVector, tol: &Tolerances) -> Result<Complex64> {
    let image = op.apply(state.amplitudes())?;
    let value = inner(state.amplitudes(), &image);
    let residual = float::sqrt(
        image
            .iter()
            .zip(state.amplitudes())
            .map(|(&x, &s)| (x - value * s).norm_sqr())
            .sum(),
    );
    if residual > tol.orthonormal * op.max_abs().max(1.0) {
        return Err(Error::NotEigenstate { residual });
    }
    Ok(value)
}

/// `M_m + B_psi` for `A = M + B` with `|m>` an eigenstate of `M` and `|psi>`
/// an eigenstate of `B`; agrees with [`deterministic_value`] of `M + B`.
pub fn operator_sum_value(
    m_op: &Operator,
    b_op: &Operator,
    m: &StateVector,
    psi: &StateVector,
    tol: &Tolerances,
) -> Result<Complex64> {
    check_dims(m_op.dim(), b_op.dim())?;
    Ok(eigenvalue_of(m_op, m, tol)? + eigenvalue_of(b_op, psi, tol)?)
}

/// `<A> = sum_{m,psi} A(psi, m) rho(m, psi)` with `rho(m, psi) = <psi|rho|m><m|psi>`.
pub fn expectation_from_deterministic(
    a_op: &Operator,
    rho: &DensityOperator,
    basis_psi: &Basis,
    basis_m: &Basis,
    tol: &Tolerances,
) -> Result<Complex64> {
    let d = a_op.dim();
    check_dims(d, rho.dim())?;
    check_dims(d, basis_psi.dim())?;
    check_dims(d, basis_m.dim())?;
    let mut total = Complex64::new(0.0, 0.0);
    for (ip, psi) in basis_psi.vectors().iter().enumerate() {
        for (im, m) in basis_m.vectors().iter().enumerate() {
            let ov = m.inner(psi)?;
            let magnitude = float::norm(ov);
            if magnitude <= tol.overlap {
                return Err(Error::VanishingOverlap { a: ip, b: im, magnitude });
            }
            let value = a_op.matrix_element(m, psi)? / ov;
            let weight = rho.as_operator().matrix_element(psi, m)? * ov;
            total += value * weight;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use alloc::string::ToString;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    const TOL: Tolerances = Tolerances::DEFAULT;

    fn ket(re: &[f64]) -> StateVector {
        StateVector::from_real(re).unwrap()
    }

    fn sz() -> Operator {
        Operator::diagonal(&[1.0, -1.0]).unwrap()
    }

    fn sx() -> Operator {
        Operator::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap()
    }

    fn sx_basis() -> Basis {
        Basis::new(vec![ket(&[1.0, 1.0]), ket(&[1.0, -1.0])], &TOL).unwrap()
    }

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn povm_validation() {
        let basis = Basis::computational(3).unwrap();
        assert!(Povm::projective(&basis, None, &TOL).is_ok());

        let id = Operator::identity(2).unwrap();
        let unsharp = vec![
            PovmOutcome::new("a", id.scale_real(0.6)),
            PovmOutcome::new("b", id.scale_real(0.4)),
        ];
        assert!(validate_povm(&unsharp, &TOL).unwrap().passed);

        let incomplete = vec![
            PovmOutcome::new("0", Operator::diagonal(&[1.0, 0.0]).unwrap()),
            PovmOutcome::new("1", Operator::diagonal(&[0.0, 0.5]).unwrap()),
        ];
        let report = validate_povm(&incomplete, &TOL).unwrap();
        assert!(!report.passed);
        assert_abs_diff_eq!(report.completeness_deviation, 0.5, epsilon = 1e-15);
        assert!(matches!(Povm::new(incomplete, &TOL), Err(Error::InvalidPovm(_))));

        assert_eq!(validate_povm(&[], &TOL), Err(Error::EmptyPovm));
    }

    #[test]
    fn povm_probabilities() {
        let plus = ket(&[1.0, 1.0]);
        assert_abs_diff_eq!(povm_probability(&Operator::identity(2).unwrap(), &plus, &TOL).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            povm_probability(&Operator::diagonal(&[1.0, 0.0]).unwrap(), &plus, &TOL).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_eq!(povm_probability(&Operator::zeros(2).unwrap(), &plus, &TOL).unwrap(), 0.0);
        assert!(matches!(
            povm_probability(&sz(), &plus, &TOL),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn ideal_measurement_has_no_error() {
        let povm = Povm::projective(&Basis::computational(2).unwrap(), Some(&labels(&["up", "down"])), &TOL).unwrap();
        let est = EstimateAssignment::real([("up", 1.0), ("down", -1.0)]);
        let psi = StateVector::normalized(vec![c64(0.3, 0.1), c64(-0.2, 0.9)]).unwrap();
        assert_abs_diff_eq!(ozawa_error(&sz(), &povm, &est, &psi).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn sigma_z_measured_by_sigma_x_projectors_on_zero() {
        let povm = Povm::projective(&sx_basis(), Some(&labels(&["+", "-"])), &TOL).unwrap();
        let est = EstimateAssignment::real([("+", 1.0), ("-", 1.0)]);
        let zero = ket(&[1.0, 0.0]);
        assert_eq!(ozawa_error(&sz(), &povm, &est, &zero).unwrap(), 0.0);
        for m in sx_basis().vectors() {
            let value = optimal_estimate(&sz(), m, &zero, EstimateMode::RealRestricted, &TOL).unwrap();
            assert_abs_diff_eq!(value.re, 1.0, epsilon = 1e-15);
            let value = optimal_estimate(&sz(), m, &zero, EstimateMode::Complex, &TOL).unwrap();
            assert_abs_diff_eq!(value.re, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(value.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_estimates_give_unit_error() {
        let povm = Povm::projective(&Basis::computational(2).unwrap(), None, &TOL).unwrap();
        let est = EstimateAssignment::real([("0", 0.0), ("1", 0.0)]);
        let plus = ket(&[1.0, 1.0]);
        assert_abs_diff_eq!(ozawa_error(&sz(), &povm, &est, &plus).unwrap(), 1.0, epsilon = 1e-15);
        let partial = EstimateAssignment::real([("0", 0.0)]);
        assert_eq!(
            ozawa_error(&sz(), &povm, &partial, &plus),
            Err(Error::MissingEstimate("1".to_string()))
        );
    }

    #[test]
    fn error_contributions() {
        let plus = ket(&[1.0, 1.0]);
        let zero = ket(&[1.0, 0.0]);
        let value = error_contribution(&sz(), &zero, c64(0.0, 0.0), &plus).unwrap();
        assert_abs_diff_eq!(value.re, core::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        let weak = deterministic_value(&sz(), &plus, &zero, &TOL).unwrap();
        assert_abs_diff_eq!(error_contribution(&sz(), &zero, weak, &plus).unwrap().norm(), 0.0, epsilon = 1e-15);
        let one = ket(&[0.0, 1.0]);
        assert_eq!(error_contribution(&sz(), &one, c64(3.0, 0.0), &zero).unwrap(), c64(0.0, 0.0));
    }

    #[test]
    fn joint_quasiprobability_examples() {
        let psi = ket(&[0.6, 0.8]);
        let a = ket(&[1.0, 1.0]);
        let value = joint_quasiprobability(&Operator::identity(2).unwrap(), &a, &psi).unwrap();
        assert_abs_diff_eq!(value, a.inner(&psi).unwrap().norm_sqr(), epsilon = 1e-15);
        let minus = ket(&[1.0, -1.0]);
        let e_minus = Operator::outer(&minus, &minus).unwrap();
        let zero = ket(&[1.0, 0.0]);
        assert_abs_diff_eq!(joint_quasiprobability(&e_minus, &a, &zero).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn deterministic_value_examples() {
        let a_op = &sz() + &sx();
        let zero = ket(&[1.0, 0.0]);
        let plus = ket(&[1.0, 1.0]);
        let value = deterministic_value(&a_op, &zero, &plus, &TOL).unwrap();
        assert_abs_diff_eq!(value.re, 2.0, epsilon = 1e-15);
        let sum = operator_sum_value(&sx(), &sz(), &plus, &zero, &TOL).unwrap();
        assert_abs_diff_eq!((sum - value).norm(), 0.0, epsilon = 1e-12);

        for m in [ket(&[0.6, 0.8]), plus.clone()] {
            let value = deterministic_value(&sz(), &zero, &m, &TOL).unwrap();
            assert_abs_diff_eq!(value.re, 1.0, epsilon = 1e-15);
        }

        let pre = ket(&[1.0, 1.0, 1.0]);
        let post = ket(&[1.0, 1.0, -1.0]);
        let p3 = Operator::diagonal(&[0.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(deterministic_value(&p3, &pre, &post, &TOL).unwrap().re, -1.0, epsilon = 1e-15);

        let one = ket(&[0.0, 1.0]);
        assert!(matches!(
            deterministic_value(&sz(), &zero, &one, &TOL),
            Err(Error::OrthogonalConditions { .. })
        ));
        assert!(matches!(
            operator_sum_value(&sx(), &sz(), &zero, &zero, &TOL),
            Err(Error::NotEigenstate { .. })
        ));
    }

    #[test]
    fn expectation_from_deterministic_trivial_cases() {
        let psi_basis = Basis::computational(2).unwrap();
        let m_basis = sx_basis();
        let rho = DensityOperator::pure(&ket(&[0.6, 0.8]));
        let value = expectation_from_deterministic(&Operator::identity(2).unwrap(), &rho, &psi_basis, &m_basis, &TOL).unwrap();
        assert_abs_diff_eq!(value.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(value.im, 0.0, epsilon = 1e-15);

        let pure = DensityOperator::pure(&ket(&[1.0, 0.0]));
        let full = expectation_from_deterministic(&sx(), &pure, &psi_basis, &m_basis, &TOL).unwrap();
        let zero = psi_basis.vector(0);
        let row: Complex64 = m_basis
            .vectors()
            .iter()
            .map(|m| {
                let a = deterministic_value(&sx(), zero, m, &TOL).unwrap();
                a * pure.as_operator().matrix_element(zero, m).unwrap() * m.inner(zero).unwrap()
            })
            .sum();
        assert_abs_diff_eq!((full - row).norm(), 0.0, epsilon = 1e-15);
        assert!(matches!(
            expectation_from_deterministic(&sx(), &pure, &psi_basis, &psi_basis, &TOL),
            Err(Error::VanishingOverlap { .. })
        ));
    }
}
