//! Thermal states, unitary evolution, dephasing and energy-resolved action phases.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::float;
use crate::hilbert::{check_dims, eigendecompose, inner, DensityOperator, Operator, Spectrum, StateVector};
use crate::{Error, Result, Tolerances};

/// Hermitian energy operator together with its cached spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    op: Operator,
    hbar: f64,
    spectrum: Spectrum,
}

impl Hamiltonian {
    pub fn new(op: Operator, hbar: f64, tol: &Tolerances) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter { name: "hbar", value: hbar });
        }
        let spectrum = eigendecompose(&op, tol)?;
        Ok(Self { op, hbar, spectrum })
    }

    #[inline]
    pub fn op(&self) -> &Operator {
        &self.op
    }

    #[inline]
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    #[inline]
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Energies in ascending order.
    #[inline]
    pub fn energies(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    #[inline]
    pub fn eigenstates(&self) -> &[StateVector] {
        self.spectrum.eigenvectors()
    }

    /// Shortest Bohr period of the spectrum, `None` for a single energy.
    pub fn min_bohr_period(&self) -> Option<f64> {
        if self.spectrum.groups().len() < 2 {
            return None;
        }
        Some(2.0 * PI * self.hbar / self.spectrum.range())
    }

    /// `<b|psi_n><psi_n|a>` for every level `n`.
    pub(crate) fn level_amplitudes(&self, a: &StateVector, b: &StateVector) -> Result<Vec<Complex64>> {
        check_dims(self.dim(), a.dim())?;
        check_dims(self.dim(), b.dim())?;
        Ok(self
            .eigenstates()
            .iter()
            .map(|psi| inner(b.amplitudes(), psi.amplitudes()) * inner(psi.amplitudes(), a.amplitudes()))
            .collect())
    }
}

/// Temperature argument of [`thermal_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Finite(f64),
    /// The `T -> 0` limit: uniform mixture over the ground eigenspace.
    ZeroLimit,
}

/// Canonical Gibbs state `Z^-1 sum_n exp(-E_n / k_B T) |psi_n><psi_n|`.
///
/// Energies are shifted by the ground energy before exponentiation.
pub fn thermal_state(h: &Hamiltonian, temperature: Temperature, k_b: f64) -> Result<DensityOperator> {
    if !(k_b > 0.0 && k_b.is_finite()) {
        return Err(Error::InvalidParameter { name: "k_B", value: k_b });
    }
    let spectrum = h.spectrum();
    let ground = spectrum.eigenvalues()[0];
    let weights: Vec<f64> = match temperature {
        Temperature::Finite(t) if t > 0.0 && t.is_finite() => spectrum
            .eigenvalues()
            .iter()
            .map(|&e| float::exp(-(e - ground) / (k_b * t)))
            .collect(),
        Temperature::Finite(t) => return Err(Error::InvalidTemperature(t)),
        Temperature::ZeroLimit => {
            let ground_group = &spectrum.groups()[0];
            (0..spectrum.dim())
                .map(|n| if ground_group.contains(&n) { 1.0 } else { 0.0 })
                .collect()
        }
    };
    let z: f64 = weights.iter().sum();
    let op = spectrum.weighted_sum(|n, _| Complex64::new(weights[n] / z, 0.0));
    Ok(DensityOperator::from_trusted(op))
}

/// `U(t) = sum_n exp(-i E_n t / hbar) |psi_n><psi_n|`.
pub fn unitary_evolution(h: &Hamiltonian, t: f64) -> Result<Operator> {
    if !t.is_finite() {
        return Err(Error::InvalidTime(t));
    }
    let hbar = h.hbar();
    Ok(h.spectrum().function(|e| float::phase_factor(e * t / hbar)))
}

/// Randomizes the dynamics generated by `observable`: `sum_a P_a rho P_a`
/// over its eigenspace projectors. Coherences inside a degenerate
/// eigenspace survive.
pub fn dephase(rho: &DensityOperator, observable: &Operator, tol: &Tolerances) -> Result<DensityOperator> {
    check_dims(observable.dim(), rho.dim())?;
    let spectrum = eigendecompose(observable, tol)?;
    Ok(dephase_in(rho, &spectrum))
}

/// [`dephase`] against an already decomposed observable.
pub fn dephase_in(rho: &DensityOperator, spectrum: &Spectrum) -> DensityOperator {
    let d = rho.dim();
    let mut out = Operator::zeros(d).expect("non-zero dimension");
    for group in 0..spectrum.groups().len() {
        let p = spectrum.group_projector(group);
        let block = &(&p * rho.as_operator()) * &p;
        out = &out + &block;
    }
    DensityOperator::from_trusted(out)
}

/// `T_nm = 2 pi hbar / |E_n - E_m|` for eigen-indices `n`, `m`.
pub fn bohr_period(h: &Hamiltonian, n: usize, m: usize) -> Result<f64> {
    let spectrum = h.spectrum();
    let gn = spectrum.group_of(n).ok_or(Error::LevelOutOfRange(n))?;
    let gm = spectrum.group_of(m).ok_or(Error::LevelOutOfRange(m))?;
    if gn == gm {
        return Err(Error::DegeneratePair { n, m });
    }
    let e = spectrum.eigenvalues();
    Ok(2.0 * PI * h.hbar() / (e[n] - e[m]).abs())
}

/// `|<b|U(t)|a>|^2`, clamped to `[0, 1]`.
pub fn transition_probability(a: &StateVector, b: &StateVector, h: &Hamiltonian, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::InvalidTime(t));
    }
    let amplitudes = h.level_amplitudes(a, b)?;
    let hbar = h.hbar();
    let total: Complex64 = amplitudes
        .iter()
        .zip(h.energies())
        .map(|(&amp, &e)| amp * float::phase_factor(e * t / hbar))
        .sum();
    Ok(total.norm_sqr().min(1.0))
}

/// Action phase of a single energy level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelAction {
    /// Eigen-index of the level.
    pub index: usize,
    pub energy: f64,
    /// `None` when the level weight vanishes.
    pub action: Option<f64>,
    /// `|<b|psi_n><psi_n|a>|`.
    pub weight: f64,
}

/// Energy-resolved action `S_n = hbar Arg(<b|psi_n><psi_n|a>)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionProfile {
    levels: Vec<LevelAction>,
    unwrapped: bool,
    hbar: f64,
}

impl ActionProfile {
    /// Profile from explicit `(energy, action)` pairs, every level defined
    /// with unit weight. Energies must be ascending.
    pub fn from_actions(points: &[(f64, f64)], hbar: f64, unwrapped: bool) -> Result<Self> {
        if points.windows(2).any(|w| w[1].0 < w[0].0) {
            return Err(Error::DegenerateEnergies);
        }
        let levels = points
            .iter()
            .enumerate()
            .map(|(index, &(energy, action))| LevelAction {
                index,
                energy,
                action: Some(action),
                weight: 1.0,
            })
            .collect();
        Ok(Self { levels, unwrapped, hbar })
    }

    #[inline]
    pub fn levels(&self) -> &[LevelAction] {
        &self.levels
    }

    #[inline]
    pub fn is_unwrapped(&self) -> bool {
        self.unwrapped
    }

    #[inline]
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    fn defined_level(&self, n: usize) -> Result<(f64, f64)> {
        let level = self.levels.get(n).ok_or(Error::LevelOutOfRange(n))?;
        level
            .action
            .map(|s| (level.energy, s))
            .ok_or(Error::UndefinedLevel(n))
    }
}

/// Action phases of every level on the principal branch `(-pi hbar, pi hbar]`.
///
/// With `unwrap` set, successive defined levels (ascending energy) are moved
/// by multiples of `2 pi hbar` onto the branch nearest the previous level.
pub fn transformation_action(
    a: &StateVector,
    b: &StateVector,
    h: &Hamiltonian,
    unwrap: bool,
    tol: &Tolerances,
) -> Result<ActionProfile> {
    let hbar = h.hbar();
    let amplitudes = h.level_amplitudes(a, b)?;
    let mut levels: Vec<LevelAction> = amplitudes
        .iter()
        .zip(h.energies())
        .enumerate()
        .map(|(index, (&amp, &energy))| {
            let weight = float::norm(amp);
            let action = (weight >= tol.weight).then(|| hbar * float::principal_arg(amp));
            LevelAction {
                index,
                energy,
                action,
                weight,
            }
        })
        .collect();
    if unwrap {
        let period = 2.0 * PI * hbar;
        let mut previous: Option<f64> = None;
        for level in levels.iter_mut() {
            if let Some(s) = level.action.as_mut() {
                if let Some(prev) = previous {
                    *s += period * float::round((prev - *s) / period);
                }
                previous = Some(*s);
            }
        }
    }
    Ok(ActionProfile {
        levels,
        unwrapped: unwrap,
        hbar,
    })
}

/// Finite-difference slope `(S_j - S_i) / (E_j - E_i)` between two levels.
pub fn action_slope(profile: &ActionProfile, i: usize, j: usize) -> Result<f64> {
    let (ei, si) = profile.defined_level(i)?;
    let (ej, sj) = profile.defined_level(j)?;
    if ej == ei {
        return Err(Error::DegenerateEnergies);
    }
    Ok((sj - si) / (ej - ei))
}

/// Propagation time `dS/dE` at interior level `n` by central differences.
pub fn propagation_time(profile: &ActionProfile, n: usize) -> Result<f64> {
    if !profile.unwrapped {
        return Err(Error::NotUnwrapped);
    }
    if n == 0 || n + 1 >= profile.levels.len() {
        return Err(Error::NotInterior(n));
    }
    profile.defined_level(n)?;
    action_slope(profile, n - 1, n + 1)
}

/// Energy where the discrete gradient of `S(E)` changes sign, located by
/// linear interpolation between the bracketing midpoints. When several sign
/// changes exist, the one whose bracketing levels carry the most weight wins.
pub fn classical_intersection_energy(profile: &ActionProfile) -> Result<f64> {
    if !profile.unwrapped {
        return Err(Error::NotUnwrapped);
    }
    let defined: Vec<(f64, f64, f64)> = profile
        .levels
        .iter()
        .filter_map(|l| l.action.map(|s| (l.energy, s, l.weight)))
        .collect();
    if defined.len() < 3 {
        return Err(Error::InsufficientLevels {
            needed: 3,
            found: defined.len(),
        });
    }
    // (midpoint energy, gradient, combined weight of the two levels)
    let mut gradients = Vec::with_capacity(defined.len() - 1);
    for w in defined.windows(2) {
        let (e0, s0, w0) = w[0];
        let (e1, s1, w1) = w[1];
        if e1 == e0 {
            return Err(Error::DegenerateEnergies);
        }
        gradients.push((0.5 * (e0 + e1), (s1 - s0) / (e1 - e0), w0 + w1));
    }

    let mut best: Option<(f64, f64)> = None;
    let mut consider = |energy: f64, weight: f64| {
        if best.is_none_or(|(_, w)| weight > w) {
            best = Some((energy, weight));
        }
    };
    for k in 0..gradients.len() {
        let (mid, g, w) = gradients[k];
        if g == 0.0 {
            let before = k.checked_sub(1).map(|j| gradients[j].1);
            let after = gradients.get(k + 1).map(|x| x.1);
            if let (Some(b), Some(a)) = (before, after) {
                if b * a < 0.0 {
                    consider(mid, w);
                }
            }
            continue;
        }
        if let Some(&(mid_next, g_next, w_next)) = gradients.get(k + 1) {
            if g * g_next < 0.0 {
                let energy = mid + (mid_next - mid) * g / (g - g_next);
                consider(energy, w + w_next);
            }
        }
    }
    best.map(|(e, _)| e).ok_or(Error::NoStationaryPoint)
}

/// Result of [`peak_time_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakScan {
    pub time: f64,
    pub probability: f64,
}

/// Grid time maximizing [`transition_probability`]; ties (within
/// `tol.tie`) go to the smallest time.
pub fn peak_time_scan(
    a: &StateVector,
    b: &StateVector,
    h: &Hamiltonian,
    grid: &[f64],
    tol: &Tolerances,
) -> Result<PeakScan> {
    let mut best: Option<PeakScan> = None;
    for &t in grid {
        let p = transition_probability(a, b, h, t)?;
        best = match best {
            None => Some(PeakScan { time: t, probability: p }),
            Some(cur) if p > cur.probability + tol.tie => Some(PeakScan { time: t, probability: p }),
            Some(cur) if (p - cur.probability).abs() <= tol.tie && t < cur.time => {
                Some(PeakScan { time: t, probability: p.max(cur.probability) })
            }
            keep => keep,
        };
    }
    best.ok_or(Error::EmptyGrid)
}

/// `start, start + step, ...` up to and including `stop` (within half a step).
pub fn uniform_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    for x in [start, stop, step] {
        if !x.is_finite() {
            return Err(Error::InvalidTime(x));
        }
    }
    if step <= 0.0 {
        return Err(Error::InvalidParameter { name: "step", value: step });
    }
    if stop < start {
        return Err(Error::EmptyGrid);
    }
    let count = float::round((stop - start) / step) as usize;
    Ok((0..=count).map(|k| start + k as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use alloc::vec;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::FRAC_PI_2;

    const TOL: Tolerances = Tolerances::DEFAULT;

    fn qubit_rotation(omega: f64, hbar: f64) -> Hamiltonian {
        let op = Operator::diagonal(&[1.0, -1.0]).unwrap().scale_real(hbar * omega / 2.0);
        Hamiltonian::new(op, hbar, &TOL).unwrap()
    }

    fn plus() -> StateVector {
        StateVector::from_real(&[1.0, 1.0]).unwrap()
    }

    fn y_plus() -> StateVector {
        StateVector::normalized(vec![c64(1.0, 0.0), c64(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn gibbs_ratio_at_ln2() {
        let eps = 0.7;
        let h = Hamiltonian::new(Operator::diagonal(&[0.0, eps]).unwrap(), 1.0, &TOL).unwrap();
        let t = eps / core::f64::consts::LN_2;
        let rho = thermal_state(&h, Temperature::Finite(t), 1.0).unwrap();
        assert_abs_diff_eq!(rho.as_operator().get(0, 0).re, 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.as_operator().get(1, 1).re, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_temperature_limit_is_ground_projector() {
        let h = Hamiltonian::new(Operator::diagonal(&[2.0, -1.0, 0.5]).unwrap(), 1.0, &TOL).unwrap();
        let rho = thermal_state(&h, Temperature::ZeroLimit, 1.0).unwrap();
        let expected = Operator::diagonal(&[0.0, 1.0, 0.0]).unwrap();
        assert!(rho.as_operator().max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn degenerate_ground_space_is_mixed_uniformly() {
        let h = Hamiltonian::new(Operator::diagonal(&[0.0, 0.0, 1.0]).unwrap(), 1.0, &TOL).unwrap();
        let rho = thermal_state(&h, Temperature::ZeroLimit, 1.0).unwrap();
        let expected = Operator::diagonal(&[0.5, 0.5, 0.0]).unwrap();
        assert!(rho.as_operator().max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn non_positive_temperature_is_rejected() {
        let h = qubit_rotation(1.0, 1.0);
        assert_eq!(
            thermal_state(&h, Temperature::Finite(0.0), 1.0),
            Err(Error::InvalidTemperature(0.0))
        );
        assert!(thermal_state(&h, Temperature::Finite(-1.0), 1.0).is_err());
    }

    #[test]
    fn evolution_over_full_period_is_minus_identity() {
        let omega = 1.3;
        let h = qubit_rotation(omega, 1.0);
        let u = unitary_evolution(&h, 2.0 * PI / omega).unwrap();
        let minus_id = -&Operator::identity(2).unwrap();
        assert!(u.max_abs_diff(&minus_id).unwrap() < 1e-14);
        let u0 = unitary_evolution(&h, 0.0).unwrap();
        assert!(u0.max_abs_diff(&Operator::identity(2).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn quarter_period_rotates_plus_into_y_plus() {
        let omega = 2.0;
        let h = qubit_rotation(omega, 1.0);
        let u = unitary_evolution(&h, FRAC_PI_2 / omega).unwrap();
        let image = plus().evolve(&u).unwrap();
        let fidelity = image.inner(&y_plus()).unwrap().norm_sqr();
        assert_abs_diff_eq!(fidelity, 1.0, epsilon = 1e-14);
        let p = transition_probability(&plus(), &y_plus(), &h, FRAC_PI_2 / omega).unwrap();
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn dephasing_examples() {
        let sz = Operator::diagonal(&[1.0, -1.0]).unwrap();
        let rho = DensityOperator::pure(&plus());
        let out = dephase(&rho, &sz, &TOL).unwrap();
        let half = Operator::identity(2).unwrap().scale_real(0.5);
        assert!(out.as_operator().max_abs_diff(&half).unwrap() < 1e-15);

        let diagonal = DensityOperator::new(Operator::diagonal(&[0.3, 0.7]).unwrap(), &TOL).unwrap();
        let fixed = dephase(&diagonal, &sz, &TOL).unwrap();
        assert!(fixed.as_operator().max_abs_diff(diagonal.as_operator()).unwrap() < 1e-12);

        let untouched = dephase(&rho, &Operator::identity(2).unwrap(), &TOL).unwrap();
        assert!(untouched.as_operator().max_abs_diff(rho.as_operator()).unwrap() < 1e-12);
    }

    #[test]
    fn bohr_periods() {
        let h = Hamiltonian::new(Operator::diagonal(&[0.0, 1.0]).unwrap(), 1.0, &TOL).unwrap();
        assert_abs_diff_eq!(bohr_period(&h, 0, 1).unwrap(), 2.0 * PI, epsilon = 1e-15);
        let h = Hamiltonian::new(Operator::diagonal(&[0.0, 2.0]).unwrap(), 1.0, &TOL).unwrap();
        assert_abs_diff_eq!(bohr_period(&h, 1, 0).unwrap(), PI, epsilon = 1e-15);
        assert_eq!(bohr_period(&h, 1, 1), Err(Error::DegeneratePair { n: 1, m: 1 }));
        assert_eq!(bohr_period(&h, 0, 5), Err(Error::LevelOutOfRange(5)));
    }

    #[test]
    fn transition_probability_basics() {
        let h = qubit_rotation(1.0, 1.0);
        assert_abs_diff_eq!(transition_probability(&plus(), &plus(), &h, 0.0).unwrap(), 1.0, epsilon = 1e-15);
        let zero = StateVector::basis(2, 0).unwrap();
        let one = StateVector::basis(2, 1).unwrap();
        for t in [0.0, 0.3, 7.1] {
            assert_eq!(transition_probability(&zero, &one, &h, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn qubit_action_profile() {
        let hbar = 0.5;
        let h = qubit_rotation(1.0, hbar);
        let profile = transformation_action(&plus(), &y_plus(), &h, false, &TOL).unwrap();
        let levels = profile.levels();
        // level 0 is |1>, level 1 is |0>
        assert_abs_diff_eq!(levels[0].action.unwrap(), -hbar * FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(levels[1].action.unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(levels[0].weight, 0.5, epsilon = 1e-15);
        // slope between the two levels is the quarter-period time
        assert_abs_diff_eq!(action_slope(&profile, 0, 1).unwrap(), FRAC_PI_2, epsilon = 1e-14);
    }

    #[test]
    fn eigenstate_profile_has_single_defined_level() {
        let h = Hamiltonian::new(Operator::diagonal(&[0.0, 1.0, 3.0]).unwrap(), 1.0, &TOL).unwrap();
        let psi = h.eigenstates()[1].clone();
        let profile = transformation_action(&psi, &psi, &h, true, &TOL).unwrap();
        let defined: Vec<_> = profile.levels().iter().filter(|l| l.action.is_some()).collect();
        assert_eq!(defined.len(), 1);
        assert_eq!(defined[0].index, 1);
        assert_eq!(defined[0].action, Some(0.0));
        assert!(profile.levels()[0].action.is_none());
    }

    #[test]
    fn unwrapping_follows_nearest_branch() {
        // phases 0, 3, 6 (rad) wrap to 0, 3, 6 - 2 pi
        let h = Hamiltonian::new(Operator::diagonal(&[0.0, 1.0, 2.0]).unwrap(), 1.0, &TOL).unwrap();
        let a = StateVector::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let b = StateVector::normalized(vec![
            c64(1.0, 0.0),
            float::phase_factor(3.0),
            float::phase_factor(6.0),
        ])
        .unwrap();
        let wrapped = transformation_action(&a, &b, &h, false, &TOL).unwrap();
        assert_abs_diff_eq!(wrapped.levels()[2].action.unwrap(), 6.0 - 2.0 * PI, epsilon = 1e-12);
        let unwrapped = transformation_action(&a, &b, &h, true, &TOL).unwrap();
        assert_abs_diff_eq!(unwrapped.levels()[1].action.unwrap(), 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(unwrapped.levels()[2].action.unwrap(), 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(propagation_time(&unwrapped, 1).unwrap(), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn propagation_time_of_synthetic_profiles() {
        let t0 = 0.37;
        let points: Vec<(f64, f64)> = (0..6).map(|n| (n as f64 * 0.5, n as f64 * 0.5 * t0)).collect();
        let linear = ActionProfile::from_actions(&points, 1.0, true).unwrap();
        for n in 1..5 {
            assert_abs_diff_eq!(propagation_time(&linear, n).unwrap(), t0, epsilon = 1e-15);
        }
        let flat: Vec<(f64, f64)> = (0..4).map(|n| (n as f64, 1.25)).collect();
        let flat = ActionProfile::from_actions(&flat, 1.0, true).unwrap();
        assert_eq!(propagation_time(&flat, 2).unwrap(), 0.0);
        assert_eq!(propagation_time(&flat, 0), Err(Error::NotInterior(0)));
        let wrapped = ActionProfile::from_actions(&points, 1.0, false).unwrap();
        assert_eq!(propagation_time(&wrapped, 1), Err(Error::NotUnwrapped));
    }

    #[test]
    fn propagation_time_needs_defined_neighbours() {
        let h = Hamiltonian::new(Operator::diagonal(&[0.0, 1.0, 2.0]).unwrap(), 1.0, &TOL).unwrap();
        let a = StateVector::from_real(&[1.0, 0.0, 1.0]).unwrap();
        let profile = transformation_action(&a, &a, &h, true, &TOL).unwrap();
        assert_eq!(propagation_time(&profile, 1), Err(Error::UndefinedLevel(1)));
    }

    #[test]
    fn stationary_point_of_quadratic_profile() {
        let e_star = 4.3;
        let points: Vec<(f64, f64)> = (0..11)
            .map(|n| {
                let e = n as f64;
                (e, (e - e_star) * (e - e_star))
            })
            .collect();
        let profile = ActionProfile::from_actions(&points, 1.0, true).unwrap();
        let e = classical_intersection_energy(&profile).unwrap();
        assert_abs_diff_eq!(e, e_star, epsilon = 1e-12);
    }

    #[test]
    fn monotone_profile_has_no_stationary_point() {
        let points: Vec<(f64, f64)> = (0..5).map(|n| (n as f64, (n * n) as f64)).collect();
        let profile = ActionProfile::from_actions(&points, 1.0, true).unwrap();
        assert_eq!(classical_intersection_energy(&profile), Err(Error::NoStationaryPoint));
        let short = ActionProfile::from_actions(&points[..2], 1.0, true).unwrap();
        assert!(matches!(
            classical_intersection_energy(&short),
            Err(Error::InsufficientLevels { .. })
        ));
    }

    #[test]
    fn peak_scan_of_qubit_rotation() {
        let omega = 1.0;
        let h = qubit_rotation(omega, 1.0);
        let step = PI / (200.0 * omega);
        let grid = uniform_grid(0.0, PI / omega, step).unwrap();
        let peak = peak_time_scan(&plus(), &y_plus(), &h, &grid, &TOL).unwrap();
        assert!((peak.time - FRAC_PI_2 / omega).abs() <= step);
    }

    #[test]
    fn peak_scan_ties_go_to_smallest_time() {
        let h = qubit_rotation(1.0, 1.0);
        let zero = StateVector::basis(2, 0).unwrap();
        let grid = [0.7, 0.2, 1.5, 3.0];
        let peak = peak_time_scan(&zero, &zero, &h, &grid, &TOL).unwrap();
        assert_eq!(peak.time, 0.2);
        assert_eq!(peak_time_scan(&zero, &zero, &h, &[], &TOL), Err(Error::EmptyGrid));
    }

    #[test]
    fn peak_scan_finds_zero_for_return_probability() {
        let h = Hamiltonian::new(Operator::diagonal(&[0.0, 1.0, 2.7]).unwrap(), 1.0, &TOL).unwrap();
        let a = StateVector::from_real(&[0.6, 0.3, 0.5]).unwrap();
        let grid = uniform_grid(0.0, 5.0, 0.01).unwrap();
        let peak = peak_time_scan(&a, &a, &h, &grid, &TOL).unwrap();
        assert_eq!(peak.time, 0.0);
    }
}
