//! Quasiprobabilities, weak values and imaginary correlations.
//!
//! The Dirac distribution `rho(a, b) = <b|a><a|rho|b>` is a complete,
//! generally complex, representation of a state relative to two bases. Its
//! conditional counterpart `P(m|a, b) = <b|m><m|a> / <b|a>` is the weak value
//! of the projector `|m><m|`; it sums to one over any complete set `{m}` but
//! may be negative or complex.
//!
//! Tables indexed by two bases follow the order of the defining formula:
//! Dirac tables are `[a][b]`, weak-value tables are `[b][a]` (post-selected
//! index first).

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dynamics::{unitary_evolution, Hamiltonian};
use crate::float;
use crate::hilbert::{
    check_dims, commutator, inner, trace_of_product, Basis, DensityOperator, Operator, StateVector,
};
use crate::{Error, Result, Tolerances};

/// `|<b|a>|^2`.
pub fn born_probability(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(b.inner(a)?.norm_sqr().min(1.0))
}

/// Joint quasiprobability table of a state over two bases.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracDistribution {
    basis_a: Basis,
    basis_b: Basis,
    table: Vec<Complex64>,
}

impl DiracDistribution {
    /// Wraps a table given in `[a][b]` order.
    pub fn from_table(basis_a: Basis, basis_b: Basis, table: Vec<Complex64>) -> Result<Self> {
        check_dims(basis_a.dim(), basis_b.dim())?;
        check_dims(basis_a.dim() * basis_a.dim(), table.len())?;
        Ok(Self {
            basis_a,
            basis_b,
            table,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis_a.dim()
    }

    #[inline]
    pub fn basis_a(&self) -> &Basis {
        &self.basis_a
    }

    #[inline]
    pub fn basis_b(&self) -> &Basis {
        &self.basis_b
    }

    /// `rho(a, b)`.
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.table[a * self.dim() + b]
    }

    /// Entries in `[a][b]` order.
    #[inline]
    pub fn table(&self) -> &[Complex64] {
        &self.table
    }

    pub fn total(&self) -> Complex64 {
        self.table.iter().sum()
    }

    /// `sum_b rho(a, b)` for each `a`.
    pub fn row_sums(&self) -> Vec<Complex64> {
        self.table.chunks(self.dim()).map(|row| row.iter().sum()).collect()
    }

    /// `sum_a rho(a, b)` for each `b`.
    pub fn column_sums(&self) -> Vec<Complex64> {
        let d = self.dim();
        (0..d).map(|b| (0..d).map(|a| self.get(a, b)).sum()).collect()
    }
}

pub fn dirac_distribution(rho: &DensityOperator, basis_a: &Basis, basis_b: &Basis) -> Result<DiracDistribution> {
    let d = rho.dim();
    check_dims(d, basis_a.dim())?;
    check_dims(d, basis_b.dim())?;
    let op = rho.as_operator();
    let rho_b: Vec<Vec<Complex64>> = basis_b
        .vectors()
        .iter()
        .map(|b| op.apply(b.amplitudes()))
        .collect::<Result<_>>()?;
    let mut table = Vec::with_capacity(d * d);
    for a in basis_a.vectors() {
        for (b, rb) in basis_b.vectors().iter().zip(&rho_b) {
            table.push(inner(b.amplitudes(), a.amplitudes()) * inner(a.amplitudes(), rb));
        }
    }
    Ok(DiracDistribution {
        basis_a: basis_a.clone(),
        basis_b: basis_b.clone(),
        table,
    })
}

/// Inverts [`dirac_distribution`]: `<a|rho|b> = rho(a, b) / <b|a>`.
pub fn reconstruct_state(dist: &DiracDistribution, tol: &Tolerances) -> Result<DensityOperator> {
    let d = dist.dim();
    let mut op = Operator::zeros(d)?;
    for (ia, a) in dist.basis_a.vectors().iter().enumerate() {
        for (ib, b) in dist.basis_b.vectors().iter().enumerate() {
            let ov = b.inner(a)?;
            let magnitude = float::norm(ov);
            if magnitude <= tol.overlap {
                return Err(Error::VanishingOverlap { a: ia, b: ib, magnitude });
            }
            let element = dist.get(ia, ib) / ov;
            op = op.try_add(&Operator::outer(a, b)?.scale(element))?;
        }
    }
    DensityOperator::new(op, tol)
}

/// A weak value together with the conditions that define it.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakValueRecord {
    pub value: Complex64,
    pub pre: StateVector,
    pub post: StateVector,
    /// `|<post|pre>|`.
    pub overlap_mag: f64,
}

fn conditioning_overlap(pre: &StateVector, post: &StateVector, tol: &Tolerances) -> Result<Complex64> {
    let ov = post.inner(pre)?;
    let magnitude = float::norm(ov);
    if magnitude <= tol.overlap {
        return Err(Error::OrthogonalConditions { magnitude });
    }
    Ok(ov)
}

/// `<post|m|pre> / <post|pre>`.
pub fn weak_value(m: &Operator, pre: &StateVector, post: &StateVector, tol: &Tolerances) -> Result<WeakValueRecord> {
    check_dims(m.dim(), pre.dim())?;
    let ov = conditioning_overlap(pre, post, tol)?;
    let value = m.matrix_element(post, pre)? / ov;
    Ok(WeakValueRecord {
        value,
        pre: pre.clone(),
        post: post.clone(),
        overlap_mag: float::norm(ov),
    })
}

/// Weak values of one operator for every pair of basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakTable {
    basis_a: Basis,
    basis_b: Basis,
    values: Vec<Complex64>,
}

impl WeakTable {
    /// Wraps values given in `[b][a]` order.
    pub fn from_values(basis_a: Basis, basis_b: Basis, values: Vec<Complex64>) -> Result<Self> {
        check_dims(basis_a.dim(), basis_b.dim())?;
        check_dims(basis_a.dim() * basis_a.dim(), values.len())?;
        Ok(Self {
            basis_a,
            basis_b,
            values,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis_a.dim()
    }

    #[inline]
    pub fn basis_a(&self) -> &Basis {
        &self.basis_a
    }

    #[inline]
    pub fn basis_b(&self) -> &Basis {
        &self.basis_b
    }

    /// Weak value for pre-state `a` and post-state `b`.
    #[inline]
    pub fn get(&self, b: usize, a: usize) -> Complex64 {
        self.values[b * self.dim() + a]
    }

    /// Values in `[b][a]` order.
    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// Tabulates `<b|m|a> / <b|a>` over both bases.
pub fn weak_table(m: &Operator, basis_a: &Basis, basis_b: &Basis, tol: &Tolerances) -> Result<WeakTable> {
    let d = m.dim();
    check_dims(d, basis_a.dim())?;
    check_dims(d, basis_b.dim())?;
    let mut values = Vec::with_capacity(d * d);
    for (ib, b) in basis_b.vectors().iter().enumerate() {
        for (ia, a) in basis_a.vectors().iter().enumerate() {
            let ov = b.inner(a)?;
            let magnitude = float::norm(ov);
            if magnitude <= tol.overlap {
                return Err(Error::VanishingOverlap { a: ia, b: ib, magnitude });
            }
            values.push(m.matrix_element(b, a)? / ov);
        }
    }
    Ok(WeakTable {
        basis_a: basis_a.clone(),
        basis_b: basis_b.clone(),
        values,
    })
}

/// Rebuilds `M = sum_{a,b} W(b, a) |b><b|a><a|` from its weak values.
pub fn operator_from_weak_values(table: &WeakTable, tol: &Tolerances) -> Result<Operator> {
    let d = table.dim();
    let mut op = Operator::zeros(d)?;
    for (ib, b) in table.basis_b.vectors().iter().enumerate() {
        for (ia, a) in table.basis_a.vectors().iter().enumerate() {
            let ov = b.inner(a)?;
            let magnitude = float::norm(ov);
            if magnitude <= tol.overlap {
                return Err(Error::VanishingOverlap { a: ia, b: ib, magnitude });
            }
            let coefficient = table.get(ib, ia) * ov;
            op = op.try_add(&Operator::outer(b, a)?.scale(coefficient))?;
        }
    }
    Ok(op)
}

/// `P(mid|a, b) = <b|mid><mid|a> / <b|a>`.
pub fn complex_conditional_probability(
    mid: &StateVector,
    a: &StateVector,
    b: &StateVector,
    tol: &Tolerances,
) -> Result<Complex64> {
    check_dims(a.dim(), mid.dim())?;
    let ov = conditioning_overlap(a, b, tol)?;
    Ok(b.inner(mid)? * mid.inner(a)? / ov)
}

/// Outcome distribution recovered from a Dirac distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredProbabilities {
    /// Real parts of `P(m)`, one per vector of the measured basis.
    pub probabilities: Vec<f64>,
    /// Largest `|Im P(m)|`.
    pub imaginary_residue: f64,
}

/// `P(m) = sum_{a,b} P(m|a,b) rho(a,b)` for each `m` of `mid_basis`.
pub fn reconstruct_probability(
    mid_basis: &Basis,
    dist: &DiracDistribution,
    tol: &Tolerances,
) -> Result<RecoveredProbabilities> {
    check_dims(dist.dim(), mid_basis.dim())?;
    let a_vectors = dist.basis_a.vectors();
    let b_vectors = dist.basis_b.vectors();
    let mut overlaps = Vec::with_capacity(a_vectors.len() * b_vectors.len());
    for (ia, a) in a_vectors.iter().enumerate() {
        for (ib, b) in b_vectors.iter().enumerate() {
            let ov = b.inner(a)?;
            let magnitude = float::norm(ov);
            if magnitude <= tol.overlap {
                return Err(Error::VanishingOverlap { a: ia, b: ib, magnitude });
            }
            overlaps.push(ov);
        }
    }
    let d = dist.dim();
    let mut probabilities = Vec::with_capacity(d);
    let mut imaginary_residue: f64 = 0.0;
    for m in mid_basis.vectors() {
        let ma: Vec<Complex64> = a_vectors.iter().map(|a| inner(m.amplitudes(), a.amplitudes())).collect();
        let bm: Vec<Complex64> = b_vectors.iter().map(|b| inner(b.amplitudes(), m.amplitudes())).collect();
        let mut p = Complex64::new(0.0, 0.0);
        for ia in 0..d {
            for ib in 0..d {
                p += bm[ib] * ma[ia] / overlaps[ia * d + ib] * dist.get(ia, ib);
            }
        }
        imaginary_residue = imaginary_residue.max(p.im.abs());
        probabilities.push(p.re);
    }
    Ok(RecoveredProbabilities {
        probabilities,
        imaginary_residue,
    })
}

/// `S(b, a, E_n) = hbar Arg(<b|psi_n><psi_n|a> / <b|a>)`.
///
/// Inside a degenerate eigenspace the value depends on the eigenvector
/// phase convention of [`crate::eigendecompose`].
pub fn conditional_action(
    h: &Hamiltonian,
    a: &StateVector,
    b: &StateVector,
    level: usize,
    tol: &Tolerances,
) -> Result<f64> {
    check_dims(h.dim(), a.dim())?;
    let ov = conditioning_overlap(a, b, tol)?;
    let psi = h.eigenstates().get(level).ok_or(Error::LevelOutOfRange(level))?;
    let amplitude = b.inner(psi)? * psi.inner(a)?;
    if float::norm(amplitude) < tol.weight {
        return Err(Error::UndefinedLevel(level));
    }
    Ok(h.hbar() * float::principal_arg(amplitude / ov))
}

/// Aggregated conditional energy probability over one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBin {
    pub lower: f64,
    pub upper: f64,
    pub center: f64,
    /// Sum of `P(E_n|a, b)` over the levels in the bin.
    pub mass: Complex64,
    pub levels: usize,
}

/// Sums `P(E_n|a,b)` over contiguous windows of width `window`, starting at
/// the lowest energy. The highest level always falls in the last bin.
pub fn coarse_grain(
    h: &Hamiltonian,
    a: &StateVector,
    b: &StateVector,
    window: f64,
    tol: &Tolerances,
) -> Result<Vec<EnergyBin>> {
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::InvalidWindow(window));
    }
    let ov = conditioning_overlap(a, b, tol)?;
    let amplitudes = h.level_amplitudes(a, b)?;
    let energies = h.energies();
    let e_min = energies[0];
    let range = energies[energies.len() - 1] - e_min;
    let count = (libm::ceil(range / window) as usize).max(1);
    let mut bins: Vec<EnergyBin> = (0..count)
        .map(|k| {
            let lower = e_min + k as f64 * window;
            EnergyBin {
                lower,
                upper: lower + window,
                center: lower + 0.5 * window,
                mass: Complex64::new(0.0, 0.0),
                levels: 0,
            }
        })
        .collect();
    for (&energy, &amp) in energies.iter().zip(&amplitudes) {
        let k = (libm::floor((energy - e_min) / window) as usize).min(count - 1);
        bins[k].mass += amp / ov;
        bins[k].levels += 1;
    }
    Ok(bins)
}

/// Share of `sum |mass|` carried by the two bins whose centers lie closest
/// to `energy`.
pub fn near_stationary_fraction(bins: &[EnergyBin], energy: f64) -> f64 {
    let total: f64 = bins.iter().map(|bin| float::norm(bin.mass)).sum();
    if total == 0.0 {
        return 0.0;
    }
    let mut order: Vec<usize> = (0..bins.len()).collect();
    order.sort_by(|&i, &j| {
        (bins[i].center - energy)
            .abs()
            .total_cmp(&(bins[j].center - energy).abs())
            .then(i.cmp(&j))
    });
    order.iter().take(2).map(|&k| float::norm(bins[k].mass)).sum::<f64>() / total
}

/// `Im Tr(rho A B)`, equal to `-(i/2) Tr(rho [A, B])`.
pub fn imaginary_correlation(
    a_op: &Operator,
    b_op: &Operator,
    rho: &DensityOperator,
    tol: &Tolerances,
) -> Result<f64> {
    a_op.require_hermitian(tol)?;
    b_op.require_hermitian(tol)?;
    check_dims(a_op.dim(), b_op.dim())?;
    check_dims(a_op.dim(), rho.dim())?;
    let ab = a_op.try_mul(b_op)?;
    Ok(trace_of_product(rho.as_operator(), &ab)?.im)
}

/// `-(i/2) Tr(rho [A, B])` as a real number.
pub fn commutator_correlation(a_op: &Operator, b_op: &Operator, rho: &DensityOperator) -> Result<f64> {
    let c = commutator(a_op, b_op)?;
    let value = trace_of_product(rho.as_operator(), &c)? * Complex64::new(0.0, -0.5);
    Ok(value.re)
}

/// Both sides of `Im <A H> = (hbar / 2) d<A>/dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EhrenfestCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub deviation: f64,
    /// `dt` exceeds a hundredth of the shortest Bohr period.
    pub coarse_step: bool,
}

/// Compares the imaginary correlation with the rate of change of `<A>`,
/// the latter by a central difference of `Tr(U rho U† A)` around `t = 0`.
pub fn ehrenfest_check(
    a_op: &Operator,
    h: &Hamiltonian,
    rho: &DensityOperator,
    dt: f64,
    tol: &Tolerances,
) -> Result<EhrenfestCheck> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter { name: "dt", value: dt });
    }
    let lhs = imaginary_correlation(a_op, h.op(), rho, tol)?;
    let mean_at = |t: f64| -> Result<f64> {
        let u = unitary_evolution(h, t)?;
        let evolved = &(&u * rho.as_operator()) * &u.adjoint();
        Ok(trace_of_product(&evolved, a_op)?.re)
    };
    let rate = (mean_at(dt)? - mean_at(-dt)?) / (2.0 * dt);
    let rhs = 0.5 * h.hbar() * rate;
    let coarse_step = h.min_bohr_period().is_some_and(|period| dt > period / 100.0);
    Ok(EhrenfestCheck {
        lhs,
        rhs,
        deviation: (lhs - rhs).abs(),
        coarse_step,
    })
}
