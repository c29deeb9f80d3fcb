//! Dense complex linear algebra: operators, states, spectra and bases.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::float;
use crate::{Error, Result, Tolerances};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl Operator {
    /// Builds an operator from `dim * dim` row-major entries.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self::new(dim, entries)
    }

    /// Builds an operator from nested rows.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(dim, entries)
    }

    /// Real matrix given row by row.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::new(dim, entries)
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(dim, vec![ZERO; dim * dim])
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// `|ket><bra|`.
    pub fn outer(ket: &StateVector, bra: &StateVector) -> Result<Self> {
        check_dims(ket.dim(), bra.dim())?;
        let (k, b) = (ket.amplitudes(), bra.amplitudes());
        Self::from_fn(ket.dim(), |i, j| k[i] * b[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    #[inline]
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        Self { dim: d, entries }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.map(|z| z * factor)
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| f(z)).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let aik = self.entries[i * d + k];
                if aik == ZERO {
                    continue;
                }
                let row = &other.entries[k * d..(k + 1) * d];
                let out = &mut entries[i * d..(i + 1) * d];
                for (o, &b) in out.iter_mut().zip(row) {
                    *o += aik * b;
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// `op |v>` as raw amplitudes.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dims(self.dim, v.len())?;
        let d = self.dim;
        Ok((0..d)
            .map(|i| {
                self.entries[i * d..(i + 1) * d]
                    .iter()
                    .zip(v)
                    .map(|(&a, &x)| a * x)
                    .sum()
            })
            .collect())
    }

    /// `<bra| op |ket>`.
    pub fn matrix_element(&self, bra: &StateVector, ket: &StateVector) -> Result<Complex64> {
        check_dims(bra.dim(), self.dim)?;
        let image = self.apply(ket.amplitudes())?;
        Ok(inner(bra.amplitudes(), &image))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|&z| float::norm(z)).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim, other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| float::norm(a - b))
            .fold(0.0, f64::max))
    }

    /// Max-entry norm of `M - M†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                dev = dev.max(float::norm(self.get(i, j) - self.get(j, i).conj()));
            }
        }
        dev
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let d = self.dim;
        let mut out = self.clone();
        for i in 0..d {
            for j in 0..d {
                out.entries[i * d + j] = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
            }
        }
        out
    }

    fn hermitian_threshold(&self, tol: &Tolerances) -> f64 {
        tol.hermitian * self.max_abs().max(1.0)
    }

    pub fn is_hermitian(&self, tol: &Tolerances) -> bool {
        self.hermiticity_deviation() <= self.hermitian_threshold(tol)
    }

    pub(crate) fn require_hermitian(&self, tol: &Tolerances) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation <= self.hermitian_threshold(tol) {
            Ok(())
        } else {
            Err(Error::NotHermitian { deviation })
        }
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub(crate) fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let m = self.hermitian_part().to_dmatrix();
        let mut values: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.entries[row * self.dim + col]
    }
}

// Operator arithmetic panics on mismatched dimensions; use the `try_*`
// methods where dimensions come from untrusted input.
impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("operator dimensions must match")
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        self.try_sub(rhs).expect("operator dimensions must match")
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        self.try_mul(rhs).expect("operator dimensions must match")
    }
}

impl Mul<Complex64> for &Operator {
    type Output = Operator;

    fn mul(self, rhs: Complex64) -> Operator {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;

    fn mul(self, rhs: f64) -> Operator {
        self.scale_real(rhs)
    }
}

impl Neg for &Operator {
    type Output = Operator;

    fn neg(self) -> Operator {
        self.map(|z| -z)
    }
}

/// Unit vector in a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Accepts `amplitudes` only if their norm is 1 within `tol.norm`.
    pub fn new(amplitudes: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = norm_of(&amplitudes);
        if (norm - 1.0).abs() > tol.norm {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = norm_of(&amplitudes);
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if index >= dim {
            return Err(Error::LevelOutOfRange(index));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self { amplitudes })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amplitudes)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    /// Applies an operator that is known to preserve the norm.
    pub fn evolve(&self, unitary: &Operator) -> Result<Self> {
        Self::normalized(unitary.apply(&self.amplitudes)?)
    }
}

/// Density operator: Hermitian, unit trace and positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: Operator,
}

impl DensityOperator {
    pub fn new(op: Operator, tol: &Tolerances) -> Result<Self> {
        let deviation = op.hermiticity_deviation();
        if deviation > tol.hermitian * op.max_abs().max(1.0) {
            return Err(Error::NotDensity(format!(
                "not Hermitian (deviation {deviation:e})"
            )));
        }
        let trace = op.trace();
        if (trace.re - 1.0).abs() > tol.norm || trace.im.abs() > tol.norm {
            return Err(Error::NotDensity(format!("trace {trace} differs from 1")));
        }
        let min = op.hermitian_eigenvalues()[0];
        if min < -tol.psd {
            return Err(Error::NotDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { op })
    }

    /// Wraps an operator produced by a trace- and positivity-preserving map.
    pub(crate) fn from_trusted(op: Operator) -> Self {
        Self { op }
    }

    pub fn pure(state: &StateVector) -> Self {
        let d = state.dim();
        let a = state.amplitudes();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(a[i] * a[j].conj());
            }
        }
        Self {
            op: Operator { dim: d, entries },
        }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let op = Operator::identity(dim)?.scale_real(1.0 / dim as f64);
        Ok(Self { op })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.op.dim
    }

    #[inline]
    pub fn as_operator(&self) -> &Operator {
        &self.op
    }

    pub fn into_operator(self) -> Operator {
        self.op
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.op.hermitian_eigenvalues()
    }
}

/// Orthonormal basis of the full space.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    vectors: Vec<StateVector>,
}

impl Basis {
    pub fn new(vectors: Vec<StateVector>, tol: &Tolerances) -> Result<Self> {
        let dim = vectors.first().map(StateVector::dim).ok_or(Error::InvalidDimension(0))?;
        if vectors.len() != dim {
            return Err(Error::InvalidBasis(format!(
                "{} vectors for dimension {dim}",
                vectors.len()
            )));
        }
        for v in &vectors {
            check_dims(dim, v.dim())?;
        }
        let deviation = orthonormality_deviation(&vectors);
        if deviation > tol.orthonormal {
            return Err(Error::InvalidBasis(format!(
                "orthonormality deviation {deviation:e}"
            )));
        }
        Ok(Self { vectors })
    }

    pub fn computational(dim: usize) -> Result<Self> {
        let vectors = (0..dim)
            .map(|k| StateVector::basis(dim, k))
            .collect::<Result<Vec<_>>>()?;
        if vectors.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self { vectors })
    }

    /// Discrete Fourier basis, mutually unbiased with the computational one.
    pub fn fourier(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let scale = 1.0 / float::sqrt(dim as f64);
        let vectors = (0..dim)
            .map(|k| {
                let amplitudes = (0..dim)
                    .map(|j| {
                        let phase = -2.0 * core::f64::consts::PI * ((j * k) % dim) as f64
                            / dim as f64;
                        float::phase_factor(phase) * scale
                    })
                    .collect();
                StateVector { amplitudes }
            })
            .collect();
        Ok(Self { vectors })
    }

    /// Eigenvectors of a spectrum, in ascending eigenvalue order.
    pub fn from_spectrum(spectrum: &Spectrum) -> Self {
        Self {
            vectors: spectrum.eigenvectors.clone(),
        }
    }

    /// Image of this basis under a unitary operator.
    pub fn transformed(&self, unitary: &Operator, tol: &Tolerances) -> Result<Self> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| StateVector::new(unitary.apply(v.amplitudes())?, tol))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vectors, tol)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    #[inline]
    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    #[inline]
    pub fn vector(&self, index: usize) -> &StateVector {
        &self.vectors[index]
    }
}

/// Spectral decomposition of a Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<StateVector>,
    groups: Vec<Vec<usize>>,
}

impl Spectrum {
    /// Ascending eigenvalues.
    #[inline]
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    #[inline]
    pub fn eigenvectors(&self) -> &[StateVector] {
        &self.eigenvectors
    }

    /// Degeneracy classes as sorted index lists, in ascending eigenvalue order.
    #[inline]
    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Index of the degeneracy group containing eigenvalue `index`.
    pub fn group_of(&self, index: usize) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(&index))
    }

    pub fn range(&self) -> f64 {
        self.eigenvalues[self.dim() - 1] - self.eigenvalues[0]
    }

    /// Projector onto the eigenspace of group `group`.
    pub fn group_projector(&self, group: usize) -> Operator {
        let d = self.dim();
        let mut entries = vec![ZERO; d * d];
        for &n in &self.groups[group] {
            let v = self.eigenvectors[n].amplitudes();
            for i in 0..d {
                for j in 0..d {
                    entries[i * d + j] += v[i] * v[j].conj();
                }
            }
        }
        Operator { dim: d, entries }
    }

    /// `sum_n f(lambda_n) |psi_n><psi_n|`.
    pub fn function(&self, f: impl Fn(f64) -> Complex64) -> Operator {
        self.weighted_sum(|_, lambda| f(lambda))
    }

    /// `sum_n w(n, lambda_n) |psi_n><psi_n|`.
    pub fn weighted_sum(&self, w: impl Fn(usize, f64) -> Complex64) -> Operator {
        let d = self.dim();
        let mut entries = vec![ZERO; d * d];
        for (n, (lambda, vector)) in self.eigenvalues.iter().zip(&self.eigenvectors).enumerate() {
            let weight = w(n, *lambda);
            let v = vector.amplitudes();
            for i in 0..d {
                let vi = v[i] * weight;
                for j in 0..d {
                    entries[i * d + j] += vi * v[j].conj();
                }
            }
        }
        Operator { dim: d, entries }
    }

    pub fn reconstruct(&self) -> Operator {
        self.function(|lambda| Complex64::new(lambda, 0.0))
    }
}

/// Which property [`validate_operator`] checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Hermitian,
    Unitary,
    Density,
    PovmElement,
}

/// Outcome of [`validate_operator`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub kind: OperatorKind,
    pub passed: bool,
    /// Largest violation of the checked property.
    pub deviation: f64,
}

pub fn validate_operator(op: &Operator, kind: OperatorKind, tol: &Tolerances) -> ValidityReport {
    let herm = op.hermiticity_deviation();
    let herm_ok = herm <= op.hermitian_threshold(tol);
    let (passed, deviation) = match kind {
        OperatorKind::Hermitian => (herm_ok, herm),
        OperatorKind::Unitary => {
            let product = &op.adjoint() * op;
            let id = Operator::identity(op.dim).expect("non-zero dimension");
            let dev = product.max_abs_diff(&id).expect("same dimension");
            (dev <= tol.hermitian * op.max_abs().max(1.0), dev)
        }
        OperatorKind::Density => {
            let trace = op.trace();
            let trace_dev = float::norm(trace - ONE);
            let negativity = (-op.hermitian_eigenvalues()[0]).max(0.0);
            let passed = herm_ok && trace_dev <= tol.norm && negativity <= tol.psd;
            (passed, herm.max(trace_dev).max(negativity))
        }
        OperatorKind::PovmElement => {
            let negativity = (-op.hermitian_eigenvalues()[0]).max(0.0);
            (herm_ok && negativity <= tol.psd, herm.max(negativity))
        }
    };
    ValidityReport {
        kind,
        passed,
        deviation,
    }
}

/// Spectral decomposition with ascending eigenvalues, degeneracy groups and a
/// fixed phase convention: the first amplitude of each eigenvector that is
/// not negligible is made real and positive.
pub fn eigendecompose(op: &Operator, tol: &Tolerances) -> Result<Spectrum> {
    op.require_hermitian(tol)?;
    let d = op.dim;
    let eig = op.hermitian_part().to_dmatrix().symmetric_eigen();

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));

    let mut eigenvalues = Vec::with_capacity(d);
    let mut eigenvectors = Vec::with_capacity(d);
    for &k in &order {
        eigenvalues.push(eig.eigenvalues[k]);
        let column: Vec<Complex64> = eig.eigenvectors.column(k).iter().copied().collect();
        eigenvectors.push(fix_phase(column)?);
    }

    let threshold = tol.degeneracy_threshold(eigenvalues[d - 1] - eigenvalues[0]);
    let mut groups: Vec<Vec<usize>> = vec![vec![0]];
    for n in 1..d {
        if eigenvalues[n] - eigenvalues[n - 1] <= threshold {
            groups.last_mut().expect("non-empty").push(n);
        } else {
            groups.push(vec![n]);
        }
    }

    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        groups,
    })
}

// Amplitudes below this magnitude are skipped when fixing the global phase,
// so that rounding noise cannot decide the convention.
const PHASE_ANCHOR_THRESHOLD: f64 = 1e-8;

fn fix_phase(amplitudes: Vec<Complex64>) -> Result<StateVector> {
    let state = StateVector::normalized(amplitudes)?;
    let anchor = state
        .amplitudes
        .iter()
        .copied()
        .find(|&z| float::norm(z) > PHASE_ANCHOR_THRESHOLD)
        .expect("unit vector has a non-negligible amplitude");
    let rotation = anchor.conj() / float::norm(anchor);
    let mut amplitudes: Vec<Complex64> = state.amplitudes.iter().map(|&z| z * rotation).collect();
    if let Some(z) = amplitudes
        .iter_mut()
        .find(|z| float::norm(**z) > PHASE_ANCHOR_THRESHOLD)
    {
        z.im = 0.0;
    }
    Ok(StateVector { amplitudes })
}

/// `AB - BA`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    ab.try_sub(&ba)
}

/// `Tr(rho op)`.
pub fn expectation(op: &Operator, state: &DensityOperator) -> Result<Complex64> {
    trace_of_product(state.as_operator(), op)
}

/// `Tr(AB)` without forming the product.
pub(crate) fn trace_of_product(a: &Operator, b: &Operator) -> Result<Complex64> {
    check_dims(a.dim, b.dim)?;
    let d = a.dim;
    let mut sum = ZERO;
    for i in 0..d {
        for k in 0..d {
            sum += a.get(i, k) * b.get(k, i);
        }
    }
    Ok(sum)
}

/// `|s><s|`.
pub fn projector(state: &StateVector, tol: &Tolerances) -> Result<Operator> {
    let norm = state.norm();
    if (norm - 1.0).abs() > tol.norm {
        return Err(Error::NotNormalized { norm });
    }
    Operator::outer(state, state)
}

/// `<a|b>`, conjugating the first argument.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.inner(b)
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn inner(bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
    bra.iter().zip(ket).map(|(a, b)| a.conj() * b).sum()
}

fn norm_of(amplitudes: &[Complex64]) -> f64 {
    float::sqrt(amplitudes.iter().map(|z| z.norm_sqr()).sum())
}

fn orthonormality_deviation(vectors: &[StateVector]) -> f64 {
    let mut dev: f64 = 0.0;
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate().skip(i) {
            let target = if i == j { ONE } else { ZERO };
            dev = dev.max(float::norm(inner(&u.amplitudes, &v.amplitudes) - target));
        }
    }
    dev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use approx::assert_abs_diff_eq;

    const TOL: Tolerances = Tolerances::DEFAULT;

    fn sigma_x() -> Operator {
        Operator::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap()
    }

    fn sigma_y() -> Operator {
        Operator::from_rows(&[[c64(0.0, 0.0), c64(0.0, -1.0)], [c64(0.0, 1.0), c64(0.0, 0.0)]])
            .unwrap()
    }

    fn sigma_z() -> Operator {
        Operator::diagonal(&[1.0, -1.0]).unwrap()
    }

    fn plus() -> StateVector {
        StateVector::from_real(&[1.0, 1.0]).unwrap()
    }

    fn y_plus() -> StateVector {
        StateVector::normalized(vec![c64(1.0, 0.0), c64(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert_eq!(Operator::new(0, vec![]), Err(Error::InvalidDimension(0)));
        assert_eq!(Operator::identity(0), Err(Error::InvalidDimension(0)));
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let err = Operator::new(1, vec![c64(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, Error::NonFinite);
    }

    #[test]
    fn validate_identity_as_unitary() {
        let report = validate_operator(&Operator::identity(2).unwrap(), OperatorKind::Unitary, &TOL);
        assert!(report.passed);
        assert_eq!(report.deviation, 0.0);
    }

    #[test]
    fn validate_sigma_z_hermitian() {
        assert!(validate_operator(&sigma_z(), OperatorKind::Hermitian, &TOL).passed);
    }

    #[test]
    fn validate_shifted_sigma_z_fails() {
        let shifted = &sigma_z() + &Operator::identity(2).unwrap().scale(c64(0.0, 1e-3));
        let report = validate_operator(&shifted, OperatorKind::Hermitian, &TOL);
        assert!(!report.passed);
        assert_abs_diff_eq!(report.deviation, 2e-3, epsilon = 1e-15);
    }

    #[test]
    fn validate_density_and_povm_element() {
        let rho = DensityOperator::pure(&plus());
        assert!(validate_operator(rho.as_operator(), OperatorKind::Density, &TOL).passed);
        assert!(!validate_operator(&sigma_z(), OperatorKind::Density, &TOL).passed);
        assert!(!validate_operator(&sigma_z(), OperatorKind::PovmElement, &TOL).passed);
        let half = Operator::identity(2).unwrap().scale_real(0.5);
        assert!(validate_operator(&half, OperatorKind::PovmElement, &TOL).passed);
    }

    #[test]
    fn eigendecompose_sigma_z() {
        let spectrum = eigendecompose(&sigma_z(), &TOL).unwrap();
        assert_eq!(spectrum.eigenvalues(), &[-1.0, 1.0]);
        assert_eq!(spectrum.eigenvectors()[0], StateVector::basis(2, 1).unwrap());
        assert_eq!(spectrum.eigenvectors()[1], StateVector::basis(2, 0).unwrap());
        assert_eq!(spectrum.groups(), &[vec![0], vec![1]]);
    }

    #[test]
    fn eigendecompose_sigma_x_matches_analytic_vectors() {
        let spectrum = eigendecompose(&sigma_x(), &TOL).unwrap();
        assert_abs_diff_eq!(spectrum.eigenvalues()[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(spectrum.eigenvalues()[1], 1.0, epsilon = 1e-14);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let expected = [[h, -h], [h, h]];
        for (vector, want) in spectrum.eigenvectors().iter().zip(expected) {
            for (z, w) in vector.amplitudes().iter().zip(want) {
                assert_abs_diff_eq!(z.re, w, epsilon = 1e-14);
                assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn identity_forms_one_group() {
        let spectrum = eigendecompose(&Operator::identity(3).unwrap(), &TOL).unwrap();
        assert_eq!(spectrum.groups(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn eigendecompose_rejects_non_hermitian() {
        let op = Operator::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(matches!(
            eigendecompose(&op, &TOL),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn commutator_of_pauli_matrices() {
        let c = commutator(&sigma_x(), &sigma_z()).unwrap();
        let expected = sigma_y().scale(c64(0.0, -2.0));
        assert!(c.max_abs_diff(&expected).unwrap() < 1e-15);
        let zero = Operator::zeros(2).unwrap();
        assert_eq!(commutator(&sigma_x(), &sigma_x()).unwrap(), zero);
        assert_eq!(
            commutator(&sigma_x(), &Operator::identity(2).unwrap()).unwrap(),
            zero
        );
        assert!(matches!(
            commutator(&sigma_x(), &Operator::identity(3).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn expectation_values() {
        let zero = DensityOperator::pure(&StateVector::basis(2, 0).unwrap());
        assert_eq!(expectation(&sigma_z(), &zero).unwrap(), c64(1.0, 0.0));
        let mixed = DensityOperator::maximally_mixed(2).unwrap();
        assert_eq!(expectation(&sigma_z(), &mixed).unwrap(), c64(0.0, 0.0));
        let y = DensityOperator::pure(&y_plus());
        let value = expectation(&(&sigma_x() * &sigma_z()), &y).unwrap();
        assert_abs_diff_eq!(value.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(value.im, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn projectors() {
        let p0 = projector(&StateVector::basis(2, 0).unwrap(), &TOL).unwrap();
        assert_eq!(p0, Operator::diagonal(&[1.0, 0.0]).unwrap());
        let pp = projector(&plus(), &TOL).unwrap();
        for z in pp.entries() {
            assert_abs_diff_eq!(z.re, 0.5, epsilon = 1e-15);
            assert_eq!(z.im, 0.0);
        }
        assert!((&pp * &pp).max_abs_diff(&pp).unwrap() < 1e-15);
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let err = StateVector::new(vec![c64(1.0, 0.0), c64(1.0, 0.0)], &TOL).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
    }

    #[test]
    fn overlaps() {
        let zero = StateVector::basis(2, 0).unwrap();
        let one = StateVector::basis(2, 1).unwrap();
        assert_eq!(overlap(&zero, &zero).unwrap(), c64(1.0, 0.0));
        assert_eq!(overlap(&zero, &one).unwrap(), c64(0.0, 0.0));
        let value = overlap(&zero, &plus()).unwrap();
        assert_abs_diff_eq!(value.re, core::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn fourier_basis_is_orthonormal_and_unbiased() {
        for dim in 1..6 {
            let basis = Basis::fourier(dim).unwrap();
            assert!(orthonormality_deviation(basis.vectors()) < 1e-12);
            for v in basis.vectors() {
                for z in v.amplitudes() {
                    assert_abs_diff_eq!(z.norm_sqr(), 1.0 / dim as f64, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn basis_rejects_non_orthogonal_vectors() {
        let vectors = vec![StateVector::basis(2, 0).unwrap(), plus()];
        assert!(matches!(Basis::new(vectors, &TOL), Err(Error::InvalidBasis(_))));
    }
}
