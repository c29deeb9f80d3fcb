/// Numerical thresholds shared by every operation.
///
/// A single record keeps acceptance checks tunable from one place. The
/// defaults match the documented contract of each operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation of a state norm (or density trace) from 1.
    pub norm: f64,
    /// Allowed max-entry deviation of `M - M†`, scaled by `max(1, max|M_ij|)`.
    pub hermitian: f64,
    /// Smallest eigenvalue still accepted as non-negative.
    pub psd: f64,
    /// Allowed deviation from orthonormality of basis vectors.
    pub orthonormal: f64,
    /// Relative reconstruction error of a spectral decomposition.
    pub reconstruction: f64,
    /// Relative degeneracy threshold (scaled by the spectral range).
    pub degeneracy: f64,
    /// Absolute floor for the degeneracy threshold.
    pub degeneracy_floor: f64,
    /// Level weights below this are treated as undefined action phases.
    pub weight: f64,
    /// Overlaps below this magnitude cannot condition a weak value.
    pub overlap: f64,
    /// Probabilities closer than this are considered tied.
    pub tie: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        norm: 1e-10,
        hermitian: 1e-10,
        psd: 1e-10,
        orthonormal: 1e-9,
        reconstruction: 1e-9,
        degeneracy: 1e-9,
        degeneracy_floor: 1e-12,
        weight: 1e-12,
        overlap: 1e-10,
        tie: 1e-12,
    };

    /// Degeneracy threshold for eigenvalues spanning `range`.
    pub fn degeneracy_threshold(&self, range: f64) -> f64 {
        (self.degeneracy * range).max(self.degeneracy_floor)
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
