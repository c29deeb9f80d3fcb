//! Seeded random operators and states.

use qstat_core::{c64, eigendecompose, Basis, Complex64, DensityOperator, Operator, StateVector, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Generator for `seed`; distinct `stream`s give independent sequences.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix of independent standard complex Gaussians.
pub fn ginibre(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    Operator::from_fn(dim, |_, _| gaussian(rng)).expect("positive dimension")
}

/// Hermitian part of a Ginibre matrix.
pub fn hermitian(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    ginibre(rng, dim).hermitian_part()
}

/// Uniformly distributed pure state.
pub fn state(rng: &mut ChaCha8Rng, dim: usize) -> StateVector {
    StateVector::normalized((0..dim).map(|_| gaussian(rng)).collect()).expect("nonzero Gaussian vector")
}

/// Full-rank mixed state `G G† / Tr(G G†)`.
pub fn density(rng: &mut ChaCha8Rng, dim: usize) -> DensityOperator {
    let g = ginibre(rng, dim);
    let p = &g * &g.adjoint();
    let tr = p.trace().re;
    DensityOperator::new(p.scale_real(1.0 / tr), &Tolerances::DEFAULT).expect("G G† is a valid state")
}

/// Eigenbasis of a random Hermitian operator.
pub fn basis(rng: &mut ChaCha8Rng, dim: usize) -> Basis {
    let spectrum = eigendecompose(&hermitian(rng, dim), &Tolerances::DEFAULT).expect("Hermitian input");
    Basis::from_spectrum(&spectrum)
}

/// Unitary whose columns are a random orthonormal basis.
pub fn unitary(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    let b = basis(rng, dim);
    Operator::from_fn(dim, |r, c| b.vector(c).amplitudes()[r]).expect("positive dimension")
}

/// Computational and Fourier bases rotated by a common random unitary, so
/// every overlap has magnitude `1/sqrt(dim)`.
pub fn unbiased_pair(rng: &mut ChaCha8Rng, dim: usize) -> (Basis, Basis) {
    let u = unitary(rng, dim);
    let tol = Tolerances::DEFAULT;
    let rotate = |b: Basis| b.transformed(&u, &tol).expect("unitary rotation");
    (
        rotate(Basis::computational(dim).expect("positive dimension")),
        rotate(Basis::fourier(dim).expect("positive dimension")),
    )
}
