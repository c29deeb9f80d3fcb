#![allow(dead_code)]

use qstat_core::{c64, eigendecompose, Basis, Complex64, DensityOperator, Operator, StateVector, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const TOL: Tolerances = Tolerances::DEFAULT;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    Operator::from_fn(dim, |_, _| gaussian(rng)).unwrap()
}

pub fn hermitian(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    ginibre(rng, dim).hermitian_part()
}

pub fn state(rng: &mut ChaCha8Rng, dim: usize) -> StateVector {
    StateVector::normalized((0..dim).map(|_| gaussian(rng)).collect()).unwrap()
}

/// Full-rank mixed state `G G† / Tr(G G†)`.
pub fn density(rng: &mut ChaCha8Rng, dim: usize) -> DensityOperator {
    let g = ginibre(rng, dim);
    let p = &g * &g.adjoint();
    let tr = p.trace().re;
    DensityOperator::new(p.scale_real(1.0 / tr), &TOL).unwrap()
}

pub fn basis(rng: &mut ChaCha8Rng, dim: usize) -> Basis {
    Basis::from_spectrum(&eigendecompose(&hermitian(rng, dim), &TOL).unwrap())
}

pub fn unitary(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    let b = basis(rng, dim);
    Operator::from_fn(dim, |r, c| b.vector(c).amplitudes()[r]).unwrap()
}

/// Computational and Fourier bases rotated by a common random unitary.
pub fn unbiased_pair(rng: &mut ChaCha8Rng, dim: usize) -> (Basis, Basis) {
    let u = unitary(rng, dim);
    (
        Basis::computational(dim).unwrap().transformed(&u, &TOL).unwrap(),
        Basis::fourier(dim).unwrap().transformed(&u, &TOL).unwrap(),
    )
}
