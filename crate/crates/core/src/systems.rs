//! Standard model systems: Pauli matrices, spin-j operators, truncated oscillator.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::float;
use crate::hilbert::{Operator, StateVector};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Pauli {
    pub sx: Operator,
    pub sy: Operator,
    pub sz: Operator,
    pub id: Operator,
}

pub fn pauli() -> Pauli {
    let c = Complex64::new;
    let mk = |rows: [[Complex64; 2]; 2]| Operator::from_rows(&rows).expect("2x2 literal");
    Pauli {
        sx: mk([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
        sy: mk([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]),
        sz: mk([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]),
        id: mk([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]),
    }
}

/// Angular momentum operators for spin `j = two_j / 2` in the basis
/// `m = j, j-1, ..., -j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spin {
    pub two_j: u32,
    pub jx: Operator,
    pub jy: Operator,
    pub jz: Operator,
}

impl Spin {
    #[inline]
    pub fn j(&self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    /// Magnetic quantum number of basis index `k`.
    #[inline]
    pub fn m(&self, k: usize) -> f64 {
        self.j() - k as f64
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }
}

pub fn spin(two_j: u32, hbar: f64) -> Result<Spin> {
    if two_j == 0 {
        return Err(Error::InvalidDimension(1));
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::InvalidParameter { name: "hbar", value: hbar });
    }
    let d = two_j as usize + 1;
    let j = f64::from(two_j) / 2.0;
    let m = |k: usize| j - k as f64;
    let jz = Operator::diagonal(&(0..d).map(|k| hbar * m(k)).collect::<Vec<_>>())?;
    // J+ |m> lands on index k-1
    let raise = Operator::from_fn(d, |r, c| {
        if r + 1 == c {
            let mc = m(c);
            Complex64::new(hbar * float::sqrt(j * (j + 1.0) - mc * (mc + 1.0)), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    let lower = raise.adjoint();
    let jx = (&raise + &lower).scale_real(0.5);
    let jy = (&raise - &lower).scale(Complex64::new(0.0, -0.5));
    Ok(Spin { two_j, jx, jy, jz })
}

/// Spin-coherent state pointing along polar angle `theta`, azimuth `phi`.
pub fn spin_coherent_state(two_j: u32, theta: f64, phi: f64) -> Result<StateVector> {
    if two_j == 0 {
        return Err(Error::InvalidDimension(1));
    }
    let n = two_j as usize;
    let j = f64::from(two_j) / 2.0;
    let (c, s) = (float::cos(theta / 2.0), float::sin(theta / 2.0));
    // log binomial avoids overflow for large spins
    let mut log_binom = 0.0;
    let mut amps = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            log_binom += libm::log((n - k + 1) as f64) - libm::log(k as f64);
        }
        let up = (n - k) as i32;
        let magnitude = float::exp(0.5 * log_binom) * libm::pow(c, f64::from(up)) * libm::pow(s, k as f64);
        let m = j - k as f64;
        amps.push(float::phase_factor(m * phi) * magnitude);
    }
    StateVector::normalized(amps)
}

/// Harmonic oscillator truncated to `dim` number states.
#[derive(Debug, Clone, PartialEq)]
pub struct Oscillator {
    pub number: Operator,
    pub annihilation: Operator,
    pub hamiltonian: Operator,
}

pub fn oscillator(dim: usize, omega: f64, hbar: f64) -> Result<Oscillator> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    let number = Operator::diagonal(&(0..dim).map(|n| n as f64).collect::<Vec<_>>())?;
    let annihilation = Operator::from_fn(dim, |r, c| {
        if c == r + 1 {
            Complex64::new(float::sqrt(c as f64), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    let hamiltonian = Operator::diagonal(&(0..dim).map(|n| hbar * omega * (n as f64 + 0.5)).collect::<Vec<_>>())?;
    Ok(Oscillator {
        number,
        annihilation,
        hamiltonian,
    })
}

/// Coherent state `|alpha>` truncated to `dim` levels and renormalized.
pub fn oscillator_coherent(dim: usize, alpha: Complex64) -> Result<StateVector> {
    if dim == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut amps = Vec::with_capacity(dim);
    let mut current = Complex64::new(float::exp(-0.5 * alpha.norm_sqr()), 0.0);
    for n in 0..dim {
        if n > 0 {
            current = current * alpha / float::sqrt(n as f64);
        }
        amps.push(current);
    }
    StateVector::normalized(amps)
}
