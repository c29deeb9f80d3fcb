//! Physical constants for natural and SI unit systems.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub hbar: f64,
    pub k_b: f64,
    pub c: f64,
}

impl Units {
    pub const NATURAL: Self = Self {
        hbar: 1.0,
        k_b: 1.0,
        c: 1.0,
    };

    /// CODATA 2018 exact values.
    pub const SI: Self = Self {
        hbar: 1.054_571_817e-34,
        k_b: 1.380_649e-23,
        c: 299_792_458.0,
    };

    /// Lower bound `hbar c / 2` on the position-energy uncertainty product.
    #[inline]
    pub fn position_energy_bound(&self) -> f64 {
        self.hbar * self.c / 2.0
    }
}

impl Default for Units {
    fn default() -> Self {
        Self::NATURAL
    }
}
