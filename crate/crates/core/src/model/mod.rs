//! Parameter records for the two-WGM + magnon system and the maps that
//! derive effective quantities from them.
//!
//! All frequency-like quantities are stored as linear frequencies in MHz
//! (the number quoted as `X/2π`). The steady-state equations are homogeneous
//! in frequency, so transmissions and isolation ratios come out identical to
//! an angular-frequency evaluation.

mod params;
mod rotation;
mod validate;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

pub use params::{
    derive_effective, drive_amplitude, CavityModeParams, DriveParams, EffectiveParams, MagnonDrive,
    MagnonParams, SqueezeSpec, SymmetricSetup, SystemParams,
};
pub use rotation::{fizeau_shift, RotationDirection, RotationSpec};
pub use validate::{validate, Violation, ViolationCode};

/// Linear frequency in MHz.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Frequency(f64);

impl Frequency {
    pub const ZERO: Frequency = Frequency(0.0);

    pub const fn mhz(value: f64) -> Self {
        Frequency(value)
    }

    pub fn from_hz(hz: f64) -> Self {
        Frequency(hz * 1e-6)
    }

    pub fn from_thz(thz: f64) -> Self {
        Frequency(thz * 1e6)
    }

    pub const fn as_mhz(self) -> f64 {
        self.0
    }

    pub fn as_hz(self) -> f64 {
        self.0 * 1e6
    }

    pub fn abs(self) -> Self {
        Frequency(self.0.abs())
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} MHz", self.0)
    }
}

impl Neg for Frequency {
    type Output = Frequency;
    fn neg(self) -> Frequency {
        Frequency(-self.0)
    }
}

impl Add for Frequency {
    type Output = Frequency;
    fn add(self, rhs: Frequency) -> Frequency {
        Frequency(self.0 + rhs.0)
    }
}

impl Sub for Frequency {
    type Output = Frequency;
    fn sub(self, rhs: Frequency) -> Frequency {
        Frequency(self.0 - rhs.0)
    }
}

impl Mul<f64> for Frequency {
    type Output = Frequency;
    fn mul(self, rhs: f64) -> Frequency {
        Frequency(self.0 * rhs)
    }
}

impl Div for Frequency {
    type Output = f64;
    fn div(self, rhs: Frequency) -> f64 {
        self.0 / rhs.0
    }
}

/// Fixed physical constants (SI).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light, m/s.
    pub c: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Gyromagnetic ratio γ/2π, Hz/T.
    pub gyromagnetic_ratio: f64,
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    c: 2.997_924_58e8,
    hbar: 1.054_571_817e-34,
    gyromagnetic_ratio: 28e9,
};

/// Default feasible Fizeau band, MHz.
pub const FEASIBLE_BAND_MHZ: (f64, f64) = (-65.0, 65.0);
