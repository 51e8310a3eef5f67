use serde::{Deserialize, Serialize};

use super::{Frequency, Violation, ViolationCode, CONSTANTS};
use crate::error::{Error, Result};

/// Sense of the resonator spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationDirection {
    Cw,
    Ccw,
    None,
}

impl RotationDirection {
    /// Sign applied to the shift of mode `a1` (the CCW mode).
    pub fn sign(self) -> f64 {
        match self {
            RotationDirection::Cw => 1.0,
            RotationDirection::Ccw => -1.0,
            RotationDirection::None => 0.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            RotationDirection::Cw => RotationDirection::Ccw,
            RotationDirection::Ccw => RotationDirection::Cw,
            RotationDirection::None => RotationDirection::None,
        }
    }
}

/// Spinning-resonator geometry and material, in SI units except `omega0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSpec {
    /// Rotation rate Ω/2π, Hz.
    pub omega_rot_hz: f64,
    pub direction: RotationDirection,
    /// Refractive index.
    pub n: f64,
    /// Resonator radius, m.
    pub r_m: f64,
    /// Vacuum wavelength, m.
    pub lambda0_m: f64,
    /// Dispersion dn/dλ, 1/m.
    pub dn_dlambda: f64,
    /// Cavity resonance ω0/2π.
    pub omega0: Frequency,
}

impl RotationSpec {
    /// Spinning-resonator values quoted for the feasibility estimate:
    /// n = 2.2, r = 1.1 mm, Ω/2π = 6.6 kHz, ω0/2π = 193 THz, CW spin.
    pub fn feasibility() -> Self {
        let omega0 = Frequency::from_thz(193.0);
        RotationSpec {
            omega_rot_hz: 6.6e3,
            direction: RotationDirection::Cw,
            n: 2.2,
            r_m: 1.1e-3,
            lambda0_m: CONSTANTS.c / omega0.as_hz(),
            dn_dlambda: 0.0,
            omega0,
        }
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let fields = [
            ("omega_rot_hz", self.omega_rot_hz),
            ("n", self.n),
            ("r_m", self.r_m),
            ("lambda0_m", self.lambda0_m),
            ("dn_dlambda", self.dn_dlambda),
            ("omega0", self.omega0.as_mhz()),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                out.push(Violation::new(
                    ViolationCode::Nonfinite,
                    format!("rotation.{name} is not finite"),
                ));
            }
        }
        if self.omega_rot_hz < 0.0 {
            out.push(Violation::new(
                ViolationCode::RotationRateNegative,
                format!(
                    "rotation rate must be ≥ 0 (magnitude), got {} Hz",
                    self.omega_rot_hz
                ),
            ));
        }
        if self.n <= 1.0 {
            out.push(Violation::new(
                ViolationCode::IndexRange,
                format!("refractive index must exceed 1, got {}", self.n),
            ));
        }
        if self.r_m <= 0.0 {
            out.push(Violation::new(
                ViolationCode::RadiusNonpositive,
                format!("radius must be > 0, got {} m", self.r_m),
            ));
        }
        if self.lambda0_m <= 0.0 {
            out.push(Violation::new(
                ViolationCode::WavelengthNonpositive,
                format!("wavelength must be > 0, got {} m", self.lambda0_m),
            ));
        }
        out
    }
}

/// Signed Fizeau shift of mode `a1`; mode `a2` receives the negation.
///
/// `Δ_F = s·Ω·n·r·ω0/c·[1 − 1/n² − (λ/n)(dn/dλ)]` with `s = +1` for CW spin,
/// `−1` for CCW and `0` without rotation. `first_term_only` replaces the
/// bracket by 1.
pub fn fizeau_shift(rot: &RotationSpec, first_term_only: bool) -> Result<Frequency> {
    let violations = rot.violations();
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let bracket = if first_term_only {
        1.0
    } else {
        1.0 - 1.0 / (rot.n * rot.n) - (rot.lambda0_m / rot.n) * rot.dn_dlambda
    };
    // Ω is angular (2π·omega_rot_hz) while ω0 stays linear, so the product is
    // already the linear shift Δ_F/2π.
    let omega = 2.0 * std::f64::consts::PI * rot.omega_rot_hz;
    let shift_hz = omega * rot.n * rot.r_m * rot.omega0.as_hz() / CONSTANTS.c * bracket;
    Ok(Frequency::from_hz(rot.direction.sign() * shift_hz))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasibility_first_term() {
        let df = fizeau_shift(&RotationSpec::feasibility(), true).unwrap();
        assert!((df.as_mhz() - 64.61).abs() < 0.005, "{df}");
    }

    #[test]
    fn feasibility_full_bracket() {
        // 64.606 × (1 − 1/2.2²) evaluated by hand
        let df = fizeau_shift(&RotationSpec::feasibility(), false).unwrap();
        assert!((df.as_mhz() - 51.258).abs() < 0.001, "{df}");
    }

    #[test]
    fn no_rotation_no_shift() {
        let rot = RotationSpec {
            direction: RotationDirection::None,
            ..RotationSpec::feasibility()
        };
        assert_eq!(fizeau_shift(&rot, false).unwrap(), Frequency::ZERO.abs());
        assert_eq!(fizeau_shift(&rot, true).unwrap().as_mhz(), 0.0);
    }

    #[test]
    fn reversing_spin_negates_exactly() {
        let cw = RotationSpec::feasibility();
        let ccw = RotationSpec {
            direction: cw.direction.reversed(),
            ..cw
        };
        for first in [true, false] {
            let a = fizeau_shift(&cw, first).unwrap();
            let b = fizeau_shift(&ccw, first).unwrap();
            assert_eq!(a, -b);
        }
    }

    #[test]
    fn dispersion_term_enters_bracket() {
        let rot = RotationSpec {
            dn_dlambda: -1e4,
            ..RotationSpec::feasibility()
        };
        let base = fizeau_shift(&RotationSpec::feasibility(), false).unwrap();
        let with = fizeau_shift(&rot, false).unwrap();
        let first = fizeau_shift(&rot, true).unwrap();
        let extra = -(rot.lambda0_m / rot.n) * rot.dn_dlambda;
        assert!(((with - base).as_mhz() - first.as_mhz() * extra).abs() < 1e-9);
    }

    #[test]
    fn invalid_geometry_rejected() {
        let rot = RotationSpec {
            n: 1.0,
            r_m: 0.0,
            ..RotationSpec::feasibility()
        };
        match fizeau_shift(&rot, true) {
            Err(Error::Validation(v)) => assert_eq!(v.len(), 2),
            other => panic!("{other:?}"),
        }
    }
}
