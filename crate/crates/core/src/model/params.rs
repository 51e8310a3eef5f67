use super::{validate, Frequency, CONSTANTS};
use crate::error::{Error, Result};

/// Loss budget of one optical mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityModeParams {
    pub kappa_total: Frequency,
    pub kappa_external: Frequency,
    pub kappa_intrinsic: Frequency,
    /// External-to-total ratio κe/κ.
    pub eta: f64,
}

impl CavityModeParams {
    pub fn from_total_eta(kappa_total: Frequency, eta: f64) -> Self {
        let ext = kappa_total * eta;
        CavityModeParams {
            kappa_total,
            kappa_external: ext,
            kappa_intrinsic: kappa_total - ext,
            eta,
        }
    }

    pub fn from_total_external(kappa_total: Frequency, kappa_external: Frequency) -> Self {
        CavityModeParams {
            kappa_total,
            kappa_external,
            kappa_intrinsic: kappa_total - kappa_external,
            eta: kappa_external / kappa_total,
        }
    }

    /// Same η, new total rate.
    pub fn with_total(&self, kappa_total: Frequency) -> Self {
        Self::from_total_eta(kappa_total, self.eta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnonParams {
    pub omega_m: Frequency,
    pub gamma_m: Frequency,
    pub eta3: f64,
    /// Bias field H in tesla; when present ωm must equal γH.
    pub bias_field_t: Option<f64>,
}

/// How the magnon squeezing enters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SqueezeSpec {
    /// Squeezing parameter G given directly.
    Direct { g: f64, omega_s: Option<Frequency> },
    /// G derived from the parametric pump, G = ¼·ln((Δm+E)/(Δm−E)).
    FromPump {
        delta_m: Frequency,
        e_pump: Frequency,
        omega_s: Option<Frequency>,
    },
}

impl SqueezeSpec {
    pub fn direct(g: f64) -> Self {
        SqueezeSpec::Direct { g, omega_s: None }
    }

    pub fn omega_s_override(&self) -> Option<Frequency> {
        match *self {
            SqueezeSpec::Direct { omega_s, .. } | SqueezeSpec::FromPump { omega_s, .. } => omega_s,
        }
    }

    pub fn with_omega_s(self, value: Frequency) -> Self {
        match self {
            SqueezeSpec::Direct { g, .. } => SqueezeSpec::Direct {
                g,
                omega_s: Some(value),
            },
            SqueezeSpec::FromPump {
                delta_m, e_pump, ..
            } => SqueezeSpec::FromPump {
                delta_m,
                e_pump,
                omega_s: Some(value),
            },
        }
    }
}

/// Quantities of the squeezed-magnon frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    /// Squeezing parameter G.
    pub squeeze_g: f64,
    pub g_eff_1: Frequency,
    pub g_eff_2: Frequency,
    /// ε3′/ε3 = e^{−G}.
    pub eps3_eff_factor: f64,
    pub omega_s: Frequency,
}

/// Coherent drive on the magnon, either already in the squeezed frame
/// (ε3′) or as the bare amplitude ε3 that picks up e^{−G}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MagnonDrive {
    Effective(f64),
    Bare(f64),
}

impl MagnonDrive {
    pub fn amplitude(self) -> f64 {
        match self {
            MagnonDrive::Effective(v) | MagnonDrive::Bare(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    /// Input powers (P1, P2, P3) in W when the amplitudes were derived from them.
    pub powers_w: Option<[f64; 3]>,
    /// Shared drive frequency ωp = ωd/2.
    pub omega_p: Frequency,
    pub eps_1: f64,
    pub eps_2: f64,
    pub magnon: MagnonDrive,
}

impl DriveParams {
    /// ε1 = ε2 = ε3′ = `eps`.
    pub fn symmetric(eps: f64, omega_p: Frequency) -> Self {
        DriveParams {
            powers_w: None,
            omega_p,
            eps_1: eps,
            eps_2: eps,
            magnon: MagnonDrive::Effective(eps),
        }
    }

    /// εj = √(Pj/ħωp); the magnon amplitude is the bare ε3.
    pub fn from_powers(powers_w: [f64; 3], omega_p: Frequency) -> Result<Self> {
        Ok(DriveParams {
            powers_w: Some(powers_w),
            omega_p,
            eps_1: drive_amplitude(powers_w[0], omega_p)?,
            eps_2: drive_amplitude(powers_w[1], omega_p)?,
            magnon: MagnonDrive::Bare(drive_amplitude(powers_w[2], omega_p)?),
        })
    }

    pub fn eps3_eff(&self, eff: &EffectiveParams) -> f64 {
        match self.magnon {
            MagnonDrive::Effective(v) => v,
            MagnonDrive::Bare(v) => v * eff.eps3_eff_factor,
        }
    }
}

/// Drive amplitude √(P/ħω) in s^(−1/2) for power `power_w` (W) at linear
/// frequency `omega_p`.
pub fn drive_amplitude(power_w: f64, omega_p: Frequency) -> Result<f64> {
    use super::{Violation, ViolationCode};
    if !(power_w >= 0.0) || !power_w.is_finite() {
        return Err(Error::Validation(vec![Violation::new(
            ViolationCode::DriveNegative,
            format!("drive power must be finite and ≥ 0, got {power_w} W"),
        )]));
    }
    if !(omega_p.as_mhz() > 0.0) || !omega_p.is_finite() {
        return Err(Error::Validation(vec![Violation::new(
            ViolationCode::PumpFrequencyNonpositive,
            format!("drive frequency must be > 0, got {omega_p}"),
        )]));
    }
    let photon_energy = CONSTANTS.hbar * 2.0 * std::f64::consts::PI * omega_p.as_hz();
    Ok((power_w / photon_energy).sqrt())
}

/// Complete parameter record of the three-mode system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub cavity_1: CavityModeParams,
    pub cavity_2: CavityModeParams,
    pub magnon: MagnonParams,
    pub squeeze: SqueezeSpec,
    pub drives: DriveParams,
    /// Bare couplings g1, g2.
    pub g0_1: Frequency,
    pub g0_2: Frequency,
    /// Δ = ω0 − ωd/2.
    pub delta: Frequency,
    /// Signed Fizeau shift of mode a1.
    pub delta_f: Frequency,
}

/// Inputs of the equal-parameter configuration: κ1 = κ2, η1 = η2 = η3,
/// g′1 = g′2 and ε1 = ε2 = ε3′.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricSetup {
    pub delta: Frequency,
    pub delta_f: Frequency,
    pub g0: Frequency,
    pub squeeze_g: f64,
    pub kappa: Frequency,
    pub gamma_m: Frequency,
    pub eta: f64,
    pub omega_s: Frequency,
    pub omega_m: Frequency,
    /// Optical resonance ω0, also used as ωp.
    pub omega0: Frequency,
    /// Input power per port (W); sets ε = √(P/ħω0).
    pub power_w: f64,
}

impl Default for SymmetricSetup {
    /// Δ = 0, g0 = 41 MHz, G = 0.5, κ = 1.1 MHz, γm = 4 MHz, η = 0.5,
    /// ωm = 10.1 GHz, P = 100 mW, ωs = 0.
    fn default() -> Self {
        SymmetricSetup {
            delta: Frequency::ZERO,
            delta_f: Frequency::ZERO,
            g0: Frequency::mhz(41.0),
            squeeze_g: 0.5,
            kappa: Frequency::mhz(1.1),
            gamma_m: Frequency::mhz(4.0),
            eta: 0.5,
            omega_s: Frequency::ZERO,
            omega_m: Frequency::mhz(10_100.0),
            omega0: Frequency::from_thz(193.0),
            power_w: 0.1,
        }
    }
}

impl SystemParams {
    pub fn symmetric(setup: SymmetricSetup) -> Result<Self> {
        let cavity = CavityModeParams::from_total_eta(setup.kappa, setup.eta);
        let eps = drive_amplitude(setup.power_w, setup.omega0)?;
        let params = SystemParams {
            cavity_1: cavity,
            cavity_2: cavity,
            magnon: MagnonParams {
                omega_m: setup.omega_m,
                gamma_m: setup.gamma_m,
                eta3: setup.eta,
                bias_field_t: None,
            },
            squeeze: SqueezeSpec::Direct {
                g: setup.squeeze_g,
                omega_s: Some(setup.omega_s),
            },
            drives: DriveParams::symmetric(eps, setup.omega0),
            g0_1: setup.g0,
            g0_2: setup.g0,
            delta: setup.delta,
            delta_f: setup.delta_f,
        };
        params.ensure_valid()?;
        Ok(params)
    }

    /// Standard working point (see [`SymmetricSetup::default`]) with Δ_F = 0.
    pub fn fig2() -> Self {
        Self::symmetric(SymmetricSetup::default()).expect("default parameters are valid")
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let violations = validate(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(violations))
        }
    }

    /// (Δ1, Δ2) = (Δ + Δ_F, Δ − Δ_F).
    pub fn detunings(&self) -> (Frequency, Frequency) {
        (self.delta + self.delta_f, self.delta - self.delta_f)
    }

    pub fn effective(&self) -> Result<EffectiveParams> {
        derive_effective(self)
    }

    pub fn with_delta_f(mut self, delta_f: Frequency) -> Self {
        self.delta_f = delta_f;
        self
    }

    /// Both cavity modes get total rate `kappa`, keeping their η.
    pub fn with_kappa(mut self, kappa: Frequency) -> Self {
        self.cavity_1 = self.cavity_1.with_total(kappa);
        self.cavity_2 = self.cavity_2.with_total(kappa);
        self
    }

    pub fn with_gamma_m(mut self, gamma_m: Frequency) -> Self {
        self.magnon.gamma_m = gamma_m;
        self
    }

    /// Replace the squeezing by G directly, keeping the current ωs.
    pub fn with_squeeze_g(mut self, g: f64) -> Self {
        let omega_s = self
            .squeeze
            .omega_s_override()
            .or_else(|| derive_effective(&self).ok().map(|e| e.omega_s));
        self.squeeze = SqueezeSpec::Direct { g, omega_s };
        self
    }

    pub fn with_omega_s(mut self, omega_s: Frequency) -> Self {
        self.squeeze = self.squeeze.with_omega_s(omega_s);
        self
    }
}

/// Squeezed-frame couplings, magnon drive factor and ωs.
pub fn derive_effective(params: &SystemParams) -> Result<EffectiveParams> {
    let (g, omega_s) = match params.squeeze {
        SqueezeSpec::Direct { g, omega_s } => {
            if !g.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "squeezing parameter G = {g} is not finite"
                )));
            }
            (g, omega_s.unwrap_or(Frequency::ZERO))
        }
        SqueezeSpec::FromPump {
            delta_m,
            e_pump,
            omega_s,
        } => {
            let (dm, e) = (delta_m.as_mhz(), e_pump.as_mhz());
            let ratio = (dm + e) / (dm - e);
            if !(e.abs() < dm.abs()) || !(ratio > 0.0) {
                return Err(Error::SqueezingInstability {
                    delta_m: dm,
                    e_pump: e,
                });
            }
            let g = 0.25 * ratio.ln();
            let natural = Frequency::mhz((dm * dm - e * e).sqrt());
            (g, omega_s.unwrap_or(natural))
        }
    };
    let stretch = (2.0 * g).cosh();
    Ok(EffectiveParams {
        squeeze_g: g,
        g_eff_1: params.g0_1 * stretch,
        g_eff_2: params.g0_2 * stretch,
        eps3_eff_factor: (-g).exp(),
        omega_s,
    })
}
