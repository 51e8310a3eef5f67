use serde::Serialize;

use super::{MagnonDrive, SqueezeSpec, SystemParams, CONSTANTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    Nonfinite,
    RateNonpositive,
    KappaDecomp,
    EtaRange,
    EtaInconsistent,
    BiasFieldMismatch,
    SqueezeInstability,
    CouplingNegative,
    DriveNegative,
    PumpFrequencyNonpositive,
    RotationRateNegative,
    IndexRange,
    RadiusNonpositive,
    WavelengthNonpositive,
}

impl ViolationCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationCode::Nonfinite => "NONFINITE",
            ViolationCode::RateNonpositive => "RATE_NONPOSITIVE",
            ViolationCode::KappaDecomp => "KAPPA_DECOMP",
            ViolationCode::EtaRange => "ETA_RANGE",
            ViolationCode::EtaInconsistent => "ETA_INCONSISTENT",
            ViolationCode::BiasFieldMismatch => "BIAS_FIELD_MISMATCH",
            ViolationCode::SqueezeInstability => "SQUEEZE_INSTABILITY",
            ViolationCode::CouplingNegative => "COUPLING_NEGATIVE",
            ViolationCode::DriveNegative => "DRIVE_NEGATIVE",
            ViolationCode::PumpFrequencyNonpositive => "PUMP_FREQUENCY_NONPOSITIVE",
            ViolationCode::RotationRateNegative => "ROTATION_RATE_NEGATIVE",
            ViolationCode::IndexRange => "INDEX_RANGE",
            ViolationCode::RadiusNonpositive => "RADIUS_NONPOSITIVE",
            ViolationCode::WavelengthNonpositive => "WAVELENGTH_NONPOSITIVE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub message: String,
}

impl Violation {
    pub fn new(code: ViolationCode, message: impl Into<String>) -> Self {
        Violation {
            code,
            message: message.into(),
        }
    }
}

const DECOMP_RTOL: f64 = 1e-12;
const BIAS_RTOL: f64 = 1e-9;

/// Collects every violated invariant; an empty list means the record is valid.
pub fn validate(params: &SystemParams) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |code, msg: String| out.push(Violation::new(code, msg));

    let finite = [
        ("delta", params.delta.as_mhz()),
        ("delta_f", params.delta_f.as_mhz()),
        ("g0_1", params.g0_1.as_mhz()),
        ("g0_2", params.g0_2.as_mhz()),
        ("magnon.omega_m", params.magnon.omega_m.as_mhz()),
        ("magnon.gamma_m", params.magnon.gamma_m.as_mhz()),
        ("magnon.eta3", params.magnon.eta3),
        ("drives.eps_1", params.drives.eps_1),
        ("drives.eps_2", params.drives.eps_2),
        ("drives.eps_3", params.drives.magnon.amplitude()),
    ];
    for (name, v) in finite {
        if !v.is_finite() {
            push(ViolationCode::Nonfinite, format!("{name} is not finite"));
        }
    }

    for (j, cav) in [(1, &params.cavity_1), (2, &params.cavity_2)] {
        let total = cav.kappa_total.as_mhz();
        let ext = cav.kappa_external.as_mhz();
        let int = cav.kappa_intrinsic.as_mhz();
        if ![total, ext, int, cav.eta].iter().all(|v| v.is_finite()) {
            push(
                ViolationCode::Nonfinite,
                format!("cavity_{j} has a non-finite entry"),
            );
            continue;
        }
        if total <= 0.0 {
            push(
                ViolationCode::RateNonpositive,
                format!("κ{j} must be > 0, got {total} MHz"),
            );
            continue;
        }
        if (int + ext - total).abs() > DECOMP_RTOL * total.abs() {
            push(
                ViolationCode::KappaDecomp,
                format!("κ{j},0 + κ{j},e = {} ≠ κ{j} = {total} MHz", int + ext),
            );
        }
        if !(0.0..=1.0).contains(&cav.eta) {
            push(
                ViolationCode::EtaRange,
                format!("η{j} = {} outside [0, 1]", cav.eta),
            );
        }
        if (cav.eta - ext / total).abs() > DECOMP_RTOL {
            push(
                ViolationCode::EtaInconsistent,
                format!("η{j} = {} but κ{j},e/κ{j} = {}", cav.eta, ext / total),
            );
        }
    }

    let magnon = &params.magnon;
    if magnon.gamma_m.as_mhz() <= 0.0 {
        push(
            ViolationCode::RateNonpositive,
            format!("γm must be > 0, got {}", magnon.gamma_m),
        );
    }
    if !(0.0..=1.0).contains(&magnon.eta3) {
        push(
            ViolationCode::EtaRange,
            format!("η3 = {} outside [0, 1]", magnon.eta3),
        );
    }
    if let Some(h) = magnon.bias_field_t {
        let expected = CONSTANTS.gyromagnetic_ratio * h;
        let got = magnon.omega_m.as_hz();
        if !h.is_finite()
            || (got - expected).abs() > BIAS_RTOL * expected.abs().max(f64::MIN_POSITIVE)
        {
            push(
                ViolationCode::BiasFieldMismatch,
                format!("ωm = {} Hz but γH = {expected} Hz", got),
            );
        }
    }

    match params.squeeze {
        SqueezeSpec::Direct { g, omega_s } => {
            if !g.is_finite() || omega_s.is_some_and(|w| !w.is_finite()) {
                push(
                    ViolationCode::Nonfinite,
                    "squeeze G / ωs override not finite".into(),
                );
            }
        }
        SqueezeSpec::FromPump {
            delta_m,
            e_pump,
            omega_s,
        } => {
            let (dm, e) = (delta_m.as_mhz(), e_pump.as_mhz());
            if !dm.is_finite() || !e.is_finite() || omega_s.is_some_and(|w| !w.is_finite()) {
                push(
                    ViolationCode::Nonfinite,
                    "pump Δm / E / ωs not finite".into(),
                );
            } else if e.abs() >= dm.abs() || (dm + e) / (dm - e) <= 0.0 {
                push(
                    ViolationCode::SqueezeInstability,
                    format!("|E| = {} must be < |Δm| = {}", e.abs(), dm.abs()),
                );
            }
        }
    }

    for (name, g) in [("g0_1", params.g0_1), ("g0_2", params.g0_2)] {
        if g.as_mhz() < 0.0 {
            push(
                ViolationCode::CouplingNegative,
                format!("{name} must be ≥ 0, got {g}"),
            );
        }
    }

    let drives = &params.drives;
    for (name, v) in [
        ("ε1", drives.eps_1),
        ("ε2", drives.eps_2),
        (
            match drives.magnon {
                MagnonDrive::Effective(_) => "ε3′",
                MagnonDrive::Bare(_) => "ε3",
            },
            drives.magnon.amplitude(),
        ),
    ] {
        if v < 0.0 {
            push(
                ViolationCode::DriveNegative,
                format!("{name} must be ≥ 0, got {v}"),
            );
        }
    }
    if let Some(powers) = drives.powers_w {
        if powers.iter().any(|p| *p < 0.0) {
            push(
                ViolationCode::DriveNegative,
                format!("drive powers must be ≥ 0, got {powers:?}"),
            );
        }
        if drives.omega_p.as_mhz() <= 0.0 {
            push(
                ViolationCode::PumpFrequencyNonpositive,
                format!("ωp must be > 0, got {}", drives.omega_p),
            );
        }
    }

    out
}
