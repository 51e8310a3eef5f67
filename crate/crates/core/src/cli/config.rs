//! JSON configuration: schema, defaults, `--set` overrides and resolution
//! into [`SystemParams`].
//!
//! Frequencies are linear MHz; the rotation block is SI. Every key is
//! optional and defaults to the standard working point with ωs = 0 and no
//! rotation.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analysis::Band;
use crate::error::{Error, Result};
use crate::model::{
    drive_amplitude, fizeau_shift, CavityModeParams, DriveParams, Frequency, MagnonDrive,
    MagnonParams, RotationDirection, RotationSpec, SqueezeSpec, SystemParams, Violation, CONSTANTS,
    FEASIBLE_BAND_MHZ,
};

/// A value given once for both modes or as a `[mode 1, mode 2]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerMode<T> {
    Both(T),
    Pair([T; 2]),
}

impl<T: Copy> PerMode<T> {
    pub fn get(&self) -> [T; 2] {
        match *self {
            PerMode::Both(v) => [v, v],
            PerMode::Pair(p) => p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KappaSpec {
    Total(f64),
    Split(KappaSplit),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaSplit {
    pub total: f64,
    pub external: f64,
}

/// Either input powers (W) or amplitudes ε (√Hz). With `eps` the third
/// entry is the squeezed-frame magnon drive ε3′; with `power_w` it is the
/// bare ε3, which picks up e^{−G}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_w: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<[f64; 3]>,
}

impl Default for DriveConfig {
    fn default() -> Self {
        let eps = drive_amplitude(0.1, Frequency::from_thz(193.0)).expect("positive power");
        DriveConfig {
            power_w: None,
            eps: Some([eps; 3]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RotationConfig {
    pub omega_rot_hz: f64,
    pub direction: RotationDirection,
    pub n: f64,
    pub r_m: f64,
    /// Defaults to c/ω0.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_m: Option<f64>,
    pub dn_dlambda: f64,
    pub omega0_thz: f64,
}

impl Default for RotationConfig {
    fn default() -> Self {
        let f = RotationSpec::feasibility();
        RotationConfig {
            omega_rot_hz: f.omega_rot_hz,
            direction: RotationDirection::None,
            n: f.n,
            r_m: f.r_m,
            lambda_m: None,
            dn_dlambda: f.dn_dlambda,
            omega0_thz: 193.0,
        }
    }
}

impl RotationConfig {
    pub fn spec(&self) -> RotationSpec {
        let omega0 = Frequency::from_thz(self.omega0_thz);
        RotationSpec {
            omega_rot_hz: self.omega_rot_hz,
            direction: self.direction,
            n: self.n,
            r_m: self.r_m,
            lambda0_m: self.lambda_m.unwrap_or(CONSTANTS.c / omega0.as_hz()),
            dn_dlambda: self.dn_dlambda,
            omega0,
        }
    }
}

/// Parametric pump; when present G and ωs are derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpConfig {
    pub delta_m_mhz: f64,
    pub e_mhz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigDocument {
    pub g0_mhz: PerMode<f64>,
    /// Squeezing parameter; defaults to 0.5 unless `pump` is given.
    #[serde(rename = "G", skip_serializing_if = "Option::is_none")]
    pub squeeze_g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pump: Option<PumpConfig>,
    pub kappa_mhz: PerMode<KappaSpec>,
    pub gamma_m_mhz: f64,
    /// κe/κ for modes given by total rate only; defaults to 0.5.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Magnon coupling efficiency; defaults to η of mode 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta3: Option<f64>,
    pub omega_m_mhz: f64,
    pub delta_mhz: f64,
    /// Overrides the shift computed from `rotation`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_f_mhz: Option<f64>,
    /// Defaults to 0, or to √(Δm² − E²) with a pump.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_s_mhz: Option<f64>,
    pub drive: DriveConfig,
    pub rotation: RotationConfig,
    pub band_mhz: [f64; 2],
}

impl Default for ConfigDocument {
    fn default() -> Self {
        ConfigDocument {
            g0_mhz: PerMode::Both(41.0),
            squeeze_g: None,
            pump: None,
            kappa_mhz: PerMode::Both(KappaSpec::Total(1.1)),
            gamma_m_mhz: 4.0,
            eta: None,
            eta3: None,
            omega_m_mhz: 10_100.0,
            delta_mhz: 0.0,
            delta_f_mhz: None,
            omega_s_mhz: None,
            drive: DriveConfig::default(),
            rotation: RotationConfig::default(),
            band_mhz: [FEASIBLE_BAND_MHZ.0, FEASIBLE_BAND_MHZ.1],
        }
    }
}

const DEFAULT_G: f64 = 0.5;
const DEFAULT_ETA: f64 = 0.5;

impl ConfigDocument {
    /// Defaults, then `file` (a JSON object), then each `key=value`
    /// override. Keys are dotted paths; values are parsed as JSON and fall
    /// back to a plain string.
    pub fn load(file: Option<&str>, overrides: &[String]) -> Result<Self> {
        let mut doc = match file {
            Some(text) => serde_json::from_str::<Value>(text)
                .map_err(|e| Error::InvalidInput(format!("config is not valid JSON: {e}")))?,
            None => Value::Object(Default::default()),
        };
        if !doc.is_object() {
            return Err(Error::InvalidInput("config must be a JSON object".into()));
        }
        let defaults = serde_json::to_value(ConfigDocument::default()).expect("defaults serialize");
        for item in overrides {
            let (key, raw) = item.split_once('=').ok_or_else(|| {
                Error::InvalidInput(format!("--set expects key=value, got '{item}'"))
            })?;
            let value =
                serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
            set_path(&mut doc, &defaults, key, value)?;
        }
        serde_json::from_value(doc).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    pub fn band(&self) -> Result<Band> {
        Band::new(self.band_mhz[0], self.band_mhz[1])
    }

    /// Δ_F from `delta_f_mhz`, else from the rotation block.
    pub fn delta_f(&self) -> Result<Frequency> {
        match self.delta_f_mhz {
            Some(v) => Ok(Frequency::mhz(v)),
            None => fizeau_shift(&self.rotation.spec(), false),
        }
    }

    /// Builds the parameter record without validating it.
    pub fn to_params_unchecked(&self) -> Result<SystemParams> {
        let omega0 = Frequency::from_thz(self.rotation.omega0_thz);
        let eta_default = self.eta.unwrap_or(DEFAULT_ETA);
        let cavity = |k: KappaSpec| match k {
            KappaSpec::Total(t) => CavityModeParams::from_total_eta(Frequency::mhz(t), eta_default),
            KappaSpec::Split(s) => {
                let mut c = CavityModeParams::from_total_external(
                    Frequency::mhz(s.total),
                    Frequency::mhz(s.external),
                );
                // an explicit η that disagrees is kept so validation reports it
                if let Some(eta) = self.eta {
                    c.eta = eta;
                }
                c
            }
        };
        let [k1, k2] = self.kappa_mhz.get();
        let (cavity_1, cavity_2) = (cavity(k1), cavity(k2));

        let omega_s = self.omega_s_mhz.map(Frequency::mhz);
        let squeeze = match (self.pump, self.squeeze_g) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidInput(
                    "give either G or pump, not both".into(),
                ))
            }
            (Some(p), None) => SqueezeSpec::FromPump {
                delta_m: Frequency::mhz(p.delta_m_mhz),
                e_pump: Frequency::mhz(p.e_mhz),
                omega_s,
            },
            (None, g) => SqueezeSpec::Direct {
                g: g.unwrap_or(DEFAULT_G),
                omega_s: Some(omega_s.unwrap_or(Frequency::ZERO)),
            },
        };

        let drives = match (self.drive.power_w, self.drive.eps) {
            (Some(p), None) => DriveParams::from_powers(p, omega0)?,
            (None, Some([e1, e2, e3])) => DriveParams {
                powers_w: None,
                omega_p: omega0,
                eps_1: e1,
                eps_2: e2,
                magnon: MagnonDrive::Effective(e3),
            },
            _ => {
                return Err(Error::InvalidInput(
                    "drive needs exactly one of power_w or eps".into(),
                ))
            }
        };

        let [g1, g2] = self.g0_mhz.get();
        Ok(SystemParams {
            cavity_1,
            cavity_2,
            magnon: MagnonParams {
                omega_m: Frequency::mhz(self.omega_m_mhz),
                gamma_m: Frequency::mhz(self.gamma_m_mhz),
                eta3: self.eta3.unwrap_or(cavity_1.eta),
                bias_field_t: None,
            },
            squeeze,
            drives,
            g0_1: Frequency::mhz(g1),
            g0_2: Frequency::mhz(g2),
            delta: Frequency::mhz(self.delta_mhz),
            delta_f: self.delta_f()?,
        })
    }

    pub fn to_params(&self) -> Result<SystemParams> {
        let params = self.to_params_unchecked()?;
        params.ensure_valid()?;
        Ok(params)
    }

    /// Every violation of the resolved parameters and, when Δ_F comes from
    /// the rotation block, of the rotation geometry.
    pub fn violations(&self) -> Result<Vec<Violation>> {
        let mut out = Vec::new();
        if self.delta_f_mhz.is_none() {
            out.extend(self.rotation.spec().violations());
            if !out.is_empty() {
                return Ok(out);
            }
        }
        match self.to_params_unchecked() {
            Ok(p) => out.extend(crate::model::validate(&p)),
            Err(Error::Validation(v)) => out.extend(v),
            Err(e) => return Err(e),
        }
        Ok(out)
    }
}

/// Sets a dotted path, filling missing intermediate keys from `defaults`
/// so that e.g. `band_mhz.0` works without a file entry.
fn set_path(doc: &mut Value, defaults: &Value, key: &str, value: Value) -> Result<()> {
    let bad = || Error::InvalidInput(format!("cannot set '{key}'"));
    let mut parts = key.split('.').peekable();
    let mut cur = doc;
    let mut def = Some(defaults);
    while let Some(part) = parts.next() {
        if part.is_empty() {
            return Err(bad());
        }
        let last = parts.peek().is_none();
        def = def.and_then(|d| match d {
            Value::Object(m) => m.get(part),
            Value::Array(a) => part.parse::<usize>().ok().and_then(|i| a.get(i)),
            _ => None,
        });
        cur = match cur {
            Value::Object(map) => {
                if last {
                    map.insert(part.to_string(), value);
                    return Ok(());
                }
                map.entry(part).or_insert_with(|| {
                    def.cloned()
                        .unwrap_or_else(|| Value::Object(Default::default()))
                })
            }
            Value::Array(items) => {
                let i: usize = part.parse().map_err(|_| bad())?;
                let slot = items.get_mut(i).ok_or_else(bad)?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(bad()),
        };
    }
    Err(bad())
}
