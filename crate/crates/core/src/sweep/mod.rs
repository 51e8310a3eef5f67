//! One- and two-axis parameter sweeps over [`transmissions`].
//!
//! Grid points are independent; they are evaluated on the rayon pool and
//! collected in index order, so the result does not depend on scheduling.
//! Two-axis grids are row-major with `axes[0]` as the row index:
//! `points[i0 * n1 + i1]`.

mod presets;

use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{optimal_delta_f, Band, Branch, OptimumMethod};
use crate::error::{Error, Result};
use crate::model::{Frequency, SystemParams};
use crate::steady_state::{transmissions, TransmissionReport};

pub use presets::{figure_preset, FigurePreset, PlotKind, PRESET_NAMES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    DeltaF,
    GammaM,
    Kappa,
    Delta,
    G,
    G2OverG1,
    OmegaS,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::DeltaF => "delta_f",
            SweepParam::GammaM => "gamma_m",
            SweepParam::Kappa => "kappa",
            SweepParam::Delta => "delta",
            SweepParam::G => "G",
            SweepParam::G2OverG1 => "g2_over_g1",
            SweepParam::OmegaS => "omega_s",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().as_str() {
            "delta_f" => SweepParam::DeltaF,
            "gamma_m" => SweepParam::GammaM,
            "kappa" => SweepParam::Kappa,
            "delta" => SweepParam::Delta,
            "g" => SweepParam::G,
            "g2_over_g1" => SweepParam::G2OverG1,
            "omega_s" => SweepParam::OmegaS,
            _ => return None,
        })
    }

    fn is_frequency(self) -> bool {
        !matches!(self, SweepParam::G | SweepParam::G2OverG1)
    }
}

/// Divisor for axes reported in units of a rate, e.g. Δ_F/γm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    GammaM,
    Kappa,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::GammaM => "gamma_m",
            Normalization::Kappa => "kappa",
        }
    }

    fn divisor(self, params: &SystemParams) -> f64 {
        match self {
            Normalization::GammaM => params.magnon.gamma_m.as_mhz(),
            Normalization::Kappa => params.cavity_1.kappa_total.as_mhz(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub parameter: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub normalization: Option<Normalization>,
}

impl Axis {
    pub fn new(parameter: SweepParam, min: f64, max: f64, count: usize) -> Result<Self> {
        let axis = Axis {
            parameter,
            min,
            max,
            count,
            normalization: None,
        };
        axis.check()?;
        Ok(axis)
    }

    pub fn normalized(mut self, by: Normalization) -> Result<Self> {
        self.normalization = Some(by);
        self.check()?;
        Ok(self)
    }

    fn check(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::InvalidAxis(format!(
                "{}: need finite min < max, got [{}, {}]",
                self.parameter.as_str(),
                self.min,
                self.max
            )));
        }
        if self.count < 2 {
            return Err(Error::InvalidAxis(format!(
                "{}: count must be ≥ 2",
                self.parameter.as_str()
            )));
        }
        if self.normalization.is_some() && !self.parameter.is_frequency() {
            return Err(Error::InvalidAxis(format!(
                "{} is dimensionless and cannot be normalized",
                self.parameter.as_str()
            )));
        }
        Ok(())
    }

    /// Grid value `i` in axis units; the last point is exactly `max`.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.value(i))
    }

    /// Label such as `delta_f/gamma_m`.
    pub fn label(&self) -> String {
        match self.normalization {
            Some(n) => format!("{}/{}", self.parameter.as_str(), n.as_str()),
            None => self.parameter.as_str().to_string(),
        }
    }
}

/// How each point's Fizeau shift is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub enum DeltaFPolicy {
    /// Base value, or the DELTA_F axis when present.
    #[default]
    Given,
    /// Analytic optimum per point (brute-force fallback), optionally clamped
    /// to a band.
    Optimal { branch: Branch, band: Option<Band> },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepOptions {
    pub delta_f: DeltaFPolicy,
    /// For two-axis sweeps with a DELTA_F axis: also record, for every value
    /// of the other axis, the optimum over the DELTA_F axis range.
    pub ridge: bool,
    /// Worker threads; `None` or `Some(0)` uses the global pool.
    pub threads: Option<usize>,
    pub preset: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointError {
    pub code: String,
    pub message: String,
}

impl From<Error> for PointError {
    fn from(e: Error) -> Self {
        PointError {
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    /// Axis coordinates in axis units; the second is NaN for one-axis sweeps.
    pub coords: [f64; 2],
    /// Fully resolved parameters this point was solved with.
    pub params: SystemParams,
    pub outcome: std::result::Result<TransmissionReport, PointError>,
}

impl SweepPoint {
    pub fn report(&self) -> Option<&TransmissionReport> {
        self.outcome.as_ref().ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RidgePoint {
    /// Value of the non-DELTA_F axis.
    pub coord: f64,
    pub params: SystemParams,
    pub method: Option<OptimumMethod>,
    pub outcome: std::result::Result<TransmissionReport, PointError>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMeta {
    pub preset: Option<String>,
    pub timestamp_unix: u64,
    pub tool_version: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<Axis>,
    pub base: SystemParams,
    pub points: Vec<SweepPoint>,
    pub ridge: Option<Vec<RidgePoint>>,
    pub meta: SweepMeta,
}

impl SweepResult {
    pub fn shape(&self) -> (usize, usize) {
        (self.axes[0].count, self.axes.get(1).map_or(1, |a| a.count))
    }

    pub fn point(&self, i0: usize, i1: usize) -> &SweepPoint {
        &self.points[i0 * self.shape().1 + i1]
    }

    /// Grid point with the largest finite |I′|; first index wins ties.
    pub fn max_isolation(&self) -> Option<(&SweepPoint, &TransmissionReport)> {
        best_of(
            self.points
                .iter()
                .filter_map(|p| p.report().map(|r| (p, r))),
        )
    }

    /// Ridge point with the largest finite |I′|.
    pub fn ridge_max(&self) -> Option<(&RidgePoint, &TransmissionReport)> {
        let ridge = self.ridge.as_ref()?;
        best_of(
            ridge
                .iter()
                .filter_map(|p| p.outcome.as_ref().ok().map(|r| (p, r))),
        )
    }
}

fn best_of<'a, P>(
    it: impl Iterator<Item = (&'a P, &'a TransmissionReport)>,
) -> Option<(&'a P, &'a TransmissionReport)> {
    it.filter(|(_, r)| r.i_abs_db.is_finite())
        .fold(None, |best, cur| match best {
            Some(b) if b.1.i_abs_db >= cur.1.i_abs_db => Some(b),
            _ => Some(cur),
        })
}

pub fn sweep(base: &SystemParams, axes: &[Axis]) -> Result<SweepResult> {
    sweep_with(base, axes, &SweepOptions::default())
}

pub fn sweep_with(
    base: &SystemParams,
    axes: &[Axis],
    options: &SweepOptions,
) -> Result<SweepResult> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(Error::InvalidAxis(format!(
            "need 1 or 2 axes, got {}",
            axes.len()
        )));
    }
    for axis in axes {
        axis.check()?;
    }
    if axes.len() == 2 && axes[0].parameter == axes[1].parameter {
        return Err(Error::InvalidAxis(
            "both axes sweep the same parameter".into(),
        ));
    }
    let has_delta_f_axis = axes.iter().any(|a| a.parameter == SweepParam::DeltaF);
    if has_delta_f_axis && matches!(options.delta_f, DeltaFPolicy::Optimal { .. }) {
        return Err(Error::InvalidAxis(
            "delta_f cannot be swept under an optimal-Δ_F policy".into(),
        ));
    }

    let n0 = axes[0].count;
    let n1 = axes.get(1).map_or(1, |a| a.count);
    let evaluate = || -> (Vec<SweepPoint>, Option<Vec<RidgePoint>>) {
        let points = (0..n0 * n1)
            .into_par_iter()
            .map(|k| {
                let (i0, i1) = (k / n1, k % n1);
                let coords = [
                    axes[0].value(i0),
                    axes.get(1).map_or(f64::NAN, |a| a.value(i1)),
                ];
                evaluate_point(base, axes, coords, &options.delta_f)
            })
            .collect();
        let ridge =
            (options.ridge && axes.len() == 2 && has_delta_f_axis).then(|| ridge(base, axes));
        (points, ridge)
    };
    let (points, ridge) = match options.threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(evaluate),
        _ => evaluate(),
    };

    if points.iter().all(|p| p.outcome.is_err()) {
        return Err(Error::AllPointsFailed {
            count: points.len(),
        });
    }
    let timestamp_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    Ok(SweepResult {
        axes: axes.to_vec(),
        base: *base,
        points,
        ridge,
        meta: SweepMeta {
            preset: options.preset.clone(),
            timestamp_unix,
            tool_version: env!("CARGO_PKG_VERSION"),
        },
    })
}

/// Sets one parameter; `value` is already in physical units (MHz or
/// dimensionless).
fn apply(params: SystemParams, parameter: SweepParam, value: f64) -> SystemParams {
    match parameter {
        SweepParam::DeltaF => params.with_delta_f(Frequency::mhz(value)),
        SweepParam::GammaM => params.with_gamma_m(Frequency::mhz(value)),
        SweepParam::Kappa => params.with_kappa(Frequency::mhz(value)),
        SweepParam::Delta => SystemParams {
            delta: Frequency::mhz(value),
            ..params
        },
        SweepParam::G => params.with_squeeze_g(value),
        SweepParam::G2OverG1 => SystemParams {
            g0_2: params.g0_1 * value,
            ..params
        },
        SweepParam::OmegaS => params.with_omega_s(Frequency::mhz(value)),
    }
}

/// Applies plain axes first so normalized axes see their resolved divisor.
fn resolve(base: &SystemParams, axes: &[Axis], coords: [f64; 2]) -> SystemParams {
    let mut params = *base;
    for (axis, v) in axes
        .iter()
        .zip(coords)
        .filter(|(a, _)| a.normalization.is_none())
    {
        params = apply(params, axis.parameter, v);
    }
    for (axis, v) in axes.iter().zip(coords) {
        if let Some(n) = axis.normalization {
            params = apply(params, axis.parameter, v * n.divisor(&params));
        }
    }
    params
}

fn evaluate_point(
    base: &SystemParams,
    axes: &[Axis],
    coords: [f64; 2],
    policy: &DeltaFPolicy,
) -> SweepPoint {
    let mut params = resolve(base, axes, coords);
    let outcome = (|| {
        params.ensure_valid()?;
        if let DeltaFPolicy::Optimal { branch, band } = *policy {
            params.delta_f = optimal_delta_f(&params, branch, band)?.delta_f;
        }
        transmissions(&params)
    })()
    .map_err(PointError::from);
    SweepPoint {
        coords,
        params,
        outcome,
    }
}

fn ridge(base: &SystemParams, axes: &[Axis]) -> Vec<RidgePoint> {
    let (df_axis, other) = if axes[0].parameter == SweepParam::DeltaF {
        (axes[0], axes[1])
    } else {
        (axes[1], axes[0])
    };
    let values: Vec<f64> = other.values().collect();
    values
        .into_par_iter()
        .map(|v| {
            let mut params = *base;
            if other.normalization.is_none() {
                params = apply(params, other.parameter, v);
            } else {
                params = resolve(base, &[other], [v, f64::NAN]);
            }
            let scale = df_axis.normalization.map_or(1.0, |n| n.divisor(&params));
            let mut method = None;
            let outcome = (|| {
                params.ensure_valid()?;
                let band = Band::new(df_axis.min * scale, df_axis.max * scale)?;
                let opt = optimal_delta_f(&params, Branch::Best, Some(band))?;
                method = Some(opt.method);
                params.delta_f = opt.delta_f;
                transmissions(&params)
            })()
            .map_err(PointError::from);
            RidgePoint {
                coord: v,
                params,
                method,
                outcome,
            }
        })
        .collect()
}
