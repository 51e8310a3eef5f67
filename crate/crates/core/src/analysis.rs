//! Where the isolation peaks as a function of the Fizeau shift.
//!
//! With equal cavity rates, equal η and equal drives the intensity ratio
//! `R = |A1,out|²/|A2,out|²` reduces to
//!
//! ```text
//! R(Δ_F) = [κ²/4 + (Δ − Δ_F − g′2·ρ)²] / [κ²/4 + (Δ + Δ_F − g′1·ρ)²] · (g′1/g′2)²,   ρ = √(κ/γm)
//! ```
//!
//! whose stationary points have closed forms. [`brute_force_optimum`] finds
//! the same points by grid search plus golden-section refinement and is kept
//! independent of those formulas so each checks the other.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Frequency, SystemParams, FEASIBLE_BAND_MHZ};
use crate::steady_state::{transmissions, TransmissionReport};

/// |I′| at or below this counts as reciprocal, dB.
pub const RECIPROCAL_TOL_DB: f64 = 1e-9;

/// Relative tolerance for the equal-parameter preconditions.
const EQUALITY_RTOL: f64 = 1e-12;

/// Default coarse grid size of [`brute_force_optimum`].
pub const DEFAULT_GRID_POINTS: usize = 2001;

/// Golden-section stopping width, MHz.
const REFINE_RESOLUTION_MHZ: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Direction {
    /// |A1,out|² > |A2,out|².
    Forward,
    Backward,
    Reciprocal,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Forward => "FORWARD",
            Direction::Backward => "BACKWARD",
            Direction::Reciprocal => "RECIPROCAL",
        }
    }
}

pub fn classify_direction(report: &TransmissionReport) -> Direction {
    if report.i_signed_db.is_nan() || report.i_signed_db.abs() <= RECIPROCAL_TOL_DB {
        Direction::Reciprocal
    } else if report.i_signed_db > 0.0 {
        Direction::Forward
    } else {
        Direction::Backward
    }
}

/// Closed interval of Fizeau shifts, MHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Band {
    pub min: f64,
    pub max: f64,
}

impl Band {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::EmptyBand { min, max });
        }
        Ok(Band { min, max })
    }

    pub fn feasible() -> Self {
        Band {
            min: FEASIBLE_BAND_MHZ.0,
            max: FEASIBLE_BAND_MHZ.1,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max
    }
}

impl Default for Band {
    fn default() -> Self {
        Band::feasible()
    }
}

/// Scalars the extremum formulas need, once the preconditions hold.
#[derive(Debug, Clone, Copy)]
struct Reduced {
    delta: f64,
    kappa: f64,
    gamma_m: f64,
    g1: f64,
    g2: f64,
}

impl Reduced {
    fn rho(&self) -> f64 {
        (self.kappa / self.gamma_m).sqrt()
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQUALITY_RTOL * a.abs().max(b.abs())
}

/// Checks κ1 = κ2, η1 = η2 = η3 and ε1 = ε2 = ε3′; returns the reason on failure.
fn reduce_general(params: &SystemParams) -> std::result::Result<Reduced, String> {
    params.ensure_valid().map_err(|e| e.to_string())?;
    let eff = params.effective().map_err(|e| e.to_string())?;
    let k1 = params.cavity_1.kappa_total.as_mhz();
    let k2 = params.cavity_2.kappa_total.as_mhz();
    if !close(k1, k2) {
        return Err(format!("κ1 = {k1} ≠ κ2 = {k2}"));
    }
    let (e1, e2, e3) = (params.cavity_1.eta, params.cavity_2.eta, params.magnon.eta3);
    if !(close(e1, e2) && close(e1, e3)) {
        return Err(format!("η1, η2, η3 = {e1}, {e2}, {e3} not equal"));
    }
    let d = &params.drives;
    let eps3 = d.eps3_eff(&eff);
    if !(close(d.eps_1, d.eps_2) && close(d.eps_1, eps3)) {
        return Err(format!(
            "ε1, ε2, ε3′ = {}, {}, {eps3} not equal",
            d.eps_1, d.eps_2
        ));
    }
    Ok(Reduced {
        delta: params.delta.as_mhz(),
        kappa: k1,
        gamma_m: params.magnon.gamma_m.as_mhz(),
        g1: eff.g_eff_1.as_mhz(),
        g2: eff.g_eff_2.as_mhz(),
    })
}

fn reduce_symmetric(params: &SystemParams) -> std::result::Result<Reduced, String> {
    let r = reduce_general(params)?;
    if !close(r.g1, r.g2) {
        return Err(format!("g′1 = {} ≠ g′2 = {}", r.g1, r.g2));
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremumReport {
    pub delta_f_1: Frequency,
    pub delta_f_2: Frequency,
    pub r_1: f64,
    pub r_2: f64,
    /// |10·log10 R| shared by both extrema.
    pub i_db: f64,
    /// Whether each extremum lies inside the default ±65 MHz band.
    pub in_feasible_band: [bool; 2],
}

/// Extrema of R for the equal-parameter configuration:
/// Δ_F1,2 = ±√(κ²/4 + u²), u = Δ − g′√(κ/γm), R(Δ_F1) = (s − u)/(s + u).
pub fn extremal_fizeau_symmetric(params: &SystemParams) -> Result<ExtremumReport> {
    let p = reduce_symmetric(params).map_err(Error::NotSymmetric)?;
    let u = p.delta - p.g1 * p.rho();
    let s = (p.kappa * p.kappa / 4.0 + u * u).sqrt();
    let r_1 = (s - u) / (s + u);
    let band = Band::feasible();
    Ok(ExtremumReport {
        delta_f_1: Frequency::mhz(s),
        delta_f_2: Frequency::mhz(-s),
        r_1,
        r_2: 1.0 / r_1,
        i_db: (10.0 * r_1.log10()).abs(),
        in_feasible_band: [band.contains(s), band.contains(-s)],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralExtremumReport {
    pub u1: f64,
    pub u2: f64,
    /// The `+` root.
    pub delta_f_1: Frequency,
    /// The `−` root.
    pub delta_f_2: Frequency,
    pub r_1: f64,
    pub r_2: f64,
}

/// Extrema of R with unequal couplings:
/// Δ_F1,2 = ½[U1 ± √(U1² + U2)], U1 = ρ(g′1 − g′2),
/// U2 = κ² + 4(Δ − g′1ρ)(Δ − g′2ρ).
pub fn extremal_fizeau_general(params: &SystemParams) -> Result<GeneralExtremumReport> {
    let p = reduce_general(params).map_err(Error::GeneralPrecondition)?;
    let rho = p.rho();
    let u1 = rho * (p.g1 - p.g2);
    let u2 = p.kappa * p.kappa + 4.0 * (p.delta - p.g1 * rho) * (p.delta - p.g2 * rho);
    let disc = u1 * u1 + u2;
    if !(disc >= 0.0) {
        return Err(Error::NoRealExtremum {
            discriminant: disc,
            re_1: u1 / 2.0,
            re_2: u1 / 2.0,
        });
    }
    let root = disc.sqrt();
    let (f1, f2) = ((u1 + root) / 2.0, (u1 - root) / 2.0);
    let ratio = |df: f64| {
        let num = p.delta - df - p.g2 * rho;
        let den = p.delta + df - p.g1 * rho;
        let scale = (p.g1 / p.g2).powi(2);
        if den == 0.0 {
            f64::INFINITY
        } else {
            -scale * num / den
        }
    };
    Ok(GeneralExtremumReport {
        u1,
        u2,
        delta_f_1: Frequency::mhz(f1),
        delta_f_2: Frequency::mhz(f2),
        r_1: ratio(f1),
        r_2: ratio(f2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReciprocalPoints {
    /// γ0 = g′²κ/Δ².
    pub gamma0: Frequency,
    /// κ0 = Δ²γm/g′².
    pub kappa0: Frequency,
    /// Current parameters satisfy Δ = g′√(κ/γm).
    pub matched: bool,
    /// False when no finite reciprocal point exists (both reported as +∞).
    pub finite: bool,
}

const MATCH_RTOL: f64 = 1e-9;

pub fn reciprocal_points(params: &SystemParams) -> Result<ReciprocalPoints> {
    let p = reduce_symmetric(params).map_err(Error::NotSymmetric)?;
    let g = p.g1;
    let matched = (p.delta - g * p.rho()).abs() <= MATCH_RTOL * p.delta.abs().max(g);
    // Δ = g′√(κ/γm) has no solution unless Δ > 0
    if !(p.delta > 0.0) || g == 0.0 {
        return Ok(ReciprocalPoints {
            gamma0: Frequency::mhz(f64::INFINITY),
            kappa0: Frequency::mhz(f64::INFINITY),
            matched: matched && p.delta > 0.0,
            finite: false,
        });
    }
    let d2 = p.delta * p.delta;
    Ok(ReciprocalPoints {
        gamma0: Frequency::mhz(g * g * p.kappa / d2),
        kappa0: Frequency::mhz(d2 * p.gamma_m / (g * g)),
        matched,
        finite: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Optimum {
    pub delta_f: Frequency,
    pub i_abs_db: f64,
}

/// Maximizes |I′| over `band`: uniform grid, then golden-section refinement of
/// the best bracket down to 1e-6 MHz. Ties go to the smallest |Δ_F|.
pub fn brute_force_optimum(
    params: &SystemParams,
    band: Band,
    grid_points: usize,
) -> Result<Optimum> {
    let band = Band::new(band.min, band.max)?;
    if grid_points < 11 {
        return Err(Error::InvalidInput(format!(
            "grid_points must be ≥ 11, got {grid_points}"
        )));
    }
    let objective = |x: f64| -> Result<f64> {
        let report = transmissions(&params.with_delta_f(Frequency::mhz(x)))?;
        Ok(report.i_abs_db)
    };
    let step = (band.max - band.min) / (grid_points - 1) as f64;
    let grid = |i: usize| {
        if i == grid_points - 1 {
            band.max
        } else {
            band.min + step * i as f64
        }
    };

    let mut best: Option<(usize, f64)> = None;
    let mut first_err = None;
    for i in 0..grid_points {
        let x = grid(i);
        match objective(x) {
            Ok(v) if !v.is_nan() => {
                let better = match best {
                    None => true,
                    Some((j, bv)) => v > bv || (v == bv && x.abs() < grid(j).abs()),
                };
                if better {
                    best = Some((i, v));
                }
            }
            Ok(_) => {}
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let Some((i, grid_best)) = best else {
        return Err(first_err.unwrap_or(Error::NoTransmission));
    };
    let x_best = grid(i);
    if grid_best.is_infinite() {
        return Ok(Optimum {
            delta_f: Frequency::mhz(x_best),
            i_abs_db: grid_best,
        });
    }

    let lo = grid(i.saturating_sub(1));
    let hi = grid((i + 1).min(grid_points - 1));
    let f = |x: f64| objective(x).unwrap_or(f64::NEG_INFINITY);
    let (x_ref, v_ref) = golden_section_max(f, lo, hi, REFINE_RESOLUTION_MHZ);
    if v_ref > grid_best {
        Ok(Optimum {
            delta_f: Frequency::mhz(x_ref),
            i_abs_db: v_ref,
        })
    } else {
        Ok(Optimum {
            delta_f: Frequency::mhz(x_best),
            i_abs_db: grid_best,
        })
    }
}

/// Golden-section maximization of a unimodal `f` on `[a, b]`.
fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |acc, p| if p.1 > acc.1 { p } else { acc })
}

/// Which stationary point of R an "optimal Δ_F" evaluation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// The `+` root (Δ_F1).
    Positive,
    /// The `−` root (Δ_F2).
    Negative,
    /// Whichever root gives the larger |I′|.
    Best,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimumMethod {
    Symmetric,
    General,
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalDeltaF {
    pub delta_f: Frequency,
    pub method: OptimumMethod,
}

/// Analytic optimum: the symmetric form when it applies, else the general
/// form. Errors with the general form's reason when neither applies.
pub fn analytic_delta_f(params: &SystemParams, branch: Branch) -> Result<OptimalDeltaF> {
    let (plus, minus, method) = match extremal_fizeau_symmetric(params) {
        Ok(rep) => (
            rep.delta_f_1.as_mhz(),
            rep.delta_f_2.as_mhz(),
            OptimumMethod::Symmetric,
        ),
        Err(_) => {
            let rep = extremal_fizeau_general(params)?;
            (
                rep.delta_f_1.as_mhz(),
                rep.delta_f_2.as_mhz(),
                OptimumMethod::General,
            )
        }
    };
    let pick = match branch {
        Branch::Positive => plus,
        Branch::Negative => minus,
        Branch::Best => {
            let at = |x: f64| {
                transmissions(&params.with_delta_f(Frequency::mhz(x)))
                    .map(|r| r.i_abs_db)
                    .unwrap_or(f64::NEG_INFINITY)
            };
            // symmetric roots tie; keep the + root unless − is clearly better
            if at(minus) > at(plus) + RECIPROCAL_TOL_DB {
                minus
            } else {
                plus
            }
        }
    };
    Ok(OptimalDeltaF {
        delta_f: Frequency::mhz(pick),
        method,
    })
}

/// Optimal Fizeau shift for `params`: analytic when the preconditions allow,
/// brute force otherwise. With `band` set, a root outside the band falls back
/// to a brute-force search on the band restricted to the branch's sign.
pub fn optimal_delta_f(
    params: &SystemParams,
    branch: Branch,
    band: Option<Band>,
) -> Result<OptimalDeltaF> {
    if let Ok(opt) = analytic_delta_f(params, branch) {
        if band.is_none_or(|b| b.contains(opt.delta_f.as_mhz())) {
            return Ok(opt);
        }
    }

    let band = band.unwrap_or_default();
    let search = match branch {
        Branch::Positive => Band::new(band.min.max(0.0), band.max)?,
        Branch::Negative => Band::new(band.min, band.max.min(0.0))?,
        Branch::Best => band,
    };
    let opt = brute_force_optimum(params, search, DEFAULT_GRID_POINTS)?;
    Ok(OptimalDeltaF {
        delta_f: opt.delta_f,
        method: OptimumMethod::BruteForce,
    })
}
