//! Steady-state amplitudes of the driven three-mode system, port outputs,
//! and the transmissions and isolation built from them.
//!
//! The mean-field equations are
//!
//! ```text
//! D1·A1           + i·g′1·M = F1
//!        D2·A2    + i·g′2·M = F2
//! i·g′1·A1 + i·g′2·A2 + Dm·M = F3
//! ```
//!
//! with `Dj = iΔj + κj/2`, `Dm = iωs + γm/2`, `Fj = √(ηjκj)·εj` and
//! `F3 = √(η3γm)·ε3′`. Two independent routes solve them: pivoted
//! elimination ([`solve_generic`]) and the published closed form
//! ([`solve_closed_form`]).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{mat_vec, Lu3, Matrix3};
use crate::model::SystemParams;

/// Condition estimate above which the linear system is treated as singular.
pub const MAX_CONDITION: f64 = 1e14;

/// Residual bound relative to the equation's scale.
pub const RESIDUAL_RTOL: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which optical port is driven; the other optical drive is zeroed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DriveSide {
    /// ε1 ≠ 0, ε2 = 0.
    Left,
    /// ε1 = 0, ε2 ≠ 0.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    #[default]
    ClosedForm,
    Generic,
}

/// Coefficients of the linear system for one drive side.
#[derive(Debug, Clone, Copy)]
pub struct Coefficients {
    pub d1: Complex64,
    pub d2: Complex64,
    pub dm: Complex64,
    pub g1: f64,
    pub g2: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    /// Output couplings √(η1κ1), √(η2κ2).
    pub out_1: f64,
    pub out_2: f64,
}

impl Coefficients {
    pub fn new(params: &SystemParams, side: DriveSide) -> Result<Self> {
        params.ensure_valid()?;
        let eff = params.effective()?;
        let (delta_1, delta_2) = params.detunings();
        let k1 = params.cavity_1.kappa_total.as_mhz();
        let k2 = params.cavity_2.kappa_total.as_mhz();
        let gm = params.magnon.gamma_m.as_mhz();
        let out_1 = (params.cavity_1.eta * k1).sqrt();
        let out_2 = (params.cavity_2.eta * k2).sqrt();
        let (eps_1, eps_2) = match side {
            DriveSide::Left => (params.drives.eps_1, 0.0),
            DriveSide::Right => (0.0, params.drives.eps_2),
        };
        Ok(Coefficients {
            d1: Complex64::new(k1 / 2.0, delta_1.as_mhz()),
            d2: Complex64::new(k2 / 2.0, delta_2.as_mhz()),
            dm: Complex64::new(gm / 2.0, eff.omega_s.as_mhz()),
            g1: eff.g_eff_1.as_mhz(),
            g2: eff.g_eff_2.as_mhz(),
            f1: out_1 * eps_1,
            f2: out_2 * eps_2,
            f3: (params.magnon.eta3 * gm).sqrt() * params.drives.eps3_eff(&eff),
            out_1,
            out_2,
        })
    }

    pub fn matrix(&self) -> Matrix3 {
        let zero = Complex64::new(0.0, 0.0);
        [
            [self.d1, zero, I * self.g1],
            [zero, self.d2, I * self.g2],
            [I * self.g1, I * self.g2, self.dm],
        ]
    }

    pub fn rhs(&self) -> [Complex64; 3] {
        [self.f1.into(), self.f2.into(), self.f3.into()]
    }

    /// D1·D2·Dm + D2·g′1² + D1·g′2².
    pub fn denominator(&self) -> Complex64 {
        self.d1 * self.d2 * self.dm + self.d2 * self.g1 * self.g1 + self.d1 * self.g2 * self.g2
    }
}

/// Mean intracavity amplitudes ⟨a1⟩, ⟨a2⟩, ⟨ms⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub a1: Complex64,
    pub a2: Complex64,
    pub m: Complex64,
}

impl SteadyState {
    pub fn as_array(&self) -> [Complex64; 3] {
        [self.a1, self.a2, self.m]
    }

    /// Per-equation residual `|A·x − F|` divided by
    /// `max(1, |F_i|, max_k |A_ik·x_k|)`.
    pub fn scaled_residuals(&self, coeffs: &Coefficients) -> [f64; 3] {
        let a = coeffs.matrix();
        let x = self.as_array();
        let b = coeffs.rhs();
        let ax = mat_vec(&a, &x);
        let mut out = [0.0; 3];
        for i in 0..3 {
            let term_scale = (0..3).map(|k| (a[i][k] * x[k]).norm()).fold(0.0, f64::max);
            let scale = 1f64.max(b[i].norm()).max(term_scale);
            out[i] = (ax[i] - b[i]).norm() / scale;
        }
        out
    }
}

pub fn solve(params: &SystemParams, side: DriveSide, solver: Solver) -> Result<SteadyState> {
    match solver {
        Solver::ClosedForm => solve_closed_form(params, side),
        Solver::Generic => solve_generic(params, side),
    }
}

/// Pivoted Gaussian elimination on the 3×3 system.
pub fn solve_generic(params: &SystemParams, side: DriveSide) -> Result<SteadyState> {
    let coeffs = Coefficients::new(params, side)?;
    let a = coeffs.matrix();
    let lu = Lu3::factor(&a).ok_or(Error::DegenerateSystem {
        condition: f64::INFINITY,
    })?;
    let condition = lu.condition_1(&a);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::DegenerateSystem { condition });
    }
    let [a1, a2, m] = lu.solve(&coeffs.rhs());
    Ok(SteadyState { a1, a2, m })
}

/// Closed-form amplitudes over the common denominator.
pub fn solve_closed_form(params: &SystemParams, side: DriveSide) -> Result<SteadyState> {
    let c = Coefficients::new(params, side)?;
    let den = c.denominator();
    if den.norm() == 0.0 || !den.norm().is_finite() {
        return Err(Error::DegenerateDenominator);
    }
    let (g1, g2) = (c.g1, c.g2);
    let (f1, f2, f3): (Complex64, Complex64, Complex64) = (c.f1.into(), c.f2.into(), c.f3.into());
    let (a1, a2) = match side {
        DriveSide::Left => {
            let a1 = f1 / c.d1 - I * g1 * (c.d1 * c.d2 * f3 - I * g1 * c.d2 * f1) / (c.d1 * den);
            let a2 = -I * g2 * (c.d1 * f3 - I * g1 * f1) / den;
            (a1, a2)
        }
        DriveSide::Right => {
            let a1 = -I * g1 * (c.d2 * f3 - I * g2 * f2) / den;
            let a2 = f2 / c.d2 - I * g2 * (c.d1 * c.d2 * f3 - I * g2 * c.d1 * f2) / (c.d2 * den);
            (a1, a2)
        }
    };
    let m = (c.d1 * c.d2 * f3 - I * g1 * c.d2 * f1 - I * g2 * c.d1 * f2) / den;
    Ok(SteadyState { a1, a2, m })
}

/// Port outputs from the input-output relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputFields {
    pub a1_out: Complex64,
    pub a2_out: Complex64,
}

pub fn output_fields(state: &SteadyState, params: &SystemParams) -> OutputFields {
    let out_1 = (params.cavity_1.eta * params.cavity_1.kappa_total.as_mhz()).sqrt();
    let out_2 = (params.cavity_2.eta * params.cavity_2.kappa_total.as_mhz()).sqrt();
    OutputFields {
        a1_out: state.a1 * out_1,
        a2_out: state.a2 * out_2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissionReport {
    /// |A1,out/ε2| under right-side drive.
    pub t12: f64,
    /// |A2,out/ε1| under left-side drive.
    pub t21: f64,
    /// |A1,out|²/|A2,out|².
    pub r: f64,
    pub i_signed_db: f64,
    pub i_abs_db: f64,
    /// One output vanished exactly; the isolation is a ±∞ sentinel.
    pub infinite_isolation: bool,
}

/// Runs the right- and left-driven solves with the closed-form solver.
pub fn transmissions(params: &SystemParams) -> Result<TransmissionReport> {
    transmissions_with(params, Solver::ClosedForm)
}

pub fn transmissions_with(params: &SystemParams, solver: Solver) -> Result<TransmissionReport> {
    let (eps_1, eps_2) = (params.drives.eps_1, params.drives.eps_2);
    if !(eps_1 > 0.0 && eps_2 > 0.0) {
        return Err(Error::InvalidInput(format!(
            "transmissions need ε1 > 0 and ε2 > 0, got ε1 = {eps_1}, ε2 = {eps_2}"
        )));
    }
    let right = output_fields(&solve(params, DriveSide::Right, solver)?, params);
    let left = output_fields(&solve(params, DriveSide::Left, solver)?, params);
    let forward = right.a1_out.norm_sqr();
    let backward = left.a2_out.norm_sqr();
    let (r, i_signed_db, infinite) = isolation(forward, backward)?;
    Ok(TransmissionReport {
        t12: right.a1_out.norm() / eps_2,
        t21: left.a2_out.norm() / eps_1,
        r,
        i_signed_db,
        i_abs_db: i_signed_db.abs(),
        infinite_isolation: infinite,
    })
}

/// (R, 10·log10 R, sentinel flag) from the two output intensities.
fn isolation(forward: f64, backward: f64) -> Result<(f64, f64, bool)> {
    match (forward == 0.0, backward == 0.0) {
        (true, true) => Err(Error::NoTransmission),
        (false, true) => Ok((f64::INFINITY, f64::INFINITY, true)),
        (true, false) => Ok((0.0, f64::NEG_INFINITY, true)),
        (false, false) => {
            let r = forward / backward;
            Ok((r, 10.0 * r.log10(), false))
        }
    }
}
