use thiserror::Error;

use crate::model::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("squeezing instability: requires |E| < |Δm| and (Δm+E)/(Δm−E) > 0 (Δm = {delta_m} MHz, E = {e_pump} MHz)")]
    SqueezingInstability { delta_m: f64, e_pump: f64 },

    #[error("degenerate system: condition estimate {condition:e} exceeds limit")]
    DegenerateSystem { condition: f64 },

    #[error("degenerate denominator in closed-form steady state")]
    DegenerateDenominator,

    #[error("no transmission: both output fields vanish")]
    NoTransmission,

    #[error("symmetric extremum formula not applicable ({0}); use general form")]
    NotSymmetric(String),

    #[error("general extremum formula not applicable: {0}")]
    GeneralPrecondition(String),

    #[error("no real extremum (discriminant {discriminant:e}; root real parts {re_1}, {re_2})")]
    NoRealExtremum {
        discriminant: f64,
        re_1: f64,
        re_2: f64,
    },

    #[error("empty band [{min}, {max}]")]
    EmptyBand { min: f64, max: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    #[error("every sweep point failed ({count} points)")]
    AllPointsFailed { count: usize },

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
}

impl Error {
    /// Machine-readable code used in sweep outputs.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Validation(v) => v.first().map(|v| v.code.as_str()).unwrap_or("VALIDATION"),
            Error::SqueezingInstability { .. } => "SQUEEZE_INSTABILITY",
            Error::DegenerateSystem { .. } => "DEGENERATE_SYSTEM",
            Error::DegenerateDenominator => "DEGENERATE_DENOMINATOR",
            Error::NoTransmission => "NO_TRANSMISSION",
            Error::NotSymmetric(_) => "NOT_SYMMETRIC",
            Error::GeneralPrecondition(_) => "GENERAL_PRECONDITION",
            Error::NoRealExtremum { .. } => "NO_REAL_EXTREMUM",
            Error::EmptyBand { .. } => "EMPTY_BAND",
            Error::InvalidInput(_) => "INVALID_INPUT",
            Error::InvalidAxis(_) => "INVALID_AXIS",
            Error::AllPointsFailed { .. } => "ALL_POINTS_FAILED",
            Error::UnknownPreset(_) => "UNKNOWN_PRESET",
        }
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| format!("{}: {}", v.code.as_str(), v.message))
        .collect::<Vec<_>>()
        .join("; ")
}
