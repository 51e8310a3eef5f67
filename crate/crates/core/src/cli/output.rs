//! Deterministic CSV and JSON serialization of sweep results.
//!
//! Numbers are written as `{:.16e}` (17 significant digits, exact
//! round-trip), infinities as `inf`/`-inf`, line endings LF. Empty fields
//! mean "not applicable": the second coordinate of a one-axis sweep, and the
//! numeric columns of a failed point.

use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::analysis::classify_direction;
use crate::steady_state::TransmissionReport;
use crate::sweep::{PointError, SweepResult};

pub const CSV_HEADER: &str = "axis1,axis2,T12,T21,R,I_signed_db,I_abs_db,direction,error_code";

/// Code written for points whose isolation is a ±∞ sentinel.
pub const INF_ISOLATION: &str = "INF_ISOLATION";

pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.16e}")
    }
}

/// Cells after the leading coordinates, in [`CSV_HEADER`] order.
fn outcome_cells(outcome: &Result<TransmissionReport, PointError>) -> [String; 7] {
    match outcome {
        Ok(r) => [
            fmt_num(r.t12),
            fmt_num(r.t21),
            fmt_num(r.r),
            fmt_num(r.i_signed_db),
            fmt_num(r.i_abs_db),
            classify_direction(r).as_str().into(),
            if r.infinite_isolation {
                INF_ISOLATION.into()
            } else {
                String::new()
            },
        ],
        Err(e) => {
            let mut cells: [String; 7] = Default::default();
            cells[6] = e.code.clone();
            cells
        }
    }
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub fn write_csv(result: &SweepResult, w: &mut impl Write) -> io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(CSV_HEADER.split(','))?;
    for p in &result.points {
        let coords = [fmt_num(p.coords[0]), fmt_num(p.coords[1])];
        out.write_record(coords.iter().chain(&outcome_cells(&p.outcome)))?;
    }
    out.flush()
}

fn json_num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or_else(|| Value::String(fmt_num(v)), Value::Number)
}

/// Same columns as the CSV, one object per point; non-finite numbers become
/// strings and empty cells become `null`.
pub fn write_json(result: &SweepResult, w: &mut impl Write) -> io::Result<()> {
    let records: Vec<Value> = result
        .points
        .iter()
        .map(|p| {
            let mut m = Map::new();
            let coord = |v: f64| if v.is_nan() { Value::Null } else { json_num(v) };
            m.insert("axis1".into(), coord(p.coords[0]));
            m.insert("axis2".into(), coord(p.coords[1]));
            let text = |s: &str| {
                if s.is_empty() {
                    Value::Null
                } else {
                    Value::String(s.into())
                }
            };
            match &p.outcome {
                Ok(r) => {
                    for (k, v) in [
                        ("T12", r.t12),
                        ("T21", r.t21),
                        ("R", r.r),
                        ("I_signed_db", r.i_signed_db),
                        ("I_abs_db", r.i_abs_db),
                    ] {
                        m.insert(k.into(), json_num(v));
                    }
                    m.insert("direction".into(), text(classify_direction(r).as_str()));
                    m.insert(
                        "error_code".into(),
                        text(if r.infinite_isolation {
                            INF_ISOLATION
                        } else {
                            ""
                        }),
                    );
                }
                Err(e) => {
                    for k in ["T12", "T21", "R", "I_signed_db", "I_abs_db", "direction"] {
                        m.insert(k.into(), Value::Null);
                    }
                    m.insert("error_code".into(), text(&e.code));
                }
            }
            Value::Object(m)
        })
        .collect();
    serde_json::to_writer_pretty(&mut *w, &records)?;
    writeln!(w)
}

/// Resolved parameters of every grid point, same row order as the main CSV.
pub fn write_points_csv(result: &SweepResult, w: &mut impl Write) -> io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record([
        "axis1",
        "axis2",
        "delta_f_mhz",
        "delta_mhz",
        "kappa_mhz",
        "gamma_m_mhz",
        "G",
        "g2_over_g1",
        "omega_s_mhz",
    ])?;
    for p in &result.points {
        let q = &p.params;
        let (g, omega_s) = q
            .effective()
            .map_or((f64::NAN, f64::NAN), |e| (e.squeeze_g, e.omega_s.as_mhz()));
        let cells = [
            p.coords[0],
            p.coords[1],
            q.delta_f.as_mhz(),
            q.delta.as_mhz(),
            q.cavity_1.kappa_total.as_mhz(),
            q.magnon.gamma_m.as_mhz(),
            g,
            q.g0_2 / q.g0_1,
            omega_s,
        ];
        out.write_record(cells.map(fmt_num))?;
    }
    out.flush()
}

/// Per-row optimum over the Δ_F axis.
pub fn write_ridge_csv(result: &SweepResult, w: &mut impl Write) -> io::Result<()> {
    let mut out = csv_writer(w);
    out.write_record(
        ["axis", "delta_f_mhz"]
            .into_iter()
            .chain(CSV_HEADER.split(',').skip(2)),
    )?;
    for p in result.ridge.iter().flatten() {
        let lead = [fmt_num(p.coord), fmt_num(p.params.delta_f.as_mhz())];
        out.write_record(lead.iter().chain(&outcome_cells(&p.outcome)))?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(41.63), "4.1630000000000003e1");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_num(f64::NAN), "");
        let x = 0.1 + 0.2;
        assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
    }
}
