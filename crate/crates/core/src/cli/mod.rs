//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation or physics error, 2 I/O error,
//! 3 unknown command or flag.

pub mod config;
pub mod output;
pub mod svg;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{
    analytic_delta_f, brute_force_optimum, classify_direction, optimal_delta_f, Band, Branch,
    DEFAULT_GRID_POINTS,
};
use crate::error::Error;
use crate::model::fizeau_shift;
use crate::steady_state::{output_fields, solve, transmissions, Coefficients, DriveSide, Solver};
use crate::sweep::{
    figure_preset, sweep_with, Axis, DeltaFPolicy, Normalization, SweepOptions, SweepParam,
    SweepResult,
};

pub use config::ConfigDocument;
pub use output::{write_csv, write_json, CSV_HEADER};

/// Caps sweep worker threads; 0 means one per core.
pub const THREADS_ENV: &str = "MAGNON_SAGNAC_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "magnon-sagnac",
    version,
    about = "Nonreciprocal transmission of a spinning resonator coupled to a squeezed magnon mode"
)]
struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override a configuration key (dotted path), e.g. --set delta_f_mhz=33.18.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolverArg {
    ClosedForm,
    Generic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BranchArg {
    Positive,
    Negative,
    Best,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Positive => Branch::Positive,
            BranchArg::Negative => Branch::Negative,
            BranchArg::Best => Branch::Best,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fizeau shift from the rotation block.
    Fizeau {
        /// Keep only the leading term of the shift.
        #[arg(long)]
        first_term_only: bool,
    },
    /// Steady-state amplitudes and scaled residuals for one drive side.
    Steady {
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        #[arg(long, value_enum, default_value_t = SolverArg::Generic)]
        solver: SolverArg,
    },
    /// Transmissions, isolation ratio and direction class.
    Isolate,
    /// Optimal Fizeau shift and the isolation it reaches.
    Optimize {
        /// Search band "min,max" in MHz; defaults to the config band.
        #[arg(long, allow_hyphen_values = true)]
        band: Option<String>,
        /// Analytic extremum only, no band clamp.
        #[arg(long, conflicts_with = "brute")]
        analytic: bool,
        /// Grid search plus golden-section refinement over the band.
        #[arg(long)]
        brute: bool,
        #[arg(long, value_enum, default_value_t = BranchArg::Positive)]
        branch: BranchArg,
    },
    /// One- or two-axis sweep, e.g. --axis delta_f/gamma_m:-16:16:1601.
    Sweep {
        #[arg(long, allow_hyphen_values = true)]
        axis: String,
        #[arg(long, allow_hyphen_values = true)]
        axis2: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// Evaluate each point at its optimal Δ_F on this branch.
        #[arg(long, value_enum)]
        optimal: Option<BranchArg>,
    },
    /// Run a named preset; write its data (CSV) and plot (SVG).
    Reproduce {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the configuration and list violations.
    Validate {
        /// Print the resolved configuration.
        #[arg(long)]
        print_resolved: bool,
    },
}

enum Failure {
    Physics(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Physics(e)
    }
}

fn io_err(path: &Path) -> impl Fn(io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

pub fn run(argv: Vec<String>) -> i32 {
    run_with_io(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with_io(argv: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                0
            } else {
                let _ = write!(err, "{}", e.render());
                3
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failure::Physics(e)) => {
            let _ = writeln!(err, "error [{}]: {e}", e.code());
            1
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "I/O error: {msg}");
            2
        }
    }
}

fn load_config(cli: &Cli) -> Result<ConfigDocument, Failure> {
    let text = match &cli.config {
        Some(path) => Some(fs::read_to_string(path).map_err(io_err(path))?),
        None => None,
    };
    Ok(ConfigDocument::load(text.as_deref(), &cli.set)?)
}

fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            Error::InvalidInput(format!(
                "{THREADS_ENV} must be a non-negative integer, got '{v}'"
            ))
            .into()
        }),
        Err(_) => Ok(None),
    }
}

/// Prints a flat record: CSV header plus one row, or a JSON object.
fn emit(out: &mut dyn Write, format: Format, fields: &[(&str, Value)]) -> Result<(), Failure> {
    let result = match format {
        Format::Csv => {
            let keys: Vec<&str> = fields.iter().map(|f| f.0).collect();
            let vals: Vec<String> = fields
                .iter()
                .map(|(_, v)| match v {
                    Value::Number(n) => output::fmt_num(n.as_f64().unwrap_or(f64::NAN)),
                    Value::String(s) => s.clone(),
                    Value::Null => String::new(),
                    other => other.to_string(),
                })
                .collect();
            writeln!(out, "{}\n{}", keys.join(","), vals.join(","))
        }
        Format::Json => {
            let map: serde_json::Map<String, Value> = fields
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&Value::Object(map)).unwrap_or_default()
            )
        }
    };
    result.map_err(|e| Failure::Io(format!("stdout: {e}")))
}

/// Finite numbers as JSON numbers, infinities as "inf"/"-inf".
fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or_else(|| Value::String(output::fmt_num(v)), Value::Number)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Fizeau { first_term_only } => {
            let doc = load_config(cli)?;
            let shift = fizeau_shift(&doc.rotation.spec(), *first_term_only)?;
            emit(
                out,
                cli.format,
                &[
                    ("delta_f_mhz", num(shift.as_mhz())),
                    ("first_term_only", json!(first_term_only)),
                ],
            )?;
        }
        Command::Steady { side, solver } => {
            let params = load_config(cli)?.to_params()?;
            let side = match side {
                SideArg::Left => DriveSide::Left,
                SideArg::Right => DriveSide::Right,
            };
            let solver = match solver {
                SolverArg::ClosedForm => Solver::ClosedForm,
                SolverArg::Generic => Solver::Generic,
            };
            let state = solve(&params, side, solver)?;
            let res = state.scaled_residuals(&Coefficients::new(&params, side)?);
            let outs = output_fields(&state, &params);
            emit(
                out,
                cli.format,
                &[
                    ("a1_re", num(state.a1.re)),
                    ("a1_im", num(state.a1.im)),
                    ("a2_re", num(state.a2.re)),
                    ("a2_im", num(state.a2.im)),
                    ("m_re", num(state.m.re)),
                    ("m_im", num(state.m.im)),
                    ("a1_out_abs", num(outs.a1_out.norm())),
                    ("a2_out_abs", num(outs.a2_out.norm())),
                    ("residual_1", num(res[0])),
                    ("residual_2", num(res[1])),
                    ("residual_3", num(res[2])),
                ],
            )?;
        }
        Command::Isolate => {
            let params = load_config(cli)?.to_params()?;
            let r = transmissions(&params)?;
            emit(
                out,
                cli.format,
                &[
                    ("delta_f_mhz", num(params.delta_f.as_mhz())),
                    ("T12", num(r.t12)),
                    ("T21", num(r.t21)),
                    ("R", num(r.r)),
                    ("I_signed_db", num(r.i_signed_db)),
                    ("I_abs_db", num(r.i_abs_db)),
                    ("direction", json!(classify_direction(&r).as_str())),
                    ("infinite_isolation", json!(r.infinite_isolation)),
                ],
            )?;
        }
        Command::Optimize {
            band,
            analytic,
            brute,
            branch,
        } => {
            let doc = load_config(cli)?;
            let params = doc.to_params()?;
            let band = match band {
                Some(s) => parse_band(s)?,
                None => doc.band()?,
            };
            let branch = Branch::from(*branch);
            let (delta_f, method) = if *analytic {
                let opt = analytic_delta_f(&params, branch)?;
                (opt.delta_f, json!(opt.method))
            } else if *brute {
                let search = match branch {
                    Branch::Positive => Band::new(band.min.max(0.0), band.max)?,
                    Branch::Negative => Band::new(band.min, band.max.min(0.0))?,
                    Branch::Best => band,
                };
                (
                    brute_force_optimum(&params, search, DEFAULT_GRID_POINTS)?.delta_f,
                    json!("brute_force"),
                )
            } else {
                let opt = optimal_delta_f(&params, branch, Some(band))?;
                (opt.delta_f, json!(opt.method))
            };
            let r = transmissions(&params.with_delta_f(delta_f))?;
            emit(
                out,
                cli.format,
                &[
                    ("delta_f_mhz", num(delta_f.as_mhz())),
                    ("delta_f_over_gamma_m", num(delta_f / params.magnon.gamma_m)),
                    ("I_abs_db", num(r.i_abs_db)),
                    ("I_signed_db", num(r.i_signed_db)),
                    ("T12", num(r.t12)),
                    ("T21", num(r.t21)),
                    ("method", method),
                ],
            )?;
        }
        Command::Sweep {
            axis,
            axis2,
            out: path,
            optimal,
        } => {
            let doc = load_config(cli)?;
            let base = doc.to_params_unchecked()?;
            let mut axes = vec![parse_axis(axis)?];
            if let Some(a) = axis2 {
                axes.push(parse_axis(a)?);
            }
            let options = SweepOptions {
                delta_f: optimal.map_or(DeltaFPolicy::Given, |b| DeltaFPolicy::Optimal {
                    branch: b.into(),
                    band: doc.band().ok(),
                }),
                threads: threads_from_env()?,
                ..Default::default()
            };
            let result = sweep_with(&base, &axes, &options)?;
            write_result(&result, cli.format, path)?;
            summary(out, &result, path)?;
        }
        Command::Reproduce { name, out: dir } => {
            let preset = figure_preset(name)?;
            let options = SweepOptions {
                threads: threads_from_env()?,
                ..preset.options.clone()
            };
            let result = sweep_with(&preset.base, &preset.axes, &options)?;
            fs::create_dir_all(dir).map_err(io_err(dir))?;
            let name = preset.name;
            let main = dir.join(format!("{name}.csv"));
            write_result(&result, Format::Csv, &main)?;
            if cli.format == Format::Json {
                write_result(&result, Format::Json, &dir.join(format!("{name}.json")))?;
            }
            write_file(&dir.join(format!("{name}_points.csv")), |w| {
                output::write_points_csv(&result, w)
            })?;
            if result.ridge.is_some() {
                write_file(&dir.join(format!("{name}_ridge.csv")), |w| {
                    output::write_ridge_csv(&result, w)
                })?;
            }
            let svg_path = dir.join(format!("{name}.svg"));
            let svg = svg::render(&result, preset.plot, name);
            fs::write(&svg_path, svg).map_err(io_err(&svg_path))?;
            summary(out, &result, &main)?;
        }
        Command::Validate { print_resolved } => {
            let doc = load_config(cli)?;
            let violations = doc.violations()?;
            let w = |r: io::Result<()>| r.map_err(|e| Failure::Io(format!("stdout: {e}")));
            if *print_resolved {
                let resolved = json!({
                    "config": doc,
                    "delta_f_mhz": doc.delta_f().ok().map(|f| f.as_mhz()),
                });
                w(writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&resolved).unwrap_or_default()
                ))?;
            }
            match cli.format {
                Format::Json => w(writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&violations).unwrap_or_default()
                ))?,
                Format::Csv => {
                    if violations.is_empty() {
                        w(writeln!(out, "ok"))?;
                    }
                    for v in &violations {
                        w(writeln!(out, "{}: {}", v.code.as_str(), v.message))?;
                    }
                }
            }
            return Ok(if violations.is_empty() { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn write_file(
    path: &Path,
    f: impl FnOnce(&mut io::BufWriter<fs::File>) -> io::Result<()>,
) -> Result<(), Failure> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = io::BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(io_err(path))
}

fn write_result(result: &SweepResult, format: Format, path: &Path) -> Result<(), Failure> {
    write_file(path, |w| match format {
        Format::Csv => write_csv(result, w),
        Format::Json => write_json(result, w),
    })
}

fn summary(out: &mut dyn Write, result: &SweepResult, path: &Path) -> Result<(), Failure> {
    let failed = result.points.iter().filter(|p| p.outcome.is_err()).count();
    let mut text = format!(
        "wrote {} ({} points, {} failed)",
        path.display(),
        result.points.len(),
        failed
    );
    if let Some((p, r)) = result.max_isolation() {
        text += &format!(
            "\ngrid max |I| = {:.4} dB at axis1 = {}",
            r.i_abs_db, p.coords[0]
        );
        if !p.coords[1].is_nan() {
            text += &format!(", axis2 = {}", p.coords[1]);
        }
    }
    if let Some((p, r)) = result.ridge_max() {
        text += &format!(
            "\nridge max |I| = {:.4} dB at {} = {}, delta_f = {:.6} MHz",
            r.i_abs_db,
            ridge_axis_label(result),
            p.coord,
            p.params.delta_f.as_mhz()
        );
    }
    writeln!(out, "{text}").map_err(|e| Failure::Io(format!("stdout: {e}")))
}

fn ridge_axis_label(result: &SweepResult) -> String {
    result
        .axes
        .iter()
        .find(|a| a.parameter != SweepParam::DeltaF)
        .map_or_else(String::new, |a| a.label())
}

fn parse_band(s: &str) -> Result<Band, Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::InvalidInput(format!("--band expects 'min,max', got '{s}'"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let min: f64 = parts[0].parse().map_err(|_| bad())?;
    let max: f64 = parts[1].parse().map_err(|_| bad())?;
    Band::new(min, max)
}

/// `param[/norm]:min:max:count`, e.g. `delta_f/kappa:-59:59:301`.
pub fn parse_axis(spec: &str) -> Result<Axis, Error> {
    let bad = |why: &str| Error::InvalidAxis(format!("'{spec}': {why}"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 4 {
        return Err(bad("expected param[/norm]:min:max:count"));
    }
    let (name, norm) = match parts[0].split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (parts[0], None),
    };
    let parameter = SweepParam::parse(name).ok_or_else(|| bad("unknown parameter"))?;
    let min = parts[1].parse().map_err(|_| bad("min is not a number"))?;
    let max = parts[2].parse().map_err(|_| bad("max is not a number"))?;
    let count = parts[3]
        .parse()
        .map_err(|_| bad("count is not an integer"))?;
    let axis = Axis::new(parameter, min, max, count)?;
    match norm {
        None => Ok(axis),
        Some("gamma_m") => axis.normalized(Normalization::GammaM),
        Some("kappa") => axis.normalized(Normalization::Kappa),
        Some(_) => Err(bad("normalization must be gamma_m or kappa")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_spec() {
        let a = parse_axis("delta_f/gamma_m:-16:16:1601").unwrap();
        assert_eq!(
            (a.parameter, a.min, a.max, a.count),
            (SweepParam::DeltaF, -16.0, 16.0, 1601)
        );
        assert_eq!(a.normalization, Some(Normalization::GammaM));
        assert_eq!(parse_axis("G:0:1:5").unwrap().parameter, SweepParam::G);
        assert!(parse_axis("delta_f:-1:1").is_err());
        assert!(parse_axis("speed:0:1:3").is_err());
        assert!(parse_axis("delta_f/omega:0:1:3").is_err());
        assert!(parse_axis("G/kappa:0:1:3").is_err());
    }

    #[test]
    fn band_spec() {
        assert_eq!(
            parse_band("-30, 30").unwrap(),
            Band {
                min: -30.0,
                max: 30.0
            }
        );
        assert!(parse_band("5").is_err());
        assert!(parse_band("5,1").is_err());
    }
}
