//! Named sweeps with fixed parameters, axes and grid densities.

use crate::analysis::{Band, Branch};
use crate::error::{Error, Result};
use crate::model::{Frequency, SystemParams};

use super::{Axis, DeltaFPolicy, Normalization, SweepOptions, SweepParam};

pub const PRESET_NAMES: [&str; 12] = [
    "fig2a",
    "fig2b",
    "fig3a",
    "fig3b",
    "fig4a",
    "fig4b",
    "fig5a",
    "fig5b",
    "fig6",
    "fig6inset",
    "fig7a",
    "fig7b",
];

/// What the SVG for a preset draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// T12 and T21 against axis 0.
    Transmissions,
    /// |I′| against axis 0, one curve per axis-1 value.
    IsolationAbs,
    /// Signed I against axis 0, one curve per axis-1 value.
    IsolationSigned,
    /// |I′| over the two-axis grid.
    Heatmap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub name: &'static str,
    pub base: SystemParams,
    pub axes: Vec<Axis>,
    pub options: SweepOptions,
    pub plot: PlotKind,
}

pub fn figure_preset(name: &str) -> Result<FigurePreset> {
    let name = PRESET_NAMES
        .iter()
        .copied()
        .find(|n| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;

    let fig2 = SystemParams::fig2();
    let with_delta = |d: f64| SystemParams {
        delta: Frequency::mhz(d),
        ..fig2
    };
    let df_over = |by: Normalization, lim: f64, count: usize| {
        Axis::new(SweepParam::DeltaF, -lim, lim, count)?.normalized(by)
    };
    let optimal = |branch: Branch, band: Option<Band>| SweepOptions {
        delta_f: DeltaFPolicy::Optimal { branch, band },
        ..Default::default()
    };
    let grid = SweepOptions {
        ridge: true,
        ..Default::default()
    };
    let feasible = Some(Band::feasible());

    let (base, axes, options, plot) = match name {
        "fig2a" | "fig2b" => (
            fig2,
            vec![df_over(Normalization::GammaM, 16.0, 1601)?],
            SweepOptions::default(),
            if name == "fig2a" {
                PlotKind::Transmissions
            } else {
                PlotKind::IsolationAbs
            },
        ),
        "fig3a" | "fig3b" => {
            let (delta, gamma_lo) = if name == "fig3a" {
                (0.0, 1.5)
            } else {
                (22.0, 1.503)
            };
            (
                with_delta(delta),
                vec![
                    df_over(Normalization::Kappa, 59.0, 301)?,
                    Axis::new(SweepParam::GammaM, gamma_lo, 12.0, 301)?,
                ],
                grid,
                PlotKind::Heatmap,
            )
        }
        "fig4a" | "fig4b" => {
            let (delta, kappa_lo) = if name == "fig4a" {
                (0.0, 0.114)
            } else {
                (20.0, 0.112)
            };
            (
                with_delta(delta),
                vec![
                    df_over(Normalization::GammaM, 16.0, 301)?,
                    Axis::new(SweepParam::Kappa, kappa_lo, 4.0, 301)?,
                ],
                grid,
                PlotKind::Heatmap,
            )
        }
        "fig5a" => (
            fig2,
            vec![
                Axis::new(SweepParam::GammaM, 1.5, 12.0, 801)?,
                Axis::new(SweepParam::Delta, 0.0, 22.0, 3)?,
            ],
            optimal(Branch::Positive, feasible),
            PlotKind::IsolationSigned,
        ),
        "fig5b" => (
            fig2,
            vec![
                Axis::new(SweepParam::Kappa, 0.112, 4.0, 801)?,
                Axis::new(SweepParam::Delta, 0.0, 40.0, 3)?,
            ],
            optimal(Branch::Positive, feasible),
            PlotKind::IsolationSigned,
        ),
        "fig6" => (
            fig2,
            vec![
                Axis::new(SweepParam::GammaM, 1.5, 12.0, 801)?,
                Axis::new(SweepParam::G, 0.0, 1.0, 5)?,
            ],
            optimal(Branch::Positive, None),
            PlotKind::IsolationAbs,
        ),
        "fig6inset" => (
            fig2,
            vec![
                Axis::new(SweepParam::Kappa, 0.112, 4.0, 801)?,
                Axis::new(SweepParam::G, 0.0, 1.0, 5)?,
            ],
            optimal(Branch::Positive, None),
            PlotKind::IsolationAbs,
        ),
        "fig7a" | "fig7b" => {
            let branch = if name == "fig7a" {
                Branch::Positive
            } else {
                Branch::Negative
            };
            (
                fig2,
                vec![
                    Axis::new(SweepParam::GammaM, 1.5, 12.0, 801)?,
                    Axis::new(SweepParam::G2OverG1, 0.5, 2.0, 4)?,
                ],
                optimal(branch, feasible),
                PlotKind::IsolationAbs,
            )
        }
        _ => unreachable!("name comes from PRESET_NAMES"),
    };
    Ok(FigurePreset {
        name,
        base,
        axes,
        options: SweepOptions {
            preset: Some(name.to_string()),
            ..options
        },
        plot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for name in PRESET_NAMES {
            let p = figure_preset(name).unwrap();
            assert_eq!(p.name, name);
            assert!(p.base.ensure_valid().is_ok());
        }
        assert!(figure_preset("FIG3A").is_ok());
        assert!(matches!(
            figure_preset("fig9"),
            Err(Error::UnknownPreset(_))
        ));
    }

    #[test]
    fn fig5a_has_three_detunings() {
        let p = figure_preset("fig5a").unwrap();
        assert_eq!(
            p.axes[1].values().collect::<Vec<_>>(),
            vec![0.0, 11.0, 22.0]
        );
    }
}
