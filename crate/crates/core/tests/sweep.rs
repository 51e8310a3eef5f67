mod common;

use common::mhz;
use magnon_sagnac::analysis::reciprocal_points;
use magnon_sagnac::cli::write_csv;
use magnon_sagnac::model::SystemParams;
use magnon_sagnac::sweep::{
    figure_preset, sweep, sweep_with, Axis, SweepOptions, SweepParam, SweepResult,
};

fn run_preset(name: &str) -> SweepResult {
    let p = figure_preset(name).unwrap();
    sweep_with(&p.base, &p.axes, &p.options).unwrap()
}

fn csv_bytes(r: &SweepResult) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(r, &mut buf).unwrap();
    buf
}

#[test]
fn fig2b_peaks_and_zero() {
    let r = run_preset("fig2b");
    let (p, rep) = r.max_isolation().unwrap();
    assert!((rep.i_abs_db - 41.63).abs() <= 0.02, "{}", rep.i_abs_db);
    assert!((p.coords[0].abs() - 8.30).abs() <= 0.02, "{}", p.coords[0]);
    let mid = &r.points[800];
    assert_eq!(mid.coords[0], 0.0);
    assert_eq!(mid.report().unwrap().i_abs_db, 0.0);
    // the other peak mirrors the first
    let mirror = r
        .points
        .iter()
        .find(|q| q.coords[0] == -p.coords[0])
        .unwrap();
    assert!((mirror.report().unwrap().i_abs_db - rep.i_abs_db).abs() < 1e-9);
}

#[test]
fn parallelism_does_not_change_bytes() {
    let p = figure_preset("fig4a").unwrap();
    let one = sweep_with(
        &p.base,
        &p.axes,
        &SweepOptions {
            threads: Some(1),
            ..p.options.clone()
        },
    )
    .unwrap();
    let many = sweep_with(
        &p.base,
        &p.axes,
        &SweepOptions {
            threads: Some(3),
            ..p.options.clone()
        },
    )
    .unwrap();
    assert_eq!(csv_bytes(&one), csv_bytes(&many));
    assert_eq!(one.ridge, many.ridge);
}

#[test]
fn symmetric_grids_mirror_in_fizeau_shift() {
    for name in ["fig3a", "fig4a"] {
        let r = run_preset(name);
        let (n0, n1) = r.shape();
        for i in 0..n0 {
            for j in 0..n1 {
                let a = r.point(i, j).report().unwrap().i_abs_db;
                let b = r.point(n0 - 1 - i, j).report().unwrap().i_abs_db;
                assert!((a - b).abs() <= 1e-10, "{name} ({i}, {j}): {a} vs {b}");
            }
        }
    }
}

/// Largest |I_signed| over the Δ_F axis in column `j`.
fn column_max(r: &SweepResult, j: usize) -> f64 {
    (0..r.shape().0)
        .map(|i| r.point(i, j).report().unwrap().i_abs_db)
        .fold(0.0, f64::max)
}

#[test]
fn reciprocity_line_in_detuned_grids() {
    for (name, pick) in [("fig3b", 0usize), ("fig4b", 1)] {
        let r = run_preset(name);
        let recip = reciprocal_points(&r.base).unwrap();
        let target = if pick == 0 {
            recip.gamma0.as_mhz()
        } else {
            recip.kappa0.as_mhz()
        };
        let axis = r.axes[1];
        let step = (axis.max - axis.min) / (axis.count - 1) as f64;
        let j = ((target - axis.min) / step).round() as usize;
        assert!((axis.value(j) - target).abs() <= step / 2.0);

        // bound: the same column one full step from the reciprocal point
        let probe = sweep(
            &r.base,
            &[
                r.axes[0],
                Axis::new(axis.parameter, target + step, target + 2.0 * step, 2).unwrap(),
            ],
        )
        .unwrap();
        let bound = column_max(&probe, 0);
        let here = column_max(&r, j);
        assert!(here < bound, "{name}: {here} ≥ {bound}");

        let exact = sweep(
            &r.base,
            &[
                r.axes[0],
                Axis::new(axis.parameter, target, target + step, 2).unwrap(),
            ],
        )
        .unwrap();
        assert!(
            column_max(&exact, 0) <= 1e-9,
            "{name}: {}",
            column_max(&exact, 0)
        );
    }
}

#[test]
fn ridges_peak_at_lower_axis_bound() {
    for (name, expected, tol) in [
        ("fig3a", 45.890, 0.02),
        ("fig3b", 41.352, 0.02),
        ("fig4a", 51.437, 0.06),
        ("fig4b", 50.542, 0.05),
    ] {
        let r = run_preset(name);
        let (p, rep) = r.ridge_max().unwrap();
        assert_eq!(p.coord, r.axes[1].min, "{name}");
        assert!(
            (rep.i_abs_db - expected).abs() <= tol,
            "{name}: {}",
            rep.i_abs_db
        );
    }
}

#[test]
fn optimal_curves_record_their_shift() {
    let r = run_preset("fig6");
    assert!(r.points.iter().all(|p| p.params.delta_f.as_mhz() > 0.0));
    // more squeezing, more isolation, at every γm
    for i in 0..r.shape().0 {
        let curve: Vec<f64> = (0..5)
            .map(|j| r.point(i, j).report().unwrap().i_abs_db)
            .collect();
        assert!(
            curve.windows(2).all(|w| w[1] > w[0]),
            "γm = {}",
            r.point(i, 0).coords[0]
        );
    }
    // clamped presets stay in the feasible band
    for name in ["fig5a", "fig7a", "fig7b"] {
        let r = run_preset(name);
        assert!(
            r.points
                .iter()
                .all(|p| p.params.delta_f.as_mhz().abs() <= 65.0),
            "{name}"
        );
    }
}

#[test]
fn fig5_signs_follow_reciprocal_point() {
    // at Δ = 22 the sign of I flips where γm crosses γ0
    let r = run_preset("fig5a");
    let base = SystemParams {
        delta: mhz(22.0),
        ..r.base
    };
    let gamma0 = reciprocal_points(&base).unwrap().gamma0.as_mhz();
    for i in 0..r.shape().0 {
        let p = r.point(i, 2);
        let g = p.coords[0];
        let s = p.report().unwrap().i_signed_db;
        if (g - gamma0).abs() > 0.05 {
            assert_eq!(s > 0.0, g < gamma0, "γm = {g}, I = {s}");
        }
    }
}

#[test]
fn sweep_param_names_round_trip() {
    for p in [
        SweepParam::DeltaF,
        SweepParam::GammaM,
        SweepParam::Kappa,
        SweepParam::Delta,
        SweepParam::G,
        SweepParam::G2OverG1,
        SweepParam::OmegaS,
    ] {
        assert_eq!(SweepParam::parse(p.as_str()), Some(p));
    }
}
