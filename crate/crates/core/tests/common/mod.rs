#![allow(dead_code)]

use magnon_sagnac::analysis::{
    brute_force_optimum, extremal_fizeau_symmetric, Band, DEFAULT_GRID_POINTS,
};
use magnon_sagnac::model::{
    CavityModeParams, DriveParams, Frequency, MagnonDrive, MagnonParams, SqueezeSpec,
    SymmetricSetup, SystemParams,
};
use magnon_sagnac::steady_state::{solve, transmissions, DriveSide, Solver};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn mhz(v: f64) -> Frequency {
    Frequency::mhz(v)
}

pub fn sym(setup: SymmetricSetup) -> SystemParams {
    SystemParams::symmetric(setup).unwrap()
}

/// Arbitrary valid parameters: unequal modes, couplings and drives.
pub fn any_params() -> impl Strategy<Value = SystemParams> {
    (
        (0.05..10.0f64, 0.05..10.0f64, 0.05..1.0f64, 0.05..1.0f64),
        (
            0.1..20.0f64,
            0.05..1.0f64,
            0.0..100.0f64,
            0.0..100.0f64,
            0.0..1.2f64,
        ),
        (-50.0..50.0f64, -65.0..65.0f64, 0.0..100.0f64),
        (1e6..1e10f64, 1e6..1e10f64, 0.0..1e10f64),
    )
        .prop_map(
            |((k1, k2, e1, e2), (gm, e3, g1, g2, g), (delta, df, ws), (f1, f2, f3))| SystemParams {
                cavity_1: CavityModeParams::from_total_eta(mhz(k1), e1),
                cavity_2: CavityModeParams::from_total_eta(mhz(k2), e2),
                magnon: MagnonParams {
                    omega_m: mhz(10_100.0),
                    gamma_m: mhz(gm),
                    eta3: e3,
                    bias_field_t: None,
                },
                squeeze: SqueezeSpec::Direct {
                    g,
                    omega_s: Some(mhz(ws)),
                },
                drives: DriveParams {
                    powers_w: None,
                    omega_p: Frequency::from_thz(193.0),
                    eps_1: f1,
                    eps_2: f2,
                    magnon: MagnonDrive::Bare(f3),
                },
                g0_1: mhz(g1),
                g0_2: mhz(g2),
                delta: mhz(delta),
                delta_f: mhz(df),
            },
        )
}

/// Equal-parameter configurations around the working point.
pub fn any_symmetric() -> impl Strategy<Value = SymmetricSetup> {
    (
        -40.0..40.0f64,
        0.0..60.0f64,
        10.0..80.0f64,
        0.0..1.0f64,
        0.1..5.0f64,
        0.5..15.0f64,
        0.1..1.0f64,
    )
        .prop_map(|(delta, df, g0, g, kappa, gamma_m, eta)| SymmetricSetup {
            delta: mhz(delta),
            delta_f: mhz(df),
            g0: mhz(g0),
            squeeze_g: g,
            kappa: mhz(kappa),
            gamma_m: mhz(gamma_m),
            eta,
            ..Default::default()
        })
}

pub fn solvers_agree(p: &SystemParams) -> Result<(), TestCaseError> {
    for side in [DriveSide::Left, DriveSide::Right] {
        let a = solve(p, side, Solver::Generic).unwrap().as_array();
        let b = solve(p, side, Solver::ClosedForm).unwrap().as_array();
        let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (x, y) in a.iter().zip(&b) {
            let err = (x - y).norm();
            prop_assert!(
                err <= 1e-12 * scale,
                "side {side:?}: |Δ| = {err:e}, scale {scale:e}"
            );
        }
    }
    Ok(())
}

pub fn antisymmetric(setup: SymmetricSetup) -> Result<(), TestCaseError> {
    let plus = transmissions(&sym(setup)).unwrap();
    let minus = transmissions(&sym(SymmetricSetup {
        delta_f: -setup.delta_f,
        ..setup
    }))
    .unwrap();
    prop_assert!((plus.i_signed_db + minus.i_signed_db).abs() <= 1e-10 * plus.i_abs_db.max(1.0));
    prop_assert!((plus.r * minus.r - 1.0).abs() <= 1e-10);
    Ok(())
}

/// At Δ = g′√(κ/γm) the isolation vanishes for every Δ_F.
pub fn matched_reciprocal(setup: SymmetricSetup) -> Result<(), TestCaseError> {
    let g = setup.g0.as_mhz() * (2.0 * setup.squeeze_g).cosh();
    let delta = g * (setup.kappa / setup.gamma_m).sqrt();
    for k in 0..101 {
        let df = -65.0 + 1.3 * k as f64;
        let p = sym(SymmetricSetup {
            delta: mhz(delta),
            delta_f: mhz(df),
            ..setup
        });
        let i = transmissions(&p).unwrap().i_abs_db;
        prop_assert!(i <= 1e-9, "Δ_F = {df}: |I| = {i:e}");
    }
    Ok(())
}

pub fn omega_s_invariant(p: &SystemParams) -> Result<(), TestCaseError> {
    let reference = transmissions(&p.with_omega_s(Frequency::ZERO)).unwrap();
    for ws in [1.0, 100.0, 1e4] {
        let r = transmissions(&p.with_omega_s(mhz(ws))).unwrap();
        prop_assert!(
            (r.i_signed_db - reference.i_signed_db).abs() <= 1e-10,
            "ωs = {ws}"
        );
        prop_assert!(
            (r.r - reference.r).abs() <= 1e-10 * reference.r.max(1.0),
            "ωs = {ws}"
        );
    }
    Ok(())
}

/// Multiplies every rate and frequency offset by `s`.
pub fn scaled(p: &SystemParams, s: f64) -> SystemParams {
    let ws = p.effective().unwrap().omega_s;
    let mut q = p
        .with_kappa(p.cavity_1.kappa_total * s)
        .with_gamma_m(p.magnon.gamma_m * s)
        .with_omega_s(ws * s)
        .with_delta_f(p.delta_f * s);
    q.cavity_2 = p.cavity_2.with_total(p.cavity_2.kappa_total * s);
    q.g0_1 = p.g0_1 * s;
    q.g0_2 = p.g0_2 * s;
    q.delta = p.delta * s;
    q
}

pub fn scale_invariant(p: &SystemParams, s: f64) -> Result<(), TestCaseError> {
    let a = transmissions(p).unwrap();
    let b = transmissions(&scaled(p, s)).unwrap();
    for (x, y) in [
        (a.t12, b.t12),
        (a.t21, b.t21),
        (a.r, b.r),
        (a.i_signed_db, b.i_signed_db),
    ] {
        prop_assert!(
            (x - y).abs() <= 1e-10 * x.abs().max(1e-300),
            "{x} vs {y} at s = {s}"
        );
    }
    Ok(())
}

pub fn extremal_i(setup: SymmetricSetup) -> f64 {
    extremal_fizeau_symmetric(&sym(setup)).unwrap().i_db
}

/// Extremal I grows with G, and as γm or κ shrink, at Δ = 0.
pub fn monotone() -> Result<(), TestCaseError> {
    let base = SymmetricSetup::default();
    let series = |f: &dyn Fn(f64) -> SymmetricSetup, xs: Vec<f64>| {
        xs.into_iter().map(|x| extremal_i(f(x))).collect::<Vec<_>>()
    };
    let grid = |lo: f64, hi: f64, n: usize| {
        (0..n)
            .map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect::<Vec<_>>()
    };

    let by_g = series(
        &|g| SymmetricSetup {
            squeeze_g: g,
            ..base
        },
        grid(0.0, 1.5, 61),
    );
    prop_assert!(by_g.windows(2).all(|w| w[1] > w[0]), "not increasing in G");
    let by_gamma = series(
        &|x| SymmetricSetup {
            gamma_m: mhz(x),
            ..base
        },
        grid(0.2, 15.0, 75),
    );
    prop_assert!(
        by_gamma.windows(2).all(|w| w[1] < w[0]),
        "not decreasing in γm"
    );
    let by_kappa = series(
        &|x| SymmetricSetup {
            kappa: mhz(x),
            ..base
        },
        grid(0.05, 5.0, 100),
    );
    prop_assert!(
        by_kappa.windows(2).all(|w| w[1] < w[0]),
        "not decreasing in κ"
    );
    Ok(())
}

/// Brute force on [0, max(65, 2Δ_F1)] against the positive analytic root.
pub fn brute_matches_analytic(setup: SymmetricSetup) -> Result<(), TestCaseError> {
    let p = sym(setup);
    let rep = extremal_fizeau_symmetric(&p).unwrap();
    let root = rep.delta_f_1.as_mhz();
    let band = Band::new(0.0, 65f64.max(2.0 * root)).unwrap();
    let opt = brute_force_optimum(&p, band, DEFAULT_GRID_POINTS).unwrap();
    let at_root = transmissions(&p.with_delta_f(rep.delta_f_1))
        .unwrap()
        .i_abs_db;
    prop_assert!(
        (opt.delta_f.as_mhz() - root).abs() <= 1e-3,
        "Δ_F {} vs {}",
        opt.delta_f.as_mhz(),
        root
    );
    prop_assert!(
        (opt.i_abs_db - at_root).abs() <= 1e-6,
        "I {} vs {}",
        opt.i_abs_db,
        at_root
    );
    Ok(())
}
