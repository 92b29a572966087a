//! Fitting, scattering and regime guards on synthetic inputs.

use dinls::damping::DampingProfile;
use dinls::diagnostics::{
    a_star_search, decay_fit, dispersive_fit, dispersive_r_cap, gronwall_bound_check, refinement_order,
    scattering_detector, DecayObservable, Outcome, RunSettings,
};
use dinls::error::Error;
use dinls::evolution::{evolve, EvolveOptions, Observables, RunVerdict, Trajectory};
use dinls::fields::{gaussian, random_smooth_field};
use dinls::groundstate::ground_state;
use dinls::operator::{build_operator, RadialGrid, ReducedField};
use dinls::params::{kappa, ModelParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn synthetic(rate: f64, amplitude: f64) -> Trajectory {
    let samples = (0..=200)
        .map(|k| {
            let t = 0.1 * k as f64;
            let q = amplitude * (-rate * t).exp();
            Observables {
                t,
                mass: 1.0,
                quadform: q,
                potential: 0.0,
                energy: q,
                action_i: q,
                gauge: 0.0,
            }
        })
        .collect();
    Trajectory {
        dt: 0.1,
        samples,
        snapshots: Vec::new(),
        verdict: RunVerdict::Completed,
        boundary_mass: 0.0,
    }
}

#[test]
fn decay_fit_recovers_an_exact_exponential() {
    let traj = synthetic(0.73, 4.2);
    let fit = decay_fit(&traj, DecayObservable::SqrtKNormSq, (2.0, 18.0)).unwrap();
    assert!((fit.rate - 0.73).abs() < 1e-10);
    assert!((fit.intercept - 4.2f64.ln()).abs() < 1e-9);
    assert!(fit.r_squared > 1.0 - 1e-12);
    assert_eq!(fit.samples, 161);

    let h1 = decay_fit(&traj, DecayObservable::H1Norm, (15.0, 20.0)).unwrap();
    assert!(
        h1.rate < 0.73 / 2.0 + 1e-3,
        "H1 norm decays no faster than half the form"
    );
}

#[test]
fn decay_fit_rejects_bad_windows() {
    let traj = synthetic(0.5, 1.0);
    assert!(decay_fit(&traj, DecayObservable::Mass, (5.0, 5.0)).is_err());
    assert!(decay_fit(&traj, DecayObservable::Mass, (25.0, 30.0)).is_err());
    assert!(matches!(
        decay_fit(&traj, DecayObservable::Mass, (0.0, 0.15)),
        Err(Error::TooFewSamples { .. })
    ));
}

#[test]
fn refinement_order_of_a_power_law() {
    let dts = [0.04, 0.02, 0.01, 0.005];
    let res: Vec<f64> = dts.iter().map(|d: &f64| 3.0 * d.powi(2)).collect();
    let est = refinement_order(&dts, &res).unwrap();
    assert!((est.order - 2.0).abs() < 1e-12);
    assert!(est.pairwise.iter().all(|q| (q - 2.0).abs() < 1e-12));
    assert!(est.within(2.0, 0.01));
    assert!(refinement_order(&dts[..1], &res[..1]).is_err());
    assert!(matches!(
        refinement_order(&[0.1, 0.05], &[1.0, 0.0]),
        Err(Error::NonPositiveObservable { .. })
    ));
}

#[test]
fn free_flow_scatters_trivially() {
    let grid = RadialGrid::new(30.0, 128).unwrap();
    let op = build_operator(grid, 3, 0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let phi = random_smooth_field(grid, 3, &mut rng);
    let snapshots: Vec<ReducedField> = (0..6)
        .map(|k| op.propagate(&phi, k as f64).unwrap().with_time(k as f64))
        .collect();
    let report = scattering_detector(&snapshots, &op).unwrap();
    assert!(report.scatters);
    assert!(report.tail.iter().all(|s| *s < 1e-10 * report.h1_initial));
}

#[test]
fn changing_profiles_do_not_scatter() {
    let grid = RadialGrid::new(30.0, 128).unwrap();
    let op = build_operator(grid, 3, 0.0).unwrap();
    let snapshots: Vec<ReducedField> = (0..6)
        .map(|k| gaussian(grid, 3, 1.0 + 0.3 * k as f64, 1.0).with_time(k as f64))
        .collect();
    let report = scattering_detector(&snapshots, &op).unwrap();
    assert!(!report.scatters);
    assert!(scattering_detector(&snapshots[..2], &op).is_err());
    let mut unordered = snapshots.clone();
    unordered.swap(1, 2);
    assert!(scattering_detector(&unordered, &op).is_err());
}

#[test]
fn dispersive_exponent_range_is_enforced() {
    // λ < 0 makes κ positive and caps r at N/κ
    let lambda = -0.2;
    let k = kappa(3, lambda).unwrap();
    let cap = dispersive_r_cap(3, lambda).unwrap();
    assert!((cap - 3.0 / k).abs() < 1e-12);
    assert_eq!(dispersive_r_cap(3, 1.0).unwrap(), f64::INFINITY);

    let grid = RadialGrid::new(50.0, 64).unwrap();
    let op = build_operator(grid, 3, lambda).unwrap();
    let phi = gaussian(grid, 3, 2.0, 1.0);
    assert!(dispersive_fit(&op, &phi, cap + 0.5, (1.0, 5.0)).is_err());
    assert!(dispersive_fit(&op, &phi, 1.5, (1.0, 5.0)).is_err());
}

#[test]
fn gronwall_check_needs_mass_critical_model() {
    let params = ModelParams::focusing(3, 0.5, 2.0, 0.0).unwrap();
    let gs = ground_state(&params, RadialGrid::new(20.0, 400).unwrap()).unwrap();
    let other = ModelParams::focusing(3, 0.5, 3.0, 0.0).unwrap();
    let grid = RadialGrid::new(20.0, 64).unwrap();
    let op = build_operator(grid, 3, 0.0).unwrap();
    let profile = DampingProfile::constant(0.2).unwrap();
    let u0 = gaussian(grid, 3, 1.0, 0.2);
    let traj = evolve(&u0, 0.5, 0.05, &profile, &other, &op, &EvolveOptions::default()).unwrap();
    assert!(matches!(
        gronwall_bound_check(&traj, &gs, &other, &profile),
        Err(Error::WrongRegime { .. })
    ));
}

#[test]
fn damping_scan_validates_its_grid() {
    let params = ModelParams::focusing(3, 0.5, 3.0, 0.0).unwrap();
    let grid = RadialGrid::new(20.0, 64).unwrap();
    let op = build_operator(grid, 3, 0.0).unwrap();
    let u0 = gaussian(grid, 3, 1.0, 0.1);
    let settings = RunSettings {
        t_final: 2.0,
        dt: 0.01,
        snapshot_stride: 20,
        sample_stride: 10,
    };
    assert!(matches!(
        a_star_search(&params, &u0, &op, &[], &settings),
        Err(Error::EmptyScan)
    ));
    assert!(a_star_search(&params, &u0, &op, &[1.0, 0.5], &settings).is_err());
    assert!(a_star_search(&params, &u0, &op, &[0.0, 1.0], &settings).is_err());
    let subcritical = ModelParams::focusing(3, 0.5, 1.5, 0.0).unwrap();
    assert!(matches!(
        a_star_search(&subcritical, &u0, &op, &[1.0], &settings),
        Err(Error::WrongRegime { .. })
    ));
}

#[test]
fn damping_scan_rows_are_ordered_and_small_data_scatters() {
    let params = ModelParams::focusing(3, 0.5, 3.0, 0.0).unwrap();
    let grid = RadialGrid::new(30.0, 96).unwrap();
    let op = build_operator(grid, 3, 0.0).unwrap();
    let u0 = gaussian(grid, 3, 1.0, 0.05);
    let settings = RunSettings {
        t_final: 6.0,
        dt: 0.01,
        snapshot_stride: 100,
        sample_stride: 10,
    };
    let report = a_star_search(&params, &u0, &op, &[0.5, 1.0, 2.0], &settings).unwrap();
    let gammas: Vec<f64> = report.rows.iter().map(|r| r.gamma).collect();
    assert_eq!(gammas, vec![0.5, 1.0, 2.0]);
    assert!(report.rows.iter().all(|r| r.summary.outcome == Outcome::Scatters));
    assert_eq!(report.empirical, Some(0.5));
    assert!(report.heuristic_scale.is_some());
    assert!(report.a_double_star.is_none());
}
