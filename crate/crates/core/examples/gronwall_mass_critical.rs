//! Mass-critical decay bound for data below the ground state.

use dinls::damping::DampingProfile;
use dinls::diagnostics::{gronwall_bound_check, GronwallOutcome};
use dinls::evolution::{evolve, EvolveOptions};
use dinls::functionals::mass;
use dinls::groundstate::{ground_state, resample};
use dinls::operator::{build_operator, RadialGrid};
use dinls::params::ModelParams;

fn main() -> dinls::Result<()> {
    let params = ModelParams::focusing(3, 0.5, 2.0, 0.0)?;
    let gs = ground_state(&params, RadialGrid::new(20.0, 2000)?)?;
    let grid = RadialGrid::new(40.0, 512)?;
    let op = build_operator(grid, 3, 0.0)?;
    let profile = DampingProfile::constant(0.2)?;
    let q = resample(gs.profile(), grid);
    let unit = q.scaled(1.0 / mass(&q).sqrt());

    for rho in [0.2f64, 1.0 / 3.0, 0.5, 0.7] {
        let u0 = unit.scaled(gs.norm_q() * rho.powf(1.0 / (params.p - 1.0)));
        let traj = evolve(
            &u0,
            20.0,
            1e-2,
            &profile,
            &params,
            &op,
            &EvolveOptions::default().sample_every(10),
        )?;
        let report = gronwall_bound_check(&traj, &gs, &params, &profile)?;
        let verdict = match report.outcome {
            GronwallOutcome::HypothesisNotMet => "hypothesis not met, nothing claimed".to_string(),
            GronwallOutcome::Holds => format!("holds, max ratio {:.4}", report.max_ratio),
            GronwallOutcome::Violated { t, .. } => format!("violated at t = {t}"),
        };
        println!(
            "rho = {rho:.3}: rate {:?}, below threshold {}, {verdict}",
            report.hypothesis.rate, report.hypothesis.below_threshold
        );
    }
    Ok(())
}
