//! Mass-subcritical data under constant damping: scattering and decay rate.

use dinls::damping::DampingProfile;
use dinls::diagnostics::{classify_run, decay_fit, DecayObservable};
use dinls::evolution::{evolve, EvolveOptions};
use dinls::fields::regular_gaussian;
use dinls::operator::{build_operator, RadialGrid};
use dinls::params::ModelParams;

fn main() -> dinls::Result<()> {
    let params = ModelParams::focusing(3, 0.5, 1.5, 1.0)?;
    let grid = RadialGrid::new(60.0, 512)?;
    let op = build_operator(grid, 3, 1.0)?;
    let u0 = regular_gaussian(grid, 3, 1.0, 1.0, 2.0)?;
    for gamma in [0.25, 0.5, 1.0] {
        let profile = DampingProfile::constant(gamma)?;
        let options = EvolveOptions::default().sample_every(10).snapshots_every(500);
        let traj = evolve(&u0, 60.0, 1e-2, &profile, &params, &op, &options)?;
        let summary = classify_run(&traj, &op)?;
        let fit = decay_fit(&traj, DecayObservable::SqrtKNormSq, (10.0, 60.0))?;
        let tail = summary
            .scattering
            .as_ref()
            .map(|s| format!("{:.2e}", s.tail[s.tail.len() - 2] / s.h1_initial))
            .unwrap_or_default();
        println!(
            "gamma = {gamma}: {} (relative tail {tail}), decay rate {:.4} vs 2 gamma = {}",
            summary.outcome,
            fit.rate,
            2.0 * gamma
        );
    }
    Ok(())
}
