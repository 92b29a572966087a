//! Constant damping turns blow-up or non-scattering into scattering.
//!
//! Takes tens of seconds per power on one core.

use dinls::damping::DampingProfile;
use dinls::diagnostics::{a_star_search, classify_run, RunSettings};
use dinls::evolution::{evolve, EvolveOptions};
use dinls::operator::{build_operator, RadialGrid, ReducedField};
use dinls::params::ModelParams;

fn main() -> dinls::Result<()> {
    let grid = RadialGrid::new(30.0, 512)?;
    let op = build_operator(grid, 3, 0.0)?;
    let u0 = ReducedField::from_real_radial(grid, 3, |r| 1.5 * (-r * r / 2.0).exp());
    let settings = RunSettings {
        t_final: 20.0,
        dt: 2e-3,
        snapshot_stride: 500,
        sample_stride: 50,
    };
    for p in [3.0, 4.0] {
        let params = ModelParams::focusing(3, 0.5, p, 0.0)?;
        let options = EvolveOptions::default().sample_every(50).snapshots_every(500);
        let free = classify_run(
            &evolve(&u0, 20.0, 2e-3, &DampingProfile::Zero, &params, &op, &options)?,
            &op,
        )?;
        println!(
            "p = {p}: undamped run {} (blow-up time {:?})",
            free.outcome, free.blowup_time
        );
        let report = a_star_search(&params, &u0, &op, &[0.25, 0.5, 1.0, 2.0, 4.0], &settings)?;
        for row in &report.rows {
            println!("  gamma = {:<5} {}", row.gamma, row.summary.outcome);
        }
        println!(
            "  smallest scattering gamma {:?}, |u0|_H1 = {:.4}, heuristic scale {:?}, a** {:?}",
            report.empirical, report.u0_h1, report.heuristic_scale, report.a_double_star
        );
    }
    Ok(())
}
