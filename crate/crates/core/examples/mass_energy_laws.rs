//! Mass law and energy-law refinement on the default damped run.

use dinls::commands::refinement_study;
use dinls::damping::DampingProfile;
use dinls::fields::gaussian;
use dinls::operator::{build_operator, RadialGrid};
use dinls::params::ModelParams;

fn main() -> dinls::Result<()> {
    let params = ModelParams::focusing(3, 0.5, 2.0, 1.0)?;
    let grid = RadialGrid::new(40.0, 128)?;
    let op = build_operator(grid, 3, 1.0)?;
    let profile = DampingProfile::constant(0.3)?;
    let u0 = gaussian(grid, 3, std::f64::consts::SQRT_2, 1.0);

    let dts = [4e-3, 2e-3, 1e-3];
    let study = refinement_study(&u0, 10.0, &dts, &profile, &params, &op)?;
    println!(
        "{:>8} {:>12} {:>12} {:>12}",
        "dt", "mass law", "energy law", "hamiltonian"
    );
    for (dt, r) in dts.iter().zip(&study.residuals) {
        println!(
            "{dt:>8} {:>12.3e} {:>12.3e} {:>12.3e}",
            r.mass_law, r.energy_law, r.hamiltonian
        );
    }
    println!(
        "energy-law order {:.3}, hamiltonian order {:.3}",
        study.energy_order.order, study.hamiltonian_order.order
    );
    Ok(())
}
