//! Ground state, sharp Gagliardo-Nirenberg constant and its certificates.
//!
//! Pass a cell count to refine (default 6400); residuals fall like h².

use dinls::fields::random_smooth_field;
use dinls::groundstate::{gn_check, ground_state};
use dinls::operator::{RadialGrid, ReducedField};
use dinls::params::{mass_critical_p, ModelParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dinls::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6400);
    let grid = RadialGrid::new(20.0, n)?;
    for (b, p, lambda) in [(0.5, mass_critical_p(3, 0.5), 0.0), (0.5, 3.0, 1.0)] {
        let params = ModelParams::focusing(3, b, p, lambda)?;
        let gs = ground_state(&params, grid)?;
        println!(
            "N=3 b={b} p={p:.4} lambda={lambda}  (n = {n}, {} iterations)",
            gs.iterations
        );
        println!("  K_opt = {:.10e}   |Q|_2 = {:.8}", gs.k_opt_quotient, gs.norm_q());
        println!(
            "  pohozaev residuals ({:.2e}, {:.2e}), K_opt routes {:.2e}, Euler-Lagrange {:.2e}",
            gs.pohozaev_residuals.0,
            gs.pohozaev_residuals.1,
            gs.k_opt_agreement(),
            gs.el_residual
        );
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let samples: Vec<ReducedField> = (0..200).map(|_| random_smooth_field(grid, 3, &mut rng)).collect();
        let report = gn_check(&samples, &gs)?;
        println!(
            "  largest GN ratio over 200 random fields: {:.6} (equality at Q)",
            report.max_ratio
        );
    }
    Ok(())
}
