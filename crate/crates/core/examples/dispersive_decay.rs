//! Free dispersive decay of L^r norms against t^{-N(1/2-1/r)}.

use dinls::diagnostics::{dispersive_fit, dispersive_r_cap};
use dinls::fields::regular_gaussian;
use dinls::operator::{build_operator, RadialGrid};

fn main() -> dinls::Result<()> {
    let grid = RadialGrid::new(500.0, 2048)?;
    for (dim, lambda) in [(3, 0.0), (3, 1.0), (4, 1.0), (3, -0.2)] {
        let op = build_operator(grid, dim, lambda)?;
        let phi = regular_gaussian(grid, dim, lambda, 2.0, 1.0)?;
        println!(
            "N={dim} lambda={lambda}: admissible r < {}",
            dispersive_r_cap(dim, lambda)?
        );
        for r in [3.0, 4.0, 6.0, 12.0] {
            match dispersive_fit(&op, &phi, r, (5.0, 50.0)) {
                Ok(fit) => println!(
                    "  r = {r:>4}: slope {:>8.4}  predicted {:>8.4}  R^2 {:.5}",
                    fit.slope(),
                    -fit.predicted.unwrap_or(0.0),
                    fit.r_squared
                ),
                Err(e) => println!("  r = {r:>4}: {e}"),
            }
        }
    }
    Ok(())
}
