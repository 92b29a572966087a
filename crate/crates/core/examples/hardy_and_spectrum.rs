//! Spectrum of the radial operator and the sharp Hardy constant.

use dinls::commands::{hardy_family, hardy_min_ratio, HARDY_FAMILY_EPS};
use dinls::operator::{build_operator, RadialGrid};
use dinls::params::lambda_n;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dinls::Result<()> {
    println!("lowest eigenvalue of -Laplacian on the 3-ball of radius pi (exact 1):");
    for n in [128, 256, 512, 1024] {
        let op = build_operator(RadialGrid::new(std::f64::consts::PI, n)?, 3, 0.0)?;
        println!(
            "  n = {n:>5}: {:.10}  error {:.3e}",
            op.eigvals[0],
            (op.eigvals[0] - 1.0).abs()
        );
    }

    let grid = RadialGrid::new(20.0, 4096)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for dim in [3, 4, 5] {
        let ln = lambda_n(dim)?;
        let min = hardy_min_ratio(grid, dim, 50, &mut rng)?;
        let family = hardy_family(grid, dim, &HARDY_FAMILY_EPS)?;
        println!("\nN = {dim}: lambda_N = {ln}, smallest ratio over 50 random fields = {min:.4}");
        for (eps, q) in HARDY_FAMILY_EPS.iter().zip(&family) {
            println!("  eps = {eps:<6} ratio = {q:.5}  (continuum {:.5})", ln + eps / 2.0);
        }
    }
    Ok(())
}
