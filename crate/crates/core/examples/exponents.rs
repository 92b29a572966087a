//! Critical exponents, regimes and Strichartz bookkeeping for a few models.
//!
//! ```text
//! cargo run --example exponents
//! ```

use dinls::params::{
    classify_regime, default_eta, energy_critical_p, gn_exponent_nu, intercritical_triple, mass_critical_p, qr_star,
    ModelParams,
};

fn main() -> dinls::Result<()> {
    println!(
        "{:>2} {:>5} {:>8} {:>8} {:>6} {:>7} {:>8}  regime",
        "N", "b", "p", "lambda", "kappa", "s_c", "nu"
    );
    for (dim, b, lambda) in [(3, 0.0, 0.0), (3, 0.5, 1.0), (4, 1.0, -0.5), (5, 0.25, 2.0)] {
        let p_mc = mass_critical_p(dim, b);
        let p_ec = energy_critical_p(dim, b);
        for p in [0.5 * (1.0 + p_mc), p_mc, 0.5 * (p_mc + p_ec), p_ec] {
            let params = ModelParams::focusing(dim, b, p, lambda)?;
            let d = params.derived();
            let nu = gn_exponent_nu(&params)
                .map(|v| format!("{v:8.4}"))
                .unwrap_or_else(|_| "       -".into());
            println!(
                "{dim:>2} {b:>5.2} {p:>8.4} {lambda:>8.3} {:>6.3} {:>7.3} {nu}  {}",
                d.kappa,
                d.sc,
                classify_regime(&params)
            );
        }
    }

    let cubic = ModelParams::focusing(3, 0.5, 3.0, 0.0)?;
    let t = intercritical_triple(&cubic)?;
    println!(
        "\nintercritical triple for N=3, b=0.5, p=3: theta={:.4} r={:.4} q={:.4}",
        t.theta, t.r, t.q
    );
    println!(
        "bookkeeping residuals: p*theta~' = theta -> {:.1e}, 1/q' = 1/q + (p-1)/theta -> {:.1e}",
        t.theta_identity_residual(3, 3.0),
        t.q_identity_residual(3.0)
    );
    let (q, r) = qr_star(&cubic, default_eta(3.0))?;
    println!("small-data pair (q*, r*) = ({q:.4}, {r:.4})");
    Ok(())
}
