//! Damping profiles: rates, integrals, gauge factors and slope extremes.

use dinls::damping::DampingProfile;

fn main() -> dinls::Result<()> {
    let profiles = [
        ("zero", DampingProfile::Zero),
        ("constant 0.3", DampingProfile::constant(0.3)?),
        ("scaled-log 1.0", DampingProfile::scaled_log(1.0)?),
        (
            "table",
            DampingProfile::table(vec![(0.0, 0.0), (2.0, 1.0), (5.0, 0.2)])?,
        ),
    ];
    for (name, profile) in &profiles {
        let s = profile.slope_extremes(1e6);
        println!(
            "{name}: a_lower = {:.6}, a_upper = {:.6}, exploratory = {}",
            s.lower,
            s.upper,
            profile.is_exploratory()
        );
        for t in [0.5, 2.0, 10.0, 100.0] {
            println!(
                "    t = {t:>6}: a = {:.5}  A = {:.5}  e^(-A) = {:.5e}",
                profile.rate(t),
                profile.integral(t),
                profile.gauge_factor(t, 1.0)?
            );
        }
    }
    Ok(())
}
