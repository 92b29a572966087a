//! Algebraic invariants of the exponents, damping profiles and configs.

use dinls::config::{DampingSection, ExperimentConfig, InitialSection};
use dinls::damping::DampingProfile;
use dinls::params::{
    classify_regime, critical_sobolev, default_eta, energy_critical_p, gn_exponent_nu, intercritical_triple,
    is_admissible, kappa, lambda_n, mass_critical_p, qr_star, ModelParams, Regime,
};
use proptest::prelude::*;

fn knots() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.05f64..2.0, 0.0f64..3.0), 1..6).prop_map(|steps| {
        let mut t = 0.0;
        steps
            .into_iter()
            .map(|(dt, a)| {
                let knot = (t, a);
                t += dt;
                knot
            })
            .collect()
    })
}

fn profiles() -> impl Strategy<Value = DampingProfile> {
    prop_oneof![
        Just(DampingProfile::Zero),
        (0.0f64..3.0).prop_map(|g| DampingProfile::constant(g).unwrap()),
        (0.0f64..3.0).prop_map(|g| DampingProfile::scaled_log(g).unwrap()),
        knots().prop_map(|k| DampingProfile::table(k).unwrap()),
    ]
}

proptest! {
    #[test]
    fn kappa_is_the_regular_indicial_root(dim in 3usize..8, frac in -1.0f64..4.0) {
        // r^{-κ} is annihilated by -Δ + λ/r² near the origin: κ² - (N-2)κ = λ
        let lambda = frac * lambda_n(dim).unwrap();
        let k = kappa(dim, lambda).unwrap();
        prop_assert!((k * k - (dim as f64 - 2.0) * k - lambda).abs() < 1e-10 * (1.0 + lambda.abs()));
        prop_assert!(k <= (dim as f64 - 2.0) / 2.0 + 1e-12);
    }

    #[test]
    fn critical_powers_land_on_their_regimes(dim in 3usize..7, b in 0.0f64..1.9) {
        let mc = ModelParams::focusing(dim, b, mass_critical_p(dim, b), 0.0).unwrap();
        prop_assert_eq!(classify_regime(&mc), Regime::MassCritical);
        prop_assert!((gn_exponent_nu(&mc).unwrap() - 2.0).abs() < 1e-12);
        let ec = ModelParams::focusing(dim, b, energy_critical_p(dim, b), 0.0).unwrap();
        prop_assert_eq!(classify_regime(&ec), Regime::EnergyCritical);
    }

    #[test]
    fn regime_order_follows_the_power(dim in 3usize..6, b in 0.0f64..1.5, t in 0.01f64..0.99) {
        let lo = mass_critical_p(dim, b);
        let hi = energy_critical_p(dim, b);
        let inter = ModelParams::focusing(dim, b, lo + t * (hi - lo), 0.0).unwrap();
        let sc = critical_sobolev(&inter);
        prop_assert!(sc > 0.0 && sc < 1.0);
        prop_assert_eq!(classify_regime(&inter), Regime::Intercritical);
        let sub = ModelParams::focusing(dim, b, 1.0 + t * (lo - 1.0), 0.0).unwrap();
        prop_assert_eq!(classify_regime(&sub), Regime::MassSubcritical);
    }

    #[test]
    fn intercritical_exponents_balance(dim in 3usize..6, b in 0.05f64..1.0, t in 0.05f64..0.95) {
        let lo = mass_critical_p(dim, b);
        let hi = energy_critical_p(dim, b);
        let params = ModelParams::focusing(dim, b, lo + t * (hi - lo), 0.3).unwrap();
        let triple = intercritical_triple(&params).unwrap();
        prop_assert!(triple.theta_identity_residual(dim, params.p) < 1e-10);
        prop_assert!(triple.q_identity_residual(params.p) < 1e-10);
        if let Ok((q, r)) = qr_star(&params, default_eta(params.p)) {
            prop_assert!(is_admissible(dim, q, r));
        }
    }

    #[test]
    fn integral_differentiates_to_rate(profile in profiles(), t in 0.01f64..8.0) {
        let h = 1e-5;
        let slope = (profile.integral(t + h) - profile.integral(t - h)) / (2.0 * h);
        let mid = profile.rate(t);
        // piecewise-linear tables have kinks; compare against the one-sided rates there
        let near = [profile.rate(t - h), mid, profile.rate(t + h)];
        let lo = near.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = near.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(slope >= lo - 1e-6 && slope <= hi + 1e-6, "slope {slope}, rates {near:?}");
    }

    #[test]
    fn slope_extremes_bracket_the_average(profile in profiles(), t in 0.001f64..50.0) {
        let s = profile.slope_extremes(50.0);
        let avg = profile.integral(t) / t;
        prop_assert!(avg >= s.lower - 1e-9 && avg <= s.upper + 1e-9, "{avg} outside {s:?}");
    }

    #[test]
    fn gauge_inverts(profile in profiles(), t in 0.0f64..20.0) {
        let up = profile.gauge_factor(t, -1.0).unwrap();
        let down = profile.gauge_factor(t, 1.0).unwrap();
        prop_assert!((up * down - 1.0).abs() < 1e-12);
    }

    #[test]
    fn configs_round_trip(
        dim in 3usize..6,
        b in 0.0f64..1.5,
        lambda in -0.2f64..3.0,
        radius in 5.0f64..80.0,
        n in 16usize..4096,
        gamma in 0.0f64..2.0,
        width in 0.2f64..4.0,
        c in 0.01f64..2.0,
        which in 0usize..3,
    ) {
        let mut cfg = ExperimentConfig::default();
        cfg.model.dim = dim;
        cfg.model.b = b;
        cfg.model.lambda = lambda;
        cfg.grid.radius = radius;
        cfg.grid.n = n;
        cfg.damping = match which {
            0 => DampingSection::ScaledLog { gamma },
            1 => DampingSection::Table { knots: vec![(0.0, gamma), (1.0, 0.5 * gamma)] },
            _ => DampingSection::Zero,
        };
        cfg.initial = if which == 1 {
            InitialSection::GroundstateScaled { c }
        } else {
            InitialSection::Gaussian { width, amplitude: c }
        };
        let back = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
