//! Experiment configuration: TOML with dotted sections, strict keys.
//!
//! ```toml
//! [model]
//! N = 3
//! b = 0.5
//! p = 2.0
//! lambda = 1.0
//! mu = -1
//!
//! [grid]
//! R = 40.0
//! n = 128
//!
//! [damping]
//! kind = "constant"
//! gamma = 0.3
//! ```
//!
//! Every section is optional; missing keys take the defaults below.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::damping::DampingProfile;
use crate::error::{Error, Result};
use crate::params::{ModelParams, Nonlinearity};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub model: ModelSection,
    pub grid: GridSection,
    pub time: TimeSection,
    pub damping: DampingSection,
    pub initial: InitialSection,
    pub groundstate: GroundStateSection,
    pub verify: VerifySection,
    pub scan: ScanSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    #[serde(rename = "N")]
    pub dim: usize,
    pub b: f64,
    pub p: f64,
    pub lambda: f64,
    pub mu: i8,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection {
            dim: 3,
            b: 0.5,
            p: 2.0,
            lambda: 1.0,
            mu: -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    #[serde(rename = "R")]
    pub radius: f64,
    pub n: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection { radius: 40.0, n: 128 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeSection {
    #[serde(rename = "T")]
    pub t_final: f64,
    pub dt: f64,
    pub sample_stride: usize,
    pub snapshot_stride: usize,
}

impl Default for TimeSection {
    fn default() -> Self {
        TimeSection {
            t_final: 10.0,
            dt: 1e-3,
            sample_stride: 10,
            snapshot_stride: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DampingSection {
    Zero,
    Constant {
        gamma: f64,
    },
    ScaledLog {
        gamma: f64,
    },
    Table {
        knots: Vec<(f64, f64)>,
    },
    /// Two-column CSV `t,a`, resolved relative to the config file.
    TableFile {
        path: PathBuf,
    },
}

impl Default for DampingSection {
    fn default() -> Self {
        DampingSection::Constant { gamma: 0.3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialSection {
    /// `amplitude · exp(-r²/(2 width²))`
    Gaussian { width: f64, amplitude: f64 },
    /// `amplitude · r^{-κ} exp(-r²/(2 width²))`, regular at the origin for every λ.
    RegularGaussian { width: f64, amplitude: f64 },
    /// `c · Q` with `Q` the ground state of the model.
    GroundstateScaled { c: f64 },
    /// Field CSV `r,re,im,abs2` on the configured grid.
    File { path: PathBuf },
}

impl Default for InitialSection {
    fn default() -> Self {
        InitialSection::Gaussian {
            width: 2f64.sqrt(),
            amplitude: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GroundStateSection {
    #[serde(rename = "R")]
    pub radius: f64,
    pub n: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for GroundStateSection {
    fn default() -> Self {
        GroundStateSection {
            radius: 20.0,
            n: 51_200,
            tol: crate::groundstate::DEFAULT_TOL,
            max_iter: crate::groundstate::DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    /// Step sizes of the refinement study, decreasing; empty means
    /// `[4 dt, 2 dt, dt]` from `time.dt`.
    pub dts: Vec<f64>,
    pub order_target: f64,
    pub order_tol: f64,
    pub mass_tol: f64,
    pub hardy_samples: usize,
    pub hardy_slack: f64,
    /// Grid of the Hardy checks; the near-optimisers need `h ≲ 0.02`.
    #[serde(rename = "hardy_R")]
    pub hardy_radius: f64,
    pub hardy_n: usize,
    pub gn_samples: usize,
    pub gn_slack: f64,
    pub dispersive_r: Vec<f64>,
    pub dispersive_window: (f64, f64),
    pub dispersive_tol: f64,
    /// Grid and probe width of the (linear) dispersive runs.
    #[serde(rename = "dispersive_R")]
    pub dispersive_radius: f64,
    pub dispersive_n: usize,
    pub dispersive_width: f64,
    pub gronwall_rho: f64,
}

impl Default for VerifySection {
    fn default() -> Self {
        VerifySection {
            dts: Vec::new(),
            order_target: 2.0,
            order_tol: 0.3,
            mass_tol: 1e-10,
            hardy_samples: 50,
            hardy_slack: 0.05,
            hardy_radius: 20.0,
            hardy_n: 4096,
            gn_samples: 500,
            gn_slack: 1e-6,
            dispersive_r: vec![2.0, 4.0, 6.0],
            dispersive_window: (5.0, 50.0),
            dispersive_tol: 0.1,
            dispersive_radius: 500.0,
            dispersive_n: 2048,
            dispersive_width: 2.0,
            gronwall_rho: 1.0 / 3.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSection {
    /// `‖u0‖` as multiples of the mass-critical threshold norm.
    pub scales: Vec<f64>,
    /// Constant damping values, ascending.
    pub gammas: Vec<f64>,
    pub r_values: Vec<f64>,
}

impl Default for ScanSection {
    fn default() -> Self {
        ScanSection {
            scales: vec![0.25, 0.5, 0.75, 0.9, 1.1, 1.5, 2.0],
            gammas: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            r_values: vec![2.0, 4.0, 6.0],
        }
    }
}

impl ExperimentConfig {
    /// Parses TOML text and validates it; all problems are reported at once.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates a config file; relative paths inside it are
    /// resolved against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml(&text)?;
        if let Some(dir) = path.parent() {
            cfg.rebase(dir);
        }
        Ok(cfg)
    }

    fn rebase(&mut self, dir: &Path) {
        if let DampingSection::TableFile { path } = &mut self.damping {
            if path.is_relative() {
                *path = dir.join(&*path);
            }
        }
        if let InitialSection::File { path } = &mut self.initial {
            if path.is_relative() {
                *path = dir.join(&*path);
            }
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// The model tuple (may be invalid; see [`ExperimentConfig::issues`]).
    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            dim: self.model.dim,
            b: self.model.b,
            p: self.model.p,
            lambda: self.model.lambda,
            mu: if self.model.mu < 0 {
                Nonlinearity::Focusing
            } else {
                Nonlinearity::Defocusing
            },
        }
    }

    /// Inline profiles only; `table-file` needs [`crate::io::read_damping_table`].
    pub fn inline_damping(&self) -> Option<DampingProfile> {
        match &self.damping {
            DampingSection::Zero => Some(DampingProfile::Zero),
            DampingSection::Constant { gamma } => Some(DampingProfile::Constant { gamma: *gamma }),
            DampingSection::ScaledLog { gamma } => Some(DampingProfile::ScaledLog { gamma: *gamma }),
            DampingSection::Table { knots } => Some(DampingProfile::Table { knots: knots.clone() }),
            DampingSection::TableFile { .. } => None,
        }
    }

    /// Every violated constraint, prefixed with its field path.
    pub fn issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut push = |path: &str, reason: String| out.push(format!("{path}: {reason}"));

        if self.model.mu != -1 && self.model.mu != 1 {
            push(
                "model.mu",
                format!("must be -1 (focusing) or +1 (defocusing), got {}", self.model.mu),
            );
        }
        for (field, reason) in self.model_params().issues() {
            push(&format!("model.{field}"), reason);
        }
        if !(self.grid.radius.is_finite() && self.grid.radius > 0.0) {
            push("grid.R", format!("must be positive (got {})", self.grid.radius));
        }
        if self.grid.n < 4 {
            push("grid.n", format!("need at least 4 cells (got {})", self.grid.n));
        }
        if !(self.time.t_final.is_finite() && self.time.t_final > 0.0) {
            push("time.T", format!("must be positive (got {})", self.time.t_final));
        }
        if !(self.time.dt > 0.0 && self.time.dt <= self.time.t_final) {
            push("time.dt", format!("need 0 < dt <= T (got {})", self.time.dt));
        }
        if self.time.sample_stride == 0 {
            push("time.sample_stride", "must be at least 1".into());
        }
        if self.time.snapshot_stride == 0 {
            push("time.snapshot_stride", "must be at least 1".into());
        }
        if let Some(profile) = self.inline_damping() {
            for reason in profile.issues() {
                push("damping", reason);
            }
        }
        match &self.initial {
            InitialSection::Gaussian { width, amplitude } | InitialSection::RegularGaussian { width, amplitude } => {
                if !(width.is_finite() && *width > 0.0) {
                    push("initial.width", format!("must be positive (got {width})"));
                }
                if !amplitude.is_finite() {
                    push("initial.amplitude", format!("must be finite (got {amplitude})"));
                }
            }
            InitialSection::GroundstateScaled { c } => {
                if !c.is_finite() {
                    push("initial.c", format!("must be finite (got {c})"));
                }
            }
            InitialSection::File { .. } => {}
        }
        if !(self.groundstate.radius.is_finite() && self.groundstate.radius > 0.0) {
            push(
                "groundstate.R",
                format!("must be positive (got {})", self.groundstate.radius),
            );
        }
        if self.groundstate.n < 16 {
            push(
                "groundstate.n",
                format!("need at least 16 cells (got {})", self.groundstate.n),
            );
        }
        if !(self.groundstate.tol > 0.0) {
            push(
                "groundstate.tol",
                format!("must be positive (got {})", self.groundstate.tol),
            );
        }
        let v = &self.verify;
        if !v.dts.is_empty() && v.dts.len() < 3 {
            push(
                "verify.dts",
                format!("need at least 3 refinement levels (got {})", v.dts.len()),
            );
        }
        if v.dts.iter().any(|d| !(*d > 0.0)) || v.dts.windows(2).any(|w| !(w[1] < w[0])) {
            push("verify.dts", "must be positive and strictly decreasing".into());
        }
        if v.dispersive_r.iter().any(|r| !(*r >= 2.0)) {
            push("verify.dispersive_r", "every exponent must be >= 2".into());
        }
        if !(v.dispersive_window.0 > 0.0 && v.dispersive_window.0 < v.dispersive_window.1) {
            push(
                "verify.dispersive_window",
                format!("need 0 < t1 < t2 (got {:?})", v.dispersive_window),
            );
        }
        if !(v.hardy_radius > 0.0 && v.hardy_n >= 4) {
            push(
                "verify.hardy_R",
                "Hardy grid must be positive with at least 4 cells".into(),
            );
        }
        if !(v.dispersive_radius > 0.0 && v.dispersive_n >= 4 && v.dispersive_width > 0.0) {
            push(
                "verify.dispersive_R",
                "dispersive grid and width must be positive".into(),
            );
        }
        if !(v.gronwall_rho > 0.0 && v.gronwall_rho < 1.0) {
            push(
                "verify.gronwall_rho",
                format!("must lie in (0, 1) (got {})", v.gronwall_rho),
            );
        }
        if self.scan.gammas.iter().any(|g| !(*g > 0.0)) || self.scan.gammas.windows(2).any(|w| !(w[1] > w[0])) {
            push("scan.gammas", "must be positive and strictly ascending".into());
        }
        if self.scan.scales.iter().any(|s| !(*s >= 0.0)) {
            push("scan.scales", "must be nonnegative".into());
        }
        if self.scan.r_values.iter().any(|r| !(*r >= 2.0)) {
            push("scan.r_values", "every exponent must be >= 2".into());
        }
        out
    }

    /// Refinement levels of the identity study.
    pub fn refinement_dts(&self) -> Vec<f64> {
        if self.verify.dts.is_empty() {
            let dt = self.time.dt;
            vec![4.0 * dt, 2.0 * dt, dt]
        } else {
            self.verify.dts.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let issues = self.issues();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(issues))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_default() {
        assert_eq!(ExperimentConfig::from_toml("").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn dotted_keys_parse() {
        let cfg = ExperimentConfig::from_toml("model.N = 4\ngrid.n = 64\ndamping.kind = \"zero\"").unwrap();
        assert_eq!(cfg.model.dim, 4);
        assert_eq!(cfg.grid.n, 64);
        assert_eq!(cfg.damping, DampingSection::Zero);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::from_toml("model.q = 1.0").is_err());
        assert!(ExperimentConfig::from_toml("[extra]\nx = 1").is_err());
        assert!(
            ExperimentConfig::from_toml("damping.kind = \"constant\"\ndamping.gamma = 1\ndamping.beta = 2").is_err()
        );
    }

    #[test]
    fn all_issues_reported_with_paths() {
        let err = ExperimentConfig::from_toml("model.b = 2.5\nmodel.lambda = -0.25\ntime.dt = -1.0").unwrap_err();
        let Error::Config(issues) = err else { panic!("{err}") };
        assert!(issues.iter().any(|s| s.starts_with("model.b:") && s.contains("0<b<2")));
        assert!(issues.iter().any(|s| s.starts_with("model.lambda:")));
        assert!(issues.iter().any(|s| s.starts_with("time.dt:")));
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = ExperimentConfig {
            initial: InitialSection::GroundstateScaled { c: 0.3 },
            ..ExperimentConfig::default()
        };
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }
}
