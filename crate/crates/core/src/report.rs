//! Run configuration and the JSON report envelope shared by every suite.

use serde::{Deserialize, Serialize};

use crate::solver::{GnOptions, RigidityOptions};

pub const VERSION: &str = concat!("conelab ", env!("CARGO_PKG_VERSION"));

/// Every knob a run depends on. Reports echo the effective value in full.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub res_tol: f64,
    pub rank_tol: f64,
    pub dist_tol: f64,
    pub fd_step: f64,
    pub max_iter: usize,
    pub lambda0: f64,
    pub noise_floor: f64,
    pub radius: f64,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
    /// Nodes per axis of a defect scan.
    pub scan_points: usize,
    pub scan_half_width: f64,
    pub scan_eps: f64,
    /// Nodes per regime for the Lemma 2 and Step 1 sweeps.
    pub ell_points: usize,
    pub eps_values: Vec<f64>,
    pub lemma3_points: usize,
    pub lemma1_points: usize,
    pub eigen_n: usize,
    pub eigen_delta: f64,
    pub eigen_refinements: usize,
    pub slit_points: usize,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let gn = GnOptions::default();
        Self {
            res_tol: gn.res_tol,
            rank_tol: crate::solver::DEFAULT_RANK_TOL,
            dist_tol: 1e-6,
            fd_step: gn.fd_step,
            max_iter: gn.max_iter,
            lambda0: gn.lambda0,
            noise_floor: gn.noise_floor,
            radius: 0.05,
            samples: 500,
            seed: 0,
            workers: 1,
            scan_points: 5,
            scan_half_width: 0.05,
            scan_eps: 0.05,
            ell_points: 40,
            eps_values: vec![0.01, 0.05, 0.1],
            lemma3_points: 400,
            lemma1_points: 1000,
            eigen_n: 1001,
            eigen_delta: 0.1,
            eigen_refinements: 3,
            slit_points: 100,
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("config field {name} must be positive (got {value})")]
    NotPositive { name: &'static str, value: f64 },
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let checks = [
            ("res_tol", self.res_tol),
            ("rank_tol", self.rank_tol),
            ("dist_tol", self.dist_tol),
            ("fd_step", self.fd_step),
            ("lambda0", self.lambda0),
            ("noise_floor", self.noise_floor),
            ("radius", self.radius),
            ("scan_half_width", self.scan_half_width),
            ("eigen_delta", self.eigen_delta),
        ];
        for (name, value) in checks {
            if !(value.is_finite() && value > 0.0) {
                return Err(ConfigError::NotPositive { name, value });
            }
        }
        Ok(())
    }

    pub fn gn_options(&self) -> GnOptions {
        GnOptions {
            max_iter: self.max_iter,
            res_tol: self.res_tol,
            lambda0: self.lambda0,
            fd_step: self.fd_step,
            noise_floor: self.noise_floor,
        }
    }

    pub fn rigidity_options(&self) -> RigidityOptions {
        RigidityOptions {
            radius: self.radius,
            samples: self.samples,
            seed: self.seed,
            dist_tol: self.dist_tol,
            rank_tol: self.rank_tol,
            fd_step: self.fd_step,
            workers: self.workers,
            gn: self.gn_options(),
        }
    }
}

/// A suite result wrapped with the version, command and effective config.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub version: &'static str,
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub pass: bool,
    pub result: T,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(command: &'a str, config: &'a RunConfig, pass: bool, result: T) -> Self {
        Self {
            version: VERSION,
            command,
            config,
            pass,
            result,
        }
    }

    /// Pretty JSON with a trailing newline. Non-finite floats become `null`.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
