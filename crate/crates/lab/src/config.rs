//! JSON experiment configuration.

use crate::error::{config, Result};
use clap::ValueEnum;
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Shuffle,
    AdditiveError,
    Equicorrelated,
    T4d,
    Dirac,
    SiConvergence,
    Diagnostics,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Shuffle => "shuffle",
            Experiment::AdditiveError => "additive-error",
            Experiment::Equicorrelated => "equicorrelated",
            Experiment::T4d => "t4d",
            Experiment::Dirac => "dirac",
            Experiment::SiConvergence => "si-convergence",
            Experiment::Diagnostics => "diagnostics",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gaussian,
    Frank,
    Clayton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EllipticalFamily {
    Normal,
    StudentT,
}

/// Every field is optional in the JSON file; absent fields take the defaults
/// below. Unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Must match the CLI experiment when given.
    pub experiment: Option<String>,
    pub seed: u64,
    /// Monte Carlo sample size.
    pub samples: usize,
    /// Copula grid resolution.
    pub grid: usize,
    /// Quadrature panels.
    pub panels: usize,
    /// Number of `u` sections in ∂₁-distances.
    pub d1_sections: usize,
    /// Lattice resolution of SI checks.
    pub si_grid: usize,

    // shuffle, diagnostics
    pub stripes: Vec<u32>,

    // additive-error
    pub sigmas: Vec<f64>,
    pub robustness_sigma: f64,
    pub perturbations: Vec<f64>,

    // equicorrelated
    pub dims: Vec<usize>,
    pub rho_points: usize,

    // t4d
    pub rho_x: f64,
    pub rho_y: Vec<f64>,
    pub rho_xy_points: usize,
    pub families: Vec<EllipticalFamily>,
    pub nu: f64,
    /// Grid points (spread over the whole figure) where estimators run, in
    /// addition to `ρ_XY = 0` for every `ρ_Y`.
    pub estimator_points: usize,

    // dirac
    pub variances: Vec<f64>,

    // si-convergence
    pub family: Family,
    pub theta_limit: Option<f64>,
    pub theta_sequence: Option<Vec<f64>>,

    // diagnostics
    pub rho_limit: f64,
    pub rho_sequence: Vec<f64>,
}

pub const FIG2_RHO_Y: [f64; 8] = [-0.999, -0.99, -0.9, -0.75, -0.5, 0.0, 0.5, 0.9];

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            seed: 20_240_229,
            samples: 100_000,
            grid: 256,
            panels: 1024,
            d1_sections: 33,
            si_grid: 64,
            stripes: vec![1, 2, 4, 8, 16, 32, 64],
            sigmas: vec![0.0, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0],
            robustness_sigma: 1.0,
            perturbations: vec![1e-1, 1e-2, 1e-3, 1e-4],
            dims: vec![1, 2, 4, 10, 100],
            rho_points: 201,
            rho_x: 0.5,
            rho_y: FIG2_RHO_Y.to_vec(),
            rho_xy_points: 201,
            families: vec![EllipticalFamily::Normal, EllipticalFamily::StudentT],
            nu: 3.0,
            estimator_points: 12,
            variances: vec![1.0, 0.5, 0.25, 0.1, 0.01, 0.001],
            family: Family::Gaussian,
            theta_limit: None,
            theta_sequence: None,
            rho_limit: 0.5,
            rho_sequence: vec![0.9, 0.7, 0.6, 0.55, 0.52, 0.51, 0.501],
        }
    }
}

fn finite(name: &str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(config(format!("{name} contains non-finite value {v}"))),
        None => Ok(()),
    }
}

fn nonempty<T>(name: &str, values: &[T]) -> Result<()> {
    if values.is_empty() {
        Err(config(format!("{name} must be nonempty")))
    } else {
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| config(format!("{}: {e}", path.display())))
    }

    /// `(θ*, θ_n)` for the SI experiment, with family defaults.
    pub fn si_thetas(&self) -> (f64, Vec<f64>) {
        let (limit, seq) = match self.family {
            Family::Gaussian => (0.5, (2..=10).map(|k| 0.5 + 1.0 / f64::from(1 << k)).collect()),
            Family::Frank => (0.0, vec![8.0, 4.0, 2.0, 1.0, 0.5, 0.25, 0.1, 0.03, 0.01, 0.001]),
            Family::Clayton => (1.0, (1..=9).map(|k| 1.0 + 1.0 / f64::from(1 << k)).collect()),
        };
        (
            self.theta_limit.unwrap_or(limit),
            self.theta_sequence.clone().unwrap_or(seq),
        )
    }

    /// Checks every field the experiment uses against its admissible domain.
    pub fn validate(&self, exp: Experiment) -> Result<()> {
        if let Some(name) = &self.experiment {
            if name != exp.name() {
                return Err(config(format!("config is for '{name}', not '{}'", exp.name())));
            }
        }
        if self.samples < 3 {
            return Err(config("samples must be at least 3"));
        }
        if self.grid < 2 {
            return Err(config("grid must be at least 2"));
        }
        if self.panels < 1 || self.d1_sections < 1 || self.si_grid < 2 {
            return Err(config("panels, d1_sections and si_grid must be positive"));
        }
        match exp {
            Experiment::Shuffle => {
                nonempty("stripes", &self.stripes)?;
                if self.stripes.contains(&0) {
                    return Err(config("stripe counts must be at least 1"));
                }
            }
            Experiment::AdditiveError => {
                nonempty("sigmas", &self.sigmas)?;
                finite("sigmas", &self.sigmas)?;
                finite("perturbations", &self.perturbations)?;
                if self.sigmas.iter().any(|s| *s < 0.0) || !(self.robustness_sigma >= 0.0) {
                    return Err(config("noise scales must be nonnegative"));
                }
                if self.perturbations.iter().any(|e| *e <= 0.0) {
                    return Err(config("perturbation scales must be positive"));
                }
            }
            Experiment::Equicorrelated => {
                nonempty("dims", &self.dims)?;
                if self.dims.contains(&0) {
                    return Err(config("dimensions must be positive"));
                }
                if self.rho_points < 3 || self.rho_points % 2 == 0 {
                    return Err(config("rho_points must be odd and at least 3 so that ρ = 0 is on the grid"));
                }
            }
            Experiment::T4d => {
                nonempty("rho_y", &self.rho_y)?;
                nonempty("families", &self.families)?;
                finite("rho_y", &self.rho_y)?;
                if !(-1.0..=1.0).contains(&self.rho_x) || self.rho_y.iter().any(|r| !(-1.0..=1.0).contains(r)) {
                    return Err(config("ρ_X and ρ_Y must lie in [-1, 1]"));
                }
                if self.rho_xy_points < 3 || self.rho_xy_points % 2 == 0 {
                    return Err(config("rho_xy_points must be odd and at least 3 so that ρ_XY = 0 is on the grid"));
                }
                if !(self.nu > 0.0) || !self.nu.is_finite() {
                    return Err(config("nu must be positive"));
                }
            }
            Experiment::Dirac => {
                nonempty("variances", &self.variances)?;
                if self.variances.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
                    return Err(config("variances must be positive"));
                }
            }
            Experiment::SiConvergence => {
                let (limit, seq) = self.si_thetas();
                nonempty("theta_sequence", &seq)?;
                finite("theta_sequence", &seq)?;
                let ok = |t: f64| match self.family {
                    Family::Gaussian => (-1.0..=1.0).contains(&t),
                    Family::Frank => t.is_finite(),
                    Family::Clayton => t >= 0.0 && t.is_finite(),
                };
                if !ok(limit) || seq.iter().any(|t| !ok(*t)) {
                    return Err(config(format!("θ outside the {:?} parameter domain", self.family)));
                }
            }
            Experiment::Diagnostics => {
                nonempty("rho_sequence", &self.rho_sequence)?;
                nonempty("stripes", &self.stripes)?;
                finite("rho_sequence", &self.rho_sequence)?;
                if !(-1.0..=1.0).contains(&self.rho_limit)
                    || self.rho_sequence.iter().any(|r| !(-1.0..=1.0).contains(r))
                {
                    return Err(config("correlations must lie in [-1, 1]"));
                }
                if self.stripes.contains(&0) {
                    return Err(config("stripe counts must be at least 1"));
                }
            }
        }
        Ok(())
    }
}
