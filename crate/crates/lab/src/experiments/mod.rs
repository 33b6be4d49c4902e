//! Experiment drivers. Each returns its tables and the outcome of its
//! declared controls; nothing is written here.

mod additive;
mod diagnostics;
mod dirac;
mod equicorrelated;
mod shuffle;
mod si;
mod t4d;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::Result;
use crate::result::{Control, ExperimentResult, Meta, Table};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use ximarkov_core::quadrature::QuadratureConfig;

/// Seed for task `stream` of a run: the first word of ChaCha8 stream
/// `stream` under the master seed.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng.next_u64()
}

pub(crate) struct Context<'a> {
    pub cfg: &'a ExperimentConfig,
    pub quad: QuadratureConfig,
}

impl Context<'_> {
    /// Interior `u` sections for ∂₁-distances, always including `½`.
    pub fn sections(&self) -> Vec<f64> {
        let k = self.cfg.d1_sections.max(1);
        let mut us: Vec<f64> = (1..=k).map(|i| i as f64 / (k + 1) as f64).collect();
        if !us.contains(&0.5) {
            us.push(0.5);
            us.sort_by(f64::total_cmp);
        }
        us
    }

    pub fn seed(&self, stream: u64) -> u64 {
        derive_seed(self.cfg.seed, stream)
    }
}

pub(crate) struct Outcome {
    pub tables: Vec<Table>,
    pub controls: Vec<Control>,
}

/// Validates the configuration and runs one experiment.
pub fn run(exp: Experiment, cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate(exp)?;
    let start = Instant::now();
    let ctx = Context {
        cfg,
        quad: QuadratureConfig::default().with_panels(cfg.panels),
    };
    let out = match exp {
        Experiment::Shuffle => shuffle::run(&ctx)?,
        Experiment::AdditiveError => additive::run(&ctx)?,
        Experiment::Equicorrelated => equicorrelated::run(&ctx)?,
        Experiment::T4d => t4d::run(&ctx)?,
        Experiment::Dirac => dirac::run(&ctx)?,
        Experiment::SiConvergence => si::run(&ctx)?,
        Experiment::Diagnostics => diagnostics::run(&ctx)?,
    };
    for c in &out.controls {
        if c.passed {
            log::info!("control {} passed: {}", c.name, c.detail);
        } else {
            log::error!("control {} FAILED: {}", c.name, c.detail);
        }
    }
    Ok(ExperimentResult {
        tables: out.tables,
        controls: out.controls,
        meta: Meta {
            experiment: exp.name().to_string(),
            seed: cfg.seed,
            samples: cfg.samples,
            grid: cfg.grid,
            panels: cfg.panels,
            runtime_seconds: start.elapsed().as_secs_f64(),
        },
    })
}

/// Largest absolute difference between consecutive values.
pub(crate) fn max_jump(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
}
