//! `Y = X + σε` with standard normal `X, ε`: closed form, estimators and a
//! response-perturbation sub-run.

use super::{Context, Outcome};
use crate::error::Result;
use crate::result::{Control, LineStyle, Plot, Series, Table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::PI;
use ximarkov_core::estimators::{lambda_n, xi_n};
use ximarkov_core::measures::xi_gaussian;
use ximarkov_core::models::{additive_error_rho, additive_error_spec, sample_elliptical};

/// `|dξ/dσ| ≤ 3/π` for the closed form.
pub const MODULUS: f64 = 3.0 / PI;
pub const ROBUSTNESS_SCALE: f64 = 1e-3;
pub const ROBUSTNESS_BUDGET: f64 = 0.02;

struct Row {
    sigma: f64,
    rho: f64,
    xi: f64,
    xi_n: f64,
    lambda_n: f64,
    lambda_flag: bool,
}

pub(crate) fn run(ctx: &Context<'_>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let rows: Vec<Row> = cfg
        .sigmas
        .par_iter()
        .enumerate()
        .map(|(task, &sigma)| -> Result<Row> {
            let spec = additive_error_spec(sigma)?;
            let xi = xi_gaussian(spec.sigma())?;
            let seed = ctx.seed(task as u64);
            let data = sample_elliptical(&spec, cfg.samples, seed)?;
            let x: Vec<f64> = data.column(0).iter().copied().collect();
            let y: Vec<f64> = data.column(1).iter().copied().collect();
            let est = xi_n(&x, &y, seed)?;
            let lam = lambda_n(&data.columns(0, 1).into_owned(), &y)?;
            Ok(Row {
                sigma,
                rho: additive_error_rho(sigma)?,
                xi,
                xi_n: est,
                lambda_n: lam.value,
                lambda_flag: lam.flagged,
            })
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(
        "additive-error",
        &["sigma", "rho", "xi_closed", "xi_n", "lambda_population", "lambda_n", "lambda_n_flag"],
    );
    for r in &rows {
        table.push(vec![
            r.sigma.into(),
            r.rho.into(),
            r.xi.into(),
            r.xi_n.into(),
            (r.rho * r.rho).into(),
            r.lambda_n.into(),
            r.lambda_flag.into(),
        ]);
    }
    let pts = |f: fn(&Row) -> f64| rows.iter().map(|r| (r.sigma, f(r))).collect();
    table.plot = Some(Plot {
        x_label: "sigma".into(),
        y_label: "xi / Lambda".into(),
        log_x: false,
        series: vec![
            Series { label: "xi closed form".into(), style: LineStyle::Solid, points: pts(|r| r.xi) },
            Series { label: "xi_n".into(), style: LineStyle::Dotted, points: pts(|r| r.xi_n) },
            Series { label: "Lambda = rho^2".into(), style: LineStyle::Solid, points: pts(|r| r.rho * r.rho) },
            Series { label: "lambda_n".into(), style: LineStyle::Dotted, points: pts(|r| r.lambda_n) },
        ],
    });

    let mut controls = Vec::new();
    // Continuity of the closed form in grid order.
    let mut worst: f64 = 0.0;
    for w in rows.windows(2) {
        let excess = (w[1].xi - w[0].xi).abs() - MODULUS * (w[1].sigma - w[0].sigma).abs();
        worst = worst.max(excess);
    }
    controls.push(Control::new(
        "closed_form_continuous",
        worst <= 1e-12,
        format!("successive jumps within (3/pi)|d sigma| (largest excess {worst:.3e})"),
    ));
    if let Some(r) = rows.iter().find(|r| r.sigma == 0.0) {
        controls.push(Control::new("xi_one_without_noise", r.xi == 1.0, format!("xi(0) = {}", r.xi)));
    }

    // Robustness: Y + ε η with η independent of (X, Y).
    let base_seed = ctx.seed(1_000_000);
    let data = sample_elliptical(&additive_error_spec(cfg.robustness_sigma)?, cfg.samples, base_seed)?;
    let x: Vec<f64> = data.column(0).iter().copied().collect();
    let y: Vec<f64> = data.column(1).iter().copied().collect();
    let base = xi_n(&x, &y, base_seed)?;
    let mut robust = Table::new("additive-error-robustness", &["epsilon", "xi_n", "xi_n_perturbed", "abs_change"]);
    let mut within = true;
    let mut detail = Vec::new();
    for (k, &eps) in cfg.perturbations.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed(2_000_000 + k as u64));
        let yp: Vec<f64> = y.iter().map(|v| v + eps * rng.sample::<f64, _>(StandardNormal)).collect();
        let pert = xi_n(&x, &yp, base_seed)?;
        let change = (pert - base).abs();
        if eps <= ROBUSTNESS_SCALE {
            within &= change < ROBUSTNESS_BUDGET;
            detail.push(format!("eps {eps:e}: {change:.4}"));
        }
        robust.push(vec![eps.into(), base.into(), pert.into(), change.into()]);
    }
    if !detail.is_empty() {
        controls.push(Control::new(
            "perturbation_robust",
            within,
            format!("|change| < {ROBUSTNESS_BUDGET} for eps <= {ROBUSTNESS_SCALE:e} ({})", detail.join(", ")),
        ));
    }
    robust.plot = Some(Plot {
        x_label: "epsilon".into(),
        y_label: "|xi_n(perturbed) - xi_n|".into(),
        log_x: true,
        series: vec![Series {
            label: format!("sigma = {}", cfg.robustness_sigma),
            style: LineStyle::Solid,
            points: cfg.perturbations.iter().zip(&robust.column("abs_change")).map(|(e, c)| (*e, c.unwrap_or(0.0))).collect(),
        }],
    });
    Ok(Outcome { tables: vec![table, robust], controls })
}
