//! Shuffles of min `(X, nX mod 1)` against the independence limit.

use super::{Context, Outcome};
use crate::error::Result;
use crate::result::{Control, LineStyle, Plot, Series, Table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ximarkov_core::copula::{d1_distance_with, markov_product_with, sup_distance, CopulaSpec, RangeProfile};
use ximarkov_core::estimators::xi_n;
use ximarkov_core::measures::xi_from_product;

pub const D1_FLOOR: f64 = 0.2;
pub const SUP_TARGET: f64 = 0.02;
pub const XI_N_FLOOR: f64 = 0.9;

pub(crate) fn run(ctx: &Context<'_>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let sections = ctx.sections();
    let mut table = Table::new(
        "shuffle",
        &["stripes", "sup_distance", "d1_distance", "xi_population", "xi_population_flag", "xi_n"],
    );
    let mut rows = Vec::new();
    for (task, &k) in cfg.stripes.iter().enumerate() {
        let c = CopulaSpec::ShuffleMod { n: k };
        let sup = sup_distance(&c, &CopulaSpec::Independence, cfg.grid)?;
        let d1 = d1_distance_with(&c, &CopulaSpec::Independence, &sections, &ctx.quad)?;
        let product = markov_product_with(&c, cfg.grid, &ctx.quad)?;
        let xi = xi_from_product(&product, &RangeProfile::identity())?;
        let seed = ctx.seed(task as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..cfg.samples).map(|_| rng.random::<f64>()).collect();
        let y: Vec<f64> = x.iter().map(|v| (f64::from(k) * v).fract()).collect();
        let est = xi_n(&x, &y, seed)?;
        log::debug!("stripes {k}: sup {sup:.3e}, d1 {d1:.4}, xi {:.12}, xi_n {est:.4}", xi.value);
        table.push(vec![k.into(), sup.into(), d1.into(), xi.value.into(), xi.flagged.into(), est.into()]);
        rows.push((k, sup, d1, xi.value, est));
    }

    let series = |label: &str, f: fn(&(u32, f64, f64, f64, f64)) -> f64| Series {
        label: label.to_string(),
        style: LineStyle::Solid,
        points: rows.iter().map(|r| (f64::from(r.0), f(r))).collect(),
    };
    table.plot = Some(Plot {
        x_label: "stripes n".into(),
        y_label: "distance / xi".into(),
        log_x: true,
        series: vec![
            series("sup distance to Pi", |r| r.1),
            series("d1 distance to Pi", |r| r.2),
            series("xi population", |r| r.3),
            series("xi_n", |r| r.4),
        ],
    });

    let mut controls = Vec::new();
    let min_d1 = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    controls.push(Control::new("d1_bounded_away", min_d1 > D1_FLOOR, format!("min d1 = {min_d1:.6} (floor {D1_FLOOR})")));
    let worst_xi = rows.iter().map(|r| (r.3 - 1.0).abs()).fold(0.0, f64::max);
    controls.push(Control::new("xi_population_one", worst_xi <= 1e-9, format!("max |xi - 1| = {worst_xi:.3e}")));
    let sup_bound = rows.iter().all(|r| r.1 <= 1.0 / f64::from(r.0) + 1e-9);
    controls.push(Control::new("sup_at_most_one_over_n", sup_bound, "sup distance <= 1/n at every n"));
    if let Some(r) = rows.iter().filter(|r| r.0 >= 64).min_by_key(|r| r.0) {
        controls.push(Control::new(
            "sup_vanishes",
            r.1 < SUP_TARGET,
            format!("sup distance at n = {} is {:.3e} (target {SUP_TARGET})", r.0, r.1),
        ));
    }
    let min_est = rows.iter().map(|r| r.4).fold(f64::INFINITY, f64::min);
    controls.push(Control::new("xi_n_large", min_est > XI_N_FLOOR, format!("min xi_n = {min_est:.4}")));
    Ok(Outcome { tables: vec![table], controls })
}
