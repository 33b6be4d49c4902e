//! T(Y, X) for 4-dimensional normal and Student-t vectors with
//! `Σ = [[1, ρ_X, ρ_XY, ρ_XY], …]`, as a function of ρ_XY.

use super::{Context, Outcome};
use crate::config::EllipticalFamily;
use crate::error::Result;
use crate::result::{Cell, Control, LineStyle, Plot, Series, Table};
use rayon::prelude::*;
use std::collections::BTreeMap;
use ximarkov_core::estimators::t_n;
use ximarkov_core::measures::{t_gaussian_4d, SigmaPartition};
use ximarkov_core::models::{sample_elliptical, EllipticalSpec, Radial};

pub const ZERO_TOL: f64 = 1e-10;
pub const ESTIMATOR_TOL: f64 = 0.03;
/// Floor on the mean Student-t estimate at `ρ_XY = 0` over the `ρ_Y` list.
pub const STUDENT_FLOOR: f64 = 0.005;

struct Point {
    rho_y: f64,
    rho_xy: f64,
    closed: f64,
    /// Middle of the ρ_XY grid.
    center: bool,
}

/// `ρ_XY` grid symmetric about 0 over the admissible interval.
pub fn rho_xy_grid(rho_x: f64, rho_y: f64, points: usize) -> Vec<f64> {
    let bound = ((1.0 + rho_x) / 2.0 * (1.0 + rho_y) / 2.0).max(0.0).sqrt();
    let half = (points - 1) / 2;
    (0..points)
        .map(|j| {
            if j == half {
                0.0
            } else {
                bound * (j as f64 - half as f64) / half as f64
            }
        })
        .collect()
}

/// Indices of `count` points spread evenly over `0..total`.
fn spread(total: usize, count: usize) -> Vec<usize> {
    let count = count.min(total);
    (0..count)
        .map(|k| (((k as f64 + 0.5) * total as f64 / count as f64) as usize).min(total - 1))
        .collect()
}

pub(crate) fn run(ctx: &Context<'_>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let mut points = Vec::new();
    for &rho_y in &cfg.rho_y {
        let grid = rho_xy_grid(cfg.rho_x, rho_y, cfg.rho_xy_points);
        for &rho_xy in &grid {
            match t_gaussian_4d(cfg.rho_x, rho_xy, rho_y) {
                Ok(closed) => points.push(Point { rho_y, rho_xy, closed, center: rho_xy == 0.0 }),
                Err(e) => log::warn!("skipping (rho_y {rho_y}, rho_xy {rho_xy}): {e}"),
            }
        }
    }

    let mut chosen: Vec<usize> = spread(points.len(), cfg.estimator_points);
    chosen.extend(points.iter().enumerate().filter(|(_, p)| p.center).map(|(i, _)| i));
    chosen.sort_unstable();
    chosen.dedup();

    let has = |f: EllipticalFamily| cfg.families.contains(&f);
    let tasks: Vec<(usize, EllipticalFamily)> = chosen
        .iter()
        .flat_map(|&i| {
            [EllipticalFamily::Normal, EllipticalFamily::StudentT]
                .into_iter()
                .filter(|f| has(*f))
                .map(move |f| (i, f))
        })
        .collect();
    let estimates: Vec<((usize, EllipticalFamily), (f64, bool))> = tasks
        .par_iter()
        .map(|&(i, family)| -> Result<_> {
            let p = &points[i];
            let sigma = SigmaPartition::four_dim(cfg.rho_x, p.rho_xy, p.rho_y)?;
            let radial = match family {
                EllipticalFamily::Normal => Radial::Normal,
                EllipticalFamily::StudentT => Radial::StudentT { nu: cfg.nu },
            };
            let stream = 2 * i as u64 + u64::from(family == EllipticalFamily::StudentT);
            let data = sample_elliptical(&EllipticalSpec::centered(sigma, radial)?, cfg.samples, ctx.seed(stream))?;
            let t = t_n(&data.columns(0, 2).into_owned(), &data.columns(2, 2).into_owned())?;
            Ok(((i, family), (t.value, t.flagged)))
        })
        .collect::<Result<_>>()?;
    let estimates: BTreeMap<(usize, u8), (f64, bool)> =
        estimates.into_iter().map(|((i, f), v)| ((i, f as u8), v)).collect();
    let est = |i: usize, f: EllipticalFamily| estimates.get(&(i, f as u8)).copied();
    let cells = |v: Option<(f64, bool)>| match v {
        Some((t, flag)) => [Cell::Real(t), Cell::Flag(flag)],
        None => [Cell::Missing, Cell::Missing],
    };

    let mut table = Table::new(
        "t4d",
        &["rho_x", "rho_y", "rho_xy", "t_closed_normal", "t_n_normal", "t_n_normal_flag", "t_n_student_t", "t_n_student_t_flag"],
    );
    for (i, p) in points.iter().enumerate() {
        let [a, b] = cells(est(i, EllipticalFamily::Normal));
        let [c, d] = cells(est(i, EllipticalFamily::StudentT));
        table.push(vec![cfg.rho_x.into(), p.rho_y.into(), p.rho_xy.into(), p.closed.into(), a, b, c, d]);
    }

    let mut series = Vec::new();
    for &rho_y in &cfg.rho_y {
        let idx: Vec<usize> = (0..points.len()).filter(|&i| points[i].rho_y == rho_y).collect();
        series.push(Series {
            label: format!("normal, rho_Y = {rho_y}"),
            style: LineStyle::Solid,
            points: idx.iter().map(|&i| (points[i].rho_xy, points[i].closed)).collect(),
        });
        if has(EllipticalFamily::StudentT) {
            series.push(Series {
                label: format!("t({}), rho_Y = {rho_y}", cfg.nu),
                style: LineStyle::Dotted,
                points: idx
                    .iter()
                    .filter_map(|&i| est(i, EllipticalFamily::StudentT).map(|v| (points[i].rho_xy, v.0)))
                    .collect(),
            });
        }
    }
    table.plot = Some(Plot {
        x_label: "rho_XY".into(),
        y_label: "T(Y, X)".into(),
        log_x: false,
        series,
    });

    let mut controls = Vec::new();
    let worst_zero = points.iter().filter(|p| p.center).map(|p| p.closed.abs()).fold(0.0, f64::max);
    controls.push(Control::new(
        "normal_zero_at_rho_xy_zero",
        worst_zero <= ZERO_TOL,
        format!("max |T| at rho_XY = 0 is {worst_zero:.3e}"),
    ));
    if has(EllipticalFamily::Normal) {
        let diffs: Vec<f64> = chosen
            .iter()
            .filter_map(|&i| est(i, EllipticalFamily::Normal).map(|v| (v.0 - points[i].closed).abs()))
            .collect();
        let worst = diffs.iter().copied().fold(0.0, f64::max);
        controls.push(Control::new(
            "normal_estimator_matches",
            worst < ESTIMATOR_TOL,
            format!("max |t_n - T| = {worst:.4} over {} points (tolerance {ESTIMATOR_TOL})", diffs.len()),
        ));
    }
    if has(EllipticalFamily::StudentT) {
        let at_zero: Vec<f64> = points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.center)
            .filter_map(|(i, _)| est(i, EllipticalFamily::StudentT).map(|v| v.0))
            .collect();
        let mean = at_zero.iter().sum::<f64>() / at_zero.len().max(1) as f64;
        controls.push(Control::new(
            "student_t_bounded_away",
            mean > STUDENT_FLOOR,
            format!("mean t_n at rho_XY = 0 is {mean:.4} over {} values of rho_Y (floor {STUDENT_FLOOR})", at_zero.len()),
        ));
    }
    Ok(Outcome { tables: vec![table], controls })
}
