//! ξ(Y, X) for equicorrelated normal vectors as a function of ρ.

use super::{max_jump, Context, Outcome};
use crate::error::Result;
use crate::result::{Control, LineStyle, Plot, Series, Table};
use rayon::prelude::*;
use std::f64::consts::PI;
use ximarkov_core::measures::{equicorrelated_r, xi_gaussian, SigmaPartition};

pub const MAX_JUMP: f64 = 0.05;
pub const EXTREME_TOL: f64 = 1e-10;

/// Correlation ρ in `[−1/p, 1]` with sign `sign` and squared coefficient `r2`.
fn rho_from_r2(p: usize, r2: f64, sign: f64) -> f64 {
    let pf = p as f64;
    let b = r2 * (pf - 1.0);
    (b + sign * (b * b + 4.0 * pf * r2).sqrt()) / (2.0 * pf)
}

/// `2K + 1` correlations from `−1/p` to `1` with ξ equally spaced along each
/// branch; the middle point is `ρ = 0`.
pub fn rho_grid(p: usize, points: usize) -> Vec<f64> {
    let k = (points - 1) / 2;
    (0..points)
        .map(|i| {
            if i == 0 {
                return -1.0 / p as f64;
            }
            if i == points - 1 {
                return 1.0;
            }
            let s = (i as f64 - k as f64) / k as f64;
            if s == 0.0 {
                return 0.0;
            }
            let r2 = (2.0 * (PI / 6.0 + s.abs() * PI / 3.0).sin() - 1.0).clamp(0.0, 1.0);
            rho_from_r2(p, r2, s.signum())
        })
        .collect()
}

pub(crate) fn run(ctx: &Context<'_>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let mut table = Table::new("equicorrelated", &["p", "rho", "r", "xi"]);
    let mut controls = Vec::new();
    let mut series = Vec::new();
    for &p in &cfg.dims {
        let rhos = rho_grid(p, cfg.rho_points);
        let values: Vec<(f64, f64, f64)> = rhos
            .par_iter()
            .map(|&rho| -> Result<(f64, f64, f64)> {
                let r = equicorrelated_r(p, rho)?;
                let xi = xi_gaussian(&SigmaPartition::equicorrelated(p, rho)?)?;
                Ok((rho, r, xi))
            })
            .collect::<Result<_>>()?;
        for &(rho, r, xi) in &values {
            table.push(vec![p.into(), rho.into(), r.into(), xi.into()]);
        }
        let xi_at = |target: f64| values.iter().find(|v| v.0 == target).map(|v| v.2);
        let zero = xi_at(0.0).unwrap_or(f64::NAN);
        let one = xi_at(1.0).unwrap_or(f64::NAN);
        let lower = xi_at(-1.0 / p as f64).unwrap_or(f64::NAN);
        let extremes = zero.abs() <= EXTREME_TOL && (one - 1.0).abs() <= EXTREME_TOL && (lower - 1.0).abs() <= EXTREME_TOL;
        controls.push(Control::new(
            &format!("extremes_p{p}"),
            extremes,
            format!("xi(0) = {zero}, xi(1) = {one}, xi(-1/p) = {lower}"),
        ));
        let jump = max_jump(&values.iter().map(|v| v.2).collect::<Vec<_>>());
        controls.push(Control::new(
            &format!("continuous_p{p}"),
            jump < MAX_JUMP,
            format!("max successive jump {jump:.4} (limit {MAX_JUMP})"),
        ));
        series.push(Series {
            label: format!("p = {p}"),
            style: LineStyle::Solid,
            points: values.iter().map(|v| (v.0, v.2)).collect(),
        });
    }
    table.plot = Some(Plot {
        x_label: "rho".into(),
        y_label: "xi(Y, X)".into(),
        log_x: false,
        series,
    });
    Ok(Outcome { tables: vec![table], controls })
}
