use super::CopulaSpec;
use crate::error::{invalid, Result};
use crate::quadrature::{CompositeRule, QuadratureConfig};
use rayon::prelude::*;

/// `max_u ∫₀¹ |∂₁A(t,u) − ∂₁B(t,u)| dt` over `u_grid`.
pub fn d1_distance(a: &CopulaSpec, b: &CopulaSpec, u_grid: &[f64]) -> Result<f64> {
    d1_distance_with(a, b, u_grid, &QuadratureConfig::default())
}

pub fn d1_distance_with(
    a: &CopulaSpec,
    b: &CopulaSpec,
    u_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64> {
    a.validate()?;
    b.validate()?;
    if u_grid.is_empty() {
        return Err(invalid("u grid must be nonempty"));
    }
    if let Some(u) = u_grid.iter().find(|u| !(0.0..=1.0).contains(*u)) {
        return Err(invalid(format!("u = {u} outside [0, 1]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let per_u: Vec<f64> = u_grid
        .par_iter()
        .map(|&u| {
            let mut breaks = a.kinks(u);
            breaks.extend(b.kinks(u));
            let rule = CompositeRule::unit(cfg, &breaks);
            rule.integrate(|t| (a.d1(t, u) - b.d1(t, u)).abs())
        })
        .collect();
    Ok(per_u.into_iter().fold(0.0, f64::max))
}

/// Largest CDF deviation over the `(m+1)²` lattice.
pub fn sup_distance(a: &CopulaSpec, b: &CopulaSpec, m: usize) -> Result<f64> {
    a.validate()?;
    b.validate()?;
    if m < 1 {
        return Err(invalid("lattice resolution must be positive"));
    }
    let mf = m as f64;
    let rows: Vec<f64> = (0..=m)
        .into_par_iter()
        .map(|i| {
            let u = i as f64 / mf;
            (0..=m)
                .map(|j| {
                    let v = j as f64 / mf;
                    (a.eval(u, v) - b.eval(u, v)).abs()
                })
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(rows.into_iter().fold(0.0, f64::max))
}

/// Outcome of a monotonicity check of the sections `t ↦ ∂₁C(t, u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneReport {
    pub holds: bool,
    /// Largest increase (for SI) or decrease (for SD) between neighbouring
    /// lattice points; `0` if none.
    pub worst_violation: f64,
    /// `(t, u)` at the start of the worst step.
    pub location: Option<(f64, f64)>,
}

/// Tolerance on monotonicity violations.
const MONOTONE_TOL: f64 = 1e-8;

fn monotone(c: &CopulaSpec, grid: usize, sign: f64) -> Result<MonotoneReport> {
    c.validate()?;
    if grid < 2 {
        return Err(invalid("SI/SD lattice needs at least 2 points"));
    }
    let gf = grid as f64;
    let ts: Vec<f64> = (0..grid).map(|k| (k as f64 + 0.5) / gf).collect();
    let mut worst = 0.0;
    let mut location = None;
    for j in 0..=grid {
        let u = j as f64 / gf;
        let mut prev = c.d1(ts[0], u);
        for w in ts.windows(2) {
            let next = c.d1(w[1], u);
            let step = sign * (next - prev);
            if step > worst {
                worst = step;
                location = Some((w[0], u));
            }
            prev = next;
        }
    }
    Ok(MonotoneReport {
        holds: worst <= MONOTONE_TOL,
        worst_violation: worst,
        location,
    })
}

/// Stochastically increasing: every section `t ↦ ∂₁C(t,u)` is non-increasing.
pub fn is_si(c: &CopulaSpec, grid: usize) -> Result<MonotoneReport> {
    monotone(c, grid, 1.0)
}

/// Stochastically decreasing: every section is non-decreasing.
pub fn is_sd(c: &CopulaSpec, grid: usize) -> Result<MonotoneReport> {
    monotone(c, grid, -1.0)
}
