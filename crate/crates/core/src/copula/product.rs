use super::{CopulaGrid, CopulaSpec, RangeProfile};
use crate::error::{invalid, Result};
use crate::quadrature::{unit_edges, CompositeRule, QuadratureConfig};
use rayon::prelude::*;

fn lattice(m: usize) -> Vec<f64> {
    (0..=m).map(|i| i as f64 / m as f64).collect()
}

/// Union of the kinks of `∂₁C(·, u)` over all lattice values `u`.
fn lattice_kinks(c: &CopulaSpec, us: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = us.iter().flat_map(|&u| c.kinks(u)).collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Columns `∂₁C(t_k, u_i)` over the rule nodes, one vector per lattice value.
fn partial_columns(c: &CopulaSpec, nodes: &[f64], us: &[f64]) -> Vec<Vec<f64>> {
    us.par_iter()
        .map(|&u| nodes.iter().map(|&t| c.d1(t, u)).collect())
        .collect()
}

/// Weighted Gram matrix of the columns, plus rank-one terms from `extra`
/// (weight, per-column value). Entries are computed for `i <= j` and mirrored,
/// so the result is exactly symmetric and independent of thread count.
fn gram_grid(
    m: usize,
    weights: &[f64],
    cols: &[Vec<f64>],
    extra: &[(f64, Vec<f64>)],
) -> CopulaGrid {
    let side = m + 1;
    let rows: Vec<Vec<f64>> = (0..side)
        .into_par_iter()
        .map(|i| {
            (i..side)
                .map(|j| {
                    let ci = &cols[i];
                    let cj = &cols[j];
                    let mut acc = 0.0;
                    for k in 0..weights.len() {
                        acc += weights[k] * ci[k] * cj[k];
                    }
                    for (w, g) in extra {
                        acc += w * g[i] * g[j];
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let mut grid = CopulaGrid::from_fn(m, |i, j| {
        if i <= j {
            rows[i][j - i]
        } else {
            rows[j][i - j]
        }
    });
    grid.snap_margins();
    grid
}

/// Markov product `C∗C(u,v) = ∫₀¹ ∂₁C(t,u) ∂₁C(t,v) dt` on an `m`-lattice,
/// with the default quadrature.
pub fn markov_product(c: &CopulaSpec, m: usize) -> Result<CopulaGrid> {
    markov_product_with(c, m, &QuadratureConfig::default())
}

pub fn markov_product_with(c: &CopulaSpec, m: usize, cfg: &QuadratureConfig) -> Result<CopulaGrid> {
    c.validate()?;
    if m < 2 {
        return Err(invalid(format!("grid resolution {m} must be at least 2")));
    }
    let us = lattice(m);
    let rule = CompositeRule::unit(cfg, &lattice_kinks(c, &us));
    let cols = partial_columns(c, &rule.nodes, &us);
    Ok(gram_grid(m, &rule.weights, &cols, &[]))
}

/// Conditional independence product `C ∗_F C` for a conditioning variable
/// whose distribution function has range profile `fx`.
///
/// On a jump `(a, b]` of the profile the generalized partial is the chord
/// slope `[C(b,u) − C(a,u)] / (b − a)`; elsewhere it is `∂₁C`.
pub fn generalized_markov_product(
    c: &CopulaSpec,
    fx: &RangeProfile,
    m: usize,
) -> Result<CopulaGrid> {
    generalized_markov_product_with(c, fx, m, &QuadratureConfig::default())
}

pub fn generalized_markov_product_with(
    c: &CopulaSpec,
    fx: &RangeProfile,
    m: usize,
    cfg: &QuadratureConfig,
) -> Result<CopulaGrid> {
    c.validate()?;
    if m < 2 {
        return Err(invalid(format!("grid resolution {m} must be at least 2")));
    }
    if fx.is_identity() {
        return markov_product_with(c, m, cfg);
    }
    if fx.is_dirac() {
        // All mass on a single conditioning value.
        return Ok(CopulaGrid::independence(m));
    }
    let us = lattice(m);
    let mut breaks = lattice_kinks(c, &us);
    for &(a, b) in fx.jumps() {
        breaks.push(a);
        breaks.push(b);
    }
    let edges = unit_edges(cfg, &breaks);
    // Keep only panels outside the jumps.
    let mut kept = Vec::new();
    for w in edges.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let in_jump = fx.jumps().iter().any(|&(a, b)| mid > a && mid < b);
        if !in_jump {
            kept.push((w[0], w[1]));
        }
    }
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (a, b) in kept {
        let r = CompositeRule::from_edges(&[a, b], cfg.order);
        nodes.extend(r.nodes);
        weights.extend(r.weights);
    }
    let cols = partial_columns(c, &nodes, &us);
    let extra: Vec<(f64, Vec<f64>)> = fx
        .jumps()
        .iter()
        .map(|&(a, b)| {
            let slopes = us
                .iter()
                .map(|&u| ((c.eval(b, u) - c.eval(a, u)) / (b - a)).clamp(0.0, 1.0))
                .collect();
            (b - a, slopes)
        })
        .collect();
    Ok(gram_grid(m, &weights, &cols, &extra))
}

/// Checkerboard approximation: the mass of `c` on each cell of the
/// `m`-lattice, spread uniformly.
pub fn checkerboard(c: &CopulaSpec, m: usize) -> Result<CopulaGrid> {
    c.validate()?;
    if m < 1 {
        return Err(invalid("checkerboard resolution must be positive"));
    }
    let mf = m as f64;
    Ok(CopulaGrid::from_fn(m, |i, j| c.eval(i as f64 / mf, j as f64 / mf)))
}
