//! Parameter sequences in SI copula families: pointwise, ∂₁ and ξ gaps.

use super::{Context, Outcome};
use crate::config::Family;
use crate::error::Result;
use crate::result::{Cell, Control, LineStyle, Plot, Series, Table};
use ximarkov_core::copula::{d1_distance_with, is_si, markov_product_with, sup_distance, CopulaSpec, RangeProfile};
use ximarkov_core::measures::{xi_from_product, xi_gaussian, SigmaPartition};

pub const SUP_TOL: f64 = 5e-3;
pub const D1_TOL: f64 = 5e-3;
pub const XI_TOL: f64 = 1e-3;

pub fn family_copula(family: Family, theta: f64) -> CopulaSpec {
    match family {
        Family::Gaussian => CopulaSpec::Gaussian { rho: theta },
        Family::Frank if theta == 0.0 => CopulaSpec::Independence,
        Family::Frank => CopulaSpec::Frank { theta },
        Family::Clayton if theta == 0.0 => CopulaSpec::Independence,
        Family::Clayton => CopulaSpec::Clayton { theta },
    }
}

fn closed_xi(family: Family, theta: f64) -> Result<Option<f64>> {
    Ok(match family {
        Family::Gaussian => Some(xi_gaussian(&SigmaPartition::from_rows(2, &[1.0, theta, theta, 1.0], 1)?)?),
        _ => None,
    })
}

pub(crate) fn run(ctx: &Context<'_>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let (limit, sequence) = cfg.si_thetas();
    let id = RangeProfile::identity();
    let mut table = Table::new(
        "si-convergence",
        &["family", "theta", "theta_limit", "sup_distance", "d1_distance", "xi_quadrature", "xi_gap", "xi_closed_gap"],
    );
    let family_name = format!("{:?}", cfg.family).to_lowercase();

    // Hypothesis of the corollary: every member is SI.
    let mut violations = Vec::new();
    for &theta in std::iter::once(&limit).chain(&sequence) {
        let report = is_si(&family_copula(cfg.family, theta), cfg.si_grid)?;
        if !report.holds {
            violations.push(format!(
                "theta {theta}: increase {:.3e} at {:?}",
                report.worst_violation, report.location
            ));
        }
    }
    if !violations.is_empty() {
        return Ok(Outcome {
            tables: vec![table],
            controls: vec![Control::new("si_hypothesis", false, violations.join("; "))],
        });
    }

    let c_limit = family_copula(cfg.family, limit);
    let xi_limit = xi_from_product(&markov_product_with(&c_limit, cfg.grid, &ctx.quad)?, &id)?.value;
    let closed_limit = closed_xi(cfg.family, limit)?;
    let sections = ctx.sections();
    let mut rows = Vec::new();
    for &theta in &sequence {
        let c = family_copula(cfg.family, theta);
        let sup = sup_distance(&c, &c_limit, cfg.grid)?;
        let d1 = d1_distance_with(&c, &c_limit, &sections, &ctx.quad)?;
        let xi = xi_from_product(&markov_product_with(&c, cfg.grid, &ctx.quad)?, &id)?.value;
        let closed_gap = match (closed_xi(cfg.family, theta)?, closed_limit) {
            (Some(a), Some(b)) => Cell::Real((a - b).abs()),
            _ => Cell::Missing,
        };
        let gap = (xi - xi_limit).abs();
        log::debug!("theta {theta}: sup {sup:.3e}, d1 {d1:.3e}, xi gap {gap:.3e}");
        table.push(vec![
            family_name.as_str().into(),
            theta.into(),
            limit.into(),
            sup.into(),
            d1.into(),
            xi.into(),
            gap.into(),
            closed_gap,
        ]);
        rows.push((sup, d1, gap));
    }

    let index = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().enumerate().map(|(i, r)| ((i + 1) as f64, f(r))).collect();
    table.plot = Some(Plot {
        x_label: "sequence index".into(),
        y_label: "gap to limit".into(),
        log_x: false,
        series: vec![
            Series { label: "sup distance".into(), style: LineStyle::Solid, points: index(|r| r.0) },
            Series { label: "d1 distance".into(), style: LineStyle::Solid, points: index(|r| r.1) },
            Series { label: "xi gap".into(), style: LineStyle::Solid, points: index(|r| r.2) },
        ],
    });

    let last = rows.last().copied().unwrap_or((0.0, 0.0, 0.0));
    let first = rows.first().copied().unwrap_or(last);
    let shrinks = |a: f64, b: f64| b <= a;
    let controls = vec![
        Control::new("si_hypothesis", true, "every member of the sequence is SI"),
        Control::new(
            "gaps_vanish",
            last.0 < SUP_TOL && last.1 < D1_TOL && last.2 < XI_TOL,
            format!(
                "final sup {:.3e} (< {SUP_TOL}), d1 {:.3e} (< {D1_TOL}), xi gap {:.3e} (< {XI_TOL})",
                last.0, last.1, last.2
            ),
        ),
        Control::new(
            "gaps_decrease",
            shrinks(first.0, last.0) && shrinks(first.1, last.1) && shrinks(first.2, last.2),
            "final gaps do not exceed the first ones",
        ),
    ];
    Ok(Outcome { tables: vec![table], controls })
}
