//! Witnesses for the two conditions of Markov-product continuity: distance of
//! the product copulas, deviation of the range profiles, and the ξ gap.

use super::{Context, Outcome};
use crate::error::Result;
use crate::result::{Cell, Control, LineStyle, Plot, Series, Table};
use ximarkov_core::copula::{markov_product_with, sup_distance, CopulaGrid, CopulaSpec, RangeProfile};
use ximarkov_core::measures::xi_from_product;

pub const GAUSSIAN_TOL: f64 = 1e-3;
pub const JOINT_FLOOR: f64 = 0.1;
pub const PRODUCT_FLOOR: f64 = 0.2;
pub const SHUFFLE_JOINT_TARGET: f64 = 0.02;
pub const ZERO_TOL: f64 = 1e-9;

struct Row {
    control: &'static str,
    parameter: f64,
    limit: Option<f64>,
    joint: f64,
    product: f64,
    range: f64,
    xi_gap: f64,
}

pub(crate) fn run(ctx: &Context<'_>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let m = cfg.grid;
    let id = RangeProfile::identity();
    let product = |c: &CopulaSpec| markov_product_with(c, m, &ctx.quad);
    let xi = |g: &CopulaGrid| xi_from_product(g, &id).map(|r| r.value);
    let mut rows = Vec::new();

    // Gaussian ρ_n → ρ: both conditions hold.
    let g_limit = CopulaSpec::Gaussian { rho: cfg.rho_limit };
    let p_limit = product(&g_limit)?;
    let xi_limit = xi(&p_limit)?;
    for &rho in &cfg.rho_sequence {
        let g = CopulaSpec::Gaussian { rho };
        let p = product(&g)?;
        rows.push(Row {
            control: "gaussian",
            parameter: rho,
            limit: Some(cfg.rho_limit),
            joint: sup_distance(&g, &g_limit, m)?,
            product: p.sup_deviation(&p_limit)?,
            range: id.l1_distance(&id),
            xi_gap: (xi(&p)? - xi_limit).abs(),
        });
    }

    // Y_n = −X against Y = X for symmetric X: same products, different laws.
    let p_w = product(&CopulaSpec::Countermonotone)?;
    let p_m = product(&CopulaSpec::Comonotone)?;
    rows.push(Row {
        control: "reflection",
        parameter: -1.0,
        limit: Some(1.0),
        joint: sup_distance(&CopulaSpec::Countermonotone, &CopulaSpec::Comonotone, m)?,
        product: p_w.sup_deviation(&p_m)?,
        range: id.l1_distance(&id),
        xi_gap: (xi(&p_w)? - xi(&p_m)?).abs(),
    });

    // Shuffles: the laws converge to Π, the products stay at M.
    let p_pi = CopulaGrid::independence(m);
    let xi_pi = xi(&p_pi)?;
    for &k in &cfg.stripes {
        let s = CopulaSpec::ShuffleMod { n: k };
        let p = product(&s)?;
        rows.push(Row {
            control: "shuffle",
            parameter: f64::from(k),
            limit: None,
            joint: sup_distance(&s, &CopulaSpec::Independence, m)?,
            product: p.sup_deviation(&p_pi)?,
            range: id.l1_distance(&id),
            xi_gap: (xi(&p)? - xi_pi).abs(),
        });
    }

    let mut table = Table::new(
        "diagnostics",
        &["control", "parameter", "limit_parameter", "joint_sup", "product_sup", "range_deviation", "xi_gap"],
    );
    for r in &rows {
        table.push(vec![
            r.control.into(),
            r.parameter.into(),
            r.limit.map_or(Cell::Text("independence".into()), Cell::Real),
            r.joint.into(),
            r.product.into(),
            r.range.into(),
            r.xi_gap.into(),
        ]);
    }
    let of = |name: &str| rows.iter().filter(|r| r.control == name).collect::<Vec<_>>();
    let gauss = of("gaussian");
    let shuffle = of("shuffle");
    let reflection = of("reflection");
    let indexed = |rs: &[&Row], f: fn(&Row) -> f64| rs.iter().enumerate().map(|(i, r)| ((i + 1) as f64, f(r))).collect();
    table.plot = Some(Plot {
        x_label: "sequence index".into(),
        y_label: "distance / gap".into(),
        log_x: false,
        series: vec![
            Series { label: "gaussian joint".into(), style: LineStyle::Solid, points: indexed(&gauss, |r| r.joint) },
            Series { label: "gaussian product".into(), style: LineStyle::Solid, points: indexed(&gauss, |r| r.product) },
            Series { label: "gaussian xi gap".into(), style: LineStyle::Solid, points: indexed(&gauss, |r| r.xi_gap) },
            Series { label: "shuffle joint".into(), style: LineStyle::Dotted, points: indexed(&shuffle, |r| r.joint) },
            Series { label: "shuffle product".into(), style: LineStyle::Dotted, points: indexed(&shuffle, |r| r.product) },
        ],
    });

    let mut controls = Vec::new();
    if let (Some(first), Some(last)) = (gauss.first(), gauss.last()) {
        controls.push(Control::new(
            "gaussian_converges",
            last.joint < GAUSSIAN_TOL && last.product < GAUSSIAN_TOL && last.xi_gap < GAUSSIAN_TOL
                && last.range == 0.0
                && last.product <= first.product
                && last.xi_gap <= first.xi_gap,
            format!(
                "final joint {:.3e}, product {:.3e}, range {}, xi gap {:.3e} (tolerance {GAUSSIAN_TOL})",
                last.joint, last.product, last.range, last.xi_gap
            ),
        ));
    }
    let r = reflection[0];
    controls.push(Control::new(
        "reflection_products_agree",
        r.product <= ZERO_TOL && r.joint >= JOINT_FLOOR,
        format!("product distance {:.3e}, joint distance {:.4} (floor {JOINT_FLOOR})", r.product, r.joint),
    ));
    let min_product = shuffle.iter().map(|r| r.product).fold(f64::INFINITY, f64::min);
    controls.push(Control::new(
        "shuffle_products_stay_apart",
        min_product >= PRODUCT_FLOOR,
        format!("min product distance {min_product:.4} (floor {PRODUCT_FLOOR})"),
    ));
    if let Some(r) = shuffle.iter().filter(|r| r.parameter >= 64.0).min_by(|a, b| a.parameter.total_cmp(&b.parameter)) {
        controls.push(Control::new(
            "shuffle_joint_vanishes",
            r.joint < SHUFFLE_JOINT_TARGET,
            format!("joint distance at n = {} is {:.3e}", r.parameter, r.joint),
        ));
    }
    Ok(Outcome { tables: vec![table], controls })
}
