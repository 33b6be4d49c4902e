//! `(X_n, Y_n) = (q_n(U), U)` with `X_n ~ N(0, 1/n)` degenerating to a Dirac
//! law: the range of `F_{X_n}` does not converge.

use super::{Context, Outcome};
use crate::error::Result;
use crate::result::{Cell, Control, LineStyle, Plot, Series, Table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ximarkov_core::copula::{generalized_markov_product_with, sup_distance, CopulaSpec, RangeProfile};
use ximarkov_core::estimators::xi_n;
use ximarkov_core::measures::xi_from_product;
use ximarkov_core::special::norm_ppf;

pub const TOL: f64 = 1e-9;

pub(crate) fn run(ctx: &Context<'_>) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let m = cfg.grid;
    let comonotone = CopulaSpec::Comonotone;
    let limit_profile = RangeProfile::dirac();
    let mut table = Table::new(
        "dirac",
        &["model", "variance", "xi_population", "xi_n", "sup_product_to_M", "sup_product_to_limit", "range_deviation"],
    );
    let mut rows = Vec::new();
    for (task, &var) in cfg.variances.iter().enumerate() {
        // X_n is continuous and Y_n = F_{X_n}(X_n), so C_{X_n,Y_n} = M.
        let profile = RangeProfile::identity();
        let grid = generalized_markov_product_with(&comonotone, &profile, m, &ctx.quad)?;
        let xi = xi_from_product(&grid, &RangeProfile::identity())?;
        let product = CopulaSpec::grid(grid);
        let to_m = sup_distance(&product, &CopulaSpec::Comonotone, m)?;
        let to_limit = sup_distance(&product, &CopulaSpec::Independence, m)?;
        let deviation = profile.l1_distance(&limit_profile);
        let seed = ctx.seed(task as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y: Vec<f64> = (0..cfg.samples).map(|_| rng.random::<f64>()).collect();
        let x: Vec<f64> = y.iter().map(|u| var.sqrt() * norm_ppf(*u)).collect();
        let est = xi_n(&x, &y, seed)?;
        table.push(vec![
            "sequence".into(),
            var.into(),
            xi.value.into(),
            est.into(),
            to_m.into(),
            to_limit.into(),
            deviation.into(),
        ]);
        rows.push((var, xi.value, to_m, to_limit, deviation));
    }

    // Dirac X: every conditional copy is independent of Y.
    let limit = generalized_markov_product_with(&comonotone, &limit_profile, m, &ctx.quad)?;
    let limit_xi = xi_from_product(&limit, &RangeProfile::identity())?;
    let limit_spec = CopulaSpec::grid(limit);
    let limit_to_pi = sup_distance(&limit_spec, &CopulaSpec::Independence, m)?;
    table.push(vec![
        "limit".into(),
        0.0.into(),
        limit_xi.value.into(),
        Cell::Missing,
        sup_distance(&limit_spec, &CopulaSpec::Comonotone, m)?.into(),
        limit_to_pi.into(),
        limit_profile.l1_distance(&limit_profile).into(),
    ]);

    let pts = |f: fn(&(f64, f64, f64, f64, f64)) -> f64| rows.iter().map(|r| (r.0, f(r))).collect();
    table.plot = Some(Plot {
        x_label: "variance 1/n".into(),
        y_label: "value".into(),
        log_x: true,
        series: vec![
            Series { label: "xi population".into(), style: LineStyle::Solid, points: pts(|r| r.1) },
            Series { label: "sup product to limit".into(), style: LineStyle::Solid, points: pts(|r| r.3) },
            Series { label: "range deviation".into(), style: LineStyle::Solid, points: pts(|r| r.4) },
        ],
    });

    let all = |f: &dyn Fn(&(f64, f64, f64, f64, f64)) -> bool| rows.iter().all(f);
    let controls = vec![
        Control::new("xi_one", all(&|r| (r.1 - 1.0).abs() <= TOL), "population xi = 1 at every step"),
        Control::new("product_is_m", all(&|r| r.2 <= TOL), "product copula equals M at every step"),
        Control::new(
            "sup_gap_quarter",
            all(&|r| (r.3 - 0.25).abs() <= TOL),
            "sup distance of the product to the limit product is 0.25 at every step",
        ),
        Control::new(
            "range_deviation_half",
            all(&|r| (r.4 - 0.5).abs() <= TOL),
            "range profile deviation is 0.5 at every step",
        ),
        Control::new(
            "limit_product_is_pi",
            limit_to_pi <= TOL && limit_xi.value.abs() <= TOL,
            format!("limit product sup distance to Pi {limit_to_pi:.3e}, limit xi {}", limit_xi.value),
        ),
    ];
    Ok(Outcome { tables: vec![table], controls })
}
