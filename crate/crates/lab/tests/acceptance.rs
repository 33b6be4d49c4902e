//! The nine acceptance criteria. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::sync::Arc;
use std::time::{Duration, Instant};
use ximarkov_core::copula::{markov_product, sup_distance, CopulaSpec, RangeProfile};
use ximarkov_core::estimators::{ks_distance, lambda_n, t_n, xi_n};
use ximarkov_core::measures::{t_gaussian_4d, xi_from_product, xi_gaussian, SigmaPartition};
use ximarkov_core::models::{
    conditional_elliptical, sample_elliptical, sample_l1, williamson_generator, EllipticalSpec, GammaRadial, L1Spec,
    Radial,
};
use ximarkov_core::special::{norm_cdf, t_cdf};
use ximarkov_lab::config::FIG2_RHO_Y;
use ximarkov_lab::{run, Experiment, ExperimentConfig};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn bivariate(rho: f64) -> SigmaPartition {
    SigmaPartition::from_rows(2, &[1.0, rho, rho, 1.0], 1).unwrap()
}

fn closed_xi(rho: f64) -> f64 {
    xi_gaussian(&bivariate(rho)).unwrap()
}

fn normal_pair(n: usize, rho: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let data = sample_elliptical(&EllipticalSpec::centered(bivariate(rho), Radial::Normal).unwrap(), n, seed).unwrap();
    (data.column(0).iter().copied().collect(), data.column(1).iter().copied().collect())
}

fn criterion_1() -> Check {
    let exact = closed_xi(0.0) == 0.0 && closed_xi(1.0) == 1.0 && closed_xi(-1.0) == 1.0;
    let mut worst: f64 = 0.0;
    for rho in [-0.9, -0.5, 0.0, 0.25, 0.5, 0.9] {
        let grid = markov_product(&CopulaSpec::Gaussian { rho }, 256).map_err(|e| e.to_string())?;
        let xi = xi_from_product(&grid, &RangeProfile::identity()).map_err(|e| e.to_string())?;
        worst = worst.max((xi.value - closed_xi(rho)).abs());
    }
    ensure(exact && worst < 1e-4, format!("extremes exact: {exact}; max quadrature deviation {worst:.2e} (< 1e-4)"))
}

fn criterion_2() -> Check {
    let mut worst: f64 = 0.0;
    for rho in [0.2, 0.6, -0.7] {
        let grid = markov_product(&CopulaSpec::Gaussian { rho }, 256).map_err(|e| e.to_string())?;
        let d = sup_distance(&CopulaSpec::grid(grid), &CopulaSpec::Gaussian { rho: rho * rho }, 256)
            .map_err(|e| e.to_string())?;
        worst = worst.max(d);
    }
    ensure(worst < 1e-4, format!("max sup distance {worst:.2e} (< 1e-4)"))
}

fn criterion_3() -> Check {
    let cfg = ExperimentConfig {
        dims: vec![1, 2, 4, 10, 100],
        rho_points: 201,
        ..ExperimentConfig::default()
    };
    let result = run(Experiment::Equicorrelated, &cfg).map_err(|e| e.to_string())?;
    let t = &result.tables[0];
    let (ps, rhos, xis) = (t.column("p"), t.column("rho"), t.column("xi"));
    let mut bad = Vec::new();
    for p in cfg.dims {
        let rows: Vec<(f64, f64)> = (0..t.rows.len())
            .filter(|&i| ps[i] == Some(p as f64))
            .map(|i| (rhos[i].unwrap(), xis[i].unwrap()))
            .collect();
        let at = |r: f64| rows.iter().find(|v| v.0 == r).map(|v| v.1);
        let ok0 = at(0.0).is_some_and(|v| v.abs() <= 1e-10);
        let ok1 = at(1.0).is_some_and(|v| (v - 1.0).abs() <= 1e-10);
        let okl = at(-1.0 / p as f64).is_some_and(|v| (v - 1.0).abs() <= 1e-10);
        let jump = rows.windows(2).map(|w| (w[1].1 - w[0].1).abs()).fold(0.0, f64::max);
        if !(ok0 && ok1 && okl && jump < 0.05 && rows.len() == 201) {
            bad.push(format!("p={p}: extremes {ok0}/{ok1}/{okl}, jump {jump:.4}, points {}", rows.len()));
        }
    }
    ensure(bad.is_empty(), if bad.is_empty() { "all five curves pass".into() } else { bad.join("; ") })
}

fn criterion_4() -> Check {
    let rho_x = 0.5;
    let worst_zero = FIG2_RHO_Y
        .iter()
        .map(|&ry| t_gaussian_4d(rho_x, 0.0, ry).map(f64::abs))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .fold(0.0, f64::max);
    // 12 points spread over the caption's ρ_Y list and a 201-point ρ_XY grid.
    let mut grid = Vec::new();
    for &ry in &FIG2_RHO_Y {
        let bound = ((1.0 + rho_x) / 2.0 * (1.0 + ry) / 2.0f64).sqrt();
        for j in 0..201 {
            let rxy = bound * (j as f64 - 100.0) / 100.0;
            if let Ok(t) = t_gaussian_4d(rho_x, rxy, ry) {
                grid.push((ry, rxy, t));
            }
        }
    }
    let mut worst: f64 = 0.0;
    for k in 0..12 {
        let (ry, rxy, closed) = grid[(2 * k + 1) * grid.len() / 24];
        let s = SigmaPartition::four_dim(rho_x, rxy, ry).map_err(|e| e.to_string())?;
        let data = sample_elliptical(&EllipticalSpec::centered(s, Radial::Normal).unwrap(), 100_000, 4000 + k as u64)
            .map_err(|e| e.to_string())?;
        let est = t_n(&data.columns(0, 2).into_owned(), &data.columns(2, 2).into_owned()).map_err(|e| e.to_string())?;
        let d = (est.value - closed).abs();
        worst = worst.max(d);
    }
    ensure(
        worst_zero <= 1e-10 && worst < 0.03,
        format!("max |T| at rho_XY = 0: {worst_zero:.1e}; max |t_n - T| over 12 points {worst:.4} (< 0.03)"),
    )
}

fn criterion_5() -> Check {
    let cfg = ExperimentConfig::default();
    let shuffle = run(Experiment::Shuffle, &cfg).map_err(|e| e.to_string())?;
    let t = &shuffle.tables[0];
    let (stripes, sup, d1, xi) = (t.column("stripes"), t.column("sup_distance"), t.column("d1_distance"), t.column("xi_population"));
    let i64_ = stripes.iter().position(|s| *s == Some(64.0)).ok_or("no 64-stripe row")?;
    let sup64 = sup[i64_].unwrap();
    let xi_ok = xi.iter().all(|v| (v.unwrap() - 1.0).abs() <= 1e-9);
    let min_d1 = d1.iter().map(|v| v.unwrap()).fold(f64::INFINITY, f64::min);

    let dirac = run(Experiment::Dirac, &cfg).map_err(|e| e.to_string())?;
    let t = &dirac.tables[0];
    let models: Vec<String> = t.rows.iter().map(|r| r[0].render()).collect();
    let (to_m, to_limit) = (t.column("sup_product_to_M"), t.column("sup_product_to_limit"));
    let mut dirac_ok = true;
    for (i, model) in models.iter().enumerate() {
        let (m, l) = (to_m[i].unwrap(), to_limit[i].unwrap());
        dirac_ok &= if model == "limit" {
            l <= 1e-9 && (m - 0.25).abs() <= 1e-9
        } else {
            m <= 1e-9 && (l - 0.25).abs() <= 1e-9
        };
    }
    ensure(
        sup64 < 0.02 && xi_ok && min_d1 > 0.2 && dirac_ok && models.iter().any(|m| m == "limit"),
        format!("shuffle: sup(64) {sup64:.4}, xi = 1 everywhere {xi_ok}, min d1 {min_d1:.3}; dirac M vs Pi gap 0.25: {dirac_ok}"),
    )
}

fn criterion_6() -> Check {
    let target = closed_xi(0.5);
    let runs: Vec<f64> = (0..10)
        .map(|s| {
            let (x, y) = normal_pair(100_000, 0.5, 600 + s);
            xi_n(&x, &y, s).unwrap()
        })
        .collect();
    let mean = runs.iter().sum::<f64>() / 10.0;
    let worst = runs.iter().map(|v| (v - target).abs()).fold(0.0, f64::max);
    let (x, y) = normal_pair(100_000, 0.6, 700);
    let lam = lambda_n(&DMatrix::from_column_slice(x.len(), 1, &x), &y).map_err(|e| e.to_string())?.value;
    ensure(
        (mean - target).abs() < 0.01 && worst < 0.03 && (lam - 0.36).abs() < 0.03,
        format!(
            "xi_n mean dev {:.4} (< 0.01), max dev {worst:.4} (< 0.03); lambda_n {lam:.4} vs 0.36",
            (mean - target).abs()
        ),
    )
}

fn criterion_7() -> Check {
    let xs: Vec<f64> = (0..=100).map(|k| k as f64 * 0.05).collect();
    let mut gen_dev: f64 = 0.0;
    let mut ks_max: f64 = 0.0;
    let mut xi_max: f64 = 0.0;
    for d in [2, 3, 5] {
        let radial = GammaRadial::erlang(d).map_err(|e| e.to_string())?;
        let g = williamson_generator(&radial, d, &xs).map_err(|e| e.to_string())?;
        for (x, v) in xs.iter().zip(&g.values) {
            gen_dev = gen_dev.max((v - (-x).exp()).abs());
        }
        let spec = L1Spec::new(d, Arc::new(radial)).map_err(|e| e.to_string())?;
        let data = sample_l1(&spec, 10_000, 70 + d as u64).map_err(|e| e.to_string())?;
        let cols: Vec<Vec<f64>> = (0..d).map(|j| data.column(j).iter().copied().collect()).collect();
        for c in &cols {
            ks_max = ks_max.max(ks_distance(c, |v| 1.0 - (-v.max(0.0)).exp()));
        }
        for j in 1..d {
            xi_max = xi_max.max(xi_n(&cols[0], &cols[j], j as u64).map_err(|e| e.to_string())?.abs());
        }
    }
    ensure(
        gen_dev < 1e-6 && ks_max < 0.02 && xi_max < 0.05,
        format!("generator dev {gen_dev:.1e} (< 1e-6), max KS {ks_max:.4} (< 0.02), max |xi_n| {xi_max:.4} (< 0.05)"),
    )
}

fn criterion_8() -> Check {
    let s = SigmaPartition::from_rows(3, &[1.0, 0.3, 0.5, 0.3, 2.0, -0.4, 0.5, -0.4, 1.5], 2).unwrap();
    let points = [[0.0, 0.0], [0.5, -0.5], [1.0, 2.0], [-2.0, 1.0], [3.0, -3.0]];
    let rs = [0.05, 0.3, 0.8, 1.5, 2.5, 4.0, 8.0];
    let nu = 3.0;
    let normal = EllipticalSpec::centered(s.clone(), Radial::Normal).unwrap();
    let student = EllipticalSpec::centered(s, Radial::StudentT { nu }).unwrap();
    let (mut dn, mut dt): (f64, f64) = (0.0, 0.0);
    for x in &points {
        let law = conditional_elliptical(&normal, x).map_err(|e| e.to_string())?;
        for &r in &rs {
            dn = dn.max((law.radial_cdf(r) - (2.0 * norm_cdf(r) - 1.0)).abs());
        }
        let law = conditional_elliptical(&student, x).map_err(|e| e.to_string())?;
        let scale = ((nu + law.q_x) / (nu + 2.0)).sqrt();
        for &r in &rs {
            dt = dt.max((law.radial_cdf(r) - (2.0 * t_cdf(r / scale, nu + 2.0) - 1.0)).abs());
        }
    }
    ensure(dn < 1e-6 && dt < 1e-5, format!("normal dev {dn:.1e} (< 1e-6), Student-t dev {dt:.1e} (< 1e-5)"))
}

fn copula_violations(c: &CopulaSpec, rng: &mut ChaCha8Rng, rectangles: usize) -> usize {
    let tol = 1e-12;
    let f = |u: f64, v: f64| c.cdf(u, v).unwrap();
    let mut bad = 0;
    for _ in 0..rectangles {
        let (a, b): (f64, f64) = (rng.random(), rng.random());
        let (c1, d1): (f64, f64) = (rng.random(), rng.random());
        let (u1, u2) = (a.min(b), a.max(b));
        let (v1, v2) = (c1.min(d1), c1.max(d1));
        let mass = f(u2, v2) - f(u1, v2) - f(u2, v1) + f(u1, v1);
        let val = f(u1, v1);
        let frechet = val >= (u1 + v1 - 1.0).max(0.0) - tol && val <= u1.min(v1) + tol;
        let margins = (f(u1, 1.0) - u1).abs() <= tol && (f(1.0, v1) - v1).abs() <= tol;
        let grounded = f(u1, 0.0).abs() <= tol && f(0.0, v1).abs() <= tol;
        if mass < -tol || !frechet || !margins || !grounded {
            bad += 1;
        }
    }
    bad
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    // DΣD invariance.
    let mut worst_scale: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(2..6);
        let b = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let s = &b.transpose() * &b + DMatrix::identity(n, n) * 0.01;
        let s = (&s + s.transpose()) * 0.5;
        let d: Vec<f64> = (0..n).map(|_| (rng.random::<f64>() * 6.0 - 3.0).exp()).collect();
        let scaled = DMatrix::from_fn(n, n, |i, j| s[(i, j)] * d[i] * d[j]);
        let a = xi_gaussian(&SigmaPartition::new(s, n - 1).unwrap()).unwrap();
        let b = xi_gaussian(&SigmaPartition::new(scaled, n - 1).unwrap()).unwrap();
        worst_scale = worst_scale.max((a - b).abs());
    }
    // Rank invariance.
    let mut rank_ok = true;
    for case in 0..100 {
        let n = 500;
        let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let y: Vec<f64> = x.iter().map(|v| v * 0.5 + rng.sample::<f64, _>(StandardNormal)).collect();
        let tx: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let ty: Vec<f64> = y.iter().map(|v| v.atan() + 2.0 * v.powi(3)).collect();
        rank_ok &= xi_n(&x, &y, case).unwrap() == xi_n(&tx, &ty, case).unwrap();
    }
    // Copula axioms.
    let frank_product = markov_product(&CopulaSpec::Frank { theta: 3.0 }, 32).map_err(|e| e.to_string())?;
    let families = [
        CopulaSpec::Independence,
        CopulaSpec::Comonotone,
        CopulaSpec::Countermonotone,
        CopulaSpec::Gaussian { rho: 0.5 },
        CopulaSpec::Gaussian { rho: -0.9 },
        CopulaSpec::Frank { theta: 5.0 },
        CopulaSpec::Frank { theta: -5.0 },
        CopulaSpec::Clayton { theta: 2.0 },
        CopulaSpec::ShuffleMod { n: 3 },
        CopulaSpec::grid(frank_product),
    ];
    let violations: usize = families.iter().map(|c| copula_violations(c, &mut rng, 1000)).sum();
    ensure(
        worst_scale <= 1e-12 && rank_ok && violations == 0,
        format!(
            "scale invariance dev {worst_scale:.1e} (<= 1e-12), rank invariance exact {rank_ok}, axiom violations {violations} over {} families",
            families.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Check, u64); 9] = [
        ("closed-form Gaussian xi", criterion_1, 30),
        ("Gaussian product squares the parameter", criterion_2, 30),
        ("equicorrelated curves", criterion_3, 60),
        ("4-d normal T", criterion_4, 300),
        ("counterexample suite", criterion_5, 60),
        ("estimator consistency", criterion_6, 120),
        ("l1-norm symmetric oracle", criterion_7, 60),
        ("conditional elliptical oracle", criterion_8, 60),
        ("invariance suite", criterion_9, 60),
    ];
    let mut failures = 0;
    for (k, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {limit} s budget")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {}: {status} [{name}] {detail} ({:.1} s of {limit} s)",
            k + 1,
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria passed");
}
