//! Worked examples for each public operation, each checked against an
//! independent computation where one exists.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;
use std::sync::Arc;
use ximarkov_core::copula::*;
use ximarkov_core::estimators::*;
use ximarkov_core::measures::*;
use ximarkov_core::models::*;
use ximarkov_core::special::{norm_cdf, norm_ppf};

fn column(m: &DMatrix<f64>, j: usize) -> Vec<f64> {
    m.column(j).iter().copied().collect()
}

fn normal_pair(n: usize, rho: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = (1.0 - rho * rho).sqrt();
    (0..n)
        .map(|_| {
            let x: f64 = rng.sample(StandardNormal);
            let e: f64 = rng.sample(StandardNormal);
            (x, rho * x + s * e)
        })
        .unzip()
}

// ---------------------------------------------------------------- copula

#[test]
fn cdf_examples() {
    assert_eq!(CopulaSpec::Independence.cdf(0.3, 0.4).unwrap(), 0.3 * 0.4);
    assert_eq!(CopulaSpec::Comonotone.cdf(0.3, 0.4).unwrap(), 0.3);
    // P(X ≤ 0.25, 2X mod 1 ≤ 0.5) by a midpoint sum over X.
    let k = 1_000_000;
    let brute = (0..k)
        .map(|i| (i as f64 + 0.5) / k as f64)
        .filter(|&x| x <= 0.25 && (2.0 * x).fract() <= 0.5)
        .count() as f64
        / k as f64;
    let v = CopulaSpec::ShuffleMod { n: 2 }.cdf(0.25, 0.5).unwrap();
    assert!((v - 0.25).abs() < 1e-15);
    assert!((v - brute).abs() < 1e-6);
    assert!(CopulaSpec::Clayton { theta: -1.0 }.cdf(0.5, 0.5).is_err());
}

#[test]
fn partial_examples() {
    assert_eq!(CopulaSpec::Independence.partial1(0.7, 0.4).unwrap().value, 0.4);
    assert_eq!(CopulaSpec::Comonotone.partial1(0.3, 0.6).unwrap().value, 1.0);
    assert_eq!(CopulaSpec::Comonotone.partial1(0.6, 0.3).unwrap().value, 0.0);
    let rho: f64 = 0.5;
    let g = CopulaSpec::Gaussian { rho }.partial1(0.5, 0.5).unwrap().value;
    let oracle = norm_cdf((norm_ppf(0.5) - rho * norm_ppf(0.5)) / (1.0 - rho * rho).sqrt());
    assert!((g - 0.5).abs() < 1e-14 && (g - oracle).abs() < 1e-14);
}

#[test]
fn markov_product_examples() {
    let pi = markov_product(&CopulaSpec::Independence, 64).unwrap();
    assert!(sup_distance(&CopulaSpec::grid(pi), &CopulaSpec::Independence, 64).unwrap() < 1e-10);
    let m = markov_product(&CopulaSpec::Comonotone, 64).unwrap();
    assert!(sup_distance(&CopulaSpec::grid(m), &CopulaSpec::Comonotone, 64).unwrap() < 1e-10);

    let g = markov_product(&CopulaSpec::Gaussian { rho: 0.6 }, 64).unwrap();
    let target = CopulaSpec::Gaussian { rho: 0.36 };
    assert!(sup_distance(&CopulaSpec::grid(g.clone()), &target, 64).unwrap() < 1e-4);

    // Conditional copies: Y, Y′ = 0.6 Z + 0.8 εᵢ, copula evaluated empirically.
    let n = 200_000;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            let e1: f64 = rng.sample(StandardNormal);
            let e2: f64 = rng.sample(StandardNormal);
            (norm_cdf(0.6 * z + 0.8 * e1), norm_cdf(0.6 * z + 0.8 * e2))
        })
        .collect();
    for &(i, j) in &[(16, 16), (8, 40), (48, 24), (32, 56)] {
        let (u, v) = (i as f64 / 64.0, j as f64 / 64.0);
        let emp = pairs.iter().filter(|p| p.0 <= u && p.1 <= v).count() as f64 / n as f64;
        assert!((emp - g.at(i, j)).abs() < 0.005, "({u},{v}): {emp} vs {}", g.at(i, j));
    }
}

#[test]
fn generalized_product_examples() {
    let m = CopulaSpec::Comonotone;
    let ident = generalized_markov_product(&m, &RangeProfile::identity(), 32).unwrap();
    assert!(ident.sup_deviation(&markov_product(&m, 32).unwrap()).unwrap() < 1e-12);
    let dirac = generalized_markov_product(&m, &RangeProfile::dirac(), 32).unwrap();
    assert!(dirac.sup_deviation(&CopulaGrid::independence(32)).unwrap() == 0.0);
    // Two atoms: (Y, Y′) are independent uniforms on each half, mixed ½/½.
    let two = generalized_markov_product(&m, &RangeProfile::from_masses(&[0.5, 0.5]).unwrap(), 32).unwrap();
    let block = |u: f64, v: f64| {
        let part = |a: f64, w: f64| ((w - a) / 0.5).clamp(0.0, 1.0);
        0.5 * part(0.0, u) * part(0.0, v) + 0.5 * part(0.5, u) * part(0.5, v)
    };
    assert!((two.at(16, 16) - 0.5).abs() < 1e-12);
    for i in 0..=32 {
        for j in 0..=32 {
            let (u, v) = (i as f64 / 32.0, j as f64 / 32.0);
            assert!((two.at(i, j) - block(u, v)).abs() < 1e-12);
        }
    }
}

#[test]
fn distance_examples() {
    let us: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
    let g = CopulaSpec::Gaussian { rho: 0.3 };
    assert_eq!(d1_distance(&g, &g, &us).unwrap(), 0.0);
    for &u in &[0.1, 0.3, 0.5, 0.8] {
        let d = d1_distance(&CopulaSpec::Comonotone, &CopulaSpec::Independence, &[u]).unwrap();
        assert!((d - 2.0 * u * (1.0 - u)).abs() < 1e-12);
    }
    for n in [1u32, 2, 5, 16, 64] {
        let s = CopulaSpec::ShuffleMod { n };
        // ∂₁ is an indicator, so the section distance is 2u(1−u) for every n.
        let d = d1_distance(&s, &CopulaSpec::Independence, &[0.5]).unwrap();
        assert!((d - 0.5).abs() < 1e-9, "n={n}: {d}");
        // C(u,v) = ∫₀ᵘ 1{frac(nx) ≤ v} dx summed stripe by stripe.
        let m = 256;
        let sup = sup_distance(&s, &CopulaSpec::Independence, m).unwrap();
        let nf = n as f64;
        let mut brute: f64 = 0.0;
        for i in 0..=m {
            for j in 0..=m {
                let (u, v) = (i as f64 / m as f64, j as f64 / m as f64);
                let full = (nf * u).floor();
                let c = full * v / nf + ((nf * u - full) / nf).min(v / nf);
                brute = brute.max((c - u * v).abs());
            }
        }
        assert!((sup - brute).abs() < 1e-12, "n={n}: {sup} vs {brute}");
        assert!(sup <= 1.0 / n as f64 + 1e-9);
    }
    assert_eq!(sup_distance(&CopulaSpec::Independence, &CopulaSpec::Independence, 16).unwrap(), 0.0);
    let s = sup_distance(&CopulaSpec::Comonotone, &CopulaSpec::Independence, 64).unwrap();
    assert!((s - 0.25).abs() < 1e-15);
}

#[test]
fn checkerboard_examples() {
    for m in [1, 3, 8, 50] {
        let c = checkerboard(&CopulaSpec::Independence, m).unwrap();
        assert!(c.sup_deviation(&CopulaGrid::independence(m)).unwrap() < 1e-15);
    }
    assert_eq!(checkerboard(&CopulaSpec::Comonotone, 2).unwrap().cdf(0.5, 0.5), 0.5);
    let g = CopulaSpec::Gaussian { rho: 0.5 };
    let us: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
    let d: Vec<f64> = [8, 32, 128]
        .iter()
        .map(|&m| d1_distance(&CopulaSpec::grid(checkerboard(&g, m).unwrap()), &g, &us).unwrap())
        .collect();
    assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
}

#[test]
fn si_examples() {
    assert!(is_si(&CopulaSpec::Gaussian { rho: 0.5 }, 64).unwrap().holds);
    assert!(is_si(&CopulaSpec::Independence, 64).unwrap().holds);
    assert!(!is_si(&CopulaSpec::ShuffleMod { n: 2 }, 64).unwrap().holds);
}

// -------------------------------------------------------------- measures

#[test]
fn xi_from_product_examples() {
    let id = RangeProfile::identity();
    assert!(xi_from_product(&CopulaGrid::independence(64), &id).unwrap().value.abs() < 1e-12);
    let m = checkerboard(&CopulaSpec::Comonotone, 64).unwrap();
    assert!((xi_from_product(&m, &id).unwrap().value - 1.0).abs() < 1e-12);
    let g = checkerboard(&CopulaSpec::Gaussian { rho: 0.25 }, 256).unwrap();
    let r = xi_from_product(&g, &id).unwrap();
    let closed = 3.0 / PI * 0.625f64.asin() - 0.5;
    assert!((r.value - closed).abs() < 1e-5, "{} vs {closed}", r.value);
    assert!((closed - 0.1447).abs() < 1e-4);
    assert_eq!((r.a, r.b), (6.0, 2.0));
}

#[test]
fn xi_gaussian_examples() {
    let bi = |rho: f64| SigmaPartition::from_rows(2, &[1.0, rho, rho, 1.0], 1).unwrap();
    assert_eq!(xi_gaussian(&bi(0.0)).unwrap(), 0.0);
    assert_eq!(xi_gaussian(&bi(1.0)).unwrap(), 1.0);
    assert_eq!(xi_gaussian(&bi(-1.0)).unwrap(), 1.0);
    let eq = SigmaPartition::equicorrelated(2, 0.5).unwrap();
    assert!((gaussian_r2(&eq).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    let xi = xi_gaussian(&eq).unwrap();
    assert!((xi - 0.19684).abs() < 1e-5);
    let spec = EllipticalSpec::centered(eq, Radial::Normal).unwrap();
    let data = sample_elliptical(&spec, 100_000, 3).unwrap();
    let est = xi_n_knn(&data.columns(0, 2).into_owned(), &column(&data, 2)).unwrap();
    assert!((est - xi).abs() < 0.02, "{est} vs {xi}");
    assert!(xi_gaussian(&SigmaPartition::from_rows(2, &[1.0, 0.0, 0.0, 0.0], 1).unwrap()).is_err());
}

#[test]
fn equicorrelated_r_examples() {
    for p in [1, 2, 4, 10, 100] {
        assert!((equicorrelated_r(p, 1.0).unwrap() - 1.0).abs() < 1e-15);
        if p > 1 {
            assert!((equicorrelated_r(p, -1.0 / p as f64).unwrap().abs() - 1.0).abs() < 1e-12);
        }
        assert!(equicorrelated_r(p, -1.0 / p as f64 - 0.01).is_err());
    }
    assert!((equicorrelated_r(2, 0.5).unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
}

#[test]
fn t_chain_examples() {
    for x in [0.0, 0.3, 1.0] {
        assert_eq!(t_chain(&[x], &[0.0]).unwrap().value, x);
    }
    assert_eq!(t_chain(&[1.0, 1.0, 1.0], &[0.0, 0.4, 0.7]).unwrap().value, 1.0);
    assert_eq!(t_chain(&[0.2, 0.5], &[0.2, 0.5]).unwrap().value, 0.0);
    assert!(t_chain(&[1.0, 1.0], &[1.0, 1.0]).is_err());
}

#[test]
fn t_gaussian_4d_examples() {
    for ry in [-0.999, -0.99, -0.9, -0.75, -0.5, 0.0, 0.5, 0.9] {
        assert!(t_gaussian_4d(0.5, 0.0, ry).unwrap().abs() < 1e-10);
    }
    assert!(t_gaussian_4d(0.5, 0.0, 0.0).unwrap().abs() < 1e-15);
    let closed = t_gaussian_4d(0.5, 0.5, 0.9).unwrap();
    let s = SigmaPartition::four_dim(0.5, 0.5, 0.9).unwrap();
    let spec = EllipticalSpec::centered(s, Radial::Normal).unwrap();
    let data = sample_elliptical(&spec, 100_000, 5).unwrap();
    let est = t_n(&data.columns(0, 2).into_owned(), &data.columns(2, 2).into_owned()).unwrap();
    assert!((est.value - closed).abs() < 0.03, "{} vs {closed}", est.value);
    assert!(t_gaussian_4d(0.5, 0.9, 0.0).is_err());
}

#[test]
fn lambda_examples() {
    let (x, _) = normal_pair(10_000, 0.0, 1);
    assert_eq!(lambda_population(MarkovPair::Sample { y: &x, y_prime: &x }).unwrap(), 1.0);
    let (a, b) = normal_pair(100_000, 0.0, 2);
    assert!(lambda_population(MarkovPair::Sample { y: &a, y_prime: &b }).unwrap().abs() < 0.02);
    for rho in [0.0, 0.3, -0.6, 0.9] {
        let l = lambda_population(MarkovPair::Moments { variance: 1.0, covariance: rho * rho }).unwrap();
        assert!((l - rho * rho).abs() < 1e-15);
    }
    assert!(lambda_population(MarkovPair::Moments { variance: 0.0, covariance: 0.0 }).is_err());
}

#[test]
fn classification_examples() {
    let indep = SigmaPartition::four_dim(0.5, 0.0, 0.3).unwrap();
    assert_eq!(elliptical_extremal_classify(&indep, true).unwrap(), Extremal::TZero);
    assert_eq!(elliptical_extremal_classify(&indep, false).unwrap(), Extremal::Interior);
    let ones = SigmaPartition::from_rows(3, &[1.0; 9], 2).unwrap();
    assert_eq!(elliptical_extremal_classify(&ones, true).unwrap(), Extremal::TOne);
}

// ---------------------------------------------------------------- models

#[test]
fn sample_elliptical_examples() {
    let n = 20_000;
    let bound = 4.0 / (n as f64).sqrt();
    let id = SigmaPartition::from_rows(2, &[1.0, 0.0, 0.0, 1.0], 1).unwrap();
    let data = sample_elliptical(&EllipticalSpec::centered(id.clone(), Radial::Normal).unwrap(), n, 9).unwrap();
    let (x, y) = (column(&data, 0), column(&data, 1));
    assert!((x.iter().sum::<f64>() / n as f64).abs() < bound);
    assert!((y.iter().sum::<f64>() / n as f64).abs() < bound);
    assert!(pearson(&x, &y).unwrap().abs() < bound);

    let rank1 = SigmaPartition::from_rows(2, &[1.0, 1.0, 1.0, 1.0], 1).unwrap();
    let d = sample_elliptical(&EllipticalSpec::centered(rank1, Radial::Normal).unwrap(), 1000, 2).unwrap();
    assert!((0..1000).all(|i| d[(i, 1)] - d[(i, 0)] == 0.0));

    let t = sample_elliptical(&EllipticalSpec::centered(id, Radial::StudentT { nu: 200.0 }).unwrap(), 10_000, 4).unwrap();
    assert!(ks_distance(&column(&t, 0), norm_cdf) < 0.02);
}

#[test]
fn conditional_examples() {
    let s = SigmaPartition::from_rows(3, &[1.0, 0.3, 0.5, 0.3, 1.0, 0.2, 0.5, 0.2, 1.0], 2).unwrap();
    let normal = EllipticalSpec::centered(s.clone(), Radial::Normal).unwrap();
    let law = conditional_elliptical(&normal, &[0.7, -1.2]).unwrap();
    for r in [0.1, 0.5, 1.0, 2.0, 3.5] {
        assert!((law.radial_cdf(r) - (2.0 * norm_cdf(r) - 1.0)).abs() < 1e-6);
    }
    let nu = 5.0;
    let student = EllipticalSpec::centered(s, Radial::StudentT { nu }).unwrap();
    let x = [0.7, -1.2];
    let law = conditional_elliptical(&student, &x).unwrap();
    let scale = ((nu + law.q_x) / (nu + 2.0)).sqrt();
    for r in [0.1, 0.5, 1.0, 2.0, 3.5] {
        let oracle = 2.0 * ximarkov_core::special::t_cdf(r / scale, nu + 2.0) - 1.0;
        assert!((law.radial_cdf(r) - oracle).abs() < 1e-5);
    }
    // At x = 0 the conditional radial is that of a (p+1)-to-1 projection.
    let at0 = conditional_elliptical(&student, &[0.0, 0.0]).unwrap();
    assert_eq!(at0.q_x, 0.0);
    for r in [0.5, 2.0] {
        let oracle = 2.0 * ximarkov_core::special::t_cdf(r * ((nu + 2.0) / nu).sqrt(), nu + 2.0) - 1.0;
        assert!((at0.radial_cdf(r) - oracle).abs() < 1e-5);
    }
}

#[test]
fn sample_l1_examples() {
    let ones = L1Spec::new(4, Arc::new(PointMass::new(1.0).unwrap())).unwrap();
    let x = sample_l1(&ones, 1000, 1).unwrap();
    assert!((0..1000).all(|i| (x.row(i).sum() - 1.0).abs() < 1e-12));

    let d = 3;
    let spec = L1Spec::new(d, Arc::new(GammaRadial::erlang(d).unwrap())).unwrap();
    let x = sample_l1(&spec, 10_000, 2).unwrap();
    for j in 0..d {
        assert!(ks_distance(&column(&x, j), |v| 1.0 - (-v.max(0.0)).exp()) < 0.02);
    }
    assert!(xi_n(&column(&x, 0), &column(&x, 1), 3).unwrap().abs() < 0.05);

    let two = L1Spec::new(2, Arc::new(PointMass::new(1.0).unwrap())).unwrap();
    let x = sample_l1(&two, 10_000, 4).unwrap();
    assert!((0..10_000).all(|i| (x[(i, 1)] - (1.0 - x[(i, 0)])).abs() < 1e-12));
    assert!(xi_n(&column(&x, 0), &column(&x, 1), 5).unwrap() > 0.99);
}

#[test]
fn williamson_examples() {
    let xs: Vec<f64> = (0..=50).map(|k| k as f64 * 0.1).collect();
    for d in [2, 3, 5] {
        let g = williamson_generator(&GammaRadial::erlang(d).unwrap(), d, &xs).unwrap();
        assert!((g.values[0] - 1.0).abs() < 1e-10);
        for (x, v) in xs.iter().zip(&g.values) {
            assert!((v - (-x).exp()).abs() < 1e-6);
        }
    }
    let tight = UniformRadial::around(1.0, 1e-4).unwrap();
    let g = williamson_generator(&tight, 2, &xs).unwrap();
    for (x, v) in xs.iter().zip(&g.values) {
        assert!((v - (1.0 - x).max(0.0)).abs() < 1e-4);
    }
}

#[test]
fn additive_error_examples() {
    let xi = |s: f64| xi_gaussian(additive_error_spec(s).unwrap().sigma()).unwrap();
    assert_eq!(xi(0.0), 1.0);
    assert!(xi(1e4) < 1e-7);
    let closed = 3.0 / PI * 0.75f64.asin() - 0.5;
    assert!((xi(1.0) - closed).abs() < 1e-12);
    assert!((additive_error_rho(1.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    let data = sample_elliptical(&additive_error_spec(1.0).unwrap(), 100_000, 6).unwrap();
    assert!((xi_n(&column(&data, 0), &column(&data, 1), 7).unwrap() - closed).abs() < 0.02);
}

// ------------------------------------------------------------ estimators

#[test]
fn xi_n_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x: Vec<f64> = (0..10_000).map(|_| rng.random()).collect();
    let y: Vec<f64> = x.iter().map(|v| v * v * v + v).collect();
    assert!(xi_n(&x, &y, 1).unwrap() > 0.99);
    let z: Vec<f64> = (0..10_000).map(|_| rng.random()).collect();
    assert!(xi_n(&x, &z, 2).unwrap().abs() < 0.05);
    let (a, b) = normal_pair(100_000, 0.5, 3);
    assert!((xi_n(&a, &b, 4).unwrap() - 0.1447).abs() < 0.02);
    assert!(xi_n(&x, &vec![1.0; x.len()], 0).is_err());
}

#[test]
fn xi_n_knn_examples() {
    let (a, b) = normal_pair(10_000, 0.5, 8);
    let knn = xi_n_knn(&DMatrix::from_column_slice(a.len(), 1, &a), &b).unwrap();
    assert!((knn - xi_n(&a, &b, 1).unwrap()).abs() < 0.03);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x = DMatrix::from_fn(10_000, 3, |_, _| rng.sample::<f64, _>(StandardNormal));
    let y: Vec<f64> = (0..10_000).map(|i| x.row(i).sum()).collect();
    assert!(xi_n_knn(&x, &y).unwrap() > 0.95);
}

#[test]
fn t_n_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = DMatrix::from_fn(10_000, 2, |_, _| rng.sample::<f64, _>(StandardNormal));
    let y1: Vec<f64> = x.iter().map(|v| v.sin() + v).take(10_000).collect();
    let t = t_n(&x, &DMatrix::from_column_slice(10_000, 1, &y1)).unwrap();
    assert_eq!(t.value, xi_n_knn(&x, &y1).unwrap().clamp(0.0, 1.0));
    assert!(t_n(&x, &x).unwrap().value > 0.95);
    let other = DMatrix::from_fn(10_000, 2, |_, _| rng.sample::<f64, _>(StandardNormal));
    assert!(t_n(&x, &other).unwrap().value < 0.1);
}

#[test]
fn lambda_n_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let x = DMatrix::from_fn(10_000, 2, |_, _| rng.sample::<f64, _>(StandardNormal));
    let y: Vec<f64> = (0..10_000).map(|i| x[(i, 0)] * x[(i, 1)] + x[(i, 0)]).collect();
    assert!(lambda_n(&x, &y).unwrap().value > 0.95);
    let z: Vec<f64> = (0..10_000).map(|_| rng.sample(StandardNormal)).collect();
    assert!(lambda_n(&x, &z).unwrap().value.abs() < 0.05);
    let (a, b) = normal_pair(100_000, 0.6, 5);
    let l = lambda_n(&DMatrix::from_column_slice(a.len(), 1, &a), &b).unwrap();
    assert!((l.value - 0.36).abs() < 0.03);
}
