use super::RadialLaw;
use crate::error::{invalid, Error, Result};
use crate::quadrature::{adaptive, adaptive_semi_infinite};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use std::sync::Arc;

/// ℓ1-norm symmetric law `R · S_d`, `S_d` uniform on the unit simplex.
#[derive(Debug, Clone)]
pub struct L1Spec {
    d: usize,
    radial: Arc<dyn RadialLaw>,
}

impl L1Spec {
    pub fn new(d: usize, radial: Arc<dyn RadialLaw>) -> Result<Self> {
        if d == 0 {
            return Err(invalid("dimension must be positive"));
        }
        let at0 = radial.cdf(0.0);
        if at0 > 1e-12 {
            return Err(Error::InvalidRadial(format!("F_R(0) = {at0}, expected 0")));
        }
        Ok(Self { d, radial })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn radial(&self) -> &Arc<dyn RadialLaw> {
        &self.radial
    }
}

/// `n` rows `R · E / ‖E‖₁` with `E` i.i.d. unit exponentials.
pub fn sample_l1(spec: &L1Spec, n: usize, seed: u64) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(invalid("sample size must be positive"));
    }
    let d = spec.d;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = DMatrix::zeros(n, d);
    let mut e = vec![0.0; d];
    for i in 0..n {
        for v in e.iter_mut() {
            *v = Exp1.sample(&mut rng);
        }
        let r = spec.radial.sample(&mut rng);
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidRadial(format!("sampler returned {r}")));
        }
        let total: f64 = e.iter().sum();
        for (j, v) in e.iter().enumerate() {
            out[(i, j)] = r * v / total;
        }
    }
    Ok(out)
}

/// Generator values with shape diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub x: Vec<f64>,
    pub values: Vec<f64>,
    pub convex: bool,
    pub nonincreasing: bool,
}

const SHAPE_TOL: f64 = 1e-9;

/// `φ(x) = ∫_(x,∞) (1 − x/t)^{d−1} dF_R(t)` on an increasing grid.
pub fn williamson_generator(radial: &dyn RadialLaw, d: usize, x_grid: &[f64]) -> Result<Generator> {
    if d == 0 {
        return Err(invalid("dimension must be positive"));
    }
    if !radial.is_continuous() {
        return Err(Error::InvalidRadial("the generator integral needs a continuous F_R".into()));
    }
    if x_grid.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(invalid("grid points must be finite and nonnegative"));
    }
    if x_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("grid must be strictly increasing"));
    }
    let (lo, hi) = radial.support();
    let values: Vec<f64> = x_grid
        .iter()
        .map(|&x| {
            if x == 0.0 {
                return 1.0 - radial.cdf(0.0);
            }
            let from = x.max(lo);
            if from >= hi {
                return 0.0;
            }
            let f = |t: f64| {
                if t <= x {
                    return 0.0;
                }
                let w = (1.0 - x / t).powi(d as i32 - 1);
                if w == 0.0 {
                    0.0
                } else {
                    w * radial.pdf(t)
                }
            };
            let v = if hi.is_finite() {
                let edges: Vec<f64> = (0..=8).map(|k| from + (hi - from) * k as f64 / 8.0).collect();
                adaptive(f, &edges, 1e-14, 1e-12).value
            } else {
                adaptive_semi_infinite(f, from, 1e-14, 1e-12).value
            };
            v.clamp(0.0, 1.0)
        })
        .collect();
    let nonincreasing = values.windows(2).all(|w| w[1] <= w[0] + SHAPE_TOL);
    let convex = x_grid
        .windows(3)
        .zip(values.windows(3))
        .all(|(x, v)| {
            let s1 = (v[1] - v[0]) / (x[1] - x[0]);
            let s2 = (v[2] - v[1]) / (x[2] - x[1]);
            s2 >= s1 - SHAPE_TOL / (x[1] - x[0]).min(x[2] - x[1])
        });
    Ok(Generator {
        x: x_grid.to_vec(),
        values,
        convex,
        nonincreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{GammaRadial, PointMass, UniformRadial};

    #[test]
    fn erlang_gives_exponential_generator() {
        let xs: Vec<f64> = (0..=50).map(|k| k as f64 * 0.1).collect();
        for d in [2, 3, 5] {
            let g = williamson_generator(&GammaRadial::erlang(d).unwrap(), d, &xs).unwrap();
            for (x, v) in xs.iter().zip(&g.values) {
                assert!((v - (-x).exp()).abs() < 1e-9, "d={d} x={x}");
            }
            assert!(g.convex && g.nonincreasing);
            assert_eq!(g.values[0], 1.0);
        }
    }

    #[test]
    fn tight_uniform_approximates_unit_radial() {
        let xs: Vec<f64> = (0..=30).map(|k| k as f64 * 0.05).collect();
        let law = UniformRadial::around(1.0, 1e-4).unwrap();
        let g = williamson_generator(&law, 2, &xs).unwrap();
        for (x, v) in xs.iter().zip(&g.values) {
            assert!((v - (1.0 - x).max(0.0)).abs() < 1e-4, "x={x}: {v}");
        }
        assert!(g.nonincreasing && g.convex);
    }

    #[test]
    fn rejects_atoms_and_bad_grids() {
        let pm = PointMass::new(1.0).unwrap();
        assert!(matches!(williamson_generator(&pm, 2, &[0.0, 1.0]), Err(Error::InvalidRadial(_))));
        let e = GammaRadial::erlang(2).unwrap();
        assert!(williamson_generator(&e, 2, &[1.0, 0.5]).is_err());
        assert!(williamson_generator(&e, 2, &[-1.0]).is_err());
    }

    #[test]
    fn simplex_rows() {
        let spec = L1Spec::new(4, Arc::new(PointMass::new(1.0).unwrap())).unwrap();
        let x = sample_l1(&spec, 200, 5).unwrap();
        for i in 0..200 {
            let s: f64 = x.row(i).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
            assert!(x.row(i).iter().all(|v| *v >= 0.0));
        }
        let two = L1Spec::new(2, Arc::new(PointMass::new(1.0).unwrap())).unwrap();
        let y = sample_l1(&two, 50, 1).unwrap();
        for i in 0..50 {
            assert!((y[(i, 1)] - (1.0 - y[(i, 0)])).abs() < 1e-12);
        }
    }
}
