//! Elliptical and ℓ1-norm symmetric families, the additive-error model and
//! the Archimedean generator of an ℓ1-norm symmetric law.

mod conditional;
mod l1;
pub mod radial;

pub use conditional::{conditional_elliptical, ConditionalLaw};
pub use l1::{sample_l1, williamson_generator, Generator, L1Spec};
pub use radial::{ChiRadial, GammaRadial, PointMass, RadialLaw, StudentRadial, UniformRadial};

use crate::error::{invalid, Error, Result};
use crate::linalg::{full_rank_factor, rank_symmetric};
use crate::measures::SigmaPartition;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use std::sync::Arc;

/// Radial specification of an elliptical law.
#[derive(Debug, Clone)]
pub enum Radial {
    /// `R² ~ χ²_k` with `k = rank(Σ)`.
    Normal,
    /// Multivariate Student-t with `ν` degrees of freedom.
    StudentT { nu: f64 },
    /// Any radial law on `[0, ∞)` with `F_R(0) = 0`.
    Custom(Arc<dyn RadialLaw>),
}

/// `μ + R·Aᵀ·U^(k)` with `AᵀA = Σ` and `U^(k)` uniform on the unit sphere.
#[derive(Debug, Clone)]
pub struct EllipticalSpec {
    mu: Vec<f64>,
    sigma: SigmaPartition,
    radial: Radial,
}

impl EllipticalSpec {
    pub fn new(mu: Vec<f64>, sigma: SigmaPartition, radial: Radial) -> Result<Self> {
        if mu.len() != sigma.dim() {
            return Err(Error::Dimension(format!(
                "location has length {}, Σ is {}x{}",
                mu.len(),
                sigma.dim(),
                sigma.dim()
            )));
        }
        if mu.iter().any(|m| !m.is_finite()) {
            return Err(invalid("location must be finite"));
        }
        match &radial {
            Radial::Normal => {}
            Radial::StudentT { nu } => {
                if !(*nu > 0.0) || !nu.is_finite() {
                    return Err(invalid(format!("degrees of freedom ν = {nu} must be positive")));
                }
            }
            Radial::Custom(law) => {
                let at0 = law.cdf(0.0);
                if at0 > 1e-12 {
                    return Err(Error::InvalidRadial(format!("F_R(0) = {at0}, expected 0")));
                }
            }
        }
        Ok(Self { mu, sigma, radial })
    }

    pub fn centered(sigma: SigmaPartition, radial: Radial) -> Result<Self> {
        Self::new(vec![0.0; sigma.dim()], sigma, radial)
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn sigma(&self) -> &SigmaPartition {
        &self.sigma
    }

    pub fn radial(&self) -> &Radial {
        &self.radial
    }

    pub fn dim(&self) -> usize {
        self.sigma.dim()
    }

    pub fn is_normal(&self) -> bool {
        matches!(self.radial, Radial::Normal)
    }

    /// Law of `R` for the representation with `k = rank(Σ)`.
    pub fn radial_law(&self) -> Result<Arc<dyn RadialLaw>> {
        let k = rank_symmetric(self.sigma.full());
        Ok(match &self.radial {
            Radial::Normal => Arc::new(ChiRadial::new(k)?),
            Radial::StudentT { nu } => Arc::new(StudentRadial::new(k, *nu)?),
            Radial::Custom(law) => Arc::clone(law),
        })
    }
}

/// `n` i.i.d. rows of the elliptical law, deterministic given `seed`.
pub fn sample_elliptical(spec: &EllipticalSpec, n: usize, seed: u64) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(invalid("sample size must be positive"));
    }
    let d = spec.dim();
    // k × d factor; rows of the output are μ + Aᵀw.
    let a = full_rank_factor(spec.sigma.full());
    let k = a.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chi = match spec.radial {
        Radial::StudentT { nu } => Some((ChiSquared::new(nu).map_err(|e| invalid(e.to_string()))?, nu)),
        _ => None,
    };
    let mut out = DMatrix::zeros(n, d);
    let mut w = DVector::zeros(k);
    for i in 0..n {
        for j in 0..k {
            w[j] = StandardNormal.sample(&mut rng);
        }
        match &spec.radial {
            Radial::Normal => {}
            Radial::StudentT { .. } => {
                let (dist, nu) = chi.as_ref().expect("set for Student-t");
                let s: f64 = dist.sample(&mut rng);
                w /= (s / nu).sqrt();
            }
            Radial::Custom(law) => {
                let r = law.sample(&mut rng);
                if !(r >= 0.0) || !r.is_finite() {
                    return Err(Error::InvalidRadial(format!("sampler returned {r}")));
                }
                let norm = w.norm();
                if norm > 0.0 {
                    w *= r / norm;
                }
            }
        }
        for c in 0..d {
            let mut v = spec.mu[c];
            for j in 0..k {
                v += a[(j, c)] * w[j];
            }
            out[(i, c)] = v;
        }
    }
    Ok(out)
}

/// Correlation `1/√(1+σ²)` of `(X, X + σε)`.
pub fn additive_error_rho(sigma: f64) -> Result<f64> {
    if !(sigma >= 0.0) {
        return Err(invalid(format!("noise scale σ = {sigma} must be nonnegative")));
    }
    Ok(1.0 / (1.0 + sigma * sigma).sqrt())
}

/// Standardized bivariate normal law of `(X, Y)` with `Y = X + σε`.
pub fn additive_error_spec(sigma: f64) -> Result<EllipticalSpec> {
    let rho = additive_error_rho(sigma)?;
    let s = SigmaPartition::from_rows(2, &[1.0, rho, rho, 1.0], 1)?;
    EllipticalSpec::centered(s, Radial::Normal)
}
