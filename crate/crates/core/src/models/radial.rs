//! Laws of the nonnegative radial part `R`.

use crate::error::{invalid, Result};
use rand::RngCore;
use rand_distr::{ChiSquared, Distribution, Gamma, StandardNormal};
use statrs::function::beta::beta_reg;
use statrs::function::gamma::{gamma_lr, ln_gamma};
use std::f64::consts::LN_2;
use std::fmt::Debug;

/// A law on `[0, ∞)`.
pub trait RadialLaw: Send + Sync + Debug {
    fn cdf(&self, r: f64) -> f64;

    /// Log-density; `-∞` off the support. Only meaningful when
    /// [`is_continuous`](Self::is_continuous) holds.
    fn ln_pdf(&self, r: f64) -> f64;

    fn sample(&self, rng: &mut dyn RngCore) -> f64;

    fn is_continuous(&self) -> bool {
        true
    }

    /// Closed interval containing the support.
    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }

    fn pdf(&self, r: f64) -> f64 {
        self.ln_pdf(r).exp()
    }
}

/// `R = ‖Z‖` for `Z` standard normal in dimension `k` (the normal family).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiRadial {
    k: usize,
}

impl ChiRadial {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("chi radial needs k >= 1"));
        }
        Ok(Self { k })
    }
}

impl RadialLaw for ChiRadial {
    fn cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else {
            gamma_lr(self.k as f64 / 2.0, r * r / 2.0)
        }
    }

    fn ln_pdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let h = self.k as f64 / 2.0;
        (self.k as f64 - 1.0) * r.ln() - r * r / 2.0 - (h - 1.0) * LN_2 - ln_gamma(h)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        let s: f64 = (0..self.k)
            .map(|_| {
                let z: f64 = StandardNormal.sample(rng);
                z * z
            })
            .sum();
        s.sqrt()
    }
}

/// Radial part of the `k`-dimensional Student-t law: `R²/k ~ F(k, ν)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudentRadial {
    k: usize,
    nu: f64,
}

impl StudentRadial {
    pub fn new(k: usize, nu: f64) -> Result<Self> {
        if k == 0 {
            return Err(invalid("Student-t radial needs k >= 1"));
        }
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(invalid(format!("degrees of freedom ν = {nu} must be positive")));
        }
        Ok(Self { k, nu })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

impl RadialLaw for StudentRadial {
    fn cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let s = r * r;
        beta_reg(self.k as f64 / 2.0, self.nu / 2.0, s / (s + self.nu))
    }

    fn ln_pdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let (k, nu) = (self.k as f64, self.nu);
        LN_2 + ln_gamma((k + nu) / 2.0) - ln_gamma(k / 2.0) - ln_gamma(nu / 2.0) - k / 2.0 * nu.ln()
            + (k - 1.0) * r.ln()
            - (k + nu) / 2.0 * (r * r / nu).ln_1p()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        let chi = ChiRadial { k: self.k }.sample(rng);
        let w: f64 = ChiSquared::new(self.nu).expect("validated ν").sample(rng);
        chi / (w / self.nu).sqrt()
    }
}

/// Gamma law with integer or real shape; `shape = d`, `rate = 1` is Erlang(d, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRadial {
    shape: f64,
    rate: f64,
}

impl GammaRadial {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && rate > 0.0) || !shape.is_finite() || !rate.is_finite() {
            return Err(invalid(format!("gamma radial needs positive shape and rate, got ({shape}, {rate})")));
        }
        Ok(Self { shape, rate })
    }

    pub fn erlang(d: usize) -> Result<Self> {
        Self::new(d as f64, 1.0)
    }
}

impl RadialLaw for GammaRadial {
    fn cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            0.0
        } else {
            gamma_lr(self.shape, self.rate * r)
        }
    }

    fn ln_pdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.shape * self.rate.ln() + (self.shape - 1.0) * r.ln() - self.rate * r - ln_gamma(self.shape)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        Gamma::new(self.shape, 1.0 / self.rate).expect("validated").sample(rng)
    }
}

/// Uniform law on `[lo, hi]`; a narrow interval around `1` stands in for `R ≡ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformRadial {
    lo: f64,
    hi: f64,
}

impl UniformRadial {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0 && hi > lo) || !hi.is_finite() {
            return Err(invalid(format!("uniform radial needs 0 <= lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// Uniform on `[r − δ, r + δ]`.
    pub fn around(r: f64, delta: f64) -> Result<Self> {
        Self::new(r - delta, r + delta)
    }
}

impl RadialLaw for UniformRadial {
    fn cdf(&self, r: f64) -> f64 {
        ((r - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0)
    }

    fn ln_pdf(&self, r: f64) -> f64 {
        if r < self.lo || r > self.hi {
            f64::NEG_INFINITY
        } else {
            -(self.hi - self.lo).ln()
        }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        self.lo + (self.hi - self.lo) * u
    }

    fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

/// `R ≡ r`. Usable for sampling only; it has no density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMass {
    r: f64,
}

impl PointMass {
    pub fn new(r: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(invalid(format!("point mass at {r} must be nonnegative")));
        }
        Ok(Self { r })
    }
}

impl RadialLaw for PointMass {
    fn cdf(&self, r: f64) -> f64 {
        if r >= self.r {
            1.0
        } else {
            0.0
        }
    }

    fn ln_pdf(&self, _r: f64) -> f64 {
        f64::NEG_INFINITY
    }

    fn sample(&self, _rng: &mut dyn RngCore) -> f64 {
        self.r
    }

    fn is_continuous(&self) -> bool {
        false
    }

    fn support(&self) -> (f64, f64) {
        (self.r, self.r)
    }
}
