use super::{EllipticalSpec, RadialLaw};
use crate::error::{invalid, Error, Result};
use crate::linalg::rank_symmetric;
use crate::quadrature::{adaptive, adaptive_semi_infinite};
use nalgebra::DVector;
use std::sync::Arc;

const ABS_TOL: f64 = 1e-14;
const REL_TOL: f64 = 1e-12;

/// Law of `Y` given `X = x` for an elliptical `(X, Y)` with scalar `Y`:
/// `Y | x  =  μ_x + √σ* · R_{q(x)} · U`, `U` uniform on `{−1, 1}`.
#[derive(Debug, Clone)]
pub struct ConditionalLaw {
    /// Conditional location `μ_Y + Σ21 Σ11⁻¹ (x − μ_X)`.
    pub mu_x: f64,
    /// Conditional scale `Σ22 − Σ21 Σ11⁻¹ Σ12`.
    pub sigma_star: f64,
    /// `q(x) = (x − μ_X)ᵀ Σ11⁻¹ (x − μ_X)`.
    pub q_x: f64,
    radial: Option<ConditionalRadial>,
}

/// `F_{R_a}(r) = ∫₀^r h(z) dz / ∫₀^∞ h(z) dz`, with
/// `h(z) = (z² + a²)^{−p/2} f_R(√(z² + a²))` after the substitution
/// `z² = s² − a²`.
#[derive(Debug, Clone)]
struct ConditionalRadial {
    law: Arc<dyn RadialLaw>,
    p: f64,
    a2: f64,
    /// Log-scale offset keeping `h` near unit size.
    shift: f64,
    /// `z`-interval carrying the mass.
    z_lo: f64,
    z_hi: f64,
    /// Width of the region where `h` is probed for its peak.
    span: f64,
    total: f64,
}

impl ConditionalRadial {
    fn new(law: Arc<dyn RadialLaw>, p: usize, a2: f64) -> Result<Self> {
        let (lo, hi) = law.support();
        let a = a2.sqrt();
        if a >= hi {
            return Err(Error::EmptyConditioning(a2));
        }
        let z_lo = if lo > a { (lo * lo - a2).sqrt() } else { 0.0 };
        let z_hi = if hi.is_finite() { (hi * hi - a2).sqrt() } else { f64::INFINITY };
        let mut me = Self {
            law,
            p: p as f64,
            a2,
            shift: 0.0,
            z_lo,
            z_hi,
            span: if z_hi.is_finite() { z_hi - z_lo } else { 1.0 + a },
            total: 0.0,
        };
        // Largest log-integrand over a spread of probe points.
        let span = me.span;
        let shift = (0..=40)
            .map(|j| z_lo + span * (j as f64 / 40.0).powi(2).max(1e-6))
            .filter(|z| *z < z_hi)
            .map(|z| me.ln_h(z))
            .fold(f64::NEG_INFINITY, f64::max);
        if !shift.is_finite() {
            return Err(Error::EmptyConditioning(a2));
        }
        me.shift = shift;
        let total = me.integrate_to(f64::INFINITY);
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::EmptyConditioning(a2));
        }
        me.total = total;
        Ok(me)
    }

    fn ln_h(&self, z: f64) -> f64 {
        let s2 = z * z + self.a2;
        -0.5 * self.p * s2.ln() + self.law.ln_pdf(s2.sqrt())
    }

    fn h(&self, z: f64) -> f64 {
        let v = (self.ln_h(z) - self.shift).exp();
        if v.is_finite() {
            v
        } else {
            0.0
        }
    }

    /// `∫₀^r h(z) dz` (unnormalized).
    fn integrate_to(&self, r: f64) -> f64 {
        let upper = r.min(self.z_hi);
        if upper <= self.z_lo {
            return 0.0;
        }
        let f = |z: f64| self.h(z);
        if upper.is_finite() && !self.z_hi.is_finite() && upper > self.z_lo + 4.0 * self.span {
            // Far out the head panels are too coarse; subtract the tail.
            self.total - adaptive_semi_infinite(f, upper, ABS_TOL, REL_TOL).value
        } else if upper.is_finite() {
            let edges: Vec<f64> = (0..=8)
                .map(|k| self.z_lo + (upper - self.z_lo) * k as f64 / 8.0)
                .collect();
            adaptive(f, &edges, ABS_TOL, REL_TOL).value
        } else {
            adaptive_semi_infinite(f, self.z_lo, ABS_TOL, REL_TOL).value
        }
    }

    fn cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if r >= self.z_hi {
            return 1.0;
        }
        (self.integrate_to(r) / self.total).clamp(0.0, 1.0)
    }
}

impl ConditionalLaw {
    /// `F_{R_{q(x)}}(r)`.
    pub fn radial_cdf(&self, r: f64) -> f64 {
        match &self.radial {
            Some(c) => c.cdf(r),
            // Y is an affine function of X: R degenerates at 0.
            None => {
                if r >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `P(Y ≤ y | X = x)`.
    pub fn cdf(&self, y: f64) -> f64 {
        let d = y - self.mu_x;
        if self.radial.is_none() || self.sigma_star <= 0.0 {
            return if d >= 0.0 { 1.0 } else { 0.0 };
        }
        let z = d / self.sigma_star.sqrt();
        let tail = 0.5 * self.radial_cdf(z.abs());
        if z >= 0.0 {
            0.5 + tail
        } else {
            0.5 - tail
        }
    }

    /// Whether `Y` is almost surely determined by `x`.
    pub fn is_degenerate(&self) -> bool {
        self.radial.is_none()
    }
}

/// Conditional law of the last coordinate given the first `p` coordinates.
pub fn conditional_elliptical(spec: &EllipticalSpec, x: &[f64]) -> Result<ConditionalLaw> {
    let sigma = spec.sigma();
    if sigma.q() != 1 {
        return Err(Error::Dimension(format!("q = {} but a scalar response is required", sigma.q())));
    }
    let p = sigma.p();
    if x.len() != p {
        return Err(Error::Dimension(format!("x has length {}, expected {p}", x.len())));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(invalid("conditioning point must be finite"));
    }
    let chol = sigma
        .s11()
        .cholesky()
        .ok_or_else(|| invalid("Σ11 must be positive definite"))?;
    let mu = spec.mu();
    let xt = DVector::from_iterator(p, x.iter().zip(mu).map(|(a, m)| a - m));
    let s12 = sigma.s12();
    let solved_x = chol.solve(&xt);
    let solved_12 = chol.solve(&s12);
    let q_x = xt.dot(&solved_x).max(0.0);
    let mu_x = mu[p] + s12.column(0).dot(&solved_x);
    let s22 = sigma.s22()[(0, 0)];
    let sigma_star = (s22 - s12.column(0).dot(&solved_12.column(0))).max(0.0);
    let full_rank = rank_symmetric(sigma.full()) == p + 1;
    let radial = if full_rank && sigma_star > 1e-12 * s22 {
        Some(ConditionalRadial::new(spec.radial_law()?, p, q_x)?)
    } else {
        None
    };
    Ok(ConditionalLaw {
        mu_x,
        sigma_star,
        q_x,
        radial,
    })
}
