//! Bivariate copulas, their first partial derivatives, Markov products and
//! the distances used in the continuity diagnostics.

mod distance;
mod grid;
mod product;
mod profile;

pub use distance::{d1_distance, d1_distance_with, is_sd, is_si, sup_distance, MonotoneReport};
pub use grid::{CopulaGrid, MASS_TOLERANCE};
pub use product::{
    checkerboard, generalized_markov_product, generalized_markov_product_with, markov_product,
    markov_product_with,
};
pub use profile::RangeProfile;

use crate::error::{invalid, Result};
use crate::special::{bvn_cdf, norm_cdf, norm_ppf};
use std::sync::Arc;

/// A bivariate copula.
#[derive(Debug, Clone, PartialEq)]
pub enum CopulaSpec {
    /// `Π(u,v) = uv`.
    Independence,
    /// `M(u,v) = min(u,v)`.
    Comonotone,
    /// `W(u,v) = max(u+v−1, 0)`.
    Countermonotone,
    Gaussian { rho: f64 },
    Frank { theta: f64 },
    Clayton { theta: f64 },
    /// Copula of `(X, nX mod 1)` for uniform `X`: a shuffle of min with `n`
    /// increasing stripes.
    ShuffleMod { n: u32 },
    Grid(Arc<CopulaGrid>),
}

/// Value of `∂₁C(t, u)`; `one_sided` is set when `t` lies on a line where
/// the derivative jumps and a one-sided difference was used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partial {
    pub value: f64,
    pub one_sided: bool,
}

/// Finite-difference step for families without an analytic partial.
fn fd_step(resolution: usize) -> f64 {
    (1.0 / (4.0 * resolution as f64)).max(1e-5)
}

impl CopulaSpec {
    pub fn grid(grid: CopulaGrid) -> Self {
        CopulaSpec::Grid(Arc::new(grid))
    }

    /// Check that the parameters are admissible.
    pub fn validate(&self) -> Result<()> {
        match *self {
            CopulaSpec::Gaussian { rho } if !(-1.0..=1.0).contains(&rho) => {
                Err(invalid(format!("Gaussian correlation {rho} outside [-1, 1]")))
            }
            CopulaSpec::Frank { theta } if !theta.is_finite() || theta == 0.0 => {
                Err(invalid(format!("Frank parameter {theta} must be finite and nonzero")))
            }
            CopulaSpec::Clayton { theta } if !theta.is_finite() || theta <= 0.0 => {
                Err(invalid(format!("Clayton parameter {theta} must be positive")))
            }
            CopulaSpec::ShuffleMod { n: 0 } => Err(invalid("shuffle stripe count must be >= 1")),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            CopulaSpec::Independence => "independence".into(),
            CopulaSpec::Comonotone => "comonotone".into(),
            CopulaSpec::Countermonotone => "countermonotone".into(),
            CopulaSpec::Gaussian { rho } => format!("gaussian({rho})"),
            CopulaSpec::Frank { theta } => format!("frank({theta})"),
            CopulaSpec::Clayton { theta } => format!("clayton({theta})"),
            CopulaSpec::ShuffleMod { n } => format!("shuffle({n})"),
            CopulaSpec::Grid(g) => format!("grid({})", g.resolution()),
        }
    }

    /// `C(u, v)`.
    pub fn cdf(&self, u: f64, v: f64) -> Result<f64> {
        self.validate()?;
        check_unit("u", u)?;
        check_unit("v", v)?;
        Ok(self.eval(u, v))
    }

    /// `C(u, v)` without validation; arguments are clamped to `[0, 1]`.
    pub(crate) fn eval(&self, u: f64, v: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let v = v.clamp(0.0, 1.0);
        let raw = match *self {
            CopulaSpec::Independence => u * v,
            CopulaSpec::Comonotone => u.min(v),
            CopulaSpec::Countermonotone => (u + v - 1.0).max(0.0),
            CopulaSpec::Gaussian { rho } => {
                if rho >= 1.0 {
                    u.min(v)
                } else if rho <= -1.0 {
                    (u + v - 1.0).max(0.0)
                } else if u == 0.0 || v == 0.0 {
                    0.0
                } else if u == 1.0 {
                    v
                } else if v == 1.0 {
                    u
                } else {
                    bvn_cdf(norm_ppf(u), norm_ppf(v), rho)
                }
            }
            CopulaSpec::Frank { theta } => {
                let num = (-theta * u).exp_m1() * (-theta * v).exp_m1();
                -(num / (-theta).exp_m1()).ln_1p() / theta
            }
            CopulaSpec::Clayton { theta } => {
                if u == 0.0 || v == 0.0 {
                    0.0
                } else {
                    (u.powf(-theta) + v.powf(-theta) - 1.0).powf(-1.0 / theta)
                }
            }
            CopulaSpec::ShuffleMod { n } => {
                let nf = n as f64;
                let s = nf * u;
                let full = s.floor().min(nf);
                let rest = s - full;
                (full * v + rest.min(v)) / nf
            }
            CopulaSpec::Grid(ref g) => g.cdf(u, v),
        };
        // Fréchet–Hoeffding bounds absorb rounding.
        let upper = u.min(v);
        raw.clamp((u + v - 1.0).max(0.0).min(upper), upper)
    }

    /// `∂₁C(t, u)` for `t ∈ (0, 1)`, `u ∈ [0, 1]`.
    pub fn partial1(&self, t: f64, u: f64) -> Result<Partial> {
        self.validate()?;
        if !(t > 0.0 && t < 1.0) {
            return Err(invalid(format!("t = {t} must lie in (0, 1)")));
        }
        check_unit("u", u)?;
        Ok(self.partial_flagged(t, u))
    }

    pub(crate) fn partial_flagged(&self, t: f64, u: f64) -> Partial {
        match *self {
            CopulaSpec::ShuffleMod { n } => {
                let nf = n as f64;
                let k = (nf * t).floor().min(nf - 1.0);
                let lo = k / nf;
                let mid = (k + u) / nf;
                let hi = (k + 1.0) / nf;
                self.piecewise_difference(t, u, &[lo, mid, hi], n as usize)
            }
            CopulaSpec::Grid(ref g) => {
                let m = g.resolution();
                let mf = m as f64;
                let j = ((t * mf).floor() as usize).min(m - 1);
                let lo = j as f64 / mf;
                let hi = (j + 1) as f64 / mf;
                self.piecewise_difference(t, u, &[lo, hi], m)
            }
            _ => Partial {
                value: self.partial_analytic(t, u),
                one_sided: false,
            },
        }
    }

    /// Unchecked `∂₁C(t, u)`.
    #[inline]
    pub(crate) fn d1(&self, t: f64, u: f64) -> f64 {
        match self {
            CopulaSpec::ShuffleMod { .. } | CopulaSpec::Grid(_) => self.partial_flagged(t, u).value,
            _ => self.partial_analytic(t, u),
        }
    }

    fn partial_analytic(&self, t: f64, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return 1.0;
        }
        let v = match *self {
            CopulaSpec::Independence => u,
            CopulaSpec::Comonotone => indicator(t <= u),
            CopulaSpec::Countermonotone => indicator(t >= 1.0 - u),
            CopulaSpec::Gaussian { rho } => {
                if rho >= 1.0 {
                    indicator(t <= u)
                } else if rho <= -1.0 {
                    indicator(t >= 1.0 - u)
                } else {
                    let s = (1.0 - rho * rho).sqrt();
                    norm_cdf((norm_ppf(u) - rho * norm_ppf(t)) / s)
                }
            }
            CopulaSpec::Frank { theta } => {
                let gu = (-theta * u).exp_m1();
                let gt = (-theta * t).exp_m1();
                (-theta * t).exp() * gu / ((-theta).exp_m1() + gt * gu)
            }
            CopulaSpec::Clayton { theta } => {
                (1.0 + t.powf(theta) * (u.powf(-theta) - 1.0)).powf(-(1.0 + theta) / theta)
            }
            CopulaSpec::ShuffleMod { .. } | CopulaSpec::Grid(_) => {
                unreachable!("piecewise-linear families use finite differences")
            }
        };
        v.clamp(0.0, 1.0)
    }

    /// Difference quotient of `t ↦ C(t, u)` with a central stencil of half
    /// width `h`, clamped to the linear piece containing `t`. On a piece
    /// boundary the stencil is one-sided (to the right, except at `t = 1`).
    fn piecewise_difference(&self, t: f64, u: f64, breaks: &[f64], resolution: usize) -> Partial {
        let h = fd_step(resolution);
        let on_line = breaks.iter().any(|b| (t - b).abs() <= 1e-14) && t > 0.0 && t < 1.0;
        let (lo, hi) = if on_line {
            // Piece starting at t.
            let next = breaks
                .iter()
                .copied()
                .filter(|b| *b > t + 1e-14)
                .fold(f64::INFINITY, f64::min)
                .min(1.0);
            (t, next)
        } else {
            let lo = breaks.iter().copied().filter(|b| *b < t).fold(0.0, f64::max);
            let hi = breaks.iter().copied().filter(|b| *b > t).fold(1.0, f64::min);
            (lo, hi)
        };
        let (a, b) = if hi > lo {
            ((t - h).max(lo), (t + h).min(hi))
        } else {
            ((t - h).max(0.0), t)
        };
        let value = if b > a {
            (self.eval(b, u) - self.eval(a, u)) / (b - a)
        } else {
            0.0
        };
        Partial {
            value: value.clamp(0.0, 1.0),
            one_sided: on_line,
        }
    }

    /// Points in `(0, 1)` where `t ↦ ∂₁C(t, u)` is discontinuous.
    pub fn kinks(&self, u: f64) -> Vec<f64> {
        let inside = |x: f64| x > 0.0 && x < 1.0;
        match *self {
            CopulaSpec::Comonotone => vec![u].into_iter().filter(|x| inside(*x)).collect(),
            CopulaSpec::Countermonotone => vec![1.0 - u].into_iter().filter(|x| inside(*x)).collect(),
            CopulaSpec::Gaussian { rho } if rho.abs() >= 1.0 => {
                let k = if rho > 0.0 { u } else { 1.0 - u };
                vec![k].into_iter().filter(|x| inside(*x)).collect()
            }
            CopulaSpec::ShuffleMod { n } => {
                let nf = n as f64;
                (0..n)
                    .flat_map(|k| [k as f64 / nf, (k as f64 + u) / nf])
                    .filter(|x| inside(*x))
                    .collect()
            }
            CopulaSpec::Grid(ref g) => g.lines().collect(),
            _ => Vec::new(),
        }
    }

    /// Whether `∂₁C` is smooth in `t` (no kinks for any `u`).
    pub fn is_smooth(&self) -> bool {
        match *self {
            CopulaSpec::Independence | CopulaSpec::Frank { .. } | CopulaSpec::Clayton { .. } => true,
            CopulaSpec::Gaussian { rho } => rho.abs() < 1.0,
            _ => false,
        }
    }
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(invalid(format!("{name} = {x} outside [0, 1]")))
    }
}
