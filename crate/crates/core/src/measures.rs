//! Population values of ξ, T and Λ.

use crate::copula::{CopulaGrid, RangeProfile};
use crate::error::{invalid, Error, Result};
use crate::linalg::{min_eigenvalue, pinv_symmetric, rank_symmetric};
use crate::quadrature::CompositeRule;
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Clamping beyond this amount sets the warning flag.
pub const CLAMP_WARN: f64 = 1e-6;

/// Slack on arcsin arguments before they are treated as exactly `±1`.
const ASIN_SLACK: f64 = 1e-12;

/// Denominators below this are treated as zero.
pub const DENOMINATOR_TOL: f64 = 1e-12;

/// A value clamped into its documented range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clamped {
    pub value: f64,
    /// Set when the raw value was outside the range by more than [`CLAMP_WARN`].
    pub flagged: bool,
}

impl Clamped {
    pub fn unit(raw: f64) -> Self {
        let value = raw.clamp(0.0, 1.0);
        Self {
            value,
            flagged: (raw - value).abs() > CLAMP_WARN,
        }
    }
}

/// `ξ = a · diagonal_integral − b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiResult {
    pub value: f64,
    pub a: f64,
    pub b: f64,
    /// `∫ P(Y < y, Y′ < y) dP^Y(y)`.
    pub diagonal_integral: f64,
    pub flagged: bool,
}

/// Polynomial-exact rule on `[0, 1]` with the given breakpoints (order 3
/// integrates piecewise quintics exactly).
fn exact_rule(breaks: impl IntoIterator<Item = f64>) -> CompositeRule {
    let mut edges: Vec<f64> = breaks
        .into_iter()
        .filter(|t| *t > 0.0 && *t < 1.0)
        .chain([0.0, 1.0])
        .collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    CompositeRule::from_edges(&edges, 3)
}

/// The constants `(a, b)` of the diagonal representation for a response with
/// range profile `profile`.
pub fn xi_constants(profile: &RangeProfile) -> Result<(f64, f64)> {
    if profile.is_identity() {
        return Ok((6.0, 2.0));
    }
    let rule = exact_rule(profile.jumps().iter().flat_map(|&(a, b)| [a, b]));
    let g = |t: f64| profile.lower(t);
    let inv_a = rule.integrate(|t| {
        let h = 1.0 - g(t);
        h - h * h
    });
    if inv_a <= DENOMINATOR_TOL {
        return Err(Error::DegenerateResponse(format!(
            "1/a = {inv_a:e}: the response has a single atom"
        )));
    }
    let a = 1.0 / inv_a;
    let b = a * rule.integrate(|t| g(t) * g(t));
    Ok((a, b))
}

/// `t ↦ C(t, t)` from the lattice diagonal of a grid, interpolated by
/// quadratics through consecutive lattice triples (exact for Π and M).
struct Diagonal {
    m: usize,
    d: Vec<f64>,
}

impl Diagonal {
    fn new(grid: &CopulaGrid) -> Self {
        let m = grid.resolution();
        Self {
            m,
            d: (0..=m).map(|i| grid.at(i, i)).collect(),
        }
    }

    fn eval(&self, t: f64) -> f64 {
        let m = self.m;
        let x = t.clamp(0.0, 1.0) * m as f64;
        if m == 1 {
            return self.d[0] + (self.d[1] - self.d[0]) * x;
        }
        let cell = (x.floor() as usize).min(m - 1);
        let s = (2 * (cell / 2)).min(m - 2);
        let (x0, x1, x2) = (s as f64, s as f64 + 1.0, s as f64 + 2.0);
        let (y0, y1, y2) = (self.d[s], self.d[s + 1], self.d[s + 2]);
        y0 * (x - x1) * (x - x2) / 2.0 - y1 * (x - x0) * (x - x2) + y2 * (x - x0) * (x - x1) / 2.0
    }
}

/// ξ from the copula of the Markov pair `(Y, Y′)` and the range profile of `F_Y`.
pub fn xi_from_product(product: &CopulaGrid, profile: &RangeProfile) -> Result<XiResult> {
    let (a, b) = xi_constants(profile)?;
    let m = product.resolution();
    let diag = Diagonal::new(product);
    let breaks = (1..m)
        .map(|i| i as f64 / m as f64)
        .chain(profile.jumps().iter().flat_map(|&(a, b)| [a, b]));
    let rule = exact_rule(breaks);
    let diagonal_integral = rule.integrate(|t| diag.eval(profile.lower(t)));
    let c = Clamped::unit(a * diagonal_integral - b);
    Ok(XiResult {
        value: c.value,
        a,
        b,
        diagonal_integral,
        flagged: c.flagged,
    })
}

/// `(3/π) arcsin((1 + r²)/2) − 1/2`, with exact endpoints.
pub fn xi_from_r2(r2: f64) -> f64 {
    let r2 = r2.clamp(0.0, 1.0);
    if r2 == 0.0 {
        return 0.0;
    }
    let arg = (1.0 + r2) / 2.0;
    if arg >= 1.0 - ASIN_SLACK {
        return 1.0;
    }
    (3.0 / PI * arg.asin() - 0.5).clamp(0.0, 1.0)
}

/// Scale matrix split into predictor block (first `p` coordinates) and
/// response block (the remaining `q`).
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaPartition {
    sigma: DMatrix<f64>,
    p: usize,
}

impl SigmaPartition {
    pub fn new(sigma: DMatrix<f64>, p: usize) -> Result<Self> {
        let n = sigma.nrows();
        if sigma.ncols() != n {
            return Err(Error::Dimension(format!("Σ is {}x{}", n, sigma.ncols())));
        }
        if p == 0 || p >= n {
            return Err(Error::Dimension(format!("p = {p} must lie in 1..{n}")));
        }
        if sigma.iter().any(|v| !v.is_finite()) {
            return Err(invalid("Σ has non-finite entries"));
        }
        for i in 0..n {
            for j in 0..i {
                if (sigma[(i, j)] - sigma[(j, i)]).abs() > 1e-12 {
                    return Err(invalid(format!("Σ not symmetric at ({i}, {j})")));
                }
            }
        }
        let lmin = min_eigenvalue(&sigma);
        if lmin < -1e-10 {
            return Err(invalid(format!("Σ not positive semi-definite (eigenvalue {lmin:e})")));
        }
        Ok(Self { sigma, p })
    }

    /// From row-major entries of an `n × n` matrix.
    pub fn from_rows(n: usize, entries: &[f64], p: usize) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        Self::new(DMatrix::from_row_slice(n, n, entries), p)
    }

    /// Equicorrelated predictors with unit variances: `Corr(X_i, X_j) = ρ`
    /// and `Corr(X_i, Y) = ρ` (`q = 1`).
    pub fn equicorrelated(p: usize, rho: f64) -> Result<Self> {
        let n = p + 1;
        let mut s = DMatrix::from_element(n, n, rho);
        s.fill_diagonal(1.0);
        Self::new(s, p)
    }

    /// The 4-dimensional matrix with predictor correlation `ρ_X`, response
    /// correlation `ρ_Y` and all cross correlations `ρ_XY`.
    pub fn four_dim(rho_x: f64, rho_xy: f64, rho_y: f64) -> Result<Self> {
        #[rustfmt::skip]
        let e = [
            1.0, rho_x, rho_xy, rho_xy,
            rho_x, 1.0, rho_xy, rho_xy,
            rho_xy, rho_xy, 1.0, rho_y,
            rho_xy, rho_xy, rho_y, 1.0,
        ];
        Self::from_rows(4, &e, 2)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.sigma.nrows() - self.p
    }

    pub fn dim(&self) -> usize {
        self.sigma.nrows()
    }

    pub fn full(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn s11(&self) -> DMatrix<f64> {
        self.sigma.view((0, 0), (self.p, self.p)).into_owned()
    }

    pub fn s12(&self) -> DMatrix<f64> {
        self.sigma.view((0, self.p), (self.p, self.q())).into_owned()
    }

    pub fn s21(&self) -> DMatrix<f64> {
        self.s12().transpose()
    }

    pub fn s22(&self) -> DMatrix<f64> {
        self.sigma.view((self.p, self.p), (self.q(), self.q())).into_owned()
    }

    /// Sub-partition on the coordinates `predictors` followed by `response`.
    pub fn select(&self, predictors: &[usize], response: &[usize]) -> Result<Self> {
        let idx: Vec<usize> = predictors.iter().chain(response).copied().collect();
        if idx.iter().any(|&i| i >= self.dim()) {
            return Err(Error::Dimension("coordinate index out of range".into()));
        }
        let n = idx.len();
        let s = DMatrix::from_fn(n, n, |i, j| self.sigma[(idx[i], idx[j])]);
        Self::new(s, predictors.len())
    }
}

/// `r² = Σ21 Σ11⁺ Σ12 / σ_Y²` for `q = 1`, after scaling to unit diagonal.
pub fn gaussian_r2(sigma: &SigmaPartition) -> Result<f64> {
    if sigma.q() != 1 {
        return Err(Error::Dimension(format!("q = {} but a scalar response is required", sigma.q())));
    }
    let full = sigma.full();
    let n = sigma.dim();
    let var_y = full[(n - 1, n - 1)];
    if !(var_y > 0.0) {
        return Err(Error::DegenerateResponse(format!("σ_Y² = {var_y}")));
    }
    // Constant predictors have zero rows and columns; leave them unscaled.
    let scale: Vec<f64> = (0..n)
        .map(|i| {
            let d = full[(i, i)];
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    let corr = DMatrix::from_fn(n, n, |i, j| {
        if i == j && full[(i, i)] > 0.0 {
            1.0
        } else {
            full[(i, j)] * scale[i] * scale[j]
        }
    });
    let p = sigma.p();
    let c11 = corr.view((0, 0), (p, p)).into_owned();
    let c12 = corr.view((0, p), (p, 1)).into_owned();
    let r2 = (c12.transpose() * pinv_symmetric(&c11) * &c12)[(0, 0)];
    Ok(r2.clamp(0.0, 1.0))
}

/// ξ(Y, X) for a (p+1)-dimensional normal vector.
pub fn xi_gaussian(sigma: &SigmaPartition) -> Result<f64> {
    Ok(xi_from_r2(gaussian_r2(sigma)?))
}

/// `r = ρ √(p / (1 + (p − 1)ρ))` for equicorrelated predictors and response.
pub fn equicorrelated_r(p: usize, rho: f64) -> Result<f64> {
    if p == 0 {
        return Err(invalid("p must be positive"));
    }
    let lo = -1.0 / p as f64;
    if !rho.is_finite() || rho < lo - 1e-12 || rho > 1.0 + 1e-12 {
        return Err(invalid(format!("ρ = {rho} outside [{lo}, 1] for p = {p}")));
    }
    let rho = rho.clamp(lo, 1.0);
    let pf = p as f64;
    let denom = 1.0 + (pf - 1.0) * rho;
    if denom <= 0.0 {
        // Only reachable at ρ = −1/p exactly.
        return Ok(-1.0);
    }
    Ok((rho * (pf / denom).sqrt()).clamp(-1.0, 1.0))
}

/// `T = 1 − (q − Σ ξ(Y_i, (X, Y_<i))) / (q − Σ ξ(Y_i, Y_<i))`.
pub fn t_chain(xi_with_x: &[f64], xi_without_x: &[f64]) -> Result<Clamped> {
    if xi_with_x.is_empty() || xi_with_x.len() != xi_without_x.len() {
        return Err(Error::Dimension(format!(
            "chain lengths {} and {}",
            xi_with_x.len(),
            xi_without_x.len()
        )));
    }
    if xi_with_x.iter().chain(xi_without_x).any(|v| !v.is_finite()) {
        return Err(invalid("non-finite ξ entry"));
    }
    // Written as Σ(ξ_with − ξ_without) / Σ(1 − ξ_without) so that the
    // q = 1, all-ones and equal-lists cases come out exact.
    let den: f64 = xi_without_x.iter().map(|w| 1.0 - w).sum();
    if den <= DENOMINATOR_TOL {
        return Err(Error::PerfectInternalDependence(den));
    }
    let num: f64 = xi_with_x.iter().zip(xi_without_x).map(|(a, b)| a - b).sum();
    Ok(Clamped::unit(num / den))
}

fn clamped_asin(x: f64) -> f64 {
    if x >= 1.0 - ASIN_SLACK {
        PI / 2.0
    } else if x <= -1.0 + ASIN_SLACK {
        -PI / 2.0
    } else {
        x.asin()
    }
}

/// Closed-form T for the 4-dimensional normal with `Σ` from
/// [`SigmaPartition::four_dim`].
pub fn t_gaussian_4d(rho_x: f64, rho_xy: f64, rho_y: f64) -> Result<f64> {
    for (name, v) in [("ρ_X", rho_x), ("ρ_XY", rho_xy), ("ρ_Y", rho_y)] {
        if !v.is_finite() || v.abs() > 1.0 {
            return Err(invalid(format!("{name} = {v} outside [-1, 1]")));
        }
    }
    let s2 = rho_xy * rho_xy;
    let bound = (1.0 + rho_x) / 2.0 * (1.0 + rho_y) / 2.0;
    if s2 > bound + 1e-12 {
        return Err(invalid(format!(
            "ρ_XY² = {s2} exceeds {bound}: Σ is not positive semi-definite"
        )));
    }
    let d1 = 1.0 + rho_x;
    let d2 = 2.0 * (1.0 + rho_x) - 4.0 * s2;
    if d1 < 1e-10 || d2 < 1e-10 {
        return Err(Error::SingularConfiguration(format!(
            "arcsin denominators {d1:e}, {d2:e} vanish at (ρ_X, ρ_XY, ρ_Y) = ({rho_x}, {rho_xy}, {rho_y})"
        )));
    }
    let a1 = 0.5 + s2 / d1;
    let a2 = 0.5 + ((1.0 + rho_x) * rho_y * rho_y - 2.0 * (2.0 * rho_y - 1.0) * s2) / d2;
    let num = 3.0 - 3.0 / PI * (clamped_asin(a1) + clamped_asin(a2));
    let den = 2.5 - 3.0 / PI * clamped_asin((1.0 + rho_y * rho_y) / 2.0);
    if den <= DENOMINATOR_TOL {
        return Err(Error::PerfectInternalDependence(den));
    }
    Ok((1.0 - num / den).clamp(0.0, 1.0))
}

/// Data for Λ(Y, X) = Corr(Y, Y′).
#[derive(Debug, Clone, Copy)]
pub enum MarkovPair<'a> {
    /// Draws of the Markov pair.
    Sample { y: &'a [f64], y_prime: &'a [f64] },
    /// `Var(Y)` and `Cov(Y, Y′) = Var(E[Y | X])`.
    Moments { variance: f64, covariance: f64 },
}

/// Tolerance below zero allowed for Λ before clamping.
pub const LAMBDA_TOL: f64 = 1e-9;

/// Λ as the Pearson correlation of the Markov pair.
pub fn lambda_population(pair: MarkovPair<'_>) -> Result<f64> {
    match pair {
        MarkovPair::Moments { variance, covariance } => {
            if !(variance > 0.0) || !variance.is_finite() {
                return Err(Error::DegenerateResponse(format!("Var(Y) = {variance}")));
            }
            Ok((covariance / variance).clamp(-LAMBDA_TOL, 1.0))
        }
        MarkovPair::Sample { y, y_prime } => {
            if y.len() != y_prime.len() || y.len() < 2 {
                return Err(Error::Dimension(format!(
                    "Markov pair sample sizes {} and {}",
                    y.len(),
                    y_prime.len()
                )));
            }
            let r = pearson(y, y_prime)?;
            Ok(r.min(1.0))
        }
    }
}

/// Pearson correlation; errors if either sample has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxx += da * da;
        syy += db * db;
        sxy += da * db;
    }
    if !(sxx > 0.0) || !(syy > 0.0) {
        return Err(Error::DegenerateResponse("zero sample variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremal {
    TZero,
    TOne,
    Interior,
}

/// Extremal cases of T in an elliptical model with scale matrix `sigma`.
pub fn elliptical_extremal_classify(sigma: &SigmaPartition, is_normal: bool) -> Result<Extremal> {
    let full = sigma.full();
    if let Some(i) = (0..sigma.dim()).find(|&i| !(full[(i, i)] > 0.0)) {
        return Err(invalid(format!("component {i} is degenerate")));
    }
    let scale = full.diagonal().iter().fold(0.0f64, |m, v| m.max(*v));
    let s12_null = sigma.s12().iter().all(|v| v.abs() <= 1e-12 * scale);
    if s12_null && is_normal {
        return Ok(Extremal::TZero);
    }
    if rank_symmetric(full) == rank_symmetric(&sigma.s11()) {
        return Ok(Extremal::TOne);
    }
    Ok(Extremal::Interior)
}
