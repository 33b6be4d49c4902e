//! Sample estimators of ξ, T and Λ.

mod kdtree;

pub use kdtree::KdTree;

use crate::error::{invalid, Error, Result};
use crate::measures::{pearson, t_chain, Clamped};
use nalgebra::DMatrix;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Predictors `X` (n × p) and responses `Y` (n × q).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: DMatrix<f64>,
    y: DMatrix<f64>,
}

impl Dataset {
    pub fn new(x: DMatrix<f64>, y: DMatrix<f64>) -> Result<Self> {
        if x.nrows() != y.nrows() {
            return Err(Error::Dimension(format!("X has {} rows, Y has {}", x.nrows(), y.nrows())));
        }
        if x.nrows() < 2 {
            return Err(invalid("a dataset needs at least 2 rows"));
        }
        if x.ncols() == 0 || y.ncols() == 0 {
            return Err(Error::Dimension("X and Y need at least one column".into()));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("dataset contains missing or non-finite values"));
        }
        Ok(Self { x, y })
    }

    /// Split the columns of `data` into the first `p` (X) and the rest (Y).
    pub fn split(data: &DMatrix<f64>, p: usize) -> Result<Self> {
        if p == 0 || p >= data.ncols() {
            return Err(Error::Dimension(format!("cannot split {} columns at {p}", data.ncols())));
        }
        Self::new(data.columns(0, p).into_owned(), data.columns(p, data.ncols() - p).into_owned())
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DMatrix<f64> {
        &self.y
    }

    pub fn y_column(&self, j: usize) -> Vec<f64> {
        self.y.column(j).iter().copied().collect()
    }

    pub fn xi_knn(&self, j: usize) -> Result<f64> {
        xi_n_knn(&self.x, &self.y_column(j))
    }

    pub fn t(&self) -> Result<Clamped> {
        t_n(&self.x, &self.y)
    }

    pub fn lambda(&self, j: usize) -> Result<Clamped> {
        lambda_n(&self.x, &self.y_column(j))
    }
}

fn check_pair(n_x: usize, y: &[f64], min_n: usize) -> Result<()> {
    if n_x != y.len() {
        return Err(Error::Dimension(format!("x has {n_x} rows, y has {}", y.len())));
    }
    if y.len() < min_n {
        return Err(invalid(format!("need at least {min_n} observations, got {}", y.len())));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(invalid("y contains non-finite values"));
    }
    if y.iter().all(|v| *v == y[0]) {
        return Err(Error::DegenerateResponse("y is constant".into()));
    }
    Ok(())
}

/// `(r_i, l_i)` with `r_i = #{j : y_j ≤ y_i}` and `l_i = #{j : y_j ≥ y_i}`.
fn rank_counts(y: &[f64]) -> (Vec<u64>, Vec<u64>) {
    let n = y.len();
    let mut sorted = y.to_vec();
    sorted.sort_by(f64::total_cmp);
    let r = y.iter().map(|v| sorted.partition_point(|s| s <= v) as u64).collect();
    let l = y
        .iter()
        .map(|v| (n - sorted.partition_point(|s| s < v)) as u64)
        .collect();
    (r, l)
}

/// Chatterjee's rank correlation `ξ_n(y, x)` with seeded random breaking of
/// ties in `x`.
pub fn xi_n(x: &[f64], y: &[f64], seed: u64) -> Result<f64> {
    check_pair(x.len(), y, 2)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(invalid("x contains non-finite values"));
    }
    let n = y.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keys: Vec<u64> = (0..n).map(|_| rng.next_u64()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(keys[a].cmp(&keys[b])));
    let (r, l) = rank_counts(y);
    let num: u128 = order
        .windows(2)
        .map(|w| r[w[1]].abs_diff(r[w[0]]) as u128)
        .sum();
    let den: u128 = l.iter().map(|&li| li as u128 * (n as u128 - li as u128)).sum();
    Ok(1.0 - (n as f64 * num as f64) / (2.0 * den as f64))
}

fn row_major(x: &DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.nrows() {
        out.extend(x.row(i).iter());
    }
    out
}

/// Nearest other row of every row of `x`.
pub fn nearest_neighbours(x: &DMatrix<f64>) -> Vec<usize> {
    let pts = row_major(x);
    KdTree::new(&pts, x.ncols()).all_nearest()
}

/// Nearest-neighbour estimator of ξ(Y, X) for multivariate `X`:
/// `Σ (n·min(R_i, R_{N(i)}) − L_i²) / Σ L_i (n − L_i)`.
pub fn xi_n_knn(x: &DMatrix<f64>, y: &[f64]) -> Result<f64> {
    check_pair(x.nrows(), y, 3)?;
    if x.ncols() == 0 {
        return Err(Error::Dimension("X needs at least one column".into()));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(invalid("X contains non-finite values"));
    }
    let n = y.len() as i128;
    let nn = nearest_neighbours(x);
    let (r, l) = rank_counts(y);
    let num: i128 = (0..y.len())
        .map(|i| n * r[i].min(r[nn[i]]) as i128 - (l[i] as i128) * (l[i] as i128))
        .sum();
    let den: i128 = l.iter().map(|&li| li as i128 * (n - li as i128)).sum();
    Ok(num as f64 / den as f64)
}

fn hstack(a: Option<&DMatrix<f64>>, b: &DMatrix<f64>, cols: usize) -> DMatrix<f64> {
    let n = b.nrows();
    let pa = a.map_or(0, |m| m.ncols());
    DMatrix::from_fn(n, pa + cols, |i, j| match a {
        Some(m) if j < pa => m[(i, j)],
        _ => b[(i, j - pa)],
    })
}

/// Chained estimator of T(Y, X).
pub fn t_n(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<Clamped> {
    if x.nrows() != y.nrows() {
        return Err(Error::Dimension(format!("X has {} rows, Y has {}", x.nrows(), y.nrows())));
    }
    let q = y.ncols();
    if q == 0 {
        return Err(Error::Dimension("Y needs at least one column".into()));
    }
    let col = |j: usize| -> Vec<f64> { y.column(j).iter().copied().collect() };
    if q == 1 {
        return Ok(Clamped::unit(xi_n_knn(x, &col(0))?));
    }
    let mut with_x = Vec::with_capacity(q);
    let mut without_x = Vec::with_capacity(q);
    for i in 0..q {
        let yi = col(i);
        let cond = hstack(Some(x), y, i);
        with_x.push(xi_n_knn(&cond, &yi)?);
        without_x.push(if i == 0 {
            0.0
        } else {
            xi_n_knn(&y.columns(0, i).into_owned(), &yi)?
        });
    }
    t_chain(&with_x, &without_x)
}

/// Λ estimate: Pearson correlation of `(y_i, y_{N(i)})`.
pub fn lambda_n(x: &DMatrix<f64>, y: &[f64]) -> Result<Clamped> {
    check_pair(x.nrows(), y, 3)?;
    let nn = nearest_neighbours(x);
    let paired: Vec<f64> = nn.iter().map(|&j| y[j]).collect();
    let r = pearson(y, &paired)?;
    Ok(Clamped::unit(r))
}

/// Kolmogorov–Smirnov distance between the empirical law of `sample` and `cdf`.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf(v);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
