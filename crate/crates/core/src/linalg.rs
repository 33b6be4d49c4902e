//! Spectral helpers for symmetric positive semi-definite matrices.

use nalgebra::{DMatrix, SymmetricEigen};

/// Relative eigenvalue cutoff: eigenvalues below `CUTOFF * λ_max` count as zero.
pub const EIGEN_CUTOFF: f64 = 1e-10;

fn eigen(a: &DMatrix<f64>) -> SymmetricEigen<f64, nalgebra::Dyn> {
    SymmetricEigen::new(a.clone())
}

fn threshold(values: &[f64]) -> f64 {
    let lmax = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    EIGEN_CUTOFF * lmax
}

/// Moore–Penrose pseudoinverse of a symmetric matrix.
pub fn pinv_symmetric(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let eig = eigen(a);
    let tol = threshold(eig.eigenvalues.as_slice());
    let mut out = DMatrix::zeros(n, n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() > tol && lambda != 0.0 {
            let v = eig.eigenvectors.column(k);
            out += (v * v.transpose()) / lambda;
        }
    }
    out
}

/// Numerical rank with the relative eigenvalue cutoff.
pub fn rank_symmetric(a: &DMatrix<f64>) -> usize {
    if a.nrows() == 0 {
        return 0;
    }
    let eig = eigen(a);
    let tol = threshold(eig.eigenvalues.as_slice());
    eig.eigenvalues
        .iter()
        .filter(|l| l.abs() > tol && **l != 0.0)
        .count()
}

pub fn min_eigenvalue(a: &DMatrix<f64>) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    eigen(a).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Full-rank factor `A` (k × n) with `AᵀA = Σ`, from the eigendecomposition
/// restricted to eigenvalues above the cutoff.
pub fn full_rank_factor(sigma: &DMatrix<f64>) -> DMatrix<f64> {
    let n = sigma.nrows();
    let eig = eigen(sigma);
    let tol = threshold(eig.eigenvalues.as_slice());
    let keep: Vec<usize> = (0..n)
        .filter(|&k| eig.eigenvalues[k] > tol && eig.eigenvalues[k] > 0.0)
        .collect();
    let mut a = DMatrix::zeros(keep.len(), n);
    for (row, &k) in keep.iter().enumerate() {
        let s = eig.eigenvalues[k].sqrt();
        for j in 0..n {
            a[(row, j)] = s * eig.eigenvectors[(j, k)];
        }
    }
    a
}
