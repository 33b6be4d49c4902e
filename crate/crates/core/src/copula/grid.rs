use crate::error::{invalid, Result};

/// Tolerance on negative rectangle masses of a grid copula.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Doubly stochastic lattice representation of a copula.
///
/// Stores the CDF at the lattice points `(i/m, j/m)`; off the lattice the CDF
/// is bilinear, i.e. mass is spread uniformly inside every cell (the
/// checkerboard extension).
#[derive(Debug, Clone, PartialEq)]
pub struct CopulaGrid {
    m: usize,
    values: Vec<f64>,
}

impl CopulaGrid {
    /// Validate and build a grid from row-major `(m+1)²` CDF values.
    ///
    /// Margins that deviate from the exact values by less than `1e-9` are
    /// snapped; anything worse is rejected.
    pub fn new(m: usize, values: Vec<f64>) -> Result<Self> {
        if m == 0 {
            return Err(invalid("grid resolution must be positive"));
        }
        let side = m + 1;
        if values.len() != side * side {
            return Err(invalid(format!(
                "expected {} grid values, got {}",
                side * side,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("grid values must be finite"));
        }
        let mut grid = Self { m, values };
        for i in 0..=m {
            let u = i as f64 / m as f64;
            let checks = [
                (grid.at(i, 0), 0.0),
                (grid.at(0, i), 0.0),
                (grid.at(i, m), u),
                (grid.at(m, i), u),
            ];
            for (got, want) in checks {
                if (got - want).abs() > 1e-9 {
                    return Err(invalid(format!(
                        "grid margin at index {i} is {got}, expected {want}"
                    )));
                }
            }
        }
        grid.snap_margins();
        let worst = grid.min_rectangle_mass();
        if worst < -MASS_TOLERANCE {
            return Err(invalid(format!("negative rectangle mass {worst:e}")));
        }
        Ok(grid)
    }

    pub(crate) fn from_fn(m: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let side = m + 1;
        let mut values = Vec::with_capacity(side * side);
        for i in 0..side {
            for j in 0..side {
                values.push(f(i, j));
            }
        }
        let mut g = Self { m, values };
        g.snap_margins();
        g
    }

    pub(crate) fn snap_margins(&mut self) {
        let m = self.m;
        for i in 0..=m {
            let u = i as f64 / m as f64;
            *self.at_mut(i, 0) = 0.0;
            *self.at_mut(0, i) = 0.0;
            *self.at_mut(i, m) = u;
            *self.at_mut(m, i) = u;
        }
    }

    /// The independence copula on an `m`-lattice.
    pub fn independence(m: usize) -> Self {
        let mf = m as f64;
        Self::from_fn(m, |i, j| (i as f64 / mf) * (j as f64 / mf))
    }

    pub fn resolution(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// CDF value at the lattice point `(i/m, j/m)`.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.m + 1) + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        let side = self.m + 1;
        &mut self.values[i * side + j]
    }

    /// Mass of the lattice cell `[i/m, (i+1)/m] × [j/m, (j+1)/m]`.
    pub fn cell_mass(&self, i: usize, j: usize) -> f64 {
        self.at(i + 1, j + 1) - self.at(i + 1, j) - self.at(i, j + 1) + self.at(i, j)
    }

    pub fn min_rectangle_mass(&self) -> f64 {
        let mut worst = f64::INFINITY;
        for i in 0..self.m {
            for j in 0..self.m {
                worst = worst.min(self.cell_mass(i, j));
            }
        }
        worst
    }

    /// Largest `|C(u,v) - C(v,u)|` over the lattice.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..=self.m {
            for j in 0..i {
                worst = worst.max((self.at(i, j) - self.at(j, i)).abs());
            }
        }
        worst
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let s = x.clamp(0.0, 1.0) * self.m as f64;
        let i = (s.floor() as usize).min(self.m - 1);
        (i, s - i as f64)
    }

    /// Bilinear CDF evaluation.
    pub fn cdf(&self, u: f64, v: f64) -> f64 {
        let (i, fx) = self.locate(u);
        let (j, fy) = self.locate(v);
        let c00 = self.at(i, j);
        let c10 = self.at(i + 1, j);
        let c01 = self.at(i, j + 1);
        let c11 = self.at(i + 1, j + 1);
        (1.0 - fx) * ((1.0 - fy) * c00 + fy * c01) + fx * ((1.0 - fy) * c10 + fy * c11)
    }

    /// Interior lattice lines `j/m`, where `t ↦ ∂₁C(t, u)` jumps.
    pub fn lines(&self) -> impl Iterator<Item = f64> + '_ {
        (1..self.m).map(move |j| j as f64 / self.m as f64)
    }

    /// Largest lattice deviation from another grid of the same resolution.
    pub fn sup_deviation(&self, other: &CopulaGrid) -> Result<f64> {
        if self.m != other.m {
            return Err(invalid(format!(
                "grid resolutions differ: {} vs {}",
                self.m, other.m
            )));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}
