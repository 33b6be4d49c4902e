use crate::error::{invalid, Result};

/// The maps `t ↦ F∘F⁻¹(t)` and `t ↦ F⁻∘F⁻¹(t)` of a distribution function `F`.
///
/// Both only depend on the closure of `Ran(F)`, which is `[0, 1]` minus the
/// open gaps left by the jumps of `F`. An atom of `F` with `F(x⁻) = a` and
/// `F(x) = b` produces the jump `(a, b]`: on it `F∘F⁻¹ = b` and
/// `F⁻∘F⁻¹ = a`; everywhere else both maps are the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeProfile {
    jumps: Vec<(f64, f64)>,
}

impl RangeProfile {
    /// Profile of a continuous distribution function.
    pub fn identity() -> Self {
        Self { jumps: Vec::new() }
    }

    /// Profile of a Dirac distribution: one jump covering `(0, 1]`.
    pub fn dirac() -> Self {
        Self {
            jumps: vec![(0.0, 1.0)],
        }
    }

    /// Profile from jump intervals `(F(x⁻), F(x))`; they must be ordered,
    /// disjoint and inside `[0, 1]`.
    pub fn from_jumps(jumps: Vec<(f64, f64)>) -> Result<Self> {
        let mut prev = 0.0;
        for &(a, b) in &jumps {
            if !(a.is_finite() && b.is_finite()) || a < prev || b <= a || b > 1.0 {
                return Err(invalid(format!("invalid jump interval ({a}, {b}]")));
            }
            prev = b;
        }
        Ok(Self { jumps })
    }

    /// Profile of a purely atomic distribution with the given atom masses
    /// (in increasing order of the atoms).
    pub fn from_masses(masses: &[f64]) -> Result<Self> {
        if masses.is_empty() || masses.iter().any(|m| !(*m > 0.0) || !m.is_finite()) {
            return Err(invalid("atom masses must be positive"));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(invalid(format!("atom masses sum to {total}, expected 1")));
        }
        let mut jumps = Vec::with_capacity(masses.len());
        let mut acc = 0.0;
        for (k, &mass) in masses.iter().enumerate() {
            let next = if k + 1 == masses.len() { 1.0 } else { acc + mass };
            jumps.push((acc, next));
            acc = next;
        }
        Ok(Self { jumps })
    }

    /// Empirical profile of a sample: every distinct value is an atom.
    pub fn from_sample(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() || sample.iter().any(|x| x.is_nan()) {
            return Err(invalid("sample must be nonempty and free of NaN"));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut masses = Vec::new();
        let mut run = 1usize;
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                masses.push(run as f64 / n);
                run = 1;
            }
        }
        masses.push(run as f64 / n);
        Self::from_masses(&masses)
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    pub fn is_identity(&self) -> bool {
        self.jumps.is_empty()
    }

    /// A single jump spanning `(0, 1]`: the distribution is degenerate.
    pub fn is_dirac(&self) -> bool {
        matches!(self.jumps.as_slice(), [(a, b)] if *a <= 0.0 && *b >= 1.0)
    }

    fn jump_containing(&self, t: f64) -> Option<(f64, f64)> {
        let idx = self.jumps.partition_point(|&(_, b)| b < t);
        self.jumps
            .get(idx)
            .copied()
            .filter(|&(a, b)| t > a && t <= b)
    }

    /// `F∘F⁻¹(t)`.
    pub fn upper(&self, t: f64) -> f64 {
        self.jump_containing(t).map_or(t, |(_, b)| b)
    }

    /// `F⁻∘F⁻¹(t)`.
    pub fn lower(&self, t: f64) -> f64 {
        self.jump_containing(t).map_or(t, |(a, _)| a)
    }

    /// Sub-intervals of `[0, 1]` on which both maps are the identity.
    pub fn continuity_segments(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut start = 0.0;
        for &(a, b) in &self.jumps {
            if a > start {
                out.push((start, a));
            }
            start = b;
        }
        if start < 1.0 {
            out.push((start, 1.0));
        }
        out
    }

    /// `∫₀¹ |F∘F⁻¹(t) − G∘G⁻¹(t)| dt`, computed exactly (the integrand is
    /// piecewise linear between the union of jump endpoints).
    pub fn l1_distance(&self, other: &RangeProfile) -> f64 {
        let mut edges: Vec<f64> = vec![0.0, 1.0];
        for &(a, b) in self.jumps.iter().chain(&other.jumps) {
            edges.push(a);
            edges.push(b);
        }
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        let mut total = 0.0;
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            // On (lo, hi] each map is either t or a constant, so the
            // difference is linear; recover its end values from two interior
            // evaluations. It may cross zero once.
            let w = hi - lo;
            let d1 = self.upper(lo + w / 3.0) - other.upper(lo + w / 3.0);
            let d2 = self.upper(lo + 2.0 * w / 3.0) - other.upper(lo + 2.0 * w / 3.0);
            let d_lo = 2.0 * d1 - d2;
            let d_hi = 2.0 * d2 - d1;
            total += if d_lo * d_hi >= 0.0 {
                0.5 * (d_lo.abs() + d_hi.abs()) * (hi - lo)
            } else {
                let root = lo + (hi - lo) * d_lo.abs() / (d_lo.abs() + d_hi.abs());
                0.5 * d_lo.abs() * (root - lo) + 0.5 * d_hi.abs() * (hi - root)
            };
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirac_profile() {
        let p = RangeProfile::dirac();
        assert!(p.is_dirac());
        assert_eq!(p.upper(0.3), 1.0);
        assert_eq!(p.lower(0.3), 0.0);
        let dev = p.l1_distance(&RangeProfile::identity());
        assert!((dev - 0.5).abs() < 1e-12, "{dev}");
    }

    #[test]
    fn atoms_and_sample_profile() {
        let p = RangeProfile::from_masses(&[0.25, 0.75]).unwrap();
        assert_eq!(p.jumps(), &[(0.0, 0.25), (0.25, 1.0)]);
        assert_eq!(p.upper(0.2), 0.25);
        assert_eq!(p.lower(0.25), 0.0);
        assert_eq!(p.lower(0.2500001), 0.25);
        let s = RangeProfile::from_sample(&[3.0, 1.0, 3.0, 3.0]).unwrap();
        assert_eq!(s, p);
    }

    #[test]
    fn mixed_profile_segments() {
        let p = RangeProfile::from_jumps(vec![(0.2, 0.5)]).unwrap();
        assert_eq!(p.continuity_segments(), vec![(0.0, 0.2), (0.5, 1.0)]);
        assert_eq!(p.upper(0.1), 0.1);
        assert_eq!(p.upper(0.3), 0.5);
        // ∫_{0.2}^{0.5} (0.5 - t) dt = 0.045
        let d = p.l1_distance(&RangeProfile::identity());
        assert!((d - 0.045).abs() < 1e-12, "{d}");
        assert!(RangeProfile::from_jumps(vec![(0.5, 0.4)]).is_err());
    }
}
