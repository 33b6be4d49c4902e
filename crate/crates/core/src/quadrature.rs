//! Fixed-order composite Gauss–Legendre rules and an adaptive Gauss–Kronrod
//! integrator.
//!
//! The composite rule on `[0, 1]` is the workhorse for Markov products and
//! `∂₁`-distances: a uniform partition, refined by caller-supplied breakpoints
//! (kinks of the integrand) and graded geometrically towards both endpoints,
//! where copula partial derivatives of the Gaussian type have Hölder-type
//! singularities.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess, refined by Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrate `f` over `[a, b]` with this rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Settings of the composite rule on the unit interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Number of uniform panels before refinement.
    pub panels: usize,
    /// Gauss–Legendre points per panel.
    pub order: usize,
    /// Number of geometric grading levels added next to each endpoint.
    pub grading_levels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            panels: 1024,
            order: 6,
            grading_levels: 40,
        }
    }
}

impl QuadratureConfig {
    pub fn with_panels(mut self, panels: usize) -> Self {
        self.panels = panels;
        self
    }
}

/// A fixed composite rule on `[0, 1]`: flattened nodes and weights, sorted by node.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    /// Build the rule for `config`, adding `breaks` (values outside `(0, 1)`
    /// are ignored) to the panel boundaries.
    pub fn unit(config: &QuadratureConfig, breaks: &[f64]) -> Self {
        let edges = unit_edges(config, breaks);
        Self::from_edges(&edges, config.order)
    }

    /// Composite rule over consecutive panels `[edges[k], edges[k+1]]`.
    pub fn from_edges(edges: &[f64], order: usize) -> Self {
        let gl = GaussLegendre::new(order);
        let panels = edges.len().saturating_sub(1);
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, wt) in gl.nodes().iter().zip(gl.weights()) {
                nodes.push(mid + half * x);
                weights.push(wt * half);
            }
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// Sorted, deduplicated panel boundaries on `[0, 1]`.
pub fn unit_edges(config: &QuadratureConfig, breaks: &[f64]) -> Vec<f64> {
    let panels = config.panels.max(1);
    let mut edges: Vec<f64> = (0..=panels).map(|k| k as f64 / panels as f64).collect();
    let first = 1.0 / panels as f64;
    let mut scale = first;
    for _ in 0..config.grading_levels {
        scale *= 0.5;
        edges.push(scale);
        edges.push(1.0 - scale);
    }
    edges.extend(breaks.iter().copied().filter(|b| *b > 0.0 && *b < 1.0));
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    // dedup may drop an endpoint in favour of a neighbour; restore them.
    if let Some(f) = edges.first_mut() {
        *f = 0.0;
    }
    if let Some(l) = edges.last_mut() {
        *l = 1.0;
    }
    edges
}

// Gauss–Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let est = kronrod * h;
    let err = ((kronrod - gauss) * h).abs();
    (est, err)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of `f` over the
/// consecutive intervals given by `edges`, bisecting the worst segment until
/// the summed error estimate is below `max(abs_tol, rel_tol * |value|)`.
pub fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    edges: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Adaptive {
    const MAX_SEGMENTS: usize = 4000;
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in edges.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, error) = gk15(&mut f, w[0], w[1]);
        total += value;
        total_err += error;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    let mut converged = true;
    while total_err > abs_tol.max(rel_tol * total.abs()) {
        if heap.len() >= MAX_SEGMENTS {
            converged = false;
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            converged = false;
            heap.push(worst);
            break;
        }
        let (lv, le) = gk15(&mut f, worst.a, mid);
        let (rv, re) = gk15(&mut f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
    }
    // Re-sum to shed the drift of the running updates.
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Adaptive {
        value,
        error,
        converged,
    }
}

/// Adaptive integration over `[a, ∞)` via `x = a + s / (1 - s)`.
pub fn adaptive_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Adaptive {
    let g = |s: f64| {
        if s >= 1.0 {
            return 0.0;
        }
        let one_minus = 1.0 - s;
        let x = a + s / one_minus;
        let v = f(x) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let edges: Vec<f64> = (0..=8).map(|k| k as f64 / 8.0).collect();
    adaptive(g, &edges, abs_tol, rel_tol)
}
