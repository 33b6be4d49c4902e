//! Exact nearest-neighbour search in low dimension.

use rayon::prelude::*;

const LEAF: usize = 8;

enum Node {
    Leaf { start: usize, end: usize },
    Split { dim: usize, value: f64, left: Box<Node>, right: Box<Node> },
}

/// kd-tree over `n` points of dimension `k`, stored row-major.
pub struct KdTree<'a> {
    points: &'a [f64],
    k: usize,
    order: Vec<usize>,
    root: Node,
}

impl<'a> KdTree<'a> {
    pub fn new(points: &'a [f64], k: usize) -> Self {
        assert!(k > 0 && points.len() % k == 0);
        let n = points.len() / k;
        let mut order: Vec<usize> = (0..n).collect();
        let root = build(points, k, &mut order, 0);
        Self { points, k, order, root }
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.k..(i + 1) * self.k]
    }

    /// Nearest other point to point `i` (Euclidean); equal distances go to the
    /// smaller index. `None` for a single point.
    pub fn nearest_other(&self, i: usize) -> Option<usize> {
        let mut best = (f64::INFINITY, usize::MAX);
        self.search(&self.root, self.point(i), i, &mut best);
        (best.1 != usize::MAX).then_some(best.1)
    }

    /// [`nearest_other`](Self::nearest_other) for every point.
    pub fn all_nearest(&self) -> Vec<usize> {
        let n = self.order.len();
        (0..n)
            .into_par_iter()
            .map(|i| self.nearest_other(i).unwrap_or(i))
            .collect()
    }

    fn search(&self, node: &Node, q: &[f64], skip: usize, best: &mut (f64, usize)) {
        match node {
            Node::Leaf { start, end } => {
                for &j in &self.order[*start..*end] {
                    if j == skip {
                        continue;
                    }
                    let d: f64 = self
                        .point(j)
                        .iter()
                        .zip(q)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    if d < best.0 || (d == best.0 && j < best.1) {
                        *best = (d, j);
                    }
                }
            }
            Node::Split { dim, value, left, right } => {
                let diff = q[*dim] - value;
                let (near, far) = if diff <= 0.0 { (left, right) } else { (right, left) };
                self.search(near, q, skip, best);
                // `<=` keeps equidistant candidates with smaller indices reachable.
                if diff * diff <= best.0 {
                    self.search(far, q, skip, best);
                }
            }
        }
    }
}

fn build(points: &[f64], k: usize, idx: &mut [usize], offset: usize) -> Node {
    let n = idx.len();
    if n <= LEAF {
        return Node::Leaf { start: offset, end: offset + n };
    }
    // Split along the coordinate of widest spread.
    let mut dim = 0;
    let mut widest = -1.0;
    for d in 0..k {
        let (lo, hi) = idx.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
            let v = points[i * k + d];
            (lo.min(v), hi.max(v))
        });
        if hi - lo > widest {
            widest = hi - lo;
            dim = d;
        }
    }
    if widest <= 0.0 {
        return Node::Leaf { start: offset, end: offset + n };
    }
    let mid = n / 2;
    idx.select_nth_unstable_by(mid, |&a, &b| points[a * k + dim].total_cmp(&points[b * k + dim]));
    let value = points[idx[mid] * k + dim];
    let (l, r) = idx.split_at_mut(mid);
    Node::Split {
        dim,
        value,
        left: Box::new(build(points, k, l, offset)),
        right: Box::new(build(points, k, r, offset + mid)),
    }
}
