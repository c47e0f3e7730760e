//! Composite Gauss–Legendre quadrature on explicit panel edges.

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

/// A fixed-order rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Rule {
    pairs: Vec<(f64, f64)>,
}

impl Rule {
    /// Panics only for `order < 2`, which is a programming error.
    pub fn new(order: usize) -> Self {
        let gl = GaussLegendre::new(order).expect("Gauss-Legendre order must be >= 2");
        Self { pairs: gl.into_node_weight_pairs() }
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    /// Nodes and weights of the rule mapped to every panel `[e_k, e_{k+1}]`.
    pub fn composite(&self, edges: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = edges.len().saturating_sub(1) * self.pairs.len();
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for win in edges.windows(2) {
            let (a, b) = (win[0], win[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (b + a);
            for &(x, w) in &self.pairs {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        (nodes, weights)
    }

    /// Integrates a complex function over the panels delimited by `edges`.
    pub fn integrate_c<F: FnMut(f64) -> Complex64>(&self, edges: &[f64], mut f: F) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for win in edges.windows(2) {
            let (a, b) = (win[0], win[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (b + a);
            let mut part = Complex64::new(0.0, 0.0);
            for &(x, w) in &self.pairs {
                part += w * f(mid + half * x);
            }
            acc += half * part;
        }
        acc
    }
}

/// `count` equal subdivisions of `[a, b]`, returned as `count + 1` edges.
pub fn uniform_edges(a: f64, b: f64, count: usize) -> Vec<f64> {
    (0..=count).map(|k| a + (b - a) * k as f64 / count as f64).collect()
}

/// Edges on `[a, b]` whose spacing grows geometrically away from `a`, so that
/// panels are short next to a kink at `a` and long in the smooth tail.
pub fn graded_edges(a: f64, b: f64, count: usize, first: f64) -> Vec<f64> {
    let len = b - a;
    if len <= 0.0 {
        return vec![a, b];
    }
    let h0 = first.min(len / count as f64);
    // Solve h0 (r^count - 1)/(r - 1) = len for the growth ratio r by bisection.
    let total = |r: f64| {
        if (r - 1.0).abs() < 1e-12 {
            h0 * count as f64
        } else {
            h0 * (r.powi(count as i32) - 1.0) / (r - 1.0)
        }
    };
    let (mut lo, mut hi) = (1.0, 2.0);
    while total(hi) < len {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) < len {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let mut edges = Vec::with_capacity(count + 1);
    let mut x = a;
    let mut h = h0;
    edges.push(a);
    for _ in 0..count - 1 {
        x += h;
        edges.push(x);
        h *= r;
    }
    edges.push(b);
    edges
}

/// Panel edges for `[a, b]` broken at every interior point of `breaks`, each
/// piece graded toward both of its ends.
pub fn split_edges(a: f64, b: f64, breaks: &[f64], per_side: usize, first: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
    let mut edges = vec![a];
    for win in pts.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        let mid = 0.5 * (lo + hi);
        let left = graded_edges(lo, mid, per_side, first);
        let right: Vec<f64> = graded_edges(-hi, -mid, per_side, first).iter().rev().map(|x| -x).collect();
        edges.extend_from_slice(&left[1..]);
        edges.extend_from_slice(&right[1..]);
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_exponential() {
        let rule = Rule::new(16);
        let v = rule.integrate_c(&uniform_edges(0.0, 2.0, 4), |x| Complex64::new((-x).exp(), 0.0));
        assert!((v.re - (1.0 - (-2.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn graded_edges_cover_interval() {
        let e = graded_edges(0.0, 40.0, 30, 0.01);
        assert_eq!(e.len(), 31);
        assert!((e[1] - 0.01).abs() < 1e-12);
        assert_eq!(*e.last().unwrap(), 40.0);
        assert!(e.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn split_edges_contain_breaks() {
        let e = split_edges(-5.0, 5.0, &[0.0, 1.3], 6, 0.05);
        assert!(e.iter().any(|&x| x == 0.0) && e.iter().any(|&x| x == 1.3));
        assert!(e.windows(2).all(|w| w[1] > w[0]));
    }
}
