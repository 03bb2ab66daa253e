use std::f64::consts::PI;

/// Nodes per Gauss-Legendre panel.
pub const DEFAULT_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    CompositeMidpoint,
    CompositeGaussLegendre { order: usize },
}

/// Fixed nodes and positive weights on `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub scheme: QuadratureScheme,
    pub panels: usize,
    pub lo: f64,
    pub hi: f64,
}

impl QuadratureGrid {
    /// Composite Gauss-Legendre with `panels` equal panels per segment,
    /// where segments are cut at the interior `breakpoints`.
    pub fn composite_gauss_legendre(lo: f64, hi: f64, panels: usize, order: usize, breakpoints: &[f64]) -> Self {
        assert!(lo < hi && panels > 0 && order > 0);
        let (x_ref, w_ref) = gauss_legendre(order);
        let cuts = segment_cuts(lo, hi, breakpoints);
        let mut nodes = Vec::with_capacity(cuts.len() * panels * order);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for seg in cuts.windows(2) {
            let h = (seg[1] - seg[0]) / panels as f64;
            for p in 0..panels {
                let left = seg[0] + p as f64 * h;
                let mid = left + 0.5 * h;
                for (x, w) in x_ref.iter().zip(&w_ref) {
                    nodes.push(mid + 0.5 * h * x);
                    weights.push(0.5 * h * w);
                }
            }
        }
        Self {
            nodes,
            weights,
            scheme: QuadratureScheme::CompositeGaussLegendre { order },
            panels,
            lo,
            hi,
        }
    }

    pub fn composite_midpoint(lo: f64, hi: f64, panels: usize) -> Self {
        assert!(lo < hi && panels > 0);
        let h = (hi - lo) / panels as f64;
        Self {
            nodes: (0..panels).map(|k| lo + (k as f64 + 0.5) * h).collect(),
            weights: vec![h; panels],
            scheme: QuadratureScheme::CompositeMidpoint,
            panels,
            lo,
            hi,
        }
    }

    /// Same scheme with twice the panels.
    pub fn refined(&self, breakpoints: &[f64]) -> Self {
        match self.scheme {
            QuadratureScheme::CompositeMidpoint => Self::composite_midpoint(self.lo, self.hi, 2 * self.panels),
            QuadratureScheme::CompositeGaussLegendre { order } => {
                Self::composite_gauss_legendre(self.lo, self.hi, 2 * self.panels, order, breakpoints)
            }
        }
    }

    /// Weighted sum in fixed node order.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

fn segment_cuts(lo: f64, hi: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut cuts = vec![lo];
    let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > lo && b < hi).collect();
    inner.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    inner.dedup();
    cuts.extend(inner);
    cuts.push(hi);
    cuts
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// `P_n`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_rule_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn kink_breakpoint_gives_exact_answer() {
        // ∫_{1/2}^{2} |x − 1| dx = 1/8 + 1/2
        let g = QuadratureGrid::composite_gauss_legendre(0.5, 2.0, 3, 4, &[1.0]);
        assert!((g.integrate(|x| (x - 1.0).abs()) - 0.625).abs() < 1e-15);
        assert!(g.nodes.iter().all(|&x| x > 0.5 && x < 2.0));
        assert!(g.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn midpoint_converges_quadratically() {
        let f = |x: f64| x.exp();
        let exact = 1f64.exp() - 1.0;
        let e1 = (QuadratureGrid::composite_midpoint(0.0, 1.0, 50).integrate(f) - exact).abs();
        let e2 = (QuadratureGrid::composite_midpoint(0.0, 1.0, 100).integrate(f) - exact).abs();
        assert!((e1 / e2 - 4.0).abs() < 0.05);
    }
}
