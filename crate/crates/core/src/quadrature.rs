//! Composite quadrature over `[0, 2π]` split at caller-supplied breakpoints.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    /// `nodes` counts Gauss–Legendre nodes per panel.
    GaussLegendre,
    /// `nodes` counts Simpson intervals over the whole domain, shared between
    /// panels in proportion to their length.
    CompositeSimpson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    pub nodes: usize,
    /// Breakpoints are reduced modulo `2π` before panels are formed.
    pub periodic: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rule: QuadratureRule::GaussLegendre,
            nodes: 24,
            periodic: true,
        }
    }
}

impl QuadratureSpec {
    pub fn gauss_legendre(nodes: usize) -> Self {
        Self {
            rule: QuadratureRule::GaussLegendre,
            nodes,
            periodic: true,
        }
    }

    pub fn simpson(intervals: usize) -> Self {
        Self {
            rule: QuadratureRule::CompositeSimpson,
            nodes: intervals,
            periodic: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 16 {
            return Err(Error::validation("quadrature.nodes", "must be at least 16"));
        }
        if self.rule == QuadratureRule::CompositeSimpson && self.nodes % 2 != 0 {
            return Err(Error::validation(
                "quadrature.nodes",
                "Simpson needs an even interval count",
            ));
        }
        Ok(())
    }
}

/// A ready-to-use rule with Gauss–Legendre abscissae precomputed on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Quadrature {
    spec: QuadratureSpec,
    abscissae: Vec<f64>,
    weights: Vec<f64>,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

impl Quadrature {
    pub fn new(spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let (abscissae, weights) = match spec.rule {
            QuadratureRule::GaussLegendre => gauss_legendre_nodes(spec.nodes),
            QuadratureRule::CompositeSimpson => (Vec::new(), Vec::new()),
        };
        Ok(Self {
            spec,
            abscissae,
            weights,
        })
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    /// Sorted panel edges covering `[0, 2π]` from interior breakpoints.
    pub fn panel_edges(&self, breakpoints: &[f64]) -> Vec<f64> {
        let mut edges = vec![0.0, TAU];
        for &b in breakpoints {
            let b = if self.spec.periodic {
                b.rem_euclid(TAU)
            } else {
                b
            };
            if b > 0.0 && b < TAU {
                edges.push(b);
            }
        }
        edges.sort_by(|a, b| a.total_cmp(b));
        edges.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        edges
    }

    /// Visits every `(node, weight)` pair of the composite rule on `[0, 2π]`.
    pub fn for_each_node(&self, breakpoints: &[f64], mut visit: impl FnMut(f64, f64)) {
        let edges = self.panel_edges(breakpoints);
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            match self.spec.rule {
                QuadratureRule::GaussLegendre => {
                    let mid = 0.5 * (a + b);
                    let half = 0.5 * (b - a);
                    for (x, wt) in self.abscissae.iter().zip(&self.weights) {
                        visit(mid + half * x, half * wt);
                    }
                }
                QuadratureRule::CompositeSimpson => {
                    let share = (self.spec.nodes as f64 * (b - a) / TAU).round() as usize;
                    let n = (share.max(2) + 1) & !1;
                    let h = (b - a) / n as f64;
                    for k in 0..=n {
                        let c = if k == 0 || k == n {
                            1.0
                        } else if k % 2 == 1 {
                            4.0
                        } else {
                            2.0
                        };
                        visit(a + h * k as f64, c * h / 3.0);
                    }
                }
            }
        }
    }

    pub fn integrate(&self, breakpoints: &[f64], mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut sum = 0.0;
        self.for_each_node(breakpoints, |x, w| sum += w * f(x));
        sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_nodes_integrate_polynomials_exactly() {
        let (x, w) = gauss_legendre_nodes(8);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 14 is within 2n - 1
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((i - 2.0 / 15.0).abs() < 1e-14);
        let odd: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(7)).sum();
        assert!(odd.abs() < 1e-15);
    }

    #[test]
    fn gl_nodes_large_n() {
        let (x, w) = gauss_legendre_nodes(64);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn sin_squared_over_period() {
        for spec in [
            QuadratureSpec::gauss_legendre(16),
            QuadratureSpec::simpson(512),
        ] {
            let q = Quadrature::new(spec).unwrap();
            let v = q.integrate(&[1.0, 2.5], |t| t.sin().powi(2));
            assert!((v - PI).abs() < 1e-9, "{spec:?}: {v}");
        }
    }

    #[test]
    fn kink_on_breakpoint_is_exact() {
        let q = Quadrature::new(QuadratureSpec::gauss_legendre(16)).unwrap();
        let v = q.integrate(&[PI], |t| (t - PI).abs());
        assert!((v - PI * PI).abs() < 1e-12);
    }

    #[test]
    fn periodic_breakpoints_wrap() {
        let q = Quadrature::new(QuadratureSpec::gauss_legendre(16)).unwrap();
        let edges = q.panel_edges(&[-1.0, TAU + 1.0]);
        assert_eq!(edges.len(), 4);
        assert!((edges[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::gauss_legendre(8).validate().is_err());
        assert!(QuadratureSpec::simpson(513).validate().is_err());
        assert!(QuadratureSpec::simpson(512).validate().is_ok());
    }
}
