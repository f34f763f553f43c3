//! Functions of the radius along a fixed ray, sampled on a geometric grid.

use crate::error::{Error, Result};
use crate::quadrature::geometric_nodes;

/// Number of nodes in the default geometric radius grid.
pub const DEFAULT_NODES: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    radii: Vec<f64>,
    values: Vec<f64>,
    direction: Vec<f64>,
}

impl RadialProfile {
    pub fn new(radii: Vec<f64>, values: Vec<f64>, direction: Vec<f64>) -> Result<Self> {
        if radii.len() < 2 || radii.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "radial profile needs matching radii and values (got {} and {})",
                radii.len(),
                values.len()
            )));
        }
        if !(radii[0] > 0.0) || radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid(
                "radii must be positive and strictly increasing".into(),
            ));
        }
        let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
        if direction.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidGrid("direction must be a unit vector".into()));
        }
        Ok(RadialProfile {
            radii,
            values,
            direction,
        })
    }

    /// Samples `g(r)` on the given radii along the first axis of `R^d`.
    pub fn from_fn<F: Fn(f64) -> f64>(d: usize, radii: Vec<f64>, g: F) -> Result<Self> {
        let values = radii.iter().map(|&r| g(r)).collect();
        let mut direction = vec![0.0; d.max(1)];
        direction[0] = 1.0;
        Self::new(radii, values, direction)
    }

    /// Geometric grid of [`DEFAULT_NODES`] radii from `h/2` to `L`.
    pub fn geometric<F: Fn(f64) -> f64>(d: usize, h: f64, length: f64, g: F) -> Result<Self> {
        Self::from_fn(d, geometric_nodes(0.5 * h, length, DEFAULT_NODES), g)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    /// Linear interpolation; constant below the first radius, zero beyond the last.
    pub fn eval(&self, r: f64) -> f64 {
        let first = self.radii[0];
        let last = *self.radii.last().expect("nonempty");
        if r <= first {
            return self.values[0];
        }
        if r > last {
            return 0.0;
        }
        let i = self.radii.partition_point(|&x| x < r).max(1);
        let (r0, r1) = (self.radii[i - 1], self.radii[i]);
        let t = (r - r0) / (r1 - r0);
        self.values[i - 1] * (1.0 - t) + self.values[i] * t
    }

    /// Same radii, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.radii.clone(), values, self.direction.clone())
    }

    /// `int_0^{r_max} r^p |g(r)|^m dr`, trapezoidal in `ln r` plus the exact
    /// head `int_0^{r_0}` with `g` frozen at its first sample.
    pub fn moment(&self, p: f64, m: f64) -> f64 {
        assert!(p > -1.0, "moment r^{p} not integrable at 0");
        let integrand: Vec<f64> = self
            .radii
            .iter()
            .zip(&self.values)
            .map(|(&r, &g)| r.powf(p + 1.0) * g.abs().powf(m))
            .collect();
        let r0 = self.radii[0];
        let head = self.values[0].abs().powf(m) * r0.powf(p + 1.0) / (p + 1.0);
        head + log_trapezoid(&self.radii, &integrand)
    }
}

/// `int F(r) dr / r` over the node span, trapezoidal in `ln r`, given
/// `F(r) = r * integrand(r)` at the nodes.
pub fn log_trapezoid(radii: &[f64], values: &[f64]) -> f64 {
    radii
        .windows(2)
        .zip(values.windows(2))
        .map(|(r, v)| 0.5 * (r[1] / r[0]).ln() * (v[0] + v[1]))
        .sum()
}
