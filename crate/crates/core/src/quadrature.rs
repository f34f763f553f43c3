//! Small quadrature toolbox: Gauss-Legendre rules, trapezoidal sums on
//! arbitrary nodes, and the integral of a power singularity over a cube.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, computed by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let m = order.div_ceil(2);
    let nf = order as f64;
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if order == 0 { 1.0 } else { p1 };
    let dp = order as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Tensor Gauss-Legendre integral of `f` over the axis-aligned box
/// `[lo_i, lo_i + side]^d`.
pub fn cube_integral<F>(lo: &[f64], side: f64, order: usize, f: F) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let (nodes, weights) = gauss_legendre(order);
    let d = lo.len();
    let half = 0.5 * side;
    let total = order.pow(d as u32);
    let mut acc = 0.0;
    let mut x = [0.0; 3];
    for t in 0..total {
        let mut rem = t;
        let mut w = 1.0;
        for a in 0..d {
            let i = rem % order;
            rem /= order;
            x[a] = lo[a] + half * (nodes[i] + 1.0);
            w *= weights[i] * half;
        }
        acc += w * f(&x[..d]);
    }
    acc
}

/// `int_{[0,1]^d} |u|^{-p} du` for `p < d`.
///
/// The integrand is homogeneous, so the corner sub-cube `[0,1/2]^d`
/// contributes `2^{p-d}` times the whole; the remaining `2^d - 1` sub-cubes
/// stay away from the singularity and take a plain tensor rule.
pub fn corner_power_integral(dim: usize, p: f64) -> f64 {
    assert!(p < dim as f64, "power singularity not integrable");
    let mut rest = 0.0;
    for mask in 1..(1usize << dim) {
        let lo: Vec<f64> = (0..dim)
            .map(|a| if mask >> a & 1 == 1 { 0.5 } else { 0.0 })
            .collect();
        rest += cube_integral(&lo, 0.5, 20, |u| {
            u.iter().map(|v| v * v).sum::<f64>().powf(-0.5 * p)
        });
    }
    rest / (1.0 - 2f64.powf(p - dim as f64))
}

/// `int |z|^{-p} dz` over the cube of side `h` centered at the origin.
pub fn centered_cell_power_integral(dim: usize, p: f64, h: f64) -> f64 {
    let half = 0.5 * h;
    2f64.powi(dim as i32) * half.powf(dim as f64 - p) * corner_power_integral(dim, p)
}

/// Surface area of the unit sphere in `R^d`: `2 pi^{d/2} / Gamma(d/2)`.
pub fn sphere_area(dim: usize) -> f64 {
    let d = dim as f64;
    2.0 * PI.powf(0.5 * d) / gamma(0.5 * d)
}

/// Volume of the unit ball in `R^d`.
pub fn ball_volume(dim: usize) -> f64 {
    sphere_area(dim) / dim as f64
}

/// Trapezoidal rule over arbitrary increasing nodes.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// `count` geometrically spaced points from `start` to `end` inclusive.
pub fn geometric_nodes(start: f64, end: f64, count: usize) -> Vec<f64> {
    assert!(start > 0.0 && end > start && count >= 2);
    let ratio = (end / start).ln() / (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i == count - 1 {
                end
            } else {
                start * (ratio * i as f64).exp()
            }
        })
        .collect()
}
