//! Riesz potentials, the two-weight Stein-Weiss inequality, and the
//! kernel operators of the duality argument: the split `S_1 / S_2`, the
//! homogeneous kernel `K`, the operator `U`, and its radial reduction.
//!
//! Exponents are kept explicit: `q` is the Lebesgue exponent of the
//! operator being bounded and `q' = q/(q-1)` its conjugate.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quadrature::{centered_cell_power_integral, geometric_nodes, sphere_area};
use crate::radial::{log_trapezoid, RadialProfile};
use crate::report::{Identity, QuotientResult};
use crate::schur::conjugate;
use crate::spectral::{
    fractional_laplacian, lq_norm, power_weighted_lq_norm, weight_table, Centering, SampledField,
    WeightRule,
};

/// Admissibility of `(lambda, p, q, alpha, beta)` in dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteinWeissParams {
    pub d: usize,
    pub lambda: f64,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// One failed admissibility condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// `0 < lambda < d`
    KernelOrder { lambda: f64, d: usize },
    /// `1 < p < inf`
    SourceExponent { p: f64 },
    /// `alpha < d/p'`
    SourceWeight { alpha: f64, bound: f64 },
    /// `p <= q < inf`
    TargetExponent { p: f64, q: f64 },
    /// `beta < d/q`
    TargetWeight { beta: f64, bound: f64 },
    /// `alpha + beta >= 0`
    WeightBalance { sum: f64 },
    /// `1/q = 1/p + (lambda + alpha + beta)/d - 1`
    Scaling { inv_q: f64, predicted: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::KernelOrder { lambda, d } => {
                write!(f, "kernel order lambda = {lambda} must satisfy 0 < lambda < d = {d}")
            }
            Violation::SourceExponent { p } => write!(f, "p = {p} must satisfy 1 < p < inf"),
            Violation::SourceWeight { alpha, bound } => {
                write!(f, "alpha = {alpha} must be below d/p' = {bound}")
            }
            Violation::TargetExponent { p, q } => {
                write!(f, "q = {q} must satisfy p = {p} <= q < inf")
            }
            Violation::TargetWeight { beta, bound } => {
                write!(f, "beta = {beta} must be below d/q = {bound}")
            }
            Violation::WeightBalance { sum } => {
                write!(f, "alpha + beta = {sum} must be nonnegative")
            }
            Violation::Scaling { inv_q, predicted } => write!(
                f,
                "scaling relation fails: 1/q = {inv_q} but 1/p + (lambda+alpha+beta)/d - 1 = {predicted}"
            ),
        }
    }
}

const SCALING_TOL: f64 = 1e-12;

impl SteinWeissParams {
    pub fn new(d: usize, lambda: f64, p: f64, q: f64, alpha: f64, beta: f64) -> Result<Self> {
        let params = SteinWeissParams {
            d,
            lambda,
            p,
            q,
            alpha,
            beta,
        };
        params.validate()?;
        Ok(params)
    }

    /// `p = q`, `alpha = 0`, `beta = s`, `lambda = d - s`.
    pub fn hardy_specialization(d: usize, s: f64, q: f64) -> Result<Self> {
        Self::new(d, d as f64 - s, q, q, 0.0, s)
    }

    /// Every failed condition, in the order they are listed above.
    pub fn violations(&self) -> Vec<Violation> {
        let d = self.d as f64;
        let mut out = Vec::new();
        if !(self.lambda > 0.0 && self.lambda < d) {
            out.push(Violation::KernelOrder {
                lambda: self.lambda,
                d: self.d,
            });
        }
        let p_ok = self.p > 1.0 && self.p.is_finite();
        if !p_ok {
            out.push(Violation::SourceExponent { p: self.p });
        }
        if p_ok {
            let bound = d / conjugate(self.p);
            if !(self.alpha < bound) {
                out.push(Violation::SourceWeight {
                    alpha: self.alpha,
                    bound,
                });
            }
        }
        if !(self.p <= self.q && self.q.is_finite()) {
            out.push(Violation::TargetExponent {
                p: self.p,
                q: self.q,
            });
        }
        let bound = d / self.q;
        if !(self.beta < bound) {
            out.push(Violation::TargetWeight {
                beta: self.beta,
                bound,
            });
        }
        let sum = self.alpha + self.beta;
        if !(sum >= 0.0) {
            out.push(Violation::WeightBalance { sum });
        }
        let inv_q = 1.0 / self.q;
        let predicted = 1.0 / self.p + (self.lambda + self.alpha + self.beta) / d - 1.0;
        if !((inv_q - predicted).abs() <= SCALING_TOL) {
            out.push(Violation::Scaling { inv_q, predicted });
        }
        out
    }

    /// First failed condition, if any.
    pub fn validate(&self) -> Result<()> {
        match self.violations().into_iter().next() {
            Some(v) => Err(Error::SteinWeiss(v)),
            None => Ok(()),
        }
    }
}

/// `c` with `T_lambda f = c |D|^{-(d-lambda)} f` under `|D| <-> |2 pi xi|`:
/// `2^{d-lambda} pi^{d/2} Gamma((d-lambda)/2) / Gamma(lambda/2)`.
pub fn riesz_constant(d: usize, lambda: f64) -> Result<f64> {
    let df = d as f64;
    if !(lambda > 0.0 && lambda < df) {
        return Err(Error::SteinWeiss(Violation::KernelOrder { lambda, d }));
    }
    let s = df - lambda;
    Ok(2f64.powf(s) * std::f64::consts::PI.powf(0.5 * df) * gamma(0.5 * s) / gamma(0.5 * lambda))
}

/// `T_lambda f = int f(y) |x - y|^{-lambda} dy`, evaluated spectrally.
pub fn riesz_potential(f: &SampledField, lambda: f64) -> Result<SampledField> {
    let d = f.grid().dim();
    let c = riesz_constant(d, lambda)?;
    let g = fractional_laplacian(f, -(d as f64 - lambda))?;
    Ok(g.scale(Complex64::new(c, 0.0)))
}

/// `||T_lambda f |x|^{-beta}||_q` against `||f |x|^alpha||_p`.
pub fn stein_weiss_check(f: &SampledField, params: &SteinWeissParams) -> Result<QuotientResult> {
    params.validate()?;
    if params.d != f.grid().dim() {
        return Err(Error::InvalidGrid(format!(
            "parameters are for d = {}, field lives in d = {}",
            params.d,
            f.grid().dim()
        )));
    }
    let t = riesz_potential(f, params.lambda)?;
    let lhs = power_weighted_lq_norm(&t, params.beta, params.q, WeightRule::CellAverage)?;
    let rhs = power_weighted_lq_norm(f, -params.alpha, params.p, WeightRule::CellAverage)?;
    Ok(QuotientResult {
        identity: Identity::SteinWeiss,
        d: params.d,
        s: params.d as f64 - params.lambda,
        q: params.q,
        lhs,
        rhs,
    })
}

/// Stein-Weiss quotient at `p = q`, `alpha = 0`, `beta = s`, `lambda = d - s`
/// next to the fractional quotient it should reproduce up to `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct Specialization {
    pub stein_weiss: QuotientResult,
    pub fractional: QuotientResult,
    pub constant: f64,
}

impl Specialization {
    /// `stein_weiss / (c * fractional)`, `None` if either quotient is undefined.
    pub fn ratio(&self) -> Option<f64> {
        Some(self.stein_weiss.quotient()? / (self.constant * self.fractional.quotient()?))
    }
}

/// Runs the Stein-Weiss check on `g = |D|^s f` and the fractional check on
/// `f - mean(f)`, the function `T_{d-s} g / c` returns on the periodic box.
pub fn specialization_check(f: &SampledField, s: f64, q: f64) -> Result<Specialization> {
    let d = f.grid().dim();
    let params = SteinWeissParams::hardy_specialization(d, s, q)?;
    let mean = f.mean();
    let f0 = f.map(|v| v - mean);
    let g = fractional_laplacian(&f0, s)?;
    Ok(Specialization {
        stein_weiss: stein_weiss_check(&g, &params)?,
        fractional: crate::hardy::fractional_hardy_quotient(&f0, s, q)?,
        constant: riesz_constant(d, params.lambda)?,
    })
}

/// Largest `n` allowed for the direct pair quadratures in each dimension.
pub fn direct_grid_limit(d: usize) -> usize {
    match d {
        1 => 512,
        2 => 32,
        _ => 16,
    }
}

fn check_direct_grid(f: &SampledField) -> Result<()> {
    let g = f.grid();
    let max = direct_grid_limit(g.dim());
    if g.n() > max {
        return Err(Error::GridLimit {
            dim: g.dim(),
            n: g.n(),
            max,
        });
    }
    if f.centering() != Centering::CellCentered {
        return Err(Error::SampleAtOrigin);
    }
    Ok(())
}

/// Sample positions and squared radii.
fn points(f: &SampledField) -> (Vec<[f64; 3]>, Vec<f64>) {
    let pos: Vec<[f64; 3]> = (0..f.grid().len()).map(|i| f.position(i)).collect();
    let r2 = pos.iter().map(|x| x.iter().map(|v| v * v).sum()).collect();
    (pos, r2)
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn check_split_order(d: usize, s: f64, q: f64) -> Result<()> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::InvalidExponent(format!("need 1 < q < inf, got q = {q}")));
    }
    let bound = d as f64 / conjugate(q);
    if !(s > 0.0 && s < bound) {
        return Err(Error::Inadmissible(format!(
            "need 0 < s < d/q' = {bound}, got s = {s}"
        )));
    }
    Ok(())
}

/// The two pieces of the split.
#[derive(Debug, Clone)]
pub struct Split {
    /// `|x|^{-s} int |g(y)| |x-y|^{-(d-s)} dy`
    pub s1: SampledField,
    /// `int_{|y| <= |x|/2} |g(y)| |y|^{-s} |x-y|^{-(d-s)} dy`
    pub s2: SampledField,
}

/// `S_1` and `S_2` by direct quadrature.
///
/// Off-diagonal pairs use the midpoint rule; the diagonal pair uses the
/// exact integral of `|z|^{-(d-s)}` over the cell.
pub fn split_s1_s2(g: &SampledField, s: f64, q: f64) -> Result<Split> {
    let d = g.grid().dim();
    check_split_order(d, s, q)?;
    check_direct_grid(g)?;
    let h_d = g.grid().cell_volume();
    let self_cell = centered_cell_power_integral(d, d as f64 - s, g.grid().spacing());
    let (pos, r2) = points(g);
    let a: Vec<f64> = g.values().iter().map(|v| v.norm()).collect();
    let k = d as f64 - s;
    let mut s1 = Vec::with_capacity(a.len());
    let mut s2 = Vec::with_capacity(a.len());
    for (x, (px, &rx2)) in pos.iter().zip(&r2).enumerate() {
        let mut sum1 = 0.0;
        let mut sum2 = 0.0;
        for (y, (py, &ry2)) in pos.iter().zip(&r2).enumerate() {
            if a[y] == 0.0 {
                continue;
            }
            let kern = if x == y {
                self_cell
            } else {
                dist(px, py).powf(-k) * h_d
            };
            sum1 += a[y] * kern;
            if 4.0 * ry2 <= rx2 {
                sum2 += a[y] * ry2.powf(-0.5 * s) * kern;
            }
        }
        s1.push(Complex64::new(rx2.powf(-0.5 * s) * sum1, 0.0));
        s2.push(Complex64::new(sum2, 0.0));
    }
    Ok(Split {
        s1: SampledField::new(*g.grid(), g.centering(), s1)?,
        s2: SampledField::new(*g.grid(), g.centering(), s2)?,
    })
}

/// Full value `|T_{d-s}(g / |.|^s)(x)|` by the same quadrature as the split,
/// and `max_x |T| / (S_1 + S_2)`.
#[derive(Debug, Clone)]
pub struct Domination {
    pub full: SampledField,
    pub ratio: f64,
}

/// The split dominates the full kernel: `|T(x)| <= 2^s (S_1 + S_2)(x)`.
pub fn split_domination(g: &SampledField, s: f64, split: &Split) -> Result<Domination> {
    let d = g.grid().dim();
    check_direct_grid(g)?;
    let h_d = g.grid().cell_volume();
    let self_cell = centered_cell_power_integral(d, d as f64 - s, g.grid().spacing());
    let (pos, r2) = points(g);
    let k = d as f64 - s;
    let mut full = Vec::with_capacity(pos.len());
    let mut ratio = 0.0f64;
    for (x, px) in pos.iter().enumerate() {
        let mut sum = Complex64::new(0.0, 0.0);
        for (y, (py, &ry2)) in pos.iter().zip(&r2).enumerate() {
            let v = g.values()[y];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let kern = if x == y {
                self_cell
            } else {
                dist(px, py).powf(-k) * h_d
            };
            sum += v * ry2.powf(-0.5 * s) * kern;
        }
        let t = sum.norm();
        let bound = split.s1.values()[x].re + split.s2.values()[x].re;
        if t > 0.0 {
            ratio = ratio.max(t / bound);
        }
        full.push(Complex64::new(t, 0.0));
    }
    Ok(Domination {
        full: SampledField::new(*g.grid(), g.centering(), full)?,
        ratio,
    })
}

/// `1 / (|y|^s |x|^{d-s})` on `|y| <= |x|/2`, else 0. Homogeneous of degree `-d`.
pub fn kernel_k(x_norm: f64, y_norm: f64, s: f64, d: usize) -> Result<f64> {
    if !(x_norm > 0.0) {
        return Err(Error::SampleAtOrigin);
    }
    if y_norm < 0.0 || y_norm.is_nan() {
        return Err(Error::Inadmissible(format!("|y| = {y_norm} is not a norm")));
    }
    if y_norm > 0.5 * x_norm {
        return Ok(0.0);
    }
    Ok(1.0 / (y_norm.powf(s) * x_norm.powf(d as f64 - s)))
}

/// `Ug(x) = int_{|y| <= |x|/2} |g(y)| |y|^{-s} |x|^{-(d-s)} dy` as a direct
/// pair sum, with the cell-averaged `|y|^{-s}`.
pub fn apply_u(g: &SampledField, s: f64) -> Result<SampledField> {
    let d = g.grid().dim();
    if !(s > 0.0 && s < d as f64) {
        return Err(Error::Inadmissible(format!("need 0 < s < d = {d}, got s = {s}")));
    }
    check_direct_grid(g)?;
    let w = weight_table(g.grid(), g.centering(), s, WeightRule::CellAverage)?;
    let h_d = g.grid().cell_volume();
    let (pos, r2) = points(g);
    let a: Vec<f64> = g
        .values()
        .iter()
        .zip(w.iter())
        .map(|(v, w)| v.norm() * w * h_d)
        .collect();
    let values = pos
        .iter()
        .zip(&r2)
        .map(|(px, &rx2)| {
            let mut sum = 0.0;
            for (py, (&ry2, &ay)) in pos.iter().zip(r2.iter().zip(&a)) {
                if 4.0 * ry2 <= rx2 {
                    debug_assert!(dist(px, py) >= 0.5 * rx2.sqrt() * (1.0 - 1e-12));
                    sum += ay;
                }
            }
            Complex64::new(sum * rx2.powf(-0.5 * (d as f64 - s)), 0.0)
        })
        .collect();
    SampledField::new(*g.grid(), g.centering(), values)
}

/// Which quadrature of the radial operator to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialForm {
    /// `int_0^inf r^{d-1} K(R, r) |g(r)| dr` on the profile's own nodes.
    Direct,
    /// `int_0^inf K(1, t) |g(tR)| t^{d-1} dt` on a fixed `t` grid.
    Substituted,
}

/// Nodes of the substituted form on `(T_MIN, 1/2]`.
const T_NODES: usize = 1024;
const T_MIN: f64 = 1e-6;

/// `U_eta g(R)` at each radius of the profile.
pub fn apply_u_radial(profile: &RadialProfile, s: f64, form: RadialForm) -> Result<RadialProfile> {
    let d = profile.dim();
    let df = d as f64;
    if !(s > 0.0 && s < df) {
        return Err(Error::Inadmissible(format!("need 0 < s < d = {d}, got s = {s}")));
    }
    let e = df - s;
    let values = match form {
        RadialForm::Direct => {
            let radii = profile.radii();
            let g: Vec<f64> = profile.values().iter().map(|v| v.abs()).collect();
            // r^{d-1} K(R, r) = R^{-(d-s)} r^{d-1-s}; in ln r the integrand is r^{d-s} |g|
            let f: Vec<f64> = radii.iter().zip(&g).map(|(r, g)| r.powf(e) * g).collect();
            let head = g[0] * radii[0].powf(e) / e;
            radii
                .iter()
                .map(|&big_r| {
                    let cut = 0.5 * big_r;
                    if cut <= radii[0] {
                        return g[0] * cut.powf(e) / e * big_r.powf(-e);
                    }
                    let m = radii.partition_point(|&r| r <= cut);
                    let mut sum = head + log_trapezoid(&radii[..m], &f[..m]);
                    if m < radii.len() {
                        let last = radii[m - 1];
                        let fc = cut.powf(e) * profile.eval(cut).abs();
                        sum += 0.5 * (cut / last).ln() * (f[m - 1] + fc);
                    }
                    sum * big_r.powf(-e)
                })
                .collect()
        }
        RadialForm::Substituted => {
            let t = geometric_nodes(T_MIN, 0.5, T_NODES);
            profile
                .radii()
                .iter()
                .map(|&big_r| {
                    // K(1, t) t^{d-1} = t^{d-1-s}; in ln t the integrand is t^{d-s} |g(tR)|
                    let f: Vec<f64> = t
                        .iter()
                        .map(|&t| t.powf(e) * profile.eval(t * big_r).abs())
                        .collect();
                    let head = profile.eval(T_MIN * big_r).abs() * T_MIN.powf(e) / e;
                    head + log_trapezoid(&t, &f)
                })
                .collect()
        }
    };
    profile.with_values(values)
}

/// `int_0^1 t^{d - d/q - 1 - s} dt = 1 / (d - d/q - s)`.
pub fn j_constant(d: usize, q: f64, s: f64) -> Result<f64> {
    let e = d as f64 - d as f64 / q - s;
    if !(e > 0.0) {
        return Err(Error::JDiverges(e));
    }
    Ok(1.0 / e)
}

/// `||Ug||_q^q` against `J^q |S^{d-1}|^q ||g||_q^q`.
pub fn u_bound_check(g: &SampledField, s: f64, q: f64) -> Result<QuotientResult> {
    let d = g.grid().dim();
    let j = j_constant(d, q, s)?;
    let u = apply_u(g, s)?;
    let lhs = lq_norm(&u, q)?.powf(q);
    let rhs = (j * sphere_area(d)).powf(q) * lq_norm(g, q)?.powf(q);
    Ok(QuotientResult {
        identity: Identity::UBound,
        d,
        s,
        q,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;
    use std::f64::consts::PI;

    #[test]
    fn each_condition_is_named() {
        let ok = SteinWeissParams {
            d: 2,
            lambda: 1.2,
            p: 2.0,
            q: 2.0,
            alpha: 0.2,
            beta: 0.6,
        };
        assert!(ok.validate().is_ok());
        let bad = SteinWeissParams { lambda: 2.0, ..ok };
        assert!(matches!(
            bad.validate(),
            Err(Error::SteinWeiss(Violation::KernelOrder { .. }))
        ));
        let bad = SteinWeissParams { beta: 1.0, ..ok };
        assert!(matches!(
            bad.validate(),
            Err(Error::SteinWeiss(Violation::TargetWeight { .. }))
        ));
        let bad = SteinWeissParams { lambda: 1.1, ..ok };
        assert!(matches!(
            bad.validate(),
            Err(Error::SteinWeiss(Violation::Scaling { .. }))
        ));
    }

    #[test]
    fn riesz_constant_matches_gaussian_oracle() {
        // T_lambda of exp(-pi |y|^2) at 0 equals |S^{d-1}| int r^{d-1-lambda} exp(-pi r^2) dr;
        // spectrally it is c int |2 pi xi|^{lambda-d} exp(-pi |xi|^2) dxi.
        for (d, lambda) in [(1usize, 0.5), (2, 1.2), (3, 2.0), (3, 1.0)] {
            let area = sphere_area(d);
            let radial = |p: f64| {
                let m = 400_000;
                let top = 12.0;
                (0..m)
                    .map(|i| {
                        let r = (i as f64 + 0.5) * top / m as f64;
                        r.powf(p) * (-PI * r * r).exp()
                    })
                    .sum::<f64>()
                    * top
                    / m as f64
            };
            let df = d as f64;
            let physical = area * radial(df - 1.0 - lambda);
            let spectral = area * (2.0 * PI).powf(lambda - df) * radial(lambda - 1.0);
            let c = riesz_constant(d, lambda).unwrap();
            assert!((c * spectral / physical - 1.0).abs() < 2e-3, "d={d} lambda={lambda}");
        }
    }

    #[test]
    fn kernel_values() {
        assert_eq!(kernel_k(2.0, 1.0, 1.0, 3).unwrap(), 0.25);
        assert_eq!(kernel_k(2.0, 1.5, 1.0, 3).unwrap(), 0.0);
        assert!(kernel_k(0.0, 0.0, 1.0, 3).is_err());
        let a = kernel_k(3.0 * 2.0, 3.0 * 0.5, 0.7, 3).unwrap();
        let b = kernel_k(2.0, 0.5, 0.7, 3).unwrap();
        assert!((a * 27.0 / b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn j_values() {
        assert_eq!(j_constant(3, 2.0, 1.0).unwrap(), 2.0);
        assert_eq!(j_constant(2, 2.0, 0.5).unwrap(), 2.0);
        assert!(matches!(j_constant(3, 2.0, 1.5), Err(Error::JDiverges(_))));
    }

    #[test]
    fn direct_operators_respect_grid_limits() {
        let g = GridSpec::new(3, 32, 8.0).unwrap();
        let f = SampledField::zeros(g, Centering::CellCentered);
        assert!(matches!(apply_u(&f, 1.0), Err(Error::GridLimit { .. })));
    }

    #[test]
    fn zero_input_gives_zero() {
        let g = GridSpec::new(2, 16, 4.0).unwrap();
        let f = SampledField::zeros(g, Centering::CellCentered);
        assert_eq!(apply_u(&f, 0.5).unwrap().max_abs(), 0.0);
        let sp = split_s1_s2(&f, 0.5, 2.0).unwrap();
        assert_eq!(sp.s1.max_abs() + sp.s2.max_abs(), 0.0);
    }
}
