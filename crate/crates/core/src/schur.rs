//! Dyadic Schur test and the Hardy kernel `min{(NR)^{-s}, (NR)^{d/q-s}}`.
//!
//! Dyadic indices are stored as exponents: `N = 2^n`, `R = 2^r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonnegative kernel on a finite rectangle of dyadic exponents with a
/// candidate weight sequence on the `N` side and the `R` side.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurKernel {
    n_levels: Vec<i32>,
    r_levels: Vec<i32>,
    /// Row-major `alpha[n][r]`.
    alpha: Vec<f64>,
    p_n: Vec<f64>,
    p_r: Vec<f64>,
}

impl SchurKernel {
    /// Kernel from a closure over exponents, with `p == 1` on both sides.
    pub fn from_fn<F>(n_levels: Vec<i32>, r_levels: Vec<i32>, alpha: F) -> Result<Self>
    where
        F: Fn(i32, i32) -> f64,
    {
        let mut values = Vec::with_capacity(n_levels.len() * r_levels.len());
        for &n in &n_levels {
            for &r in &r_levels {
                let a = alpha(n, r);
                if !(a >= 0.0 && a.is_finite()) {
                    return Err(Error::Inadmissible(format!(
                        "kernel entry alpha(2^{n}, 2^{r}) = {a} is not a finite nonnegative number"
                    )));
                }
                values.push(a);
            }
        }
        let p_n = vec![1.0; n_levels.len()];
        let p_r = vec![1.0; r_levels.len()];
        Ok(SchurKernel {
            n_levels,
            r_levels,
            alpha: values,
            p_n,
            p_r,
        })
    }

    /// Square kernel on `lo..=hi` in both indices.
    pub fn square<F>(lo: i32, hi: i32, alpha: F) -> Result<Self>
    where
        F: Fn(i32, i32) -> f64,
    {
        let levels: Vec<i32> = (lo..=hi).collect();
        Self::from_fn(levels.clone(), levels, alpha)
    }

    pub fn diagonal(lo: i32, hi: i32) -> Self {
        Self::square(lo, hi, |n, r| if n == r { 1.0 } else { 0.0 }).expect("valid kernel")
    }

    /// The Hardy kernel on a rectangle of exponents.
    pub fn hardy(n_levels: Vec<i32>, r_levels: Vec<i32>, s: f64, d: f64, q: f64) -> Result<Self> {
        check_hardy_params(s, d, q)?;
        Self::from_fn(n_levels, r_levels, |n, r| {
            hardy_alpha_exponent(n + r, s, d / q)
        })
    }

    /// Replace the weight sequence; a square kernel uses the same `p` for
    /// both indices, so pass it for both.
    pub fn with_weights(mut self, p_n: Vec<f64>, p_r: Vec<f64>) -> Result<Self> {
        if p_n.len() != self.n_levels.len() || p_r.len() != self.r_levels.len() {
            return Err(Error::Inadmissible("weight sequence length mismatch".into()));
        }
        if p_n.iter().chain(&p_r).any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::Inadmissible("Schur weights must be positive".into()));
        }
        self.p_n = p_n;
        self.p_r = p_r;
        Ok(self)
    }

    pub fn n_levels(&self) -> &[i32] {
        &self.n_levels
    }

    pub fn r_levels(&self) -> &[i32] {
        &self.r_levels
    }

    pub fn alpha(&self, i: usize, j: usize) -> f64 {
        self.alpha[i * self.r_levels.len() + j]
    }
}

/// Suprema in the two Schur conditions and the constant they give.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchurReport {
    /// `sup_R (sum_N alpha p_N^{q'/q})^{q/q'} / p_R`
    pub a1: f64,
    /// `sup_N (sum_R alpha p_R) / p_N`
    pub a2: f64,
    /// `a1 * a2`
    pub bound: f64,
    pub q: f64,
}

pub fn conjugate(q: f64) -> f64 {
    q / (q - 1.0)
}

pub fn schur_conditions(k: &SchurKernel, q: f64) -> Result<SchurReport> {
    if q.is_nan() || q <= 1.0 || q.is_infinite() {
        return Err(Error::InvalidExponent(format!("Schur test needs 1 < q < inf, got {q}")));
    }
    // q'/q = 1/(q-1) and q/q' = q-1
    let inner = 1.0 / (q - 1.0);
    let outer = q - 1.0;
    let mut a1 = 0.0f64;
    for (j, &p_r) in k.p_r.iter().enumerate() {
        let col: f64 = k
            .p_n
            .iter()
            .enumerate()
            .map(|(i, &p_n)| k.alpha(i, j) * p_n.powf(inner))
            .sum();
        a1 = a1.max(col.powf(outer) / p_r);
    }
    let mut a2 = 0.0f64;
    for (i, &p_n) in k.p_n.iter().enumerate() {
        let row: f64 = k
            .p_r
            .iter()
            .enumerate()
            .map(|(j, &p_r)| k.alpha(i, j) * p_r)
            .sum();
        a2 = a2.max(row / p_n);
    }
    Ok(SchurReport {
        a1,
        a2,
        bound: a1 * a2,
        q,
    })
}

/// Both sides of the Schur conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchurBound {
    /// `sum_R (sum_N alpha C_N)^q`
    pub lhs: f64,
    /// `A1 A2 sum_N C_N^q`
    pub rhs: f64,
    /// `lhs / rhs`, 0 when `lhs = 0`.
    pub ratio: f64,
}

pub fn schur_bound_check(k: &SchurKernel, c: &[f64], q: f64) -> Result<SchurBound> {
    if c.len() != k.n_levels.len() {
        return Err(Error::Inadmissible(format!(
            "sequence has {} entries, kernel has {} N-levels",
            c.len(),
            k.n_levels.len()
        )));
    }
    if c.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
        return Err(Error::Inadmissible("sequence must be finite and nonnegative".into()));
    }
    let report = schur_conditions(k, q)?;
    let lhs: f64 = (0..k.r_levels.len())
        .map(|j| {
            let inner: f64 = c.iter().enumerate().map(|(i, &cn)| k.alpha(i, j) * cn).sum();
            inner.powf(q)
        })
        .sum();
    let rhs = report.bound * c.iter().map(|v| v.powf(q)).sum::<f64>();
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(SchurBound { lhs, rhs, ratio })
}

fn check_hardy_params(s: f64, d: f64, q: f64) -> Result<()> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::Inadmissible(format!("need 1 < q < inf, got q = {q}")));
    }
    if !(s > 0.0 && s < d / q) {
        return Err(Error::Inadmissible(format!(
            "need 0 < s < d/q = {}, got s = {s}",
            d / q
        )));
    }
    Ok(())
}

/// Kernel value at `NR = 2^m`.
fn hardy_alpha_exponent(m: i32, s: f64, ratio: f64) -> f64 {
    let m = m as f64;
    if m >= 0.0 {
        (-s * m).exp2()
    } else {
        ((ratio - s) * m).exp2()
    }
}

/// `min{(NR)^{-s}, (NR)^{d/q - s}}` for positive reals `n`, `r`.
pub fn hardy_alpha(n: f64, r: f64, s: f64, d: f64, q: f64) -> Result<f64> {
    check_hardy_params(s, d, q)?;
    let x = n * r;
    Ok(x.powf(-s).min(x.powf(d / q - s)))
}

/// Geometric closed form `2^{-s}/(1-2^{-s}) + 1/(1-2^{-(d/q-s)})` of the row sum.
pub fn hardy_row_sum_closed_form(s: f64, ratio: f64) -> f64 {
    let a = ratio - s;
    (-s).exp2() / (1.0 - (-s).exp2()) + 1.0 / (1.0 - (-a).exp2())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowSums {
    pub sum_over_n: f64,
    pub sum_over_r: f64,
    pub closed_form: f64,
    /// Half-width `M` of the truncation `-M..=M` around the crossover.
    pub half_width: i32,
    /// Analytic bound on the omitted geometric tails.
    pub tail_bound: f64,
}

/// Row sum at `R = 1` and column sum at `N = 1` over `2^{-M}..2^M`.
pub fn hardy_row_sums_truncated(s: f64, ratio: f64, half_width: i32) -> RowSums {
    let a = ratio - s;
    // smallest terms first
    let mut sum_n = 0.0;
    for m in (1..=half_width).rev() {
        sum_n += hardy_alpha_exponent(m, s, ratio) + hardy_alpha_exponent(-m, s, ratio);
    }
    sum_n += hardy_alpha_exponent(0, s, ratio);
    let mut sum_r = 0.0;
    for m in (1..=half_width).rev() {
        // N fixed at 1, R = 2^{+-m}: same kernel values, same order
        sum_r += hardy_alpha_exponent(m, s, ratio) + hardy_alpha_exponent(-m, s, ratio);
    }
    sum_r += hardy_alpha_exponent(0, s, ratio);
    let h = half_width as f64;
    let tail = (-s * (h + 1.0)).exp2() / (1.0 - (-s).exp2())
        + (-a * (h + 1.0)).exp2() / (1.0 - (-a).exp2());
    RowSums {
        sum_over_n: sum_n,
        sum_over_r: sum_r,
        closed_form: hardy_row_sum_closed_form(s, ratio),
        half_width,
        tail_bound: tail,
    }
}

/// Row and column sums of the Hardy kernel, truncated once the analytic
/// tail drops below `1e-13`.
pub fn hardy_alpha_row_sums(s: f64, d: f64, q: f64) -> Result<RowSums> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::Inadmissible(format!("need 1 < q < inf, got q = {q}")));
    }
    let ratio = d / q;
    if s == 0.0 || s == ratio {
        return Err(Error::SchurDivergent { s, ratio });
    }
    check_hardy_params(s, d, q)?;
    let a = ratio - s;
    let slow = s.min(a);
    // tail ~ 2^{-slow M} / (1 - 2^{-slow}) < 1e-13
    let needed = ((1e-13 * (1.0 - (-slow).exp2())).log2() / -slow).ceil() as i32 + 1;
    Ok(hardy_row_sums_truncated(s, ratio, needed.clamp(20, 1 << 20)))
}
