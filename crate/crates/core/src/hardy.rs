//! Hardy-type quotients and the step-by-step proof chains behind them.
//!
//! Quotients are reported in norm form: `lhs = ||f / |x|^s||_q` against the
//! relevant right-hand norm, so a bound constant `C` reads `lhs <= C rhs`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::littlewood_paley::{bernstein_ratio, decompose, lr_aggregate, DyadicPartition};
use crate::quadrature::{geometric_nodes, sphere_area};
use crate::radial::RadialProfile;
use crate::report::{tolerance, ChainLink, Identity, QuotientResult};
use crate::schur::{schur_bound_check, schur_conditions, SchurKernel};
use crate::spectral::{
    fractional_laplacian, gradient, lq_norm, power_weighted_lq_norm, vector_magnitude,
    weighted_lq_norm, SampledField, WeightRule,
};

/// `||(-Delta)^{s/2} f||_q`.
pub fn sobolev_seminorm(f: &SampledField, s: f64, q: f64) -> Result<f64> {
    lq_norm(&fractional_laplacian(f, s)?, q)
}

/// `||grad f||_q` with the Euclidean norm of the gradient.
pub fn gradient_norm(f: &SampledField, q: f64) -> Result<f64> {
    lq_norm(&vector_magnitude(&gradient(f))?, q)
}

fn check_fractional(d: usize, s: f64, q: f64) -> Result<()> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::Inadmissible(format!("need 1 < q < inf, got q = {q}")));
    }
    let bound = d as f64 / q;
    if !(s >= 0.0 && s < bound) {
        return Err(Error::Inadmissible(format!(
            "need 0 < s < d/q = {bound}, got s = {s}"
        )));
    }
    Ok(())
}

/// Sharp constant `2/(d-2)` of the classical inequality in norm form.
pub fn classical_constant(d: usize) -> f64 {
    2.0 / (d as f64 - 2.0)
}

/// Constant `q/(d-q)` of the gradient inequality.
pub fn gradient_constant(d: usize, q: f64) -> f64 {
    q / (d as f64 - q)
}

/// Proven constant of an identity in norm form, where one is known.
pub fn known_constant(identity: Identity, d: usize, q: f64) -> Option<f64> {
    match identity {
        Identity::ClassicalH1 if d >= 3 => Some(classical_constant(d)),
        Identity::GradientClassical if q < d as f64 => Some(gradient_constant(d, q)),
        _ => None,
    }
}

/// `||f/|x|||_2` against `||grad f||_2`, `d >= 3`.
pub fn classical_hardy_quotient(f: &SampledField) -> Result<QuotientResult> {
    let d = f.grid().dim();
    if d < 3 {
        return Err(Error::Inadmissible(format!(
            "classical inequality needs d >= 3, got d = {d}"
        )));
    }
    Ok(QuotientResult {
        identity: Identity::ClassicalH1,
        d,
        s: 1.0,
        q: 2.0,
        lhs: weighted_lq_norm(f, 1.0, 2.0)?,
        rhs: gradient_norm(f, 2.0)?,
    })
}

/// `||f/|x|^s||_q` against `||(-Delta)^{s/2} f||_q`; `s = 0` is allowed.
pub fn fractional_hardy_quotient(f: &SampledField, s: f64, q: f64) -> Result<QuotientResult> {
    let d = f.grid().dim();
    check_fractional(d, s, q)?;
    Ok(QuotientResult {
        identity: if q == 2.0 {
            Identity::FractionalL2
        } else {
            Identity::FractionalW
        },
        d,
        s,
        q,
        lhs: weighted_lq_norm(f, s, q)?,
        rhs: sobolev_seminorm(f, s, q)?,
    })
}

/// `||f/|x|^s||_q` against the Besov norm `B^s_{q,q}`.
pub fn besov_hardy_quotient(
    f: &SampledField,
    partition: &DyadicPartition,
    s: f64,
    q: f64,
) -> Result<QuotientResult> {
    let d = f.grid().dim();
    check_fractional(d, s, q)?;
    let rhs = decompose(f, partition)?.besov_norm(s, q, q)?.value;
    Ok(QuotientResult {
        identity: Identity::Besov,
        d,
        s,
        q,
        lhs: weighted_lq_norm(f, s, q)?,
        rhs,
    })
}

/// `q > 2`: `||f/|x|^s||_q` against
/// `||f||_{W^{s,q}}^{1/q} ||f||_{F^s_{q,2(q-1)}}^{(q-1)/q}`.
pub fn refined_hardy_quotient(
    f: &SampledField,
    partition: &DyadicPartition,
    s: f64,
    q: f64,
) -> Result<QuotientResult> {
    let d = f.grid().dim();
    if !(q > 2.0) {
        return Err(Error::Inadmissible(format!(
            "the refined form needs q > 2 (got q = {q}); use the fractional quotient for 1 < q <= 2"
        )));
    }
    check_fractional(d, s, q)?;
    let w = sobolev_seminorm(f, s, q)?;
    let tl = decompose(f, partition)?
        .triebel_lizorkin_norm(s, q, 2.0 * (q - 1.0))?
        .value;
    Ok(QuotientResult {
        identity: Identity::Refined,
        d,
        s,
        q,
        lhs: weighted_lq_norm(f, s, q)?,
        rhs: w.powf(1.0 / q) * tl.powf((q - 1.0) / q),
    })
}

/// `||f/|x|||_q` against `||grad f||_q` (unrefined, bound `q/(d-q)`), or
/// against `||grad f||_q^{1/q} ||f||_{F^1_{q,2(q-1)}}^{(q-1)/q}` (refined).
pub fn gradient_hardy_quotient(
    f: &SampledField,
    q: f64,
    refined: Option<&DyadicPartition>,
) -> Result<QuotientResult> {
    let d = f.grid().dim();
    check_gradient(d, q, refined.is_some())?;
    let lhs = weighted_lq_norm(f, 1.0, q)?;
    let grad = gradient_norm(f, q)?;
    let (identity, rhs) = match refined {
        None => (Identity::GradientClassical, grad),
        Some(part) => {
            let tl = decompose(f, part)?
                .triebel_lizorkin_norm(1.0, q, 2.0 * (q - 1.0))?
                .value;
            (
                Identity::GradientRefined,
                grad.powf(1.0 / q) * tl.powf((q - 1.0) / q),
            )
        }
    };
    Ok(QuotientResult {
        identity,
        d,
        s: 1.0,
        q,
        lhs,
        rhs,
    })
}

fn check_gradient(d: usize, q: f64, refined: bool) -> Result<()> {
    if !(q >= 1.0 && q < d as f64) {
        return Err(Error::Inadmissible(format!("need 1 <= q < d = {d}, got q = {q}")));
    }
    if refined && !(q > 2.0) {
        return Err(Error::Inadmissible(format!(
            "the refined gradient form needs 2 < q < d, got q = {q}"
        )));
    }
    Ok(())
}

/// `F^1_{q,2(q-1)} <= F^1_{q,2}` (pointwise, exact) and `F^1_{q,2}` against
/// `||grad f||_q` (ratio recorded, finite).
pub fn gradient_refinement_chain(
    f: &SampledField,
    partition: &DyadicPartition,
    q: f64,
) -> Result<Vec<ChainLink>> {
    check_gradient(f.grid().dim(), q, true)?;
    let dec = decompose(f, partition)?;
    let fine = dec.lr_field(1.0, 2.0 * (q - 1.0))?;
    let square = dec.lr_field(1.0, 2.0)?;
    let pointwise = fine
        .values()
        .iter()
        .zip(square.values())
        .all(|(a, b)| a.re <= b.re);
    let a = lq_norm(&fine, q)?;
    let b = lq_norm(&square, q)?;
    let grad = gradient_norm(f, q)?;
    Ok(vec![
        ChainLink {
            name: "lr-monotonicity".into(),
            lhs: a,
            rhs: b,
            pass: pointwise && a <= b,
        },
        ChainLink {
            name: "square-function-vs-gradient".into(),
            lhs: b,
            rhs: grad,
            pass: b.is_finite() && grad.is_finite() && (grad > 0.0 || b == 0.0),
        },
    ])
}

/// Both sides of the gradient inequality for a radial function in any
/// dimension, by one-dimensional quadrature:
/// `||f/|x|||_q^q = |S^{d-1}| int |f|^q r^{d-1-q} dr`,
/// `||grad f||_q^q = |S^{d-1}| int |f'|^q r^{d-1} dr`.
pub fn radial_gradient_hardy_quotient<F>(
    d: usize,
    q: f64,
    r_min: f64,
    r_max: f64,
    nodes: usize,
    f: F,
) -> Result<QuotientResult>
where
    F: Fn(f64) -> f64,
{
    check_gradient(d, q, false)?;
    let radii = geometric_nodes(r_min, r_max, nodes);
    let profile = RadialProfile::from_fn(d, radii.clone(), &f)?;
    let slope = RadialProfile::from_fn(d, radii, |r| {
        let step = 1e-5 * r;
        (f(r + step) - f(r - step)) / (2.0 * step)
    })?;
    let df = d as f64;
    let area = sphere_area(d);
    let lhs = (area * profile.moment(df - 1.0 - q, q)).powf(1.0 / q);
    let rhs = (area * slope.moment(df - 1.0, q)).powf(1.0 / q);
    Ok(QuotientResult {
        identity: Identity::GradientClassical,
        d,
        s: 1.0,
        q,
        lhs,
        rhs,
    })
}

/// Dyadic shells `R = h 2^k`, `k = 0..=log2(n/2)`; sample `i` belongs to the
/// shell with `R/2 <= |x_i| < R`, samples beyond the last shell to the last.
pub fn shell_index(grid: &crate::spectral::GridSpec, radii: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let h = grid.spacing();
    let count = (grid.n() / 2).trailing_zeros() as usize + 1;
    let shells: Vec<f64> = (0..count).map(|k| h * 2f64.powi(k as i32)).collect();
    let index = radii
        .iter()
        .map(|&r| {
            let k = shells.partition_point(|&big_r| big_r <= r);
            k.min(count - 1)
        })
        .collect();
    (shells, index)
}

/// Every factor of the shell argument for one field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellChain {
    /// `||f/|x|^s||_q^q` with midpoint weights.
    pub lhs: f64,
    /// `sum_N N^{qs} ||P_N f||_q^q`.
    pub rhs: f64,
    /// `lhs / rhs` (0 for the zero field).
    pub ratio: f64,
    /// `2^{sq} K^q A1 A2`.
    pub assembled_constant: f64,
    pub shell_volume_constant: f64,
    pub bernstein_constant: f64,
    pub a1: f64,
    pub a2: f64,
    /// Relative size of `f - sum_N P_N f`; the chain is run on `sum_N P_N f`.
    pub reconstruction_residual: f64,
    pub links: Vec<ChainLink>,
}

impl ShellChain {
    pub fn pass(&self) -> bool {
        self.links.iter().all(|l| l.pass)
    }
}

/// Shell decomposition, Bernstein step, Schur step and the end-to-end
/// ratio, applied to `g = sum_N P_N f`.
pub fn shell_chain_check(
    f: &SampledField,
    partition: &DyadicPartition,
    s: f64,
    q: f64,
) -> Result<ShellChain> {
    let grid = *f.grid();
    let d = grid.dim();
    check_fractional(d, s, q)?;
    if s == 0.0 {
        return Err(Error::Inadmissible("the shell chain needs s > 0".into()));
    }
    let dec = decompose(f, partition)?;
    let g = dec.reconstruct();
    let fmax = f.max_abs();
    let residual = if fmax > 0.0 {
        f.sub(&g)?.max_abs() / fmax
    } else {
        0.0
    };
    let radii = g.radii();
    let (shells, index) = shell_index(&grid, &radii);
    let h_d = grid.cell_volume();
    let sq = s * q;

    // link (a): lhs^q <= 2^{sq} sum_R R^{-sq} int_shell |g|^q
    let lhs = power_weighted_lq_norm(&g, s, q, WeightRule::Midpoint)?.powf(q);
    let mut shell_mass = vec![0.0; shells.len()];
    let mut shell_count = vec![0usize; shells.len()];
    for (v, &k) in g.values().iter().zip(&index) {
        shell_mass[k] += v.norm().powf(q) * h_d;
        shell_count[k] += 1;
    }
    let shell_sum: f64 = shells
        .iter()
        .zip(&shell_mass)
        .map(|(r, m)| r.powf(-sq) * m)
        .sum();
    let link_a = ChainLink::at_most(
        "shell-decomposition",
        lhs,
        2f64.powf(sq) * shell_sum,
        tolerance::EXACT,
    );

    // link (b): int_shell |P_N g|^q <= min(1, C_V B^q (NR)^d) ||P_N g||_q^q
    let shell_volume_constant = shells
        .iter()
        .zip(&shell_count)
        .map(|(r, &c)| c as f64 * h_d / r.powi(d as i32))
        .fold(0.0, f64::max);
    let freqs = dec.frequencies().to_vec();
    let mut piece_norms = Vec::with_capacity(freqs.len());
    let mut bernstein = 0.0f64;
    let mut worst_b = (0.0f64, 0.0f64, f64::NEG_INFINITY);
    let mut bernstein_ok = true;
    let mut piece_shell = Vec::with_capacity(freqs.len());
    for (piece, &n) in dec.pieces().iter().zip(&freqs) {
        let norm_q = lq_norm(piece, q)?.powf(q);
        let b = bernstein_ratio(piece, n, q)?;
        bernstein = bernstein.max(b);
        let mut mass = vec![0.0; shells.len()];
        for (v, &k) in piece.values().iter().zip(&index) {
            mass[k] += v.norm().powf(q) * h_d;
        }
        for (k, (&m, &r)) in mass.iter().zip(&shells).enumerate() {
            let vol = shell_count[k] as f64 * h_d;
            let cap = norm_q.min(vol * piece.max_abs().powf(q));
            let bound = norm_q * 1f64.min(shell_volume_constant * b.powf(q) * (n * r).powi(d as i32));
            // two bounds, each exact
            for (a, b) in [(m, cap), (cap, bound)] {
                bernstein_ok &= a <= b * (1.0 + tolerance::EXACT);
                let rel = if b > 0.0 {
                    a / b
                } else if a > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                };
                if rel > worst_b.2 {
                    worst_b = (a, b, rel);
                }
            }
        }
        piece_norms.push(norm_q);
        piece_shell.push(mass);
    }
    let link_b = ChainLink {
        name: "bernstein-per-shell".into(),
        lhs: worst_b.0,
        rhs: worst_b.1,
        pass: bernstein_ok,
    };

    // link (c): Schur test on c_N = N^s ||P_N g||_q
    let log_n = grid.n().trailing_zeros() as i32;
    let n_levels: Vec<i32> = dec.levels().iter().map(|&j| j - log_n).collect();
    let r_levels: Vec<i32> = (0..shells.len() as i32).collect();
    let kernel = SchurKernel::hardy(n_levels, r_levels, s, d as f64, q)?;
    let schur = schur_conditions(&kernel, q)?;
    let c: Vec<f64> = piece_norms
        .iter()
        .zip(&freqs)
        .map(|(m, n)| n.powf(s) * m.powf(1.0 / q))
        .collect();
    let bound = schur_bound_check(&kernel, &c, q)?;
    let link_c = ChainLink::at_most("schur-test", bound.lhs, bound.rhs, tolerance::EXACT);

    // Minkowski across levels inside each shell, then the kernel bound
    let k_const = (shell_volume_constant.powf(1.0 / q) * bernstein).max(1.0);
    let minkowski: f64 = shells
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let sum: f64 = piece_shell.iter().map(|m| m[k].powf(1.0 / q)).sum();
            r.powf(-sq) * sum.powf(q)
        })
        .sum();
    let link_m1 = ChainLink::at_most("minkowski-over-levels", shell_sum, minkowski, 1e-10);
    let link_m2 = ChainLink::at_most(
        "kernel-bound",
        minkowski,
        k_const.powf(q) * bound.lhs,
        1e-10,
    );

    // link (d): end to end
    let rhs: f64 = c.iter().map(|v| v.powf(q)).sum();
    let assembled = 2f64.powf(sq) * k_const.powf(q) * schur.a1 * schur.a2;
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    let link_d = ChainLink {
        name: "end-to-end".into(),
        lhs: ratio,
        rhs: assembled,
        pass: ratio.is_finite() && ratio <= assembled * (1.0 + 1e-10),
    };
    Ok(ShellChain {
        lhs,
        rhs,
        ratio,
        assembled_constant: assembled,
        shell_volume_constant,
        bernstein_constant: bernstein,
        a1: schur.a1,
        a2: schur.a2,
        reconstruction_residual: residual,
        links: vec![link_a, link_b, link_m1, link_m2, link_c, link_d],
    })
}

/// The double Hoelder step for `q > 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderCheck {
    /// `int sum_N N^{sq} |P_N f|^q`
    pub lhs: f64,
    /// `int (sum N^{2s}|P_N f|^2)^{1/2} (sum N^{2s(q-1)}|P_N f|^{2(q-1)})^{1/2}`
    pub mid: f64,
    /// product of the two Triebel-Lizorkin factors
    pub rhs: f64,
    /// `min_x [(sum a^2)^{q/2} - sum a^q]` relative to the larger side
    pub pointwise_slack: f64,
    pub pass: bool,
}

pub fn holder_refinement_check(
    f: &SampledField,
    partition: &DyadicPartition,
    s: f64,
    q: f64,
) -> Result<HolderCheck> {
    if !(q > 2.0 && q.is_finite()) {
        return Err(Error::Inadmissible(format!("the Hoelder step needs q > 2, got q = {q}")));
    }
    let dec = decompose(f, partition)?;
    let amps = dec.amplitudes(s);
    let h_d = f.grid().cell_volume();
    let r = 2.0 * (q - 1.0);
    let mut column = vec![0.0; amps.len()];
    let (mut lhs, mut mid, mut int2, mut int_r) = (0.0, 0.0, 0.0, 0.0);
    let mut slack = f64::INFINITY;
    let mut pointwise_ok = true;
    for x in 0..f.grid().len() {
        for (c, row) in column.iter_mut().zip(&amps) {
            *c = row[x];
        }
        let sum_q: f64 = column.iter().map(|a| a.powf(q)).sum();
        let f2 = lr_aggregate(&column, 2.0);
        let fr = lr_aggregate(&column, r);
        let sq2 = f2.powf(q);
        if sum_q > sq2 * (1.0 + tolerance::EXACT) {
            pointwise_ok = false;
        }
        if sq2 > 0.0 {
            slack = slack.min((sq2 - sum_q) / sq2);
        }
        lhs += sum_q;
        mid += f2 * fr.powf(q - 1.0);
        int2 += sq2;
        int_r += fr.powf(q);
    }
    lhs *= h_d;
    mid *= h_d;
    let rhs = (int2 * h_d).powf(1.0 / q) * (int_r * h_d).powf((q - 1.0) / q);
    let ok = |a: f64, b: f64| a <= b * (1.0 + tolerance::EXACT);
    Ok(HolderCheck {
        lhs,
        mid,
        rhs,
        pointwise_slack: if slack.is_finite() { slack } else { 0.0 },
        pass: pointwise_ok && ok(lhs, mid) && ok(mid, rhs),
    })
}

/// Pointwise `F^s_{q,2(q-1)}(x) <= F^s_{q,2}(x)` at every sample, no tolerance.
/// Returns the two norms and whether every sample satisfied it.
pub fn lr_monotonicity_check(
    f: &SampledField,
    partition: &DyadicPartition,
    s: f64,
    q: f64,
) -> Result<(f64, f64, bool)> {
    if !(q >= 2.0) {
        return Err(Error::Inadmissible(format!("need q >= 2, got q = {q}")));
    }
    let dec = decompose(f, partition)?;
    let fine = dec.lr_field(s, 2.0 * (q - 1.0))?;
    let square = dec.lr_field(s, 2.0)?;
    let ok = fine
        .values()
        .iter()
        .zip(square.values())
        .all(|(a, b)| a.re <= b.re);
    Ok((lq_norm(&fine, q)?, lq_norm(&square, q)?, ok))
}
