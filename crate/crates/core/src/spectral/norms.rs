use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::grid::{axis_coordinates, Centering, GridSpec, SampledField};
use crate::error::{Error, Result};
use crate::quadrature::{corner_power_integral, cube_integral};

/// `(sum |f|^q h^d)^{1/q}`, or `max |f|` for `q = inf`.
pub fn lq_norm(f: &SampledField, q: f64) -> Result<f64> {
    check_q(q)?;
    if q.is_infinite() {
        return Ok(f.max_abs());
    }
    let h_d = f.grid().cell_volume();
    let sum = lq_sum(f.values().iter().map(|v| v.norm()), q);
    Ok((sum * h_d).powf(1.0 / q))
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidExponent(format!("Lebesgue exponent q = {q} < 1")));
    }
    Ok(())
}

fn lq_sum(values: impl Iterator<Item = f64>, q: f64) -> f64 {
    if q == 2.0 {
        values.map(|v| v * v).sum()
    } else {
        values.map(|v| v.powf(q)).sum()
    }
}

/// How the singular weight `|x|^{-p}` enters the Riemann sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightRule {
    /// Weight sampled at the cell center.
    Midpoint,
    /// Exact cell average of the weight; removes the `O(h^{d-p})` error
    /// of sampling a power singularity at its nearest cell centers.
    CellAverage,
}

/// `||f / |x|^s||_q` measured from the box center, with the default
/// cell-averaged weight.
pub fn weighted_lq_norm(f: &SampledField, s: f64, q: f64) -> Result<f64> {
    if s.is_nan() || s < 0.0 {
        return Err(Error::InvalidExponent(format!("weight order s = {s} < 0")));
    }
    power_weighted_lq_norm(f, s, q, WeightRule::CellAverage)
}

/// `(sum |f|^q w(x) h^d)^{1/q}` with `w` the weight `|x|^{-gamma q}` under
/// the given rule. `gamma` may be negative (growing weight).
pub fn power_weighted_lq_norm(
    f: &SampledField,
    gamma: f64,
    q: f64,
    rule: WeightRule,
) -> Result<f64> {
    check_q(q)?;
    if q.is_infinite() {
        return Err(Error::InvalidExponent("weighted norms need finite q".into()));
    }
    let h_d = f.grid().cell_volume();
    if gamma == 0.0 {
        let sum = lq_sum(f.values().iter().map(|v| v.norm()), q);
        return Ok((sum * h_d).powf(1.0 / q));
    }
    let p = gamma * q;
    let d = f.grid().dim() as f64;
    if p >= d {
        return Err(Error::Inadmissible(format!(
            "weight |x|^-{p} is not locally integrable in dimension {d}"
        )));
    }
    let weights = weight_table(f.grid(), f.centering(), p, rule)?;
    let sum: f64 = f
        .values()
        .iter()
        .zip(weights.iter())
        .map(|(v, w)| {
            let a = v.norm();
            if q == 2.0 {
                a * a * w
            } else {
                a.powf(q) * w
            }
        })
        .sum();
    Ok((sum * h_d).powf(1.0 / q))
}

type WeightKey = (usize, usize, u64, u64, Centering, WeightRule);

fn weight_cache() -> &'static Mutex<HashMap<WeightKey, Arc<Vec<f64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<WeightKey, Arc<Vec<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Per-sample weights for `|x|^{-p}`, cached per grid and exponent.
pub fn weight_table(
    grid: &GridSpec,
    centering: Centering,
    p: f64,
    rule: WeightRule,
) -> Result<Arc<Vec<f64>>> {
    if centering == Centering::Lattice && p > 0.0 {
        return Err(Error::SampleAtOrigin);
    }
    let key = (
        grid.dim(),
        grid.n(),
        grid.length().to_bits(),
        p.to_bits(),
        centering,
        rule,
    );
    if let Some(w) = weight_cache().lock().expect("weight cache").get(&key) {
        return Ok(Arc::clone(w));
    }
    let table = Arc::new(match rule {
        WeightRule::Midpoint => midpoint_weights(grid, centering, p),
        WeightRule::CellAverage => cell_average_weights(grid, centering, p),
    });
    weight_cache()
        .lock()
        .expect("weight cache")
        .insert(key, Arc::clone(&table));
    Ok(table)
}

fn midpoint_weights(grid: &GridSpec, centering: Centering, p: f64) -> Vec<f64> {
    super::grid::radii(grid, centering)
        .into_iter()
        .map(|r| r.powf(-p))
        .collect()
}

fn cell_average_weights(grid: &GridSpec, centering: Centering, p: f64) -> Vec<f64> {
    let d = grid.dim();
    let h = grid.spacing();
    let coords = axis_coordinates(grid, centering);
    let corner = h.powf(-p) * corner_power_integral(d, p);
    let inv_vol = 1.0 / grid.cell_volume();
    (0..grid.len())
        .map(|flat| {
            let idx = grid.unflatten(flat);
            let center: Vec<f64> = idx[..d].iter().map(|&i| coords[i]).collect();
            // cells with a corner on the origin
            if center.iter().all(|c| (c.abs() - 0.5 * h).abs() < 1e-9 * h) {
                return corner;
            }
            let r = center.iter().map(|c| c * c).sum::<f64>().sqrt();
            let order = if r < 4.0 * h {
                10
            } else if r < 32.0 * h {
                3
            } else {
                return r.powf(-p);
            };
            let lo: Vec<f64> = center.iter().map(|c| c - 0.5 * h).collect();
            inv_vol
                * cube_integral(&lo, h, order, |x| {
                    x.iter().map(|v| v * v).sum::<f64>().powf(-0.5 * p)
                })
        })
        .collect()
}
