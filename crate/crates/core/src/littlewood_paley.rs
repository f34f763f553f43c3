//! Smooth dyadic partition of unity in frequency, Littlewood-Paley pieces
//! `P_N f`, and the Besov, Triebel-Lizorkin and square-function norms built
//! from them.
//!
//! Dyadic frequencies are `N = 2^j / L`; a level is identified by `j`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{forward_transform, inverse_transform, lq_norm, GridSpec, SampledField};

pub const PROFILE_NAME: &str = "bump-telescope-v1";
pub const DEFAULT_COVERAGE: f64 = 0.5;
const MIN_LEVELS: usize = 3;

/// `exp(-1/u)` for `u > 0`, else 0.
pub fn bump(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

/// Smooth cutoff: 1 on `|t| <= 1`, 0 on `|t| >= 2`.
pub fn cutoff(t: f64) -> f64 {
    let t = t.abs();
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let a = bump(2.0 - t);
        a / (a + bump(t - 1.0))
    }
}

/// Annular profile `psi(t) = chi(t) - chi(2t)`, supported in `1/2 <= |t| <= 2`.
pub fn profile(t: f64) -> f64 {
    cutoff(t) - cutoff(2.0 * t)
}

/// Tabulated partition over the dyadic levels a grid can resolve.
#[derive(Debug, Clone)]
pub struct DyadicPartition {
    grid: GridSpec,
    coverage: f64,
    levels: Vec<i32>,
    multipliers: Vec<Vec<f64>>,
}

/// Reproducibility record for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionRecord {
    pub levels: Vec<f64>,
    pub profile: String,
    pub coverage: f64,
}

/// Levels run from `N = 2/L` up to the largest dyadic not above
/// `coverage * nyquist`. The lowest level carries the whole low tail
/// `chi(xi / N_min)` (minus the mean mode) so that the pieces sum to
/// `f - mean` for every `f` band-limited to `|xi| <= N_max`.
pub fn build_partition(grid: &GridSpec, coverage: f64) -> Result<DyadicPartition> {
    if !(coverage > 0.0 && coverage <= 1.0) {
        return Err(Error::InvalidExponent(format!("coverage {coverage} not in (0, 1]")));
    }
    // in lattice units the top frequency is coverage * n / 2
    let top = coverage * grid.n() as f64 / 2.0;
    let mut levels = Vec::new();
    let mut j = 1;
    while 2f64.powi(j) <= top {
        levels.push(j);
        j += 1;
    }
    if levels.len() < MIN_LEVELS {
        return Err(Error::GridTooCoarse(format!(
            "only {} dyadic levels between 2/L and {coverage} x Nyquist (need {MIN_LEVELS})",
            levels.len()
        )));
    }
    let kappa: Vec<f64> = (0..grid.len()).map(|i| grid.wavenumber_norm(i)).collect();
    let lowest = levels[0];
    let multipliers = levels
        .iter()
        .map(|&j| {
            let scale = 2f64.powi(j);
            kappa
                .iter()
                .map(|&k| {
                    if k == 0.0 {
                        0.0
                    } else if j == lowest {
                        cutoff(k / scale)
                    } else {
                        profile(k / scale)
                    }
                })
                .collect()
        })
        .collect();
    Ok(DyadicPartition {
        grid: *grid,
        coverage,
        levels,
        multipliers,
    })
}

impl DyadicPartition {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coverage(&self) -> f64 {
        self.coverage
    }

    pub fn levels(&self) -> &[i32] {
        &self.levels
    }

    pub fn min_level(&self) -> i32 {
        self.levels[0]
    }

    pub fn max_level(&self) -> i32 {
        *self.levels.last().expect("at least three levels")
    }

    /// Physical dyadic frequency `2^j / L`.
    pub fn frequency(&self, level: i32) -> f64 {
        2f64.powi(level) / self.grid.length()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.levels.iter().map(|&j| self.frequency(j)).collect()
    }

    fn position(&self, level: i32) -> Result<usize> {
        self.levels
            .iter()
            .position(|&j| j == level)
            .ok_or(Error::LevelOutOfRange {
                level,
                min: self.min_level(),
                max: self.max_level(),
            })
    }

    /// Tabulated multiplier of one level, in FFT order.
    pub fn multiplier(&self, level: i32) -> Result<&[f64]> {
        Ok(&self.multipliers[self.position(level)?])
    }

    pub fn record(&self) -> PartitionRecord {
        PartitionRecord {
            levels: self.frequencies(),
            profile: PROFILE_NAME.to_string(),
            coverage: self.coverage,
        }
    }

    fn check_grid(&self, f: &SampledField) -> Result<()> {
        if *f.grid() != self.grid {
            return Err(Error::InvalidGrid("field and partition grids differ".into()));
        }
        Ok(())
    }
}

/// `P_N f` for `N = 2^level / L`.
pub fn project(f: &SampledField, partition: &DyadicPartition, level: i32) -> Result<SampledField> {
    partition.check_grid(f)?;
    let m = partition.multiplier(level)?;
    let mut spectrum = forward_transform(f);
    for (c, &w) in spectrum.coefficients_mut().iter_mut().zip(m) {
        *c *= w;
    }
    Ok(inverse_transform(&spectrum))
}

/// All pieces `P_N f` of one field.
#[derive(Debug, Clone)]
pub struct LPDecomposition {
    grid: GridSpec,
    levels: Vec<i32>,
    frequencies: Vec<f64>,
    pieces: Vec<SampledField>,
}

pub fn decompose(f: &SampledField, partition: &DyadicPartition) -> Result<LPDecomposition> {
    partition.check_grid(f)?;
    let spectrum = forward_transform(f);
    let pieces = partition
        .multipliers
        .iter()
        .map(|m| {
            let mut s = spectrum.clone();
            for (c, &w) in s.coefficients_mut().iter_mut().zip(m) {
                *c *= w;
            }
            inverse_transform(&s)
        })
        .collect();
    Ok(LPDecomposition {
        grid: *f.grid(),
        levels: partition.levels.clone(),
        frequencies: partition.frequencies(),
        pieces,
    })
}

/// Result of a truncated dyadic sum together with its top-level term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DyadicNorm {
    pub value: f64,
    /// `N_max^s ||P_{N_max} f||_p`, the size of the last retained term.
    pub last_level: f64,
}

/// `(sum v^r)^{1/r}` evaluated relative to the largest entry, so a single
/// nonzero entry is returned exactly. `r = inf` gives the maximum.
pub fn lr_aggregate(values: &[f64], r: f64) -> f64 {
    let max = values.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 || r.is_infinite() {
        return max;
    }
    let sum: f64 = values.iter().map(|v| (v / max).powf(r)).sum();
    max * sum.powf(1.0 / r)
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v < 1.0 {
        return Err(Error::InvalidExponent(format!("{name} = {v} < 1")));
    }
    Ok(())
}

impl LPDecomposition {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn levels(&self) -> &[i32] {
        &self.levels
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn pieces(&self) -> &[SampledField] {
        &self.pieces
    }

    pub fn piece(&self, level: i32) -> Option<&SampledField> {
        self.levels
            .iter()
            .position(|&j| j == level)
            .map(|i| &self.pieces[i])
    }

    /// `sum_N P_N f`, summed in level order.
    pub fn reconstruct(&self) -> SampledField {
        let first = &self.pieces[0];
        let mut acc = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        for p in &self.pieces {
            for (a, v) in acc.iter_mut().zip(p.values()) {
                *a += v;
            }
        }
        SampledField::new(self.grid, first.centering(), acc).expect("same grid")
    }

    /// `N^s ||P_N f||_p` per level.
    pub fn level_norms(&self, s: f64, p: f64) -> Result<Vec<f64>> {
        self.pieces
            .iter()
            .zip(&self.frequencies)
            .map(|(piece, &n)| Ok(n.powf(s) * lq_norm(piece, p)?))
            .collect()
    }

    /// Pointwise amplitudes `N^s |P_N f(x)|`, one row per level.
    pub fn amplitudes(&self, s: f64) -> Vec<Vec<f64>> {
        self.pieces
            .iter()
            .zip(&self.frequencies)
            .map(|(piece, &n)| {
                let w = n.powf(s);
                piece.values().iter().map(|v| w * v.norm()).collect()
            })
            .collect()
    }

    /// Homogeneous Besov norm over the retained levels.
    pub fn besov_norm(&self, s: f64, p: f64, q: f64) -> Result<DyadicNorm> {
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        let terms = self.level_norms(s, p)?;
        Ok(DyadicNorm {
            value: lr_aggregate(&terms, q),
            last_level: *terms.last().expect("nonempty"),
        })
    }

    /// Pointwise `l^r` aggregate of `N^s |P_N f(x)|` as a real field.
    pub fn lr_field(&self, s: f64, r: f64) -> Result<SampledField> {
        check_exponent("r", r)?;
        let amps = self.amplitudes(s);
        let mut column = vec![0.0; amps.len()];
        let values = (0..self.grid.len())
            .map(|x| {
                for (c, row) in column.iter_mut().zip(&amps) {
                    *c = row[x];
                }
                Complex64::new(lr_aggregate(&column, r), 0.0)
            })
            .collect();
        SampledField::new(self.grid, self.pieces[0].centering(), values)
    }

    /// Homogeneous Triebel-Lizorkin norm: `l^r` over levels inside, `L^p` outside.
    pub fn triebel_lizorkin_norm(&self, s: f64, p: f64, r: f64) -> Result<DyadicNorm> {
        check_exponent("p", p)?;
        let field = self.lr_field(s, r)?;
        let top = self.pieces.last().expect("nonempty");
        let n_top = *self.frequencies.last().expect("nonempty");
        Ok(DyadicNorm {
            value: lq_norm(&field, p)?,
            last_level: n_top.powf(s) * lq_norm(top, p)?,
        })
    }

    pub fn square_function(&self, s: f64) -> SampledField {
        self.lr_field(s, 2.0).expect("r = 2 is valid")
    }
}

pub fn besov_norm(
    f: &SampledField,
    partition: &DyadicPartition,
    s: f64,
    p: f64,
    q: f64,
) -> Result<DyadicNorm> {
    decompose(f, partition)?.besov_norm(s, p, q)
}

pub fn triebel_lizorkin_norm(
    f: &SampledField,
    partition: &DyadicPartition,
    s: f64,
    p: f64,
    r: f64,
) -> Result<DyadicNorm> {
    decompose(f, partition)?.triebel_lizorkin_norm(s, p, r)
}

/// `(sum_N |N^s P_N f(x)|^2)^{1/2}`.
pub fn square_function(f: &SampledField, partition: &DyadicPartition, s: f64) -> Result<SampledField> {
    Ok(decompose(f, partition)?.square_function(s))
}

/// `||P_N f||_inf / (N^{d/q} ||P_N f||_q)`, or 0 when the piece vanishes.
pub fn bernstein_check(
    f: &SampledField,
    partition: &DyadicPartition,
    level: i32,
    q: f64,
) -> Result<f64> {
    let piece = project(f, partition, level)?;
    bernstein_ratio(&piece, partition.frequency(level), q)
}

pub(crate) fn bernstein_ratio(piece: &SampledField, n: f64, q: f64) -> Result<f64> {
    let lq = lq_norm(piece, q)?;
    if lq == 0.0 {
        return Ok(0.0);
    }
    let d = piece.grid().dim() as f64;
    Ok(piece.max_abs() / (n.powf(d / q) * lq))
}
