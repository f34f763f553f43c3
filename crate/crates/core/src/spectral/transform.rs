use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::grid::{Centering, GridSpec, SampledField, Spectrum};
use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized in-place DFT along every axis of a row-major array.
fn fft_nd(values: &mut [Complex64], grid: &GridSpec, direction: FftDirection) {
    let n = grid.n();
    let d = grid.dim();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft(n, direction));
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];

    // last axis is contiguous
    for line in values.chunks_exact_mut(n) {
        fft.process_with_scratch(line, &mut scratch);
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..d.saturating_sub(1) {
        let stride = n.pow((d - 1 - axis) as u32);
        let block = stride * n;
        for base in (0..values.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (j, b) in buf.iter_mut().enumerate() {
                    *b = values[start + j * stride];
                }
                fft.process_with_scratch(&mut buf, &mut scratch);
                for (j, b) in buf.iter().enumerate() {
                    values[start + j * stride] = *b;
                }
            }
        }
    }
}

/// Per-axis phase `exp(-2 pi i k x_0 / L)` that turns the raw DFT into the
/// coefficients of `exp(2 pi i xi.x)` for samples starting at `x_0`.
fn axis_phase(grid: &GridSpec, centering: Centering) -> Vec<Complex64> {
    let n = grid.n() as f64;
    (0..grid.n())
        .map(|j| {
            let k = grid.wavenumber(j) as f64;
            // x_0 / L = -1/2 + offset / n
            let angle = -2.0 * PI * k * (-0.5 + centering.offset() / n);
            Complex64::from_polar(1.0, angle)
        })
        .collect()
}

fn full_phase(grid: &GridSpec, centering: Centering) -> Vec<Complex64> {
    let axis = axis_phase(grid, centering);
    let d = grid.dim();
    (0..grid.len())
        .map(|flat| {
            let idx = grid.unflatten(flat);
            idx[..d].iter().map(|&i| axis[i]).product()
        })
        .collect()
}

pub fn forward_transform(f: &SampledField) -> Spectrum {
    let grid = *f.grid();
    let mut values = f.values().to_vec();
    fft_nd(&mut values, &grid, FftDirection::Forward);
    let scale = 1.0 / grid.len() as f64;
    let phase = full_phase(&grid, f.centering());
    for (v, p) in values.iter_mut().zip(&phase) {
        *v *= p * scale;
    }
    Spectrum {
        grid,
        centering: f.centering(),
        coefficients: values,
    }
}

pub fn inverse_transform(spectrum: &Spectrum) -> SampledField {
    let grid = spectrum.grid;
    let phase = full_phase(&grid, spectrum.centering);
    let mut values: Vec<Complex64> = spectrum
        .coefficients
        .iter()
        .zip(&phase)
        .map(|(c, p)| c * p.conj())
        .collect();
    fft_nd(&mut values, &grid, FftDirection::Inverse);
    SampledField::new(grid, spectrum.centering, values).expect("length preserved")
}

/// Trigonometric interpolant of `f` sampled on `target`, a grid with the
/// same dimension and box. Modes at or beyond either Nyquist frequency are
/// dropped, so resampling the same field onto several grids yields one
/// function.
pub fn resample(f: &SampledField, target: GridSpec) -> Result<SampledField> {
    let source = *f.grid();
    if source.dim() != target.dim() || source.length() != target.length() {
        return Err(Error::InvalidGrid(
            "resampling needs the same dimension and box".into(),
        ));
    }
    let limit = (source.n().min(target.n()) / 2) as i64;
    let d = source.dim();
    let spectrum = forward_transform(f);
    let mut out = Spectrum {
        grid: target,
        centering: f.centering(),
        coefficients: vec![Complex64::new(0.0, 0.0); target.len()],
    };
    for (flat, c) in spectrum.coefficients.iter().enumerate() {
        let k = source.wavevector(flat);
        if k[..d].iter().all(|v| v.abs() < limit) {
            let i = target.index_of_wavevector(&k[..d]).expect("inside both lattices");
            out.coefficients[i] = *c;
        }
    }
    Ok(inverse_transform(&out))
}

/// Multiply the spectrum of `f` by `m(xi)`. The closure sees the physical
/// frequency vector (length `d`) including `xi = 0`, where the caller decides
/// the value.
pub fn apply_multiplier<M>(f: &SampledField, m: M) -> Result<SampledField>
where
    M: Fn(&[f64]) -> Complex64,
{
    let mut spectrum = forward_transform(f);
    let grid = spectrum.grid;
    let d = grid.dim();
    for (flat, c) in spectrum.coefficients.iter_mut().enumerate() {
        let xi = grid.frequency(flat);
        let factor = m(&xi[..d]);
        if !(factor.re.is_finite() && factor.im.is_finite()) {
            return Err(Error::NonFiniteMultiplier {
                frequency: xi[..d].to_vec(),
            });
        }
        *c *= factor;
    }
    Ok(inverse_transform(&spectrum))
}

fn norm(xi: &[f64]) -> f64 {
    xi.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Mean-zero tolerance for negative-order multipliers, relative to the field scale.
const MEAN_ZERO_TOL: f64 = 1e-10;

/// True when the mean mode is negligible against the field's magnitude.
pub fn is_mean_zero(f: &SampledField) -> bool {
    let scale = f.max_abs();
    f.mean().norm() <= MEAN_ZERO_TOL * scale.max(f64::MIN_POSITIVE)
}

/// `|D|^s f`, the multiplier `|2 pi xi|^s`.
///
/// The mean mode is dropped for `s > 0`, kept for `s = 0`, and must already
/// vanish for `s < 0`.
pub fn fractional_laplacian(f: &SampledField, s: f64) -> Result<SampledField> {
    if !s.is_finite() {
        return Err(Error::InvalidExponent(format!("order s = {s}")));
    }
    if s == 0.0 {
        return apply_multiplier(f, |_| Complex64::new(1.0, 0.0));
    }
    if s < 0.0 && !is_mean_zero(f) {
        return Err(Error::NonZeroMean(f.mean().norm()));
    }
    apply_multiplier(f, |xi| {
        let r = norm(xi);
        if r == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new((2.0 * PI * r).powf(s), 0.0)
        }
    })
}

/// Riesz transform `R_j` with multiplier `-i xi_j / |xi|`; `axis` is 1-based.
pub fn riesz_transform(f: &SampledField, axis: usize) -> Result<SampledField> {
    let d = f.grid().dim();
    if axis == 0 || axis > d {
        return Err(Error::InvalidAxis { axis, dim: d });
    }
    apply_multiplier(f, |xi| {
        let r = norm(xi);
        if r == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -xi[axis - 1] / r)
        }
    })
}

/// Spectral partial derivative along a 1-based axis: multiplier `2 pi i xi_j`.
pub fn partial_derivative(f: &SampledField, axis: usize) -> Result<SampledField> {
    let d = f.grid().dim();
    if axis == 0 || axis > d {
        return Err(Error::InvalidAxis { axis, dim: d });
    }
    apply_multiplier(f, |xi| Complex64::new(0.0, 2.0 * PI * xi[axis - 1]))
}

/// All `d` components of the spectral gradient.
pub fn gradient(f: &SampledField) -> Vec<SampledField> {
    (1..=f.grid().dim())
        .map(|axis| partial_derivative(f, axis).expect("axis in range"))
        .collect()
}

/// Pointwise Euclidean length of a vector field given by its components.
pub fn vector_magnitude(components: &[SampledField]) -> Result<SampledField> {
    let first = components
        .first()
        .ok_or_else(|| Error::InvalidGrid("empty vector field".into()))?;
    let mut acc = vec![0.0f64; first.grid().len()];
    for c in components {
        first.check_compatible(c)?;
        for (a, v) in acc.iter_mut().zip(c.values()) {
            *a += v.norm_sqr();
        }
    }
    SampledField::new(
        *first.grid(),
        first.centering(),
        acc.into_iter().map(|v| Complex64::new(v.sqrt(), 0.0)).collect(),
    )
}
