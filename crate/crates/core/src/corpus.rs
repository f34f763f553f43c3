//! Deterministic test-field families: Gaussians, regularized truncated
//! power laws, random band-limited fields, and windowed random fields.
//!
//! Every field is reproducible from its label parameters and seed.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::littlewood_paley::cutoff;
use crate::spectral::{inverse_transform, Centering, GridSpec, SampledField, Spectrum};

pub fn gaussian(grid: GridSpec, sigma: f64) -> SampledField {
    let c = 0.5 / (sigma * sigma);
    SampledField::from_radial(grid, Centering::CellCentered, |r| (-c * r * r).exp())
}

/// `x_1 exp(-|x|^2 / 2 sigma^2)`: localized and mean-zero.
pub fn odd_gaussian(grid: GridSpec, sigma: f64) -> SampledField {
    let c = 0.5 / (sigma * sigma);
    SampledField::from_real_fn(grid, Centering::CellCentered, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        x[0] / sigma * (-c * r2).exp()
    })
}

/// `(r_in^2 + r^2)^{-a/2}` flattened inside `r_in`, tapered smoothly to zero
/// between `r_out` and `2 r_out`.
pub fn truncated_power_profile(a: f64, r_in: f64, r_out: f64) -> impl Fn(f64) -> f64 {
    move |r| (r_in * r_in + r * r).powf(-0.5 * a) * cutoff(r / r_out)
}

pub fn truncated_power(grid: GridSpec, a: f64, r_in: f64, r_out: f64) -> SampledField {
    SampledField::from_radial(
        grid,
        Centering::CellCentered,
        truncated_power_profile(a, r_in, r_out),
    )
}

/// Lattice band `k_min <= |k| <= k_max` in units of `1/L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub k_min: f64,
    pub k_max: f64,
}

/// Real field whose spectrum lives in `band`, with complex Gaussian
/// coefficients scaled by `|k|^{-envelope}`. Normalized to unit max modulus.
pub fn random_band_limited(grid: GridSpec, band: Band, envelope: f64, seed: u64) -> SampledField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefficients = (0..grid.len())
        .map(|i| {
            let k = grid.wavenumber_norm(i);
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            if k >= band.k_min && k <= band.k_max && k > 0.0 {
                Complex64::new(re, im) * k.powf(-envelope)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let spectrum = Spectrum {
        grid,
        centering: Centering::CellCentered,
        coefficients,
    };
    // the real part keeps the band (its spectrum is the symmetrized one)
    let f = inverse_transform(&spectrum).map(|v| Complex64::new(v.re, 0.0));
    normalize(f)
}

/// Random band-limited field times a Gaussian window: decaying, not band-limited.
pub fn windowed_random(grid: GridSpec, band: Band, envelope: f64, sigma: f64, seed: u64) -> SampledField {
    let f = random_band_limited(grid, band, envelope, seed);
    let w = gaussian(grid, sigma);
    normalize(f.zip_with(&w, |a, b| a * b).expect("same grid"))
}

fn normalize(f: SampledField) -> SampledField {
    let m = f.max_abs();
    if m > 0.0 {
        f.scale(Complex64::new(1.0 / m, 0.0))
    } else {
        f
    }
}

/// A labeled corpus member.
#[derive(Debug, Clone)]
pub struct CorpusField {
    pub label: String,
    pub field: SampledField,
}

/// Interior band of the standard partition: `2 <= |k| <= 2^{j_max}`.
pub fn interior_band(grid: &GridSpec, coverage: f64) -> Band {
    let top = coverage * grid.n() as f64 / 2.0;
    let mut k_max = 2.0;
    while k_max * 2.0 <= top {
        k_max *= 2.0;
    }
    Band { k_min: 2.0, k_max }
}

/// Derive a per-field seed from the corpus seed and the index.
pub fn field_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index as u64)
        .rotate_left(17)
        ^ 0xD1B5_4A32_D192_ED03
}

/// `size` random band-limited fields in the interior band.
pub fn band_limited_corpus(grid: GridSpec, size: usize, seed: u64) -> Vec<CorpusField> {
    let band = interior_band(&grid, crate::littlewood_paley::DEFAULT_COVERAGE);
    (0..size)
        .map(|i| {
            let s = field_seed(seed, i);
            let envelope = [0.0, 0.5, 1.0, 1.5][i % 4];
            CorpusField {
                label: format!("band-limited(seed={s},envelope={envelope})"),
                field: random_band_limited(grid, band, envelope, s),
            }
        })
        .collect()
}

/// Mixed corpus of decaying fields plus periodic band-limited ones.
///
/// Cycles through Gaussians, truncated powers `a < max_power`, windowed
/// random fields and band-limited random fields.
pub fn mixed_corpus(grid: GridSpec, size: usize, seed: u64, max_power: f64) -> Vec<CorpusField> {
    let h = grid.spacing();
    let l = grid.length();
    let band = interior_band(&grid, crate::littlewood_paley::DEFAULT_COVERAGE);
    let sigma_lo = (2.0 * h).max(l / 40.0);
    let sigma_hi = (l / 14.0).max(sigma_lo);
    (0..size)
        .map(|i| {
            let round = (i / 4) as f64;
            let t = (0.37 * round + 0.2).fract();
            match i % 4 {
                0 => {
                    let sigma = sigma_lo + t * (sigma_hi - sigma_lo);
                    CorpusField {
                        label: format!("gaussian(sigma={sigma})"),
                        field: gaussian(grid, sigma),
                    }
                }
                1 => {
                    let a = max_power * (0.2 + 0.7 * t);
                    let r_in = 2.0 * h * (1.0 + 2.0 * t);
                    let r_out = l / 4.0;
                    CorpusField {
                        label: format!("truncated-power(a={a},r_in={r_in},r_out={r_out})"),
                        field: truncated_power(grid, a, r_in, r_out),
                    }
                }
                2 => {
                    let s = field_seed(seed, i);
                    let sigma = sigma_lo + (1.0 - t) * (sigma_hi - sigma_lo);
                    CorpusField {
                        label: format!("windowed-random(seed={s},sigma={sigma})"),
                        field: windowed_random(grid, band, 1.0, sigma, s),
                    }
                }
                _ => {
                    let s = field_seed(seed, i);
                    let envelope = 0.5 + t;
                    CorpusField {
                        label: format!("band-limited(seed={s},envelope={envelope})"),
                        field: random_band_limited(grid, band, envelope, s),
                    }
                }
            }
        })
        .collect()
}

/// Decaying members only (no periodic band-limited fields).
pub fn decaying_corpus(grid: GridSpec, size: usize, seed: u64, max_power: f64) -> Vec<CorpusField> {
    let mut out = Vec::with_capacity(size);
    let mut i = 0;
    while out.len() < size {
        let batch = mixed_corpus(grid, i + 4, seed, max_power);
        for f in batch.into_iter().skip(i).take(3) {
            if out.len() < size {
                out.push(f);
            }
        }
        i += 4;
    }
    out
}
