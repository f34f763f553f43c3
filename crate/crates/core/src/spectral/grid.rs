use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic grid on the box `[-L/2, L/2)^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    n: usize,
    length: f64,
}

/// Build a grid, rejecting unsupported dimensions and sizes.
pub fn make_grid(dim: usize, n: usize, length: f64) -> Result<GridSpec> {
    GridSpec::new(dim, n, length)
}

impl GridSpec {
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{1, 2, 3}}")));
        }
        if !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n = {n} is not a power of two")));
        }
        if n < 8 {
            return Err(Error::InvalidGrid(format!("n = {n} is below the minimum of 8")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("box length {length} must be positive")));
        }
        Ok(GridSpec { dim, n, length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Total number of samples, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    /// Highest representable frequency `n / (2L)`.
    pub fn nyquist(&self) -> f64 {
        self.n as f64 / (2.0 * self.length)
    }

    /// Signed integer wavenumber for FFT-ordered index `j`: `0..n/2` then `-n/2..0`.
    pub fn wavenumber(&self, j: usize) -> i64 {
        let n = self.n as i64;
        let j = j as i64;
        if j < n / 2 {
            j
        } else {
            j - n
        }
    }

    /// Decompose a row-major flat index into per-axis indices (axis 0 slowest).
    pub fn unflatten(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        for axis in (0..self.dim).rev() {
            idx[axis] = flat % self.n;
            flat /= self.n;
        }
        idx
    }

    /// Integer wavenumber vector of the FFT-ordered flat index.
    pub fn wavevector(&self, flat: usize) -> [i64; 3] {
        let idx = self.unflatten(flat);
        let mut k = [0i64; 3];
        for axis in 0..self.dim {
            k[axis] = self.wavenumber(idx[axis]);
        }
        k
    }

    /// Physical frequency `k / L` of the FFT-ordered flat index.
    pub fn frequency(&self, flat: usize) -> [f64; 3] {
        let k = self.wavevector(flat);
        let mut xi = [0.0; 3];
        for axis in 0..self.dim {
            xi[axis] = k[axis] as f64 / self.length;
        }
        xi
    }

    /// Euclidean norm of the wavevector in lattice units (multiples of `1/L`).
    pub fn wavenumber_norm(&self, flat: usize) -> f64 {
        let k = self.wavevector(flat);
        k[..self.dim]
            .iter()
            .map(|&v| (v * v) as f64)
            .sum::<f64>()
            .sqrt()
    }

    /// `|xi|` for every FFT-ordered flat index.
    pub fn frequency_norms(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.wavenumber_norm(i) / self.length)
            .collect()
    }

    /// Flat index of the lattice frequency `k` (integer wavenumbers).
    pub fn index_of_wavevector(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim {
            return None;
        }
        let n = self.n as i64;
        let mut flat = 0usize;
        for &kj in k {
            if kj < -n / 2 || kj >= n / 2 {
                return None;
            }
            flat = flat * self.n + kj.rem_euclid(n) as usize;
        }
        Some(flat)
    }
}

/// Where samples sit inside each cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Centering {
    /// Offset `h/2` per axis; no sample lands on the origin.
    #[default]
    CellCentered,
    /// Samples on `-L/2 + j h`; the origin is a sample.
    Lattice,
}

impl Centering {
    pub fn offset(self) -> f64 {
        match self {
            Centering::CellCentered => 0.5,
            Centering::Lattice => 0.0,
        }
    }
}

/// Complex samples of a function on a grid, row-major with axis 0 slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: GridSpec,
    centering: Centering,
    values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(grid: GridSpec, centering: Centering, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(SampledField {
            grid,
            centering,
            values,
        })
    }

    pub fn zeros(grid: GridSpec, centering: Centering) -> Self {
        SampledField {
            grid,
            centering,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Sample `f` at every grid point. The closure receives the `d` coordinates.
    pub fn from_fn<F>(grid: GridSpec, centering: Centering, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let coords = axis_coordinates(&grid, centering);
        let d = grid.dim();
        let values = (0..grid.len())
            .map(|flat| {
                let idx = grid.unflatten(flat);
                let mut x = [0.0; 3];
                for a in 0..d {
                    x[a] = coords[idx[a]];
                }
                f(&x[..d])
            })
            .collect();
        SampledField {
            grid,
            centering,
            values,
        }
    }

    pub fn from_real_fn<F>(grid: GridSpec, centering: Centering, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64,
    {
        Self::from_fn(grid, centering, |x| Complex64::new(f(x), 0.0))
    }

    /// Radial function `f(|x|)` sampled on the grid.
    pub fn from_radial<F>(grid: GridSpec, centering: Centering, f: F) -> Self
    where
        F: Fn(f64) -> f64,
    {
        Self::from_real_fn(grid, centering, |x| {
            f(x.iter().map(|v| v * v).sum::<f64>().sqrt())
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn centering(&self) -> Centering {
        self.centering
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Coordinates of the sample at a flat index, measured from the box center.
    pub fn position(&self, flat: usize) -> [f64; 3] {
        let idx = self.grid.unflatten(flat);
        let h = self.grid.spacing();
        let mut x = [0.0; 3];
        for a in 0..self.grid.dim() {
            x[a] = -0.5 * self.grid.length() + (idx[a] as f64 + self.centering.offset()) * h;
        }
        x
    }

    /// `|x|` of every sample.
    pub fn radii(&self) -> Vec<f64> {
        radii(&self.grid, self.centering)
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest imaginary part in magnitude.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn abs(&self) -> SampledField {
        self.map(|v| Complex64::new(v.norm(), 0.0))
    }

    pub fn scale(&self, c: Complex64) -> SampledField {
        self.map(|v| v * c)
    }

    pub fn map<F>(&self, f: F) -> SampledField
    where
        F: Fn(Complex64) -> Complex64,
    {
        SampledField {
            grid: self.grid,
            centering: self.centering,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with<F>(&self, other: &SampledField, f: F) -> Result<SampledField>
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        self.check_compatible(other)?;
        Ok(SampledField {
            grid: self.grid,
            centering: self.centering,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &SampledField) -> Result<SampledField> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &SampledField) -> Result<SampledField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub(crate) fn check_compatible(&self, other: &SampledField) -> Result<()> {
        if self.grid != other.grid || self.centering != other.centering {
            return Err(Error::InvalidGrid("fields live on different grids".into()));
        }
        Ok(())
    }

    /// Largest `|f|` on the box faces relative to the largest `|f|` overall.
    /// Zero fields report 0.
    pub fn boundary_decay(&self) -> f64 {
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        let n = self.grid.n();
        let d = self.grid.dim();
        let mut edge = 0.0f64;
        for (flat, v) in self.values.iter().enumerate() {
            let idx = self.grid.unflatten(flat);
            if idx[..d].iter().any(|&i| i == 0 || i == n - 1) {
                edge = edge.max(v.norm());
            }
        }
        edge / max
    }
}

pub(crate) fn axis_coordinates(grid: &GridSpec, centering: Centering) -> Vec<f64> {
    let h = grid.spacing();
    (0..grid.n())
        .map(|j| -0.5 * grid.length() + (j as f64 + centering.offset()) * h)
        .collect()
}

pub(crate) fn radii(grid: &GridSpec, centering: Centering) -> Vec<f64> {
    let coords = axis_coordinates(grid, centering);
    let d = grid.dim();
    (0..grid.len())
        .map(|flat| {
            let idx = grid.unflatten(flat);
            idx[..d]
                .iter()
                .map(|&i| coords[i] * coords[i])
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

/// Complex Fourier coefficients in FFT order, normalized so that
/// `f(x) = sum_xi c(xi) exp(2 pi i xi.x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub(crate) grid: GridSpec,
    pub(crate) centering: Centering,
    pub(crate) coefficients: Vec<Complex64>,
}

impl Spectrum {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn centering(&self) -> Centering {
        self.centering
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coefficients
    }

    /// Coefficient at integer wavevector `k`, if it lies on the lattice.
    pub fn at(&self, k: &[i64]) -> Option<Complex64> {
        self.grid
            .index_of_wavevector(k)
            .map(|i| self.coefficients[i])
    }

    /// The mean mode.
    pub fn zero_mode(&self) -> Complex64 {
        self.coefficients[0]
    }
}
