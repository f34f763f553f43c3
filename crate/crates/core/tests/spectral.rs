use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frachardy::corpus::{interior_band, random_band_limited};
use frachardy::spectral::io::{read_field, write_field};
use frachardy::spectral::{
    apply_multiplier, forward_transform, fractional_laplacian, inverse_transform, lq_norm,
    partial_derivative, resample, riesz_transform, weighted_lq_norm,
};
use frachardy::{Centering, GridSpec, SampledField};

fn grid_strategy() -> impl Strategy<Value = GridSpec> {
    prop_oneof![
        (prop::sample::select(vec![8usize, 64, 256]), 1.0..40.0f64)
            .prop_map(|(n, l)| GridSpec::new(1, n, l).unwrap()),
        (prop::sample::select(vec![8usize, 16, 32]), 1.0..40.0f64)
            .prop_map(|(n, l)| GridSpec::new(2, n, l).unwrap()),
        (prop::sample::select(vec![8usize, 16]), 1.0..40.0f64)
            .prop_map(|(n, l)| GridSpec::new(3, n, l).unwrap()),
    ]
}

fn random_field(grid: GridSpec, seed: u64) -> SampledField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len())
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    SampledField::new(grid, Centering::CellCentered, values).unwrap()
}

fn mean_zero(f: &SampledField) -> SampledField {
    let m = f.mean();
    f.map(|v| v - m)
}

fn rel_max(a: &SampledField, b: &SampledField) -> f64 {
    let scale = a.max_abs().max(b.max_abs());
    let diff = a.sub(b).unwrap().max_abs();
    if scale == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_round_trip(grid in grid_strategy(), seed in any::<u64>()) {
        let f = random_field(grid, seed);
        let back = inverse_transform(&forward_transform(&f));
        prop_assert!(rel_max(&back, &f) <= 1e-12);
    }

    #[test]
    fn parseval(grid in grid_strategy(), seed in any::<u64>()) {
        let f = random_field(grid, seed);
        let physical: f64 = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.cell_volume();
        let spectral: f64 = forward_transform(&f)
            .coefficients()
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            * grid.volume();
        prop_assert!((physical - spectral).abs() <= 1e-10 * physical);
    }

    #[test]
    fn multiplier_composition(grid in grid_strategy(), seed in any::<u64>(), a in 0.1..3.0f64, b in -2.0..2.0f64) {
        let f = random_field(grid, seed);
        let m1 = move |xi: &[f64]| Complex64::new((-a * xi.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0);
        let m2 = move |xi: &[f64]| Complex64::new(1.0, b * xi[0]);
        let two = apply_multiplier(&apply_multiplier(&f, m1).unwrap(), m2).unwrap();
        let one = apply_multiplier(&f, move |xi| m1(xi) * m2(xi)).unwrap();
        prop_assert!(rel_max(&two, &one) <= 1e-12);
    }

    #[test]
    fn fractional_semigroup(grid in grid_strategy(), seed in any::<u64>(), s1 in -1.5..2.0f64, s2 in -1.5..2.0f64) {
        let f = mean_zero(&random_field(grid, seed));
        let two = fractional_laplacian(&fractional_laplacian(&f, s1).unwrap(), s2).unwrap();
        let one = fractional_laplacian(&f, s1 + s2).unwrap();
        prop_assert!(rel_max(&two, &one) <= 1e-10);
    }

    #[test]
    fn riesz_of_derivatives_is_half_laplacian(grid in grid_strategy(), seed in any::<u64>()) {
        let f = mean_zero(&random_field(grid, seed));
        let mut sum = SampledField::zeros(grid, f.centering());
        for axis in 1..=grid.dim() {
            sum = sum.add(&riesz_transform(&partial_derivative(&f, axis).unwrap(), axis).unwrap()).unwrap();
        }
        prop_assert!(rel_max(&sum, &fractional_laplacian(&f, 1.0).unwrap()) <= 1e-10);
    }

    #[test]
    fn weighted_order_zero_is_lq(grid in grid_strategy(), seed in any::<u64>(), q in 1.0..6.0f64) {
        let f = random_field(grid, seed);
        prop_assert_eq!(weighted_lq_norm(&f, 0.0, q).unwrap(), lq_norm(&f, q).unwrap());
    }

    #[test]
    fn field_files_are_lossless(grid in grid_strategy(), seed in any::<u64>()) {
        let f = random_field(grid, seed);
        let mut bytes = Vec::new();
        write_field(&mut bytes, &f).unwrap();
        prop_assert_eq!(read_field(bytes.as_slice()).unwrap(), f);
    }
}

#[test]
fn negative_order_needs_mean_zero() {
    let grid = GridSpec::new(2, 16, 4.0).unwrap();
    let f = random_field(grid, 3).map(|v| v + Complex64::new(1.0, 0.0));
    assert!(fractional_laplacian(&f, -0.5).is_err());
    assert!(fractional_laplacian(&mean_zero(&f), -0.5).is_ok());
}

#[test]
fn resampling_keeps_band_limited_fields() {
    let coarse = GridSpec::new(2, 32, 10.0).unwrap();
    let fine = GridSpec::new(2, 128, 10.0).unwrap();
    let f = random_band_limited(coarse, interior_band(&coarse, 0.5), 0.5, 11);
    let up = resample(&f, fine).unwrap();
    let down = resample(&up, coarse).unwrap();
    assert!(rel_max(&down, &f) <= 1e-12);
    // the fine samples are the same trigonometric polynomial
    let h = fine.spacing();
    let x0 = -5.0 + 0.5 * h;
    let spec = forward_transform(&f);
    for flat in [0usize, 77, 4000, 16383] {
        let [i, j, _] = fine.unflatten(flat);
        let (x, y) = (x0 + i as f64 * h, x0 + j as f64 * h);
        let mut v = Complex64::new(0.0, 0.0);
        for (k, c) in spec.coefficients().iter().enumerate() {
            let xi = coarse.frequency(k);
            v += c * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (xi[0] * x + xi[1] * y));
        }
        assert!((v - up.values()[flat]).norm() < 1e-12, "{v} vs {}", up.values()[flat]);
    }
    assert!(resample(&f, GridSpec::new(2, 64, 11.0).unwrap()).is_err());
}
