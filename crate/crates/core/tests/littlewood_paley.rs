use proptest::prelude::*;

use frachardy::corpus::{interior_band, random_band_limited};
use frachardy::littlewood_paley::{build_partition, cutoff, decompose, profile, DEFAULT_COVERAGE};
use frachardy::spectral::{lq_norm, resample};
use frachardy::GridSpec;

fn grid_strategy() -> impl Strategy<Value = GridSpec> {
    prop_oneof![
        (prop::sample::select(vec![32usize, 64, 512]), 0.5..50.0f64)
            .prop_map(|(n, l)| GridSpec::new(1, n, l).unwrap()),
        (prop::sample::select(vec![32usize, 64]), 0.5..50.0f64)
            .prop_map(|(n, l)| GridSpec::new(2, n, l).unwrap()),
        (prop::sample::select(vec![32usize]), 0.5..50.0f64)
            .prop_map(|(n, l)| GridSpec::new(3, n, l).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn multipliers_sum_to_one_on_the_covered_band(grid in grid_strategy(), coverage in 0.5..=1.0f64) {
        let partition = build_partition(&grid, coverage).unwrap();
        let top = 2f64.powi(partition.max_level());
        let tables: Vec<&[f64]> = partition.levels().iter().map(|&j| partition.multiplier(j).unwrap()).collect();
        for i in 0..grid.len() {
            let k = grid.wavenumber_norm(i);
            let total: f64 = tables.iter().map(|t| t[i]).sum();
            if k == 0.0 || k >= 2.0 * top {
                prop_assert_eq!(total, 0.0);
            } else if k <= top {
                prop_assert!((total - 1.0).abs() <= 1e-12, "k = {}, sum = {}", k, total);
            } else {
                prop_assert!((total - cutoff(k / top)).abs() <= 1e-12);
            }
            prop_assert!(tables.iter().all(|t| (0.0..=1.0).contains(&t[i])));
        }
    }

    #[test]
    fn distant_levels_do_not_overlap(grid in grid_strategy()) {
        let partition = build_partition(&grid, DEFAULT_COVERAGE).unwrap();
        for &a in partition.levels() {
            for &b in partition.levels() {
                if (a - b).abs() >= 2 {
                    let (ma, mb) = (partition.multiplier(a).unwrap(), partition.multiplier(b).unwrap());
                    prop_assert!(ma.iter().zip(mb).all(|(x, y)| x * y == 0.0), "levels {} and {}", a, b);
                }
            }
        }
    }

    #[test]
    fn band_limited_fields_are_reconstructed(grid in grid_strategy(), seed in any::<u64>(), envelope in 0.0..2.0f64) {
        let partition = build_partition(&grid, DEFAULT_COVERAGE).unwrap();
        let f = random_band_limited(grid, interior_band(&grid, DEFAULT_COVERAGE), envelope, seed);
        let back = decompose(&f, &partition).unwrap().reconstruct();
        prop_assert!(back.sub(&f).unwrap().max_abs() <= 1e-10 * f.max_abs());
    }

    #[test]
    fn diagonal_besov_equals_triebel_lizorkin(grid in grid_strategy(), seed in any::<u64>(), s in -1.0..2.0f64, p in 1.0..5.0f64) {
        let partition = build_partition(&grid, DEFAULT_COVERAGE).unwrap();
        let f = random_band_limited(grid, interior_band(&grid, DEFAULT_COVERAGE), 0.5, seed);
        let lp = decompose(&f, &partition).unwrap();
        let b = lp.besov_norm(s, p, p).unwrap().value;
        let t = lp.triebel_lizorkin_norm(s, p, p).unwrap().value;
        prop_assert!((b - t).abs() <= 1e-12 * b, "{} vs {}", b, t);
    }

    #[test]
    fn pointwise_aggregate_decreases_in_r(grid in grid_strategy(), seed in any::<u64>(), r1 in 1.0..4.0f64, dr in 0.0..4.0f64) {
        let partition = build_partition(&grid, DEFAULT_COVERAGE).unwrap();
        let f = random_band_limited(grid, interior_band(&grid, DEFAULT_COVERAGE), 1.0, seed);
        let lp = decompose(&f, &partition).unwrap();
        let small = lp.lr_field(0.5, r1).unwrap();
        let large = lp.lr_field(0.5, r1 + dr).unwrap();
        let sup = lp.lr_field(0.5, f64::INFINITY).unwrap();
        for ((a, b), c) in small.values().iter().zip(large.values()).zip(sup.values()) {
            prop_assert!(b.re <= a.re * (1.0 + 1e-14));
            prop_assert!(c.re <= b.re * (1.0 + 1e-14));
        }
    }
}

#[test]
fn profile_vanishes_at_neighbouring_dyadics() {
    assert_eq!(profile(1.0), 1.0);
    for t in [0.5, 2.0, 0.25, 4.0] {
        assert_eq!(profile(t), 0.0);
    }
    // telescoping: sum over j of psi(2^-j t) is chi(t / 2^J) - chi(2t) exactly at dyadics
    for t in [1.3f64, 3.7, 11.0] {
        let sum: f64 = (0..8).map(|j| profile(t / 2f64.powi(j))).sum();
        assert!((sum - (cutoff(t / 128.0) - cutoff(2.0 * t))).abs() < 1e-15);
    }
}

#[test]
fn square_function_norm_is_stable_under_refinement() {
    let coarse = GridSpec::new(2, 64, 12.0).unwrap();
    let f = random_band_limited(coarse, interior_band(&coarse, DEFAULT_COVERAGE), 0.5, 5);
    let reference = {
        let lp = decompose(&f, &build_partition(&coarse, DEFAULT_COVERAGE).unwrap()).unwrap();
        lq_norm(&lp.square_function(0.7), 3.0).unwrap() / lq_norm(&f, 3.0).unwrap()
    };
    for n in [128, 256] {
        let fine = GridSpec::new(2, n, 12.0).unwrap();
        let g = resample(&f, fine).unwrap();
        // keep the same levels: coverage shrinks as the grid grows
        let partition = build_partition(&fine, DEFAULT_COVERAGE * 64.0 / n as f64).unwrap();
        let lp = decompose(&g, &partition).unwrap();
        let ratio = lq_norm(&lp.square_function(0.7), 3.0).unwrap() / lq_norm(&g, 3.0).unwrap();
        assert!((ratio / reference - 1.0).abs() < 0.1, "n = {n}: {ratio} vs {reference}");
    }
}
