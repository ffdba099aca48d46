//! Property-based tests for the public API: structural invariants that must
//! hold for every input, checked on proptest-generated cases.

use proptest::prelude::*;

use spectral_count::matrix::{HermitianMatrix, IndexSet};
use spectral_count::models::{
    self, GraphSpec, HoppingSpec, ModelFamily, ModelSpec, SiteDistribution,
};
use spectral_count::rng::SampleSeed;
use spectral_count::wegner::{self, McReport};
use spectral_count::witness::counting_constant;
use spectral_count::{eigen, lu, synth};

fn stream(master: u64, trial: u64) -> spectral_count::rng::Stream {
    SampleSeed { master, trial }.stream("prop", 0)
}

/// Members of `1..=universe` selected by the low bits of `mask`.
fn set_from_mask(universe: usize, mask: u32) -> IndexSet {
    let members: Vec<usize> = (1..=universe)
        .filter(|i| mask >> ((i - 1) % 32) & 1 == 1)
        .collect();
    IndexSet::new(universe, members).unwrap()
}

fn anderson_path(n: usize, coupling: f64) -> ModelSpec {
    ModelSpec {
        family: ModelFamily::Anderson,
        graph: GraphSpec::path(n).unwrap(),
        block_size: 1,
        coupling,
        energy: 0.0,
        site_dist: SiteDistribution::uniform_interval(1.0).unwrap(),
        hopping: HoppingSpec::Default,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_set_complement_partitions(universe in 1usize..=24, mask in any::<u32>()) {
        let s = set_from_mask(universe, mask);
        let c = s.complement();
        prop_assert_eq!(s.len() + c.len(), universe);
        prop_assert!(!s.intersects(&c));
        let all = s.union(&c).unwrap();
        let full = IndexSet::full(universe);
        prop_assert_eq!(all.members(), full.members());
        let back = c.complement();
        prop_assert_eq!(back.members(), s.members());
    }

    #[test]
    fn index_set_block_expansion_scales(universe in 1usize..=10, mask in any::<u32>(), block in 1usize..=4) {
        let s = set_from_mask(universe, mask);
        let e = s.expand_blocks(block).unwrap();
        prop_assert_eq!(e.universe(), universe * block);
        prop_assert_eq!(e.len(), s.len() * block);
        for &i in s.members() {
            for b in 1..=block {
                prop_assert!(e.contains((i - 1) * block + b));
            }
        }
    }

    #[test]
    fn counting_constants_shrink(m in 1usize..=19, n in 1usize..=50) {
        let here = counting_constant(m, n).unwrap();
        let deeper = counting_constant(m + 1, n).unwrap();
        let wider = counting_constant(m, n + 1).unwrap();
        prop_assert!(here.c_m > deeper.c_m);
        prop_assert!(here.k > wider.k);
        prop_assert!(here.c_m > 0.0 && here.c_m <= 1.0);
        prop_assert_eq!(here.k, here.c_m / n as f64);
    }

    #[test]
    fn wilson_interval_brackets_the_estimate(trials in 1u64..=100_000, frac in 0.0f64..=1.0) {
        let successes = ((trials as f64 * frac) as u64).min(trials);
        let (p_hat, low, high) = wegner::wilson_interval(successes, trials);
        prop_assert_eq!(p_hat, successes as f64 / trials as f64);
        prop_assert!((0.0..=1.0).contains(&low));
        prop_assert!((0.0..=1.0).contains(&high));
        prop_assert!(low <= p_hat && p_hat <= high);
        if successes > 0 && successes < trials {
            prop_assert!(low < high);
        }
    }

    #[test]
    fn window_counts_are_monotone(master in any::<u64>(), n in 2usize..=10,
                                  e1 in 0.01f64..2.0, e2 in 0.01f64..2.0) {
        let a = synth::random_hermitian(n, 1.0, &mut stream(master, 0)).unwrap();
        let (small, big) = (e1.min(e2), e1.max(e2));
        prop_assert!(eigen::count_in_interval(&a, 0.0, small) <= eigen::count_in_interval(&a, 0.0, big));
        // the sorted-slice counter agrees with the matrix-level one
        let eigs = eigen::eigenvalues(&a);
        prop_assert_eq!(eigen::count_in_sorted(&eigs, 0.0, big), eigen::count_in_interval(&a, 0.0, big));
    }

    #[test]
    fn planted_windows_count_exactly(master in any::<u64>(), n in 1usize..=10,
                                     m_raw in 0usize..=10, eps in 0.01f64..0.5) {
        let m = m_raw.min(n);
        let a = synth::planted_count_instance(n, m, eps, &mut stream(master, 1)).unwrap();
        prop_assert_eq!(eigen::count_in_interval(&a, 0.0, eps), m);
    }

    #[test]
    fn determinant_is_spectrum_product(master in any::<u64>(),
                                       raw in prop::collection::vec(-1.0f64..1.0, 1..=8)) {
        // keep eigenvalues away from zero so relative error is meaningful
        let eigs: Vec<f64> = raw.iter().map(|v| v.signum() * (0.2 + 2.0 * v.abs())).collect();
        let a = synth::hermitian_with_spectrum(&eigs, &mut stream(master, 2)).unwrap();
        let product: f64 = eigs.iter().product();
        let det = lu::hermitian_determinant(&a).value;
        prop_assert!((det - product).abs() <= 1e-8 * product.abs(),
                     "det {} vs planted product {}", det, product);
    }

    #[test]
    fn model_sampling_is_seed_deterministic(master in any::<u64>(), trial in 0u64..1000,
                                            n in 2usize..=6) {
        let spec = anderson_path(n, 0.8);
        let seed = SampleSeed { master, trial };
        let a = models::sample_hamiltonian(&spec, seed).unwrap();
        let b = models::sample_hamiltonian(&spec, seed).unwrap();
        prop_assert_eq!(a.inner().sub(b.inner()).frobenius_norm(), 0.0);
        let c = models::sample_hamiltonian(&spec, SampleSeed { master, trial: trial + 1 }).unwrap();
        prop_assert!(a.inner().sub(c.inner()).frobenius_norm() > 0.0);
    }

    #[test]
    fn matrix_json_round_trips(master in any::<u64>(), n in 1usize..=8) {
        let a = synth::random_hermitian(n, 2.5, &mut stream(master, 3)).unwrap();
        let back = HermitianMatrix::from_json(&a.to_json()).unwrap();
        prop_assert_eq!(back.dim(), n);
        prop_assert_eq!(a.inner().sub(back.inner()).frobenius_norm(), 0.0);
    }

    #[test]
    fn fit_recovers_planted_power_law(exponent in 0.3f64..3.0, scale in 0.01f64..0.9) {
        let grid = [0.4f64, 0.2, 0.1, 0.05];
        let trials = 1_000_000u64;
        let reports: Vec<McReport> = grid.iter().map(|&eps| {
            let p = (scale * eps.powf(exponent)).min(1.0);
            let successes = (p * trials as f64).round() as u64;
            let (_, lo, hi) = wegner::wilson_interval(successes.max(1), trials);
            McReport {
                eps,
                m: 1,
                trials,
                successes,
                p_hat: p,
                ci_low: lo,
                ci_high: hi,
                bound_value: eps,
                seed: SampleSeed { master: 0, trial: 0 },
            }
        }).collect();
        let fit = wegner::fit_scaling(&grid, &reports).unwrap();
        prop_assert!((fit.exponent - exponent).abs() < 1e-9,
                     "fit {} vs planted {}", fit.exponent, exponent);
        prop_assert!((fit.intercept - scale.ln()).abs() < 1e-9);
        prop_assert!(fit.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn single_site_measure_is_a_probability(h in -2.0f64..2.0, a in 2.0f64..6.0,
                                            d1 in 0.0f64..0.5, d2 in 0.0f64..0.5,
                                            b in 0.5f64..4.0) {
        let (lo, hi) = (d1.min(d2), d1.max(d2));
        let small = models::single_site_event_measure(h, a, lo, b).unwrap();
        let large = models::single_site_event_measure(h, a, hi, b).unwrap();
        prop_assert!((0.0..=1.0).contains(&small));
        prop_assert!((0.0..=1.0).contains(&large));
        prop_assert!(small <= large + 1e-15, "measure not monotone in delta: {} > {}", small, large);
    }

    #[test]
    fn scalar_interval_stays_under_cap(a in 2i64..=6, j in -10.0f64..10.0, frac in 0.0f64..=1.0) {
        let eps = frac / (2.0 * a as f64);
        let margin = models::scalar_regularity_margin(a, j, eps).unwrap();
        prop_assert!(margin.interval_length >= 0.0);
        prop_assert!(margin.bound >= 0.0);
        prop_assert!(margin.interval_length <= margin.bound + 1e-15);
    }
}
