mod common;

use proptest::prelude::*;

use common::{random_family, rejection_sample, rng, weak_all_sizes, FamilyCache};
use vcsndp::label::{Alphabet, FamilyParams, Variant};
use vcsndp::verify::{
    cross_check_observation, verify_strong_goodness, verify_weak_goodness_bruteforce,
    verify_weak_goodness_ss_bruteforce, DEFAULT_BUDGET,
};

fn params(variant: Variant, n: usize, k: u32, a: u16, gamma: u32) -> FamilyParams {
    FamilyParams::with_gamma(n, k, variant, Alphabet::new(a).unwrap(), gamma).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // Only maximum-size blocking sets are enumerated; smaller ones must never
    // find a counterexample the larger ones miss.
    #[test]
    fn max_size_blockers_equal_all_sizes_general(seed in any::<u64>(), n in 2usize..=7, k in 1u32..=3) {
        let p = params(Variant::General, n, k, k as u16 + 2, (k + 2) * (k + 1));
        let mut r = rng(seed);
        if let Some(fam) = random_family(&mut r, &p) {
            let fast = verify_weak_goodness_bruteforce(&fam, k, DEFAULT_BUDGET).unwrap().is_none();
            prop_assert_eq!(fast, weak_all_sizes(&fam, k));
        }
    }

    #[test]
    fn max_size_blockers_equal_all_sizes_ss(seed in any::<u64>(), n in 2usize..=7, k in 1u32..=3) {
        let p = params(Variant::SingleSource, n, k, 2 * k as u16 + 2, 2 * k + 2);
        let mut r = rng(seed);
        if let Some(fam) = random_family(&mut r, &p) {
            let fast = verify_weak_goodness_ss_bruteforce(&fam, k, DEFAULT_BUDGET).unwrap().is_none();
            prop_assert_eq!(fast, weak_all_sizes(&fam, k));
        }
    }
}

#[test]
fn both_outcomes_occur_in_the_equivalence_sweep() {
    let mut seen = [false; 2];
    let mut r = rng(5);
    for _ in 0..400 {
        let p = params(Variant::General, 6, 3, 5, 20);
        if let Some(fam) = random_family(&mut r, &p) {
            seen[usize::from(weak_all_sizes(&fam, 3))] = true;
        }
    }
    assert_eq!(seen, [true, true]);
}

#[test]
fn sampled_strong_families_are_weakly_good() {
    let (fams, attempts) = rejection_sample(99, 50, 200_000);
    assert_eq!(fams.len(), 50, "only {} after {attempts} draws", fams.len());
    for fam in &fams {
        let k = fam.params().k;
        assert!(cross_check_observation(fam, k, DEFAULT_BUDGET).unwrap());
        assert!(weak_all_sizes(fam, k));
    }
}

#[test]
fn constructed_small_families_pass_weak_oracle() {
    let mut cache = FamilyCache::default();
    for variant in [Variant::General, Variant::SingleSource] {
        for n in [4, 6] {
            for k in [2, 3] {
                let fam = cache.get(n, k, variant);
                assert!(verify_strong_goodness(&fam).is_empty());
                assert!(weak_all_sizes(&fam, k), "{variant} n={n} k={k}");
            }
        }
    }
}
