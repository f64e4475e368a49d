//! Randomized baseline: every character of every label drawn uniformly, then
//! checked against relaxed thresholds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BuildConfig, BuildError};
use crate::label::{
    derive_params, round_gamma, thresholds, FamilyError, FamilyParams, GoodFamily, Label, Variant,
};
use crate::verify::{check_thresholds, Violation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomizedConfig {
    pub build: BuildConfig,
    /// Label length multiplier applied after derivation (1 = derived gamma).
    pub gamma_factor: u32,
    /// Upper cap on the relaxed beta.
    pub beta_budget: Option<u32>,
}

impl Default for RandomizedConfig {
    fn default() -> Self {
        RandomizedConfig {
            build: BuildConfig::default(),
            gamma_factor: 1,
            beta_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailureReport {
    pub params: FamilyParams,
    pub alpha_relaxed: u32,
    pub beta_relaxed: u32,
    pub violations: Vec<Violation>,
    pub duplicates: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RandomOutcome {
    Success {
        family: GoodFamily,
        alpha_relaxed: u32,
        beta_relaxed: u32,
    },
    Failure(FailureReport),
}

impl RandomOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, RandomOutcome::Success { .. })
    }
}

/// Relaxed `(alpha', beta')` used to judge a uniformly drawn family.
pub fn relaxed_thresholds(params: &FamilyParams, beta_budget: Option<u32>) -> (u32, u32) {
    let a = u32::from(params.alphabet.size());
    let (_, beta) = thresholds(params.variant, params.alphabet, params.gamma);
    let doubled = 2 * beta;
    let beta_relaxed = beta_budget.map_or(doubled, |b| b.min(doubled));
    let alpha_relaxed = match params.variant {
        Variant::General => params.gamma / (2 * a),
        Variant::SingleSource => params.gamma,
    };
    (alpha_relaxed, beta_relaxed)
}

pub fn build_family_randomized(
    n: usize,
    k: u32,
    variant: Variant,
    config: &RandomizedConfig,
    rng_seed: u64,
) -> Result<RandomOutcome, BuildError> {
    let base = derive_params(n, k, variant, config.build.c_mult, config.build.zeta)?;
    let gamma = round_gamma(
        u64::from(base.gamma) * u64::from(config.gamma_factor.max(1)),
        base.alphabet,
    ) as u32;
    let params = FamilyParams::with_gamma(n, k, variant, base.alphabet, gamma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let size = params.alphabet.size();
    let labels: Vec<Label> = (0..n)
        .map(|_| Label::new((0..gamma).map(|_| rng.gen_range(0..size)).collect()))
        .collect();
    let (alpha_relaxed, beta_relaxed) = relaxed_thresholds(&params, config.beta_budget);
    let violations = check_thresholds(&labels, variant, alpha_relaxed, beta_relaxed);
    let mut duplicates = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if labels[i] == labels[j] {
                duplicates.push((i, j));
            }
        }
    }
    if violations.is_empty() && duplicates.is_empty() {
        let family =
            GoodFamily::new(params, labels).map_err(|e: FamilyError| BuildError::from(e))?;
        Ok(RandomOutcome::Success {
            family,
            alpha_relaxed,
            beta_relaxed,
        })
    } else {
        Ok(RandomOutcome::Failure(FailureReport {
            params,
            alpha_relaxed,
            beta_relaxed,
            violations,
            duplicates,
        }))
    }
}
