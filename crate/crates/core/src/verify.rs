//! Certification of label families.
//!
//! Strong goodness is a polynomial check over pairs and triples. Weak
//! goodness is checked by brute force over every blocking set, which is only
//! feasible for small families and is guarded by a work budget.

use itertools::Itertools;
use thiserror::Error;

use crate::label::{agreement_unchecked, GoodFamily, Label, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// General: two labels agree in fewer than alpha positions.
    PairwiseLow,
    /// General: three labels agree in more than beta positions.
    TripleHigh,
    /// Single-source: two labels agree in more than beta positions.
    PairwiseHighSs,
    /// Single-source: a label's degree differs from alpha.
    DegreeSs,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::PairwiseLow => "pairwise_low",
            ViolationKind::TripleHigh => "triple_high",
            ViolationKind::PairwiseHighSs => "pairwise_high_ss",
            ViolationKind::DegreeSs => "degree_ss",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// 0-based label indices, increasing.
    pub witnesses: Vec<usize>,
    pub observed: u32,
    pub bound: u32,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} labels {:?}: observed {} bound {}",
            self.kind.as_str(),
            self.witnesses,
            self.observed,
            self.bound
        )
    }
}

/// All strong-goodness violations of a family under its own parameters.
/// An empty result means the family is strongly good.
pub fn verify_strong_goodness(fam: &GoodFamily) -> Vec<Violation> {
    let p = fam.params();
    let mut out = check_thresholds(fam.labels(), p.variant, p.alpha, p.beta);
    if p.variant == Variant::SingleSource {
        for (i, label) in fam.labels().iter().enumerate() {
            if label.len() as u32 != p.alpha {
                out.push(Violation {
                    kind: ViolationKind::DegreeSs,
                    witnesses: vec![i],
                    observed: label.len() as u32,
                    bound: p.alpha,
                });
            }
        }
    }
    out
}

/// Checks pairwise and triple agreement bounds with explicit thresholds.
///
/// General: every pair agrees in at least `alpha` positions and every triple
/// in at most `beta`. Single-source: every pair agrees in at most `beta`
/// (`alpha` unused). Triples whose smallest pairwise agreement is already at
/// most `beta` are skipped.
pub fn check_thresholds(
    labels: &[Label],
    variant: Variant,
    alpha: u32,
    beta: u32,
) -> Vec<Violation> {
    let n = labels.len();
    let mut out = Vec::new();
    let mut ag = vec![0u32; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let a = agreement_unchecked(&labels[i], &labels[j]);
            ag[i * n + j] = a;
            ag[j * n + i] = a;
            match variant {
                Variant::General if a < alpha => out.push(Violation {
                    kind: ViolationKind::PairwiseLow,
                    witnesses: vec![i, j],
                    observed: a,
                    bound: alpha,
                }),
                Variant::SingleSource if a > beta => out.push(Violation {
                    kind: ViolationKind::PairwiseHighSs,
                    witnesses: vec![i, j],
                    observed: a,
                    bound: beta,
                }),
                _ => {}
            }
        }
    }
    if variant == Variant::SingleSource {
        return out;
    }
    let mut columns: Vec<usize> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if ag[i * n + j] <= beta {
                continue;
            }
            columns.clear();
            columns.extend(
                labels[i]
                    .chars()
                    .iter()
                    .zip(labels[j].chars())
                    .enumerate()
                    .filter(|(_, (x, y))| x == y)
                    .map(|(c, _)| c),
            );
            for t in j + 1..n {
                if ag[i * n + t] <= beta || ag[j * n + t] <= beta {
                    continue;
                }
                let wi = labels[i].chars();
                let wt = labels[t].chars();
                let triple = columns.iter().filter(|&&c| wi[c] == wt[c]).count() as u32;
                if triple > beta {
                    out.push(Violation {
                        kind: ViolationKind::TripleHigh,
                        witnesses: vec![i, j, t],
                        observed: triple,
                        bound: beta,
                    });
                }
            }
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("brute-force oracle needs {work} checks, over the budget of {budget}")]
    BudgetExceeded { work: u128, budget: u64 },
}

/// Default work budget for the brute-force oracles, in (candidate, X) checks.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// A pair whose shared subsets are all hit by a blocking set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCounterexample {
    pub pair: (usize, usize),
    pub blockers: Vec<usize>,
}

/// A terminal whose subsets are all hit by a blocking set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalCounterexample {
    pub terminal: usize,
    pub blockers: Vec<usize>,
}

/// Bit set over the `gamma * |A|` family subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SubsetMask(Vec<u64>);

impl SubsetMask {
    pub(crate) fn of_label(label: &Label, alphabet: usize, words: usize) -> Self {
        let mut bits = vec![0u64; words];
        for (j, &c) in label.chars().iter().enumerate() {
            let b = j * alphabet + c as usize;
            bits[b / 64] |= 1 << (b % 64);
        }
        SubsetMask(bits)
    }

    pub(crate) fn words_for(fam: &GoodFamily) -> usize {
        (fam.params().subset_count() as usize).div_ceil(64).max(1)
    }

    fn and(&self, other: &SubsetMask) -> SubsetMask {
        SubsetMask(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn covered_by_union<'a>(&self, others: impl Iterator<Item = &'a SubsetMask> + Clone) -> bool {
        self.0.iter().enumerate().all(|(w, &bits)| {
            let union = others.clone().fold(0u64, |acc, m| acc | m.0[w]);
            bits & !union == 0
        })
    }
}

fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn masks(fam: &GoodFamily) -> Vec<SubsetMask> {
    let words = SubsetMask::words_for(fam);
    let a = fam.params().alphabet.size() as usize;
    fam.labels()
        .iter()
        .map(|l| SubsetMask::of_label(l, a, words))
        .collect()
}

/// Brute-force check that for every pair `(i, j)` and every blocking set `X`
/// of `min(k - 1, n - 2)` other labels, some subset contains both `i` and `j`
/// but nothing from `X`. Only maximum-size `X` are tried: `N(X)` grows with
/// `X`, so a smaller blocking set can never succeed where its supersets fail.
///
/// Returns the first counterexample in lexicographic order of `(i, j, X)`.
pub fn verify_weak_goodness_bruteforce(
    fam: &GoodFamily,
    k: u32,
    budget: u64,
) -> Result<Option<PairCounterexample>, VerifyError> {
    let n = fam.len();
    if n < 2 {
        return Ok(None);
    }
    let size = (k.saturating_sub(1) as usize).min(n - 2);
    let work = binomial(n, 2) * binomial(n - 2, size);
    if work > u128::from(budget) {
        return Err(VerifyError::BudgetExceeded { work, budget });
    }
    let nbhd = masks(fam);
    for i in 0..n {
        for j in i + 1..n {
            let shared = nbhd[i].and(&nbhd[j]);
            let others = (0..n).filter(|&x| x != i && x != j);
            for blockers in others.combinations(size) {
                if shared.covered_by_union(blockers.iter().map(|&x| &nbhd[x])) {
                    return Ok(Some(PairCounterexample {
                        pair: (i, j),
                        blockers,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Single-source analogue: for every terminal `i` and every blocking set `X`
/// of `min(k - 1, n - 1)` other labels, some subset contains `i` but nothing
/// from `X`.
pub fn verify_weak_goodness_ss_bruteforce(
    fam: &GoodFamily,
    k: u32,
    budget: u64,
) -> Result<Option<TerminalCounterexample>, VerifyError> {
    let n = fam.len();
    if n == 0 {
        return Ok(None);
    }
    let size = (k.saturating_sub(1) as usize).min(n - 1);
    let work = n as u128 * binomial(n - 1, size);
    if work > u128::from(budget) {
        return Err(VerifyError::BudgetExceeded { work, budget });
    }
    let nbhd = masks(fam);
    for i in 0..n {
        let others = (0..n).filter(|&x| x != i);
        for blockers in others.combinations(size) {
            if nbhd[i].covered_by_union(blockers.iter().map(|&x| &nbhd[x])) {
                return Ok(Some(TerminalCounterexample {
                    terminal: i,
                    blockers,
                }));
            }
        }
    }
    Ok(None)
}

/// Checks that strong goodness with `alpha / beta > k` implies weak goodness
/// on this family. Returns `true` when the implication holds, including
/// vacuously when the family is not strongly good.
pub fn cross_check_observation(fam: &GoodFamily, k: u32, budget: u64) -> Result<bool, VerifyError> {
    let p = fam.params();
    let ratio_ok = u64::from(p.alpha) > u64::from(k) * u64::from(p.beta);
    if !ratio_ok || !verify_strong_goodness(fam).is_empty() {
        return Ok(true);
    }
    let weak_ok = match p.variant {
        Variant::General => verify_weak_goodness_bruteforce(fam, k, budget)?.is_none(),
        Variant::SingleSource => verify_weak_goodness_ss_bruteforce(fam, k, budget)?.is_none(),
    };
    Ok(weak_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{seed_pair, Alphabet, FamilyParams, Symbol};

    fn lab(s: &str) -> Label {
        Label::new(s.bytes().map(|b| Symbol::from(b - b'0')).collect())
    }

    fn params(
        variant: Variant,
        n: usize,
        size: u16,
        gamma: u32,
        alpha: u32,
        beta: u32,
    ) -> FamilyParams {
        FamilyParams {
            n,
            k: 1,
            alphabet: Alphabet::new(size).unwrap(),
            gamma,
            alpha,
            beta,
            variant,
            escalations: 0,
        }
    }

    fn fam(p: FamilyParams, labels: &[&str]) -> GoodFamily {
        GoodFamily::new_unchecked(p, labels.iter().map(|s| lab(s)).collect())
    }

    #[test]
    fn seed_pair_is_strongly_good() {
        let p =
            FamilyParams::with_gamma(2, 2, Variant::General, Alphabet::new(3).unwrap(), 9).unwrap();
        let (mu, nu) = seed_pair(&p).unwrap();
        assert_eq!(p.alpha, 3);
        let f = GoodFamily::new(p, vec![mu, nu]).unwrap();
        assert!(verify_strong_goodness(&f).is_empty());
    }

    #[test]
    fn hand_enumerated_triple_at_bound() {
        let f = fam(
            params(Variant::General, 3, 2, 3, 2, 1),
            &["000", "001", "011"],
        );
        // pairs agree in 2, 1, 2 positions: (0,2) falls below alpha = 2
        let v = verify_strong_goodness(&f);
        assert_eq!(
            v,
            vec![Violation {
                kind: ViolationKind::PairwiseLow,
                witnesses: vec![0, 2],
                observed: 1,
                bound: 2
            }]
        );
        // with alpha = 1 the only triple agrees in 1 <= beta position
        let f = fam(
            params(Variant::General, 3, 2, 3, 1, 1),
            &["000", "001", "011"],
        );
        assert!(verify_strong_goodness(&f).is_empty());
    }

    #[test]
    fn triple_high_is_reported() {
        let f = fam(
            params(Variant::General, 3, 2, 4, 1, 1),
            &["0000", "0001", "0011"],
        );
        let v = verify_strong_goodness(&f);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::TripleHigh);
        assert_eq!(v[0].witnesses, vec![0, 1, 2]);
        assert_eq!(v[0].observed, 2);
    }

    #[test]
    fn single_source_pair_too_close() {
        let f = fam(
            params(Variant::SingleSource, 2, 2, 3, 3, 1),
            &["000", "001"],
        );
        let v = verify_strong_goodness(&f);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::PairwiseHighSs);
        assert_eq!((v[0].observed, v[0].bound), (2, 1));
    }

    #[test]
    fn weak_k1_is_shared_subset() {
        let f = fam(params(Variant::General, 3, 2, 2, 1, 1), &["00", "01", "11"]);
        let ce = verify_weak_goodness_bruteforce(&f, 1, DEFAULT_BUDGET).unwrap();
        // 00 and 11 share nothing
        assert_eq!(
            ce,
            Some(PairCounterexample {
                pair: (0, 2),
                blockers: vec![]
            })
        );
        let f = fam(
            params(Variant::General, 3, 2, 3, 1, 1),
            &["000", "001", "010"],
        );
        assert_eq!(
            verify_weak_goodness_bruteforce(&f, 1, DEFAULT_BUDGET).unwrap(),
            None
        );
    }

    #[test]
    fn weak_counterexample_for_disjoint_pair() {
        let f = fam(params(Variant::General, 3, 2, 2, 1, 1), &["00", "11", "01"]);
        let ce = verify_weak_goodness_bruteforce(&f, 2, DEFAULT_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!(ce.pair, (0, 1));
        assert_eq!(ce.blockers, vec![2]);
    }

    #[test]
    fn weak_ss_duplicate_labels() {
        let f = fam(params(Variant::SingleSource, 2, 2, 2, 2, 1), &["00", "00"]);
        let ce = verify_weak_goodness_ss_bruteforce(&f, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            ce,
            Some(TerminalCounterexample {
                terminal: 0,
                blockers: vec![1]
            })
        );
        assert_eq!(
            verify_weak_goodness_ss_bruteforce(&f, 1, DEFAULT_BUDGET).unwrap(),
            None
        );
    }

    #[test]
    fn budget_is_enforced() {
        let labels: Vec<String> = (0..40).map(|i| format!("{:06b}", i)).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let f = fam(params(Variant::General, 40, 2, 6, 1, 1), &refs);
        let err = verify_weak_goodness_bruteforce(&f, 6, 1000).unwrap_err();
        assert!(matches!(err, VerifyError::BudgetExceeded { .. }));
    }

    #[test]
    fn corrupted_family_is_vacuous() {
        let f = fam(params(Variant::General, 3, 2, 2, 2, 1), &["00", "11", "01"]);
        assert!(!verify_strong_goodness(&f).is_empty());
        assert!(cross_check_observation(&f, 1, DEFAULT_BUDGET).unwrap());
    }
}
