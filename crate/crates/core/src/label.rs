//! Labels over a finite alphabet and the arithmetic shared by every other
//! module: agreement counts, seed labels, parameter derivation and the
//! label-to-subset correspondence.
//!
//! A family of `n` labels of length `gamma` over an alphabet of size `|A|`
//! describes `gamma * |A|` terminal subsets: subset `(j, c)` holds every
//! terminal whose label carries character `c` at position `j`.

use std::fmt;

use thiserror::Error;

/// A character of a label. Characters are the integers `0..alphabet.size()`.
pub type Symbol = u16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("label lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("character {symbol} at position {position} is outside the alphabet of size {size}")]
    SymbolOutOfRange {
        position: usize,
        symbol: Symbol,
        size: u16,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("gamma = {gamma} is smaller than the alphabet size {size}")]
    GammaBelowAlphabet { gamma: u32, size: u16 },
    #[error(
        "alpha/beta = {alpha}/{beta} does not exceed k = {k}; increase the alphabet multiplier"
    )]
    RatioTooSmall { alpha: u32, beta: u32, k: u32 },
    #[error("header value {field} = {found} is inconsistent (expected {expected})")]
    Inconsistent {
        field: &'static str,
        found: u32,
        expected: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet(u16);

impl Alphabet {
    pub fn new(size: u16) -> Result<Self, ParamError> {
        if size < 2 {
            return Err(ParamError::InvalidArgument(format!(
                "alphabet size must be at least 2, got {size}"
            )));
        }
        Ok(Alphabet(size))
    }

    pub fn size(self) -> u16 {
        self.0
    }
}

/// Which flavour of goodness a family is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Pairwise agreement at least alpha, triple agreement at most beta.
    General,
    /// Every label has full degree gamma, pairwise agreement at most beta.
    SingleSource,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::General => "general",
            Variant::SingleSource => "ss",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "general" => Ok(Variant::General),
            "ss" | "single-source" => Ok(Variant::SingleSource),
            other => Err(format!(
                "unknown variant `{other}` (expected general or ss)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Label(Vec<Symbol>);

impl Label {
    pub fn new(chars: Vec<Symbol>) -> Self {
        Label(chars)
    }

    /// Builds a label and checks every character against the alphabet.
    pub fn checked(chars: Vec<Symbol>, alphabet: Alphabet) -> Result<Self, LabelError> {
        if let Some((position, &symbol)) = chars
            .iter()
            .enumerate()
            .find(|(_, &c)| c >= alphabet.size())
        {
            return Err(LabelError::SymbolOutOfRange {
                position,
                symbol,
                size: alphabet.size(),
            });
        }
        Ok(Label(chars))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn chars(&self) -> &[Symbol] {
        &self.0
    }

    pub fn get(&self, position: usize) -> Symbol {
        self.0[position]
    }

    pub(crate) fn set(&mut self, position: usize, symbol: Symbol) {
        self.0[position] = symbol;
    }

    /// Rotates the label left by `shift` positions.
    pub fn rotated(&self, shift: usize) -> Label {
        let mut chars = self.0.clone();
        if !chars.is_empty() {
            let len = chars.len();
            chars.rotate_left(shift % len);
        }
        Label(chars)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Number of positions where two labels carry the same character.
pub fn agreement(s1: &Label, s2: &Label) -> Result<u32, LabelError> {
    if s1.len() != s2.len() {
        return Err(LabelError::LengthMismatch(s1.len(), s2.len()));
    }
    Ok(agreement_unchecked(s1, s2))
}

/// Number of positions where all three labels carry the same character.
pub fn triple_agreement(s1: &Label, s2: &Label, s3: &Label) -> Result<u32, LabelError> {
    if s1.len() != s2.len() {
        return Err(LabelError::LengthMismatch(s1.len(), s2.len()));
    }
    if s1.len() != s3.len() {
        return Err(LabelError::LengthMismatch(s1.len(), s3.len()));
    }
    Ok(triple_agreement_unchecked(s1, s2, s3))
}

pub(crate) fn agreement_unchecked(s1: &Label, s2: &Label) -> u32 {
    s1.0.iter().zip(&s2.0).filter(|(a, b)| a == b).count() as u32
}

pub(crate) fn triple_agreement_unchecked(s1: &Label, s2: &Label, s3: &Label) -> u32 {
    s1.0.iter()
        .zip(&s2.0)
        .zip(&s3.0)
        .filter(|((a, b), c)| a == b && b == c)
        .count() as u32
}

/// Parameters of one construction run.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyParams {
    pub n: usize,
    pub k: u32,
    pub alphabet: Alphabet,
    pub gamma: u32,
    pub alpha: u32,
    pub beta: u32,
    pub variant: Variant,
    /// How many times gamma was enlarged before the construction succeeded.
    pub escalations: u32,
}

impl FamilyParams {
    /// Derives alpha and beta from gamma and checks `alpha / beta > k`.
    pub fn with_gamma(
        n: usize,
        k: u32,
        variant: Variant,
        alphabet: Alphabet,
        gamma: u32,
    ) -> Result<Self, ParamError> {
        if n < 2 {
            return Err(ParamError::InvalidArgument(format!(
                "need at least 2 terminals, got {n}"
            )));
        }
        if k < 1 {
            return Err(ParamError::InvalidArgument("k must be at least 1".into()));
        }
        let size = alphabet.size();
        if gamma < u32::from(size) {
            return Err(ParamError::GammaBelowAlphabet { gamma, size });
        }
        let (alpha, beta) = thresholds(variant, alphabet, gamma);
        if u64::from(alpha) <= u64::from(k) * u64::from(beta) {
            return Err(ParamError::RatioTooSmall { alpha, beta, k });
        }
        Ok(FamilyParams {
            n,
            k,
            alphabet,
            gamma,
            alpha,
            beta,
            variant,
            escalations: 0,
        })
    }

    /// Number of subsets the family describes, `gamma * |A|`.
    pub fn subset_count(&self) -> u64 {
        u64::from(self.gamma) * u64::from(self.alphabet.size())
    }

    /// `alpha / beta > k`, the condition under which strong goodness implies
    /// weak goodness.
    pub fn ratio_exceeds_k(&self) -> bool {
        u64::from(self.alpha) > u64::from(self.k) * u64::from(self.beta)
    }
}

/// The (alpha, beta) pair implied by gamma for the given variant.
pub fn thresholds(variant: Variant, alphabet: Alphabet, gamma: u32) -> (u32, u32) {
    let a = u32::from(alphabet.size());
    match variant {
        Variant::General => (gamma.div_ceil(a), gamma.div_ceil(a * a)),
        Variant::SingleSource => (gamma, gamma.div_ceil(a)),
    }
}

/// Rounds `gamma` up to a positive multiple of the alphabet size.
pub fn round_gamma(gamma: u64, alphabet: Alphabet) -> u64 {
    let a = u64::from(alphabet.size());
    gamma.max(a).div_ceil(a) * a
}

/// Chooses the alphabet and label length for `n` terminals and requirement
/// bound `k`: `|A| = c_mult * k` and `gamma = ceil(zeta * |A|^2 * ln n)` for
/// the general variant, `ceil(zeta * |A| * ln n)` for single-source, rounded up
/// to a multiple of `|A|`.
pub fn derive_params(
    n: usize,
    k: u32,
    variant: Variant,
    c_mult: u32,
    zeta: f64,
) -> Result<FamilyParams, ParamError> {
    if n < 2 {
        return Err(ParamError::InvalidArgument(format!(
            "need at least 2 terminals, got {n}"
        )));
    }
    if k < 1 {
        return Err(ParamError::InvalidArgument("k must be at least 1".into()));
    }
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(ParamError::InvalidArgument(format!(
            "zeta must be positive, got {zeta}"
        )));
    }
    let size = u64::from(c_mult) * u64::from(k);
    if size < 2 {
        return Err(ParamError::InvalidArgument(format!(
            "c_mult * k must be at least 2, got {size}"
        )));
    }
    let size = u16::try_from(size)
        .map_err(|_| ParamError::InvalidArgument(format!("alphabet size {size} too large")))?;
    let alphabet = Alphabet::new(size)?;
    let a = f64::from(size);
    let ln_n = (n as f64).ln();
    let raw = match variant {
        Variant::General => zeta * a * a * ln_n,
        Variant::SingleSource => zeta * a * ln_n,
    };
    let gamma = round_gamma(raw.ceil() as u64, alphabet);
    let gamma = u32::try_from(gamma)
        .map_err(|_| ParamError::InvalidArgument(format!("gamma {gamma} too large")))?;
    FamilyParams::with_gamma(n, k, variant, alphabet, gamma)
}

/// The two labels every general family starts from: the all-zeros label and
/// the cyclic pattern `0, 1, ..., |A|-1` repeated, truncated to `gamma`.
pub fn seed_pair(params: &FamilyParams) -> Result<(Label, Label), ParamError> {
    let size = params.alphabet.size();
    if params.gamma < u32::from(size) {
        return Err(ParamError::GammaBelowAlphabet {
            gamma: params.gamma,
            size,
        });
    }
    let gamma = params.gamma as usize;
    let mu = Label(vec![0; gamma]);
    let nu = Label((0..gamma).map(|j| (j % size as usize) as Symbol).collect());
    Ok((mu, nu))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("expected {expected} labels, got {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("label {index} has length {found}, expected {expected}")]
    WrongLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("label {index}: {source}")]
    BadSymbol { index: usize, source: LabelError },
    #[error("labels {0} and {1} are identical")]
    Duplicate(usize, usize),
}

/// An ordered list of `n` distinct labels together with the parameters they
/// were built for.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodFamily {
    params: FamilyParams,
    labels: Vec<Label>,
}

/// Index of one family subset: position `j` and character `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetIndex {
    pub position: u32,
    pub symbol: Symbol,
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.position, self.symbol)
    }
}

impl GoodFamily {
    /// Checks counts, lengths, alphabet range and distinctness. Does not check
    /// goodness; that is the verifier's job.
    pub fn new(params: FamilyParams, labels: Vec<Label>) -> Result<Self, FamilyError> {
        if labels.len() != params.n {
            return Err(FamilyError::WrongCount {
                expected: params.n,
                found: labels.len(),
            });
        }
        let gamma = params.gamma as usize;
        for (index, label) in labels.iter().enumerate() {
            if label.len() != gamma {
                return Err(FamilyError::WrongLength {
                    index,
                    expected: gamma,
                    found: label.len(),
                });
            }
            Label::checked(label.0.clone(), params.alphabet)
                .map_err(|source| FamilyError::BadSymbol { index, source })?;
        }
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&a, &b| labels[a].cmp_chars(&labels[b]).then(a.cmp(&b)));
        for w in order.windows(2) {
            if labels[w[0]] == labels[w[1]] {
                return Err(FamilyError::Duplicate(w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        Ok(GoodFamily { params, labels })
    }

    /// Skips the distinctness check. Used for deliberately malformed
    /// families in tests and for the brute-force oracles.
    pub fn new_unchecked(params: FamilyParams, labels: Vec<Label>) -> Self {
        GoodFamily { params, labels }
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn into_parts(self) -> (FamilyParams, Vec<Label>) {
        (self.params, self.labels)
    }
}

impl Label {
    fn cmp_chars(&self, other: &Label) -> std::cmp::Ordering {
        self.0.cmp(&other.0)
    }
}

/// Expands a family into its `gamma * |A|` subsets `T_(j,c) = {i : w_i[j] = c}`,
/// ordered by `(j, c)`. Members are 0-based label indices in increasing order.
pub fn subsets_from_labels(fam: &GoodFamily) -> Vec<(SubsetIndex, Vec<usize>)> {
    let params = fam.params();
    let size = params.alphabet.size();
    let mut out: Vec<(SubsetIndex, Vec<usize>)> = (0..params.gamma)
        .flat_map(|position| {
            (0..size).map(move |symbol| (SubsetIndex { position, symbol }, Vec::new()))
        })
        .collect();
    for (i, label) in fam.labels().iter().enumerate() {
        for (j, &c) in label.chars().iter().enumerate() {
            out[j * size as usize + c as usize].1.push(i);
        }
    }
    out
}
