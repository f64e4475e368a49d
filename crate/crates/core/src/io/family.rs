use std::fmt::Write as _;

use super::{parse_field, parse_num, tokens, ParseError};
use crate::label::{thresholds, Alphabet, FamilyError, FamilyParams, GoodFamily, Label, Variant};

/// Canonical text form. Escalation count is not part of the format.
pub fn write_family(fam: &GoodFamily) -> String {
    let p = fam.params();
    let mut out = format!(
        "goodfam v1 {} n={} k={} A={} gamma={} alpha={} beta={}\n",
        p.variant,
        p.n,
        p.k,
        p.alphabet.size(),
        p.gamma,
        p.alpha,
        p.beta
    );
    for label in fam.labels() {
        let _ = writeln!(out, "{label}");
    }
    out
}

pub fn read_family(text: &str) -> Result<GoodFamily, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let Some((_, header)) = lines.next() else {
        return Err(ParseError::at(1, 0, "empty file"));
    };
    let params = parse_header(header)?;
    let size = params.alphabet.size();
    let mut labels = Vec::with_capacity(params.n);
    let mut label_lines = Vec::with_capacity(params.n);
    for (no, line) in lines {
        let toks = tokens(line);
        if toks.is_empty() {
            return Err(ParseError::at(no, 0, "blank line"));
        }
        if labels.len() == params.n {
            return Err(ParseError::at(
                no,
                0,
                format!("more than n = {} labels", params.n),
            ));
        }
        if toks.len() != params.gamma as usize {
            return Err(ParseError::at(
                no,
                0,
                format!(
                    "label has {} characters, expected gamma = {}",
                    toks.len(),
                    params.gamma
                ),
            ));
        }
        let mut chars = Vec::with_capacity(toks.len());
        for tok in toks {
            let c: u16 = parse_num(no, tok, "a character")?;
            if c >= size {
                return Err(ParseError::at(
                    no,
                    tok.0,
                    format!("character {c} outside alphabet of size {size}"),
                ));
            }
            chars.push(c);
        }
        labels.push(Label::new(chars));
        label_lines.push(no);
    }
    if labels.len() != params.n {
        return Err(ParseError::at(
            text.lines().count().max(1),
            0,
            format!(
                "found {} labels, header says n = {}",
                labels.len(),
                params.n
            ),
        ));
    }
    GoodFamily::new(params, labels).map_err(|e| match e {
        FamilyError::Duplicate(i, j) => ParseError::at(
            label_lines[j],
            0,
            format!("label {j} duplicates label {i} (line {})", label_lines[i]),
        ),
        other => ParseError::at(1, 0, other.to_string()),
    })
}

fn parse_header(line: &str) -> Result<FamilyParams, ParseError> {
    let t = tokens(line);
    let mut it = t.iter().copied();
    match (it.next(), it.next()) {
        (Some((_, "goodfam")), Some((_, "v1"))) => {}
        _ => return Err(ParseError::at(1, 1, "expected header 'goodfam v1'")),
    }
    let (vcol, vtext) = it
        .next()
        .ok_or_else(|| ParseError::at(1, 0, "missing variant"))?;
    let variant: Variant = vtext
        .parse()
        .map_err(|_| ParseError::at(1, vcol, format!("unknown variant '{vtext}'")))?;
    let n: usize = parse_field(1, it.next(), "n")?;
    let k: u32 = parse_field(1, it.next(), "k")?;
    let a: u16 = parse_field(1, it.next(), "A")?;
    let gamma: u32 = parse_field(1, it.next(), "gamma")?;
    let alpha: u32 = parse_field(1, it.next(), "alpha")?;
    let beta: u32 = parse_field(1, it.next(), "beta")?;
    if let Some((col, extra)) = it.next() {
        return Err(ParseError::at(1, col, format!("unexpected '{extra}'")));
    }
    let alphabet = Alphabet::new(a).map_err(|e| ParseError::at(1, 0, e.to_string()))?;
    let (want_alpha, want_beta) = thresholds(variant, alphabet, gamma);
    if (alpha, beta) != (want_alpha, want_beta) {
        return Err(ParseError::at(
            1,
            0,
            format!(
                "alpha={alpha} beta={beta} inconsistent with gamma={gamma}, A={a}, {variant} \
                 (expected alpha={want_alpha} beta={want_beta})"
            ),
        ));
    }
    FamilyParams::with_gamma(n, k, variant, alphabet, gamma)
        .map_err(|e| ParseError::at(1, 0, e.to_string()))
}
