//! Incremental bookkeeping for the local search.
//!
//! Every term of the potential is `max(0, alpha - v)` or `max(0, v - beta)`
//! where `v` counts how many of an item's cells the working label hits. An
//! item is an accepted label (cells `(j, w_i[j])` for every `j`) or an
//! accepted pair (cells where the two labels agree). Changing the working
//! label at position `j` from `a` to `c` lowers `v` by one for every item
//! holding cell `(j, a)` and raises it for every item holding `(j, c)`, so the
//! change in the potential is read off two per-cell counters: how many items
//! at a cell sit where a decrement moves their term, and how many where an
//! increment does.

use crate::label::{Label, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Term {
    /// `max(0, bound - v)`
    Deficit(u32),
    /// `max(0, v - bound)`
    Excess(u32),
}

impl Term {
    fn cost(self, v: u32) -> u64 {
        match self {
            Term::Deficit(a) => u64::from(a.saturating_sub(v)),
            Term::Excess(b) => u64::from(v.saturating_sub(b)),
        }
    }

    /// Whether lowering `v` by one changes the term.
    fn dec_sensitive(self, v: u32) -> bool {
        match self {
            Term::Deficit(a) => v <= a,
            Term::Excess(b) => v > b,
        }
    }

    /// Whether raising `v` by one changes the term.
    fn inc_sensitive(self, v: u32) -> bool {
        match self {
            Term::Deficit(a) => v < a,
            Term::Excess(b) => v >= b,
        }
    }

    fn dec_sign(self) -> i64 {
        match self {
            Term::Deficit(_) => 1,
            Term::Excess(_) => -1,
        }
    }

    fn inc_sign(self) -> i64 {
        -self.dec_sign()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct TermTracker {
    term: Term,
    alphabet: usize,
    item_cells: Vec<Vec<u32>>,
    index: Vec<Vec<u32>>,
    values: Vec<u32>,
    dec_hits: Vec<u32>,
    inc_hits: Vec<u32>,
    total: u64,
}

impl TermTracker {
    pub(crate) fn new(term: Term, gamma: usize, alphabet: usize) -> Self {
        let cells = gamma * alphabet;
        TermTracker {
            term,
            alphabet,
            item_cells: Vec::new(),
            index: vec![Vec::new(); cells],
            values: Vec::new(),
            dec_hits: vec![0; cells],
            inc_hits: vec![0; cells],
            total: 0,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.item_cells.len()
    }

    pub(crate) fn total(&self) -> u64 {
        self.total
    }

    pub(crate) fn value(&self, item: usize) -> u32 {
        self.values[item]
    }

    /// Registers an item. Its value is meaningless until the next `reset`.
    pub(crate) fn add_item(&mut self, cells: Vec<u32>) {
        let id = self.item_cells.len() as u32;
        for &cell in &cells {
            self.index[cell as usize].push(id);
        }
        self.item_cells.push(cells);
        self.values.push(0);
    }

    /// Recomputes every value and counter for a new working label.
    pub(crate) fn reset(&mut self, working: &Label) {
        let a = self.alphabet;
        let chars = working.chars();
        self.dec_hits.iter_mut().for_each(|h| *h = 0);
        self.inc_hits.iter_mut().for_each(|h| *h = 0);
        self.total = 0;
        for (item, cells) in self.item_cells.iter().enumerate() {
            let v = cells
                .iter()
                .filter(|&&cell| {
                    let cell = cell as usize;
                    chars[cell / a] as usize == cell % a
                })
                .count() as u32;
            self.values[item] = v;
            self.total += self.term.cost(v);
            if self.term.dec_sensitive(v) {
                for &cell in cells {
                    self.dec_hits[cell as usize] += 1;
                }
            }
            if self.term.inc_sensitive(v) {
                for &cell in cells {
                    self.inc_hits[cell as usize] += 1;
                }
            }
        }
    }

    /// Change in this tracker's total if position `j` moves from `from` to `to`.
    pub(crate) fn delta(&self, j: usize, from: Symbol, to: Symbol) -> i64 {
        let base = j * self.alphabet;
        self.term.dec_sign() * i64::from(self.dec_hits[base + from as usize])
            + self.term.inc_sign() * i64::from(self.inc_hits[base + to as usize])
    }

    /// The part of `delta` that does not depend on the new character.
    pub(crate) fn leaving(&self, j: usize, from: Symbol) -> i64 {
        self.term.dec_sign() * i64::from(self.dec_hits[j * self.alphabet + from as usize])
    }

    /// The part of `delta` that depends only on the new character.
    pub(crate) fn entering(&self, j: usize, to: Symbol) -> i64 {
        self.term.inc_sign() * i64::from(self.inc_hits[j * self.alphabet + to as usize])
    }

    pub(crate) fn apply(&mut self, j: usize, from: Symbol, to: Symbol) {
        let base = j * self.alphabet;
        self.shift(base + from as usize, false);
        self.shift(base + to as usize, true);
    }

    fn shift(&mut self, cell: usize, up: bool) {
        let TermTracker {
            term,
            item_cells,
            index,
            values,
            dec_hits,
            inc_hits,
            total,
            ..
        } = self;
        let term = *term;
        for &item in &index[cell] {
            let item = item as usize;
            let old = values[item];
            let new = if up { old + 1 } else { old - 1 };
            values[item] = new;
            *total = *total + term.cost(new) - term.cost(old);
            let cells = &item_cells[item];
            match (term.dec_sensitive(old), term.dec_sensitive(new)) {
                (false, true) => cells.iter().for_each(|&c| dec_hits[c as usize] += 1),
                (true, false) => cells.iter().for_each(|&c| dec_hits[c as usize] -= 1),
                _ => {}
            }
            match (term.inc_sensitive(old), term.inc_sensitive(new)) {
                (false, true) => cells.iter().for_each(|&c| inc_hits[c as usize] += 1),
                (true, false) => cells.iter().for_each(|&c| inc_hits[c as usize] -= 1),
                _ => {}
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(s: &str) -> Label {
        Label::new(s.bytes().map(|b| Symbol::from(b - b'0')).collect())
    }

    fn label_cells(l: &Label, a: usize) -> Vec<u32> {
        l.chars()
            .iter()
            .enumerate()
            .map(|(j, &c)| (j * a + c as usize) as u32)
            .collect()
    }

    #[test]
    fn excess_tracker_follows_moves() {
        let mut t = TermTracker::new(Term::Excess(1), 3, 2);
        t.add_item(label_cells(&lab("000"), 2));
        let mut w = lab("000");
        t.reset(&w);
        assert_eq!(t.total(), 2);
        assert_eq!(t.delta(0, 0, 1), -1);
        t.apply(0, 0, 1);
        w.set(0, 1);
        assert_eq!(t.total(), 1);
        assert_eq!(t.value(0), 2);
        // moving back costs one
        assert_eq!(t.delta(0, 1, 0), 1);
    }

    #[test]
    fn deficit_tracker_counts_both_sides() {
        let mut t = TermTracker::new(Term::Deficit(2), 3, 3);
        t.add_item(label_cells(&lab("012"), 3));
        let w = lab("000");
        t.reset(&w);
        // agreement 1, deficit 1
        assert_eq!(t.total(), 1);
        assert_eq!(t.delta(1, 0, 1), -1);
        assert_eq!(t.delta(0, 0, 1), 1);
        assert_eq!(t.leaving(0, 0) + t.entering(0, 2), 1);
    }
}
