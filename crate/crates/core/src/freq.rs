//! Exact non-overlapping bigram frequencies.

use std::collections::{BTreeMap, HashMap};

use crate::symbol::{tie_break_key, Bigram, Symbol};

/// Non-overlapping frequency of every bigram of a string. Zero entries are
/// never stored.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct FreqTable {
    counts: HashMap<Bigram, u64>,
}

impl FreqTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, bigram: Bigram, count: u64) {
        if count > 0 {
            *self.counts.entry(bigram).or_insert(0) += count;
        }
    }

    pub fn get(&self, bigram: &Bigram) -> u64 {
        self.counts.get(bigram).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Bigram, &u64)> {
        self.counts.iter()
    }

    /// Sorted view, convenient for comparisons and diagnostics.
    pub fn sorted(&self) -> BTreeMap<Bigram, u64> {
        self.counts.iter().map(|(b, f)| (*b, *f)).collect()
    }

    /// The maximal bigram under the shared tie-break, regardless of its
    /// frequency.
    pub fn max(&self) -> Option<(Bigram, u64)> {
        self.counts.iter().min_by_key(|(b, f)| tie_break_key(**b, **f)).map(|(b, f)| (*b, *f))
    }

    /// The bigram RePair replaces next, if any has frequency at least 2.
    pub fn select(&self) -> Option<(Bigram, u64)> {
        self.max().filter(|&(_, f)| f >= 2)
    }
}

impl FromIterator<(Bigram, u64)> for FreqTable {
    fn from_iter<I: IntoIterator<Item = (Bigram, u64)>>(iter: I) -> Self {
        let mut t = FreqTable::new();
        for (b, f) in iter {
            t.add(b, f);
        }
        t
    }
}

/// Frequencies of a plain string: occurrence count for non-repeating
/// bigrams, the sum of `floor(d/2)` over blocks `c^d` for `cc`.
pub fn freq_table_text(w: &[Symbol]) -> FreqTable {
    let mut table = FreqTable::new();
    let mut i = 0;
    while i < w.len() {
        let c = w[i];
        let mut j = i + 1;
        while j < w.len() && w[j] == c {
            j += 1;
        }
        let d = (j - i) as u64;
        table.add(Bigram::new(c, c), d / 2);
        if j < w.len() {
            table.add(Bigram::new(c, w[j]), 1);
        }
        i = j;
    }
    table
}

/// The maximal bigram under the shared tie-break if its frequency is at
/// least 2.
pub fn select_bigram(table: &FreqTable) -> Option<Bigram> {
    table.select().map(|(b, _)| b)
}
