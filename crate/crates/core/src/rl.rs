//! Run-length encoded symbol strings.

use crate::symbol::Symbol;

/// A block `letter^exp`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RlRun {
    pub letter: Symbol,
    pub exp: u64,
}

impl RlRun {
    pub fn new(letter: Symbol, exp: u64) -> Self {
        debug_assert!(exp >= 1);
        RlRun { letter, exp }
    }
}

/// A canonical run-length string: adjacent runs always carry distinct
/// letters and every exponent is positive.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct RlString {
    runs: Vec<RlRun>,
}

impl RlString {
    pub fn new() -> Self {
        RlString { runs: Vec::new() }
    }

    pub fn from_symbols(symbols: &[Symbol]) -> Self {
        let mut s = RlString::new();
        for &c in symbols {
            s.push_back(c, 1);
        }
        s
    }

    pub fn from_runs<I: IntoIterator<Item = RlRun>>(runs: I) -> Self {
        let mut s = RlString::new();
        for r in runs {
            s.push_back(r.letter, r.exp);
        }
        s
    }

    #[inline]
    pub fn runs(&self) -> &[RlRun] {
        &self.runs
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Number of runs.
    #[inline]
    pub fn rle_size(&self) -> usize {
        self.runs.len()
    }

    /// Number of letters.
    pub fn len(&self) -> u64 {
        self.runs.iter().map(|r| r.exp).sum()
    }

    pub fn first(&self) -> Option<RlRun> {
        self.runs.first().copied()
    }

    pub fn last(&self) -> Option<RlRun> {
        self.runs.last().copied()
    }

    pub fn first_letter(&self) -> Option<Symbol> {
        self.runs.first().map(|r| r.letter)
    }

    pub fn last_letter(&self) -> Option<Symbol> {
        self.runs.last().map(|r| r.letter)
    }

    pub fn push_back(&mut self, letter: Symbol, exp: u64) {
        if exp == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some(r) if r.letter == letter => r.exp += exp,
            _ => self.runs.push(RlRun { letter, exp }),
        }
    }

    pub fn push_front(&mut self, letter: Symbol, exp: u64) {
        if exp == 0 {
            return;
        }
        match self.runs.first_mut() {
            Some(r) if r.letter == letter => r.exp += exp,
            _ => self.runs.insert(0, RlRun { letter, exp }),
        }
    }

    /// Removes one letter from the front.
    pub fn pop_front_letter(&mut self) -> Option<Symbol> {
        let first = self.runs.first_mut()?;
        let c = first.letter;
        first.exp -= 1;
        if first.exp == 0 {
            self.runs.remove(0);
        }
        Some(c)
    }

    /// Removes one letter from the back.
    pub fn pop_back_letter(&mut self) -> Option<Symbol> {
        let last = self.runs.last_mut()?;
        let c = last.letter;
        last.exp -= 1;
        if last.exp == 0 {
            self.runs.pop();
        }
        Some(c)
    }

    /// Removes the whole first run if it is a run of `letter`, returning its
    /// exponent (0 if nothing was removed).
    pub fn strip_front_run(&mut self, letter: Symbol) -> u64 {
        match self.runs.first() {
            Some(r) if r.letter == letter => self.runs.remove(0).exp,
            _ => 0,
        }
    }

    /// Removes the whole last run if it is a run of `letter`.
    pub fn strip_back_run(&mut self, letter: Symbol) -> u64 {
        match self.runs.last() {
            Some(r) if r.letter == letter => self.runs.pop().map_or(0, |r| r.exp),
            _ => 0,
        }
    }

    /// Appends another string, merging at the seam.
    pub fn extend(&mut self, other: &RlString) {
        for r in &other.runs {
            self.push_back(r.letter, r.exp);
        }
    }

    /// Iterates the letters one by one.
    pub fn letters(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.runs.iter().flat_map(|r| std::iter::repeat_n(r.letter, r.exp as usize))
    }

    pub fn to_symbols(&self) -> Vec<Symbol> {
        self.letters().collect()
    }

    /// Replaces every adjacency `left right` (distinct letters) with
    /// `fresh`. Returns the number of replaced occurrences.
    pub fn replace_pair(&mut self, left: Symbol, right: Symbol, fresh: Symbol) -> u64 {
        debug_assert_ne!(left, right);
        let mut runs = std::mem::take(&mut self.runs);
        let mut count = 0;
        let mut out = RlString::new();
        for i in 0..runs.len() {
            let cur = runs[i];
            if cur.exp == 0 {
                continue;
            }
            if cur.letter == left && runs.get(i + 1).is_some_and(|n| n.letter == right) {
                out.push_back(left, cur.exp - 1);
                out.push_back(fresh, 1);
                runs[i + 1].exp -= 1;
                count += 1;
            } else {
                out.push_back(cur.letter, cur.exp);
            }
        }
        *self = out;
        count
    }

    /// Rewrites every run `c^d` with `d >= 2` as `fresh^(d/2)` followed by
    /// `c` iff `d` is odd. Returns the number of replaced occurrences.
    pub fn replace_runs(&mut self, c: Symbol, fresh: Symbol) -> u64 {
        let runs = std::mem::take(&mut self.runs);
        let mut count = 0;
        let mut out = RlString::new();
        for r in runs {
            if r.letter == c && r.exp >= 2 {
                out.push_back(fresh, r.exp / 2);
                out.push_back(c, r.exp % 2);
                count += r.exp / 2;
            } else {
                out.push_back(r.letter, r.exp);
            }
        }
        *self = out;
        count
    }

    pub fn is_canonical(&self) -> bool {
        self.runs.iter().all(|r| r.exp >= 1) && self.runs.windows(2).all(|w| w[0].letter != w[1].letter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> RlString {
        RlString::from_symbols(&text.bytes().map(Symbol::from).collect::<Vec<_>>())
    }

    fn text(r: &RlString) -> String {
        r.letters().map(|c| c.0 as u8 as char).collect()
    }

    #[test]
    fn greedy_pair_replacement() {
        let mut r = s("ababa");
        let n = r.replace_pair(Symbol::from(b'a'), Symbol::from(b'b'), Symbol::from(b'A'));
        assert_eq!(n, 2);
        assert_eq!(text(&r), "AAa");
        assert_eq!(r.rle_size(), 2);
    }

    #[test]
    fn run_replacement_keeps_odd_remainder() {
        let mut r = s("aaaaa");
        let n = r.replace_runs(Symbol::from(b'a'), Symbol::from(b'A'));
        assert_eq!(n, 2);
        assert_eq!(text(&r), "AAa");
    }

    #[test]
    fn strip_and_pop() {
        let mut r = s("aabca");
        assert_eq!(r.strip_front_run(Symbol::from(b'a')), 2);
        assert_eq!(r.strip_front_run(Symbol::from(b'a')), 0);
        assert_eq!(r.pop_back_letter(), Some(Symbol::from(b'a')));
        r.push_front(Symbol::from(b'b'), 3);
        assert_eq!(text(&r), "bbbbc");
        assert!(r.is_canonical());
    }

    proptest! {
        #[test]
        fn mutations_stay_canonical(
            ops in proptest::collection::vec((0u8..6, 0u32..3, 1u64..4), 0..60)
        ) {
            let mut r = RlString::new();
            let mut plain: Vec<Symbol> = Vec::new();
            for (op, letter, exp) in ops {
                let c = Symbol(letter);
                match op {
                    0 => { r.push_back(c, exp); plain.extend(std::iter::repeat_n(c, exp as usize)); }
                    1 => { r.push_front(c, exp); for _ in 0..exp { plain.insert(0, c); } }
                    2 => { if r.pop_front_letter().is_some() { plain.remove(0); } }
                    3 => { if r.pop_back_letter().is_some() { plain.pop(); } }
                    4 => {
                        let k = r.strip_front_run(c);
                        for _ in 0..k { plain.remove(0); }
                    }
                    _ => {
                        let k = r.strip_back_run(c);
                        for _ in 0..k { plain.pop(); }
                    }
                }
                prop_assert!(r.is_canonical());
                prop_assert_eq!(r.to_symbols(), plain.clone());
            }
        }
    }
}
