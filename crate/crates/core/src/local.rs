//! Counting inside a per-variable window `rmb(left) · mid · lmb(right)`.
//!
//! Every bigram occurrence of `# T_h $` lies in exactly one such window
//! (the one of the variable labelling the lowest common ancestor of its two
//! leaves), so summing window counts weighted by occurrence counts yields
//! exact frequencies. A block of the window is counted only when the
//! variable witnesses its maximality, i.e. when it is neither a prefix nor a
//! suffix of the variable's expansion.

use crate::rl::RlRun;
use crate::symbol::Bigram;

/// Emits `(bigram, count)` for one window.
///
/// `prefix_at_start`: the first block of the window is a prefix of the
/// variable's expansion (no left child, or a single-block left child).
/// `suffix_at_end`: likewise for the last block.
pub(crate) fn window_counts<I, F>(parts: I, prefix_at_start: bool, suffix_at_end: bool, mut emit: F)
where
    I: IntoIterator<Item = RlRun>,
    F: FnMut(Bigram, u64),
{
    let mut merged: Vec<RlRun> = Vec::new();
    for p in parts {
        match merged.last_mut() {
            Some(last) if last.letter == p.letter => last.exp += p.exp,
            _ => merged.push(p),
        }
    }
    let k = merged.len();
    for (i, block) in merged.iter().enumerate() {
        let prefix = i == 0 && prefix_at_start;
        let suffix = i + 1 == k && suffix_at_end;
        if block.exp >= 2 && !prefix && !suffix {
            emit(Bigram::new(block.letter, block.letter), block.exp / 2);
        }
        if let Some(next) = merged.get(i + 1) {
            emit(Bigram::new(block.letter, next.letter), 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Symbol;

    fn run(c: u8, d: u64) -> RlRun {
        RlRun::new(Symbol::from(c), d)
    }

    fn collect(parts: Vec<RlRun>, p: bool, s: bool) -> Vec<(Bigram, u64)> {
        let mut v = Vec::new();
        window_counts(parts, p, s, |b, c| v.push((b, c)));
        v
    }

    #[test]
    fn prefix_and_suffix_blocks_are_skipped() {
        let aa = Bigram::new(Symbol::from(b'a'), Symbol::from(b'a'));
        let ab = Bigram::new(Symbol::from(b'a'), Symbol::from(b'b'));
        // a^2 · a : one merged block, both prefix and suffix
        assert!(collect(vec![run(b'a', 2), run(b'a', 1)], true, true).is_empty());
        // same block witnessed from both sides
        assert_eq!(collect(vec![run(b'a', 2), run(b'a', 1)], false, false), vec![(aa, 1)]);
        assert_eq!(collect(vec![run(b'a', 3), run(b'b', 1)], true, false), vec![(ab, 1)]);
        assert_eq!(collect(vec![run(b'a', 3), run(b'b', 1)], false, false), vec![(aa, 1), (ab, 1)]);
    }
}
