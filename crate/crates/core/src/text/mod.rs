//! RePair on plain symbol sequences.

pub mod fast;
pub mod naive;

use crate::error::{Error, Result};
use crate::symbol::{Bigram, Symbol};

/// Greedy left-to-right replacement of every non-overlapping occurrence of
/// `b` by `fresh`.
pub fn replace_pair_text(w: &[Symbol], b: Bigram, fresh: Symbol) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(w.len());
    let mut i = 0;
    while i < w.len() {
        if i + 1 < w.len() && w[i] == b.left && w[i + 1] == b.right {
            out.push(fresh);
            i += 2;
        } else {
            out.push(w[i]);
            i += 1;
        }
    }
    out
}

pub(crate) fn check_text(text: &[Symbol], sigma: u32) -> Result<()> {
    if text.len() < 2 {
        return Err(Error::TextTooShort(text.len()));
    }
    if let Some(s) = text.iter().find(|s| s.0 >= sigma) {
        return Err(Error::SymbolOutOfAlphabet { symbol: s.0, sigma });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::symbols_from_bytes;

    fn rep(text: &[u8], l: u8, r: u8) -> Vec<Symbol> {
        replace_pair_text(&symbols_from_bytes(text), Bigram::new(Symbol::from(l), Symbol::from(r)), Symbol::from(b'A'))
    }

    #[test]
    fn greedy_replacement() {
        assert_eq!(rep(b"aaaaa", b'a', b'a'), symbols_from_bytes(b"AAa"));
        assert_eq!(rep(b"abab", b'a', b'b'), symbols_from_bytes(b"AA"));
        assert_eq!(rep(b"aba", b'a', b'a'), symbols_from_bytes(b"aba"));
    }
}
