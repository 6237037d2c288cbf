//! Symbols, bigrams and the selection order shared by every engine.

use std::cmp::Reverse;
use std::fmt;

/// A letter or variable code.
///
/// Terminals occupy `0..sigma`, introduced letters follow in introduction
/// order, and the two largest codes are reserved for the sentinels that
/// bracket a level grammar's text.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol(pub u32);

impl Symbol {
    /// Left sentinel, written before the text.
    pub const HASH: Symbol = Symbol(u32::MAX - 1);
    /// Right sentinel, written after the text.
    pub const DOLLAR: Symbol = Symbol(u32::MAX);
    /// Codes at or above this value are reserved.
    pub const RESERVED: u32 = u32::MAX - 1;

    #[inline]
    pub fn id(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_sentinel(self) -> bool {
        self.0 >= Self::RESERVED
    }

    #[inline]
    pub fn is_terminal(self, sigma: u32) -> bool {
        self.0 < sigma
    }
}

impl From<u8> for Symbol {
    fn from(b: u8) -> Self {
        Symbol(b as u32)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Symbol::HASH => f.write_str("#"),
            Symbol::DOLLAR => f.write_str("$"),
            Symbol(id) => write!(f, "{id}"),
        }
    }
}

/// An ordered pair of adjacent symbols. Ordering is lexicographic on
/// `(left, right)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Bigram {
    pub left: Symbol,
    pub right: Symbol,
}

impl Bigram {
    #[inline]
    pub fn new(left: Symbol, right: Symbol) -> Self {
        Bigram { left, right }
    }

    #[inline]
    pub fn is_repeating(&self) -> bool {
        self.left == self.right
    }

    #[inline]
    pub fn touches_sentinel(&self) -> bool {
        self.left.is_sentinel() || self.right.is_sentinel()
    }
}

impl fmt::Display for Bigram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// Selection key: the smallest key wins. Higher frequency first, then the
/// lexicographically smallest `(left, right)` pair.
pub type TieBreakKey = (Reverse<u64>, Bigram);

#[inline]
pub fn tie_break_key(bigram: Bigram, freq: u64) -> TieBreakKey {
    (Reverse(freq), bigram)
}

/// Converts bytes into terminal symbols.
pub fn symbols_from_bytes(bytes: &[u8]) -> Vec<Symbol> {
    bytes.iter().map(|&b| Symbol::from(b)).collect()
}

/// Converts terminal symbols back into bytes. Returns `None` if any symbol
/// does not fit in a byte.
pub fn symbols_to_bytes(symbols: &[Symbol]) -> Option<Vec<u8>> {
    symbols.iter().map(|s| u8::try_from(s.0).ok()).collect()
}
