//! The RePair grammar produced by every engine.

use crate::error::{Error, Result};
use crate::freq::freq_table_text;
use crate::symbol::Symbol;

/// Introduced pairs in selection order (pair `i` defines letter
/// `sigma + i`) and the residual sequence `T_m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RePairGrammar {
    pub sigma: u32,
    pub pairs: Vec<(Symbol, Symbol)>,
    pub final_seq: Vec<Symbol>,
}

impl RePairGrammar {
    /// Number of introduced letters `m`.
    pub fn m(&self) -> usize {
        self.pairs.len()
    }

    pub fn validate(&self) -> Result<()> {
        let limit = self.sigma as u64 + self.pairs.len() as u64;
        if limit + 2 >= Symbol::RESERVED as u64 {
            return Err(Error::InvalidGrammar("symbol space collides with reserved codes".into()));
        }
        for (i, &(l, r)) in self.pairs.iter().enumerate() {
            let bound = self.sigma as u64 + i as u64;
            if l.0 as u64 >= bound || r.0 as u64 >= bound {
                return Err(Error::InvalidGrammar(format!("pair {i} references a symbol that is not yet defined")));
            }
        }
        if let Some(s) = self.final_seq.iter().find(|s| s.0 as u64 >= limit) {
            return Err(Error::InvalidGrammar(format!("final sequence uses undefined symbol {}", s.0)));
        }
        if self.final_seq.is_empty() {
            return Err(Error::InvalidGrammar("empty final sequence".into()));
        }
        if let Some((b, f)) = freq_table_text(&self.final_seq).max().filter(|&(_, f)| f >= 2) {
            return Err(Error::InvalidGrammar(format!("final sequence still contains bigram {b} with frequency {f}")));
        }
        Ok(())
    }

    /// Length of the expansion.
    pub fn text_len(&self) -> u64 {
        let mut lens: Vec<u64> = Vec::with_capacity(self.pairs.len());
        let len_of = |s: Symbol, lens: &Vec<u64>| {
            if s.0 < self.sigma {
                1
            } else {
                lens[(s.0 - self.sigma) as usize]
            }
        };
        for &(l, r) in &self.pairs {
            let n = len_of(l, &lens).saturating_add(len_of(r, &lens));
            lens.push(n);
        }
        self.final_seq.iter().fold(0u64, |acc, &s| acc.saturating_add(len_of(s, &lens)))
    }

    /// Substitutes the pairs into the final sequence.
    pub fn expand(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.expand_with(|s| out.push(s));
        out
    }

    pub fn expand_with<F: FnMut(Symbol)>(&self, mut sink: F) {
        let mut stack = Vec::new();
        for &s in &self.final_seq {
            stack.push(s);
            while let Some(c) = stack.pop() {
                if c.0 < self.sigma {
                    sink(c);
                } else {
                    let (l, r) = self.pairs[(c.0 - self.sigma) as usize];
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
    }

    pub fn expand_to_writer<W: std::io::Write>(&self, out: &mut W) -> Result<()> {
        if self.sigma > 256 {
            return Err(Error::NotByte(self.sigma - 1));
        }
        let mut buf = Vec::with_capacity(1 << 16);
        let mut io_err = None;
        self.expand_with(|s| {
            buf.push(s.0 as u8);
            if buf.len() == buf.capacity() && io_err.is_none() {
                io_err = out.write_all(&buf).err();
                buf.clear();
            }
        });
        if let Some(e) = io_err {
            return Err(e.into());
        }
        out.write_all(&buf)?;
        Ok(())
    }
}
