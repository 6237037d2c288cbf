//! Straight-line programs: validation, expansion, occurrence counts and the
//! pairing builder.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::symbol::Symbol;

/// A straight-line program. Rule `i` defines variable code `sigma + i`;
/// the last rule is the start variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Slp {
    pub sigma: u32,
    pub rules: Vec<(Symbol, Symbol)>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    NoRules,
    SigmaTooLarge(u32),
    ForwardReference { rule: usize, symbol: u32 },
    UnknownSymbol { rule: usize, symbol: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoRules => f.write_str("no rules (expansion shorter than 2)"),
            Violation::SigmaTooLarge(s) => write!(f, "alphabet size {s} collides with reserved codes"),
            Violation::ForwardReference { rule, symbol } => {
                write!(f, "forward reference at rule {rule} (symbol {symbol})")
            }
            Violation::UnknownSymbol { rule, symbol } => {
                write!(f, "unknown symbol {symbol} at rule {rule}")
            }
        }
    }
}

/// Every violation found by [`validate_slp`].
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate_slp(slp: &Slp) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = slp.rules.len() as u64;
    if slp.rules.is_empty() {
        report.violations.push(Violation::NoRules);
    }
    // two sentinels and every introduced letter must stay below the reserved codes
    if slp.sigma as u64 + n + 2 >= Symbol::RESERVED as u64 {
        report.violations.push(Violation::SigmaTooLarge(slp.sigma));
        return report;
    }
    for (i, &(l, r)) in slp.rules.iter().enumerate() {
        for s in [l, r] {
            if s.0 < slp.sigma {
                continue;
            }
            let var = (s.0 - slp.sigma) as u64;
            if var >= n {
                report.violations.push(Violation::UnknownSymbol { rule: i, symbol: s.0 });
            } else if var >= i as u64 {
                report.violations.push(Violation::ForwardReference { rule: i, symbol: s.0 });
            }
        }
    }
    report
}

impl Slp {
    pub fn validate(&self) -> Result<()> {
        let report = validate_slp(self);
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidSlp(report))
        }
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.rules.len()
    }

    pub fn start(&self) -> Symbol {
        self.var_symbol(self.rules.len() - 1)
    }

    #[inline]
    pub fn var_symbol(&self, var: usize) -> Symbol {
        Symbol(self.sigma + var as u32)
    }

    /// The rule index of a variable symbol, `None` for terminals.
    #[inline]
    pub fn var_index(&self, s: Symbol) -> Option<usize> {
        s.0.checked_sub(self.sigma).map(|v| v as usize)
    }

    /// Expansion length of every variable.
    pub fn lengths(&self) -> Result<Vec<u64>> {
        let mut len = Vec::with_capacity(self.rules.len());
        for &(l, r) in &self.rules {
            let part = |s: Symbol, len: &Vec<u64>| self.var_index(s).map_or(1, |v| len[v]);
            let total = part(l, &len).checked_add(part(r, &len)).ok_or(Error::LengthOverflow)?;
            len.push(total);
        }
        Ok(len)
    }

    /// Length of the derived text.
    pub fn text_len(&self) -> Result<u64> {
        Ok(*self.lengths()?.last().unwrap_or(&0))
    }
}

/// Streams `val(start)` symbol by symbol. Working state is a stack bounded
/// by the derivation depth.
pub fn expand_slp_with<F>(slp: &Slp, mut sink: F) -> Result<()>
where
    F: FnMut(Symbol) -> Result<()>,
{
    slp.validate()?;
    let mut stack = vec![slp.start()];
    while let Some(s) = stack.pop() {
        match slp.var_index(s) {
            None => sink(s)?,
            Some(v) => {
                let (l, r) = slp.rules[v];
                stack.push(r);
                stack.push(l);
            }
        }
    }
    Ok(())
}

pub fn expand_slp(slp: &Slp) -> Result<Vec<Symbol>> {
    let mut out = Vec::with_capacity(slp.text_len()?.min(1 << 28) as usize);
    expand_slp_with(slp, |s| {
        out.push(s);
        Ok(())
    })?;
    Ok(out)
}

/// Expands into any byte sink; every terminal must fit in a byte.
pub fn expand_slp_to_writer<W: std::io::Write>(slp: &Slp, out: &mut W) -> Result<()> {
    let mut buf = Vec::with_capacity(1 << 16);
    expand_slp_with(slp, |s| {
        buf.push(u8::try_from(s.0).map_err(|_| Error::NotByte(s.0))?);
        if buf.len() == buf.capacity() {
            out.write_all(&buf)?;
            buf.clear();
        }
        Ok(())
    })?;
    out.write_all(&buf)?;
    Ok(())
}

/// Number of derivation-tree nodes labelled with each variable, computed
/// top-down as path counts from the start variable.
pub fn compute_vocc(slp: &Slp) -> Vec<u64> {
    let n = slp.rules.len();
    let mut vocc = vec![0u64; n];
    if n == 0 {
        return vocc;
    }
    vocc[n - 1] = 1;
    for x in (0..n).rev() {
        let w = vocc[x];
        if w == 0 {
            continue;
        }
        let (l, r) = slp.rules[x];
        for s in [l, r] {
            if let Some(v) = slp.var_index(s) {
                vocc[v] += w;
            }
        }
    }
    vocc
}

/// Builds an SLP by level-wise pairing with hash-consing: adjacent symbols
/// are paired left to right (an odd trailing symbol is carried up), each
/// distinct pair gets one variable, until a single symbol remains.
pub fn build_slp(text: &[Symbol], sigma: u32) -> Result<Slp> {
    if text.len() < 2 {
        return Err(Error::TextTooShort(text.len()));
    }
    if let Some(s) = text.iter().find(|s| s.0 >= sigma) {
        return Err(Error::SymbolOutOfAlphabet { symbol: s.0, sigma });
    }
    let mut rules: Vec<(Symbol, Symbol)> = Vec::new();
    let mut ids: HashMap<(Symbol, Symbol), Symbol> = HashMap::new();
    let mut level: Vec<Symbol> = text.to_vec();
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len() / 2 + 1);
        for pair in level.chunks(2) {
            match *pair {
                [l, r] => {
                    let var = *ids.entry((l, r)).or_insert_with(|| {
                        rules.push((l, r));
                        Symbol(sigma + rules.len() as u32 - 1)
                    });
                    next.push(var);
                }
                [odd] => next.push(odd),
                _ => unreachable!(),
            }
        }
        level = next;
    }
    let slp = Slp { sigma, rules };
    slp.validate()?;
    Ok(slp)
}

/// Pairing builder over bytes with `sigma = 256`.
pub fn build_slp_bytes(text: &[u8]) -> Result<Slp> {
    build_slp(&crate::symbol::symbols_from_bytes(text), 256)
}
