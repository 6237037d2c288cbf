//! Binary and text serialization of SLPs and RePair grammars.
//!
//! Binary `.slp`: `SLPB1`, `sigma`, `n`, then `2n` codes. Binary `.rpg`:
//! `RPGB1`, `sigma`, `m`, `L`, then `2m` pair codes and `L` final codes.
//! All integers are little-endian `u32`; variable `i` is encoded as
//! `sigma + i`. The text variants start with an `SLPv1` / `RPGv1` line.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grammar::RePairGrammar;
use crate::slp::Slp;
use crate::symbol::Symbol;

pub const SLP_MAGIC: &[u8; 5] = b"SLPB1";
pub const RPG_MAGIC: &[u8; 5] = b"RPGB1";
pub const SLP_TEXT_HEADER: &str = "SLPv1";
pub const RPG_TEXT_HEADER: &str = "RPGv1";

/// Either kind of grammar file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GrammarFile {
    Slp(Slp),
    RePair(RePairGrammar),
}

fn put(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn len_u32(v: usize, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Param(format!("{what} does not fit in 32 bits")))
}

pub fn slp_to_bytes(slp: &Slp) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(13 + 8 * slp.rules.len());
    out.extend_from_slice(SLP_MAGIC);
    put(&mut out, slp.sigma);
    put(&mut out, len_u32(slp.rules.len(), "rule count")?);
    for &(l, r) in &slp.rules {
        put(&mut out, l.0);
        put(&mut out, r.0);
    }
    Ok(out)
}

pub fn rpg_to_bytes(g: &RePairGrammar) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(17 + 8 * g.pairs.len() + 4 * g.final_seq.len());
    out.extend_from_slice(RPG_MAGIC);
    put(&mut out, g.sigma);
    put(&mut out, len_u32(g.pairs.len(), "pair count")?);
    put(&mut out, len_u32(g.final_seq.len(), "final length")?);
    for &(l, r) in &g.pairs {
        put(&mut out, l.0);
        put(&mut out, r.0);
    }
    for s in &g.final_seq {
        put(&mut out, s.0);
    }
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn u32(&mut self, what: &str) -> Result<u32> {
        let bytes = self
            .buf
            .get(self.pos..self.pos + 4)
            .ok_or_else(|| Error::Truncated(format!("missing {what} at byte {}", self.pos)))?;
        self.pos += 4;
        Ok(u32::from_le_bytes(bytes.try_into().expect("4 bytes")))
    }

    /// Fails early when fewer than `count` codes remain.
    fn expect_codes(&self, count: u64, what: &str) -> Result<()> {
        let have = (self.buf.len() - self.pos) as u64 / 4;
        if have < count {
            return Err(Error::Truncated(format!("{what}: need {count} codes, have {have}")));
        }
        Ok(())
    }

    fn finish(self) -> Result<()> {
        match self.buf.len() - self.pos {
            0 => Ok(()),
            extra => Err(Error::TrailingBytes(extra)),
        }
    }
}

fn check_magic(bytes: &[u8], magic: &[u8; 5]) -> Result<()> {
    if bytes.len() < magic.len() {
        if magic.starts_with(bytes) {
            return Err(Error::Truncated("file ends inside the magic".into()));
        }
        return Err(Error::BadMagic);
    }
    if &bytes[..5] != magic {
        return Err(Error::BadMagic);
    }
    Ok(())
}

pub fn slp_from_bytes(bytes: &[u8]) -> Result<Slp> {
    check_magic(bytes, SLP_MAGIC)?;
    let mut rd = Reader { buf: bytes, pos: 5 };
    let sigma = rd.u32("sigma")?;
    let n = rd.u32("rule count")?;
    rd.expect_codes(2 * n as u64, "rules")?;
    let mut rules = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let l = rd.u32("rule")?;
        let r = rd.u32("rule")?;
        rules.push((Symbol(l), Symbol(r)));
    }
    rd.finish()?;
    let slp = Slp { sigma, rules };
    slp.validate()?;
    Ok(slp)
}

pub fn rpg_from_bytes(bytes: &[u8]) -> Result<RePairGrammar> {
    check_magic(bytes, RPG_MAGIC)?;
    let mut rd = Reader { buf: bytes, pos: 5 };
    let sigma = rd.u32("sigma")?;
    let m = rd.u32("pair count")?;
    let len = rd.u32("final length")?;
    rd.expect_codes(2 * m as u64 + len as u64, "payload")?;
    let mut pairs = Vec::with_capacity(m as usize);
    for _ in 0..m {
        let l = rd.u32("pair")?;
        let r = rd.u32("pair")?;
        pairs.push((Symbol(l), Symbol(r)));
    }
    let mut final_seq = Vec::with_capacity(len as usize);
    for _ in 0..len {
        final_seq.push(Symbol(rd.u32("final symbol")?));
    }
    rd.finish()?;
    let g = RePairGrammar { sigma, pairs, final_seq };
    g.validate()?;
    Ok(g)
}

pub fn slp_to_text(slp: &Slp) -> String {
    let mut out = format!("{SLP_TEXT_HEADER}\nsigma {}\n", slp.sigma);
    for &(l, r) in &slp.rules {
        let _ = writeln!(out, "{} {}", l.0, r.0);
    }
    out
}

pub fn rpg_to_text(g: &RePairGrammar) -> String {
    let mut out = format!("{RPG_TEXT_HEADER}\nsigma {}\n", g.sigma);
    for &(l, r) in &g.pairs {
        let _ = writeln!(out, "pair {} {}", l.0, r.0);
    }
    out.push_str("final");
    for s in &g.final_seq {
        let _ = write!(out, " {}", s.0);
    }
    out.push('\n');
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn numbers(line: usize, words: &[&str]) -> Result<Vec<u32>> {
    words.iter().map(|w| w.parse::<u32>().map_err(|_| parse_err(line, format!("not a symbol code: {w:?}")))).collect()
}

/// Non-empty lines with their 1-based numbers, after the header.
fn body_lines<'a>(text: &'a str, header: &str) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, h)) if h == header => {}
        _ => return Err(Error::BadMagic),
    }
    Ok(lines.filter(|(_, l)| !l.is_empty()).map(|(i, l)| (i, l.split_whitespace().collect())).collect())
}

fn parse_sigma(lines: &[(usize, Vec<&str>)]) -> Result<u32> {
    match lines.first() {
        Some((i, words)) if words.len() == 2 && words[0] == "sigma" => Ok(numbers(*i, &words[1..])?[0]),
        Some((i, _)) => Err(parse_err(*i, "expected `sigma <size>`")),
        None => Err(Error::Truncated("missing sigma line".into())),
    }
}

pub fn slp_from_text(text: &str) -> Result<Slp> {
    let lines = body_lines(text, SLP_TEXT_HEADER)?;
    let sigma = parse_sigma(&lines)?;
    let mut rules = Vec::new();
    for (i, words) in &lines[1..] {
        if words.len() != 2 {
            return Err(parse_err(*i, "expected `<left> <right>`"));
        }
        let v = numbers(*i, words)?;
        rules.push((Symbol(v[0]), Symbol(v[1])));
    }
    let slp = Slp { sigma, rules };
    slp.validate()?;
    Ok(slp)
}

pub fn rpg_from_text(text: &str) -> Result<RePairGrammar> {
    let lines = body_lines(text, RPG_TEXT_HEADER)?;
    let sigma = parse_sigma(&lines)?;
    let mut pairs = Vec::new();
    let mut final_seq = None;
    for (i, words) in &lines[1..] {
        match words.first().copied() {
            Some("pair") if final_seq.is_none() && words.len() == 3 => {
                let v = numbers(*i, &words[1..])?;
                pairs.push((Symbol(v[0]), Symbol(v[1])));
            }
            Some("final") if final_seq.is_none() => {
                final_seq = Some(numbers(*i, &words[1..])?.into_iter().map(Symbol).collect());
            }
            _ => return Err(parse_err(*i, "expected `pair <left> <right>` or one `final ...` line")),
        }
    }
    let final_seq = final_seq.ok_or_else(|| Error::Truncated("missing final line".into()))?;
    let g = RePairGrammar { sigma, pairs, final_seq };
    g.validate()?;
    Ok(g)
}

/// Detects the format from the leading bytes.
pub fn read_grammar(bytes: &[u8]) -> Result<GrammarFile> {
    let prefix = &bytes[..bytes.len().min(5)];
    if prefix == SLP_MAGIC {
        return slp_from_bytes(bytes).map(GrammarFile::Slp);
    }
    if prefix == RPG_MAGIC {
        return rpg_from_bytes(bytes).map(GrammarFile::RePair);
    }
    if prefix == SLP_TEXT_HEADER.as_bytes() || prefix == RPG_TEXT_HEADER.as_bytes() {
        let text = std::str::from_utf8(bytes).map_err(|_| parse_err(0, "text format is not UTF-8"))?;
        return if prefix == SLP_TEXT_HEADER.as_bytes() {
            slp_from_text(text).map(GrammarFile::Slp)
        } else {
            rpg_from_text(text).map(GrammarFile::RePair)
        };
    }
    if bytes.len() < 5 && (SLP_MAGIC.starts_with(bytes) || RPG_MAGIC.starts_with(bytes)) {
        return Err(Error::Truncated("file ends inside the magic".into()));
    }
    Err(Error::BadMagic)
}
