//! Level grammars: the evolving grammar deriving `# T_h $`.
//!
//! Every rule has the shape `left · mid · right` where `left` and `right`
//! are optional variables and `mid` is a run-length encoded letter string.
//! Variables are the original SLP variables followed by `X_#` and `X_$`;
//! they keep their indices for the whole run and become null (tombstoned)
//! once they derive the empty string.

use crate::error::{Error, Result};
use crate::rl::{RlRun, RlString};
use crate::slp::{compute_vocc, Slp};
use crate::symbol::Symbol;

pub type VarId = usize;

#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct LevelRule {
    pub left: Option<VarId>,
    pub mid: RlString,
    pub right: Option<VarId>,
}

impl LevelRule {
    pub fn is_null(&self) -> bool {
        self.left.is_none() && self.right.is_none() && self.mid.is_empty()
    }

    /// Runs in `mid` plus present variables.
    pub fn size(&self) -> u64 {
        self.mid.rle_size() as u64 + self.left.is_some() as u64 + self.right.is_some() as u64
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> {
        self.left.into_iter().chain(self.right)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LevelGrammar {
    pub sigma: u32,
    pub rules: Vec<LevelRule>,
    pub level: usize,
    /// `|# T_h $|`.
    pub text_len: u64,
}

impl LevelGrammar {
    /// Number of original SLP variables.
    pub fn n(&self) -> usize {
        self.rules.len() - 2
    }

    pub fn hash_var(&self) -> VarId {
        self.rules.len() - 2
    }

    pub fn start(&self) -> VarId {
        self.rules.len() - 1
    }

    /// `|G_h|`.
    pub fn size(&self) -> u64 {
        self.rules.iter().map(LevelRule::size).sum()
    }

    /// `n_h`, the number of non-null variables.
    pub fn live_vars(&self) -> u64 {
        self.rules.iter().filter(|r| !r.is_null()).count() as u64
    }

    /// `|T_h|` without sentinels.
    pub fn inner_len(&self) -> u64 {
        self.text_len - 2
    }

    /// Structural checks: topological references to live variables and
    /// canonical runs.
    pub fn check_well_formed(&self) -> Result<()> {
        for (x, rule) in self.rules.iter().enumerate() {
            if !rule.mid.is_canonical() {
                return Err(Error::Invariant(format!("rule {x} has non-canonical runs")));
            }
            for y in rule.vars() {
                if y >= x || self.rules[y].is_null() {
                    return Err(Error::Invariant(format!(
                        "rule {x} references variable {y} that is null or not smaller"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Builds `G_0` from an SLP: each bigram rule becomes a level rule and the
/// sentinel rules `X_# -> # X_n`, `X_$ -> X_# $` are appended. Variables
/// unreachable from the start are null from the outset.
pub fn attach_sentinels(slp: &Slp) -> Result<LevelGrammar> {
    slp.validate()?;
    let n = slp.n();
    let vocc = compute_vocc(slp);
    let n_text = slp.text_len()?;
    let text_len = n_text.checked_add(2).ok_or(Error::LengthOverflow)?;
    let mut rules = Vec::with_capacity(n + 2);
    for (x, &(l, r)) in slp.rules.iter().enumerate() {
        if vocc[x] == 0 {
            rules.push(LevelRule::default());
            continue;
        }
        let mut rule = LevelRule::default();
        match slp.var_index(l) {
            Some(v) => rule.left = Some(v),
            None => rule.mid.push_back(l, 1),
        }
        match slp.var_index(r) {
            Some(v) => rule.right = Some(v),
            None => rule.mid.push_back(r, 1),
        }
        rules.push(rule);
    }
    let mut hash = LevelRule::default();
    hash.mid.push_back(Symbol::HASH, 1);
    hash.right = Some(n - 1);
    rules.push(hash);
    let mut dollar = LevelRule { left: Some(n), ..Default::default() };
    dollar.mid.push_back(Symbol::DOLLAR, 1);
    rules.push(dollar);
    Ok(LevelGrammar { sigma: slp.sigma, rules, level: 0, text_len })
}

/// Occurrence counts of every variable in the derivation tree of a level
/// grammar (0 for null variables).
pub fn compute_level_vocc(g: &LevelGrammar) -> Vec<u64> {
    let mut vocc = vec![0u64; g.rules.len()];
    vocc[g.start()] = 1;
    for x in (0..g.rules.len()).rev() {
        let w = vocc[x];
        if w == 0 {
            continue;
        }
        for y in g.rules[x].vars() {
            vocc[y] += w;
        }
    }
    vocc
}

/// Leftmost block, rightmost block and single-block flag of a variable's
/// expansion.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VarBoundary {
    pub lmb: RlRun,
    pub rmb: RlRun,
    pub single_block: bool,
}

impl VarBoundary {
    pub fn first_letter(&self) -> Symbol {
        self.lmb.letter
    }

    pub fn last_letter(&self) -> Symbol {
        self.rmb.letter
    }
}

/// Boundary information per variable; `None` for null variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryInfo {
    pub vars: Vec<Option<VarBoundary>>,
}

impl BoundaryInfo {
    #[inline]
    pub fn get(&self, x: VarId) -> &VarBoundary {
        self.vars[x].as_ref().expect("boundary info of a null variable")
    }
}

/// Boundary of `left · mid · right` from the children's boundaries, in
/// constant time per rule (the first and last runs of `mid` suffice).
pub(crate) fn combine_boundary(
    left: Option<&VarBoundary>,
    mid_first: Option<RlRun>,
    mid_last: Option<RlRun>,
    mid_single_run: bool,
    right: Option<&VarBoundary>,
) -> Option<VarBoundary> {
    // Pieces in order; `open` pieces let a block continue into the next one.
    let mut pieces: Vec<(RlRun, bool)> = Vec::with_capacity(4);
    if let Some(l) = left {
        pieces.push((l.lmb, l.single_block));
    }
    if let Some(f) = mid_first {
        pieces.push((f, mid_single_run));
        if !mid_single_run {
            // only marks that more material follows; a multi-run mid always
            // stops the walk at its first run
            pieces.push((mid_last.expect("non-empty mid has a last run"), true));
        }
    }
    if let Some(r) = right {
        pieces.push((r.lmb, r.single_block));
    }
    if pieces.is_empty() {
        return None;
    }
    let lmb = leading_block(&pieces);

    let mut rpieces: Vec<(RlRun, bool)> = Vec::with_capacity(4);
    if let Some(r) = right {
        rpieces.push((r.rmb, r.single_block));
    }
    if let Some(l) = mid_last {
        rpieces.push((l, mid_single_run));
        if !mid_single_run {
            rpieces.push((mid_first.expect("non-empty mid has a first run"), true));
        }
    }
    if let Some(l) = left {
        rpieces.push((l.rmb, l.single_block));
    }
    let rmb = leading_block(&rpieces);

    let single_block = lmb.1;
    Some(VarBoundary { lmb: lmb.0, rmb: rmb.0, single_block })
}

/// Leading block over a piece sequence; the flag reports whether every
/// piece was absorbed.
fn leading_block(pieces: &[(RlRun, bool)]) -> (RlRun, bool) {
    let (mut block, mut open) = pieces[0];
    let mut i = 1;
    while open && i < pieces.len() && pieces[i].0.letter == block.letter {
        block.exp += pieces[i].0.exp;
        open = pieces[i].1;
        i += 1;
    }
    (block, open && i == pieces.len())
}

/// Computes boundary information bottom-up for every live variable.
pub fn compute_boundary_info(g: &LevelGrammar) -> BoundaryInfo {
    let mut vars: Vec<Option<VarBoundary>> = vec![None; g.rules.len()];
    for (x, rule) in g.rules.iter().enumerate() {
        if rule.is_null() {
            continue;
        }
        let b = combine_boundary(
            rule.left.map(|y| vars[y].as_ref().expect("live child")),
            rule.mid.first(),
            rule.mid.last(),
            rule.mid.rle_size() == 1,
            rule.right.map(|y| vars[y].as_ref().expect("live child")),
        );
        vars[x] = b;
    }
    BoundaryInfo { vars }
}

/// Expands a variable of a level grammar.
pub fn expand_var(g: &LevelGrammar, x: VarId) -> Vec<Symbol> {
    enum Item {
        Var(VarId),
        Run(RlRun),
    }
    let mut out = Vec::new();
    let mut stack = vec![Item::Var(x)];
    while let Some(item) = stack.pop() {
        match item {
            Item::Run(r) => out.extend(std::iter::repeat_n(r.letter, r.exp as usize)),
            Item::Var(v) => {
                let rule = &g.rules[v];
                if let Some(r) = rule.right {
                    stack.push(Item::Var(r));
                }
                for run in rule.mid.runs().iter().rev() {
                    stack.push(Item::Run(*run));
                }
                if let Some(l) = rule.left {
                    stack.push(Item::Var(l));
                }
            }
        }
    }
    out
}

/// `T_h`, or `# T_h $` when `strip_sentinels` is false.
pub fn expand_level(g: &LevelGrammar, strip_sentinels: bool) -> Vec<Symbol> {
    let mut text = expand_var(g, g.start());
    if strip_sentinels {
        text.pop();
        text.remove(0);
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slp::build_slp_bytes;
    use crate::symbol::symbols_from_bytes;

    fn with_sentinels(text: &[u8]) -> Vec<Symbol> {
        let mut v = vec![Symbol::HASH];
        v.extend(symbols_from_bytes(text));
        v.push(Symbol::DOLLAR);
        v
    }

    /// Definitional boundary of a plain string.
    fn scan_boundary(s: &[Symbol]) -> VarBoundary {
        let first = s.iter().take_while(|&&c| c == s[0]).count() as u64;
        let last = s.iter().rev().take_while(|&&c| c == s[s.len() - 1]).count() as u64;
        VarBoundary {
            lmb: RlRun::new(s[0], first),
            rmb: RlRun::new(s[s.len() - 1], last),
            single_block: first == s.len() as u64,
        }
    }

    #[test]
    fn sentinel_attachment() {
        let g = attach_sentinels(&build_slp_bytes(b"abab").unwrap()).unwrap();
        assert_eq!(g.rules.len(), 4);
        assert_eq!(g.rules[2].mid.to_symbols(), vec![Symbol::HASH]);
        assert_eq!(g.rules[2].right, Some(1));
        assert_eq!(g.rules[3].left, Some(2));
        assert_eq!(g.rules[3].mid.to_symbols(), vec![Symbol::DOLLAR]);
        assert_eq!(g.rules[0].mid.to_symbols(), symbols_from_bytes(b"ab"));
        assert_eq!(g.text_len, 6);
        assert_eq!(expand_level(&g, false), with_sentinels(b"abab"));
        assert_eq!(expand_level(&g, true), symbols_from_bytes(b"abab"));
        assert_eq!(compute_level_vocc(&g), vec![2, 1, 1, 1]);
    }

    #[test]
    fn mixed_rules() {
        let a = Symbol::from(b'a');
        let b = Symbol::from(b'b');
        // X0 -> ab, X1 -> X0 b, X2 -> a X1
        let slp = Slp { sigma: 256, rules: vec![(a, b), (Symbol(256), b), (a, Symbol(257))] };
        let g = attach_sentinels(&slp).unwrap();
        assert_eq!(g.rules[1].left, Some(0));
        assert_eq!(g.rules[1].mid.to_symbols(), vec![b]);
        assert_eq!(g.rules[1].right, None);
        assert_eq!(g.rules[2].left, None);
        assert_eq!(g.rules[2].right, Some(1));
    }

    #[test]
    fn boundary_examples() {
        let g = attach_sentinels(&build_slp_bytes(b"abab").unwrap()).unwrap();
        let info = compute_boundary_info(&g);
        let x1 = info.get(0);
        assert_eq!(
            (x1.lmb, x1.rmb, x1.single_block),
            (RlRun::new(Symbol::from(b'a'), 1), RlRun::new(Symbol::from(b'b'), 1), false)
        );
        let x2 = info.get(1);
        assert_eq!((x2.lmb.exp, x2.rmb.exp, x2.single_block), (1, 1, false));

        let g = attach_sentinels(&build_slp_bytes(b"aaaa").unwrap()).unwrap();
        let info = compute_boundary_info(&g);
        assert_eq!(info.get(0).lmb, RlRun::new(Symbol::from(b'a'), 2));
        assert!(info.get(0).single_block);
        assert_eq!(info.get(1).rmb, RlRun::new(Symbol::from(b'a'), 4));
        assert!(info.get(1).single_block);
        assert!(!info.get(2).single_block);
        assert_eq!(info.get(2).rmb, RlRun::new(Symbol::from(b'a'), 4));
    }

    #[test]
    fn boundary_matches_definition() {
        let texts: [&[u8]; 6] = [b"aaab", b"abbbbbba", b"aaaaaaaaa", b"abaababaabaab", b"bbbabbb", b"aabbaabbaa"];
        for t in texts {
            let g = attach_sentinels(&build_slp_bytes(t).unwrap()).unwrap();
            let info = compute_boundary_info(&g);
            for x in 0..g.rules.len() {
                if g.rules[x].is_null() {
                    continue;
                }
                assert_eq!(*info.get(x), scan_boundary(&expand_var(&g, x)), "text {t:?} var {x}");
            }
        }
    }
}
