//! The scan engine: every level recomputes frequencies by one pass over
//! the level grammar, then uncrosses and replaces the chosen bigram.

use crate::error::{ensure_invariant, Result};
use crate::freq::{freq_table_text, FreqTable};
use crate::grammar::RePairGrammar;
use crate::level::{
    attach_sentinels, compute_boundary_info, compute_level_vocc, expand_level, BoundaryInfo, LevelGrammar,
};
use crate::local::window_counts;
use crate::recompress::{Options, Recompressor};
use crate::slp::Slp;
use crate::stats::{LevelSnapshot, Phase, Recorder, RunStats};
use crate::symbol::{Bigram, Symbol};
use crate::text::replace_pair_text;

/// Exact non-overlapping frequencies of every bigram of `# T_h $`.
pub fn compute_frequencies(g: &LevelGrammar, vocc: &[u64], info: &BoundaryInfo) -> FreqTable {
    let mut table = FreqTable::new();
    for (x, rule) in g.rules.iter().enumerate() {
        if rule.is_null() {
            continue;
        }
        let weight = vocc[x];
        let left = rule.left.map(|y| info.get(y));
        let right = rule.right.map(|y| info.get(y));
        let parts = left.map(|b| b.rmb).into_iter().chain(rule.mid.runs().iter().copied()).chain(right.map(|b| b.lmb));
        window_counts(
            parts,
            left.is_none_or(|b| b.single_block),
            right.is_none_or(|b| b.single_block),
            |bigram, count| table.add(bigram, count * weight),
        );
    }
    table
}

/// Makes every occurrence of `c1 c2` (distinct letters) explicit inside
/// some rule string. `info` is the boundary snapshot taken before any pop.
pub fn uncross_nonrepeating(g: &mut LevelGrammar, info: &BoundaryInfo, c1: Symbol, c2: Symbol) {
    debug_assert_ne!(c1, c2);
    for x in 0..g.rules.len() {
        if g.rules[x].is_null() {
            continue;
        }
        let (left, right) = (g.rules[x].left, g.rules[x].right);
        let mid_nonempty = !g.rules[x].mid.is_empty();
        let pil_left = left.is_some_and(|l| (mid_nonempty || right.is_some()) && info.get(l).last_letter() == c1);
        let pil_right = right.is_some_and(|r| (mid_nonempty || left.is_some()) && info.get(r).first_letter() == c2);
        let left_gone = left.is_some_and(|l| g.rules[l].is_null());
        let right_gone = right.is_some_and(|r| g.rules[r].is_null());

        let rule = &mut g.rules[x];
        let last_literal = rule.mid.last_letter();
        if left.is_none() && rule.mid.first_letter() == Some(c2) {
            rule.mid.pop_front_letter();
        }
        if right.is_none() && last_literal == Some(c1) {
            rule.mid.pop_back_letter();
        }
        if pil_left {
            rule.mid.push_front(c1, 1);
        }
        if pil_right {
            rule.mid.push_back(c2, 1);
        }
        if left_gone {
            rule.left = None;
        }
        if right_gone {
            rule.right = None;
        }
    }
}

/// Makes every maximal block of `c` a single explicit run inside some
/// rule string.
pub fn uncross_repeating(g: &mut LevelGrammar, c: Symbol) {
    let len = g.rules.len();
    // popped leading run, popped trailing run, and the whole length of
    // variables that turned out to be pure powers of `c`
    let mut pl = vec![0u64; len];
    let mut pr = vec![0u64; len];
    let mut k = vec![0u64; len];
    for x in 0..len {
        if g.rules[x].is_null() {
            continue;
        }
        let mut rule = std::mem::take(&mut g.rules[x]);
        if let Some(l) = rule.left {
            if g.rules[l].is_null() {
                rule.mid.push_front(c, k[l]);
                rule.left = None;
            } else {
                pl[x] = pl[l];
                rule.mid.push_front(c, pr[l]);
            }
        }
        if let Some(r) = rule.right {
            if g.rules[r].is_null() {
                rule.mid.push_back(c, k[r]);
                rule.right = None;
            } else {
                pr[x] = pr[r];
                rule.mid.push_back(c, pl[r]);
            }
        }
        if rule.left.is_none() {
            pl[x] = rule.mid.strip_front_run(c);
        }
        if rule.right.is_none() {
            pr[x] = rule.mid.strip_back_run(c);
        }
        if rule.is_null() {
            k[x] = pl[x] + pr[x];
        }
        g.rules[x] = rule;
    }
}

/// Replaces every explicit occurrence of `b` by `fresh`. Returns the
/// weighted count (the frequency) and the number of replacement sites.
pub fn replace_explicit(g: &mut LevelGrammar, vocc: &[u64], b: Bigram, fresh: Symbol) -> (u64, u64) {
    let mut weighted = 0;
    let mut sites = 0;
    for (x, rule) in g.rules.iter_mut().enumerate() {
        if rule.is_null() {
            continue;
        }
        let count = if b.is_repeating() {
            rule.mid.replace_runs(b.left, fresh)
        } else {
            rule.mid.replace_pair(b.left, b.right, fresh)
        };
        weighted += count * vocc[x];
        sites += count;
    }
    g.text_len -= weighted;
    (weighted, sites)
}

pub struct ScanEngine {
    g: LevelGrammar,
    vocc: Vec<u64>,
    opts: Options,
    rec: Recorder,
}

impl ScanEngine {
    pub fn new(slp: &Slp, opts: Options) -> Result<Self> {
        let g = attach_sentinels(slp)?;
        let vocc = compute_level_vocc(&g);
        let rec = Recorder::new(slp.sigma, slp.n() as u64);
        Ok(ScanEngine { g, vocc, opts, rec })
    }

    pub fn grammar(&self) -> &LevelGrammar {
        &self.g
    }

    pub fn vocc(&self) -> &[u64] {
        &self.vocc
    }

    pub fn frequencies(&self) -> FreqTable {
        compute_frequencies(&self.g, &self.vocc, &compute_boundary_info(&self.g))
    }

    fn size_bound(&self) -> u64 {
        self.g.text_len + 2 * (self.g.n() as u64 + 2)
    }

    fn verify_level(&self, table: &FreqTable) -> Result<()> {
        self.g.check_well_formed()?;
        let text = expand_level(&self.g, false);
        ensure_invariant!(
            text.len() as u64 == self.g.text_len,
            "level {}: expansion length {} differs from tracked {}",
            self.g.level,
            text.len(),
            self.g.text_len
        );
        ensure_invariant!(
            freq_table_text(&text).sorted() == table.sorted(),
            "level {}: frequency table differs from the expansion",
            self.g.level
        );
        let fresh = compute_level_vocc(&self.g);
        for (x, rule) in self.g.rules.iter().enumerate() {
            ensure_invariant!(
                rule.is_null() || fresh[x] == self.vocc[x],
                "level {}: vocc of variable {x} changed",
                self.g.level
            );
        }
        Ok(())
    }
}

impl Recompressor for ScanEngine {
    fn inner_len(&self) -> u64 {
        self.g.inner_len()
    }

    fn grammar_size(&self) -> u64 {
        self.g.size()
    }

    fn live_vars(&self) -> u64 {
        self.g.live_vars()
    }

    fn step(&mut self) -> Result<bool> {
        let info = compute_boundary_info(&self.g);
        let table = compute_frequencies(&self.g, &self.vocc, &info);
        if self.opts.debug_verify {
            self.verify_level(&table)?;
        }
        let Some((b, f)) = table.select() else {
            return Ok(false);
        };
        let fresh = self.rec.next_letter()?;
        let before = LevelSnapshot {
            grammar_size: Some(self.g.size()),
            live_vars: Some(self.g.live_vars()),
            text_len: self.g.inner_len(),
        };
        ensure_invariant!(
            before.grammar_size.unwrap_or(0) <= self.size_bound(),
            "level {}: grammar size exceeds the size law",
            self.g.level
        );
        let old_text = self.opts.debug_verify.then(|| expand_level(&self.g, false));

        if b.is_repeating() {
            uncross_repeating(&mut self.g, b.left);
        } else {
            uncross_nonrepeating(&mut self.g, &info, b.left, b.right);
        }
        if let Some(old) = &old_text {
            ensure_invariant!(
                expand_level(&self.g, false) == *old,
                "level {}: uncrossing changed the expansion",
                self.g.level
            );
        }
        let (weighted, sites) = replace_explicit(&mut self.g, &self.vocc, b, fresh);
        ensure_invariant!(
            weighted == f,
            "level {}: replaced {weighted} occurrences of {b}, expected {f}",
            self.g.level
        );
        ensure_invariant!(
            self.g.size() <= self.size_bound(),
            "level {}: grammar size exceeds the size law after replacement",
            self.g.level
        );
        if let Some(old) = &old_text {
            ensure_invariant!(
                expand_level(&self.g, false) == replace_pair_text(old, b, fresh),
                "level {}: replacement diverges from the text replacement",
                self.g.level
            );
        }
        self.g.level += 1;
        self.rec.push_level(b, f, before, sites, Phase::Recompress);
        Ok(true)
    }

    fn materialize(&self) -> Vec<Symbol> {
        expand_level(&self.g, true)
    }

    fn into_recorder(self) -> Recorder {
        self.rec
    }
}

/// Full recompression run with the scan engine.
pub fn run(slp: &Slp) -> Result<(RePairGrammar, RunStats)> {
    run_with(slp, Options::default())
}

pub fn run_with(slp: &Slp, opts: Options) -> Result<(RePairGrammar, RunStats)> {
    ScanEngine::new(slp, opts)?.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level::expand_var;
    use crate::slp::build_slp_bytes;
    use crate::symbol::symbols_from_bytes;

    fn sym(c: u8) -> Symbol {
        Symbol::from(c)
    }

    fn g0(text: &[u8]) -> LevelGrammar {
        attach_sentinels(&build_slp_bytes(text).unwrap()).unwrap()
    }

    fn rule_text(g: &LevelGrammar, x: usize) -> String {
        let r = &g.rules[x];
        let mut parts = Vec::new();
        if let Some(l) = r.left {
            parts.push(format!("X{l}"));
        }
        for run in r.mid.runs() {
            let c = match run.letter {
                Symbol::HASH => "#".to_string(),
                Symbol::DOLLAR => "$".to_string(),
                s => (s.0 as u8 as char).to_string(),
            };
            parts.push(if run.exp == 1 { c } else { format!("{c}^{}", run.exp) });
        }
        if let Some(rv) = r.right {
            parts.push(format!("X{rv}"));
        }
        parts.join(" ")
    }

    #[test]
    fn frequencies_of_small_grammars() {
        let g = g0(b"abab");
        let vocc = compute_level_vocc(&g);
        let t = compute_frequencies(&g, &vocc, &compute_boundary_info(&g));
        let ab = Bigram::new(sym(b'a'), sym(b'b'));
        assert_eq!(t.get(&ab), 2);
        assert_eq!(t.get(&Bigram::new(sym(b'b'), sym(b'a'))), 1);
        assert_eq!(t.get(&Bigram::new(Symbol::HASH, sym(b'a'))), 1);
        assert_eq!(t.get(&Bigram::new(sym(b'b'), Symbol::DOLLAR)), 1);
        assert_eq!(t.len(), 4);
        assert_eq!(t.select(), Some((ab, 2)));

        let g = g0(b"aaaa");
        let vocc = compute_level_vocc(&g);
        let t = compute_frequencies(&g, &vocc, &compute_boundary_info(&g));
        assert_eq!(t.sorted(), freq_table_text(&expand_level(&g, false)).sorted());
        assert_eq!(t.get(&Bigram::new(sym(b'a'), sym(b'a'))), 2);
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn nonrepeating_uncross_trace() {
        let mut g = g0(b"abab");
        let info = compute_boundary_info(&g);
        uncross_nonrepeating(&mut g, &info, sym(b'b'), sym(b'a'));
        assert!(g.rules[0].is_null());
        assert_eq!(rule_text(&g, 1), "b a");
        assert_eq!(rule_text(&g, 2), "# a X1");
        assert_eq!(rule_text(&g, 3), "X2 b $");
        assert_eq!(expand_level(&g, true), symbols_from_bytes(b"abab"));
        let vocc = compute_level_vocc(&g);
        let (w, _) = replace_explicit(&mut g, &vocc, Bigram::new(sym(b'b'), sym(b'a')), sym(b'B'));
        assert_eq!(w, 1);
        assert_eq!(rule_text(&g, 1), "B");

        let mut g = g0(b"abab");
        let before = g.clone();
        let info = compute_boundary_info(&g);
        uncross_nonrepeating(&mut g, &info, sym(b'a'), sym(b'b'));
        assert_eq!(g, before);
    }

    #[test]
    fn single_letter_pop_out() {
        // Y -> c, Z -> "Y b Y" encoded as Z -> Y W, W -> b Y
        let a = sym(b'a');
        let b = sym(b'b');
        let slp = Slp { sigma: 256, rules: vec![(a, b), (b, Symbol(256)), (Symbol(256), Symbol(257))] };
        let mut g = attach_sentinels(&slp).unwrap();
        let text = expand_level(&g, false);
        let info = compute_boundary_info(&g);
        uncross_nonrepeating(&mut g, &info, a, b);
        assert_eq!(expand_level(&g, false), text);
        let info = compute_boundary_info(&g);
        uncross_nonrepeating(&mut g, &info, b, a);
        assert_eq!(expand_level(&g, false), text);
    }

    #[test]
    fn repeating_uncross_trace() {
        let mut g = g0(b"aaaa");
        uncross_repeating(&mut g, sym(b'a'));
        assert!(g.rules[0].is_null() && g.rules[1].is_null());
        assert_eq!(rule_text(&g, 2), "#");
        assert_eq!(rule_text(&g, 3), "X2 a^4 $");
        let vocc = compute_level_vocc(&g);
        let (w, sites) = replace_explicit(&mut g, &vocc, Bigram::new(sym(b'a'), sym(b'a')), sym(b'A'));
        assert_eq!((w, sites), (2, 2));
        assert_eq!(rule_text(&g, 3), "X2 A^2 $");

        let mut g = g0(b"abaaab");
        let before = expand_level(&g, false);
        uncross_repeating(&mut g, sym(b'a'));
        assert_eq!(expand_level(&g, false), before);
    }

    #[test]
    fn pure_power_child_is_inlined() {
        // X -> a, parent "X b X"
        let a = sym(b'a');
        let b = sym(b'b');
        let slp = Slp { sigma: 256, rules: vec![(a, b), (Symbol(256), a)] };
        let mut g = attach_sentinels(&slp).unwrap();
        let info = compute_boundary_info(&g);
        uncross_nonrepeating(&mut g, &info, b, a);
        assert_eq!(expand_var(&g, g.start()), expand_level(&g, false));
        uncross_repeating(&mut g, a);
        assert_eq!(expand_level(&g, true), symbols_from_bytes(b"aba"));
    }

    #[test]
    fn steps_and_termination() {
        let (g, stats) = run_with(&build_slp_bytes(b"abab").unwrap(), Options { debug_verify: true }).unwrap();
        assert_eq!(g.pairs, vec![(sym(b'a'), sym(b'b'))]);
        assert_eq!(g.final_seq, vec![Symbol(256), Symbol(256)]);
        assert_eq!(stats.records.len(), 2);

        let (g, _) = run(&build_slp_bytes(b"aaaa").unwrap()).unwrap();
        assert_eq!(g.pairs, vec![(sym(b'a'), sym(b'a'))]);
        assert_eq!(g.final_seq, vec![Symbol(256), Symbol(256)]);

        let (g, stats) = run(&build_slp_bytes(b"abcde").unwrap()).unwrap();
        assert!(g.pairs.is_empty());
        assert_eq!(g.final_seq, symbols_from_bytes(b"abcde"));
        assert_eq!(stats.records.len(), 1);
    }
}
