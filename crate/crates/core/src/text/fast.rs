//! Linked-list engine: the text is one run list `# T $` with an occurrence
//! index and a frequency queue, so each replacement touches only its
//! neighbourhood.

use crate::error::{ensure_invariant, Result};
use crate::grammar::RePairGrammar;
use crate::runlist::RunStore;
use crate::stats::{LevelSnapshot, Phase, Recorder, RunStats};
use crate::symbol::Symbol;
use crate::text::check_text;

pub fn repair_fast(text: &[Symbol], sigma: u32) -> Result<(RePairGrammar, RunStats)> {
    check_text(text, sigma)?;
    continue_fast(text, Recorder::new(sigma, 0))
}

/// Continues a run on `text`, numbering fresh letters after the pairs
/// already held by `rec`.
pub fn continue_fast(text: &[Symbol], mut rec: Recorder) -> Result<(RePairGrammar, RunStats)> {
    let mut store = RunStore::new(vec![1]);
    store.push_back(0, Symbol::HASH, 1);
    for &c in text {
        store.push_back(0, c, 1);
    }
    store.push_back(0, Symbol::DOLLAR, 1);
    let mut len = text.len() as u64;

    while let Some((b, f)) = store.queue.peek().filter(|&(_, f)| f >= 2) {
        let fresh = rec.next_letter()?;
        let mut replaced = 0;
        for v in store.sites_of(&b) {
            replaced += store.replace_at(v, b, fresh);
        }
        ensure_invariant!(replaced == f, "replaced {replaced} occurrences of {b}, queue said {f}");
        ensure_invariant!(store.queue.get(&b) == 0, "occurrences of {b} remain after replacement");
        let before = LevelSnapshot { grammar_size: None, live_vars: None, text_len: len };
        len -= f;
        rec.push_level(b, f, before, f, Phase::Text);
    }
    let w: Vec<Symbol> = store
        .runs(0)
        .flat_map(|r| std::iter::repeat_n(r.letter, r.exp as usize))
        .filter(|c| !c.is_sentinel())
        .collect();
    ensure_invariant!(w.len() as u64 == len, "tracked length {len} differs from list length {}", w.len());
    let last = LevelSnapshot { grammar_size: None, live_vars: None, text_len: len };
    Ok(rec.finish(w, last))
}
