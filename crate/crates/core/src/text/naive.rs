//! Reference engine: full recount and full rewrite at every level.

use crate::error::{ensure_invariant, Result};
use crate::freq::freq_table_text;
use crate::grammar::RePairGrammar;
use crate::stats::{LevelSnapshot, Phase, Recorder, RunStats};
use crate::symbol::Symbol;
use crate::text::{check_text, replace_pair_text};

pub fn repair_naive(text: &[Symbol], sigma: u32) -> Result<(RePairGrammar, RunStats)> {
    check_text(text, sigma)?;
    continue_naive(text.to_vec(), Recorder::new(sigma, 0))
}

/// Continues a run on `text`, numbering fresh letters after the pairs
/// already held by `rec`.
pub fn continue_naive(mut w: Vec<Symbol>, mut rec: Recorder) -> Result<(RePairGrammar, RunStats)> {
    while let Some((b, f)) = freq_table_text(&w).select() {
        let fresh = rec.next_letter()?;
        let before = LevelSnapshot { grammar_size: None, live_vars: None, text_len: w.len() as u64 };
        let next = replace_pair_text(&w, b, fresh);
        ensure_invariant!(
            next.len() as u64 + f == w.len() as u64,
            "replacing {b} shortened the text by {} instead of {f}",
            w.len() - next.len()
        );
        w = next;
        rec.push_level(b, f, before, f, Phase::Text);
    }
    let last = LevelSnapshot { grammar_size: None, live_vars: None, text_len: w.len() as u64 };
    Ok(rec.finish(w, last))
}
