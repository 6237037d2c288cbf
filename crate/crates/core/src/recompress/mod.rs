//! RePair computed directly on a straight-line program.

pub mod fast;
pub mod scan;

use crate::error::Result;
use crate::grammar::RePairGrammar;
use crate::stats::{Recorder, RunStats};
use crate::symbol::Symbol;

/// A level-by-level recompression engine.
pub trait Recompressor {
    /// `|T_h|` of the current level.
    fn inner_len(&self) -> u64;

    /// `|G_h|` of the current level.
    fn grammar_size(&self) -> u64;

    /// Performs one level. Returns `false` once no bigram has frequency
    /// at least 2 (nothing is changed in that case).
    fn step(&mut self) -> Result<bool>;

    /// `T_h` with sentinels stripped.
    fn materialize(&self) -> Vec<Symbol>;

    /// Hands over the pairs and records accumulated so far.
    fn into_recorder(self) -> Recorder;

    /// Runs to termination.
    fn finish(mut self) -> Result<(RePairGrammar, RunStats)>
    where
        Self: Sized,
    {
        while self.step()? {}
        Ok(self.finish_now())
    }

    /// Stops at the current level and emits `T_h` as the final sequence.
    fn finish_now(self) -> (RePairGrammar, RunStats)
    where
        Self: Sized,
    {
        let snapshot = crate::stats::LevelSnapshot {
            grammar_size: Some(self.grammar_size()),
            live_vars: Some(self.live_vars()),
            text_len: self.inner_len(),
        };
        let final_seq = self.materialize();
        self.into_recorder().finish(final_seq, snapshot)
    }

    /// `n_h` of the current level.
    fn live_vars(&self) -> u64;
}

/// Knobs shared by both engines.
#[derive(Clone, Copy, Default, Debug)]
pub struct Options {
    /// Full re-verification at every level (expansion, frequencies, vocc).
    pub debug_verify: bool,
}
