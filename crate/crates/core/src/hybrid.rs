//! Recompress until the virtual text has shrunk by a factor `t`, then
//! materialize it and finish with the linked-list text engine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grammar::RePairGrammar;
use crate::recompress::fast::FastEngine;
use crate::recompress::scan::ScanEngine;
use crate::recompress::{Options, Recompressor};
use crate::slp::Slp;
use crate::stats::RunStats;
use crate::text::fast::continue_fast;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ShrinkFactor {
    Finite(u64),
    /// Never switch: pure recompression.
    Never,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Phase1Engine {
    #[default]
    Scan,
    Fast,
}

#[derive(Clone, Copy, Debug)]
pub struct HybridConfig {
    pub t: ShrinkFactor,
    pub phase1: Phase1Engine,
    pub opts: Options,
}

impl HybridConfig {
    pub fn new(t: u64) -> Self {
        HybridConfig { t: ShrinkFactor::Finite(t), phase1: Phase1Engine::Scan, opts: Options::default() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Debug)]
#[serde(rename_all = "camelCase")]
pub struct HybridSummary {
    /// `None` for the never-switch setting.
    pub t: Option<u64>,
    /// Level at which `T_h` was materialized, if phase 2 ran.
    pub switch_level: Option<u64>,
    pub switch_len: Option<u64>,
    /// Largest phase-1 grammar plus the materialized text length.
    pub peak_metric: u64,
    pub total_replacements: u64,
}

#[derive(Clone, Debug)]
pub struct HybridOutput {
    pub grammar: RePairGrammar,
    pub stats: RunStats,
    pub summary: HybridSummary,
}

pub fn run_hybrid(slp: &Slp, cfg: HybridConfig) -> Result<HybridOutput> {
    if cfg.t == ShrinkFactor::Finite(0) {
        return Err(Error::Param("t must be at least 1".into()));
    }
    let n_text = slp.text_len()?;
    match cfg.phase1 {
        Phase1Engine::Scan => drive(ScanEngine::new(slp, cfg.opts)?, n_text, cfg.t),
        Phase1Engine::Fast => drive(FastEngine::new(slp, cfg.opts)?, n_text, cfg.t),
    }
}

fn drive<E: Recompressor>(mut engine: E, n_text: u64, t: ShrinkFactor) -> Result<HybridOutput> {
    let mut peak_grammar = 0;
    loop {
        peak_grammar = peak_grammar.max(engine.grammar_size());
        let len = engine.inner_len();
        if let ShrinkFactor::Finite(t) = t {
            if (len as u128) * (t as u128) < n_text as u128 {
                let text = engine.materialize();
                let rec = engine.into_recorder();
                let switch_level = rec.level();
                let (grammar, stats) = continue_fast(&text, rec)?;
                let summary = HybridSummary {
                    t: Some(t),
                    switch_level: Some(switch_level),
                    switch_len: Some(len),
                    peak_metric: peak_grammar + len,
                    total_replacements: stats.aggregates().r,
                };
                return Ok(HybridOutput { grammar, stats, summary });
            }
        }
        if !engine.step()? {
            let (grammar, stats) = engine.finish_now();
            let summary = HybridSummary {
                t: match t {
                    ShrinkFactor::Finite(t) => Some(t),
                    ShrinkFactor::Never => None,
                },
                switch_level: None,
                switch_len: None,
                peak_metric: peak_grammar,
                total_replacements: stats.aggregates().r,
            };
            return Ok(HybridOutput { grammar, stats, summary });
        }
    }
}
