//! Per-level statistics and the bookkeeping shared by every engine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grammar::RePairGrammar;
use crate::symbol::{Bigram, Symbol};

#[derive(Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Recompress,
    Text,
    Final,
}

/// One line of the stats stream.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize, Debug)]
#[serde(rename_all = "camelCase")]
pub struct LevelStats {
    pub level: u64,
    pub bigram_left: Option<u32>,
    pub bigram_right: Option<u32>,
    pub freq: u64,
    /// `|G_h|`; absent for levels run on plain text.
    pub grammar_size: Option<u64>,
    /// `n_h`; absent for levels run on plain text.
    pub live_vars: Option<u64>,
    /// `|T_h|` before this level's replacement.
    pub text_len: u64,
    pub cumulative_r: u64,
    pub phase: Phase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub junction_updates: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_updates: Option<u64>,
}

impl LevelStats {
    pub fn bigram(&self) -> Option<Bigram> {
        Some(Bigram::new(Symbol(self.bigram_left?), Symbol(self.bigram_right?)))
    }
}

/// Aggregates over a run: `n`, `m`, `Max = max_h |G_h|`, `sum_h |G_h|`,
/// `sum_h n_h` and the total number of replacements `R`.
#[derive(Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Debug, Default)]
#[serde(rename_all = "camelCase")]
pub struct Aggregates {
    pub n: u64,
    pub m: u64,
    pub max: u64,
    pub sum_grammar_size: u64,
    pub sum_live_vars: u64,
    pub r: u64,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RunStats {
    /// Variables of the input SLP (0 for text-only runs).
    pub n: u64,
    /// One record per level, followed by one `Final` record.
    pub records: Vec<LevelStats>,
}

impl RunStats {
    pub fn aggregates(&self) -> Aggregates {
        let mut agg = Aggregates { n: self.n, ..Default::default() };
        for rec in &self.records {
            if rec.bigram_left.is_some() {
                agg.m += 1;
            }
            if let Some(g) = rec.grammar_size {
                agg.max = agg.max.max(g);
                agg.sum_grammar_size += g;
            }
            agg.sum_live_vars += rec.live_vars.unwrap_or(0);
            agg.r = agg.r.max(rec.cumulative_r);
        }
        agg
    }

    pub fn levels(&self) -> impl Iterator<Item = &LevelStats> {
        self.records.iter().filter(|r| r.phase != Phase::Final)
    }

    /// JSON lines: every record, then the aggregates.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for rec in &self.records {
            out.push_str(&serde_json::to_string(rec).expect("stats serialize"));
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&self.aggregates()).expect("stats serialize"));
        out.push('\n');
        out
    }
}

/// Accumulates introduced pairs and level records across engines, so a run
/// can hand over from one engine to another and keep one numbering.
#[derive(Clone, Debug)]
pub struct Recorder {
    pub sigma: u32,
    pub n: u64,
    pub pairs: Vec<(Symbol, Symbol)>,
    pub records: Vec<LevelStats>,
    pub total_replacements: u64,
}

pub struct LevelSnapshot {
    pub grammar_size: Option<u64>,
    pub live_vars: Option<u64>,
    pub text_len: u64,
}

impl Recorder {
    pub fn new(sigma: u32, n: u64) -> Self {
        Recorder { sigma, n, pairs: Vec::new(), records: Vec::new(), total_replacements: 0 }
    }

    /// The letter the next replacement introduces.
    pub fn next_letter(&self) -> Result<Symbol> {
        let id = self.sigma as u64 + self.pairs.len() as u64;
        if id + 2 >= Symbol::RESERVED as u64 {
            return Err(Error::Invariant("letter space exhausted".into()));
        }
        Ok(Symbol(id as u32))
    }

    pub fn level(&self) -> u64 {
        self.records.len() as u64
    }

    pub fn push_level(
        &mut self,
        bigram: Bigram,
        freq: u64,
        before: LevelSnapshot,
        replacements: u64,
        phase: Phase,
    ) -> &mut LevelStats {
        self.pairs.push((bigram.left, bigram.right));
        self.total_replacements += replacements;
        self.records.push(LevelStats {
            level: self.records.len() as u64,
            bigram_left: Some(bigram.left.0),
            bigram_right: Some(bigram.right.0),
            freq,
            grammar_size: before.grammar_size,
            live_vars: before.live_vars,
            text_len: before.text_len,
            cumulative_r: self.total_replacements,
            phase,
            junction_updates: None,
            index_updates: None,
        });
        self.records.last_mut().expect("just pushed")
    }

    pub fn finish(mut self, final_seq: Vec<Symbol>, last: LevelSnapshot) -> (RePairGrammar, RunStats) {
        self.records.push(LevelStats {
            level: self.records.len() as u64,
            bigram_left: None,
            bigram_right: None,
            freq: 0,
            grammar_size: last.grammar_size,
            live_vars: last.live_vars,
            text_len: last.text_len,
            cumulative_r: self.total_replacements,
            phase: Phase::Final,
            junction_updates: None,
            index_updates: None,
        });
        let grammar = RePairGrammar { sigma: self.sigma, pairs: self.pairs, final_seq };
        (grammar, RunStats { n: self.n, records: self.records })
    }
}
