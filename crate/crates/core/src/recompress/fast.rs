//! The indexed engine. Rule strings live in a shared run store whose
//! occurrence index and frequency queue track every explicit contribution
//! incrementally; contributions that cross a rule boundary (the window
//! around each child junction) are recollected once per level from fresh
//! boundary information.

use crate::error::{ensure_invariant, Result};
use crate::freq::FreqTable;
use crate::grammar::RePairGrammar;
use crate::level::{
    attach_sentinels, combine_boundary, compute_level_vocc, expand_level, LevelGrammar, LevelRule, VarBoundary, VarId,
};
use crate::local::window_counts;
use crate::recompress::scan::compute_frequencies;
use crate::recompress::{Options, Recompressor};
use crate::rl::RlString;
use crate::runlist::RunStore;
use crate::slp::Slp;
use crate::stats::{LevelSnapshot, Phase, Recorder, RunStats};
use crate::symbol::{Bigram, Symbol};

/// Per-level junction refreshes may touch at most this many queue entries
/// per live variable.
pub const JUNCTION_LOCALITY: u64 = 16;

pub struct FastEngine {
    sigma: u32,
    store: RunStore,
    left: Vec<Option<VarId>>,
    right: Vec<Option<VarId>>,
    null: Vec<bool>,
    vocc: Vec<u64>,
    /// Live variables in topological order.
    live: Vec<VarId>,
    boundary: Vec<Option<VarBoundary>>,
    /// Weighted junction contributions last posted per variable.
    junctions: Vec<Vec<(Bigram, u64)>>,
    /// `|# T_h $|`.
    text_len: u64,
    level: usize,
    opts: Options,
    rec: Recorder,
    scratch_pl: Vec<u64>,
    scratch_pr: Vec<u64>,
    scratch_k: Vec<u64>,
    last_junction_updates: u64,
}

impl FastEngine {
    /// Builds the index for `G_0` and posts level-0 junction contributions.
    pub fn new(slp: &Slp, opts: Options) -> Result<Self> {
        let g = attach_sentinels(slp)?;
        let vocc = compute_level_vocc(&g);
        let len = g.rules.len();
        let mut store = RunStore::new(vocc.clone());
        let mut left = Vec::with_capacity(len);
        let mut right = Vec::with_capacity(len);
        let mut null = Vec::with_capacity(len);
        let mut live = Vec::new();
        for (x, rule) in g.rules.iter().enumerate() {
            for run in rule.mid.runs() {
                store.push_back(x, run.letter, run.exp);
            }
            left.push(rule.left);
            right.push(rule.right);
            null.push(rule.is_null());
            if !rule.is_null() {
                live.push(x);
            }
        }
        let mut engine = FastEngine {
            sigma: slp.sigma,
            store,
            left,
            right,
            null,
            vocc,
            live,
            boundary: vec![None; len],
            junctions: vec![Vec::new(); len],
            text_len: g.text_len,
            level: 0,
            opts,
            rec: Recorder::new(slp.sigma, slp.n() as u64),
            scratch_pl: vec![0; len],
            scratch_pr: vec![0; len],
            scratch_k: vec![0; len],
            last_junction_updates: 0,
        };
        engine.recollect_level()?;
        Ok(engine)
    }

    fn n(&self) -> usize {
        self.left.len() - 2
    }

    /// Recomputes boundary information over live variables and replaces
    /// every stale junction record. Returns the number of queue mutations.
    pub fn recollect_level(&mut self) -> Result<u64> {
        let mut updates = 0;
        for i in 0..self.live.len() {
            let x = self.live[i];
            let l = self.left[x].map(|y| self.boundary[y].expect("live child"));
            let r = self.right[x].map(|y| self.boundary[y].expect("live child"));
            let runs = self.store.run_count(x);
            let first = self.store.first_run(x);
            let last = self.store.last_run(x);
            self.boundary[x] = combine_boundary(l.as_ref(), first, last, runs == 1, r.as_ref());

            let w = self.vocc[x];
            let mut fresh: Vec<(Bigram, u64)> = Vec::new();
            let mut emit = |b: Bigram, c: u64| fresh.push((b, c * w));
            let prefix = l.is_none_or(|b| b.single_block);
            let suffix = r.is_none_or(|b| b.single_block);
            if runs <= 1 {
                let parts = l.map(|b| b.rmb).into_iter().chain(first).chain(r.map(|b| b.lmb));
                window_counts(parts, prefix, suffix, &mut emit);
            } else {
                let lw = l.map(|b| b.rmb).into_iter().chain(first);
                window_counts(lw, prefix, false, &mut emit);
                let rw = last.into_iter().chain(r.map(|b| b.lmb));
                window_counts(rw, false, suffix, &mut emit);
            }
            if fresh != self.junctions[x] {
                for &(b, c) in &self.junctions[x] {
                    self.store.queue.sub(b, c);
                    updates += 1;
                }
                for &(b, c) in &fresh {
                    self.store.queue.add(b, c);
                    updates += 1;
                }
                self.junctions[x] = fresh;
            }
        }
        ensure_invariant!(
            updates <= JUNCTION_LOCALITY * self.live.len() as u64,
            "level {}: {updates} junction updates for {} live variables",
            self.level,
            self.live.len()
        );
        self.last_junction_updates = updates;
        Ok(updates)
    }

    /// Marks `x` null and withdraws its junction record.
    fn retire_var(&mut self, x: VarId) {
        self.null[x] = true;
        for (b, c) in std::mem::take(&mut self.junctions[x]) {
            self.store.queue.sub(b, c);
        }
    }

    fn is_empty_rule(&self, x: VarId) -> bool {
        self.left[x].is_none() && self.right[x].is_none() && self.store.run_count(x) == 0
    }

    fn uncross_nonrepeating(&mut self, c1: Symbol, c2: Symbol) {
        for i in 0..self.live.len() {
            let x = self.live[i];
            let (left, right) = (self.left[x], self.right[x]);
            let mid_nonempty = self.store.run_count(x) > 0;
            let pil_left = left.is_some_and(|l| {
                (mid_nonempty || right.is_some()) && self.boundary[l].expect("live").last_letter() == c1
            });
            let pil_right = right.is_some_and(|r| {
                (mid_nonempty || left.is_some()) && self.boundary[r].expect("live").first_letter() == c2
            });
            let last_literal = self.store.last_run(x).map(|r| r.letter);
            if left.is_none() && self.store.first_run(x).map(|r| r.letter) == Some(c2) {
                self.store.pop_front_letter(x);
            }
            if right.is_none() && last_literal == Some(c1) {
                self.store.pop_back_letter(x);
            }
            if pil_left {
                self.store.push_front(x, c1, 1);
            }
            if pil_right {
                self.store.push_back(x, c2, 1);
            }
            if left.is_some_and(|l| self.null[l]) {
                self.left[x] = None;
            }
            if right.is_some_and(|r| self.null[r]) {
                self.right[x] = None;
            }
            if self.is_empty_rule(x) {
                self.retire_var(x);
            }
        }
        self.live.retain(|&x| !self.null[x]);
    }

    fn uncross_repeating(&mut self, c: Symbol) {
        for i in 0..self.live.len() {
            let x = self.live[i];
            if let Some(l) = self.left[x] {
                if self.null[l] {
                    self.store.push_front(x, c, self.scratch_k[l]);
                    self.left[x] = None;
                } else {
                    self.scratch_pl[x] = self.scratch_pl[l];
                    self.store.push_front(x, c, self.scratch_pr[l]);
                }
            }
            if let Some(r) = self.right[x] {
                if self.null[r] {
                    self.store.push_back(x, c, self.scratch_k[r]);
                    self.right[x] = None;
                } else {
                    self.scratch_pr[x] = self.scratch_pr[r];
                    self.store.push_back(x, c, self.scratch_pl[r]);
                }
            }
            if self.left[x].is_none() {
                self.scratch_pl[x] = self.store.strip_front_run(x, c);
            }
            if self.right[x].is_none() {
                self.scratch_pr[x] = self.store.strip_back_run(x, c);
            }
            if self.is_empty_rule(x) {
                self.scratch_k[x] = self.scratch_pl[x] + self.scratch_pr[x];
                self.retire_var(x);
            }
        }
        for &x in &self.live {
            self.scratch_pl[x] = 0;
            self.scratch_pr[x] = 0;
            self.scratch_k[x] = 0;
        }
        self.live.retain(|&x| !self.null[x]);
    }

    /// Replaces every explicit site of `b`; returns (weighted count, sites).
    fn replace(&mut self, b: Bigram, fresh: Symbol) -> (u64, u64) {
        let mut weighted = 0;
        let mut sites = 0;
        for v in self.store.sites_of(&b) {
            let owner = self.store.owner_of(v);
            let count = self.store.replace_at(v, b, fresh);
            weighted += count * self.store.weight(owner);
            sites += count;
        }
        self.text_len -= weighted;
        (weighted, sites)
    }

    /// The current level grammar.
    pub fn export(&self) -> LevelGrammar {
        let rules = (0..self.left.len())
            .map(|x| {
                if self.null[x] {
                    return LevelRule::default();
                }
                LevelRule { left: self.left[x], mid: RlString::from_runs(self.store.runs(x)), right: self.right[x] }
            })
            .collect();
        LevelGrammar { sigma: self.sigma, rules, level: self.level, text_len: self.text_len }
    }

    /// The queue contents as a table.
    pub fn queue_table(&self) -> FreqTable {
        self.store.queue.entries().collect()
    }

    fn size(&self) -> u64 {
        self.live
            .iter()
            .map(|&x| self.store.run_count(x) as u64 + self.left[x].is_some() as u64 + self.right[x].is_some() as u64)
            .sum()
    }

    fn size_bound(&self) -> u64 {
        self.text_len + 2 * (self.n() as u64 + 2)
    }

    fn verify_level(&self) -> Result<()> {
        let g = self.export();
        g.check_well_formed()?;
        let info = crate::level::compute_boundary_info(&g);
        for &x in &self.live {
            ensure_invariant!(
                info.vars[x] == self.boundary[x],
                "level {}: stale boundary for variable {x}",
                self.level
            );
        }
        let table = compute_frequencies(&g, &self.vocc, &info);
        ensure_invariant!(
            table.sorted() == self.queue_table().sorted(),
            "level {}: queue differs from the scan table",
            self.level
        );
        ensure_invariant!(
            table.max() == self.store.queue.peek(),
            "level {}: queue maximum differs from the scan table",
            self.level
        );
        Ok(())
    }

    pub fn junction_updates(&self) -> u64 {
        self.last_junction_updates
    }
}

impl Recompressor for FastEngine {
    fn inner_len(&self) -> u64 {
        self.text_len - 2
    }

    fn grammar_size(&self) -> u64 {
        self.size()
    }

    fn live_vars(&self) -> u64 {
        self.live.len() as u64
    }

    fn step(&mut self) -> Result<bool> {
        if self.level > 0 {
            self.recollect_level()?;
        }
        if self.opts.debug_verify {
            self.verify_level()?;
        }
        let Some((b, f)) = self.store.queue.peek().filter(|&(_, f)| f >= 2) else {
            return Ok(false);
        };
        let fresh = self.rec.next_letter()?;
        let before = LevelSnapshot {
            grammar_size: Some(self.size()),
            live_vars: Some(self.live.len() as u64),
            text_len: self.inner_len(),
        };
        ensure_invariant!(
            before.grammar_size.unwrap_or(0) <= self.size_bound(),
            "level {}: grammar size exceeds the size law",
            self.level
        );
        let index_before = self.store.index_updates;
        if b.is_repeating() {
            self.uncross_repeating(b.left);
        } else {
            self.uncross_nonrepeating(b.left, b.right);
        }
        let (weighted, sites) = self.replace(b, fresh);
        ensure_invariant!(weighted == f, "level {}: replaced {weighted} occurrences of {b}, expected {f}", self.level);
        ensure_invariant!(
            self.size() <= self.size_bound(),
            "level {}: grammar size exceeds the size law after replacement",
            self.level
        );
        self.level += 1;
        let junction_updates = self.last_junction_updates;
        let index_updates = self.store.index_updates - index_before;
        let rec = self.rec.push_level(b, f, before, sites, Phase::Recompress);
        rec.junction_updates = Some(junction_updates);
        rec.index_updates = Some(index_updates);
        Ok(true)
    }

    fn materialize(&self) -> Vec<Symbol> {
        expand_level(&self.export(), true)
    }

    fn into_recorder(self) -> Recorder {
        self.rec
    }
}

/// Full recompression run with the indexed engine.
pub fn run_fast(slp: &Slp) -> Result<(RePairGrammar, RunStats)> {
    run_fast_with(slp, Options::default())
}

pub fn run_fast_with(slp: &Slp, opts: Options) -> Result<(RePairGrammar, RunStats)> {
    FastEngine::new(slp, opts)?.finish()
}
