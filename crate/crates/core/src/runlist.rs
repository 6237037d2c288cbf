//! Doubly-linked run lists with an occurrence index and a frequency queue.
//!
//! A store holds one list per owner (a rule string, or the whole text).
//! Each node owns two contributions to the queue, both scaled by the
//! owner's weight: its block when it has neighbours on both sides and
//! exponent at least 2 (`floor(exp/2)` occurrences of `cc`), and its
//! adjacency with the next node. Every edit retires the contributions of
//! the nodes it can influence, mutates, merges equal neighbours and admits
//! the survivors again.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};

use crate::rl::RlRun;
use crate::symbol::{Bigram, Symbol};

pub(crate) type NodeId = u32;
pub(crate) const NIL: NodeId = u32::MAX;

/// Bigram frequencies with maximum extraction under the shared tie-break.
#[derive(Default, Debug)]
pub(crate) struct FreqQueue {
    freq: HashMap<Bigram, u64>,
    order: BTreeSet<(Reverse<u64>, Bigram)>,
}

impl FreqQueue {
    pub fn add(&mut self, b: Bigram, delta: u64) {
        if delta == 0 {
            return;
        }
        let f = self.freq.entry(b).or_insert(0);
        if *f > 0 {
            self.order.remove(&(Reverse(*f), b));
        }
        *f += delta;
        self.order.insert((Reverse(*f), b));
    }

    pub fn sub(&mut self, b: Bigram, delta: u64) {
        if delta == 0 {
            return;
        }
        let f = self.freq.get_mut(&b).expect("queue underflow: unknown bigram");
        assert!(*f >= delta, "queue underflow on {b}");
        self.order.remove(&(Reverse(*f), b));
        *f -= delta;
        if *f == 0 {
            self.freq.remove(&b);
        } else {
            self.order.insert((Reverse(*f), b));
        }
    }

    pub fn get(&self, b: &Bigram) -> u64 {
        self.freq.get(b).copied().unwrap_or(0)
    }

    pub fn peek(&self) -> Option<(Bigram, u64)> {
        self.order.first().map(|&(Reverse(f), b)| (b, f))
    }

    pub fn entries(&self) -> impl Iterator<Item = (Bigram, u64)> + '_ {
        self.freq.iter().map(|(&b, &f)| (b, f))
    }
}

#[derive(Clone, Copy, Debug)]
struct Node {
    letter: Symbol,
    exp: u64,
    prev: NodeId,
    next: NodeId,
    owner: u32,
    live: bool,
    /// Contributions currently posted to the queue and the site index.
    admitted: bool,
}

#[derive(Clone, Copy, Debug)]
struct Ends {
    head: NodeId,
    tail: NodeId,
    runs: usize,
}

impl Default for Ends {
    fn default() -> Self {
        Ends { head: NIL, tail: NIL, runs: 0 }
    }
}

#[derive(Debug)]
pub(crate) struct RunStore {
    nodes: Vec<Node>,
    free: Vec<NodeId>,
    lists: Vec<Ends>,
    weights: Vec<u64>,
    sites: HashMap<Bigram, BTreeSet<NodeId>>,
    pub queue: FreqQueue,
    /// Site-index and queue mutations performed by node edits.
    pub index_updates: u64,
}

impl RunStore {
    pub fn new(weights: Vec<u64>) -> Self {
        RunStore {
            nodes: Vec::new(),
            free: Vec::new(),
            lists: vec![Ends::default(); weights.len()],
            weights,
            sites: HashMap::new(),
            queue: FreqQueue::default(),
            index_updates: 0,
        }
    }

    #[inline]
    fn n(&self, v: NodeId) -> &Node {
        &self.nodes[v as usize]
    }

    #[inline]
    fn n_mut(&mut self, v: NodeId) -> &mut Node {
        &mut self.nodes[v as usize]
    }

    pub fn run_count(&self, owner: usize) -> usize {
        self.lists[owner].runs
    }

    pub fn first_run(&self, owner: usize) -> Option<RlRun> {
        self.run_at(self.lists[owner].head)
    }

    pub fn last_run(&self, owner: usize) -> Option<RlRun> {
        self.run_at(self.lists[owner].tail)
    }

    fn run_at(&self, v: NodeId) -> Option<RlRun> {
        (v != NIL).then(|| RlRun { letter: self.n(v).letter, exp: self.n(v).exp })
    }

    pub fn runs(&self, owner: usize) -> impl Iterator<Item = RlRun> + '_ {
        let mut v = self.lists[owner].head;
        std::iter::from_fn(move || {
            let r = self.run_at(v)?;
            v = self.n(v).next;
            Some(r)
        })
    }

    fn alloc(&mut self, owner: usize, letter: Symbol, exp: u64) -> NodeId {
        let node = Node { letter, exp, prev: NIL, next: NIL, owner: owner as u32, live: true, admitted: false };
        match self.free.pop() {
            Some(v) => {
                self.nodes[v as usize] = node;
                v
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as NodeId
            }
        }
    }

    fn contributions(&self, v: NodeId) -> ([Option<(Bigram, u64)>; 2], u64) {
        let node = self.n(v);
        let w = self.weights[node.owner as usize];
        let block = (node.exp >= 2 && node.prev != NIL && node.next != NIL)
            .then(|| (Bigram::new(node.letter, node.letter), node.exp / 2 * w));
        let pair = (node.next != NIL).then(|| (Bigram::new(node.letter, self.n(node.next).letter), w));
        ([block, pair], w)
    }

    fn site_keys(&self, v: NodeId) -> [Option<Bigram>; 2] {
        let node = self.n(v);
        let run = (node.exp >= 2).then(|| Bigram::new(node.letter, node.letter));
        let pair = (node.next != NIL).then(|| Bigram::new(node.letter, self.n(node.next).letter));
        [run, pair]
    }

    fn retire(&mut self, v: NodeId) {
        if v == NIL || !self.n(v).live || !self.n(v).admitted {
            return;
        }
        let (contrib, _) = self.contributions(v);
        for (b, c) in contrib.into_iter().flatten() {
            self.queue.sub(b, c);
            self.index_updates += 1;
        }
        for b in self.site_keys(v).into_iter().flatten() {
            if let Some(set) = self.sites.get_mut(&b) {
                set.remove(&v);
                if set.is_empty() {
                    self.sites.remove(&b);
                }
            }
            self.index_updates += 1;
        }
        self.n_mut(v).admitted = false;
    }

    fn admit(&mut self, v: NodeId) {
        if v == NIL || !self.n(v).live || self.n(v).admitted {
            return;
        }
        let (contrib, _) = self.contributions(v);
        for (b, c) in contrib.into_iter().flatten() {
            self.queue.add(b, c);
            self.index_updates += 1;
        }
        for b in self.site_keys(v).into_iter().flatten() {
            self.sites.entry(b).or_default().insert(v);
            self.index_updates += 1;
        }
        self.n_mut(v).admitted = true;
    }

    fn retire_all(&mut self, ids: &[NodeId]) {
        for &v in ids {
            self.retire(v);
        }
    }

    fn admit_all(&mut self, ids: &[NodeId]) {
        for &v in ids {
            self.admit(v);
        }
    }

    /// Links `v` between `prev` and `next` (either may be NIL).
    fn link(&mut self, v: NodeId, prev: NodeId, next: NodeId) {
        let owner = self.n(v).owner as usize;
        self.n_mut(v).prev = prev;
        self.n_mut(v).next = next;
        if prev == NIL {
            self.lists[owner].head = v;
        } else {
            self.n_mut(prev).next = v;
        }
        if next == NIL {
            self.lists[owner].tail = v;
        } else {
            self.n_mut(next).prev = v;
        }
        self.lists[owner].runs += 1;
    }

    fn unlink(&mut self, v: NodeId) {
        debug_assert!(!self.n(v).admitted);
        let Node { prev, next, owner, .. } = *self.n(v);
        let owner = owner as usize;
        if prev == NIL {
            self.lists[owner].head = next;
        } else {
            self.n_mut(prev).next = next;
        }
        if next == NIL {
            self.lists[owner].tail = prev;
        } else {
            self.n_mut(next).prev = prev;
        }
        self.lists[owner].runs -= 1;
        let node = self.n_mut(v);
        node.live = false;
        node.prev = NIL;
        node.next = NIL;
        self.free.push(v);
    }

    /// Merges `v` with equal-letter neighbours; all involved nodes must be
    /// retired. Returns the surviving node.
    fn merge_around(&mut self, mut v: NodeId) -> NodeId {
        let p = self.n(v).prev;
        if p != NIL && self.n(p).letter == self.n(v).letter {
            let e = self.n(v).exp;
            self.n_mut(p).exp += e;
            self.unlink(v);
            v = p;
        }
        let q = self.n(v).next;
        if q != NIL && self.n(q).letter == self.n(v).letter {
            let e = self.n(q).exp;
            self.n_mut(v).exp += e;
            self.unlink(q);
        }
        v
    }

    fn neighbourhood(&self, v: NodeId) -> [NodeId; 3] {
        if v == NIL {
            return [NIL; 3];
        }
        [self.n(v).prev, v, self.n(v).next]
    }

    pub fn push_back(&mut self, owner: usize, letter: Symbol, exp: u64) {
        if exp == 0 {
            return;
        }
        let t = self.lists[owner].tail;
        let around = self.neighbourhood(t);
        self.retire_all(&around);
        let v = self.alloc(owner, letter, exp);
        self.link(v, t, NIL);
        let v = self.merge_around(v);
        self.admit_all(&around);
        self.admit(v);
    }

    pub fn push_front(&mut self, owner: usize, letter: Symbol, exp: u64) {
        if exp == 0 {
            return;
        }
        let h = self.lists[owner].head;
        let around = self.neighbourhood(h);
        self.retire_all(&around);
        let v = self.alloc(owner, letter, exp);
        self.link(v, NIL, h);
        let v = self.merge_around(v);
        self.admit_all(&around);
        self.admit(v);
    }

    /// Removes `amount` letters (at most the exponent) from node `v`.
    fn shrink(&mut self, v: NodeId, amount: u64) {
        let around = self.neighbourhood(v);
        self.retire_all(&around);
        let node = self.n_mut(v);
        node.exp -= amount;
        if node.exp == 0 {
            self.unlink(v);
        }
        self.admit_all(&around);
    }

    pub fn pop_front_letter(&mut self, owner: usize) -> Option<Symbol> {
        let h = self.lists[owner].head;
        let c = self.run_at(h)?.letter;
        self.shrink(h, 1);
        Some(c)
    }

    pub fn pop_back_letter(&mut self, owner: usize) -> Option<Symbol> {
        let t = self.lists[owner].tail;
        let c = self.run_at(t)?.letter;
        self.shrink(t, 1);
        Some(c)
    }

    pub fn strip_front_run(&mut self, owner: usize, c: Symbol) -> u64 {
        match self.first_run(owner) {
            Some(r) if r.letter == c => {
                self.shrink(self.lists[owner].head, r.exp);
                r.exp
            }
            _ => 0,
        }
    }

    pub fn strip_back_run(&mut self, owner: usize, c: Symbol) -> u64 {
        match self.last_run(owner) {
            Some(r) if r.letter == c => {
                self.shrink(self.lists[owner].tail, r.exp);
                r.exp
            }
            _ => 0,
        }
    }

    /// Current explicit sites of `b`, in node order.
    pub fn sites_of(&self, b: &Bigram) -> Vec<NodeId> {
        self.sites.get(b).map(|s| s.iter().copied().collect()).unwrap_or_default()
    }

    pub fn owner_of(&self, v: NodeId) -> usize {
        self.n(v).owner as usize
    }

    /// Replaces the site of `b` at node `v` if it is still one. Returns the
    /// number of occurrences replaced.
    pub fn replace_at(&mut self, v: NodeId, b: Bigram, fresh: Symbol) -> u64 {
        let node = *self.n(v);
        if !node.live || node.letter != b.left {
            return 0;
        }
        if b.is_repeating() {
            if node.exp < 2 {
                return 0;
            }
            let around = self.neighbourhood(v);
            self.retire_all(&around);
            let count = node.exp / 2;
            let n = self.n_mut(v);
            n.letter = fresh;
            n.exp = count;
            let mut extra = NIL;
            if node.exp % 2 == 1 {
                extra = self.alloc(node.owner as usize, b.left, 1);
                self.link(extra, v, node.next);
                extra = self.merge_around(extra);
            }
            let v = self.merge_around(v);
            self.admit_all(&around);
            self.admit(v);
            self.admit(extra);
            count
        } else {
            let w = node.next;
            if w == NIL || self.n(w).letter != b.right {
                return 0;
            }
            let affected = [node.prev, v, w, self.n(w).next];
            self.retire_all(&affected);
            let a = self.alloc(node.owner as usize, fresh, 1);
            self.link(a, v, w);
            for u in [v, w] {
                let n = self.n_mut(u);
                n.exp -= 1;
                if n.exp == 0 {
                    self.unlink(u);
                }
            }
            let a = self.merge_around(a);
            self.admit_all(&affected);
            self.admit(a);
            1
        }
    }

    pub fn weight(&self, owner: usize) -> u64 {
        self.weights[owner]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freq::freq_table_text;
    use proptest::prelude::*;

    fn store_of(text: &[Symbol]) -> RunStore {
        let mut s = RunStore::new(vec![1]);
        for &c in text {
            s.push_back(0, c, 1);
        }
        s
    }

    fn letters(s: &RunStore) -> Vec<Symbol> {
        s.runs(0).flat_map(|r| std::iter::repeat_n(r.letter, r.exp as usize)).collect()
    }

    /// Queue content for a list whose ends are the text ends: the end
    /// blocks are not counted, so compare against a padded text.
    fn check(s: &RunStore) {
        let text = letters(s);
        let mut expected: Vec<(Bigram, u64)> = freq_table_text(&text).sorted().into_iter().collect();
        // drop the end blocks, which a list never counts
        let first = text[0];
        let last = *text.last().unwrap();
        let lead = text.iter().take_while(|&&c| c == first).count() as u64;
        let trail = text.iter().rev().take_while(|&&c| c == last).count() as u64;
        let whole = lead == text.len() as u64;
        for (b, f) in expected.iter_mut() {
            if b.is_repeating() && b.left == first {
                *f -= lead / 2;
            }
            if b.is_repeating() && b.left == last && !whole {
                *f -= trail / 2;
            }
        }
        expected.retain(|&(_, f)| f > 0);
        let mut got: Vec<(Bigram, u64)> = s.queue.entries().collect();
        got.sort();
        assert_eq!(got, expected);
    }

    proptest! {
        #[test]
        fn edits_keep_queue_exact(
            text in proptest::collection::vec(0u32..3, 2..40),
            ops in proptest::collection::vec((0u8..6, 0u32..3), 0..30),
        ) {
            let text: Vec<Symbol> = text.into_iter().map(Symbol).collect();
            let mut s = store_of(&text);
            let mut plain = text.clone();
            let mut fresh = 100;
            check(&s);
            for (op, c) in ops {
                let c = Symbol(c);
                match op {
                    0 => { s.push_back(0, c, 2); plain.extend([c, c]); }
                    1 => { s.push_front(0, c, 1); plain.insert(0, c); }
                    2 if plain.len() > 2 => { s.pop_front_letter(0); plain.remove(0); }
                    3 if plain.len() > 2 => { s.pop_back_letter(0); plain.pop(); }
                    4 | 5 => {
                        let b = if op == 4 { Bigram::new(c, c) } else { Bigram::new(c, Symbol((c.0 + 1) % 3)) };
                        for v in s.sites_of(&b) {
                            s.replace_at(v, b, Symbol(fresh));
                        }
                        plain = crate::text::replace_pair_text(&plain, b, Symbol(fresh));
                        fresh += 1;
                        prop_assert!(s.sites_of(&b).is_empty());
                    }
                    _ => {}
                }
                prop_assert_eq!(letters(&s), plain.clone());
                check(&s);
            }
        }
    }
}
