//! Exhaustive search for sequences of a given length with no zero-sum
//! subsequence whose length lies in a target set.
//!
//! Multisets are generated as non-decreasing index tuples, depth first, in
//! lexicographic order. Being free of forbidden zero-sums is inherited by
//! sub-multisets, so a prefix that already contains one is cut. Orbits under
//! the enabled symmetries are visited once: only canonical prefixes are
//! extended (see [`crate::symmetry`]).
//!
//! Each node keeps one bitset per length `k < max(L)`: the sums reachable by
//! length-`k` subsequences of the prefix.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::seq::Seq;
use crate::symmetry::{SymmetryMode, Symmetries};

pub const DEFAULT_ORBIT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub symmetry: SymmetryMode,
    pub orbit_budget: u64,
    /// Worker threads for the top-level fan-out; 0 uses the rayon default,
    /// 1 runs sequentially.
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { symmetry: SymmetryMode::BOTH, orbit_budget: DEFAULT_ORBIT_BUDGET, threads: 1 }
    }
}

impl SearchConfig {
    pub fn with_symmetry(symmetry: SymmetryMode) -> Self {
        SearchConfig { symmetry, ..Default::default() }
    }
}

/// Outcome of one fixed-length search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    /// The canonically least counterexample, if any.
    pub found: Option<Seq>,
    /// Canonical nodes visited.
    pub nodes: u64,
}

/// True when every length is a multiple of the group exponent, so that
/// translations preserve every relevant count.
pub fn lengths_annihilated(group: &Group, lengths: &BTreeSet<usize>) -> bool {
    lengths.iter().all(|&k| (k as u64).is_multiple_of(group.exponent()))
}

/// Searches for a sequence of `length` over `group` (zero-sum when
/// `require_zero_sum`) with no zero-sum subsequence whose length is in
/// `lengths`.
pub fn find_counterexample(
    group: &Group,
    lengths: &BTreeSet<usize>,
    length: usize,
    require_zero_sum: bool,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    if lengths.is_empty() || lengths.contains(&0) {
        return Err(Error::InvalidArgument("target lengths must be positive and non-empty".into()));
    }
    if cfg.symmetry.use_translation && !lengths_annihilated(group, lengths) {
        return Err(Error::TranslationNotAnnihilated);
    }
    let engine = Engine::new(group, lengths, length, require_zero_sum, cfg);
    let (tuple, nodes) = engine.run()?;
    let found = tuple.map(|t| engine.certificate(&t));
    Ok(SearchResult { found, nodes })
}

struct Engine<'a> {
    group: &'a Group,
    n: usize,
    words: usize,
    /// layers tracked: lengths 0..layers
    layers: usize,
    length: usize,
    forbidden: Vec<usize>,
    add: Vec<u32>,
    neg: Vec<u32>,
    /// allowed final sums, as a bitset; `None` when any sum is fine
    target_sums: Option<Vec<u64>>,
    sym: Symmetries,
    budget: u64,
    threads: usize,
}

#[derive(Clone)]
struct Node {
    tuple: Vec<u32>,
    sum: u32,
    /// `layers × words` bitset rows, row k = sums of length-k subsequences
    reach: Vec<u64>,
}

struct Shared {
    nodes: AtomicU64,
    abort: AtomicBool,
    best_branch: AtomicUsize,
}

impl<'a> Engine<'a> {
    fn new(
        group: &'a Group,
        lengths: &BTreeSet<usize>,
        length: usize,
        require_zero_sum: bool,
        cfg: &SearchConfig,
    ) -> Self {
        let n = group.order() as usize;
        let words = n.div_ceil(64);
        let kmax = *lengths.iter().max().expect("non-empty");
        let add = group.cayley_table();
        let neg = group.neg_table();
        let target_sums = require_zero_sum.then(|| {
            let mut set = vec![0u64; words];
            if cfg.symmetry.use_translation {
                // a translate of a zero-sum sequence has sum length·c
                for c in 0..n {
                    let mut s = 0usize;
                    for _ in 0..length {
                        s = add[s * n + c] as usize;
                    }
                    set[s / 64] |= 1 << (s % 64);
                }
            } else {
                set[0] |= 1;
            }
            set
        });
        Engine {
            group,
            n,
            words,
            layers: kmax,
            length,
            forbidden: lengths.iter().copied().collect(),
            add,
            neg,
            target_sums,
            sym: Symmetries::new(group, cfg.symmetry),
            budget: cfg.orbit_budget,
            threads: cfg.threads,
        }
    }

    fn root(&self) -> Node {
        let mut reach = vec![0u64; self.layers * self.words];
        reach[0] = 1;
        Node { tuple: Vec::with_capacity(self.length), sum: 0, reach }
    }

    fn has(&self, reach: &[u64], k: usize, g: usize) -> bool {
        reach[k * self.words + g / 64] >> (g % 64) & 1 == 1
    }

    /// Adding `x` closes a forbidden zero-sum iff some `k ∈ L` has `−x`
    /// reachable with length `k − 1`.
    fn closes_forbidden(&self, node: &Node, x: usize) -> bool {
        let depth = node.tuple.len();
        let minus = self.neg[x] as usize;
        self.forbidden.iter().any(|&k| k - 1 <= depth && self.has(&node.reach, k - 1, minus))
    }

    fn child(&self, node: &Node, x: usize, out: &mut Node) {
        out.tuple.clear();
        out.tuple.extend_from_slice(&node.tuple);
        out.tuple.push(x as u32);
        out.sum = self.add[node.sum as usize * self.n + x];
        out.reach.copy_from_slice(&node.reach);
        let top = (node.tuple.len() + 1).min(self.layers - 1);
        for k in (1..=top).rev() {
            let src = &node.reach[(k - 1) * self.words..k * self.words];
            for (w, &word) in src.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let h = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let t = self.add[h * self.n + x] as usize;
                    out.reach[k * self.words + t / 64] |= 1 << (t % 64);
                }
            }
        }
    }

    fn final_sum_ok(&self, sum: usize) -> bool {
        match &self.target_sums {
            None => true,
            Some(set) => set[sum / 64] >> (sum % 64) & 1 == 1,
        }
    }

    fn count_node(&self, shared: &Shared) -> Result<()> {
        let visited = shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if visited > self.budget {
            shared.abort.store(true, Ordering::Relaxed);
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        Ok(())
    }

    /// Depth-first search below `node`; returns the first (least) canonical
    /// completion.
    fn dfs(&self, node: &Node, shared: &Shared, branch: usize) -> Result<Option<Vec<u32>>> {
        if shared.abort.load(Ordering::Relaxed) {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        if shared.best_branch.load(Ordering::Relaxed) < branch {
            return Ok(None);
        }
        let depth = node.tuple.len();
        if depth == self.length {
            return Ok(self.final_sum_ok(node.sum as usize).then(|| node.tuple.clone()));
        }
        let start = node.tuple.last().copied().unwrap_or(0) as usize;
        let last_slot = depth + 1 == self.length;
        let mut child = self.root();
        for x in start..self.n {
            if last_slot {
                let s = self.add[node.sum as usize * self.n + x] as usize;
                if !self.final_sum_ok(s) {
                    continue;
                }
            }
            if self.closes_forbidden(node, x) {
                continue;
            }
            let mut tuple = node.tuple.clone();
            tuple.push(x as u32);
            if !self.sym.is_canonical(&tuple) {
                continue;
            }
            self.count_node(shared)?;
            if last_slot {
                return Ok(Some(tuple));
            }
            self.child(node, x, &mut child);
            if let Some(found) = self.dfs(&child, shared, branch)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    /// Canonical prefixes at a fixed depth, in lexicographic order.
    fn frontier(&self, node: &Node, depth: usize, shared: &Shared, out: &mut Vec<Node>) -> Result<()> {
        if node.tuple.len() == depth {
            out.push(node.clone());
            return Ok(());
        }
        let start = node.tuple.last().copied().unwrap_or(0) as usize;
        for x in start..self.n {
            if self.closes_forbidden(node, x) {
                continue;
            }
            let mut tuple = node.tuple.clone();
            tuple.push(x as u32);
            if !self.sym.is_canonical(&tuple) {
                continue;
            }
            self.count_node(shared)?;
            let mut child = self.root();
            self.child(node, x, &mut child);
            self.frontier(&child, depth, shared, out)?;
        }
        Ok(())
    }

    fn run(&self) -> Result<(Option<Vec<u32>>, u64)> {
        let shared = Shared {
            nodes: AtomicU64::new(0),
            abort: AtomicBool::new(false),
            best_branch: AtomicUsize::new(usize::MAX),
        };
        let root = self.root();
        if self.length == 0 {
            return Ok((self.final_sum_ok(0).then(Vec::new), 0));
        }
        let split = 2usize;
        if self.threads == 1 || self.length <= split + 1 {
            let found = self.dfs(&root, &shared, 0)?;
            return Ok((found, shared.nodes.load(Ordering::Relaxed)));
        }
        let mut prefixes = Vec::new();
        self.frontier(&root, split, &shared, &mut prefixes)?;
        let work = || -> Vec<Result<Option<Vec<u32>>>> {
            prefixes
                .par_iter()
                .enumerate()
                .map(|(i, p)| {
                    let r = self.dfs(p, &shared, i);
                    if let Ok(Some(_)) = r {
                        shared.best_branch.fetch_min(i, Ordering::Relaxed);
                    }
                    r
                })
                .collect()
        };
        let results = if self.threads == 0 {
            work()
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?
                .install(work)
        };
        let mut found = None;
        for r in results {
            if let Some(t) = r? {
                found = Some(t);
                break;
            }
        }
        Ok((found, shared.nodes.load(Ordering::Relaxed)))
    }

    /// Turns a found tuple into a certificate; in zero-sum mode the
    /// representative is translated back to sum zero.
    fn certificate(&self, tuple: &[u32]) -> Seq {
        let idx: Vec<usize> = tuple.iter().map(|&i| i as usize).collect();
        let seq = Seq::from_indices(self.group, &idx);
        if self.target_sums.is_none() || seq.is_zero_sum() {
            return seq;
        }
        let sum = self.group.index_of(&seq.total_sum());
        for c in 0..self.n {
            let mut s = 0usize;
            for _ in 0..self.length {
                s = self.add[s * self.n + c] as usize;
            }
            if s == sum {
                let back = self.group.neg_unchecked(&self.group.element_at(c));
                return seq.translate(&back).expect("element of the group");
            }
        }
        unreachable!("final sums are restricted to length·G")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::has_zero_sum_in;

    fn set(ks: &[usize]) -> BTreeSet<usize> {
        ks.iter().copied().collect()
    }

    #[test]
    fn klein_examples() {
        let g = Group::uniform(2, 2);
        let cfg = SearchConfig::default();
        let r = find_counterexample(&g, &set(&[4]), 5, true, &cfg).unwrap();
        let j = r.found.unwrap();
        assert_eq!(j.len(), 5);
        assert!(j.is_zero_sum());
        assert!(!has_zero_sum_in(&j, &set(&[4])));

        let r = find_counterexample(&g, &set(&[2]), 5, false, &cfg).unwrap();
        assert!(r.found.is_none());

        let r = find_counterexample(&g, &set(&[2]), 4, false, &cfg).unwrap();
        let want = Seq::from_residues(&g, &[(&[0, 0], 1), (&[0, 1], 1), (&[1, 0], 1), (&[1, 1], 1)]).unwrap();
        assert_eq!(r.found.unwrap(), want);
    }

    #[test]
    fn translation_needs_annihilating_lengths() {
        let g = Group::uniform(2, 2);
        let cfg = SearchConfig::default();
        assert_eq!(find_counterexample(&g, &set(&[3]), 4, false, &cfg), Err(Error::TranslationNotAnnihilated));
        let cfg = SearchConfig::with_symmetry(SymmetryMode::AUTOMORPHISM);
        assert!(find_counterexample(&g, &set(&[3]), 4, false, &cfg).is_ok());
    }

    #[test]
    fn budget_is_enforced() {
        let g = Group::uniform(3, 2);
        let cfg = SearchConfig { symmetry: SymmetryMode::NONE, orbit_budget: 50, threads: 1 };
        assert_eq!(
            find_counterexample(&g, &set(&[3]), 9, false, &cfg),
            Err(Error::BudgetExceeded { budget: 50 })
        );
    }

    /// Plain enumeration of all multisets, for cross-checking.
    fn brute(g: &Group, lengths: &BTreeSet<usize>, length: usize, zero_sum: bool) -> bool {
        fn rec(g: &Group, l: &BTreeSet<usize>, len: usize, zs: bool, cur: &mut Vec<usize>, start: usize) -> bool {
            if cur.len() == len {
                let j = Seq::from_indices(g, cur);
                return (!zs || j.is_zero_sum()) && !has_zero_sum_in(&j, l);
            }
            for x in start..g.order() as usize {
                cur.push(x);
                if rec(g, l, len, zs, cur, x) {
                    return true;
                }
                cur.pop();
            }
            false
        }
        rec(g, lengths, length, zero_sum, &mut Vec::new(), 0)
    }

    #[test]
    fn agrees_with_plain_enumeration() {
        let cases: Vec<(Group, Vec<usize>)> = vec![
            (Group::uniform(2, 2), vec![2]),
            (Group::uniform(2, 2), vec![4]),
            (Group::uniform(2, 2), vec![2, 4]),
            (Group::uniform(3, 1), vec![3]),
            (Group::new(&[2, 4]).unwrap(), vec![4]),
            (Group::uniform(2, 3), vec![2, 4]),
        ];
        for (g, l) in cases {
            let l = set(&l);
            for len in 1..=7 {
                for zs in [false, true] {
                    let want = brute(&g, &l, len, zs);
                    for sym in [SymmetryMode::NONE, SymmetryMode::AUTOMORPHISM, SymmetryMode::BOTH] {
                        for threads in [1, 2] {
                            let cfg = SearchConfig { symmetry: sym, threads, ..Default::default() };
                            let r = find_counterexample(&g, &l, len, zs, &cfg).unwrap();
                            assert_eq!(r.found.is_some(), want, "{g} {l:?} len {len} zs {zs} {sym:?}");
                            if let Some(j) = r.found {
                                assert_eq!(j.len(), len);
                                assert!(!zs || j.is_zero_sum());
                                assert!(!has_zero_sum_in(&j, &l));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = Group::uniform(3, 2);
        for len in [6, 8, 9] {
            let seq = find_counterexample(&g, &set(&[3]), len, false, &SearchConfig::default()).unwrap();
            let cfg = SearchConfig { threads: 4, ..Default::default() };
            let par = find_counterexample(&g, &set(&[3]), len, false, &cfg).unwrap();
            assert_eq!(seq.found, par.found);
            if seq.found.is_none() {
                assert_eq!(seq.nodes, par.nodes);
            }
        }
    }
}
