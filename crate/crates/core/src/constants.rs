//! EGZ constants `s_L(G)` and modified constants `s'_L(G)`.
//!
//! `s_L(G)` is the least `ℓ` such that every sequence of length `ℓ` has a
//! zero-sum subsequence with length in `L`. `s'_L(G)` is the least `ℓ` such
//! that every zero-sum sequence of length at least `ℓ` has one. Both are
//! computed as one more than the longest (zero-sum) counterexample, found
//! by [`find_counterexample`] scanning down from a ceiling.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::count::{count_table, find_zero_sum_subsequence, has_zero_sum_in, Witness};
use crate::error::{Error, Result};
use crate::group::{is_prime, smallest_coprime_k, smallest_ell, smallest_ell_pair, split_factor, Group};
use crate::search::{find_counterexample, lengths_annihilated, SearchConfig};
use crate::seq::Seq;
use crate::symmetry::SymmetryMode;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LengthKind {
    FixedSet,
    Multiples { base: u64, t: u64 },
}

/// The target length set `L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthSpec {
    pub kind: LengthKind,
    pub lengths: BTreeSet<usize>,
}

impl LengthSpec {
    pub fn fixed(lengths: impl IntoIterator<Item = usize>) -> Result<Self> {
        let lengths: BTreeSet<usize> = lengths.into_iter().collect();
        if lengths.is_empty() || lengths.contains(&0) {
            return Err(Error::InvalidArgument("length set must be non-empty and positive".into()));
        }
        Ok(LengthSpec { kind: LengthKind::FixedSet, lengths })
    }

    /// `L = {n·t}`.
    pub fn multiples(base: u64, t: u64) -> Result<Self> {
        if base == 0 || t == 0 {
            return Err(Error::InvalidArgument("base and t must be positive".into()));
        }
        Ok(LengthSpec { kind: LengthKind::Multiples { base, t }, lengths: BTreeSet::from([(base * t) as usize]) })
    }

    pub fn min(&self) -> usize {
        *self.lengths.iter().next().expect("non-empty")
    }

    pub fn max(&self) -> usize {
        *self.lengths.iter().next_back().expect("non-empty")
    }

    /// The single length, if `L` is a singleton.
    pub fn single(&self) -> Option<usize> {
        (self.lengths.len() == 1).then(|| self.min())
    }
}

impl fmt::Display for LengthSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths.iter().map(|k| k.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Lower,
    Upper,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub kind: BoundKind,
    pub value: u64,
    pub source: String,
    pub formula: String,
    /// False when the value is stated but the argument given for it only
    /// supports a weaker one.
    pub proof_backed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundsRecord {
    pub lower: Option<u64>,
    pub upper: Option<u64>,
    /// Least upper bound among those whose argument is complete.
    pub proof_backed_upper: Option<u64>,
    pub exact: Option<u64>,
    pub sources: Vec<String>,
    pub bounds: Vec<Bound>,
}

impl BoundsRecord {
    fn push(&mut self, kind: BoundKind, value: u64, source: &str, formula: &str, proof_backed: bool) {
        self.bounds.push(Bound { kind, value, source: source.into(), formula: formula.into(), proof_backed });
        if !self.sources.iter().any(|s| s == source) {
            self.sources.push(source.into());
        }
        let lo = matches!(kind, BoundKind::Lower | BoundKind::Exact);
        let hi = matches!(kind, BoundKind::Upper | BoundKind::Exact);
        if lo {
            self.lower = Some(self.lower.map_or(value, |v| v.max(value)));
        }
        if hi {
            self.upper = Some(self.upper.map_or(value, |v| v.min(value)));
            if proof_backed {
                self.proof_backed_upper = Some(self.proof_backed_upper.map_or(value, |v| v.min(value)));
            }
        }
        if kind == BoundKind::Exact {
            self.exact = Some(value);
        }
    }

    /// Least upper bound whose argument is complete; the default search
    /// ceiling.
    pub fn ceiling(&self) -> Option<u64> {
        self.proof_backed_upper
    }

    /// True when `value` respects every recorded bound, stated or proved.
    pub fn admits(&self, value: u64) -> bool {
        self.lower.is_none_or(|l| l <= value) && self.upper.is_none_or(|u| value <= u)
    }

    /// True when `value` respects the lower bounds and the proof-backed
    /// upper bounds.
    pub fn admits_proof_backed(&self, value: u64) -> bool {
        self.lower.is_none_or(|l| l <= value) && self.proof_backed_upper.is_none_or(|u| value <= u)
    }
}

/// Known bounds for `s_L(G)` (or `s'_L(G)` when `modified`).
pub fn theorem_table(group: &Group, lengths: &LengthSpec, modified: bool) -> Result<BoundsRecord> {
    let moduli = group.moduli();
    let mut rec = BoundsRecord::default();
    let single = lengths.single();
    let no = |why: &str| Err(Error::NoTheorem(format!("{group}, L = {lengths}: {why}")));

    match moduli {
        [n] => {
            let n = *n;
            let Some(k) = single.filter(|&k| (k as u64).is_multiple_of(n)) else {
                return no("cyclic groups need L = {nt}");
            };
            let t = k as u64 / n;
            if modified {
                let ell = smallest_ell(n, 2);
                rec.push(BoundKind::Exact, (t + 1) * n - ell + 1, "berger_wang_cyclic", "(t+1)n − ℓ + 1", true);
            } else if t == 1 {
                rec.push(BoundKind::Exact, 2 * n - 1, "erdos_ginzburg_ziv", "2n − 1", true);
            } else {
                return no("unmodified cyclic constant only tabulated for t = 1");
            }
        }
        [n1, n2] if n2 % n1 == 0 => {
            let (n1, n2) = (*n1, *n2);
            let Some(k) = single.filter(|&k| (k as u64).is_multiple_of(n2)) else {
                return no("rank-2 groups need L = {n2·t}");
            };
            let t = k as u64 / n2;
            if n1 == n2 {
                uniform_rank2(&mut rec, n2, t, modified)?;
            } else {
                rectangular(&mut rec, n1, n2, t, modified)?;
            }
        }
        _ if group.is_uniform() && group.rank() >= 3 && is_prime(moduli[0]) => {
            let p = moduli[0] as usize;
            let d = group.rank();
            let want: BTreeSet<usize> = (1..d).map(|i| i * p).collect();
            if lengths.lengths != want || !modified {
                return no("rank-d prime groups are tabulated for the modified constant with L = {p,…,(d−1)p}");
            }
            rec.push(BoundKind::Upper, ((d + 1) * p) as u64, "chevalley_warning_rank_d", "(d+1)p", d <= 3);
        }
        _ => return no("unsupported group shape"),
    }
    if rec.bounds.is_empty() {
        return no("no bound applies");
    }
    Ok(rec)
}

fn uniform_rank2(rec: &mut BoundsRecord, n: u64, t: u64, modified: bool) -> Result<()> {
    if n < 2 {
        return Ok(());
    }
    let (p, m) = split_factor(n)?;
    match (modified, t) {
        (true, 1) => {
            let ell = smallest_ell(n, 4);
            rec.push(BoundKind::Exact, 4 * n - ell + 1, "berger_wang_rank2", "4n − ℓ + 1", true);
        }
        (true, _) => {
            let k = smallest_coprime_k(n);
            rec.push(BoundKind::Lower, (t + 2) * n - k + 1, "modified_rank2_bounds", "(t+2)n − k + 1", true);
            rec.push(BoundKind::Upper, (t + 2) * n + m - 3, "modified_rank2_bounds", "(t+2)n + m − 3", true);
            if is_prime(n) {
                if n == 3 {
                    rec.push(BoundKind::Exact, 3 * (t + 1), "modified_prime_rank2", "3(t+1)", true);
                } else {
                    rec.push(BoundKind::Exact, (t + 2) * p - 2, "modified_prime_rank2", "(t+2)p − 2", true);
                }
            }
            let ell = smallest_ell_pair(n, n)?;
            rec.push(BoundKind::Upper, 2 * n + (t + 1) * n - ell + 1, "modified_multiple_bound", "2n₁ + (t+1)n₂ − ℓ + 1", true);
        }
        (false, 1) => {
            rec.push(BoundKind::Exact, 4 * n - 3, "reiher", "4n − 3", true);
        }
        (false, _) => {
            rec.push(BoundKind::Lower, (t + 2) * n - 2, "egz_multiple_bounds", "(t+2)n − 2", true);
            rec.push(BoundKind::Upper, (t + 2) * n + m - 3, "egz_multiple_bounds", "(t+2)n + m − 3", true);
            if is_prime(n) {
                rec.push(BoundKind::Exact, (t + 2) * p - 2, "egz_multiple_prime", "(t+2)p − 2", true);
            }
        }
    }
    Ok(())
}

fn rectangular(rec: &mut BoundsRecord, n1: u64, n2: u64, t: u64, modified: bool) -> Result<()> {
    let ell2 = smallest_ell(n2, 4);
    let ell1 = smallest_ell(n1, 4);
    let egz = 2 * n1 + 2 * n2 - 3;
    match (modified, t) {
        (true, 1) => {
            rec.push(BoundKind::Lower, 2 * n2 - ell2, "rect_modified_stated", "2n₂ − ℓ", true);
            rec.push(BoundKind::Upper, 2 * n1 + 2 * n2 - ell2 + 1, "rect_modified_stated", "2n₁ + 2n₂ − ℓ + 1, ℓ ∤ n₂", false);
            rec.push(BoundKind::Upper, 2 * n1 + 2 * n2 - ell1 + 1, "rect_modified_block", "2n₁ + 2n₂ − ℓ + 1, ℓ ∤ n₁", true);
            rec.push(BoundKind::Upper, egz, "geroldinger_halter_koch", "s' ≤ s = 2n₁ + 2n₂ − 3", true);
        }
        (true, _) => {
            let ell = smallest_ell_pair(n1, n2)?;
            let stated = 2 * n1 + (t + 1) * n2 - ell + 1;
            rec.push(BoundKind::Upper, stated, "modified_multiple_bound", "2n₁ + (t+1)n₂ − ℓ + 1, ℓ ∤ n₁, n₂", false);
            let backed = 2 * n1 + (t + 1) * n2 - ell1 + 1;
            rec.push(BoundKind::Upper, backed, "rect_multiple_block", "2n₁ + (t+1)n₂ − ℓ + 1, ℓ ∤ n₁", true);
        }
        (false, 1) => {
            rec.push(BoundKind::Exact, egz, "geroldinger_halter_koch", "2n₁ + 2n₂ − 3", true);
        }
        (false, _) => {}
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Modified,
    Unmodified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A sequence (zero-sum in modified mode) with no zero-sum subsequence
    /// of any length in `absent_lengths`.
    Counterexample { seq: Seq, absent_lengths: BTreeSet<usize> },
    /// Every canonical candidate of `length` was examined and none qualified.
    Exhausted { length: usize, orbits_visited: u64, symmetry: SymmetryMode },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub mode: Mode,
    pub result: Certificate,
}

impl SearchOutcome {
    /// Re-checks a counterexample by exact counting, independent of the
    /// search state. Exhaustion certificates carry nothing to re-check.
    pub fn verify(&self) -> bool {
        match &self.result {
            Certificate::Counterexample { seq, absent_lengths } => {
                let zs_ok = self.mode == Mode::Unmodified || seq.is_zero_sum();
                let kmax = absent_lengths.iter().copied().filter(|&k| k <= seq.len()).max();
                let counts_ok = match kmax {
                    None => true,
                    Some(kmax) => {
                        let table = count_table(seq, kmax).expect("kmax <= len");
                        absent_lengths.iter().filter(|&&k| k <= kmax).all(|&k| table.zero_sum(k) == &0u32.into())
                    }
                };
                zs_ok && counts_ok
            }
            Certificate::Exhausted { .. } => true,
        }
    }
}

/// Where the search ceiling came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ceiling {
    /// No counterexample at or above this length was possible by
    /// monotonicity (unmodified mode, found by scanning upward).
    Searched,
    Supplied(u64),
    /// Taken from the theorem table; correctness above it rests on the
    /// cited theorem.
    Theorem { value: u64, source: String },
}

impl fmt::Display for Ceiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ceiling::Searched => f.write_str("none (scanned upward)"),
            Ceiling::Supplied(c) => write!(f, "{c} (supplied)"),
            Ceiling::Theorem { value, source } => write!(f, "{value} ({source})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantResult {
    pub value: u64,
    pub mode: Mode,
    pub ceiling: Ceiling,
    pub symmetry: SymmetryMode,
    /// One per searched length, in search order.
    pub certificates: Vec<SearchOutcome>,
    pub bounds: Option<BoundsRecord>,
}

impl ConstantResult {
    /// The longest counterexample found, of length `value − 1`.
    pub fn counterexample(&self) -> Option<&Seq> {
        self.certificates
            .iter()
            .filter_map(|c| match &c.result {
                Certificate::Counterexample { seq, .. } => Some(seq),
                _ => None,
            })
            .max_by_key(|s| s.len())
    }
}

/// Longest length scanned upward when no ceiling is known.
const UPWARD_LIMIT: usize = 128;

/// Computes `s_L(G)` or `s'_L(G)` exactly by exhaustive search.
///
/// With a ceiling (supplied, or the least proof-backed upper bound from
/// [`theorem_table`]) every length from the ceiling down is searched until
/// a counterexample appears; one at the ceiling itself is an error.
/// Without one, the unmodified constant is found by scanning upward, which
/// monotonicity makes sound. Translation symmetry is dropped automatically
/// when `L` is not annihilated by the exponent.
pub fn compute_constant(
    group: &Group,
    lengths: &LengthSpec,
    modified: bool,
    ceiling: Option<u64>,
    cfg: &SearchConfig,
) -> Result<ConstantResult> {
    let mode = if modified { Mode::Modified } else { Mode::Unmodified };
    let mut cfg = *cfg;
    if !lengths_annihilated(group, &lengths.lengths) {
        cfg.symmetry.use_translation = false;
    }
    let bounds = theorem_table(group, lengths, modified).ok();
    let ceiling = match (ceiling, bounds.as_ref().and_then(|b| b.ceiling())) {
        (Some(c), _) => Ceiling::Supplied(c),
        (None, Some(value)) => {
            let b = bounds.as_ref().expect("ceiling came from bounds");
            let source = b
                .bounds
                .iter()
                .find(|x| x.proof_backed && x.value == value && x.kind != BoundKind::Lower)
                .map(|x| x.source.clone())
                .unwrap_or_default();
            Ceiling::Theorem { value, source }
        }
        (None, None) if !modified => Ceiling::Searched,
        (None, None) => return Err(Error::MissingCeiling),
    };

    let run = |len: usize| -> Result<SearchOutcome> {
        let r = find_counterexample(group, &lengths.lengths, len, modified, &cfg)?;
        let result = match r.found {
            Some(seq) => Certificate::Counterexample { seq, absent_lengths: lengths.lengths.clone() },
            None => Certificate::Exhausted { length: len, orbits_visited: r.nodes, symmetry: cfg.symmetry },
        };
        Ok(SearchOutcome { mode, result })
    };

    let mut certificates = Vec::new();
    let value = match ceiling {
        Ceiling::Searched => {
            let mut value = None;
            for len in lengths.min()..=UPWARD_LIMIT {
                let outcome = run(len)?;
                let exhausted = matches!(outcome.result, Certificate::Exhausted { .. });
                certificates.push(outcome);
                if exhausted {
                    value = Some(len as u64);
                    break;
                }
            }
            value.ok_or_else(|| {
                Error::NoTheorem(format!("counterexamples persist up to length {UPWARD_LIMIT}"))
            })?
        }
        Ceiling::Supplied(c) | Ceiling::Theorem { value: c, .. } => {
            let top = c as usize;
            let mut value = None;
            for len in (lengths.min()..=top).rev() {
                let outcome = run(len)?;
                let found = matches!(outcome.result, Certificate::Counterexample { .. });
                certificates.push(outcome);
                if found {
                    if len == top {
                        return Err(Error::CeilingUnsound { ceiling: top });
                    }
                    value = Some(len as u64 + 1);
                    break;
                }
            }
            match value {
                Some(v) => v,
                None => {
                    // below min(L) the all-identity sequence qualifies
                    let len = lengths.min() - 1;
                    let seq = Seq::from_indices(group, &vec![0; len]);
                    certificates.push(SearchOutcome {
                        mode,
                        result: Certificate::Counterexample { seq, absent_lengths: lengths.lengths.clone() },
                    });
                    lengths.min() as u64
                }
            }
        }
    };
    debug_assert!(certificates.iter().all(SearchOutcome::verify));
    Ok(ConstantResult { value, mode, ceiling, symmetry: cfg.symmetry, certificates, bounds })
}

/// Repeatedly removes length-`k` zero-sum subsequences while more than
/// `stop_length` entries remain and one exists.
pub fn greedy_extract(j: &Seq, k: usize, stop_length: usize) -> (Vec<Witness>, Seq) {
    let mut rest = j.clone();
    let mut out = Vec::new();
    while rest.len() > stop_length && k > 0 {
        let Some(w) = find_zero_sum_subsequence(&rest, k) else { break };
        rest = rest.remove(&w.sub).expect("witness is a sub-multiset");
        out.push(w);
    }
    (out, rest)
}

/// Assembles a zero-sum subsequence of length `t·n` from a zero-sum `J` over
/// `(Z/n)^2`: peel length-`n` pieces until `3n` entries remain, then take a
/// length-`2n` piece of the (zero-sum) remainder.
pub fn assemble_multiple(j: &Seq, n: usize, t: usize) -> Option<Witness> {
    if t < 2 || j.len() < 3 * n {
        return None;
    }
    let (pieces, rest) = greedy_extract(j, n, 3 * n);
    if pieces.len() < t - 2 || rest.len() < 2 * n {
        return None;
    }
    let mut sub = find_zero_sum_subsequence(&rest, 2 * n)?.sub;
    for w in pieces.into_iter().take(t - 2) {
        sub = sub.join(&w.sub).ok()?;
    }
    Some(Witness { target_length: t * n, sub })
}

/// Blocks of size `d` whose sums vanish modulo `d`, peeled off while some
/// exist, together with the quotient sequence of block sums divided by `d`
/// over `(Z/(n/d))^rank`.
#[derive(Clone, Debug)]
pub struct BlockReduction {
    pub blocks: Vec<Seq>,
    pub quotient: Seq,
    pub remainder: Seq,
}

/// Peels blocks of size `d` with sum `≡ 0 (mod d)` from `J` over `(Z/n)^r`
/// while more than `stop_length` entries remain.
pub fn block_reduce(j: &Seq, d: u64, stop_length: usize) -> Result<BlockReduction> {
    let g = j.group();
    if !g.is_uniform() || g.rank() == 0 || !g.moduli()[0].is_multiple_of(d) || d == 0 {
        return Err(Error::BadProjection { d });
    }
    let n = g.moduli()[0];
    let quotient_group = Group::uniform(n / d, g.rank());
    let mut rest = j.clone();
    let mut blocks = Vec::new();
    let mut quotient = Seq::empty(&quotient_group);
    while rest.len() > stop_length {
        let projected = rest.project(d)?;
        let Some(w) = find_zero_sum_subsequence(&projected, d as usize) else { break };
        // lift the projected witness back to concrete entries of `rest`
        let mut lifted = Seq::empty(g);
        for (target, mut need) in w.sub.entries().map(|(e, m)| (e.clone(), m)) {
            for (e, m) in rest.entries() {
                if need == 0 {
                    break;
                }
                let reduced: Vec<u64> = e.residues().iter().map(|&x| x % d).collect();
                if reduced == target.residues() {
                    let take = m.min(need);
                    lifted.insert(e.clone(), take);
                    need -= take;
                }
            }
        }
        rest = rest.remove(&lifted)?;
        let sum = lifted.total_sum();
        let q: Vec<i64> = sum.residues().iter().map(|&x| (x / d) as i64).collect();
        quotient.insert(quotient_group.element(&q)?, 1);
        blocks.push(lifted);
    }
    Ok(BlockReduction { blocks, quotient, remainder: rest })
}

/// Convenience: does `J` contain a zero-sum subsequence with length in `L`?
pub fn avoids(j: &Seq, lengths: &LengthSpec) -> bool {
    !has_zero_sum_in(j, &lengths.lengths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(k: usize) -> LengthSpec {
        LengthSpec::fixed([k]).unwrap()
    }

    #[test]
    fn table_examples() {
        let rec = theorem_table(&Group::uniform(2, 2), &l(2), true).unwrap();
        assert_eq!(rec.exact, Some(5));
        let rec = theorem_table(&Group::uniform(2, 2), &LengthSpec::multiples(2, 2).unwrap(), true).unwrap();
        assert_eq!(rec.exact, Some(6));
        let rec = theorem_table(&Group::new(&[2, 4]).unwrap(), &l(4), true).unwrap();
        assert_eq!((rec.lower, rec.upper, rec.exact), (Some(3), Some(8), None));
        assert_eq!(rec.ceiling(), Some(9));
        assert!(!rec.admits(9));
        assert!(rec.admits_proof_backed(9));
        let proof_backed: Vec<u64> = rec
            .bounds
            .iter()
            .filter(|b| b.kind == BoundKind::Upper && b.proof_backed)
            .map(|b| b.value)
            .collect();
        assert_eq!(proof_backed, vec![9, 9]);
    }

    #[test]
    fn table_consistency() {
        for n in 2..=12u64 {
            for t in 1..=4u64 {
                for modified in [true, false] {
                    let g = Group::uniform(n, 2);
                    if let Ok(rec) = theorem_table(&g, &LengthSpec::multiples(n, t).unwrap(), modified) {
                        if let (Some(lo), Some(hi)) = (rec.lower, rec.upper) {
                            assert!(lo <= hi, "n={n} t={t} modified={modified}: {rec:?}");
                        }
                        if let Some(e) = rec.exact {
                            assert!(rec.admits(e));
                        }
                    }
                }
            }
        }
        assert!(matches!(theorem_table(&Group::uniform(2, 2), &l(3), true), Err(Error::NoTheorem(_))));
        assert!(matches!(
            theorem_table(&Group::new(&[2, 3]).unwrap(), &l(3), true),
            Err(Error::NoTheorem(_))
        ));
    }

    #[test]
    fn small_constants() {
        let cfg = SearchConfig::default();
        let g = Group::uniform(2, 2);
        let r = compute_constant(&g, &l(2), true, None, &cfg).unwrap();
        assert_eq!(r.value, 5);
        assert!(r.certificates.iter().all(SearchOutcome::verify));
        let r = compute_constant(&g, &l(4), true, None, &cfg).unwrap();
        assert_eq!(r.value, 6);
        let r = compute_constant(&g, &l(2), false, None, &cfg).unwrap();
        assert_eq!(r.value, 5);
        assert_eq!(r.counterexample().unwrap().len(), 4);
    }

    #[test]
    fn upward_scan_without_table() {
        // Z/2 × Z/3 with L = {6}: cyclic of order 6 in disguise, EGZ gives 11
        let g = Group::new(&[2, 3]).unwrap();
        let r = compute_constant(&g, &l(6), false, None, &SearchConfig::default()).unwrap();
        assert_eq!(r.ceiling, Ceiling::Searched);
        assert_eq!(r.value, 11);
        assert!(matches!(
            compute_constant(&g, &l(6), true, None, &SearchConfig::default()),
            Err(Error::MissingCeiling)
        ));
    }

    #[test]
    fn unsound_ceiling_is_reported() {
        let g = Group::uniform(2, 2);
        let err = compute_constant(&g, &l(2), false, Some(4), &SearchConfig::default()).unwrap_err();
        assert_eq!(err, Error::CeilingUnsound { ceiling: 4 });
    }

    #[test]
    fn extraction_examples() {
        let g = Group::uniform(2, 2);
        let zeros = Seq::from_residues(&g, &[(&[0, 0], 6)]).unwrap();
        let (ws, rest) = greedy_extract(&zeros, 2, 0);
        assert_eq!(ws.len(), 3);
        assert!(rest.is_empty());

        let j = Seq::from_residues(&g, &[(&[1, 1], 3), (&[0, 1], 1), (&[1, 0], 1)]).unwrap();
        let (ws, rest) = greedy_extract(&j, 4, 0);
        assert!(ws.is_empty());
        assert_eq!(rest, j);

        // zero-sum of length (t+1)n with n = 2, t = 3
        let j = Seq::from_residues(&g, &[(&[1, 0], 2), (&[0, 1], 2), (&[1, 1], 2), (&[0, 0], 2)]).unwrap();
        assert!(j.is_zero_sum());
        let w = assemble_multiple(&j, 2, 3).unwrap();
        assert_eq!(w.sub.len(), 6);
        assert!(w.sub.is_zero_sum());
        assert!(w.sub.is_submultiset_of(&j));
    }

    #[test]
    fn block_reduction_projects() {
        let g = Group::uniform(4, 2);
        let idx: Vec<usize> = (0..15).map(|i| (i * 7 + 3) % 16).collect();
        let j = Seq::from_indices(&g, &idx);
        let red = block_reduce(&j, 2, 2 * 3 - 3).unwrap();
        assert!(red.remainder.len() <= 5);
        assert_eq!(red.blocks.len(), red.quotient.len());
        for b in &red.blocks {
            assert_eq!(b.len(), 2);
            assert!(b.total_sum().residues().iter().all(|&x| x % 2 == 0));
        }
    }
}
