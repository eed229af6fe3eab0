//! Counting congruences mod `p` for zero-sum subsequence counts over
//! `(Z/p)^d`, checked exhaustively for small `p` and on seeded samples
//! otherwise.
//!
//! Each identity has the shape `1 + Σ ±(k | J) ≡ 0 (mod p)` and holds for
//! every sequence whose length matches its hypothesis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::count::{brute_force_count, count_table, count_table_mod, has_zero_sum_in};
use crate::error::{Error, Result};
use crate::group::{is_prime, Group};
use crate::seq::Seq;

/// Number of sequences per run whose residue is recomputed from exact
/// big-integer counts.
pub const EXACT_CROSS_CHECKS: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Identity {
    /// Rank 2, lengths `3p−2` and `3p−1`: `1 − (p) + (2p)`.
    Reiher2d,
    /// Rank 3, length `4p−4`.
    CwRank3Full,
    /// Rank 3, lengths `4p−3 ..= 4p−1`: `1 − (p) + (2p) − (3p)`.
    CwRank3Shift,
    /// Rank `d`, length `(d+1)(p−1)`.
    CwGeneralFull { d: usize },
    /// Rank `d`, length `(d+1)p − m` with `1 ≤ m ≤ d`.
    CwGeneralShift { d: usize, m: usize },
}

impl Identity {
    pub fn id(&self) -> String {
        match self {
            Identity::Reiher2d => "reiher_2d".into(),
            Identity::CwRank3Full => "cw_rank3_full".into(),
            Identity::CwRank3Shift => "cw_rank3_shift".into(),
            Identity::CwGeneralFull { d } => format!("cw_general_full({d})"),
            Identity::CwGeneralShift { d, m } => format!("cw_general_shift({d},{m})"),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Identity::Reiher2d => 2,
            Identity::CwRank3Full | Identity::CwRank3Shift => 3,
            Identity::CwGeneralFull { d } | Identity::CwGeneralShift { d, .. } => *d,
        }
    }

    /// Sequence lengths the identity covers.
    pub fn lengths(&self, p: u64) -> Vec<usize> {
        let p = p as usize;
        match *self {
            Identity::Reiher2d => vec![3 * p - 2, 3 * p - 1],
            Identity::CwRank3Full => vec![4 * p - 4],
            Identity::CwRank3Shift => vec![4 * p - 3, 4 * p - 2, 4 * p - 1],
            Identity::CwGeneralFull { d } => vec![(d + 1) * (p - 1)],
            Identity::CwGeneralShift { d, m } => vec![(d + 1) * p - m],
        }
    }

    /// False where the identity is only evaluated, not claimed: the rank-3
    /// full shape is stated for `p > 3`.
    pub fn claimed_for(&self, p: u64) -> bool {
        !matches!(self, Identity::CwRank3Full) || p > 3
    }

    /// Signed terms `(sign, k)` after the leading `1`.
    pub fn terms(&self, p: u64) -> Vec<(i64, usize)> {
        let p = p as usize;
        match *self {
            Identity::Reiher2d => vec![(-1, p), (1, 2 * p)],
            Identity::CwRank3Full => vec![
                (-1, p - 1),
                (-1, p),
                (1, 2 * p - 1),
                (1, 2 * p),
                (-1, 3 * p - 1),
                (-1, 3 * p),
            ],
            Identity::CwRank3Shift => vec![(-1, p), (1, 2 * p), (-1, 3 * p)],
            Identity::CwGeneralFull { d } => (1..=d)
                .flat_map(|k| {
                    let s = if k % 2 == 1 { -1 } else { 1 };
                    [(s, k * p - 1), (s, k * p)]
                })
                .collect(),
            Identity::CwGeneralShift { d, .. } => {
                (1..=d).map(|k| (if k % 2 == 1 { -1 } else { 1 }, k * p)).collect()
            }
        }
    }

    fn kmax(&self, p: u64) -> usize {
        self.terms(p).iter().map(|&(_, k)| k).max().unwrap_or(0)
    }

    /// The general-rank identity whose hypothesis matches `length`.
    pub fn general_for(d: usize, p: u64, length: usize) -> Option<Identity> {
        let pu = p as usize;
        if length == (d + 1) * (pu - 1) {
            return Some(Identity::CwGeneralFull { d });
        }
        let top = (d + 1) * pu;
        (length < top && top - length <= d).then(|| Identity::CwGeneralShift { d, m: top - length })
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Residue of `1 + Σ sign·c(k)` modulo `p`, where `c(k)` is already reduced.
fn combine(terms: &[(i64, usize)], p: u64, count: impl Fn(usize) -> u64) -> u64 {
    let p = p as i64;
    let mut acc = 1i64;
    for &(s, k) in terms {
        acc = (acc + s * count(k) as i64).rem_euclid(p);
    }
    acc.rem_euclid(p) as u64
}

/// Checks that `J` lives in `(Z/p)^rank` for a prime `p`; returns `p`.
fn prime_group(j: &Seq, rank: usize) -> Result<u64> {
    let g = j.group();
    let p = g.moduli().first().copied().unwrap_or(0);
    if g.rank() != rank || !g.is_uniform() || !is_prime(p) {
        return Err(Error::Hypothesis(format!("expected (Z/p)^{rank} with p prime, got {g}")));
    }
    Ok(p)
}

fn check_length(j: &Seq, identity: Identity, p: u64) -> Result<()> {
    if identity.lengths(p).contains(&j.len()) {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!(
            "{identity} needs length in {:?} for p = {p}, got {}",
            identity.lengths(p),
            j.len()
        )))
    }
}

/// Residue via the mod-`p` count table. Assumes the hypothesis was checked.
pub fn residue(j: &Seq, identity: Identity, p: u64) -> u64 {
    let kmax = identity.kmax(p).min(j.len());
    let table = count_table_mod(j, kmax, p).expect("kmax <= len, p >= 2");
    combine(&identity.terms(p), p, |k| if k <= kmax { table.zero_sum(k) } else { 0 })
}

/// Residue via exact big-integer counts reduced mod `p`.
pub fn residue_exact(j: &Seq, identity: Identity, p: u64) -> u64 {
    let kmax = identity.kmax(p).min(j.len());
    let table = count_table(j, kmax).expect("kmax <= len");
    let pb = BigUint::from(p);
    combine(&identity.terms(p), p, |k| {
        if k <= kmax {
            (table.zero_sum(k) % &pb).to_u64().expect("below p")
        } else {
            0
        }
    })
}

fn checked(j: &Seq, identity: Identity) -> Result<u64> {
    let p = prime_group(j, identity.rank())?;
    check_length(j, identity, p)?;
    Ok(residue(j, identity, p))
}

/// `1 − (p|J) + (2p|J) mod p` over `(Z/p)^2`, lengths `3p−2` or `3p−1`.
pub fn reiher_congruence(j: &Seq) -> Result<u64> {
    checked(j, Identity::Reiher2d)
}

/// Full rank-3 shape at length `4p−4`.
pub fn cw_rank3_full(j: &Seq) -> Result<u64> {
    checked(j, Identity::CwRank3Full)
}

/// `1 − (p|J) + (2p|J) − (3p|J) mod p` over `(Z/p)^3`, lengths `4p−3 ..= 4p−1`.
pub fn cw_rank3_shift(j: &Seq) -> Result<u64> {
    checked(j, Identity::CwRank3Shift)
}

/// The rank-`d` identity matching `|J|`, and its residue.
pub fn cw_general(j: &Seq, d: usize) -> Result<(Identity, u64)> {
    let p = prime_group(j, d)?;
    let identity = Identity::general_for(d, p, j.len()).ok_or_else(|| {
        Error::Hypothesis(format!("length {} matches neither rank-{d} shape for p = {p}", j.len()))
    })?;
    Ok((identity, residue(j, identity, p)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DichotomyReport {
    pub p_count: BigUint,
    pub two_p_count: BigUint,
    pub three_p_count: BigUint,
    /// `(p|J) > 0` or `(2p|J) > 0`.
    pub holds: bool,
    /// `(p|J) = (3p|J)`, forced by complementation in a zero-sum `J`.
    pub complement_holds: bool,
}

/// For a zero-sum `J` of length `4p` over `(Z/p)^3`.
pub fn dichotomy_4p(j: &Seq) -> Result<DichotomyReport> {
    let p = prime_group(j, 3)?;
    if j.len() != 4 * p as usize || !j.is_zero_sum() {
        return Err(Error::Hypothesis(format!("needs a zero-sum sequence of length {}", 4 * p)));
    }
    let pu = p as usize;
    let table = count_table(j, 3 * pu)?;
    let (a, b, c) = (table.zero_sum(pu).clone(), table.zero_sum(2 * pu).clone(), table.zero_sum(3 * pu).clone());
    Ok(DichotomyReport {
        holds: !a.is_zero() || !b.is_zero(),
        complement_holds: a == c,
        p_count: a,
        two_p_count: b,
        three_p_count: c,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Sampling {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

/// One run over a set of sequences of a fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub identity_id: String,
    pub p: u64,
    pub d: usize,
    pub length: usize,
    pub sequences_checked: u64,
    pub failures: u64,
    pub seed: Option<u64>,
    pub exhaustive: bool,
    /// False when the identity is evaluated outside its stated hypothesis;
    /// failures are then observations, not violations.
    pub claimed: bool,
    /// How often each residue occurred.
    pub residues: BTreeMap<u64, u64>,
    pub cross_checked: u64,
    pub cross_check_mismatches: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement_failures: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Seq>,
}

impl CongruenceReport {
    fn new(id: String, p: u64, d: usize, length: usize, sampling: Sampling, claimed: bool) -> Self {
        let (seed, exhaustive) = match sampling {
            Sampling::Exhaustive => (None, true),
            Sampling::Random { seed, .. } => (Some(seed), false),
        };
        CongruenceReport {
            identity_id: id,
            p,
            d,
            length,
            sequences_checked: 0,
            failures: 0,
            seed,
            exhaustive,
            claimed,
            residues: BTreeMap::new(),
            cross_checked: 0,
            cross_check_mismatches: 0,
            complement_failures: None,
            first_failure: None,
        }
    }

    fn fail(&mut self, j: impl FnOnce() -> Seq) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(j());
        }
    }

    /// No failures and no disagreement between counting methods.
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cross_check_mismatches == 0 && self.complement_failures.unwrap_or(0) == 0
    }
}

/// Visits every multiset of `length` elements of `group` as a
/// non-decreasing index tuple. With `zero_sum_only`, the last element is
/// forced to cancel the running sum. When `track = Some((kmax, p))`, the
/// visitor also receives `(k | J) mod p` for `k ≤ kmax`, maintained
/// incrementally along the enumeration.
pub fn for_each_multiset(
    group: &Group,
    length: usize,
    zero_sum_only: bool,
    track: Option<(usize, u64)>,
    mut visit: impl FnMut(&[usize], &[u32]),
) {
    let n = group.order() as usize;
    let (kmax, p) = track.map_or((0, 1), |(k, p)| (k.min(length), p as u32));
    let mut walk = Walk {
        n,
        length,
        zero_sum_only,
        tracking: track.is_some(),
        kmax,
        p,
        add: group.cayley_table(),
        neg: group.neg_table(),
        tables: vec![vec![0u32; (kmax + 1) * n]; length + 1],
        tuple: Vec::with_capacity(length),
    };
    walk.tables[0][0] = 1 % p;
    walk.descend(0, 0, &mut visit);
}

struct Walk {
    n: usize,
    length: usize,
    zero_sum_only: bool,
    tracking: bool,
    kmax: usize,
    p: u32,
    add: Vec<u32>,
    neg: Vec<u32>,
    tables: Vec<Vec<u32>>,
    tuple: Vec<usize>,
}

impl Walk {
    fn descend(&mut self, lo: usize, sum: usize, visit: &mut impl FnMut(&[usize], &[u32])) {
        let depth = self.tuple.len();
        if depth == self.length {
            visit(&self.tuple, &self.tables[depth]);
            return;
        }
        let range = if self.zero_sum_only && depth + 1 == self.length {
            let x = self.neg[sum] as usize;
            if x < lo {
                return;
            }
            x..x + 1
        } else {
            lo..self.n
        };
        for x in range {
            self.push(depth, x);
            self.tuple.push(x);
            let next = self.add[sum * self.n + x] as usize;
            self.descend(x, next, visit);
            self.tuple.pop();
        }
    }

    /// `tables[depth + 1]` = `tables[depth]` with one more copy of `x`.
    fn push(&mut self, depth: usize, x: usize) {
        if !self.tracking {
            return;
        }
        let n = self.n;
        let (lo, hi) = self.tables.split_at_mut(depth + 1);
        let (src, dst) = (&lo[depth], &mut hi[0]);
        dst.copy_from_slice(src);
        for k in 1..=self.kmax.min(depth + 1) {
            let (s, d) = (&src[(k - 1) * n..k * n], &mut dst[k * n..(k + 1) * n]);
            for (h, &c) in s.iter().enumerate() {
                if c != 0 {
                    let t = self.add[h * n + x] as usize;
                    d[t] = (d[t] + c) % self.p;
                }
            }
        }
    }
}

/// A uniformly random multiset of `length` elements (stars and bars).
pub fn random_multiset(group: &Group, length: usize, rng: &mut ChaCha8Rng) -> Seq {
    let n = group.order() as usize;
    let mut bars = sample(rng, length + n - 1, n - 1).into_vec();
    bars.sort_unstable();
    let mut tuple = Vec::with_capacity(length);
    let (mut elem, mut pos) = (0usize, 0usize);
    for b in bars.into_iter().chain(std::iter::once(length + n - 1)) {
        while pos < b {
            tuple.push(elem);
            pos += 1;
        }
        elem += 1;
        pos = b + 1;
    }
    Seq::from_indices(group, &tuple)
}

/// A random zero-sum sequence: a uniform multiset of `length − 1` elements
/// completed by the element cancelling its sum.
pub fn random_zero_sum(group: &Group, length: usize, rng: &mut ChaCha8Rng) -> Seq {
    assert!(length >= 1);
    let head = random_multiset(group, length - 1, rng);
    let last = group.neg(&head.total_sum()).expect("same group");
    head.join(&Seq::from_pairs(group, &[(last, 1)]).expect("valid")).expect("same group")
}

fn sequences(
    group: &Group,
    length: usize,
    zero_sum_only: bool,
    sampling: Sampling,
    track: Option<(usize, u64)>,
    mut visit: impl FnMut(&Seq, Option<&[u32]>),
) {
    match sampling {
        Sampling::Exhaustive => {
            let n = group.order() as usize;
            for_each_multiset(group, length, zero_sum_only, track, |tuple, table| {
                let j = Seq::from_indices(group, tuple);
                let zs: Vec<u32> = match track {
                    Some((kmax, _)) => (0..=kmax.min(length)).map(|k| table[k * n]).collect(),
                    None => Vec::new(),
                };
                visit(&j, track.map(|_| zs.as_slice()));
            });
        }
        Sampling::Random { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let j = if zero_sum_only {
                    random_zero_sum(group, length, &mut rng)
                } else {
                    random_multiset(group, length, &mut rng)
                };
                visit(&j, None);
            }
        }
    }
}

/// Checks `identity` on all (or sampled) sequences of `length` over
/// `(Z/p)^rank`.
pub fn run_identity(identity: Identity, p: u64, length: usize, sampling: Sampling) -> Result<CongruenceReport> {
    if !is_prime(p) {
        return Err(Error::Hypothesis(format!("p = {p} is not prime")));
    }
    if !identity.lengths(p).contains(&length) {
        return Err(Error::Hypothesis(format!("{identity} does not cover length {length} for p = {p}")));
    }
    let group = Group::uniform(p, identity.rank());
    let terms = identity.terms(p);
    let kmax = identity.kmax(p);
    let mut rep = CongruenceReport::new(identity.id(), p, identity.rank(), length, sampling, identity.claimed_for(p));
    sequences(&group, length, false, sampling, Some((kmax, p)), |j, zs| {
        let r = match zs {
            Some(zs) => combine(&terms, p, |k| zs.get(k).copied().unwrap_or(0) as u64),
            None => residue(j, identity, p),
        };
        if rep.cross_checked < EXACT_CROSS_CHECKS {
            rep.cross_checked += 1;
            if residue_exact(j, identity, p) != r {
                rep.cross_check_mismatches += 1;
            }
        }
        rep.sequences_checked += 1;
        *rep.residues.entry(r).or_default() += 1;
        if r != 0 {
            rep.fail(|| j.clone());
        }
    });
    Ok(rep)
}

/// Runs `identity` on every length it covers.
pub fn run_suite(identity: Identity, p: u64, sampling: Sampling) -> Result<Vec<CongruenceReport>> {
    identity.lengths(p).into_iter().map(|len| run_identity(identity, p, len, sampling)).collect()
}

/// Every rank-`d` identity: the full shape and the `d` shift shapes.
pub fn general_identities(d: usize) -> Vec<Identity> {
    std::iter::once(Identity::CwGeneralFull { d }).chain((1..=d).map(|m| Identity::CwGeneralShift { d, m })).collect()
}

/// Zero-sum sequences of length `4p` over `(Z/p)^3`: the `p`/`2p`
/// dichotomy and the complement identity.
pub fn dichotomy_suite(p: u64, sampling: Sampling) -> Result<CongruenceReport> {
    if !is_prime(p) {
        return Err(Error::Hypothesis(format!("p = {p} is not prime")));
    }
    let group = Group::uniform(p, 3);
    let length = 4 * p as usize;
    let mut rep = CongruenceReport::new("dichotomy_4p".into(), p, 3, length, sampling, true);
    rep.complement_failures = Some(0);
    let mut err = None;
    sequences(&group, length, true, sampling, None, |j, _| {
        if err.is_some() {
            return;
        }
        match dichotomy_4p(j) {
            Ok(d) => {
                rep.sequences_checked += 1;
                if !d.holds {
                    rep.fail(|| j.clone());
                }
                if !d.complement_holds {
                    *rep.complement_failures.as_mut().expect("set above") += 1;
                }
            }
            Err(e) => err = Some(e),
        }
    });
    err.map_or(Ok(rep), Err)
}

/// Every zero-sum sequence of length `(d+1)p` over `(Z/p)^d` should have a
/// zero-sum subsequence with length in `{p, 2p, …, (d−1)p}`. The first
/// [`EXACT_CROSS_CHECKS`] sequences are re-checked by brute force.
pub fn lset_bound_check(p: u64, d: usize, sampling: Sampling) -> Result<CongruenceReport> {
    if !is_prime(p) || d < 2 {
        return Err(Error::Hypothesis(format!("needs prime p and d >= 2, got p = {p}, d = {d}")));
    }
    let group = Group::uniform(p, d);
    let pu = p as usize;
    let lengths: BTreeSet<usize> = (1..d).map(|i| i * pu).collect();
    let length = (d + 1) * pu;
    let mut rep = CongruenceReport::new("lset_bound".into(), p, d, length, sampling, d <= 3);
    let mut err = None;
    sequences(&group, length, true, sampling, None, |j, _| {
        if err.is_some() {
            return;
        }
        rep.sequences_checked += 1;
        let has = has_zero_sum_in(j, &lengths);
        if rep.cross_checked < EXACT_CROSS_CHECKS {
            let mut brute = false;
            for &k in &lengths {
                match brute_force_count(j, k) {
                    Ok(c) => brute |= !c.is_zero(),
                    Err(e) => {
                        err = Some(e);
                        return;
                    }
                }
            }
            rep.cross_checked += 1;
            if brute != has {
                rep.cross_check_mismatches += 1;
            }
        }
        if !has {
            rep.fail(|| j.clone());
        }
    });
    err.map_or(Ok(rep), Err)
}
