//! Exact counts `(k | J)`: the number of length-`k` subsequences of `J`
//! (chosen by position, so repeated entries are distinguishable) that sum to
//! zero.
//!
//! The table is built by convolving, one distinct element `g` of multiplicity
//! `m` at a time, with `Σ_j C(m, j) x^j [j·g]`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::seq::Seq;

/// Row `k`, column `g`: number of length-`k` subsequences with sum `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    group: Group,
    kmax: usize,
    len: usize,
    rows: Vec<Vec<BigUint>>,
}

impl CountTable {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    /// Length of the sequence the table was built from.
    pub fn seq_len(&self) -> usize {
        self.len
    }

    pub fn get(&self, k: usize, g: usize) -> &BigUint {
        &self.rows[k][g]
    }

    pub fn row(&self, k: usize) -> &[BigUint] {
        &self.rows[k]
    }

    /// `(k | J)`.
    pub fn zero_sum(&self, k: usize) -> &BigUint {
        &self.rows[k][0]
    }
}

fn check_k(k: usize, len: usize) -> Result<()> {
    if k > len {
        return Err(Error::LengthOutOfRange { k, len });
    }
    Ok(())
}

/// Pascal row `C(m, 0..=m)`.
pub(crate) fn pascal_row(m: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigUint::one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigUint::one());
        row = next;
    }
    row
}

/// Builds the exact table for lengths `0..=kmax`.
pub fn count_table(j: &Seq, kmax: usize) -> Result<CountTable> {
    check_k(kmax, j.len())?;
    let group = j.group().clone();
    let n = group.order() as usize;
    let add = group.cayley_table();
    let mut rows = vec![vec![BigUint::zero(); n]; kmax + 1];
    rows[0][0] = BigUint::one();

    for (gi, m) in j.index_pairs() {
        let m = m as usize;
        let binom = pascal_row(m);
        // shifts[j] = index of j·g
        let mut shifts = vec![0usize; m + 1];
        for t in 1..=m {
            shifts[t] = add[shifts[t - 1] * n + gi] as usize;
        }
        let mut next = vec![vec![BigUint::zero(); n]; kmax + 1];
        for (k, row) in rows.iter().enumerate() {
            for (h, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for t in 0..=m.min(kmax - k) {
                    let target = add[h * n + shifts[t]] as usize;
                    next[k + t][target] += c * &binom[t];
                }
            }
        }
        rows = next;
    }
    Ok(CountTable { group, kmax, len: j.len(), rows })
}

/// `(k | J)`.
pub fn count_fixed_length(j: &Seq, k: usize) -> Result<BigUint> {
    check_k(k, j.len())?;
    Ok(count_table(j, k)?.zero_sum(k).clone())
}

/// `(k | J)` for every `k` in `0..=|J|`.
pub fn zero_sum_counts(j: &Seq) -> Vec<BigUint> {
    let table = count_table(j, j.len()).expect("kmax = len is in range");
    (0..=j.len()).map(|k| table.zero_sum(k).clone()).collect()
}

/// True iff `(k | J) > 0` for some `k` in `lengths`. Lengths above `|J|` are
/// ignored.
pub fn has_zero_sum_in(j: &Seq, lengths: &BTreeSet<usize>) -> bool {
    let Some(&top) = lengths.iter().filter(|&&k| k <= j.len()).max() else {
        return false;
    };
    let reach = reachability(j, top);
    lengths.iter().any(|&k| k <= top && reach[k][0])
}

fn reachability(j: &Seq, kmax: usize) -> Vec<Vec<bool>> {
    let layers = suffix_layers(j, kmax);
    layers.into_iter().next().expect("at least one layer")
}

/// Boolean reachability tables built from the last distinct element back to
/// the first; `layers[i]` covers elements `i..`.
fn suffix_layers(j: &Seq, kmax: usize) -> Vec<Vec<Vec<bool>>> {
    let group = j.group();
    let n = group.order() as usize;
    let add = group.cayley_table();
    let pairs = j.index_pairs();
    let mut base = vec![vec![false; n]; kmax + 1];
    base[0][0] = true;
    let mut layers = vec![base];
    for &(gi, m) in pairs.iter().rev() {
        let prev = layers.last().expect("non-empty");
        let mut next = prev.clone();
        for k in 0..=kmax {
            for (h, _) in prev[k].iter().enumerate().filter(|(_, &reached)| reached) {
                let mut s = h;
                for t in 1..=(m as usize).min(kmax - k) {
                    s = add[s * n + gi] as usize;
                    next[k + t][s] = true;
                }
            }
        }
        layers.push(next);
    }
    layers.reverse();
    layers
}

/// A zero-sum subsequence of a prescribed length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub sub: Seq,
    pub target_length: usize,
}

/// Finds a zero-sum subsequence of length `k`, if one exists.
///
/// Deterministic: smaller elements are decided first and take the largest
/// usable multiplicity.
pub fn find_zero_sum_subsequence(j: &Seq, k: usize) -> Option<Witness> {
    if k > j.len() {
        return None;
    }
    let layers = suffix_layers(j, k);
    if !layers[0][k][0] {
        return None;
    }
    let group = j.group();
    let n = group.order() as usize;
    let add = group.cayley_table();
    let neg = group.neg_table();
    let pairs = j.index_pairs();
    let mut picked = Vec::new();
    let (mut need_k, mut need_sum) = (k, 0usize);
    for (i, &(gi, m)) in pairs.iter().enumerate() {
        let rest = &layers[i + 1];
        let mut found = None;
        for t in (0..=(m as usize).min(need_k)).rev() {
            // remaining sum after taking t copies of g: need_sum − t·g
            let mut s = need_sum;
            for _ in 0..t {
                s = add[s * n + neg[gi] as usize] as usize;
            }
            if rest[need_k - t][s] {
                found = Some((t, s));
                break;
            }
        }
        let (t, s) = found.expect("reachability guarantees a choice");
        if t > 0 {
            picked.push((group.element_at(gi), t as i64));
        }
        need_k -= t;
        need_sum = s;
    }
    debug_assert_eq!((need_k, need_sum), (0, 0));
    let sub = Seq::from_pairs(group, &picked).expect("picked from J");
    Some(Witness { sub, target_length: k })
}

/// Largest number of multiplicity vectors the oracle will enumerate.
pub const ORACLE_LIMIT: u128 = 10_000_000;

/// `(k | J)` by direct enumeration of multiplicity vectors.
///
/// Shares nothing with [`count_table`]: sums are formed with element
/// arithmetic and binomials with the multiplicative formula.
pub fn brute_force_count(j: &Seq, k: usize) -> Result<BigUint> {
    check_k(k, j.len())?;
    let combos: u128 = j.entries().map(|(_, m)| m as u128 + 1).product();
    if combos > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge { combos, limit: ORACLE_LIMIT });
    }
    let group = j.group();
    let entries: Vec<_> = j.entries().map(|(e, m)| (e.clone(), m)).collect();
    let mut choice = vec![0u64; entries.len()];
    let mut total = BigUint::zero();
    loop {
        let size: u64 = choice.iter().sum();
        if size as usize == k {
            let mut sum = group.identity();
            let mut weight = BigUint::one();
            for ((e, m), &c) in entries.iter().zip(&choice) {
                sum = group.add(&sum, &group.scalar_mul(c as i64, e)?)?;
                weight *= binomial(*m, c);
            }
            if sum == group.identity() {
                total += weight;
            }
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == entries.len() {
                return Ok(total);
            }
            if choice[pos] < entries[pos].1 {
                choice[pos] += 1;
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// `C(n, k)` by the multiplicative formula.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Counts reduced modulo a prime `p`; same recurrence as [`count_table`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModCountTable {
    p: u64,
    rows: Vec<Vec<u64>>,
}

impl ModCountTable {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// `(k | J) mod p`.
    pub fn zero_sum(&self, k: usize) -> u64 {
        self.rows[k][0]
    }
}

pub fn count_table_mod(j: &Seq, kmax: usize, p: u64) -> Result<ModCountTable> {
    check_k(kmax, j.len())?;
    if p < 2 {
        return Err(Error::TooSmall(p));
    }
    let group = j.group();
    let n = group.order() as usize;
    let add = group.cayley_table();
    let mut rows = vec![vec![0u64; n]; kmax + 1];
    rows[0][0] = 1 % p;
    for (gi, m) in j.index_pairs() {
        // apply the element m times, one copy at a time
        for _ in 0..m {
            for k in (1..=kmax).rev() {
                let (lo, hi) = rows.split_at_mut(k);
                let src = &lo[k - 1];
                let dst = &mut hi[0];
                for h in 0..n {
                    let c = src[h];
                    if c != 0 {
                        let t = add[h * n + gi] as usize;
                        dst[t] = (dst[t] + c) % p;
                    }
                }
            }
        }
    }
    Ok(ModCountTable { p, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn g22() -> Group {
        Group::uniform(2, 2)
    }

    fn four_distinct() -> Seq {
        Seq::from_residues(&g22(), &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)]).unwrap()
    }

    fn no_length_four() -> Seq {
        Seq::from_residues(&g22(), &[(&[1, 1], 3), (&[0, 1], 1), (&[1, 0], 1)]).unwrap()
    }

    #[test]
    fn table_examples() {
        for n in 2..6u64 {
            let g = Group::uniform(n, 2);
            let j = Seq::from_residues(&g, &[(&[0, 0], n)]).unwrap();
            assert_eq!(count_table(&j, n as usize).unwrap().zero_sum(n as usize), &big(1));
        }
        let t = count_table(&four_distinct(), 4).unwrap();
        assert_eq!(t.zero_sum(4), &big(1));
        assert_eq!(t.zero_sum(3), &big(1));
        assert_eq!(t.zero_sum(2), &big(0));
        assert_eq!(count_table(&no_length_four(), 4).unwrap().zero_sum(4), &big(0));
        assert_eq!(count_table(&four_distinct(), 5), Err(Error::LengthOutOfRange { k: 5, len: 4 }));
    }

    #[test]
    fn table_layout() {
        let j = no_length_four();
        let t = count_table(&j, 5).unwrap();
        for k in 0..=5 {
            let row_sum: BigUint = t.row(k).iter().sum();
            assert_eq!(row_sum, binomial(5, k as u64));
        }
        assert_eq!(t.get(0, 0), &big(1));
        assert!(t.row(0)[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn fixed_length_examples() {
        let j = four_distinct();
        assert_eq!(count_fixed_length(&j, 0).unwrap(), big(1));
        assert_eq!(count_fixed_length(&j, 4).unwrap(), big(j.is_zero_sum() as u64));
        let not_zero = Seq::from_residues(&g22(), &[(&[1, 0], 2), (&[0, 1], 1)]).unwrap();
        assert_eq!(count_fixed_length(&not_zero, 3).unwrap(), big(0));
        let zeros = Seq::from_residues(&g22(), &[(&[0, 0], 5)]).unwrap();
        assert_eq!(count_fixed_length(&zeros, 2).unwrap(), big(10));
    }

    #[test]
    fn membership_examples() {
        assert!(has_zero_sum_in(&four_distinct(), &BTreeSet::from([2, 4])));
        assert!(!has_zero_sum_in(&no_length_four(), &BTreeSet::from([4])));
        let no_identity = Seq::from_residues(&g22(), &[(&[1, 0], 2), (&[1, 1], 1)]).unwrap();
        assert!(!has_zero_sum_in(&no_identity, &BTreeSet::from([1])));
        assert!(!has_zero_sum_in(&no_identity, &BTreeSet::from([7])));
    }

    #[test]
    fn witness_examples() {
        let g = g22();
        let zeros = Seq::from_residues(&g, &[(&[0, 0], 3)]).unwrap();
        let w = find_zero_sum_subsequence(&zeros, 2).unwrap();
        assert_eq!(w.sub, Seq::from_residues(&g, &[(&[0, 0], 2)]).unwrap());
        assert!(find_zero_sum_subsequence(&no_length_four(), 4).is_none());
        assert!(find_zero_sum_subsequence(&zeros, 4).is_none());
    }

    #[test]
    fn oracle_examples() {
        let j = four_distinct();
        for k in 0..=4 {
            assert_eq!(brute_force_count(&j, k).unwrap(), count_fixed_length(&j, k).unwrap());
        }
        assert_eq!(brute_force_count(&no_length_four(), 0).unwrap(), big(1));
        let g = g22();
        for e in g.elements() {
            let single = Seq::from_pairs(&g, &[(e.clone(), 1)]).unwrap();
            let want = big((e == g.identity()) as u64);
            assert_eq!(brute_force_count(&single, 1).unwrap(), want);
        }
    }

    #[test]
    fn oracle_guard() {
        let g = Group::uniform(2, 4);
        let idx: Vec<usize> = (0..16).flat_map(|i| std::iter::repeat_n(i, 3)).collect();
        let j = Seq::from_indices(&g, &idx);
        assert!(matches!(brute_force_count(&j, 4), Err(Error::OracleTooLarge { .. })));
    }

    #[test]
    fn binomials_agree() {
        for m in 0..40 {
            let row = pascal_row(m);
            for (k, c) in row.iter().enumerate() {
                assert_eq!(c, &binomial(m as u64, k as u64));
            }
        }
        // C(70, 35) does not fit in 64 bits
        assert!(binomial(70, 35) > BigUint::from(u64::MAX));
    }

    #[test]
    fn random_witnesses_and_mod_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let moduli: Vec<i64> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(2..5)).collect();
            let g = Group::new(&moduli).unwrap();
            let len = rng.gen_range(0..12);
            let idx: Vec<usize> = (0..len).map(|_| rng.gen_range(0..g.order() as usize)).collect();
            let j = Seq::from_indices(&g, &idx);
            let table = count_table(&j, len).unwrap();
            let p = [2u64, 3, 5][rng.gen_range(0..3)];
            let modt = count_table_mod(&j, len, p).unwrap();
            for k in 0..=len {
                let exact = table.zero_sum(k);
                assert_eq!(BigUint::from(modt.zero_sum(k)), exact % p);
                match find_zero_sum_subsequence(&j, k) {
                    Some(w) => {
                        assert!(!exact.is_zero());
                        assert_eq!(w.sub.len(), k);
                        assert!(w.sub.is_zero_sum());
                        assert!(w.sub.is_submultiset_of(&j));
                    }
                    None => assert!(exact.is_zero()),
                }
            }
        }
    }
}
