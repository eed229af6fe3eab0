//! Finite abelian groups `Z/n_1 × … × Z/n_d` in fixed coordinates, and the
//! small number-theoretic selectors the bounds are phrased in.
//!
//! Elements are residue vectors. Every group carries a fixed total order on
//! its elements (lexicographic on residues), exposed through dense indices
//! `0..order`; index 0 is always the identity.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    residues: Vec<u64>,
}

impl Element {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn rank(&self) -> usize {
        self.residues.len()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Group {
    moduli: Vec<u64>,
    order: u64,
    exponent: u64,
}

impl Group {
    /// Builds `Z/n_1 × … × Z/n_d`. Moduli are kept in the order given.
    pub fn new(moduli: &[i64]) -> Result<Self> {
        let mut checked = Vec::with_capacity(moduli.len());
        for &n in moduli {
            if n < 1 {
                return Err(Error::InvalidModulus(n));
            }
            checked.push(n as u64);
        }
        Ok(Self::from_moduli(checked))
    }

    pub(crate) fn from_moduli(moduli: Vec<u64>) -> Self {
        debug_assert!(moduli.iter().all(|&n| n >= 1));
        let order = moduli.iter().product();
        let exponent = moduli.iter().fold(1u64, |acc, &n| acc.lcm(&n));
        Group { moduli, order, exponent }
    }

    /// `(Z/n)^d`.
    pub fn uniform(n: u64, d: usize) -> Self {
        assert!(n >= 1, "modulus must be positive");
        Self::from_moduli(vec![n; d])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// True when every coordinate has the same modulus.
    pub fn is_uniform(&self) -> bool {
        self.moduli.windows(2).all(|w| w[0] == w[1])
    }

    pub fn identity(&self) -> Element {
        Element { residues: vec![0; self.rank()] }
    }

    /// Validates a residue vector; every residue must already be reduced.
    pub fn element(&self, residues: &[i64]) -> Result<Element> {
        self.check_rank(residues.len())?;
        let mut out = Vec::with_capacity(residues.len());
        for (coord, (&r, &n)) in residues.iter().zip(&self.moduli).enumerate() {
            if r < 0 || r as u64 >= n {
                return Err(Error::ResidueOutOfRange { coord, residue: r, modulus: n });
            }
            out.push(r as u64);
        }
        Ok(Element { residues: out })
    }

    /// Reduces an arbitrary integer vector into the group.
    pub fn reduce(&self, residues: &[i64]) -> Result<Element> {
        self.check_rank(residues.len())?;
        let residues = residues
            .iter()
            .zip(&self.moduli)
            .map(|(&r, &n)| r.rem_euclid(n as i64) as u64)
            .collect();
        Ok(Element { residues })
    }

    pub fn contains(&self, a: &Element) -> bool {
        a.rank() == self.rank() && a.residues.iter().zip(&self.moduli).all(|(&r, &n)| r < n)
    }

    fn check_rank(&self, got: usize) -> Result<()> {
        if got != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got });
        }
        Ok(())
    }

    fn check(&self, a: &Element) -> Result<()> {
        self.check_rank(a.rank())?;
        for (coord, (&r, &n)) in a.residues.iter().zip(&self.moduli).enumerate() {
            if r >= n {
                return Err(Error::ResidueOutOfRange { coord, residue: r as i64, modulus: n });
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &Element, b: &Element) -> Element {
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.moduli)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        Element { residues }
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(self.neg_unchecked(a))
    }

    pub(crate) fn neg_unchecked(&self, a: &Element) -> Element {
        let residues = a.residues.iter().zip(&self.moduli).map(|(&x, &n)| (n - x) % n).collect();
        Element { residues }
    }

    pub fn scalar_mul(&self, k: i64, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(self.scalar_mul_unchecked(k, a))
    }

    pub(crate) fn scalar_mul_unchecked(&self, k: i64, a: &Element) -> Element {
        let residues = a
            .residues
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &n)| {
                let k = k.rem_euclid(n as i64) as u128;
                ((k * x as u128) % n as u128) as u64
            })
            .collect();
        Element { residues }
    }

    /// Position of `a` in the lexicographic element order.
    pub fn index_of(&self, a: &Element) -> usize {
        debug_assert!(self.contains(a));
        a.residues.iter().zip(&self.moduli).fold(0usize, |acc, (&r, &n)| acc * n as usize + r as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> Element {
        debug_assert!((idx as u64) < self.order);
        let mut residues = vec![0; self.rank()];
        for (slot, &n) in residues.iter_mut().zip(&self.moduli).rev() {
            *slot = (idx % n as usize) as u64;
            idx /= n as usize;
        }
        Element { residues }
    }

    /// All elements in the fixed lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order as usize).map(move |i| self.element_at(i))
    }

    /// Addition table on element indices: `table[a * order + b] = index(a + b)`.
    pub(crate) fn cayley_table(&self) -> Vec<u32> {
        let n = self.order as usize;
        let elems: Vec<Element> = self.elements().collect();
        let mut table = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                table.push(self.index_of(&self.add_unchecked(a, b)) as u32);
            }
        }
        table
    }

    /// Negation on element indices.
    pub(crate) fn neg_table(&self) -> Vec<u32> {
        self.elements().map(|a| self.index_of(&self.neg_unchecked(&a)) as u32).collect()
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, n) in self.moduli.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "]")
    }
}

/// Least `ℓ ≥ floor` with `ℓ ∤ n`.
pub fn smallest_ell(n: u64, floor: u64) -> u64 {
    assert!(n >= 1);
    let mut ell = floor.max(1);
    while n.is_multiple_of(ell) {
        ell += 1;
    }
    ell
}

/// Least `ℓ ≥ 4` dividing neither `n1` nor `n2`, for `n1 | n2`.
pub fn smallest_ell_pair(n1: u64, n2: u64) -> Result<u64> {
    if n1 == 0 || !n2.is_multiple_of(n1) {
        return Err(Error::NotDivisible { n1, n2 });
    }
    let mut ell = 4;
    while n1.is_multiple_of(ell) || n2.is_multiple_of(ell) {
        ell += 1;
    }
    Ok(ell)
}

/// Least `k ≥ 3` with `gcd(n, k) = 1`.
pub fn smallest_coprime_k(n: u64) -> u64 {
    assert!(n >= 1);
    let mut k = 3;
    while n.gcd(&k) != 1 {
        k += 1;
    }
    k
}

/// Writes `n = p·m` with `p` the largest prime factor of `n`.
pub fn split_factor(n: u64) -> Result<(u64, u64)> {
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    let p = largest_prime_factor(n);
    Ok((p, n / p))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn largest_prime_factor(mut n: u64) -> u64 {
    let mut largest = 1;
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            largest = d;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        largest = n;
    }
    largest
}

/// Inverse of `a` modulo `m`, as the least non-negative residue.
pub fn mod_inverse(a: i64, m: u64) -> Result<u64> {
    let mi = m as i64;
    let a = a.rem_euclid(mi);
    let ext = a.extended_gcd(&mi);
    if ext.gcd != 1 {
        return Err(Error::NoInverse { a: a as u64, m });
    }
    Ok(ext.x.rem_euclid(mi) as u64)
}

/// Least non-negative `x` with `a·x ≡ b (mod m)`, if one exists.
pub fn solve_linear_congruence(a: i64, b: i64, m: u64) -> Option<u64> {
    let mi = m as i64;
    let a = a.rem_euclid(mi);
    let b = b.rem_euclid(mi);
    let g = a.gcd(&mi);
    if b % g != 0 {
        return None;
    }
    let m_red = mi / g;
    if m_red == 1 {
        return Some(0);
    }
    let inv = mod_inverse(a / g, m_red as u64).ok()? as i64;
    Some(((b / g) * inv).rem_euclid(m_red) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn order_and_exponent() {
        let g = Group::new(&[2, 2]).unwrap();
        assert_eq!((g.order(), g.exponent()), (4, 2));
        let g = Group::new(&[2, 4]).unwrap();
        assert_eq!((g.order(), g.exponent()), (8, 4));
        let g = Group::new(&[3, 3, 3]).unwrap();
        assert_eq!((g.order(), g.exponent()), (27, 3));
    }

    #[test]
    fn rejects_non_positive_moduli() {
        assert_eq!(Group::new(&[2, 0]), Err(Error::InvalidModulus(0)));
        assert_eq!(Group::new(&[-3]), Err(Error::InvalidModulus(-3)));
    }

    #[test]
    fn arithmetic_examples() {
        let g = Group::new(&[2, 2]).unwrap();
        let a = g.element(&[1, 1]).unwrap();
        assert_eq!(g.add(&a, &a).unwrap(), g.identity());

        let g = Group::new(&[3, 3]).unwrap();
        assert_eq!(g.neg(&g.element(&[1, 2]).unwrap()).unwrap(), g.element(&[2, 1]).unwrap());

        let g = Group::new(&[2, 4]).unwrap();
        let a = g.element(&[1, 3]).unwrap();
        assert_eq!(g.scalar_mul(4, &a).unwrap(), g.identity());
    }

    #[test]
    fn dimension_mismatch() {
        let g = Group::new(&[2, 2]).unwrap();
        let h = Group::new(&[2, 2, 2]).unwrap();
        let a = h.identity();
        assert!(matches!(g.add(&g.identity(), &a), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(g.element(&[2, 0]), Err(Error::ResidueOutOfRange { .. })));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g = Group::new(&[2, 3]).unwrap();
        let elems: Vec<_> = g.elements().collect();
        assert_eq!(elems.len(), 6);
        assert!(elems.windows(2).all(|w| w[0] < w[1]));
        for (i, e) in elems.iter().enumerate() {
            assert_eq!(g.index_of(e), i);
        }
        assert_eq!(elems[0], g.identity());
    }

    #[test]
    fn selectors() {
        assert_eq!(smallest_ell(2, 4), 4);
        assert_eq!(smallest_ell(12, 4), 5);
        assert_eq!(smallest_ell(4, 4), 5);

        assert_eq!(smallest_ell_pair(2, 4).unwrap(), 5);
        assert_eq!(smallest_ell_pair(2, 6).unwrap(), 4);
        assert_eq!(smallest_ell_pair(3, 3).unwrap(), 4);
        assert_eq!(smallest_ell_pair(4, 6), Err(Error::NotDivisible { n1: 4, n2: 6 }));

        for p in [2, 5, 7, 11, 13] {
            assert_eq!(smallest_coprime_k(p), 3);
        }
        assert_eq!(smallest_coprime_k(6), 5);
        assert_eq!(smallest_coprime_k(3), 4);

        assert_eq!(split_factor(6).unwrap(), (3, 2));
        assert_eq!(split_factor(7).unwrap(), (7, 1));
        assert_eq!(split_factor(12).unwrap(), (3, 4));
        assert_eq!(split_factor(1), Err(Error::TooSmall(1)));
    }

    #[test]
    fn selector_minimality() {
        for n in 1..=1000u64 {
            let ell = smallest_ell(n, 4);
            assert!(n % ell != 0);
            assert!((4..ell).all(|j| n % j == 0));

            let k = smallest_coprime_k(n);
            assert_eq!(n.gcd(&k), 1);
            assert!((3..k).all(|j| n.gcd(&j) != 1));
        }
    }

    #[test]
    fn congruence_solver() {
        // 3·(−r) ≡ 1 (mod 2)
        assert_eq!(solve_linear_congruence(-3, 1, 2), Some(1));
        // −5·s ≡ 1 (mod 4)
        assert_eq!(solve_linear_congruence(-5, 1, 4), Some(3));
        assert_eq!(solve_linear_congruence(2, 1, 4), None);
        assert_eq!(solve_linear_congruence(-4, 2, 6), Some(1));
        assert_eq!(mod_inverse(3, 7).unwrap(), 5);
    }

    fn group_and_three() -> impl Strategy<Value = (Group, [Vec<i64>; 3], i64)> {
        prop::collection::vec(1i64..7, 1..4).prop_flat_map(|moduli| {
            let coord = |m: &Vec<i64>| m.iter().map(|&n| 0..n).collect::<Vec<_>>();
            let g = Group::new(&moduli).unwrap();
            (Just(g), [coord(&moduli), coord(&moduli), coord(&moduli)], -20i64..20)
        })
    }

    proptest! {
        #[test]
        fn group_axioms((g, [a, b, c], k) in group_and_three()) {
            let a = g.element(&a).unwrap();
            let b = g.element(&b).unwrap();
            let c = g.element(&c).unwrap();
            let ab = g.add(&a, &b).unwrap();
            prop_assert_eq!(&ab, &g.add(&b, &a).unwrap());
            prop_assert_eq!(
                g.add(&ab, &c).unwrap(),
                g.add(&a, &g.add(&b, &c).unwrap()).unwrap()
            );
            prop_assert_eq!(g.add(&a, &g.identity()).unwrap(), a.clone());
            prop_assert_eq!(g.add(&a, &g.neg(&a).unwrap()).unwrap(), g.identity());
            let e = g.exponent() as i64;
            prop_assert_eq!(g.scalar_mul(k * e, &a).unwrap(), g.identity());
            prop_assert_eq!(g.element_at(g.index_of(&a)), a);
        }
    }
}
