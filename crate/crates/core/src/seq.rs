//! Sequences over a group, stored as multisets.
//!
//! Text form: `G=[n1,...,nd]; (r1,...,rd):m (s1,...,sd):m ...`. The header is
//! optional when the group is supplied separately (see [`parse_entries`]); an
//! entry without `:m` has multiplicity 1.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{Element, Group};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Seq {
    group: Group,
    mult: BTreeMap<Element, u64>,
    len: usize,
}

impl Seq {
    pub fn empty(group: &Group) -> Self {
        Seq { group: group.clone(), mult: BTreeMap::new(), len: 0 }
    }

    /// Builds a sequence from `(element, multiplicity)` pairs; repeated
    /// elements are merged.
    pub fn from_pairs(group: &Group, entries: &[(Element, i64)]) -> Result<Self> {
        let mut seq = Seq::empty(group);
        for (e, m) in entries {
            if *m < 1 {
                return Err(Error::InvalidMultiplicity(*m));
            }
            if !group.contains(e) {
                return Err(validate_err(group, e));
            }
            seq.insert(e.clone(), *m as u64);
        }
        Ok(seq)
    }

    /// Convenience constructor from raw residue vectors.
    pub fn from_residues(group: &Group, entries: &[(&[i64], u64)]) -> Result<Self> {
        let mut seq = Seq::empty(group);
        for (r, m) in entries {
            if *m == 0 {
                return Err(Error::InvalidMultiplicity(0));
            }
            seq.insert(group.element(r)?, *m);
        }
        Ok(seq)
    }

    /// Builds a sequence from element indices (with repetition).
    pub fn from_indices(group: &Group, indices: &[usize]) -> Self {
        let mut seq = Seq::empty(group);
        for &i in indices {
            seq.insert(group.element_at(i), 1);
        }
        seq
    }

    pub(crate) fn insert(&mut self, e: Element, m: u64) {
        debug_assert!(m >= 1);
        *self.mult.entry(e).or_insert(0) += m;
        self.len += m as usize;
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn multiplicity(&self, e: &Element) -> u64 {
        self.mult.get(e).copied().unwrap_or(0)
    }

    /// Distinct elements with multiplicities, in element order.
    pub fn entries(&self) -> impl Iterator<Item = (&Element, u64)> + '_ {
        self.mult.iter().map(|(e, &m)| (e, m))
    }

    pub fn distinct(&self) -> usize {
        self.mult.len()
    }

    /// `(element index, multiplicity)` pairs in element order.
    pub fn index_pairs(&self) -> Vec<(usize, u64)> {
        self.mult.iter().map(|(e, &m)| (self.group.index_of(e), m)).collect()
    }

    /// Element indices with repetition, non-decreasing.
    pub fn index_tuple(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len);
        for (i, m) in self.index_pairs() {
            out.extend(std::iter::repeat_n(i, m as usize));
        }
        out
    }

    /// Sorted multiplicity vector, largest first.
    pub fn multiplicity_profile(&self) -> Vec<u64> {
        let mut p: Vec<u64> = self.mult.values().copied().collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        p
    }

    pub fn total_sum(&self) -> Element {
        self.mult.iter().fold(self.group.identity(), |acc, (e, &m)| {
            let term = self.group.scalar_mul_unchecked(m as i64, e);
            self.group.add_unchecked(&acc, &term)
        })
    }

    pub fn is_zero_sum(&self) -> bool {
        self.total_sum() == self.group.identity()
    }

    /// Adds `c` to every entry.
    pub fn translate(&self, c: &Element) -> Result<Seq> {
        if !self.group.contains(c) {
            return Err(validate_err(&self.group, c));
        }
        Ok(self.map_elements(&self.group, |e| self.group.add_unchecked(e, c)))
    }

    /// Reduces every entry modulo `d`, landing in `(Z/d)^rank`.
    pub fn project(&self, d: u64) -> Result<Seq> {
        if d == 0 || self.group.moduli().iter().any(|&n| n % d != 0) {
            return Err(Error::BadProjection { d });
        }
        let quotient = Group::uniform(d, self.group.rank());
        Ok(self.map_elements(&quotient, |e| {
            let r: Vec<i64> = e.residues().iter().map(|&x| (x % d) as i64).collect();
            quotient.element(&r).expect("reduced residues are in range")
        }))
    }

    pub(crate) fn map_elements(&self, target: &Group, f: impl Fn(&Element) -> Element) -> Seq {
        let mut out = Seq::empty(target);
        for (e, &m) in &self.mult {
            out.insert(f(e), m);
        }
        out
    }

    /// True when `self` is a sub-multiset of `other`.
    pub fn is_submultiset_of(&self, other: &Seq) -> bool {
        self.group == other.group && self.mult.iter().all(|(e, &m)| other.multiplicity(e) >= m)
    }

    /// Removes the sub-multiset `sub`; fails if it is not contained.
    pub fn remove(&self, sub: &Seq) -> Result<Seq> {
        if self.group != sub.group {
            return Err(Error::GroupMismatch);
        }
        if !sub.is_submultiset_of(self) {
            return Err(Error::InvalidArgument("not a sub-multiset".into()));
        }
        let mut out = Seq::empty(&self.group);
        for (e, &m) in &self.mult {
            let left = m - sub.multiplicity(e);
            if left > 0 {
                out.insert(e.clone(), left);
            }
        }
        Ok(out)
    }

    /// Multiset union.
    pub fn join(&self, other: &Seq) -> Result<Seq> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let mut out = self.clone();
        for (e, &m) in &other.mult {
            out.insert(e.clone(), m);
        }
        Ok(out)
    }

    /// Entry list without the group header, e.g. `(0,0):3 (1,0):1`.
    pub fn entries_text(&self) -> String {
        let parts: Vec<String> = self.mult.iter().map(|(e, m)| format!("{e}:{m}")).collect();
        parts.join(" ")
    }
}

fn validate_err(group: &Group, e: &Element) -> Error {
    let raw: Vec<i64> = e.residues().iter().map(|&r| r as i64).collect();
    group.element(&raw).err().unwrap_or(Error::GroupMismatch)
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G={};", self.group)?;
        for (e, m) in &self.mult {
            write!(f, " {e}:{m}")?;
        }
        Ok(())
    }
}

impl Serialize for Seq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Seq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s);
        p.skip_ws();
        p.expect('G')?;
        p.skip_ws();
        p.expect('=')?;
        p.skip_ws();
        let moduli = p.int_list('[', ']')?;
        let group = Group::new(&moduli).map_err(|e| p.error(e.to_string()))?;
        p.skip_ws();
        p.expect(';')?;
        p.entries(&group)
    }
}

/// Parses a header-less entry list against a known group.
pub fn parse_entries(group: &Group, text: &str) -> Result<Seq> {
    Parser::new(text).entries(group)
}

/// Parses a comma-separated modulus list such as `2,4` or `[2,4]`.
pub fn parse_group(text: &str) -> Result<Group> {
    let mut p = Parser::new(text);
    p.skip_ws();
    let moduli = if p.peek() == Some('[') {
        p.int_list('[', ']')?
    } else {
        p.bare_int_list()?
    };
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error(format!("unexpected `{c}`")));
    }
    Group::new(&moduli).map_err(|e| p.error(e.to_string()))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Parser { chars: src.chars().collect(), pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error(&self, message: String) -> Error {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..self.pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        Error::Parse { line, column, message }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("expected an integer".into())
        })
    }

    fn int_list(&mut self, open: char, close: char) -> Result<Vec<i64>> {
        self.expect(open)?;
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some(close) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.error(format!("expected `,` or `{close}`"))),
            }
        }
    }

    fn bare_int_list(&mut self) -> Result<Vec<i64>> {
        let mut out = vec![self.int()?];
        loop {
            self.skip_ws();
            if self.peek() == Some(',') {
                self.pos += 1;
                out.push(self.int()?);
            } else {
                return Ok(out);
            }
        }
    }

    fn entries(&mut self, group: &Group) -> Result<Seq> {
        let mut seq = Seq::empty(group);
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(seq);
            }
            let at = self.pos;
            let residues = self.int_list('(', ')')?;
            let elem = group.element(&residues).map_err(|e| {
                self.pos = at;
                self.error(e.to_string())
            })?;
            let mut m = 1;
            if self.peek() == Some(':') {
                self.pos += 1;
                let at = self.pos;
                m = self.int()?;
                if m < 1 {
                    self.pos = at;
                    return Err(self.error(Error::InvalidMultiplicity(m).to_string()));
                }
            }
            seq.insert(elem, m as u64);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g22() -> Group {
        Group::new(&[2, 2]).unwrap()
    }

    fn el(g: &Group, r: &[i64]) -> Element {
        g.element(r).unwrap()
    }

    #[test]
    fn from_pairs_examples() {
        let g = g22();
        let j = Seq::from_pairs(&g, &[(el(&g, &[0, 0]), 3), (el(&g, &[1, 0]), 1)]).unwrap();
        assert_eq!(j.len(), 4);

        let j = Seq::from_pairs(&g, &[(el(&g, &[1, 1]), 1), (el(&g, &[1, 1]), 2)]).unwrap();
        assert_eq!(j.distinct(), 1);
        assert_eq!(j.multiplicity(&el(&g, &[1, 1])), 3);

        let j = Seq::from_pairs(&g, &[]).unwrap();
        assert_eq!(j.len(), 0);
        assert_eq!(j.total_sum(), g.identity());
        assert!(j.is_zero_sum());

        assert_eq!(
            Seq::from_pairs(&g, &[(el(&g, &[1, 1]), 0)]),
            Err(Error::InvalidMultiplicity(0))
        );
        let h = Group::new(&[3, 3]).unwrap();
        assert!(Seq::from_pairs(&g, &[(el(&h, &[2, 0]), 1)]).is_err());
    }

    #[test]
    fn zero_sum_examples() {
        let g = g22();
        let j = Seq::from_residues(&g, &[(&[1, 1], 2)]).unwrap();
        assert!(j.is_zero_sum());
        let j = Seq::from_residues(&g, &[(&[1, 1], 3), (&[0, 1], 1), (&[1, 0], 1)]).unwrap();
        assert!(j.is_zero_sum());
        let j = Seq::from_residues(&g, &[(&[1, 0], 1)]).unwrap();
        assert!(!j.is_zero_sum());
    }

    #[test]
    fn translate_examples() {
        let g = g22();
        let j = Seq::from_residues(&g, &[(&[0, 0], 3), (&[1, 0], 1), (&[0, 1], 1)]).unwrap();
        let shifted = j.translate(&el(&g, &[1, 1])).unwrap();
        let want = Seq::from_residues(&g, &[(&[1, 1], 3), (&[0, 1], 1), (&[1, 0], 1)]).unwrap();
        assert_eq!(shifted, want);
        assert_eq!(j.translate(&g.identity()).unwrap(), j);
    }

    #[test]
    fn project_examples() {
        let g = Group::new(&[4, 4]).unwrap();
        let j = Seq::from_residues(&g, &[(&[2, 3], 1)]).unwrap();
        let q = j.project(2).unwrap();
        assert_eq!(q, Seq::from_residues(&g22(), &[(&[0, 1], 1)]).unwrap());

        let j = Seq::from_residues(&g, &[(&[2, 3], 2), (&[1, 1], 1)]).unwrap();
        let trivial = j.project(1).unwrap();
        assert_eq!(trivial.len(), 3);
        assert_eq!(trivial.distinct(), 1);

        assert_eq!(j.project(3), Err(Error::BadProjection { d: 3 }));
    }

    #[test]
    fn text_round_trip() {
        let g = Group::new(&[3, 3]).unwrap();
        let j = Seq::from_residues(&g, &[(&[0, 0], 3), (&[1, 2], 1), (&[2, 0], 2)]).unwrap();
        let text = j.to_string();
        assert_eq!(text, "G=[3,3]; (0,0):3 (1,2):1 (2,0):2");
        assert_eq!(text.parse::<Seq>().unwrap(), j);
        assert_eq!(parse_entries(&g, "(0,0):3 (1,2) (2,0):1 (2,0)").unwrap(), j);
    }

    #[test]
    fn parse_errors_carry_position() {
        let g = g22();
        match parse_entries(&g, "(0,0):2\n  (2,0)") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_entries(&g, "(0,0):0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_entries(&g, "(0,0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_group("2,x"), Err(Error::Parse { .. })));
        assert_eq!(parse_group("2, 4").unwrap(), Group::new(&[2, 4]).unwrap());
        assert_eq!(parse_group("[3,3]").unwrap(), Group::new(&[3, 3]).unwrap());
    }

    #[test]
    fn remove_and_join() {
        let g = g22();
        let j = Seq::from_residues(&g, &[(&[0, 0], 3), (&[1, 0], 1)]).unwrap();
        let sub = Seq::from_residues(&g, &[(&[0, 0], 2)]).unwrap();
        let rest = j.remove(&sub).unwrap();
        assert_eq!(rest.len(), 2);
        assert_eq!(rest.join(&sub).unwrap(), j);
        assert!(j.remove(&Seq::from_residues(&g, &[(&[1, 1], 1)]).unwrap()).is_err());
    }

    pub(crate) fn arb_seq() -> impl Strategy<Value = Seq> {
        prop::collection::vec(1i64..6, 1..3).prop_flat_map(|moduli| {
            let g = Group::new(&moduli).unwrap();
            let order = g.order() as usize;
            prop::collection::vec(0..order, 0..10).prop_map(move |idx| Seq::from_indices(&g, &idx))
        })
    }

    proptest! {
        #[test]
        fn text_form_reparses(j in arb_seq()) {
            prop_assert_eq!(j.to_string().parse::<Seq>().unwrap(), j);
        }

        #[test]
        fn translation_shifts_sum(j in arb_seq(), c in 0usize..1000) {
            let g = j.group().clone();
            let c = g.element_at(c % g.order() as usize);
            let t = j.translate(&c).unwrap();
            prop_assert_eq!(t.len(), j.len());
            prop_assert_eq!(t.multiplicity_profile(), j.multiplicity_profile());
            let shift = g.scalar_mul(j.len() as i64, &c).unwrap();
            prop_assert_eq!(t.total_sum(), g.add(&j.total_sum(), &shift).unwrap());
            prop_assert_eq!(t.translate(&g.neg(&c).unwrap()).unwrap(), j);
        }

        #[test]
        fn projection_is_homomorphic(j in arb_seq()) {
            let g = j.group();
            let d = g.moduli().iter().fold(0u64, |acc, &n| num_integer::gcd(acc, n));
            for dd in (1..=d).filter(|x| d % x == 0) {
                let q = j.project(dd).unwrap();
                prop_assert_eq!(q.len(), j.len());
                let single = Seq::from_pairs(g, &[(j.total_sum(), 1)]).unwrap().project(dd).unwrap();
                prop_assert_eq!(q.total_sum(), single.entries().next().unwrap().0.clone());
            }
        }
    }
}
