//! Extremal sequences: long (zero-sum) sequences with no zero-sum
//! subsequence of a forbidden length.
//!
//! Each zero-sum construction starts from a base sequence whose nonzero part
//! has no nonempty zero-sum subsequence, then shifts every entry by a
//! constant `(r, s)`. The shift changes no count `(k | J)` for `k` a multiple
//! of the exponent, and is chosen so the total becomes zero.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::count::count_table;
use crate::error::{Error, Result};
use crate::group::{smallest_coprime_k, smallest_ell, solve_linear_congruence, Element, Group};
use crate::seq::Seq;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    /// Zero-sum, length `(t+2)n − k` in `(Z/n)^2`, no zero-sum subsequence of length `nt`.
    LowerGcd { n: u64, t: u64 },
    /// Zero-sum, length `3t+2` in `(Z/3)^2`, no zero-sum subsequence of length `3t`.
    P3 { t: u64 },
    /// Length `(t+2)n − 3` in `(Z/n)^2`, no zero-sum subsequence of length `nt`.
    EgzLower { n: u64, t: u64 },
    /// Zero-sum, length `2n2 − ℓ` in `Z/n1 × Z/n2`, no zero-sum subsequence of length `n2`.
    RectLower { n1: u64, n2: u64 },
}

impl ConstructionKind {
    pub fn name(&self) -> &'static str {
        match self {
            ConstructionKind::LowerGcd { .. } => "lower_gcd",
            ConstructionKind::P3 { .. } => "p3",
            ConstructionKind::EgzLower { .. } => "egz_lower",
            ConstructionKind::RectLower { .. } => "rect_lower",
        }
    }

    /// Parses a construction name plus its named parameters.
    pub fn from_name(name: &str, params: &BTreeMap<String, u64>) -> Result<Self> {
        let get = |key: &str| {
            params
                .get(key)
                .copied()
                .ok_or_else(|| Error::InvalidArgument(format!("construction `{name}` needs --{key}")))
        };
        Ok(match name {
            "lower_gcd" => ConstructionKind::LowerGcd { n: get("n")?, t: get("t")? },
            "p3" => ConstructionKind::P3 { t: get("t")? },
            "egz_lower" => ConstructionKind::EgzLower { n: get("n")?, t: get("t")? },
            "rect_lower" => ConstructionKind::RectLower { n1: get("n1")?, n2: get("n2")? },
            other => return Err(Error::UnknownName(other.to_string())),
        })
    }
}

/// What a construction promises about its output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionSpec {
    pub name: String,
    pub params: BTreeMap<String, u64>,
    pub claimed_length: usize,
    pub forbidden_lengths: BTreeSet<usize>,
    pub claims_zero_sum: bool,
    /// Parameters outside the hypotheses the construction was stated under.
    pub hypothesis_notes: Vec<String>,
}

/// A generated sequence together with the data it was built from.
#[derive(Clone, Debug, Serialize)]
pub struct Construction {
    pub spec: ConstructionSpec,
    pub base: Seq,
    pub shift: Element,
    pub seq: Seq,
}

fn uniform2(n: u64) -> Group {
    Group::uniform(n, 2)
}

fn push(entries: &mut Vec<(Element, i64)>, g: &Group, r: [i64; 2], m: i64) {
    if m > 0 {
        entries.push((g.element(&r).expect("basis residues are reduced"), m));
    }
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Hypothesis(msg.into()))
    }
}

pub fn build(kind: ConstructionKind) -> Result<Construction> {
    match kind {
        ConstructionKind::LowerGcd { n, t } => build_lower_gcd(n, t),
        ConstructionKind::P3 { t } => build_p3(t),
        ConstructionKind::EgzLower { n, t } => build_egz_lower(n, t),
        ConstructionKind::RectLower { n1, n2 } => build_rect_lower(n1, n2),
    }
}

fn build_lower_gcd(n: u64, t: u64) -> Result<Construction> {
    require(n >= 2, "lower_gcd needs n >= 2")?;
    require(t >= 1, "lower_gcd needs t >= 1")?;
    let k = smallest_coprime_k(n);
    let g = uniform2(n);
    let (n_i, t_i, k_i) = (n as i64, t as i64, k as i64);
    let mut entries = Vec::new();
    push(&mut entries, &g, [0, 0], t_i * n_i - 1);
    push(&mut entries, &g, [1, 0], n_i - k_i + 2);
    push(&mut entries, &g, [0, 1], n_i - k_i + 2);
    push(&mut entries, &g, [1, 1], k_i - 3);
    let base = Seq::from_pairs(&g, &entries)?;
    // k·(−r) ≡ 1 (mod n), same for s
    let r = solve_linear_congruence(-k_i, 1, n).ok_or(Error::NoInverse { a: k, m: n })?;
    let shift = g.element(&[r as i64, r as i64])?;
    let seq = base.translate(&shift)?;

    let mut notes = Vec::new();
    if k + 1 > n {
        notes.push(format!("k = {k} exceeds n − 1 = {}", n - 1));
    }
    if t < 2 {
        notes.push(format!("t = {t} is below 2"));
    }
    let params = BTreeMap::from([("n".to_string(), n), ("t".to_string(), t), ("k".to_string(), k)]);
    Ok(Construction {
        spec: ConstructionSpec {
            name: "lower_gcd".into(),
            params,
            claimed_length: ((t + 2) * n - k) as usize,
            forbidden_lengths: BTreeSet::from([(n * t) as usize]),
            claims_zero_sum: true,
            hypothesis_notes: notes,
        },
        base,
        shift,
        seq,
    })
}

fn build_p3(t: u64) -> Result<Construction> {
    require(t >= 1, "p3 needs t >= 1")?;
    let g = uniform2(3);
    let mut entries = Vec::new();
    push(&mut entries, &g, [0, 0], 3 * t as i64 - 1);
    push(&mut entries, &g, [1, 0], 1);
    push(&mut entries, &g, [0, 1], 1);
    push(&mut entries, &g, [1, 1], 1);
    let base = Seq::from_pairs(&g, &entries)?;
    let shift = g.element(&[2, 2])?;
    let seq = base.translate(&shift)?;
    let mut notes = Vec::new();
    if t < 2 {
        notes.push(format!("t = {t}: the matching exact value is only stated for t >= 2"));
    }
    Ok(Construction {
        spec: ConstructionSpec {
            name: "p3".into(),
            params: BTreeMap::from([("t".to_string(), t)]),
            claimed_length: (3 * t + 2) as usize,
            forbidden_lengths: BTreeSet::from([(3 * t) as usize]),
            claims_zero_sum: true,
            hypothesis_notes: notes,
        },
        base,
        shift,
        seq,
    })
}

fn build_egz_lower(n: u64, t: u64) -> Result<Construction> {
    require(n >= 2, "egz_lower needs n >= 2")?;
    require(t >= 1, "egz_lower needs t >= 1")?;
    let g = uniform2(n);
    let mut entries = Vec::new();
    push(&mut entries, &g, [0, 0], (t * n) as i64 - 1);
    push(&mut entries, &g, [1, 0], n as i64 - 1);
    push(&mut entries, &g, [0, 1], n as i64 - 1);
    let base = Seq::from_pairs(&g, &entries)?;
    Ok(Construction {
        spec: ConstructionSpec {
            name: "egz_lower".into(),
            params: BTreeMap::from([("n".to_string(), n), ("t".to_string(), t)]),
            claimed_length: ((t + 2) * n - 3) as usize,
            forbidden_lengths: BTreeSet::from([(n * t) as usize]),
            claims_zero_sum: false,
            hypothesis_notes: Vec::new(),
        },
        shift: g.identity(),
        seq: base.clone(),
        base,
    })
}

fn build_rect_lower(n1: u64, n2: u64) -> Result<Construction> {
    require(n1 >= 1 && n2 >= 2, "rect_lower needs n1 >= 1 and n2 >= 2")?;
    if !n2.is_multiple_of(n1) {
        return Err(Error::NotDivisible { n1, n2 });
    }
    let ell = smallest_ell(n2, 4);
    let gcd = num_integer::gcd(ell, n2);
    let g = Group::new(&[n1 as i64, n2 as i64])?;
    let mut entries = Vec::new();
    push(&mut entries, &g, [0, 0], n2 as i64 - ell as i64 + gcd as i64);
    push(&mut entries, &g, [1 % n1 as i64, 1], (n2 - gcd) as i64);
    let base = Seq::from_pairs(&g, &entries)?;
    let unsolvable = || Error::Hypothesis(format!("shift congruence unsolvable for n1={n1}, n2={n2}"));
    let r = solve_linear_congruence(-(ell as i64), gcd as i64, n1).ok_or_else(unsolvable)?;
    let s = solve_linear_congruence(-(ell as i64), gcd as i64, n2).ok_or_else(unsolvable)?;
    let shift = g.element(&[r as i64, s as i64])?;
    let seq = base.translate(&shift)?;
    let params = BTreeMap::from([
        ("n1".to_string(), n1),
        ("n2".to_string(), n2),
        ("ell".to_string(), ell),
        ("g".to_string(), gcd),
    ]);
    Ok(Construction {
        spec: ConstructionSpec {
            name: "rect_lower".into(),
            params,
            claimed_length: (2 * n2 - ell) as usize,
            forbidden_lengths: BTreeSet::from([n2 as usize]),
            claims_zero_sum: true,
            hypothesis_notes: Vec::new(),
        },
        base,
        shift,
        seq,
    })
}

pub fn lower_gcd_construction(n: u64, t: u64) -> Result<Seq> {
    Ok(build_lower_gcd(n, t)?.seq)
}

pub fn p3_construction(t: u64) -> Result<Seq> {
    Ok(build_p3(t)?.seq)
}

pub fn egz_lower_construction(n: u64, t: u64) -> Result<Seq> {
    Ok(build_egz_lower(n, t)?.seq)
}

pub fn rect_lower_construction(n1: u64, n2: u64) -> Result<Seq> {
    Ok(build_rect_lower(n1, n2)?.seq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub construction: String,
    pub params: BTreeMap<String, u64>,
    pub checks: Vec<Check>,
    pub hypothesis_notes: Vec<String>,
}

impl VerificationReport {
    /// No check failed (skipped checks do not count against it).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }
}

fn status(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

/// Checks length, the zero-sum claim and every forbidden length by exact
/// counting.
pub fn verify_construction(spec: &ConstructionSpec, j: &Seq) -> VerificationReport {
    let mut checks = Vec::new();
    checks.push(Check {
        name: "length".into(),
        status: status(j.len() == spec.claimed_length),
        detail: format!("expected {}, got {}", spec.claimed_length, j.len()),
    });
    if spec.claims_zero_sum {
        checks.push(Check {
            name: "zero_sum".into(),
            status: status(j.is_zero_sum()),
            detail: format!("total sum {}", j.total_sum()),
        });
    } else {
        checks.push(Check { name: "zero_sum".into(), status: CheckStatus::Skipped, detail: "not claimed".into() });
    }
    let kmax = spec.forbidden_lengths.iter().copied().filter(|&k| k <= j.len()).max();
    let table = kmax.map(|k| count_table(j, k).expect("k <= len"));
    for &k in &spec.forbidden_lengths {
        let count = match (&table, k <= j.len()) {
            (Some(t), true) => t.zero_sum(k).clone(),
            _ => Zero::zero(),
        };
        checks.push(Check {
            name: format!("forbidden_length_{k}"),
            status: status(count.is_zero()),
            detail: format!("({k} | J) = {count}"),
        });
    }
    VerificationReport {
        construction: spec.name.clone(),
        params: spec.params.clone(),
        checks,
        hypothesis_notes: spec.hypothesis_notes.clone(),
    }
}

/// True when the nonzero entries of `base` admit no nonempty zero-sum
/// subsequence at all.
pub fn nonzero_part_is_zero_free(base: &Seq) -> bool {
    let g = base.group();
    let nonzero: Vec<(Element, i64)> =
        base.entries().filter(|(e, _)| **e != g.identity()).map(|(e, m)| (e.clone(), m as i64)).collect();
    let part = Seq::from_pairs(g, &nonzero).expect("taken from a valid sequence");
    let table = count_table(&part, part.len()).expect("kmax = len");
    (1..=part.len()).all(|k| table.zero_sum(k).is_zero())
}

/// Builds and verifies a construction, adding the base-sequence check for
/// zero-sum constructions.
pub fn build_and_verify(kind: ConstructionKind) -> Result<(Construction, VerificationReport)> {
    let c = build(kind)?;
    let mut report = verify_construction(&c.spec, &c.seq);
    if c.spec.claims_zero_sum {
        report.checks.push(Check {
            name: "base_nonzero_part_zero_free".into(),
            status: status(nonzero_part_is_zero_free(&c.base)),
            detail: format!("base {}, shift {}", c.base.entries_text(), c.shift),
        });
    }
    Ok((c, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::count_fixed_length;

    fn seq22(entries: &[(&[i64], u64)]) -> Seq {
        Seq::from_residues(&Group::uniform(2, 2), entries).unwrap()
    }

    #[test]
    fn lower_gcd_small() {
        let j = lower_gcd_construction(2, 2).unwrap();
        assert_eq!(j, seq22(&[(&[1, 1], 3), (&[0, 1], 1), (&[1, 0], 1)]));
        assert!(j.is_zero_sum());
        assert!(count_fixed_length(&j, 4).unwrap().is_zero());

        let (c, report) = build_and_verify(ConstructionKind::LowerGcd { n: 2, t: 2 }).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(c.shift, Group::uniform(2, 2).element(&[1, 1]).unwrap());
        assert!(!report.hypothesis_notes.is_empty());
    }

    #[test]
    fn lower_gcd_lengths() {
        let j = lower_gcd_construction(5, 2).unwrap();
        assert_eq!(j.len(), 17);
        assert!(j.is_zero_sum());
        assert!(count_fixed_length(&j, 10).unwrap().is_zero());

        let j = lower_gcd_construction(6, 2).unwrap();
        assert_eq!(j.len(), 19);
        assert!(j.is_zero_sum());
        assert!(count_fixed_length(&j, 12).unwrap().is_zero());
    }

    #[test]
    fn p3_examples() {
        for (t, len) in [(1, 5), (2, 8)] {
            let c = build(ConstructionKind::P3 { t }).unwrap();
            assert_eq!(c.seq.len(), len);
            assert!(c.seq.is_zero_sum());
            assert!(!c.base.is_zero_sum());
            assert_eq!(c.base.total_sum(), Group::uniform(3, 2).element(&[2, 2]).unwrap());
            assert!(count_fixed_length(&c.seq, 3 * t as usize).unwrap().is_zero());
        }
    }

    #[test]
    fn egz_lower_examples() {
        let j = egz_lower_construction(2, 1).unwrap();
        assert_eq!(j, seq22(&[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]));
        assert!(count_fixed_length(&j, 2).unwrap().is_zero());
        let j = egz_lower_construction(3, 2).unwrap();
        assert_eq!(j.len(), 9);
        assert!(count_fixed_length(&j, 6).unwrap().is_zero());
        let j = egz_lower_construction(2, 2).unwrap();
        assert_eq!(j.len(), 5);
        assert!(count_fixed_length(&j, 4).unwrap().is_zero());
    }

    #[test]
    fn rect_lower_examples() {
        let c = build(ConstructionKind::RectLower { n1: 2, n2: 4 }).unwrap();
        assert_eq!(c.spec.params["ell"], 5);
        assert_eq!(c.spec.params["g"], 1);
        assert_eq!(c.shift, Group::new(&[2, 4]).unwrap().element(&[1, 3]).unwrap());
        assert_eq!(c.seq.len(), 3);
        assert!(c.seq.is_zero_sum());

        let j = rect_lower_construction(6, 6).unwrap();
        assert_eq!(j.len(), 8);
        assert!(j.is_zero_sum());
        assert!(count_fixed_length(&j, 6).unwrap().is_zero());

        let j = rect_lower_construction(3, 3).unwrap();
        assert_eq!(j.len(), 2);

        assert_eq!(rect_lower_construction(4, 6), Err(Error::NotDivisible { n1: 4, n2: 6 }));
    }

    #[test]
    fn verifier_reports() {
        let (_, report) = build_and_verify(ConstructionKind::EgzLower { n: 3, t: 2 }).unwrap();
        assert!(report.passed());
        let zs = report.checks.iter().find(|c| c.name == "zero_sum").unwrap();
        assert_eq!(zs.status, CheckStatus::Skipped);

        let c = build(ConstructionKind::EgzLower { n: 3, t: 2 }).unwrap();
        let padded = c.seq.join(&Seq::from_residues(c.seq.group(), &[(&[0, 0], 1)]).unwrap()).unwrap();
        let report = verify_construction(&c.spec, &padded);
        assert!(!report.passed());
        let forbidden = report.checks.iter().find(|c| c.name == "forbidden_length_6").unwrap();
        assert_eq!(forbidden.status, CheckStatus::Fail);
    }

    #[test]
    fn names_round_trip() {
        let params = BTreeMap::from([("n".to_string(), 5), ("t".to_string(), 2)]);
        let kind = ConstructionKind::from_name("lower_gcd", &params).unwrap();
        assert_eq!(kind, ConstructionKind::LowerGcd { n: 5, t: 2 });
        assert_eq!(kind.name(), "lower_gcd");
        assert!(matches!(ConstructionKind::from_name("nope", &params), Err(Error::UnknownName(_))));
        assert!(ConstructionKind::from_name("rect_lower", &params).is_err());
    }
}
