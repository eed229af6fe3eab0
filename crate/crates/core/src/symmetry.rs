//! Symmetries used to shrink searches: translations and a sound subgroup of
//! the automorphism group, both realized as permutations of element indices.
//!
//! Sequences are compared through their non-decreasing index tuples, ordered
//! lexicographically. The canonical representative of an orbit is the least
//! such tuple. Removing the largest entry from a canonical tuple leaves a
//! canonical tuple, which is what lets the searches prune non-canonical
//! prefixes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::seq::Seq;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct SymmetryMode {
    pub use_translation: bool,
    pub use_automorphism: bool,
}

impl SymmetryMode {
    pub const NONE: SymmetryMode = SymmetryMode { use_translation: false, use_automorphism: false };
    pub const BOTH: SymmetryMode = SymmetryMode { use_translation: true, use_automorphism: true };
    pub const TRANSLATION: SymmetryMode = SymmetryMode { use_translation: true, use_automorphism: false };
    pub const AUTOMORPHISM: SymmetryMode = SymmetryMode { use_translation: false, use_automorphism: true };

    pub fn label(&self) -> &'static str {
        match (self.use_translation, self.use_automorphism) {
            (false, false) => "none",
            (true, false) => "translation",
            (false, true) => "automorphism",
            (true, true) => "both",
        }
    }
}

/// Largest modulus for which uniform rank-2 groups get all of `GL(2, Z/n)`.
const FULL_GL_MAX_MODULUS: u64 = 12;

/// Automorphisms of `group` used for symmetry reduction, as index maps.
///
/// Uniform groups of rank at most 2 with `n ≤ 12` get every invertible linear
/// map. Everything else gets per-coordinate unit scalings combined with
/// permutations of equal-modulus coordinates. The identity map is always first.
pub fn automorphisms(group: &Group) -> Vec<Vec<u32>> {
    let matrices = if group.is_uniform()
        && group.rank() <= 2
        && group.rank() >= 1
        && group.moduli()[0] <= FULL_GL_MAX_MODULUS
    {
        general_linear(group.moduli()[0], group.rank())
    } else {
        scalings_and_swaps(group)
    };
    let elems: Vec<Vec<u64>> = group.elements().map(|e| e.residues().to_vec()).collect();
    let moduli = group.moduli();
    let mut maps: Vec<Vec<u32>> = matrices
        .iter()
        .map(|mat| {
            elems
                .iter()
                .map(|x| {
                    let img: Vec<i64> = (0..moduli.len())
                        .map(|i| {
                            let n = moduli[i];
                            let v = (0..moduli.len()).fold(0u64, |acc, j| (acc + mat[i][j] * x[j]) % n);
                            v as i64
                        })
                        .collect();
                    group.index_of(&group.element(&img).expect("reduced")) as u32
                })
                .collect()
        })
        .collect();
    let id: Vec<u32> = (0..group.order() as u32).collect();
    maps.sort();
    maps.dedup();
    maps.retain(|m| *m != id);
    maps.insert(0, id);
    maps
}

fn units(n: u64) -> Vec<u64> {
    (0..n).filter(|&u| num_integer::gcd(u, n) == 1).collect()
}

fn general_linear(n: u64, rank: usize) -> Vec<Vec<Vec<u64>>> {
    match rank {
        1 => units(n).into_iter().map(|u| vec![vec![u % n]]).collect(),
        2 => {
            let mut out = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let det = (a * d + n * n - b * c) % n;
                            if num_integer::gcd(det, n) == 1 {
                                out.push(vec![vec![a, b], vec![c, d]]);
                            }
                        }
                    }
                }
            }
            out
        }
        _ => unreachable!("full linear group only for rank <= 2"),
    }
}

fn scalings_and_swaps(group: &Group) -> Vec<Vec<Vec<u64>>> {
    let moduli = group.moduli();
    let d = moduli.len();
    // permutations that only exchange coordinates with equal moduli
    let mut perms = Vec::new();
    permute(&mut (0..d).collect(), 0, &mut perms);
    perms.retain(|p: &Vec<usize>| (0..d).all(|i| moduli[p[i]] == moduli[i]));

    let unit_lists: Vec<Vec<u64>> = moduli.iter().map(|&n| units(n)).collect();
    let mut scalings: Vec<Vec<u64>> = vec![vec![]];
    for list in &unit_lists {
        scalings = scalings
            .into_iter()
            .flat_map(|prefix| {
                list.iter().map(move |&u| {
                    let mut v = prefix.clone();
                    v.push(u);
                    v
                })
            })
            .collect();
    }

    let mut out = Vec::new();
    for p in &perms {
        for s in &scalings {
            // row i picks coordinate p[i], scaled by s[i]
            let mut mat = vec![vec![0u64; d]; d];
            for i in 0..d {
                mat[i][p[i]] = s[i] % moduli[i].max(1);
            }
            out.push(mat);
        }
    }
    out
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

/// The symmetry group selected by a [`SymmetryMode`], ready for canonicity
/// tests on index tuples.
#[derive(Clone, Debug)]
pub struct Symmetries {
    auts: Vec<Vec<u32>>,
    translation: bool,
    add: Vec<u32>,
    neg: Vec<u32>,
    order: usize,
}

impl Symmetries {
    pub fn new(group: &Group, mode: SymmetryMode) -> Self {
        let order = group.order() as usize;
        let auts = if mode.use_automorphism {
            automorphisms(group)
        } else {
            vec![(0..order as u32).collect()]
        };
        Symmetries {
            auts,
            translation: mode.use_translation,
            add: group.cayley_table(),
            neg: group.neg_table(),
            order,
        }
    }

    pub fn automorphism_maps(&self) -> &[Vec<u32>] {
        &self.auts
    }

    /// Number of group elements acting (automorphisms × translations).
    pub fn size(&self) -> usize {
        self.auts.len() * if self.translation { self.order } else { 1 }
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }

    /// True when the non-decreasing tuple is the least in its orbit.
    pub fn is_canonical(&self, tuple: &[u32]) -> bool {
        if tuple.is_empty() || self.is_trivial() {
            return true;
        }
        let mut buf = vec![0u32; tuple.len()];
        if !self.translation {
            return self.auts[1..].iter().all(|phi| {
                image_into(tuple, |x| phi[x as usize], &mut buf);
                buf.as_slice() >= tuple
            });
        }
        if tuple[0] != 0 {
            return false;
        }
        let top = max_run(tuple);
        if run_length(tuple, 0) != top {
            return false;
        }
        let heads = runs_of_length(tuple, top);
        for phi in &self.auts {
            for &s in &heads {
                let shift = self.neg[phi[s as usize] as usize] as usize;
                image_into(tuple, |x| self.add[phi[x as usize] as usize * self.order + shift], &mut buf);
                if buf.as_slice() < tuple {
                    return false;
                }
            }
        }
        true
    }

    /// Least image of the tuple under the symmetry group.
    pub fn canonical_tuple(&self, tuple: &[u32]) -> Vec<u32> {
        let mut best = tuple.to_vec();
        best.sort_unstable();
        let mut buf = vec![0u32; tuple.len()];
        for phi in &self.auts {
            if self.translation {
                for c in 0..self.order {
                    image_into(tuple, |x| self.add[phi[x as usize] as usize * self.order + c], &mut buf);
                    if buf < best {
                        best.copy_from_slice(&buf);
                    }
                }
            } else {
                image_into(tuple, |x| phi[x as usize], &mut buf);
                if buf < best {
                    best.copy_from_slice(&buf);
                }
            }
        }
        best
    }
}

fn image_into(tuple: &[u32], f: impl Fn(u32) -> u32, buf: &mut [u32]) {
    for (slot, &x) in buf.iter_mut().zip(tuple) {
        *slot = f(x);
    }
    buf.sort_unstable();
}

fn run_length(tuple: &[u32], v: u32) -> usize {
    tuple.iter().filter(|&&x| x == v).count()
}

fn max_run(tuple: &[u32]) -> usize {
    let mut best = 0;
    let mut i = 0;
    while i < tuple.len() {
        let j = i + tuple[i..].iter().take_while(|&&x| x == tuple[i]).count();
        best = best.max(j - i);
        i = j;
    }
    best
}

fn runs_of_length(tuple: &[u32], len: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tuple.len() {
        let j = i + tuple[i..].iter().take_while(|&&x| x == tuple[i]).count();
        if j - i == len {
            out.push(tuple[i]);
        }
        i = j;
    }
    out
}

/// Orbit representative of `j` under the enabled symmetries.
///
/// `annihilated` is the caller's promise that every target length `k`
/// satisfies `k·c = 0` for all `c`; translations are refused without it.
pub fn canonical_form(j: &Seq, sym: SymmetryMode, annihilated: bool) -> Result<Seq> {
    if sym.use_translation && !annihilated {
        return Err(Error::TranslationNotAnnihilated);
    }
    let group = j.group();
    let tuple: Vec<u32> = j.index_tuple().into_iter().map(|i| i as u32).collect();
    let best = Symmetries::new(group, sym).canonical_tuple(&tuple);
    let idx: Vec<usize> = best.into_iter().map(|i| i as usize).collect();
    Ok(Seq::from_indices(group, &idx))
}

/// Applies an index map (for example one of [`automorphisms`]) to a sequence.
pub fn apply_map(j: &Seq, map: &[u32]) -> Seq {
    let idx: Vec<usize> = j.index_tuple().into_iter().map(|i| map[i] as usize).collect();
    Seq::from_indices(j.group(), &idx)
}
