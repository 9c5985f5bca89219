//! Canonical labeling by pruned brute force.
//!
//! The encoding of a labelled identity lists, for every subset of the ground
//! set in mask order (pairs only for the pairs flavor, `∅` omitted), `0` if the
//! subset is outside the domain and otherwise `1 +` the rank of its class in
//! order of first appearance. Because mask order lists every subset of
//! `{0, .., k-1}` before any subset containing `k`, placing the vertices that
//! receive new labels `0, 1, ..` one at a time fixes the encoding prefix by
//! prefix, which allows branch and bound.
//!
//! The search only considers relabelings that list vertices in nondecreasing
//! order of an isomorphism-invariant signature (the sorted multiset of
//! `(subset size, class size)` over the domain subsets through the vertex),
//! and at each node skips a candidate whose transposition with an already
//! tried sibling is an automorphism. Both restrictions commute with
//! isomorphism, so the minimum over the remaining relabelings is a canonical
//! form: two identities are isomorphic iff their canonical forms are equal.

use alloc::vec;
use alloc::vec::Vec;

use crate::identity::{Flavor, Identity, Permutation};
use crate::{Error, Result};

/// Largest ground set accepted by [`canonical_form`].
pub const CANON_LIMIT: usize = 12;

const ABSENT: u32 = u32::MAX;

struct Table {
    n: usize,
    flavor: Flavor,
    /// Class id per mask, `ABSENT` outside the domain.
    class_of: Vec<u32>,
    classes: usize,
}

impl Table {
    fn new(s: &Identity) -> Result<Self> {
        let n = s.n();
        let map = s.class_map();
        let shared = s.classes().len() as u32;
        let mut class_of = vec![ABSENT; 1 << n];
        let mut next = shared;
        for sub in s.domain_subsets()? {
            let id = match map.get(&sub) {
                Some(&i) => i,
                None => {
                    next += 1;
                    next - 1
                }
            };
            class_of[sub.bits() as usize] = id;
        }
        Ok(Table { n, flavor: s.flavor(), class_of, classes: next as usize })
    }

    fn class(&self, mask: usize) -> u32 {
        self.class_of[mask]
    }

    fn class_sizes(&self) -> Vec<u32> {
        let mut sizes = vec![0u32; self.classes];
        for &c in &self.class_of {
            if c != ABSENT {
                sizes[c as usize] += 1;
            }
        }
        sizes
    }

    fn signature(&self, x: usize, sizes: &[u32]) -> Vec<(u32, u32)> {
        let mut sig: Vec<(u32, u32)> = (0..self.class_of.len())
            .filter(|&m| m >> x & 1 == 1 && self.class_of[m] != ABSENT)
            .map(|m| (m.count_ones(), sizes[self.class_of[m] as usize]))
            .collect();
        sig.sort_unstable();
        sig
    }

    fn swap_is_automorphism(&self, u: usize, v: usize) -> bool {
        let mut image = vec![ABSENT; self.classes];
        for m in 0..self.class_of.len() {
            let c = self.class_of[m];
            let (bu, bv) = (m >> u & 1, m >> v & 1);
            let t = if bu == bv { m } else { m ^ (1 << u) ^ (1 << v) };
            let d = self.class_of[t];
            if (c == ABSENT) != (d == ABSENT) {
                return false;
            }
            if c == ABSENT {
                continue;
            }
            let slot = &mut image[c as usize];
            if *slot == ABSENT {
                *slot = d;
            } else if *slot != d {
                return false;
            }
        }
        true
    }

    /// Masks (over new labels) of the subsets whose largest element is `k`, in mask order.
    fn level_masks(&self, k: usize) -> Vec<usize> {
        let top = 1usize << k;
        match self.flavor {
            Flavor::Pairs => (0..k).map(|j| top | 1 << j).collect(),
            Flavor::Full | Flavor::Partial => (0..top).map(|t| top | t).collect(),
        }
    }
}

struct Search<'a> {
    table: &'a Table,
    cells: Vec<usize>,
    auto: Vec<Vec<bool>>,
    levels: Vec<Vec<usize>>,
    placed: Vec<usize>,
    used: Vec<bool>,
    rank: Vec<u32>,
    assigned: Vec<u32>,
    code: Vec<u32>,
    best: Option<(Vec<u32>, Vec<usize>)>,
}

impl Search<'_> {
    fn original_mask(&self, new_mask: usize) -> usize {
        let mut m = 0;
        let mut rest = new_mask;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            m |= 1 << self.placed[j];
            rest &= rest - 1;
        }
        m
    }

    fn run(&mut self, depth: usize) {
        let n = self.table.n;
        if depth == n {
            if self.best.as_ref().is_none_or(|(b, _)| self.code < *b) {
                self.best = Some((self.code.clone(), self.placed.clone()));
            }
            return;
        }
        let cell = self
            .cells
            .iter()
            .zip(&self.used)
            .filter(|(_, &u)| !u)
            .map(|(&c, _)| c)
            .min()
            .unwrap_or(0);
        let mut tried: Vec<usize> = Vec::new();
        for v in 0..n {
            if self.used[v] || self.cells[v] != cell {
                continue;
            }
            if tried.iter().any(|&u| self.auto[u][v]) {
                continue;
            }
            tried.push(v);
            let code_len = self.code.len();
            let assigned_len = self.assigned.len();
            self.placed.push(v);
            self.used[v] = true;
            for idx in 0..self.levels[depth].len() {
                let om = self.original_mask(self.levels[depth][idx]);
                let c = self.table.class(om);
                let entry = if c == ABSENT {
                    0
                } else {
                    let r = &mut self.rank[c as usize];
                    if *r == ABSENT {
                        *r = self.assigned.len() as u32;
                        self.assigned.push(c);
                    }
                    *r + 1
                };
                self.code.push(entry);
            }
            let worse = self
                .best
                .as_ref()
                .is_some_and(|(b, _)| self.code[..] > b[..self.code.len()]);
            if !worse {
                self.run(depth + 1);
            }
            for &c in &self.assigned[assigned_len..] {
                self.rank[c as usize] = ABSENT;
            }
            self.assigned.truncate(assigned_len);
            self.code.truncate(code_len);
            self.placed.pop();
            self.used[v] = false;
        }
    }
}

/// Canonical representative of the isomorphism class of `s`, together with the
/// relabeling `π` such that `s.permute(π)` is that representative.
pub fn canonical_form(s: &Identity) -> Result<(Identity, Permutation)> {
    let n = s.n();
    if n > CANON_LIMIT {
        return Err(Error::SizeGuard { what: "canonical_form ground set", limit: CANON_LIMIT, got: n });
    }
    let table = Table::new(s)?;
    let sizes = table.class_sizes();
    let sigs: Vec<_> = (0..n).map(|x| table.signature(x, &sizes)).collect();
    let mut distinct = sigs.clone();
    distinct.sort();
    distinct.dedup();
    let cells: Vec<usize> = sigs.iter().map(|g| distinct.binary_search(g).unwrap()).collect();
    let mut auto = vec![vec![false; n]; n];
    for u in 0..n {
        for v in u + 1..n {
            if cells[u] == cells[v] && table.swap_is_automorphism(u, v) {
                auto[u][v] = true;
                auto[v][u] = true;
            }
        }
    }
    let levels = (0..n).map(|k| table.level_masks(k)).collect();
    let mut search = Search {
        table: &table,
        cells,
        auto,
        levels,
        placed: Vec::with_capacity(n),
        used: vec![false; n],
        rank: vec![ABSENT; table.classes],
        assigned: Vec::new(),
        code: Vec::new(),
        best: None,
    };
    search.run(0);
    let (_, placed) = search.best.expect("at least one relabeling");
    let mut map = vec![0; n];
    for (new, &old) in placed.iter().enumerate() {
        map[old] = new;
    }
    let pi = Permutation::new(map)?;
    Ok((s.permute(&pi)?, pi))
}

/// Whether two identities are isomorphic (same flavor, same canonical form).
pub fn isomorphic(a: &Identity, b: &Identity) -> Result<bool> {
    if a.n() != b.n() || a.flavor() != b.flavor() {
        return Ok(false);
    }
    Ok(canonical_form(a)?.0 == canonical_form(b)?.0)
}

/// The encoding of `s` under its own labeling.
#[cfg(test)]
fn encoding(s: &Identity) -> Vec<u32> {
    let table = Table::new(s).unwrap();
    let mut rank = vec![ABSENT; table.classes];
    let mut next = 0;
    let mut out = Vec::new();
    for k in 0..s.n() {
        for m in table.level_masks(k) {
            let c = table.class(m);
            out.push(if c == ABSENT {
                0
            } else {
                if rank[c as usize] == ABSENT {
                    rank[c as usize] = next;
                    next += 1;
                }
                rank[c as usize] + 1
            });
        }
    }
    out
}
