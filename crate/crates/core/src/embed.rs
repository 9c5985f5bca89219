//! Embedding search between identities.
//!
//! An embedding `h` of `s₁` into `s₂` is an injection of ground sets such that
//! for all domain subsets `b, c` of `s₁`: `b e₁ c ⇔ h″b e₂ h″c`, and (for
//! partial identities) `h″b` is in the domain of `s₂` exactly when `b` is in the
//! domain of `s₁`. The search assigns images in increasing source order and
//! checks every subset as soon as its largest element is placed; the cost is
//! exponential in the source size.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::identity::{ClassKey, Embedding, Flavor, Identity};
use crate::subset::SubsetCode;
use crate::{Error, Result};

struct Side<'a> {
    id: &'a Identity,
    map: BTreeMap<SubsetCode, u32>,
    /// Compare only pairs (a pairs-flavor source against any target).
    pairs_only: bool,
}

impl Side<'_> {
    fn key(&self, s: SubsetCode) -> Option<ClassKey> {
        if self.pairs_only && s.len() != 2 {
            return None;
        }
        self.id.class_key(&self.map, s)
    }
}

struct Search<'a> {
    src: Side<'a>,
    tgt: Side<'a>,
    ordered: bool,
    pairs_only: bool,
    image: Vec<usize>,
    used: Vec<bool>,
    fwd: BTreeMap<ClassKey, ClassKey>,
    bwd: BTreeMap<ClassKey, ClassKey>,
}

impl Search<'_> {
    /// Source subsets whose largest element is `k`.
    fn new_subsets(&self, k: usize) -> Vec<SubsetCode> {
        let top = SubsetCode::singleton(k);
        if self.pairs_only {
            (0..k).map(|j| top.insert(j)).collect()
        } else {
            (0u128..1 << k).map(|t| SubsetCode::from_bits(t).union(top)).collect()
        }
    }

    fn consistent(&mut self, k: usize, log: &mut Vec<(ClassKey, ClassKey)>) -> bool {
        for s in self.new_subsets(k) {
            let img = s.map(|x| self.image[x]).expect("injective");
            match (self.src.key(s), self.tgt.key(img)) {
                (None, None) => continue,
                (Some(a), Some(b)) => {
                    match (self.fwd.get(&a), self.bwd.get(&b)) {
                        (Some(&fa), _) if fa != b => return false,
                        (_, Some(&bb)) if bb != a => return false,
                        (Some(_), Some(_)) => {}
                        _ => {
                            self.fwd.insert(a, b);
                            self.bwd.insert(b, a);
                            log.push((a, b));
                        }
                    }
                }
                _ => return false,
            }
        }
        true
    }

    fn run(&mut self, k: usize) -> bool {
        let n_src = self.src.id.n();
        if k == n_src {
            return true;
        }
        let start = if self.ordered && k > 0 { self.image[k - 1] + 1 } else { 0 };
        for y in start..self.tgt.id.n() {
            if self.used[y] {
                continue;
            }
            self.used[y] = true;
            self.image.push(y);
            let mut log = Vec::new();
            if self.consistent(k, &mut log) && self.run(k + 1) {
                return true;
            }
            for (a, b) in log {
                self.fwd.remove(&a);
                self.bwd.remove(&b);
            }
            self.image.pop();
            self.used[y] = false;
        }
        false
    }
}

/// Finds the lexicographically first embedding of `src` into `tgt`, or `None`.
///
/// Identities of the same flavor are compared on their whole domains; a
/// pairs-flavor source may be embedded into a target of any flavor, in which
/// case only pairs are compared. Other flavor combinations are errors.
pub fn embeds(src: &Identity, tgt: &Identity, ordered: bool) -> Result<Option<Embedding>> {
    let pairs_only = src.flavor() == Flavor::Pairs;
    if !pairs_only && src.flavor() != tgt.flavor() {
        return Err(Error::Flavor { op: "embeds (source flavor differs from target)", found: src.flavor() });
    }
    if !pairs_only && src.n() > 20 {
        return Err(Error::SizeGuard { what: "embeds source (non-pairs flavor)", limit: 20, got: src.n() });
    }
    if src.n() > tgt.n() {
        return Ok(None);
    }
    let mut search = Search {
        src: Side { id: src, map: src.class_map(), pairs_only },
        tgt: Side { id: tgt, map: tgt.class_map(), pairs_only },
        ordered,
        pairs_only,
        image: Vec::with_capacity(src.n()),
        used: alloc::vec![false; tgt.n()],
        fwd: BTreeMap::new(),
        bwd: BTreeMap::new(),
    };
    if search.run(0) {
        Ok(Some(Embedding::new(search.image, ordered)?))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn trivial(n: usize) -> Identity {
        Identity::from_parts(n, Flavor::Pairs, vec![], None).unwrap()
    }

    fn s3() -> Identity {
        Identity::from_pair_classes(6, &[&[(0, 3), (0, 4), (1, 5)], &[(1, 3), (2, 4), (2, 5)]])
            .unwrap()
    }

    #[test]
    fn reflexive() {
        let s = s3();
        let h = embeds(&s, &s, true).unwrap().unwrap();
        assert_eq!(h.map(), &[0, 1, 2, 3, 4, 5]);
        let h = embeds(&s, &s, false).unwrap().unwrap();
        assert_eq!(h.map(), &[0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn trivial_three_into_s3() {
        let h = embeds(&trivial(3), &s3(), false).unwrap().unwrap();
        // {0,1,2}: all three pairs are singleton classes in s3.
        assert_eq!(h.map(), &[0, 1, 2]);
    }

    #[test]
    fn s3_does_not_embed_into_trivial() {
        assert!(embeds(&s3(), &trivial(6), false).unwrap().is_none());
    }

    #[test]
    fn embedding_must_reflect_classes() {
        // A single class of two disjoint pairs embeds into s3 only where two
        // disjoint pairs are related; in trivial(4) they are not.
        let src = Identity::from_pair_classes(4, &[&[(0, 1), (2, 3)]]).unwrap();
        assert!(embeds(&src, &trivial(4), false).unwrap().is_none());
        let h = embeds(&src, &s3(), false).unwrap().unwrap();
        let img0 = SubsetCode::pair(h.apply(0), h.apply(1));
        let img1 = SubsetCode::pair(h.apply(2), h.apply(3));
        assert!(s3().related(img0, img1));
    }

    #[test]
    fn ordered_embedding_is_increasing() {
        let src = Identity::from_pair_classes(3, &[&[(0, 2), (1, 2)]]).unwrap();
        let tgt = Identity::from_pair_classes(4, &[&[(1, 3), (2, 3)]]).unwrap();
        let h = embeds(&src, &tgt, true).unwrap().unwrap();
        assert_eq!(h.map(), &[1, 2, 3]);
        let rev = Identity::from_pair_classes(4, &[&[(0, 1), (0, 2)]]).unwrap();
        assert!(embeds(&src, &rev, true).unwrap().is_none());
        assert!(embeds(&src, &rev, false).unwrap().is_some());
    }

    #[test]
    fn pairs_source_into_full_target() {
        let one = SubsetCode::singleton;
        let full = Identity::from_parts(
            3,
            Flavor::Full,
            vec![vec![SubsetCode::pair(0, 1), SubsetCode::pair(0, 2)], vec![one(1), one(2)]],
            None,
        )
        .unwrap();
        let src = Identity::from_pair_classes(3, &[&[(0, 1), (0, 2)]]).unwrap();
        assert!(embeds(&src, &full, true).unwrap().is_some());
        assert!(embeds(&full, &src, true).is_err());
    }
}
