//! Duplication, restriction, and the catalog of ordered identities they
//! generate from the one-point identity.
//!
//! Duplication of `s` at `m` splits the ground set into `a₀ = {0..m-1}` and
//! `a₁ = {m..n-1}`, appends a fresh copy `a₂` of `a₁`, and lets `g` be the
//! increasing map of `a₀ ∪ a₁` onto `a₀ ∪ a₂` fixing `a₀`. The result keeps `s`
//! on `a₀ ∪ a₁`, relates every pair to its `g`-image, and puts every pair
//! meeting both `a₁` and `a₂` in a singleton class. The ordered catalog is the
//! closure of the one-point identity under duplication and restriction, up to
//! a size bound.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::canon::canonical_form;
use crate::families::trivial;
use crate::identity::{ClassKey, Flavor, Identity};
use crate::subset::{k_subsets, SubsetCode};
use crate::{Error, Result};

/// One construction step in a catalog provenance trace.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    /// Duplicate with `a₀` the first `m` points.
    Dup(usize),
    /// Restrict to the listed points.
    Res(Vec<usize>),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum DupLabel {
    Orig(ClassKey),
    Cross(SubsetCode),
}

fn dup_split(s: &Identity, m: usize) -> Result<(usize, usize)> {
    let n = s.n();
    if m > n {
        return Err(Error::Parameter { name: "m", reason: "must not exceed the ground set size" });
    }
    let size = 2 * n - m;
    if size > crate::subset::MAX_GROUND {
        return Err(Error::SizeGuard { what: "duplicate result", limit: crate::subset::MAX_GROUND, got: size });
    }
    Ok((n, size))
}

fn duplicate_over(s: &Identity, m: usize, subsets: Vec<SubsetCode>, flavor: Flavor) -> Result<Identity> {
    let (n, size) = dup_split(s, m)?;
    let shift = n - m;
    let g = |x: usize| if x < m { x } else { x + shift };
    let a1 = SubsetCode::full(n).intersection(SubsetCode::from_bits(!SubsetCode::full(m).bits()));
    let a2 = SubsetCode::from_bits(a1.bits() << shift);
    let map = s.class_map();
    let mut labelled = Vec::new();
    for p in subsets {
        let key = s.class_key(&map, p).expect("domain subset");
        labelled.push((p, DupLabel::Orig(key)));
        let q = p.map(g).expect("g is injective");
        if q != p {
            labelled.push((q, DupLabel::Orig(key)));
        }
    }
    // Subsets meeting both a₁ and a₂ stay singleton.
    let cross: Vec<SubsetCode> = match flavor {
        Flavor::Pairs => a1
            .iter()
            .flat_map(|x| a2.iter().map(move |y| SubsetCode::pair(x, y)))
            .collect(),
        _ => (0u128..1 << size)
            .map(SubsetCode::from_bits)
            .filter(|t| !t.intersection(a1).is_empty() && !t.intersection(a2).is_empty())
            .collect(),
    };
    labelled.extend(cross.into_iter().map(|t| (t, DupLabel::Cross(t))));
    let out = Identity::from_labels(size, flavor, labelled, None);
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

/// Pair-level duplication of a pairs identity.
pub fn duplicate(s: &Identity, m: usize) -> Result<Identity> {
    if s.flavor() != Flavor::Pairs {
        return Err(Error::Flavor { op: "duplicate (use duplicate_full for full identities)", found: s.flavor() });
    }
    duplicate_over(s, m, k_subsets(s.n(), 2), Flavor::Pairs)
}

/// Largest result size for [`duplicate_full`].
pub const FULL_DUP_LIMIT: usize = 12;

/// Duplication of a full identity, extended from pairs to all subsets: every
/// subset of `a₀ ∪ a₁` is related to its `g`-image, and every subset meeting
/// both `a₁` and `a₂` is a singleton class. This extends the pair rule; it is
/// not needed for any pairs-level result.
pub fn duplicate_full(s: &Identity, m: usize) -> Result<Identity> {
    if s.flavor() != Flavor::Full {
        return Err(Error::Flavor { op: "duplicate_full", found: s.flavor() });
    }
    let (_, size) = dup_split(s, m)?;
    if size > FULL_DUP_LIMIT {
        return Err(Error::SizeGuard { what: "full duplication result", limit: FULL_DUP_LIMIT, got: size });
    }
    duplicate_over(s, m, s.domain_subsets()?, Flavor::Full)
}

/// Induced identity on `keep`, relabeled order-preservingly to `0..|keep|-1`.
pub fn restrict(s: &Identity, keep: SubsetCode) -> Result<Identity> {
    if keep.is_empty() {
        return Err(Error::Parameter { name: "keep", reason: "must be nonempty" });
    }
    if !keep.is_subset_of(SubsetCode::full(s.n())) {
        return Err(Error::Parameter { name: "keep", reason: "must lie inside the ground set" });
    }
    let mut new_index = vec![usize::MAX; s.n()];
    for (i, x) in keep.iter().enumerate() {
        new_index[x] = i;
    }
    let relabel = |t: SubsetCode| t.map(|x| new_index[x]).expect("order-preserving relabel");
    let classes = s
        .classes()
        .iter()
        .map(|c| c.iter().filter(|t| t.is_subset_of(keep)).map(|&t| relabel(t)).collect())
        .collect();
    let domain = s
        .domain()
        .map(|d| d.iter().filter(|t| t.is_subset_of(keep)).map(|&t| relabel(t)).collect());
    Ok(Identity::normalized(keep.len(), s.flavor(), classes, domain))
}

fn apply_step(s: &Identity, step: &Step) -> Result<Identity> {
    match step {
        Step::Dup(m) if s.flavor() == Flavor::Full => duplicate_full(s, *m),
        Step::Dup(m) => duplicate(s, *m),
        Step::Res(elems) => {
            let keep = SubsetCode::from_elems(elems.iter().copied())
                .ok_or_else(|| Error::Replay(format!("bad restriction {elems:?}")))?;
            if keep.len() != elems.len() {
                return Err(Error::Replay(format!("repeated points in restriction {elems:?}")));
            }
            restrict(s, keep)
        }
    }
}

fn seed(flavor: Flavor) -> Result<Identity> {
    match flavor {
        Flavor::Pairs => trivial(1),
        Flavor::Full => Ok(Identity::trivial_full(1)?),
        Flavor::Partial => Err(Error::Flavor { op: "catalog", found: flavor }),
    }
}

/// Rebuilds an identity from the one-point identity by replaying `trace`.
pub fn replay(flavor: Flavor, trace: &[Step]) -> Result<Identity> {
    trace.iter().try_fold(seed(flavor)?, |s, step| apply_step(&s, step))
}

/// A catalog member and how it was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub identity: Identity,
    pub trace: Vec<Step>,
}

/// The closure of the one-point identity under duplication and restriction,
/// bounded by `max_n` points, deduplicated by exact (ordered) identity.
#[derive(Clone, Debug)]
pub struct Catalog {
    max_n: usize,
    flavor: Flavor,
    entries: Vec<CatalogEntry>,
    by_identity: BTreeMap<Identity, usize>,
    /// Canonical form -> entries in that isomorphism class.
    index: BTreeMap<Identity, Vec<usize>>,
}

/// Largest size bound for [`generate_catalog`].
pub const CATALOG_LIMIT: usize = 8;
/// Largest size bound for [`generate_full_catalog`].
pub const FULL_CATALOG_LIMIT: usize = 6;

impl Catalog {
    /// Rebuilds a catalog from stored entries, replaying every trace.
    pub fn from_entries(max_n: usize, flavor: Flavor, entries: Vec<CatalogEntry>) -> Result<Self> {
        let mut by_identity = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            if e.identity.flavor() != flavor {
                return Err(Error::Flavor { op: "catalog entry", found: e.identity.flavor() });
            }
            if e.identity.n() > max_n {
                return Err(Error::SizeGuard { what: "catalog entry size", limit: max_n, got: e.identity.n() });
            }
            let rebuilt = replay(flavor, &e.trace)?;
            if rebuilt != e.identity {
                return Err(Error::Replay(format!("entry {i} does not match its trace")));
            }
            if by_identity.insert(e.identity.clone(), i).is_some() {
                return Err(Error::Replay(format!("entry {i} is a duplicate")));
            }
        }
        let mut cat = Catalog { max_n, flavor, entries, by_identity, index: BTreeMap::new() };
        cat.build_index()?;
        Ok(cat)
    }

    fn build_index(&mut self) -> Result<()> {
        self.index.clear();
        for (i, e) in self.entries.iter().enumerate() {
            let (canon, _) = canonical_form(&e.identity)?;
            self.index.entry(canon).or_default().push(i);
        }
        Ok(())
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, s: &Identity) -> Option<&CatalogEntry> {
        self.by_identity.get(s).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, s: &Identity) -> bool {
        self.by_identity.contains_key(s)
    }

    /// Number of isomorphism classes represented.
    pub fn iso_classes(&self) -> usize {
        self.index.len()
    }

    /// Entry counts by ground-set size, index `k` for size `k`.
    pub fn size_histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.max_n + 1];
        for e in &self.entries {
            h[e.identity.n()] += 1;
        }
        h
    }
}

fn generate(max_n: usize, flavor: Flavor, limit: usize) -> Result<Catalog> {
    if max_n == 0 {
        return Err(Error::Parameter { name: "max_n", reason: "must be at least 1" });
    }
    if max_n > limit {
        return Err(Error::SizeGuard { what: "catalog size bound", limit, got: max_n });
    }
    let start = seed(flavor)?;
    let mut entries = vec![CatalogEntry { identity: start.clone(), trace: Vec::new() }];
    let mut by_identity = BTreeMap::from([(start, 0usize)]);
    let mut next = 0;
    while next < entries.len() {
        let current = entries[next].clone();
        next += 1;
        let n = current.identity.n();
        let mut produced = Vec::new();
        for m in 0..n {
            if 2 * n - m <= max_n {
                produced.push(Step::Dup(m));
            }
        }
        for keep in 1u128..(1u128 << n) - 1 {
            produced.push(Step::Res(SubsetCode::from_bits(keep).to_vec()));
        }
        for step in produced {
            let t = apply_step(&current.identity, &step)?;
            if by_identity.contains_key(&t) {
                continue;
            }
            let mut trace = current.trace.clone();
            trace.push(step);
            by_identity.insert(t.clone(), entries.len());
            entries.push(CatalogEntry { identity: t, trace });
        }
    }
    let mut cat = Catalog { max_n, flavor, entries, by_identity, index: BTreeMap::new() };
    cat.build_index()?;
    Ok(cat)
}

/// The pairs-level catalog of identities on at most `max_n ≤ 8` points.
pub fn generate_catalog(max_n: usize) -> Result<Catalog> {
    generate(max_n, Flavor::Pairs, CATALOG_LIMIT)
}

/// The full-flavor catalog (all-subset duplication) on at most `max_n ≤ 6` points.
pub fn generate_full_catalog(max_n: usize) -> Result<Catalog> {
    generate(max_n, Flavor::Full, FULL_CATALOG_LIMIT)
}

/// Ordered mode: `s` itself is a catalog entry. Unordered mode: some relabeling
/// of `s` is a catalog entry.
pub fn member_of_catalog(cat: &Catalog, s: &Identity, ordered: bool) -> Result<bool> {
    if s.flavor() != cat.flavor {
        return Err(Error::Flavor { op: "member_of_catalog (flavor differs from catalog)", found: s.flavor() });
    }
    if s.n() > cat.max_n {
        return Err(Error::SizeGuard { what: "identity size vs catalog bound", limit: cat.max_n, got: s.n() });
    }
    if ordered {
        Ok(cat.contains(s))
    } else {
        Ok(cat.index.contains_key(&canonical_form(s)?.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::s_k;

    #[test]
    fn duplicate_one_point() {
        let d = duplicate(&trivial(1).unwrap(), 0).unwrap();
        assert_eq!(d, trivial(2).unwrap());
        // m = n leaves the identity unchanged.
        assert_eq!(duplicate(&trivial(2).unwrap(), 2).unwrap(), trivial(2).unwrap());
        assert!(duplicate(&trivial(2).unwrap(), 3).is_err());
    }

    #[test]
    fn duplicate_two_points_at_one() {
        let d = duplicate(&trivial(2).unwrap(), 1).unwrap();
        let expected = Identity::from_pair_classes(3, &[&[(0, 1), (0, 2)]]).unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn duplicate_then_restrict_recovers() {
        let s = Identity::from_pair_classes(3, &[&[(0, 1), (0, 2)]]).unwrap();
        for m in 0..=3 {
            let d = duplicate(&s, m).unwrap();
            assert_eq!(restrict(&d, SubsetCode::full(3)).unwrap(), s);
            assert!(d.validate().is_ok());
        }
    }

    #[test]
    fn duplicate_copies_classes() {
        let s = Identity::from_pair_classes(3, &[&[(0, 1), (0, 2)]]).unwrap();
        let d = duplicate(&s, 1).unwrap();
        assert_eq!(d.n(), 5);
        let expected = Identity::from_pair_classes(
            5,
            &[&[(0, 1), (0, 2), (0, 3), (0, 4)], &[(1, 2), (3, 4)]],
        )
        .unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn restrict_examples() {
        let s = s_k(3).unwrap();
        assert_eq!(restrict(&s, SubsetCode::full(6)).unwrap(), s);
        let r = restrict(&s, SubsetCode::from_elems([0, 1, 3]).unwrap()).unwrap();
        assert_eq!(r, trivial(3).unwrap());
        assert!(restrict(&s, SubsetCode::EMPTY).is_err());
        assert!(restrict(&s, SubsetCode::singleton(6)).is_err());
    }

    #[test]
    fn restrict_composition() {
        let s = s_k(3).unwrap();
        let a = SubsetCode::from_elems([0, 2, 3, 4, 5]).unwrap();
        let inner = SubsetCode::from_elems([0, 2, 3]).unwrap(); // positions in a -> {0,3,4}
        let two = restrict(&restrict(&s, a).unwrap(), inner).unwrap();
        let direct = restrict(&s, SubsetCode::from_elems([0, 3, 4]).unwrap()).unwrap();
        assert_eq!(two, direct);
    }

    #[test]
    fn full_duplication_relates_vertices() {
        let d = duplicate_full(&Identity::trivial_full(1).unwrap(), 0).unwrap();
        assert_eq!(d.n(), 2);
        assert!(d.related(SubsetCode::singleton(0), SubsetCode::singleton(1)));
        assert!(d.to_pairs().unwrap().classes().is_empty());
    }

    #[test]
    fn tiny_catalogs() {
        let c1 = generate_catalog(1).unwrap();
        assert_eq!(c1.len(), 1);
        assert_eq!(c1.entries()[0].identity, trivial(1).unwrap());
        let c2 = generate_catalog(2).unwrap();
        assert!(c2.contains(&trivial(2).unwrap()));
        let c3 = generate_catalog(3).unwrap();
        let fan = Identity::from_pair_classes(3, &[&[(0, 1), (0, 2)]]).unwrap();
        assert!(c3.contains(&fan));
        assert!(generate_catalog(9).is_err());
    }

    #[test]
    fn traces_replay() {
        let c = generate_catalog(5).unwrap();
        for e in c.entries() {
            assert_eq!(replay(Flavor::Pairs, &e.trace).unwrap(), e.identity);
        }
        let rebuilt = Catalog::from_entries(5, Flavor::Pairs, c.entries().to_vec()).unwrap();
        assert_eq!(rebuilt.len(), c.len());
    }

    #[test]
    fn tampered_trace_is_rejected() {
        let c = generate_catalog(3).unwrap();
        let mut entries = c.entries().to_vec();
        let last = entries.len() - 1;
        entries[last].trace.push(Step::Dup(0));
        assert!(Catalog::from_entries(3, Flavor::Pairs, entries).is_err());
    }

    #[test]
    fn membership_modes() {
        // trivial(3) first appears as a restriction of dup(trivial(2), 0) on 4 points.
        assert!(!member_of_catalog(&generate_catalog(3).unwrap(), &trivial(3).unwrap(), true).unwrap());
        let c = generate_catalog(4).unwrap();
        for k in 1..=3 {
            assert!(member_of_catalog(&c, &trivial(k).unwrap(), true).unwrap());
            assert!(member_of_catalog(&c, &trivial(k).unwrap(), false).unwrap());
        }
        let swapped = Identity::from_pair_classes(3, &[&[(0, 2), (1, 2)]]).unwrap();
        let fan = Identity::from_pair_classes(3, &[&[(0, 1), (0, 2)]]).unwrap();
        assert!(c.contains(&fan));
        assert!(member_of_catalog(&c, &swapped, false).unwrap());
        assert!(member_of_catalog(&c, &trivial(5).unwrap(), true).is_err());
    }
}
