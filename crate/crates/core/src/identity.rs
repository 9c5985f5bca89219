//! Identity structures, validation, permutations and embeddings.
//!
//! Only non-singleton classes are stored. A domain subset that appears in no
//! stored class is its own (singleton) class.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::subset::{k_subsets, SubsetCode, MAX_GROUND};
use crate::{Error, Result};

/// Which subsets of the ground set carry the relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    /// Every subset of the ground set (including `∅`).
    Full,
    /// An explicitly listed family of subsets.
    Partial,
    /// All 2-element subsets.
    Pairs,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Full => "full",
            Flavor::Partial => "partial",
            Flavor::Pairs => "pairs",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The first invariant an identity violates. Class indices refer to the order
/// in which classes were supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyGround,
    GroundTooLarge { n: usize },
    /// A class member mentions an element `>= n`.
    ElementOutOfRange { class: usize, element: usize },
    /// A class contains subsets of different sizes.
    CardinalityMismatch { class: usize },
    /// A pairs-flavor class contains a subset that is not a pair.
    NotAPair { class: usize },
    /// A subset appears twice (in this class or an earlier one).
    Overlap { class: usize, subset: SubsetCode },
    /// A partial identity's class member is missing from its declared domain.
    OutsideDomain { class: usize, subset: SubsetCode },
    /// A declared domain subset mentions an element `>= n`.
    DomainOutOfRange { subset: SubsetCode },
    MissingDomain,
    UnexpectedDomain,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyGround => f.write_str("ground set is empty"),
            Violation::GroundTooLarge { n } => {
                write!(f, "ground set of size {n} exceeds {MAX_GROUND}")
            }
            Violation::ElementOutOfRange { class, element } => {
                write!(f, "class {class} mentions element {element} outside the ground set")
            }
            Violation::CardinalityMismatch { class } => {
                write!(f, "class {class} mixes subsets of different sizes")
            }
            Violation::NotAPair { class } => {
                write!(f, "class {class} contains a subset that is not a pair")
            }
            Violation::Overlap { class, subset } => {
                write!(f, "subset {subset:?} of class {class} already belongs to a class")
            }
            Violation::OutsideDomain { class, subset } => {
                write!(f, "subset {subset:?} of class {class} is not in the domain")
            }
            Violation::DomainOutOfRange { subset } => {
                write!(f, "domain subset {subset:?} leaves the ground set")
            }
            Violation::MissingDomain => f.write_str("partial identity without a domain"),
            Violation::UnexpectedDomain => {
                f.write_str("only partial identities may declare a domain")
            }
        }
    }
}

/// Checks every structural invariant of an identity given as raw parts.
///
/// Returns the first violation found, scanning classes in the given order.
pub fn validate_parts(
    n: usize,
    flavor: Flavor,
    classes: &[Vec<SubsetCode>],
    domain: Option<&[SubsetCode]>,
) -> Result<(), Violation> {
    if n == 0 {
        return Err(Violation::EmptyGround);
    }
    if n > MAX_GROUND {
        return Err(Violation::GroundTooLarge { n });
    }
    let ground = SubsetCode::full(n);
    let domain = match (flavor, domain) {
        (Flavor::Partial, Some(d)) => {
            if let Some(&bad) = d.iter().find(|s| !s.is_subset_of(ground)) {
                return Err(Violation::DomainOutOfRange { subset: bad });
            }
            let mut set: Vec<SubsetCode> = d.to_vec();
            set.sort_unstable();
            set.dedup();
            Some(set)
        }
        (Flavor::Partial, None) => return Err(Violation::MissingDomain),
        (_, Some(_)) => return Err(Violation::UnexpectedDomain),
        (_, None) => None,
    };
    let mut seen = BTreeMap::new();
    for (ci, class) in classes.iter().enumerate() {
        for &s in class {
            if let Some(bad) = s.iter().find(|&x| x >= n) {
                return Err(Violation::ElementOutOfRange { class: ci, element: bad });
            }
        }
        if let Some(first) = class.first() {
            if class.iter().any(|s| s.len() != first.len()) {
                return Err(Violation::CardinalityMismatch { class: ci });
            }
        }
        if flavor == Flavor::Pairs && class.iter().any(|s| s.len() != 2) {
            return Err(Violation::NotAPair { class: ci });
        }
        for &s in class {
            if let Some(d) = &domain {
                if d.binary_search(&s).is_err() {
                    return Err(Violation::OutsideDomain { class: ci, subset: s });
                }
            }
            if seen.insert(s, ci).is_some() {
                return Err(Violation::Overlap { class: ci, subset: s });
            }
        }
    }
    Ok(())
}

/// A class identifier for a domain subset: a stored (shared) class by index, or
/// the implicit singleton class of one subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassKey {
    Shared(u32),
    Single(SubsetCode),
}

/// A finite identity `(n, e)` on the ground set `{0, .., n-1}`.
///
/// Values are always normalized: singleton classes are dropped, members of a
/// class are sorted by ascending element list, and classes are sorted by their
/// least member. Two identities are equal exactly when their relations are.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Identity {
    n: usize,
    flavor: Flavor,
    classes: Vec<Vec<SubsetCode>>,
    /// Partial flavor only, sorted by mask.
    domain: Option<Vec<SubsetCode>>,
}

impl Identity {
    /// Validates and normalizes raw parts.
    pub fn from_parts(
        n: usize,
        flavor: Flavor,
        classes: Vec<Vec<SubsetCode>>,
        domain: Option<Vec<SubsetCode>>,
    ) -> Result<Self, Violation> {
        validate_parts(n, flavor, &classes, domain.as_deref())?;
        Ok(Self::normalized(n, flavor, classes, domain))
    }

    pub(crate) fn normalized(
        n: usize,
        flavor: Flavor,
        classes: Vec<Vec<SubsetCode>>,
        domain: Option<Vec<SubsetCode>>,
    ) -> Self {
        let mut classes: Vec<Vec<SubsetCode>> = classes
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|mut c| {
                c.sort_unstable_by(|a, b| a.cmp_lex(*b));
                c
            })
            .collect();
        classes.sort_unstable_by(|a, b| a[0].cmp_lex(b[0]));
        let domain = domain.map(|mut d| {
            d.sort_unstable();
            d.dedup();
            d
        });
        Identity { n, flavor, classes, domain }
    }

    /// Pairs-flavor identity from classes given as element pairs.
    pub fn from_pair_classes(n: usize, classes: &[&[(usize, usize)]]) -> Result<Self, Violation> {
        let classes = classes
            .iter()
            .map(|c| c.iter().map(|&(a, b)| pair_code(a, b)).collect())
            .collect();
        Self::from_parts(n, Flavor::Pairs, classes, None)
    }

    /// Builds an identity from a class labelling of its domain subsets. Subsets
    /// with equal labels form one class.
    pub(crate) fn from_labels<L: Ord>(
        n: usize,
        flavor: Flavor,
        labelled: impl IntoIterator<Item = (SubsetCode, L)>,
        domain: Option<Vec<SubsetCode>>,
    ) -> Self {
        let mut groups: BTreeMap<L, Vec<SubsetCode>> = BTreeMap::new();
        for (s, l) in labelled {
            groups.entry(l).or_default().push(s);
        }
        Self::normalized(n, flavor, groups.into_values().collect(), domain)
    }

    /// The full identity on `n` points in which every class is a singleton.
    pub fn trivial_full(n: usize) -> Result<Self, Violation> {
        Self::from_parts(n, Flavor::Full, Vec::new(), None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// The non-singleton classes.
    pub fn classes(&self) -> &[Vec<SubsetCode>] {
        &self.classes
    }

    /// The declared domain of a partial identity (sorted by mask).
    pub fn domain(&self) -> Option<&[SubsetCode]> {
        self.domain.as_deref()
    }

    /// Re-checks the invariants of an already constructed value.
    pub fn validate(&self) -> Result<(), Violation> {
        validate_parts(self.n, self.flavor, &self.classes, self.domain.as_deref())
    }

    pub fn in_domain(&self, s: SubsetCode) -> bool {
        if !s.is_subset_of(SubsetCode::full(self.n)) {
            return false;
        }
        match self.flavor {
            Flavor::Full => true,
            Flavor::Pairs => s.len() == 2,
            Flavor::Partial => self.domain.as_ref().is_some_and(|d| d.binary_search(&s).is_ok()),
        }
    }

    /// Every domain subset in mask order.
    pub fn domain_subsets(&self) -> Result<Vec<SubsetCode>> {
        Ok(match self.flavor {
            Flavor::Pairs => k_subsets(self.n, 2),
            Flavor::Partial => self.domain.clone().unwrap_or_default(),
            Flavor::Full => {
                if self.n > 20 {
                    return Err(Error::SizeGuard {
                        what: "full-flavor subset enumeration",
                        limit: 20,
                        got: self.n,
                    });
                }
                (0u128..1 << self.n).map(SubsetCode::from_bits).collect()
            }
        })
    }

    /// Map from every member of a non-singleton class to that class's index.
    pub fn class_map(&self) -> BTreeMap<SubsetCode, u32> {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |&s| (s, i as u32)))
            .collect()
    }

    /// Class of a subset, or `None` if it is outside the domain.
    pub fn class_key(&self, map: &BTreeMap<SubsetCode, u32>, s: SubsetCode) -> Option<ClassKey> {
        if !self.in_domain(s) {
            return None;
        }
        Some(match map.get(&s) {
            Some(&i) => ClassKey::Shared(i),
            None => ClassKey::Single(s),
        })
    }

    /// Whether `b e c`.
    pub fn related(&self, b: SubsetCode, c: SubsetCode) -> bool {
        if !self.in_domain(b) || !self.in_domain(c) {
            return false;
        }
        b == c || self.classes.iter().any(|cl| cl.contains(&b) && cl.contains(&c))
    }

    /// The largest subset size mentioned by a non-singleton class.
    pub fn max_class_arity(&self) -> usize {
        self.classes.iter().map(|c| c[0].len()).max().unwrap_or(0)
    }

    /// Relabels every element `x` as `π(x)`.
    pub fn permute(&self, pi: &Permutation) -> Result<Identity> {
        if pi.len() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: pi.len() });
        }
        let img = |s: SubsetCode| s.map(|x| pi.apply(x)).expect("bijection");
        let classes = self.classes.iter().map(|c| c.iter().map(|&s| img(s)).collect()).collect();
        let domain = self.domain.as_ref().map(|d| d.iter().map(|&s| img(s)).collect());
        Ok(Identity::normalized(self.n, self.flavor, classes, domain))
    }

    /// The pairs-flavor identity `e ↾ [a]²`.
    pub fn to_pairs(&self) -> Result<Identity> {
        match self.flavor {
            Flavor::Pairs => return Ok(self.clone()),
            Flavor::Full => {}
            Flavor::Partial => {
                for (i, j) in crate::subset::pairs(self.n) {
                    if !self.in_domain(SubsetCode::pair(i, j)) {
                        return Err(Error::MissingPair { pair: [i, j] });
                    }
                }
            }
        }
        let classes = self
            .classes
            .iter()
            .filter(|c| c[0].len() == 2)
            .cloned()
            .collect();
        Ok(Identity::normalized(self.n, Flavor::Pairs, classes, None))
    }
}

pub(crate) fn pair_code(a: usize, b: usize) -> SubsetCode {
    SubsetCode::from_elems([a, b]).unwrap_or(SubsetCode::EMPTY)
}

/// A bijection of `{0, .., n-1}`, stored as the list of images.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = alloc::vec![false; n];
        for &y in &map {
            if y >= n || core::mem::replace(&mut seen[y], true) {
                return Err(Error::NotInjective);
            }
        }
        Ok(Permutation(map))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// The transposition of `a` and `b`.
    pub fn swap(n: usize, a: usize, b: usize) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a, b);
        Permutation(map)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = alloc::vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Permutation(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation(other.0.iter().map(|&y| self.0[y]).collect())
    }
}

/// An injection of one ground set into another.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Embedding {
    map: Vec<usize>,
    ordered: bool,
}

impl Embedding {
    /// Checks injectivity, and monotonicity when `ordered`.
    pub fn new(map: Vec<usize>, ordered: bool) -> Result<Self> {
        let mut sorted = map.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotInjective);
        }
        if ordered && map.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter { name: "embedding", reason: "not increasing" });
        }
        Ok(Embedding { map, ordered })
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn image(&self, s: SubsetCode) -> SubsetCode {
        s.map(|x| self.map[x]).expect("injective")
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Embedding) -> Embedding {
        Embedding {
            map: self.map.iter().map(|&y| next.map[y]).collect(),
            ordered: self.ordered && next.ordered,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn s3() -> Identity {
        Identity::from_pair_classes(6, &[&[(0, 3), (0, 4), (1, 5)], &[(1, 3), (2, 4), (2, 5)]])
            .unwrap()
    }

    #[test]
    fn validate_trivial_and_s3() {
        assert!(Identity::from_parts(1, Flavor::Pairs, vec![], None).is_ok());
        assert!(s3().validate().is_ok());
    }

    #[test]
    fn validate_reports_cardinality_mismatch() {
        let c = vec![vec![
            SubsetCode::pair(0, 1),
            SubsetCode::from_elems([0, 1, 2]).unwrap(),
        ]];
        assert_eq!(
            validate_parts(3, Flavor::Pairs, &c, None),
            Err(Violation::CardinalityMismatch { class: 0 })
        );
        assert_eq!(
            validate_parts(3, Flavor::Full, &c, None),
            Err(Violation::CardinalityMismatch { class: 0 })
        );
    }

    #[test]
    fn validate_reports_overlap_and_range() {
        let p = SubsetCode::pair(0, 1);
        let q = SubsetCode::pair(1, 2);
        let r = SubsetCode::pair(0, 2);
        assert_eq!(
            validate_parts(3, Flavor::Pairs, &[vec![p, q], vec![q, r]], None),
            Err(Violation::Overlap { class: 1, subset: q })
        );
        assert_eq!(
            validate_parts(2, Flavor::Pairs, &[vec![p, q]], None),
            Err(Violation::ElementOutOfRange { class: 0, element: 2 })
        );
        assert_eq!(
            validate_parts(3, Flavor::Partial, &[vec![p, q]], Some(&[p])),
            Err(Violation::OutsideDomain { class: 0, subset: q })
        );
        assert_eq!(validate_parts(3, Flavor::Partial, &[], None), Err(Violation::MissingDomain));
        assert_eq!(validate_parts(0, Flavor::Pairs, &[], None), Err(Violation::EmptyGround));
    }

    #[test]
    fn permute_swap_matches_listing() {
        let swapped = s3().permute(&Permutation::swap(6, 3, 5)).unwrap();
        let expected = Identity::from_pair_classes(
            6,
            &[&[(1, 3), (0, 4), (0, 5)], &[(1, 5), (2, 3), (2, 4)]],
        )
        .unwrap();
        assert_eq!(swapped, expected);
    }

    #[test]
    fn permute_identity_and_inverse() {
        let s = s3();
        assert_eq!(s.permute(&Permutation::identity(6)).unwrap(), s);
        let pi = Permutation::new(vec![2, 0, 5, 1, 3, 4]).unwrap();
        let back = s.permute(&pi).unwrap().permute(&pi.inverse()).unwrap();
        assert_eq!(back, s);
        assert!(s.permute(&Permutation::identity(5)).is_err());
    }

    #[test]
    fn to_pairs_of_full() {
        let full = Identity::trivial_full(3).unwrap();
        let p = full.to_pairs().unwrap();
        assert_eq!(p.flavor(), Flavor::Pairs);
        assert!(p.classes().is_empty());
        assert_eq!(p.to_pairs().unwrap(), p);
    }

    #[test]
    fn to_pairs_rejects_incomplete_partial() {
        let d = vec![SubsetCode::pair(0, 1)];
        let s = Identity::from_parts(3, Flavor::Partial, vec![], Some(d)).unwrap();
        assert_eq!(s.to_pairs(), Err(Error::MissingPair { pair: [0, 2] }));
    }

    #[test]
    fn permutation_rejects_non_bijection() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
    }

    #[test]
    fn embedding_checks() {
        assert!(Embedding::new(vec![1, 1], false).is_err());
        assert!(Embedding::new(vec![2, 1], true).is_err());
        let a = Embedding::new(vec![2, 0], false).unwrap();
        let b = Embedding::new(vec![5, 6, 7], false).unwrap();
        assert_eq!(a.then(&b).map(), &[7, 5]);
    }
}
