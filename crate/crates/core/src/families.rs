//! Explicit identities and transforms: the trivial identities, the families
//! `s_k`, `s'_n`, `s''_n`, meet identities on binary strings, `k`-simplification
//! and the order-forcing extension.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::identity::{pair_code, Flavor, Identity, Violation};
use crate::subset::{k_subsets, BitString, SubsetCode, MAX_GROUND};
use crate::{Error, Result};

fn binom2(x: usize) -> usize {
    x * x.saturating_sub(1) / 2
}

fn require_positive(name: &'static str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::Parameter { name, reason: "must be at least 1" });
    }
    Ok(())
}

/// The pairs identity on `n` points with every pair in its own class.
pub fn trivial(n: usize) -> Result<Identity> {
    require_positive("n", n)?;
    Ok(Identity::from_parts(n, Flavor::Pairs, Vec::new(), None)?)
}

/// `s_k`: ground set `k + C(k,2)`; for `ℓ₀ < ℓ₁ < k` the point
/// `x = k + C(ℓ₁,2) + ℓ₀` is joined to `ℓ₀` by a pair of class A and to `ℓ₁` by
/// a pair of class B.
pub fn s_k(k: usize) -> Result<Identity> {
    require_positive("k", k)?;
    let n = k + binom2(k);
    if n > MAX_GROUND {
        return Err(Error::SizeGuard { what: "s_k ground set", limit: MAX_GROUND, got: n });
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for l1 in 0..k {
        for l0 in 0..l1 {
            let x = k + binom2(l1) + l0;
            a.push(pair_code(l0, x));
            b.push(pair_code(l1, x));
        }
    }
    Ok(Identity::from_parts(n, Flavor::Pairs, vec![a, b], None)?)
}

/// `s'_n`: ground set `2n + n²`; the point `x = 2n + n·ℓ₀ + ℓ₁` is joined to
/// `ℓ₀` (class A) and to `n + ℓ₁` (class B) for all `ℓ₀, ℓ₁ < n`.
pub fn s_prime_n(n: usize) -> Result<Identity> {
    require_positive("n", n)?;
    let size = 2 * n + n * n;
    if size > MAX_GROUND {
        return Err(Error::SizeGuard { what: "s'_n ground set", limit: MAX_GROUND, got: size });
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for l0 in 0..n {
        for l1 in 0..n {
            let x = 2 * n + n * l0 + l1;
            a.push(pair_code(l0, x));
            b.push(pair_code(n + l1, x));
        }
    }
    Ok(Identity::from_parts(size, Flavor::Pairs, vec![a, b], None)?)
}

/// Largest `n` accepted by [`s_doubleprime_n`].
pub const S_DOUBLEPRIME_LIMIT: usize = 3;

/// `s''_n`: ground set `2ⁿ + 2²ⁿ`. For `ℓ₀, ℓ₁ < 2ⁿ` read as length-`n` binary
/// strings (bit `j` of `ℓ` is the `j`-th letter), the point
/// `x = 2ⁿ + 2ⁿ·ℓ₀ + ℓ₁` is joined to `ℓ₀` by a pair of class `a⁰_η` and to `ℓ₁`
/// by a pair of class `a¹_η`, where `η` is the meet of the two strings and the
/// strings continue `η` with letters 0 and 1 respectively.
pub fn s_doubleprime_n(n: usize) -> Result<Identity> {
    require_positive("n", n)?;
    if n > S_DOUBLEPRIME_LIMIT {
        return Err(Error::SizeGuard { what: "s''_n parameter", limit: S_DOUBLEPRIME_LIMIT, got: n });
    }
    let side = 1usize << n;
    let size = side + side * side;
    // (m, η as low bits, i) -> class members
    let mut classes: BTreeMap<(usize, usize, usize), Vec<SubsetCode>> = BTreeMap::new();
    for m in 0..n {
        for eta in 0..1usize << m {
            for l0 in 0..side {
                for l1 in 0..side {
                    let low = (1usize << m) - 1;
                    let extends = |l: usize, bit: usize| l & low == eta && (l >> m) & 1 == bit;
                    if !(extends(l0, 0) && extends(l1, 1)) {
                        continue;
                    }
                    let x = side + side * l0 + l1;
                    classes.entry((m, eta, 0)).or_default().push(pair_code(l0, x));
                    classes.entry((m, eta, 1)).or_default().push(pair_code(l1, x));
                }
            }
        }
    }
    Ok(Identity::from_parts(size, Flavor::Pairs, classes.into_values().collect(), None)?)
}

/// A pairs identity whose points are labelled by distinct binary strings of one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledIdentity {
    base: Identity,
    labels: Vec<BitString>,
}

impl LabeledIdentity {
    pub fn new(base: Identity, labels: Vec<BitString>) -> Result<Self> {
        if base.flavor() != Flavor::Pairs {
            return Err(Error::Flavor { op: "labeled identity", found: base.flavor() });
        }
        if labels.len() != base.n() {
            return Err(Error::SizeMismatch { expected: base.n(), found: labels.len() });
        }
        let len = labels[0].len();
        if labels.iter().any(|l| l.len() != len) {
            return Err(Error::Coloring(format!("labels must all have length {len}")));
        }
        let distinct: BTreeSet<_> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Coloring("labels must be distinct".into()));
        }
        Ok(LabeledIdentity { base, labels })
    }

    pub fn base(&self) -> &Identity {
        &self.base
    }

    pub fn labels(&self) -> &[BitString] {
        &self.labels
    }

    pub fn string_len(&self) -> usize {
        self.labels[0].len()
    }

    fn meet_of(&self, pair: SubsetCode) -> BitString {
        let mut it = pair.iter();
        let (x, y) = (it.next().unwrap(), it.next().unwrap());
        self.labels[x].meet(&self.labels[y])
    }
}

/// Largest string length accepted by [`max_meet_identity`] (`2^len ≤ 16`).
pub const MAX_MEET_LEN: usize = 4;

/// All binary strings of length `n_str` (in lexicographic order), with two
/// pairs equivalent iff their meets are equal.
pub fn max_meet_identity(n_str: usize) -> Result<LabeledIdentity> {
    require_positive("n_str", n_str)?;
    if n_str > MAX_MEET_LEN {
        return Err(Error::SizeGuard { what: "meet identity string length", limit: MAX_MEET_LEN, got: n_str });
    }
    let n = 1usize << n_str;
    let labels: Vec<BitString> = (0..n).map(|v| BitString::from_value(v, n_str)).collect();
    let base = Identity::from_labels(
        n,
        Flavor::Pairs,
        k_subsets(n, 2).into_iter().map(|p| {
            let mut it = p.iter();
            let (x, y) = (it.next().unwrap(), it.next().unwrap());
            (p, labels[x].meet(&labels[y]))
        }),
        None,
    );
    LabeledIdentity::new(base, labels)
}

/// Whether equivalent pairs always have equal meets.
pub fn is_meet_respecting(s: &LabeledIdentity) -> bool {
    s.base.classes().iter().all(|class| {
        let m = s.meet_of(class[0]);
        class[1..].iter().all(|&p| s.meet_of(p) == m)
    })
}

/// Largest ground set accepted by [`simplify_k`].
pub const SIMPLIFY_LIMIT: usize = 10;

/// The `k`-simplification of a full identity: `b e' c` iff `|b| = |c|` and every
/// `b' ⊆ b` with `|b'| ≤ k` is `e`-related to its order-corresponding copy
/// `c' ⊆ c` (the image of `b'` under the increasing bijection `b → c`).
///
/// The derived relation is checked to be an equivalence before it is returned.
pub fn simplify_k(s: &Identity, k: usize) -> Result<Identity> {
    if s.flavor() != Flavor::Full {
        return Err(Error::Flavor { op: "simplify_k", found: s.flavor() });
    }
    require_positive("k", k)?;
    let n = s.n();
    if n > SIMPLIFY_LIMIT {
        return Err(Error::SizeGuard { what: "simplify_k ground set", limit: SIMPLIFY_LIMIT, got: n });
    }
    let map = s.class_map();
    let rel = |x: SubsetCode, y: SubsetCode| x == y || matches!((map.get(&x), map.get(&y)), (Some(a), Some(b)) if a == b);
    let mut labelled = Vec::new();
    for size in 0..=n {
        let layer = k_subsets(n, size);
        let elems: Vec<Vec<usize>> = layer.iter().map(|b| b.to_vec()).collect();
        let subs: Vec<u32> = (0u32..1 << size).filter(|t| t.count_ones() as usize <= k).collect();
        let pick = |e: &[usize], t: u32| {
            SubsetCode::from_elems((0..size).filter(|p| t >> p & 1 == 1).map(|p| e[p])).unwrap()
        };
        let m = layer.len();
        let mut related = vec![vec![false; m]; m];
        for i in 0..m {
            for j in 0..m {
                related[i][j] = subs.iter().all(|&t| rel(pick(&elems[i], t), pick(&elems[j], t)));
            }
        }
        check_equivalence(size, &layer, &related)?;
        for i in 0..m {
            let rep = (0..m).find(|&j| related[i][j]).unwrap();
            labelled.push((layer[i], (size, rep)));
        }
    }
    Ok(Identity::from_labels(n, Flavor::Full, labelled, None))
}

fn check_equivalence(size: usize, layer: &[SubsetCode], rel: &[Vec<bool>]) -> Result<()> {
    let m = layer.len();
    for i in 0..m {
        if !rel[i][i] {
            return Err(Error::NotEquivalence { size, detail: format!("{:?} not related to itself", layer[i]) });
        }
        for j in 0..m {
            if rel[i][j] != rel[j][i] {
                return Err(Error::NotEquivalence {
                    size,
                    detail: format!("asymmetric on {:?}, {:?}", layer[i], layer[j]),
                });
            }
            if !rel[i][j] {
                continue;
            }
            for l in 0..m {
                if rel[j][l] && !rel[i][l] {
                    return Err(Error::NotEquivalence {
                        size,
                        detail: format!("{:?} ~ {:?} ~ {:?} but not transitive", layer[i], layer[j], layer[l]),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Result of [`order_forcing_extension`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderForcing {
    pub identity: Identity,
    /// Pairs of formerly distinct classes (named by their least pair) that the
    /// equivalence closure merged.
    pub merged: Vec<[SubsetCode; 2]>,
}

/// Extends a pairs identity on `n ≥ 2` points to `2n - 1` points by placing the
/// pair `{ℓ, n+ℓ}` in the class of `{ℓ, ℓ+1}` for each `ℓ < n-1`, then taking
/// the equivalence closure. The restriction to `{0, .., n-1}` is unchanged.
pub fn order_forcing_extension(s: &Identity) -> Result<OrderForcing> {
    if s.flavor() != Flavor::Pairs {
        return Err(Error::Flavor { op: "order_forcing_extension", found: s.flavor() });
    }
    let n = s.n();
    if n < 2 {
        return Err(Error::Parameter { name: "n", reason: "order forcing needs at least 2 points" });
    }
    let size = 2 * n - 1;
    if size > MAX_GROUND {
        return Err(Error::SizeGuard { what: "order forcing ground set", limit: MAX_GROUND, got: size });
    }
    let all = k_subsets(size, 2);
    let index: BTreeMap<SubsetCode, usize> = all.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut parent: Vec<usize> = (0..all.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    // Original class of each pair inside {0..n-1}, by least member.
    let orig = s.class_map();
    let origin = |p: SubsetCode| orig.get(&p).map(|&c| s.classes()[c as usize][0]).unwrap_or(p);
    for class in s.classes() {
        for w in class.windows(2) {
            let (a, b) = (find(&mut parent, index[&w[0]]), find(&mut parent, index[&w[1]]));
            parent[a] = b;
        }
    }
    let mut merged = Vec::new();
    for l in 0..n - 1 {
        let new = index[&pair_code(l, n + l)];
        let old = index[&pair_code(l, l + 1)];
        let (a, b) = (find(&mut parent, new), find(&mut parent, old));
        if a == b {
            continue;
        }
        // Did `new`'s component already carry an original class?
        let carried: Option<SubsetCode> = (0..all.len())
            .filter(|&i| all[i].max().unwrap() < n)
            .find(|&i| find(&mut parent, i) == a)
            .map(|i| origin(all[i]));
        if let Some(c) = carried {
            let d = origin(pair_code(l, l + 1));
            if c != d {
                merged.push([Ord::min(c, d), Ord::max(c, d)]);
            }
        }
        parent[a] = b;
    }
    let labelled: Vec<_> = (0..all.len()).map(|i| (all[i], find(&mut parent, i))).collect();
    let identity = Identity::from_labels(size, Flavor::Pairs, labelled, None);
    identity.validate().map_err(|v: Violation| Error::Invalid(v))?;
    Ok(OrderForcing { identity, merged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::restrict;

    fn pairs_of(s: &Identity) -> Vec<Vec<(usize, usize)>> {
        s.classes()
            .iter()
            .map(|c| {
                c.iter()
                    .map(|p| {
                        let v = p.to_vec();
                        (v[0], v[1])
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn trivial_sizes() {
        assert_eq!(trivial(1).unwrap().n(), 1);
        assert!(trivial(3).unwrap().classes().is_empty());
        assert!(trivial(0).is_err());
    }

    #[test]
    fn s_k_three_expansion() {
        let s = s_k(3).unwrap();
        assert_eq!(s.n(), 6);
        assert_eq!(
            pairs_of(&s),
            vec![vec![(0, 3), (0, 4), (1, 5)], vec![(1, 3), (2, 4), (2, 5)]]
        );
    }

    #[test]
    fn s_k_small_cases() {
        let s2 = s_k(2).unwrap();
        assert_eq!(s2.n(), 3);
        // A = {{0,2}}, B = {{1,2}}: both singleton, so nothing is stored.
        assert!(s2.classes().is_empty());
        let s1 = s_k(1).unwrap();
        assert_eq!(s1.n(), 1);
        assert!(s1.classes().is_empty());
        assert!(s_k(0).is_err());
    }

    #[test]
    fn s_k_class_counts() {
        for k in 3..=6 {
            let s = s_k(k).unwrap();
            assert_eq!(s.n(), k + k * (k - 1) / 2);
            assert_eq!(s.classes().len(), 2);
            assert!(s.classes().iter().all(|c| c.len() == k * (k - 1) / 2));
        }
    }

    #[test]
    fn s_prime_expansions() {
        let s1 = s_prime_n(1).unwrap();
        assert_eq!(s1.n(), 3);
        assert!(s1.classes().is_empty());
        let s2 = s_prime_n(2).unwrap();
        assert_eq!(s2.n(), 8);
        assert_eq!(
            pairs_of(&s2),
            vec![vec![(0, 4), (0, 5), (1, 6), (1, 7)], vec![(2, 4), (2, 6), (3, 5), (3, 7)]]
        );
        for n in 1..=4 {
            let s = s_prime_n(n).unwrap();
            assert!(s.validate().is_ok());
            if n >= 2 {
                assert_eq!(s.classes().len(), 2);
                assert!(s.classes().iter().all(|c| c.len() == n * n));
            }
        }
    }

    #[test]
    fn s_doubleprime_expansions() {
        // n = 1: a⁰ = {{0,3}}, a¹ = {{1,3}}, both singleton.
        let s1 = s_doubleprime_n(1).unwrap();
        assert_eq!(s1.n(), 6);
        assert!(s1.classes().is_empty());
        // n = 2: η = ⟨⟩ gives two classes of four pairs; η = ⟨0⟩, ⟨1⟩ give singletons.
        let s2 = s_doubleprime_n(2).unwrap();
        assert_eq!(s2.n(), 20);
        assert_eq!(
            pairs_of(&s2),
            vec![vec![(0, 5), (0, 7), (2, 13), (2, 15)], vec![(1, 5), (1, 13), (3, 7), (3, 15)]]
        );
        assert!(s2.validate().is_ok());
        assert_eq!(s_doubleprime_n(3).unwrap().n(), 72);
        assert!(s_doubleprime_n(4).is_err());
        assert!(s_doubleprime_n(0).is_err());
    }

    #[test]
    fn max_meet_small() {
        let one = max_meet_identity(1).unwrap();
        assert_eq!(one.base().n(), 2);
        assert!(one.base().classes().is_empty());
        let two = max_meet_identity(2).unwrap();
        assert_eq!(two.base().n(), 4);
        // {00,01} and {10,11} alone; the four cross pairs share meet ⟨⟩.
        assert_eq!(pairs_of(two.base()), vec![vec![(0, 2), (0, 3), (1, 2), (1, 3)]]);
        assert!(is_meet_respecting(&two));
        assert!(max_meet_identity(5).is_err());
    }

    #[test]
    fn meet_respecting_detects_distinct_meets() {
        let base = Identity::from_pair_classes(4, &[&[(0, 1), (2, 3)]]).unwrap();
        let labels = (0..4).map(|v| BitString::from_value(v, 2)).collect();
        let s = LabeledIdentity::new(base, labels).unwrap();
        assert!(!is_meet_respecting(&s));
    }

    #[test]
    fn labeled_identity_rejects_bad_labels() {
        let base = trivial(2).unwrap();
        let dup = vec![BitString::from_value(1, 2), BitString::from_value(1, 2)];
        assert!(LabeledIdentity::new(base.clone(), dup).is_err());
        let ragged = vec![BitString::from_value(1, 2), BitString::from_value(1, 3)];
        assert!(LabeledIdentity::new(base, ragged).is_err());
    }

    #[test]
    fn simplify_trivial_is_identity() {
        let t = Identity::trivial_full(1).unwrap();
        for k in 1..4 {
            assert_eq!(simplify_k(&t, k).unwrap(), t);
        }
        let t4 = Identity::trivial_full(4).unwrap();
        assert_eq!(simplify_k(&t4, 2).unwrap(), t4);
    }

    #[test]
    fn simplify_coarsens_to_small_patterns() {
        // All vertices related and all pairs related, triples alone: every pattern of
        // size <= 2 agrees, so with k = 2 the triples {0,1,2},{0,1,3},.. become related.
        let n = 4;
        let verts = k_subsets(n, 1);
        let prs = k_subsets(n, 2);
        let s = Identity::from_parts(n, Flavor::Full, vec![verts, prs], None).unwrap();
        let t = simplify_k(&s, 2).unwrap();
        assert!(t.related(
            SubsetCode::from_elems([0, 1, 2]).unwrap(),
            SubsetCode::from_elems([1, 2, 3]).unwrap()
        ));
        // With k >= n every sub-pattern is compared, so triples stay apart.
        let u = simplify_k(&s, 4).unwrap();
        assert_eq!(u, s);
        assert!(simplify_k(&trivial(3).unwrap(), 2).is_err());
    }

    #[test]
    fn order_forcing_two_points() {
        let out = order_forcing_extension(&trivial(2).unwrap()).unwrap();
        assert_eq!(out.identity.n(), 3);
        assert_eq!(pairs_of(&out.identity), vec![vec![(0, 1), (0, 2)]]);
        assert!(out.merged.is_empty());
    }

    #[test]
    fn order_forcing_restricts_back() {
        let s = Identity::from_pair_classes(4, &[&[(0, 1), (2, 3)], &[(1, 2), (0, 3)]]).unwrap();
        let out = order_forcing_extension(&s).unwrap();
        assert_eq!(out.identity.n(), 7);
        assert!(out.identity.validate().is_ok());
        assert_eq!(restrict(&out.identity, SubsetCode::full(4)).unwrap(), s);
        assert!(order_forcing_extension(&trivial(1).unwrap()).is_err());
    }
}
