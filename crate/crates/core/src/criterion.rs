//! The ranked-coloring criterion, a necessary condition for a 2-identity to be
//! forced by every countable coloring of pairs of `ω₁`.
//!
//! An identity passes when there are a linear order `<` of its points and a
//! rank `h` on its pair classes such that every class `a` has disjoint sets
//! `a₀, a₁` with
//!
//! 1. `a₀ ∩ a₁ = ∅`;
//! 2. for every `{ℓ₀, ℓ₁} ∈ a` with `ℓ₀ < ℓ₁`: `ℓ₀ ∈ a₀` and `ℓ₁ ∈ a₁`;
//! 3. for distinct `ℓ₀, ℓ₁ ∈ a₀ ∪ a₁` with `{ℓ₀, ℓ₁} ∉ a`: `h({ℓ₀, ℓ₁}) > h(a)`.
//!
//! The strengthened form adds
//!
//! 4. for distinct classes `a, b`, either no pair of `b` lies inside the points
//!    of `a`, or no pair of `a` lies inside the points of `b`;
//! 5. `a₀`, `a₁` are exactly the left and right endpoints of the pairs of `a`.
//!
//! # Search
//!
//! Condition 2 forces `a₀ ⊇ left(a)` and `a₁ ⊇ right(a)`, and condition 3 only
//! gets harder as `a₀ ∪ a₁` grows, so taking the endpoint sets of condition 5
//! loses nothing; we use them in both modes. With that choice `a₀ ∪ a₁` is the
//! set of points covered by `a`, whatever the order. So the support digraph
//! (an edge `a → b` whenever some pair of `b ≠ a` lies inside the points of `a`)
//! does not depend on the order, and a rank `h` exists iff it is acyclic, in
//! which case the longest-path depth is one. Condition 4 does not mention the
//! order either. The only order-dependent condition is 1: every point must be,
//! within each class, either below all its partners or above all of them. The
//! search enumerates orders as sequences in lexicographic order, pruning a
//! prefix as soon as a placed point has partners of one class on both sides,
//! and stops at the first complete order, which is therefore the
//! lexicographically least accepting order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::identity::{Flavor, Identity};
use crate::subset::{pairs, SubsetCode};
use crate::{Error, Result};

/// Largest ground set accepted by [`check`].
pub const CRITERION_LIMIT: usize = 24;
/// Largest ground set for which [`explain`] tags every order of a rejected identity.
pub const EXPLAIN_ORDER_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Conditions 1–3.
    Plain,
    /// Conditions 1–5.
    Strengthened,
}

impl Mode {
    pub fn is_strengthened(self) -> bool {
        self == Mode::Strengthened
    }
}

/// Why an identity was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// The support digraph has this cycle of class indices, so no rank exists.
    SupportCycle(Vec<usize>),
    /// Condition 4 fails for these two classes.
    Separation { a: usize, b: usize },
    /// Every order places some point on both sides of one of its classes.
    NoEndpointOrder,
}

/// Outcome of [`check`]. Class indices refer to [`CriterionVerdict::classes`]:
/// the stored classes of the identity in order, then its singleton pairs in
/// colex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionVerdict {
    pub accepted: bool,
    pub strengthened: bool,
    pub classes: Vec<Vec<SubsetCode>>,
    /// Points from least to greatest (accepted only).
    pub order: Option<Vec<usize>>,
    /// Rank per class (accepted only).
    pub h: Option<Vec<u32>>,
    /// `(a₀, a₁)` per class (accepted only).
    pub endpoints: Option<Vec<(SubsetCode, SubsetCode)>>,
    /// Support digraph edges.
    pub edges: Vec<[usize; 2]>,
    pub rejection: Option<Rejection>,
    /// Order prefixes visited by the search.
    pub prefixes: u64,
}

fn class_list(s: &Identity) -> Vec<Vec<SubsetCode>> {
    let map = s.class_map();
    let mut out: Vec<Vec<SubsetCode>> = s.classes().to_vec();
    out.extend(
        pairs(s.n())
            .map(|(i, j)| SubsetCode::pair(i, j))
            .filter(|p| !map.contains_key(p))
            .map(|p| vec![p]),
    );
    out
}

struct Model {
    n: usize,
    classes: Vec<Vec<SubsetCode>>,
    /// Class index of pair {i, j}, at `i * n + j` and `j * n + i`.
    class_of: Vec<usize>,
    support: Vec<SubsetCode>,
}

impl Model {
    fn new(s: &Identity) -> Self {
        let n = s.n();
        let classes = class_list(s);
        let mut class_of = vec![usize::MAX; n * n];
        let mut support = Vec::with_capacity(classes.len());
        for (c, members) in classes.iter().enumerate() {
            let mut sup = SubsetCode::EMPTY;
            for p in members {
                let v = p.to_vec();
                class_of[v[0] * n + v[1]] = c;
                class_of[v[1] * n + v[0]] = c;
                sup = sup.union(*p);
            }
            support.push(sup);
        }
        Model { n, classes, class_of, support }
    }

    fn edges(&self) -> Vec<BTreeSet<usize>> {
        self.support
            .iter()
            .enumerate()
            .map(|(c, sup)| {
                let pts = sup.to_vec();
                let mut out = BTreeSet::new();
                for (i, &x) in pts.iter().enumerate() {
                    for &y in &pts[i + 1..] {
                        let d = self.class_of[x * self.n + y];
                        if d != c {
                            out.insert(d);
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// First pair of distinct stored classes violating condition 4.
    fn separation_failure(&self) -> Option<(usize, usize)> {
        let inside = |members: &[SubsetCode], sup: SubsetCode| members.iter().any(|p| p.is_subset_of(sup));
        let shared: Vec<usize> = (0..self.classes.len()).filter(|&c| self.classes[c].len() > 1).collect();
        for (i, &a) in shared.iter().enumerate() {
            for &b in &shared[i + 1..] {
                let a_ok = !inside(&self.classes[b], self.support[a]);
                let b_ok = !inside(&self.classes[a], self.support[b]);
                if !a_ok && !b_ok {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

/// Longest-path depth per node, or a cycle.
fn rank_or_cycle(edges: &[BTreeSet<usize>]) -> core::result::Result<Vec<u32>, Vec<usize>> {
    let k = edges.len();
    let mut indeg = vec![0usize; k];
    for out in edges {
        for &d in out {
            indeg[d] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..k).filter(|&c| indeg[c] == 0).collect();
    let mut depth = vec![0u32; k];
    let mut seen = 0;
    while let Some(c) = queue.pop() {
        seen += 1;
        for &d in &edges[c] {
            depth[d] = depth[d].max(depth[c] + 1);
            indeg[d] -= 1;
            if indeg[d] == 0 {
                queue.push(d);
            }
        }
    }
    if seen == k {
        return Ok(depth);
    }
    Err(find_cycle(edges).expect("a digraph that is not a DAG has a cycle"))
}

fn find_cycle(edges: &[BTreeSet<usize>]) -> Option<Vec<usize>> {
    // 0 = unseen, 1 = on stack, 2 = done
    let k = edges.len();
    let mut state = vec![0u8; k];
    let mut stack: Vec<usize> = Vec::new();
    fn visit(c: usize, edges: &[BTreeSet<usize>], state: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
        state[c] = 1;
        stack.push(c);
        for &d in &edges[c] {
            if state[d] == 1 {
                let start = stack.iter().position(|&x| x == d).unwrap();
                return Some(stack[start..].to_vec());
            }
            if state[d] == 0 {
                if let Some(cycle) = visit(d, edges, state, stack) {
                    return Some(cycle);
                }
            }
        }
        stack.pop();
        state[c] = 2;
        None
    }
    (0..k).find_map(|c| if state[c] == 0 { visit(c, edges, &mut state, &mut stack) } else { None })
}

struct OrderSearch {
    n: usize,
    /// Per point, the partner set within each class through it.
    partners: Vec<Vec<u128>>,
    order: Vec<usize>,
    placed: u128,
    prefixes: u64,
}

impl OrderSearch {
    fn run(&mut self) -> bool {
        if self.order.len() == self.n {
            return true;
        }
        for y in 0..self.n {
            if self.placed >> y & 1 == 1 {
                continue;
            }
            let placed = self.placed;
            let split = self.partners[y].iter().any(|&pm| pm & placed != 0 && pm & !placed != 0);
            self.prefixes += 1;
            if split {
                continue;
            }
            self.order.push(y);
            self.placed |= 1 << y;
            if self.run() {
                return true;
            }
            self.placed &= !(1 << y);
            self.order.pop();
        }
        false
    }
}

/// Decides the criterion for a pairs identity on at most [`CRITERION_LIMIT`] points.
pub fn check(s: &Identity, mode: Mode) -> Result<CriterionVerdict> {
    if s.flavor() != Flavor::Pairs {
        return Err(Error::Flavor { op: "criterion check", found: s.flavor() });
    }
    if s.n() > CRITERION_LIMIT {
        return Err(Error::SizeGuard { what: "criterion ground set", limit: CRITERION_LIMIT, got: s.n() });
    }
    let model = Model::new(s);
    let edge_sets = model.edges();
    let edges: Vec<[usize; 2]> = edge_sets
        .iter()
        .enumerate()
        .flat_map(|(c, out)| out.iter().map(move |&d| [c, d]))
        .collect();
    let mut verdict = CriterionVerdict {
        accepted: false,
        strengthened: mode.is_strengthened(),
        classes: model.classes.clone(),
        order: None,
        h: None,
        endpoints: None,
        edges,
        rejection: None,
        prefixes: 0,
    };
    let h = match rank_or_cycle(&edge_sets) {
        Ok(h) => h,
        Err(cycle) => {
            verdict.rejection = Some(Rejection::SupportCycle(cycle));
            return Ok(verdict);
        }
    };
    if mode.is_strengthened() {
        if let Some((a, b)) = model.separation_failure() {
            verdict.rejection = Some(Rejection::Separation { a, b });
            return Ok(verdict);
        }
    }
    let n = s.n();
    let mut partners = vec![Vec::new(); n];
    for members in &model.classes {
        let mut by_point: BTreeMap<usize, u128> = BTreeMap::new();
        for p in members {
            let v = p.to_vec();
            *by_point.entry(v[0]).or_default() |= 1 << v[1];
            *by_point.entry(v[1]).or_default() |= 1 << v[0];
        }
        for (x, pm) in by_point {
            partners[x].push(pm);
        }
    }
    let mut search = OrderSearch { n, partners, order: Vec::with_capacity(n), placed: 0, prefixes: 0 };
    let found = search.run();
    verdict.prefixes = search.prefixes;
    if !found {
        verdict.rejection = Some(Rejection::NoEndpointOrder);
        return Ok(verdict);
    }
    let mut pos = vec![0; n];
    for (i, &x) in search.order.iter().enumerate() {
        pos[x] = i;
    }
    let endpoints = model
        .classes
        .iter()
        .map(|members| {
            members.iter().fold((SubsetCode::EMPTY, SubsetCode::EMPTY), |(lo, hi), p| {
                let v = p.to_vec();
                let (a, b) = if pos[v[0]] < pos[v[1]] { (v[0], v[1]) } else { (v[1], v[0]) };
                (lo.insert(a), hi.insert(b))
            })
        })
        .collect();
    verdict.accepted = true;
    verdict.order = Some(search.order);
    verdict.h = Some(h);
    verdict.endpoints = Some(endpoints);
    Ok(verdict)
}

/// The first condition an order violates, for a rejected identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderViolation {
    /// Condition 1: `element` is both a left and a right endpoint of `class`.
    EndpointOverlap { class: usize, element: usize },
    /// Condition 4 fails for two classes (independent of the order).
    Separation { a: usize, b: usize },
    /// Condition 3 cannot be met: the support digraph has this cycle.
    Cycle(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderTag {
    pub order: Vec<usize>,
    pub violation: OrderViolation,
}

/// Independent re-check of a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Explanation {
    /// Every condition was re-verified against the witness.
    Accepted {
        /// One line per verified condition.
        checked: Vec<String>,
    },
    /// The rejection was confirmed. `tags` lists every order with its first
    /// violated condition when the ground set has at most
    /// [`EXPLAIN_ORDER_LIMIT`] points.
    Rejected {
        summary: String,
        tags: Option<Vec<OrderTag>>,
    },
}

/// Class of every pair, recomputed straight from the identity's relation.
fn classes_by_relation(s: &Identity) -> Vec<Vec<SubsetCode>> {
    let all: Vec<SubsetCode> = pairs(s.n()).map(|(i, j)| SubsetCode::pair(i, j)).collect();
    let mut assigned: BTreeMap<SubsetCode, usize> = BTreeMap::new();
    let mut groups: Vec<Vec<SubsetCode>> = Vec::new();
    for &p in &all {
        if assigned.contains_key(&p) {
            continue;
        }
        let group: Vec<SubsetCode> = all.iter().copied().filter(|&q| s.related(p, q)).collect();
        for &q in &group {
            assigned.insert(q, groups.len());
        }
        groups.push(group);
    }
    groups
}

fn same_partition(a: &[Vec<SubsetCode>], b: &[Vec<SubsetCode>]) -> bool {
    let norm = |x: &[Vec<SubsetCode>]| -> BTreeSet<BTreeSet<SubsetCode>> {
        x.iter().map(|c| c.iter().copied().collect()).collect()
    };
    a.len() == b.len() && norm(a) == norm(b)
}

fn verify_accepted(v: &CriterionVerdict, n: usize) -> Result<Vec<String>> {
    let fail = |msg: String| Err(Error::Verification(msg));
    let (Some(order), Some(h), Some(ends)) = (&v.order, &v.h, &v.endpoints) else {
        return fail("accepted verdict lacks its witness".into());
    };
    let k = v.classes.len();
    if h.len() != k || ends.len() != k {
        return fail(format!("witness covers {} ranks and {} endpoint sets for {k} classes", h.len(), ends.len()));
    }
    let mut pos = vec![usize::MAX; n];
    if order.len() != n {
        return fail("order does not list every point".into());
    }
    for (i, &x) in order.iter().enumerate() {
        if x >= n || pos[x] != usize::MAX {
            return fail(format!("order is not a permutation (point {x})"));
        }
        pos[x] = i;
    }
    let owner = |p: SubsetCode| v.classes.iter().position(|c| c.contains(&p));
    let mut checked = Vec::new();
    for (c, members) in v.classes.iter().enumerate() {
        let (a0, a1) = ends[c];
        if !a0.intersection(a1).is_empty() {
            return fail(format!("class {c}: endpoint sets meet in {:?}", a0.intersection(a1)));
        }
        for p in members {
            let e = p.to_vec();
            let (lo, hi) = if pos[e[0]] < pos[e[1]] { (e[0], e[1]) } else { (e[1], e[0]) };
            if !a0.contains(lo) || !a1.contains(hi) {
                return fail(format!("class {c}: pair {p:?} is not oriented from a0 to a1"));
            }
        }
        let both = a0.union(a1).to_vec();
        for (i, &x) in both.iter().enumerate() {
            for &y in &both[i + 1..] {
                let q = SubsetCode::pair(x, y);
                if members.contains(&q) {
                    continue;
                }
                let Some(d) = owner(q) else {
                    return fail(format!("pair {q:?} belongs to no class"));
                };
                if h[d] <= h[c] {
                    return fail(format!(
                        "class {c} (rank {}) sees pair {q:?} of class {d} with rank {} not above it",
                        h[c], h[d]
                    ));
                }
            }
        }
        if v.strengthened {
            let left: SubsetCode = members.iter().fold(SubsetCode::EMPTY, |acc, p| {
                let e = p.to_vec();
                acc.insert(if pos[e[0]] < pos[e[1]] { e[0] } else { e[1] })
            });
            let right: SubsetCode = members.iter().fold(SubsetCode::EMPTY, |acc, p| {
                let e = p.to_vec();
                acc.insert(if pos[e[0]] < pos[e[1]] { e[1] } else { e[0] })
            });
            if (left, right) != (a0, a1) {
                return fail(format!("class {c}: endpoint sets are not the left/right endpoints"));
            }
        }
    }
    checked.push(format!("(i) endpoint sets disjoint for all {k} classes"));
    checked.push("(ii) every pair oriented from a0 to a1".into());
    checked.push("(iii) off-class pairs inside a0 ∪ a1 rank strictly higher".into());
    if v.strengthened {
        for a in 0..k {
            for b in a + 1..k {
                if let Some(msg) = separation_violation(&v.classes, a, b) {
                    return fail(msg);
                }
            }
        }
        checked.push("(iv) every two classes are separated".into());
        checked.push("(v) endpoint sets are the left/right endpoints".into());
    }
    Ok(checked)
}

fn points(members: &[SubsetCode]) -> SubsetCode {
    members.iter().fold(SubsetCode::EMPTY, |acc, p| acc.union(*p))
}

fn separation_violation(classes: &[Vec<SubsetCode>], a: usize, b: usize) -> Option<String> {
    let covers = |x: usize, y: usize| {
        let sup = points(&classes[x]);
        classes[y].iter().any(|p| p.is_subset_of(sup))
    };
    (covers(a, b) && covers(b, a)).then(|| format!("classes {a} and {b} each have a pair inside the other's points"))
}

fn tag_order(classes: &[Vec<SubsetCode>], n: usize, order: &[usize], strengthened: bool) -> Option<OrderViolation> {
    let mut pos = vec![0; n];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    let mut sides = Vec::with_capacity(classes.len());
    for (c, members) in classes.iter().enumerate() {
        let (mut lo, mut hi) = (SubsetCode::EMPTY, SubsetCode::EMPTY);
        for p in members {
            let e = p.to_vec();
            let (a, b) = if pos[e[0]] < pos[e[1]] { (e[0], e[1]) } else { (e[1], e[0]) };
            lo = lo.insert(a);
            hi = hi.insert(b);
        }
        if let Some(x) = lo.intersection(hi).min() {
            return Some(OrderViolation::EndpointOverlap { class: c, element: x });
        }
        sides.push(lo.union(hi));
    }
    if strengthened {
        for a in 0..classes.len() {
            for b in a + 1..classes.len() {
                if separation_violation(classes, a, b).is_some() {
                    return Some(OrderViolation::Separation { a, b });
                }
            }
        }
    }
    let graph: Vec<BTreeSet<usize>> = sides
        .iter()
        .enumerate()
        .map(|(c, sup)| {
            let pts = sup.to_vec();
            let mut out = BTreeSet::new();
            for (i, &x) in pts.iter().enumerate() {
                for &y in &pts[i + 1..] {
                    let q = SubsetCode::pair(x, y);
                    let d = classes.iter().position(|m| m.contains(&q)).unwrap();
                    if d != c {
                        out.insert(d);
                    }
                }
            }
            out
        })
        .collect();
    find_cycle(&graph).map(OrderViolation::Cycle)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Re-verifies `verdict` against `s` without using the search code.
///
/// An accepted verdict is checked condition by condition; any failure is an
/// [`Error::Verification`]. A rejected verdict is confirmed by tagging every
/// order (for small ground sets) with its first violated condition; an order
/// that violates nothing is likewise a verification error.
pub fn explain(verdict: &CriterionVerdict, s: &Identity) -> Result<Explanation> {
    if s.flavor() != Flavor::Pairs {
        return Err(Error::Flavor { op: "criterion explain", found: s.flavor() });
    }
    let classes = classes_by_relation(s);
    if !same_partition(&classes, &verdict.classes) {
        return Err(Error::Verification("verdict classes do not match the identity".into()));
    }
    let n = s.n();
    if verdict.accepted {
        return Ok(Explanation::Accepted { checked: verify_accepted(verdict, n)? });
    }
    let summary = match &verdict.rejection {
        Some(Rejection::SupportCycle(c)) => format!("support digraph cycle through classes {c:?}"),
        Some(Rejection::Separation { a, b }) => format!("classes {a} and {b} are not separated"),
        Some(Rejection::NoEndpointOrder) => "no order keeps every class's endpoint sets disjoint".into(),
        None => return Err(Error::Verification("rejected verdict without a reason".into())),
    };
    if n > EXPLAIN_ORDER_LIMIT {
        return Ok(Explanation::Rejected { summary, tags: None });
    }
    let vc = &verdict.classes;
    let mut order: Vec<usize> = (0..n).collect();
    let mut tags = Vec::new();
    loop {
        match tag_order(vc, n, &order, verdict.strengthened) {
            Some(violation) => tags.push(OrderTag { order: order.clone(), violation }),
            None => {
                return Err(Error::Verification(format!(
                    "order {order:?} satisfies every condition but the verdict is a rejection"
                )))
            }
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(Explanation::Rejected { summary, tags: Some(tags) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::duplicate;
    use crate::families::{s_k, trivial};

    #[test]
    fn trivial_accepted_without_edges() {
        for n in 1..=8 {
            for mode in [Mode::Plain, Mode::Strengthened] {
                let v = check(&trivial(n).unwrap(), mode).unwrap();
                assert!(v.accepted);
                assert!(v.edges.is_empty());
                assert_eq!(v.order.as_deref(), Some(&(0..n).collect::<Vec<_>>()[..]));
            }
        }
    }

    #[test]
    fn fan_accepted_with_one_edge() {
        let s = duplicate(&trivial(2).unwrap(), 1).unwrap();
        for mode in [Mode::Plain, Mode::Strengthened] {
            let v = check(&s, mode).unwrap();
            assert!(v.accepted);
            // class 0 = {{0,1},{0,2}}, class 1 = {{1,2}}.
            assert_eq!(v.edges, vec![[0, 1]]);
            assert_eq!(v.h, Some(vec![0, 1]));
            let ends = v.endpoints.clone().unwrap();
            assert_eq!(ends[0], (SubsetCode::singleton(0), SubsetCode::pair(1, 2)));
            assert!(matches!(explain(&v, &s).unwrap(), Explanation::Accepted { .. }));
        }
    }

    #[test]
    fn s3_rejected_in_both_modes() {
        let s = s_k(3).unwrap();
        for mode in [Mode::Plain, Mode::Strengthened] {
            let v = check(&s, mode).unwrap();
            assert!(!v.accepted);
            assert!(matches!(v.rejection, Some(Rejection::SupportCycle(_))));
        }
    }

    #[test]
    fn explain_tags_every_order_of_s3() {
        let s = s_k(3).unwrap();
        let v = check(&s, Mode::Plain).unwrap();
        let Explanation::Rejected { tags: Some(tags), .. } = explain(&v, &s).unwrap() else {
            panic!("expected tagged rejection");
        };
        assert_eq!(tags.len(), 720);
    }

    #[test]
    fn tampered_rank_fails_verification() {
        let s = duplicate(&trivial(2).unwrap(), 1).unwrap();
        let mut v = check(&s, Mode::Plain).unwrap();
        let h = v.h.as_mut().unwrap();
        let top = (0..h.len()).max_by_key(|&c| h[c]).unwrap();
        h[top] -= 1;
        assert!(matches!(explain(&v, &s), Err(Error::Verification(_))));
    }

    #[test]
    fn tampered_acceptance_fails_verification() {
        let s = s_k(3).unwrap();
        let mut v = check(&s, Mode::Plain).unwrap();
        v.accepted = true;
        assert!(explain(&v, &s).is_err());
    }

    #[test]
    fn endpoint_overlap_everywhere() {
        // A class that is a path 0-1-2 plus 1-3: point 1 would need to sit on
        // one side of 0, 2 and 3 simultaneously, which is fine; a triangle-free
        // odd cycle in one class forces overlap in every order.
        let s = Identity::from_pair_classes(5, &[&[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]]).unwrap();
        let v = check(&s, Mode::Plain).unwrap();
        assert_eq!(v.rejection, Some(Rejection::NoEndpointOrder));
        assert!(v.prefixes > 0);
        let Explanation::Rejected { tags: Some(tags), .. } = explain(&v, &s).unwrap() else { panic!() };
        assert!(tags.iter().all(|t| matches!(t.violation, OrderViolation::EndpointOverlap { .. })));
    }

    #[test]
    fn size_and_flavor_guards() {
        assert!(check(&trivial(25).unwrap(), Mode::Plain).is_err());
        assert!(check(&Identity::trivial_full(2).unwrap(), Mode::Plain).is_err());
    }
}
