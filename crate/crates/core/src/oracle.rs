//! Concrete finite colorings and exhaustive realization search.
//!
//! A [`Coloring`] assigns a color to every subset of `{0, .., N-1}` whose size
//! is between 2 and its arity, plus an optional vertex layer (`None` means all
//! points share one color). Colorings realize identities through injections of
//! the identity's ground set; see [`realizes`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canon::canonical_form;
use crate::identity::{Embedding, Flavor, Identity};
use crate::subset::{k_subsets, BitString, SubsetCode};
use crate::{Error, Result};

/// Largest subset size a coloring may color.
pub const MAX_ARITY: usize = 4;
/// Largest number of table entries a coloring may hold.
pub const TABLE_LIMIT: usize = 1 << 20;
/// Largest ground set accepted by [`id_of`].
pub const ID_OF_GROUND_LIMIT: usize = 10;
/// Largest identity size accepted by [`id_of`].
pub const ID_OF_SIZE_LIMIT: usize = 6;
/// Largest number of refinements [`id_of`] enumerates below one kernel.
pub const REFINEMENT_LIMIT: u128 = 1 << 20;
/// Bound on `num_colors^C(N,2)` for [`arrow_check`].
pub const ARROW_LIMIT: u128 = 1 << 20;

/// What a color of [`sierpinski_meet`] stands for: the meet of the two strings
/// (so the split prefixes are `meet⌢0` and `meet⌢1`) and whether the
/// lexicographic order of the strings agrees with the ground order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MeetColor {
    pub meet: BitString,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    n: usize,
    arity: usize,
    vertex: Option<Vec<u32>>,
    table: BTreeMap<SubsetCode, u32>,
    /// Pair colors at `x * n + y`, both orientations.
    pair: Vec<u32>,
    palette: u32,
    labels: Option<Vec<BitString>>,
    decode: Option<Vec<MeetColor>>,
}

impl Coloring {
    /// Builds a coloring from a table covering every subset of size `2..=arity`.
    pub fn new(
        n: usize,
        arity: usize,
        table: BTreeMap<SubsetCode, u32>,
        vertex: Option<Vec<u32>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter { name: "n", reason: "a coloring needs at least one point" });
        }
        if n > crate::subset::MAX_GROUND {
            return Err(Error::SizeGuard { what: "coloring ground set", limit: crate::subset::MAX_GROUND, got: n });
        }
        if !(2..=MAX_ARITY).contains(&arity) {
            return Err(Error::Parameter { name: "arity", reason: "arity must be between 2 and 4" });
        }
        let expected = (2..=arity.min(n)).map(|k| binomial(n, k)).sum::<u128>();
        if expected > TABLE_LIMIT as u128 {
            return Err(Error::SizeGuard { what: "coloring table entries", limit: TABLE_LIMIT, got: expected as usize });
        }
        for &s in table.keys() {
            if s.len() < 2 || s.len() > arity || !s.is_subset_of(SubsetCode::full(n)) {
                return Err(Error::Coloring(format!("entry {:?} is not a subset of size 2..={arity} of 0..{n}", s.to_vec())));
            }
        }
        if table.len() as u128 != expected {
            let missing = (2..=arity.min(n))
                .flat_map(|k| k_subsets(n, k))
                .find(|s| !table.contains_key(s))
                .unwrap();
            return Err(Error::Coloring(format!("no color for {:?}", missing.to_vec())));
        }
        if let Some(v) = &vertex {
            if v.len() != n {
                return Err(Error::SizeMismatch { expected: n, found: v.len() });
            }
        }
        let mut pair = vec![0; n * n];
        for (&s, &c) in &table {
            if s.len() == 2 {
                let v = s.to_vec();
                pair[v[0] * n + v[1]] = c;
                pair[v[1] * n + v[0]] = c;
            }
        }
        let palette = table.values().chain(vertex.iter().flatten()).max().map_or(1, |&m| m + 1);
        Ok(Coloring { n, arity, vertex, table, pair, palette, labels: None, decode: None })
    }

    /// A pair coloring given by a function of the two points `x < y`.
    pub fn from_pair_fn(n: usize, f: impl Fn(usize, usize) -> u32) -> Result<Self> {
        let table = k_subsets(n, 2)
            .into_iter()
            .map(|p| {
                let v = p.to_vec();
                (p, f(v[0], v[1]))
            })
            .collect();
        Self::new(n, 2, table, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// One more than the largest color id in use.
    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn vertex(&self) -> Option<&[u32]> {
        self.vertex.as_deref()
    }

    pub fn table(&self) -> &BTreeMap<SubsetCode, u32> {
        &self.table
    }

    /// String labels of the points, for structured colorings.
    pub fn labels(&self) -> Option<&[BitString]> {
        self.labels.as_deref()
    }

    /// Meaning of each color id, for [`sierpinski_meet`] colorings.
    pub fn decode(&self) -> Option<&[MeetColor]> {
        self.decode.as_deref()
    }

    pub fn pair_color(&self, x: usize, y: usize) -> u32 {
        self.pair[x * self.n + y]
    }

    /// Color of a subset, or `None` when its size is not colored. Points share
    /// color 0 when there is no vertex layer.
    pub fn color(&self, s: SubsetCode) -> Option<u32> {
        match s.len() {
            1 => Some(self.vertex.as_ref().map_or(0, |v| v[s.min().unwrap()])),
            2 => {
                let v = s.to_vec();
                (v[1] < self.n).then(|| self.pair_color(v[0], v[1]))
            }
            _ => self.table.get(&s).copied(),
        }
    }

    /// Applies `f` to every color id.
    pub fn map_colors(&self, f: impl Fn(u32) -> u32) -> Result<Self> {
        let table = self.table.iter().map(|(&s, &c)| (s, f(c))).collect();
        let vertex = self.vertex.as_ref().map(|v| v.iter().map(|&c| f(c)).collect());
        let mut out = Self::new(self.n, self.arity, table, vertex)?;
        out.labels = self.labels.clone();
        Ok(out)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// `{α, β} ↦ min(α, β)` on `n` points.
pub fn min_pair(n: usize) -> Result<Coloring> {
    Coloring::from_pair_fn(n, |x, _| x as u32)
}

/// Every subset gets color 0.
pub fn constant(n: usize) -> Result<Coloring> {
    Coloring::from_pair_fn(n, |_, _| 0)
}

/// Pairs colored independently and uniformly from `colors` colors, in colex
/// pair order, by a ChaCha8 stream seeded with `seed`.
pub fn random(n: usize, colors: u32, seed: u64) -> Result<Coloring> {
    if colors == 0 {
        return Err(Error::Parameter { name: "colors", reason: "need at least one color" });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = k_subsets(n, 2).into_iter().map(|p| (p, rng.gen_range(0..colors))).collect();
    Coloring::new(n, 2, table, None)
}

/// The product coloring: color `c₁ · C₂ + c₂` where `C₂` is the palette of `b`.
pub fn product(a: &Coloring, b: &Coloring) -> Result<Coloring> {
    if a.n != b.n {
        return Err(Error::SizeMismatch { expected: a.n, found: b.n });
    }
    if a.arity != b.arity {
        return Err(Error::Parameter { name: "arity", reason: "product needs equal arities" });
    }
    let k = b.palette;
    let table = a.table.iter().map(|(&s, &c)| (s, c * k + b.table[&s])).collect();
    let vertex = match (&a.vertex, &b.vertex) {
        (None, None) => None,
        _ => Some(
            (0..a.n)
                .map(|x| {
                    let one = SubsetCode::singleton(x);
                    a.color(one).unwrap() * k + b.color(one).unwrap()
                })
                .collect(),
        ),
    };
    Coloring::new(a.n, a.arity, table, vertex)
}

/// The Sierpinski/meet coloring on the given strings, ground point `i` being
/// `strings[i]`. Distinct meets or disagreeing orders give distinct colors;
/// color ids are dense in the order of [`MeetColor`].
pub fn sierpinski_meet(strings: Vec<BitString>) -> Result<Coloring> {
    let n = strings.len();
    for (i, a) in strings.iter().enumerate() {
        for b in &strings[i + 1..] {
            if a == b {
                return Err(Error::Coloring(format!("duplicate string {a}")));
            }
            let m = a.common_prefix_len(b);
            if m == a.len() || m == b.len() {
                return Err(Error::Coloring(format!("{a} and {b} have no first disagreement")));
            }
        }
    }
    let key = |x: usize, y: usize| MeetColor {
        meet: strings[x].meet(&strings[y]),
        agree: strings[x] < strings[y],
    };
    let keys: BTreeSet<MeetColor> =
        (0..n).flat_map(|y| (0..y).map(move |x| (x, y))).map(|(x, y)| key(x, y)).collect();
    let decode: Vec<MeetColor> = keys.into_iter().collect();
    let id = |k: &MeetColor| decode.binary_search(k).unwrap() as u32;
    let mut c = Coloring::from_pair_fn(n, |x, y| id(&key(x, y)))?;
    c.labels = Some(strings);
    c.decode = Some(decode);
    Ok(c)
}

/// [`sierpinski_meet`] on all strings of length `len` in lexicographic order.
pub fn sierpinski_meet_len(len: usize) -> Result<Coloring> {
    if len == 0 || len > 7 {
        return Err(Error::SizeGuard { what: "sierpinski_meet string length", limit: 7, got: len });
    }
    sierpinski_meet((0..1usize << len).map(|v| BitString::from_value(v, len)).collect())
}

/// Collapses the vertex layer to a single color; other layers are untouched.
pub fn normalize_vertex_colors(c: &Coloring) -> Coloring {
    let mut out = c.clone();
    out.vertex = None;
    out
}

/// A witness that a coloring realizes an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub embedding: Embedding,
    /// Color of each non-singleton class of the identity, in stored order.
    pub pulled_colors: Vec<u32>,
}

/// Called with the embedding and the class colours of each realization; `false` stops the search.
trait Visit: FnMut(&[usize], &[Option<u32>]) -> bool {}
impl<F: FnMut(&[usize], &[Option<u32>]) -> bool> Visit for F {}

struct Realizer<'a> {
    c: &'a Coloring,
    ordered: bool,
    /// Members whose largest element is `k`, as (class, member).
    due: Vec<Vec<(usize, SubsetCode)>>,
    image: Vec<usize>,
    used: Vec<bool>,
    class_color: Vec<Option<u32>>,
}

impl Realizer<'_> {
    fn place(&mut self, k: usize, log: &mut Vec<usize>) -> bool {
        for &(cl, member) in &self.due[k] {
            let img = member.map(|x| self.image[x]).expect("injective");
            let col = self.c.color(img).expect("member size checked against arity");
            match self.class_color[cl] {
                Some(have) if have != col => return false,
                Some(_) => {}
                None => {
                    self.class_color[cl] = Some(col);
                    log.push(cl);
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize, f: &mut dyn Visit) -> bool {
        if k == self.due.len() {
            return f(&self.image, &self.class_color);
        }
        let start = if self.ordered && k > 0 { self.image[k - 1] + 1 } else { 0 };
        for y in start..self.c.n {
            if self.used[y] {
                continue;
            }
            self.used[y] = true;
            self.image.push(y);
            let mut log = Vec::new();
            let stop = self.place(k, &mut log) && !self.run(k + 1, f);
            for cl in log {
                self.class_color[cl] = None;
            }
            self.image.pop();
            self.used[y] = false;
            if stop {
                return false;
            }
        }
        true
    }
}

/// Visits every realization of `s` in `c` in lexicographic order of the
/// injection, until `visit` returns `false`. Returns the number visited.
///
/// `s` may have any flavor; members of size 1 are compared through the vertex
/// layer and members larger than the coloring's arity are an error.
pub fn for_each_realization(
    c: &Coloring,
    s: &Identity,
    ordered: bool,
    mut visit: impl FnMut(&Realization) -> bool,
) -> Result<u64> {
    let needed = s.max_class_arity();
    if needed > c.arity {
        return Err(Error::Arity { needed, available: c.arity });
    }
    if s.n() > c.n {
        return Ok(0);
    }
    let mut due = vec![Vec::new(); s.n()];
    for (cl, members) in s.classes().iter().enumerate() {
        for &m in members {
            // The empty set is alone in its size, so it never appears here.
            due[m.max().unwrap()].push((cl, m));
        }
    }
    let mut r = Realizer {
        c,
        ordered,
        due,
        image: Vec::with_capacity(s.n()),
        used: vec![false; c.n],
        class_color: vec![None; s.classes().len()],
    };
    let mut count = 0u64;
    let mut cb = |image: &[usize], colors: &[Option<u32>]| {
        count += 1;
        let real = Realization {
            embedding: Embedding::new(image.to_vec(), ordered).expect("search builds injections"),
            pulled_colors: colors.iter().map(|c| c.expect("every class has a member")).collect(),
        };
        visit(&real)
    };
    r.run(0, &mut cb);
    Ok(count)
}

/// The lexicographically least realization of `s` in `c`, or `None`. An
/// identity larger than the ground set has none.
pub fn realizes(c: &Coloring, s: &Identity, ordered: bool) -> Result<Option<Realization>> {
    let mut found = None;
    for_each_realization(c, s, ordered, |r| {
        found = Some(r.clone());
        false
    })?;
    Ok(found)
}

fn bell(k: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..k {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap().saturating_add(x));
        }
        row = next;
    }
    row[0]
}

/// Calls `f` with every partition of `items` given as block labels (a
/// restricted growth string).
fn for_each_partition(len: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(rgs: &mut Vec<usize>, len: usize, max: usize, f: &mut dyn FnMut(&[usize])) {
        if rgs.len() == len {
            f(rgs);
            return;
        }
        for b in 0..=max {
            rgs.push(b);
            go(rgs, len, max.max(b + 1), f);
            rgs.pop();
        }
    }
    go(&mut Vec::with_capacity(len), len, 0, f);
}

/// Every refinement of `kernel` (a partition given by its blocks) whose blocks
/// stay within one size.
fn refinements(n: usize, flavor: Flavor, blocks: &[Vec<SubsetCode>], out: &mut dyn FnMut(Identity)) {
    fn go(
        n: usize,
        flavor: Flavor,
        blocks: &[Vec<SubsetCode>],
        acc: &mut Vec<Vec<SubsetCode>>,
        out: &mut dyn FnMut(Identity),
    ) {
        let Some((first, rest)) = blocks.split_first() else {
            out(Identity::normalized(n, flavor, acc.clone(), None));
            return;
        };
        for_each_partition(first.len(), &mut |rgs| {
            let parts = rgs.iter().max().map_or(0, |&m| m + 1);
            let mut split = vec![Vec::new(); parts];
            for (i, &b) in rgs.iter().enumerate() {
                split[b].push(first[i]);
            }
            let before = acc.len();
            acc.extend(split);
            go(n, flavor, rest, acc, out);
            acc.truncate(before);
        });
    }
    go(n, flavor, blocks, &mut Vec::new(), out);
}

fn injections(n: usize, k: usize, ordered: bool, f: &mut dyn FnMut(&[usize])) {
    fn go(h: &mut Vec<usize>, used: &mut [bool], n: usize, k: usize, ordered: bool, f: &mut dyn FnMut(&[usize])) {
        if h.len() == k {
            f(h);
            return;
        }
        let start = if ordered { h.last().map_or(0, |&x| x + 1) } else { 0 };
        for y in start..n {
            if used[y] {
                continue;
            }
            used[y] = true;
            h.push(y);
            go(h, used, n, k, ordered, f);
            h.pop();
            used[y] = false;
        }
    }
    go(&mut Vec::with_capacity(k), &mut vec![false; n], n, k, ordered, f);
}

/// All identities on at most `max_size` points realized in `c`.
///
/// A pair-only coloring yields pairs-flavor identities; with a vertex layer or
/// arity above 2 the identities are full-flavor, the empty set and subsets
/// larger than the arity being alone in their classes. In unordered mode the
/// results are canonical forms; in ordered mode they are the exact patterns
/// of increasing injections. The output is sorted and free of duplicates.
pub fn id_of(c: &Coloring, max_size: usize, ordered: bool) -> Result<Vec<Identity>> {
    if max_size > ID_OF_SIZE_LIMIT {
        return Err(Error::SizeGuard { what: "id_of identity size", limit: ID_OF_SIZE_LIMIT, got: max_size });
    }
    if c.n > ID_OF_GROUND_LIMIT {
        return Err(Error::SizeGuard { what: "id_of ground set", limit: ID_OF_GROUND_LIMIT, got: c.n });
    }
    let flavor = if c.vertex.is_none() && c.arity == 2 { Flavor::Pairs } else { Flavor::Full };
    let mut found = BTreeSet::new();
    for k in 1..=max_size.min(c.n) {
        let colored: Vec<SubsetCode> = match flavor {
            Flavor::Pairs => k_subsets(k, 2),
            _ => (1..=c.arity.min(k)).flat_map(|size| k_subsets(k, size)).collect(),
        };
        let mut kernels = BTreeSet::new();
        let mut err = None;
        injections(c.n, k, ordered, &mut |h| {
            if err.is_some() {
                return;
            }
            let kernel = Identity::from_labels(
                k,
                flavor,
                colored.iter().map(|&s| (s, (s.len(), c.color(s.map(|x| h[x]).unwrap()).unwrap()))),
                None,
            );
            if ordered {
                kernels.insert(kernel);
            } else {
                match canonical_form(&kernel) {
                    Ok((canon, _)) => {
                        kernels.insert(canon);
                    }
                    Err(e) => err = Some(e),
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        for kernel in kernels {
            let mut blocks: Vec<Vec<SubsetCode>> = kernel.classes().to_vec();
            if flavor == Flavor::Full {
                // Size-1 subsets left out of the stored classes are singletons already.
                blocks.retain(|b| b.len() > 1);
            }
            let total = blocks.iter().fold(1u128, |acc, b| acc.saturating_mul(bell(b.len())));
            if total > REFINEMENT_LIMIT {
                return Err(Error::SizeGuard {
                    what: "id_of refinements below one kernel",
                    limit: REFINEMENT_LIMIT as usize,
                    got: total.min(usize::MAX as u128) as usize,
                });
            }
            let mut err = None;
            refinements(k, flavor, &blocks, &mut |s| {
                if ordered {
                    found.insert(s);
                } else if err.is_none() {
                    match canonical_form(&s) {
                        Ok((canon, _)) => {
                            found.insert(canon);
                        }
                        Err(e) => err = Some(e),
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// A coloring of pairs of `{0, .., n-1}` with `num_colors` colors that does not
/// realize `s`, or `None` if every such coloring does. Colorings are tried up
/// to renaming of colors.
pub fn arrow_counterexample(n: usize, s: &Identity, num_colors: u32) -> Result<Option<Coloring>> {
    if s.flavor() != Flavor::Pairs {
        return Err(Error::Flavor { op: "arrow_check", found: s.flavor() });
    }
    if num_colors == 0 {
        return Err(Error::Parameter { name: "num_colors", reason: "need at least one color" });
    }
    if n == 0 {
        return Err(Error::Parameter { name: "n", reason: "need at least one point" });
    }
    let m = binomial(n, 2);
    let space = (0..m).try_fold(1u128, |acc, _| acc.checked_mul(num_colors as u128).filter(|&v| v <= ARROW_LIMIT));
    let Some(_) = space else {
        return Err(Error::SizeGuard { what: "arrow_check colorings", limit: ARROW_LIMIT as usize, got: usize::MAX });
    };
    let all = k_subsets(n, 2);
    let mut rgs: Vec<u32> = Vec::with_capacity(all.len());
    let mut result: Result<Option<Coloring>> = Ok(None);
    fn go(
        rgs: &mut Vec<u32>,
        next: u32,
        colors: u32,
        all: &[SubsetCode],
        n: usize,
        s: &Identity,
        result: &mut Result<Option<Coloring>>,
    ) {
        if !matches!(result, Ok(None)) {
            return;
        }
        if rgs.len() == all.len() {
            let table = all.iter().copied().zip(rgs.iter().copied()).collect();
            *result = Coloring::new(n, 2, table, None).and_then(|c| {
                Ok(match realizes(&c, s, false)? {
                    Some(_) => None,
                    None => Some(c),
                })
            });
            return;
        }
        for col in 0..next.min(colors) {
            rgs.push(col);
            go(rgs, next.max(col + 2), colors, all, n, s, result);
            rgs.pop();
        }
    }
    if all.is_empty() {
        let c = Coloring::new(n, 2, BTreeMap::new(), None)?;
        return Ok(match realizes(&c, s, false)? {
            Some(_) => None,
            None => Some(c),
        });
    }
    go(&mut rgs, 1, num_colors, &all, n, s, &mut result);
    result
}

/// Whether every coloring of pairs of `{0, .., n-1}` with `num_colors` colors
/// realizes `s`.
pub fn arrow_check(n: usize, s: &Identity, num_colors: u32) -> Result<bool> {
    Ok(arrow_counterexample(n, s, num_colors)?.is_none())
}

/// Human-readable form of a [`MeetColor`].
pub fn describe_meet_color(m: &MeetColor) -> String {
    format!("meet {} / {}", if m.meet.is_empty() { "<>".into() } else { format!("{}", m.meet) }, if m.agree { "agree" } else { "flip" })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::s_k;

    fn path() -> Identity {
        Identity::from_pair_classes(3, &[&[(0, 1), (1, 2)]]).unwrap()
    }

    #[test]
    fn min_pair_colors() {
        let c = min_pair(4).unwrap();
        assert_eq!(c.pair_color(0, 3), 0);
        assert_eq!(c.pair_color(2, 3), 2);
        assert_eq!(c.palette(), 3);
    }

    #[test]
    fn sierpinski_split_prefixes_differ() {
        let c = sierpinski_meet_len(2).unwrap();
        // 00, 01, 10, 11 are points 0..3.
        assert_ne!(c.pair_color(0, 1), c.pair_color(0, 2));
        assert_eq!(c.pair_color(0, 2), c.pair_color(1, 3));
        assert!(c.decode().unwrap().iter().all(|m| m.agree));
    }

    #[test]
    fn sierpinski_order_bit() {
        let s = |t: &str| BitString::parse(t).unwrap();
        let c = sierpinski_meet(vec![s("10"), s("00"), s("11")]).unwrap();
        // {10,00} disagrees with the ground order, {10,11} agrees; both meet at <> / 1.
        assert_ne!(c.pair_color(0, 1), c.pair_color(1, 2));
        assert!(sierpinski_meet(vec![s("1"), s("10")]).is_err());
        assert!(sierpinski_meet(vec![s("1"), s("1")]).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        assert_eq!(random(7, 3, 42).unwrap(), random(7, 3, 42).unwrap());
        assert!(random(7, 3, 42).unwrap().table().values().all(|&c| c < 3));
    }

    #[test]
    fn constant_realizes_everything() {
        let c = constant(6).unwrap();
        let r = realizes(&c, &s_k(3).unwrap(), true).unwrap().unwrap();
        assert_eq!(r.embedding.map(), &[0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn min_pair_misses_s3() {
        assert!(realizes(&min_pair(8).unwrap(), &s_k(3).unwrap(), false).unwrap().is_none());
    }

    #[test]
    fn fan_in_min_pair() {
        let fan = Identity::from_pair_classes(3, &[&[(0, 1), (0, 2)]]).unwrap();
        let r = realizes(&min_pair(6).unwrap(), &fan, false).unwrap().unwrap();
        assert_eq!(r.embedding.map(), &[0, 1, 2]);
        assert_eq!(r.pulled_colors, vec![0]);
        let ids = id_of(&min_pair(6).unwrap(), 3, false).unwrap();
        assert!(ids.contains(&canonical_form(&fan).unwrap().0));
    }

    #[test]
    fn arity_error() {
        let one = SubsetCode::from_elems([0, 1, 2]).unwrap();
        let s = Identity::from_parts(
            4,
            Flavor::Full,
            vec![vec![one, SubsetCode::from_elems([1, 2, 3]).unwrap()]],
            None,
        )
        .unwrap();
        assert!(matches!(realizes(&constant(5).unwrap(), &s, false), Err(Error::Arity { needed: 3, available: 2 })));
    }

    #[test]
    fn vertex_layer_and_normalization() {
        let table = k_subsets(3, 2).into_iter().map(|p| (p, 0)).collect();
        let c = Coloring::new(3, 2, table, Some(vec![0, 1, 2])).unwrap();
        let pts = Identity::from_parts(
            2,
            Flavor::Full,
            vec![vec![SubsetCode::singleton(0), SubsetCode::singleton(1)]],
            None,
        )
        .unwrap();
        assert!(realizes(&c, &pts, false).unwrap().is_none());
        let flat = normalize_vertex_colors(&c);
        assert!(realizes(&flat, &pts, false).unwrap().is_some());
        assert_eq!(flat.table(), c.table());
        let pair_only = min_pair(4).unwrap();
        assert_eq!(normalize_vertex_colors(&pair_only), pair_only);
    }

    #[test]
    fn product_separates() {
        let p = product(&min_pair(4).unwrap(), &constant(4).unwrap()).unwrap();
        assert_eq!(p.pair_color(1, 3), 1);
        let q = product(&constant(4).unwrap(), &min_pair(4).unwrap()).unwrap();
        assert_eq!(q.pair_color(2, 3), 2);
    }

    #[test]
    fn arrow_small() {
        assert!(arrow_check(3, &path(), 1).unwrap());
        for colors in 1..=4 {
            assert!(arrow_check(2, &crate::families::trivial(2).unwrap(), colors).unwrap());
        }
        assert!(arrow_check(21, &path(), 2).is_err());
        assert!(arrow_check(4, &path(), 2).unwrap());
    }

    #[test]
    fn bell_numbers() {
        assert_eq!((0..7).map(bell).collect::<Vec<_>>(), vec![1, 1, 2, 5, 15, 52, 203]);
        let mut count = 0;
        for_each_partition(5, &mut |_| count += 1);
        assert_eq!(count, 52);
    }

    #[test]
    fn id_of_constant_has_all_small() {
        let ids = id_of(&constant(4).unwrap(), 3, false).unwrap();
        // Pairs identities on 1, 2, 3 points up to isomorphism: 1, 1, and 3 on
        // three points (trivial, one two-pair class, all three pairs).
        assert_eq!(ids.len(), 5);
    }
}
