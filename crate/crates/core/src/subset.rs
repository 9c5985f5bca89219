//! Bitmask subsets of a ground set and binary-string labels.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Largest ground set a [`SubsetCode`] can address.
pub const MAX_GROUND: usize = 128;

/// A subset of `{0, .., n-1}` stored as a bitmask (bit `i` set iff `i` is a member).
///
/// The derived `Ord` compares raw masks, which is the colex order: every subset
/// of `{0, .., k-1}` sorts before any subset containing `k`. Presentation order
/// (ascending element lists) is [`SubsetCode::cmp_lex`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetCode(u128);

impl SubsetCode {
    pub const EMPTY: SubsetCode = SubsetCode(0);

    pub const fn from_bits(bits: u128) -> Self {
        SubsetCode(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(x: usize) -> Self {
        SubsetCode(1u128 << x)
    }

    pub fn pair(x: usize, y: usize) -> Self {
        debug_assert!(x != y);
        SubsetCode((1u128 << x) | (1u128 << y))
    }

    /// Builds a subset from elements; `None` if an element is out of range.
    pub fn from_elems<I: IntoIterator<Item = usize>>(elems: I) -> Option<Self> {
        let mut bits = 0u128;
        for x in elems {
            if x >= MAX_GROUND {
                return None;
            }
            bits |= 1u128 << x;
        }
        Some(SubsetCode(bits))
    }

    /// All elements `< n`.
    pub fn full(n: usize) -> Self {
        if n >= MAX_GROUND {
            SubsetCode(u128::MAX)
        } else {
            SubsetCode((1u128 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, x: usize) -> bool {
        x < MAX_GROUND && self.0 >> x & 1 == 1
    }

    pub fn is_subset_of(self, other: SubsetCode) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SubsetCode) -> SubsetCode {
        SubsetCode(self.0 | other.0)
    }

    pub fn intersection(self, other: SubsetCode) -> SubsetCode {
        SubsetCode(self.0 & other.0)
    }

    pub fn insert(self, x: usize) -> SubsetCode {
        SubsetCode(self.0 | 1u128 << x)
    }

    /// Largest element, if any.
    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros() as usize)
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Elems {
        Elems(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Image under `f`; `None` if the image collapses (f not injective on the set)
    /// or leaves the addressable range.
    pub fn map(self, f: impl Fn(usize) -> usize) -> Option<SubsetCode> {
        let mut bits = 0u128;
        for x in self.iter() {
            let y = f(x);
            if y >= MAX_GROUND || bits >> y & 1 == 1 {
                return None;
            }
            bits |= 1u128 << y;
        }
        Some(SubsetCode(bits))
    }

    /// Compares ascending element lists lexicographically (a proper prefix sorts first).
    pub fn cmp_lex(self, other: SubsetCode) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for SubsetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over the elements of a [`SubsetCode`].
#[derive(Clone)]
pub struct Elems(u128);

impl Iterator for Elems {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elems {}

/// All `k`-subsets of `{0, .., n-1}` in colex (mask) order.
pub fn k_subsets(n: usize, k: usize) -> Vec<SubsetCode> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut stack = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, stack: &mut Vec<usize>, out: &mut Vec<SubsetCode>) {
        if stack.len() == k {
            out.push(SubsetCode::from_elems(stack.iter().copied()).unwrap());
            return;
        }
        for x in start..n {
            stack.push(x);
            rec(n, k, x + 1, stack, out);
            stack.pop();
        }
    }
    rec(n, k, 0, &mut stack, &mut out);
    out.sort_unstable();
    out
}

/// All pairs `{i, j}` with `i < j < n`, in colex order (by larger element, then smaller).
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j)))
}

/// A finite binary string, used as a label in meet identities and tree colorings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    /// The `len`-bit string whose bits, read left to right, are the binary digits
    /// of `value` from most to least significant. Lexicographic order on these
    /// strings equals numeric order on `value`.
    pub fn from_value(value: usize, len: usize) -> Self {
        BitString((0..len).map(|i| value >> (len - 1 - i) & 1 == 1).collect())
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(BitString)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn prefix(&self, len: usize) -> BitString {
        BitString(self.0[..len.min(self.0.len())].to_vec())
    }

    /// Length of the longest common initial segment.
    pub fn common_prefix_len(&self, other: &BitString) -> usize {
        self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count()
    }

    /// The meet `η ∩ ν`: the longest common initial segment.
    pub fn meet(&self, other: &BitString) -> BitString {
        self.prefix(self.common_prefix_len(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{self}⟩")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn colex_order_of_pairs() {
        let ps: Vec<_> = pairs(4).map(|(i, j)| SubsetCode::pair(i, j)).collect();
        let mut sorted = ps.clone();
        sorted.sort();
        assert_eq!(ps, sorted);
        assert_eq!(k_subsets(4, 2), sorted);
    }

    #[test]
    fn lex_order_differs_from_mask_order() {
        let a = SubsetCode::pair(0, 3);
        let b = SubsetCode::pair(1, 2);
        assert!(a > b);
        assert_eq!(a.cmp_lex(b), Ordering::Less);
        let short = SubsetCode::pair(0, 1);
        let long = SubsetCode::from_elems([0, 1, 2]).unwrap();
        assert_eq!(short.cmp_lex(long), Ordering::Less);
    }

    #[test]
    fn map_detects_collisions() {
        let s = SubsetCode::pair(0, 1);
        assert_eq!(s.map(|_| 3), None);
        assert_eq!(s.map(|x| x + 2), Some(SubsetCode::pair(2, 3)));
    }

    #[test]
    fn bitstring_meet_and_order() {
        let a = BitString::parse("0110").unwrap();
        let b = BitString::parse("0101").unwrap();
        assert_eq!(a.meet(&b).to_string(), "01");
        for v in 0..7 {
            assert!(BitString::from_value(v, 3) < BitString::from_value(v + 1, 3));
        }
        assert_eq!(BitString::from_value(2, 2).to_string(), "10");
        assert!(BitString::parse("012").is_none());
    }
}
