//! Permutations of `{1, …, n}` and the unshuffle families that index every
//! summation in the structure relations.
//!
//! Positions are 1-indexed at the API boundary. A permutation `σ` acts on
//! tuples by `σ•(x₁, …, xₙ) = (x_{σ(1)}, …, x_{σ(n)})`.
//!
//! Composition convention: `σ.compose(&τ)` is the function composite
//! `k ↦ σ(τ(k))`, which is exactly the permutation whose action is
//! "first `σ•`, then `τ•`":
//!
//! ```
//! use linfty::perm::Perm;
//! let s = Perm::from_images(&[2, 1, 3]).unwrap();
//! let t = Perm::from_images(&[1, 3, 2]).unwrap();
//! let xs = ['a', 'b', 'c'];
//! assert_eq!(s.compose(&t).apply(&xs).unwrap(), t.apply(&s.apply(&xs).unwrap()).unwrap());
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A bijection of `{1, …, n}`, stored 0-indexed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Perm("identity requires n >= 1".into()));
        }
        Ok(Perm { images: (0..n).collect() })
    }

    /// Builds `σ` from its 1-indexed one-line notation `(σ(1), …, σ(n))`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::Perm("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        let mut zero_based = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::Perm(format!("{images:?} is not a permutation of 1..={n}")));
            }
            seen[v - 1] = true;
            zero_based.push(v - 1);
        }
        Ok(Perm { images: zero_based })
    }

    /// The permutation of the empty set; only used internally for empty blocks.
    pub(crate) fn empty() -> Self {
        Perm { images: Vec::new() }
    }

    fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i == v)
        });
        Perm { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `σ(k)` for 1-indexed `k`.
    pub fn image(&self, k: usize) -> usize {
        self.images[k - 1] + 1
    }

    /// 1-indexed one-line notation.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    /// 0-indexed images, for callers that index slices directly.
    pub fn zero_based(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// The tuple action `σ•`: `result[k] = xs[σ(k)]`.
    pub fn apply<T: Clone>(&self, xs: &[T]) -> Result<Vec<T>> {
        if xs.len() != self.len() {
            return Err(Error::Perm(format!(
                "cannot apply a permutation of {} to a tuple of length {}",
                self.len(),
                xs.len()
            )));
        }
        Ok(self.images.iter().map(|&i| xs[i].clone()).collect())
    }

    /// `k ↦ self(other(k))`; acts on tuples as `self•` followed by `other•`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len(), "composing permutations of different size");
        Perm::from_zero_based(other.images.iter().map(|&k| self.images[k]).collect())
    }

    pub fn try_compose(&self, other: &Perm) -> Result<Perm> {
        if self.len() != other.len() {
            return Err(Error::Perm(format!("size mismatch: {} vs {}", self.len(), other.len())));
        }
        Ok(self.compose(other))
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.len()];
        for (k, &v) in self.images.iter().enumerate() {
            inv[v] = k;
        }
        Perm::from_zero_based(inv)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() < 10 {
            for v in &self.images {
                write!(f, "{}", v + 1)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.images.iter().map(|v| (v + 1).to_string()).collect();
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let images: Vec<usize> = if s.contains(char::is_whitespace) {
            s.split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Perm(format!("bad permutation {s:?}: {e}")))?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Perm(format!("bad permutation {s:?}")))?
        };
        Perm::from_images(&images)
    }
}

/// A composition `(i₁, …, i_r)` of `n` into positive block sizes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockSpec {
    sizes: Vec<usize>,
}

impl BlockSpec {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::Perm("block spec needs at least one block".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::Perm(format!("block sizes must be positive: {sizes:?}")));
        }
        Ok(BlockSpec { sizes })
    }

    /// `(p, n - p)`, collapsing to the single block `(n)` when `p = n`.
    pub fn split(p: usize, n: usize) -> Result<Self> {
        if p == 0 || p > n {
            return Err(Error::Perm(format!("invalid split ({p}, {})", n.wrapping_sub(p))));
        }
        if p == n {
            BlockSpec::new(vec![n])
        } else {
            BlockSpec::new(vec![p, n - p])
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn is_sorted(&self) -> bool {
        self.sizes.windows(2).all(|w| w[0] <= w[1])
    }

    /// Start offsets (0-indexed) of each block.
    pub fn offsets(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .scan(0, |acc, &s| {
                let start = *acc;
                *acc += s;
                Some(start)
            })
            .collect()
    }

    /// Splits a tuple of length `n` into consecutive blocks of these sizes.
    pub fn chunk<'a, T>(&self, xs: &'a [T]) -> Vec<&'a [T]> {
        assert_eq!(xs.len(), self.total());
        let mut out = Vec::with_capacity(self.sizes.len());
        let mut rest = xs;
        for &s in &self.sizes {
            let (head, tail) = rest.split_at(s);
            out.push(head);
            rest = tail;
        }
        out
    }
}

impl fmt::Display for BlockSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for BlockSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Perm(format!("block spec must look like (2,2), got {s:?}")))?;
        let sizes = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Perm(format!("bad block spec {s:?}: {e}")))?;
        BlockSpec::new(sizes)
    }
}

/// Recursive block filler shared by the plain and primed families.
///
/// Fills blocks left to right; each block takes an increasing subset of the
/// values not yet used, subsets visited in lexicographic order, so the
/// output is lexicographic on image sequences.
struct UnshuffleWalk<'a> {
    sizes: &'a [usize],
    primed: bool,
    used: Vec<bool>,
    images: Vec<usize>,
    out: Vec<Perm>,
}

impl UnshuffleWalk<'_> {
    fn block(&mut self, b: usize) {
        if b == self.sizes.len() {
            self.out.push(Perm::from_zero_based(self.images.clone()));
            return;
        }
        // first element of block b must exceed that of block b-1 when sizes agree
        let min_first = if self.primed && b > 0 && self.sizes[b - 1] == self.sizes[b] {
            let start = self.images.len() - self.sizes[b - 1];
            self.images[start] + 1
        } else {
            0
        };
        self.fill(b, self.sizes[b], min_first);
    }

    fn fill(&mut self, b: usize, remaining: usize, min_value: usize) {
        if remaining == 0 {
            self.block(b + 1);
            return;
        }
        let n = self.used.len();
        for v in min_value..n {
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.images.push(v);
            self.fill(b, remaining - 1, v + 1);
            self.images.pop();
            self.used[v] = false;
        }
    }
}

fn walk(spec: &BlockSpec, primed: bool) -> Vec<Perm> {
    let n = spec.total();
    let mut w = UnshuffleWalk {
        sizes: spec.sizes(),
        primed,
        used: vec![false; n],
        images: Vec::with_capacity(n),
        out: Vec::new(),
    };
    w.block(0);
    w.out
}

/// All `(i₁, …, i_r)`-unshuffles: permutations increasing within each block,
/// in lexicographic order of their image sequences.
pub fn unshuffles(spec: &BlockSpec) -> Vec<Perm> {
    walk(spec, false)
}

/// The primed family `S′(i₁, …, i_r)`: unshuffles whose equal-size
/// consecutive blocks have increasing first images. Requires sorted sizes.
pub fn primed_unshuffles(spec: &BlockSpec) -> Result<Vec<Perm>> {
    if !spec.is_sorted() {
        return Err(Error::Perm(format!("primed unshuffles need nondecreasing block sizes, got {spec}")));
    }
    Ok(walk(spec, true))
}

/// Unshuffles with the anchor `σ(position) = value` (both 1-indexed).
pub fn filtered_unshuffles(spec: &BlockSpec, position: usize, value: usize) -> Result<Vec<Perm>> {
    let n = spec.total();
    if position == 0 || position > n || value == 0 || value > n {
        return Err(Error::Perm(format!("anchor σ({position}) = {value} out of range for n = {n}")));
    }
    Ok(unshuffles(spec).into_iter().filter(|s| s.image(position) == value).collect())
}

/// The cyclic move on `q = n - p + 1` slots that takes slot 1 to the end:
/// `apply(rot, (y, x₁, …, x_{q-1})) = (x₁, …, x_{q-1}, y)`.
pub fn slot_rotation(n: usize, p: usize) -> Result<Perm> {
    if p == 0 || p > n {
        return Err(Error::Perm(format!("slot rotation needs 1 <= p <= n, got p={p}, n={n}")));
    }
    let q = n - p + 1;
    Ok(Perm::from_zero_based((1..q).chain(std::iter::once(0)).collect()))
}

/// Partitions of `n` written with nondecreasing parts, ordered by number of
/// parts and then lexicographically.
pub fn ordered_partitions(n: usize) -> Result<Vec<BlockSpec>> {
    if n == 0 {
        return Err(Error::Perm("ordered_partitions requires n >= 1".into()));
    }
    fn rec(remaining: usize, min_part: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in min_part..=remaining {
            current.push(part);
            rec(remaining - part, part, current, out);
            current.pop();
        }
    }
    let mut all = Vec::new();
    rec(n, 1, &mut Vec::new(), &mut all);
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(all.into_iter().map(|sizes| BlockSpec { sizes }).collect())
}

/// Nondecreasing compositions of `n` with exactly `parts` parts.
pub fn partitions_with_parts(n: usize, parts: usize) -> Vec<BlockSpec> {
    if n == 0 || parts == 0 {
        return Vec::new();
    }
    ordered_partitions(n).expect("n >= 1").into_iter().filter(|b| b.sizes.len() == parts).collect()
}

/// `n! / (i₁! ⋯ i_r!)`.
pub fn multinomial(sizes: &[usize]) -> u128 {
    let mut acc: u128 = 1;
    let mut seen = 0u128;
    for &s in sizes {
        for k in 1..=s as u128 {
            seen += 1;
            acc = acc * seen / k;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn strs(ps: &[Perm]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn identity_cases() {
        assert_eq!(Perm::identity(3).unwrap().images(), vec![1, 2, 3]);
        assert_eq!(Perm::identity(1).unwrap().images(), vec![1]);
        assert_eq!(Perm::identity(7).unwrap().images(), (1..=7).collect::<Vec<_>>());
        assert!(Perm::identity(0).is_err());
    }

    #[test]
    fn apply_small() {
        let id = Perm::identity(4).unwrap();
        assert_eq!(id.apply(&['a', 'b', 'c', 'd']).unwrap(), vec!['a', 'b', 'c', 'd']);
        assert_eq!(p("21").apply(&['a', 'b']).unwrap(), vec!['b', 'a']);
        assert!(p("21").apply(&['a']).is_err());
    }

    #[test]
    fn compose_matches_sequential_action() {
        let s = p("213");
        let t = p("132");
        let rho = s.compose(&t);
        // exhaustive over all 3-tuples drawn from {0,1,2}
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let xs = [a, b, c];
                    assert_eq!(rho.apply(&xs).unwrap(), t.apply(&s.apply(&xs).unwrap()).unwrap());
                }
            }
        }
        assert_eq!(rho, p("231"));
        assert_eq!(s.compose(&Perm::identity(3).unwrap()), s);
        assert!(s.compose(&s.inverse()).is_identity());
        assert!(s.try_compose(&p("21")).is_err());
    }

    #[test]
    fn s4_unshuffle_tables() {
        let one = unshuffles(&BlockSpec::new(vec![1, 3]).unwrap());
        assert_eq!(strs(&one), ["1234", "2134", "3124", "4123"]);
        let two = unshuffles(&BlockSpec::new(vec![2, 2]).unwrap());
        assert_eq!(strs(&two), ["1234", "1324", "1423", "2314", "2413", "3412"]);
        let three = unshuffles(&BlockSpec::new(vec![3, 1]).unwrap());
        assert_eq!(strs(&three), ["1234", "1243", "1342", "2341"]);
    }

    #[test]
    fn primed_edge_cases() {
        let s11 = primed_unshuffles(&BlockSpec::new(vec![1, 1]).unwrap()).unwrap();
        assert_eq!(strs(&s11), ["12"]);
        for n in 1..=6 {
            let all_ones = primed_unshuffles(&BlockSpec::new(vec![1; n]).unwrap()).unwrap();
            assert_eq!(all_ones.len(), 1);
            assert!(all_ones[0].is_identity());
        }
        assert!(primed_unshuffles(&BlockSpec::new(vec![2, 1]).unwrap()).is_err());
    }

    #[test]
    fn primed_1123_by_brute_force() {
        use itertools::Itertools;
        let sizes = [1usize, 1, 2, 3];
        // independent filter of all 5040 permutations of S7
        let count = (1..=7usize)
            .permutations(7)
            .filter(|s| {
                let ok_blocks = s[2] < s[3] && s[4] < s[5] && s[5] < s[6];
                let ok_first = s[0] < s[1];
                ok_blocks && ok_first
            })
            .count();
        assert_eq!(count, 210);
        let ours = primed_unshuffles(&BlockSpec::new(sizes.to_vec()).unwrap()).unwrap();
        assert_eq!(ours.len(), 210);
    }

    #[test]
    fn filtered_cases() {
        let s11 = filtered_unshuffles(&BlockSpec::new(vec![1, 1]).unwrap(), 1, 2).unwrap();
        assert_eq!(strs(&s11), ["21"]);
        let s22 = filtered_unshuffles(&BlockSpec::new(vec![2, 2]).unwrap(), 2, 4).unwrap();
        assert_eq!(strs(&s22), ["1423", "2413", "3412"]);
        let s13 = filtered_unshuffles(&BlockSpec::new(vec![1, 3]).unwrap(), 4, 4).unwrap();
        assert_eq!(strs(&s13), ["1234", "2134", "3124"]);
        assert!(filtered_unshuffles(&BlockSpec::new(vec![1, 1]).unwrap(), 3, 1).is_err());
        assert!(filtered_unshuffles(&BlockSpec::new(vec![1, 1]).unwrap(), 1, 0).is_err());
    }

    #[test]
    fn slot_rotation_cases() {
        assert_eq!(slot_rotation(2, 1).unwrap(), p("21"));
        assert_eq!(slot_rotation(3, 1).unwrap(), p("231"));
        assert_eq!(slot_rotation(3, 3).unwrap(), p("1"));
        assert!(slot_rotation(2, 3).is_err());
        assert!(slot_rotation(2, 0).is_err());
    }

    #[test]
    fn ordered_partition_cases() {
        let three: Vec<String> = ordered_partitions(3).unwrap().iter().map(|b| b.to_string()).collect();
        assert_eq!(three, ["(3)", "(1,2)", "(1,1,1)"]);
        assert_eq!(ordered_partitions(1).unwrap().len(), 1);
        assert_eq!(ordered_partitions(7).unwrap().len(), 15);
        assert!(ordered_partitions(0).is_err());
    }

    #[test]
    fn figure_permutation() {
        let sigma = Perm::from_images(&[2, 4, 1, 6, 3, 5, 7]).unwrap();
        let xs = ["x1", "x2", "x3", "x4", "x5", "x6", "x7"];
        assert_eq!(sigma.apply(&xs).unwrap(), ["x2", "x4", "x1", "x6", "x3", "x5", "x7"]);
        // it is a (1,1,2,3)-unshuffle
        let family = unshuffles(&BlockSpec::new(vec![1, 1, 2, 3]).unwrap());
        assert!(family.contains(&sigma));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("2413").to_string(), "2413");
        let big = Perm::identity(11).unwrap();
        assert_eq!(big.to_string().parse::<Perm>().unwrap(), big);
        assert_eq!("(2,2)".parse::<BlockSpec>().unwrap().to_string(), "(2,2)");
        assert!("2,2".parse::<BlockSpec>().is_err());
        assert!("(2,0)".parse::<BlockSpec>().is_err());
        assert!("1224".parse::<Perm>().is_err());
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[2, 2]), 6);
        assert_eq!(multinomial(&[1, 1, 2, 3]), 420);
        assert_eq!(multinomial(&[8]), 1);
    }
}
