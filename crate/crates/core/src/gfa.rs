//! Graded F₂ vector spaces, homogeneous elements as packed bit vectors, and
//! symmetric multilinear maps stored sparsely on canonical multi-indices.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Degree = i32;

const WORD_BITS: usize = 64;

/// A basis vector: the `index`-th basis element in homological degree `degree`.
///
/// The derived order is `(degree, index)`, which is the order used to sort
/// symmetric arguments into canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "(Degree, usize)", from = "(Degree, usize)")]
pub struct Basis {
    pub degree: Degree,
    pub index: usize,
}

impl Basis {
    pub fn new(degree: Degree, index: usize) -> Self {
        Basis { degree, index }
    }
}

impl From<(Degree, usize)> for Basis {
    fn from((degree, index): (Degree, usize)) -> Self {
        Basis { degree, index }
    }
}

impl From<Basis> for (Degree, usize) {
    fn from(b: Basis) -> Self {
        (b.degree, b.index)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.degree, self.index)
    }
}

/// Finite-dimensional graded vector space over F₂.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    // degrees with dimension zero are never stored
    dims: BTreeMap<Degree, usize>,
}

impl GradedSpace {
    pub fn new(dims: impl IntoIterator<Item = (Degree, usize)>) -> Self {
        let mut out = BTreeMap::new();
        for (d, n) in dims {
            if n > 0 {
                *out.entry(d).or_insert(0) += n;
            }
        }
        GradedSpace { dims: out }
    }

    pub fn dim(&self, degree: Degree) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// `(degree, dim)` pairs with positive dimension, ascending by degree.
    pub fn dims(&self) -> impl Iterator<Item = (Degree, usize)> + '_ {
        self.dims.iter().map(|(&d, &n)| (d, n))
    }

    pub fn contains(&self, b: Basis) -> bool {
        b.index < self.dim(b.degree)
    }

    /// All basis elements in canonical `(degree, index)` order.
    pub fn basis(&self) -> Vec<Basis> {
        self.dims.iter().flat_map(|(&d, &n)| (0..n).map(move |i| Basis::new(d, i))).collect()
    }
}

/// A homogeneous element: a degree and a packed coordinate vector over F₂.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    degree: Degree,
    len: usize,
    words: Vec<u64>,
}

impl Elem {
    pub fn zero(space: &GradedSpace, degree: Degree) -> Self {
        Elem::zero_with_len(degree, space.dim(degree))
    }

    pub fn zero_with_len(degree: Degree, len: usize) -> Self {
        Elem { degree, len, words: vec![0; len.div_ceil(WORD_BITS)] }
    }

    pub fn basis(space: &GradedSpace, b: Basis) -> Result<Self> {
        if !space.contains(b) {
            return Err(Error::Space(format!("basis element {b} not in space")));
        }
        let mut e = Elem::zero(space, b.degree);
        e.flip(b.index);
        Ok(e)
    }

    /// The xor-sum of the listed basis elements, all of which must share `degree`.
    pub fn from_basis_list(space: &GradedSpace, degree: Degree, items: &[Basis]) -> Result<Self> {
        let mut e = Elem::zero(space, degree);
        for &b in items {
            if b.degree != degree || !space.contains(b) {
                return Err(Error::Degree(format!(
                    "basis element {b} does not lie in degree {degree} of the target space"
                )));
            }
            e.flip(b.index);
        }
        Ok(e)
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of the set coordinates, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + bit)
                }
            })
        })
    }

    pub fn basis_terms(&self) -> impl Iterator<Item = Basis> + '_ {
        let d = self.degree;
        self.ones().map(move |i| Basis::new(d, i))
    }

    pub fn xor_assign(&mut self, other: &Elem) {
        if self.len == 0 && other.len == 0 {
            return;
        }
        assert_eq!((self.degree, self.len), (other.degree, other.len), "adding elements of different degrees");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn try_add(&self, other: &Elem) -> Result<Elem> {
        if (self.degree, self.len) != (other.degree, other.len) && !(self.len == 0 && other.len == 0) {
            return Err(Error::Degree(format!(
                "cannot add degree {} and degree {} elements",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }
}

impl std::ops::Add for &Elem {
    type Output = Elem;
    fn add(self, rhs: &Elem) -> Elem {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem(deg {}: ", self.degree)?;
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.basis_terms().map(|b| b.to_string()).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Shape of a multilinear map: how many slots, which spaces, and the degree shift.
///
/// With a `module` space the final slot is distinguished (never sorted into
/// the symmetric block) and reads from that space; the first `arity - 1`
/// slots are symmetric over `domain`.
#[derive(Clone, Debug)]
pub struct Signature {
    pub arity: usize,
    pub shift: Degree,
    pub domain: Arc<GradedSpace>,
    pub module: Option<Arc<GradedSpace>>,
    pub codomain: Arc<GradedSpace>,
}

impl Signature {
    pub fn symmetric(arity: usize, shift: Degree, domain: Arc<GradedSpace>, codomain: Arc<GradedSpace>) -> Self {
        Signature { arity, shift, domain, module: None, codomain }
    }

    pub fn with_module(
        arity: usize,
        shift: Degree,
        domain: Arc<GradedSpace>,
        module: Arc<GradedSpace>,
        codomain: Arc<GradedSpace>,
    ) -> Self {
        Signature { arity, shift, domain, module: Some(module), codomain }
    }

    /// Number of slots that are permuted freely.
    pub fn sym_arity(&self) -> usize {
        if self.module.is_some() {
            self.arity - 1
        } else {
            self.arity
        }
    }

    pub fn slot_space(&self, slot: usize) -> &GradedSpace {
        match &self.module {
            Some(m) if slot + 1 == self.arity => m,
            _ => &self.domain,
        }
    }

    pub fn output_degree(&self, key: &[Basis]) -> Degree {
        key.iter().map(|b| b.degree).sum::<Degree>() + self.shift
    }

    /// Same arity, shift and (by value) spaces.
    pub fn matches(&self, other: &Signature) -> bool {
        self.arity == other.arity
            && self.shift == other.shift
            && *self.domain == *other.domain
            && *self.codomain == *other.codomain
            && match (&self.module, &other.module) {
                (None, None) => true,
                (Some(a), Some(b)) => **a == **b,
                _ => false,
            }
    }

    /// Every canonical key: sorted multisets over the symmetric slots,
    /// followed by each module basis element when there is a module slot.
    pub fn canonical_keys(&self) -> Vec<Vec<Basis>> {
        let sym: Vec<Vec<Basis>> = if self.sym_arity() == 0 {
            vec![Vec::new()]
        } else {
            self.domain.basis().into_iter().combinations_with_replacement(self.sym_arity()).collect()
        };
        match &self.module {
            None => sym,
            Some(m) => {
                let mbasis = m.basis();
                sym.into_iter()
                    .flat_map(|s| {
                        mbasis.iter().map(move |&mb| {
                            let mut k = s.clone();
                            k.push(mb);
                            k
                        })
                    })
                    .collect()
            }
        }
    }

    fn canonicalize(&self, key: &mut [Basis]) -> bool {
        let sym = &mut key[..self.sym_arity()];
        if sym.windows(2).all(|w| w[0] <= w[1]) {
            false
        } else {
            sym.sort_unstable();
            true
        }
    }

    fn check_key(&self, key: &[Basis]) -> Result<()> {
        if key.len() != self.arity {
            return Err(Error::Signature(format!("key of length {} for a map of arity {}", key.len(), self.arity)));
        }
        for (slot, &b) in key.iter().enumerate() {
            if !self.slot_space(slot).contains(b) {
                return Err(Error::Space(format!("input {b} in slot {} is not a basis element", slot + 1)));
            }
        }
        Ok(())
    }
}

/// A symmetric multilinear map over F₂ stored on canonical multi-indices.
///
/// Absent keys mean zero. Every stored value is nonzero and lies in degree
/// `Σ input degrees + shift` of the codomain.
#[derive(Clone, Debug)]
pub struct SymMultiMap {
    sig: Signature,
    alternating: bool,
    table: BTreeMap<Vec<Basis>, Elem>,
}

impl PartialEq for SymMultiMap {
    fn eq(&self, other: &Self) -> bool {
        self.sig.matches(&other.sig) && self.table == other.table
    }
}

impl SymMultiMap {
    pub fn zero(sig: Signature) -> Result<Self> {
        if sig.arity == 0 {
            return Err(Error::Signature("arity must be at least 1".into()));
        }
        Ok(SymMultiMap { sig, alternating: false, table: BTreeMap::new() })
    }

    /// Builds a map by evaluating `value` on every canonical key, in parallel.
    pub fn from_fn<F>(sig: Signature, value: F) -> Result<Self>
    where
        F: Fn(&[Basis]) -> Result<Elem> + Sync,
    {
        let mut map = SymMultiMap::zero(sig)?;
        let keys = map.sig.canonical_keys();
        let entries: Vec<(Vec<Basis>, Elem)> = keys
            .into_par_iter()
            .map(|k| value(&k).map(|v| (k, v)))
            .filter(|r| r.as_ref().map_or(true, |(_, v)| !v.is_zero()))
            .collect::<Result<_>>()?;
        for (k, v) in entries {
            let expected = map.sig.output_degree(&k);
            if v.degree() != expected || v.len() != map.sig.codomain.dim(expected) {
                return Err(Error::Degree(format!(
                    "value at {} has degree {}, expected {expected}",
                    fmt_key(&k),
                    v.degree()
                )));
            }
            map.table.insert(k, v);
        }
        Ok(map)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn arity(&self) -> usize {
        self.sig.arity
    }

    pub fn shift(&self) -> Degree {
        self.sig.shift
    }

    pub fn is_alternating(&self) -> bool {
        self.alternating
    }

    /// Opt in to the alternating condition: repeated symmetric arguments
    /// must map to zero. Fails if an existing entry violates it.
    pub fn set_alternating(&mut self, on: bool) -> Result<()> {
        if on {
            if let Some(k) = self.table.keys().find(|k| has_repeat(&k[..self.sig.sym_arity()])) {
                return Err(Error::Structure(format!(
                    "alternating map has a nonzero value on repeated arguments {}",
                    fmt_key(k)
                )));
            }
        }
        self.alternating = on;
        Ok(())
    }

    /// Xors `out` into the value at `key`. Returns `true` when the key had
    /// to be reordered into canonical form.
    pub fn add_entry(&mut self, key: &[Basis], out: &Elem) -> Result<bool> {
        self.sig.check_key(key)?;
        let mut key = key.to_vec();
        let reordered = self.sig.canonicalize(&mut key);
        let expected = self.sig.output_degree(&key);
        let dim = self.sig.codomain.dim(expected);
        if out.is_zero() && out.len() == dim {
            return Ok(reordered);
        }
        if out.degree() != expected || out.len() != dim {
            return Err(Error::Degree(format!(
                "output for {} must lie in degree {expected} (dim {dim}), got degree {}",
                fmt_key(&key),
                out.degree()
            )));
        }
        if self.alternating && has_repeat(&key[..self.sig.sym_arity()]) {
            return Err(Error::Structure(format!(
                "alternating map cannot take a value on repeated arguments {}",
                fmt_key(&key)
            )));
        }
        let slot = self.table.entry(key.clone()).or_insert_with(|| Elem::zero_with_len(expected, dim));
        slot.xor_assign(out);
        if slot.is_zero() {
            self.table.remove(&key);
        }
        Ok(reordered)
    }

    /// Sets a single basis coefficient of the value at `key`.
    pub fn flip_output_bit(&mut self, key: &[Basis], bit: usize) -> Result<()> {
        let mut key = key.to_vec();
        self.sig.check_key(&key)?;
        self.sig.canonicalize(&mut key);
        let deg = self.sig.output_degree(&key);
        let dim = self.sig.codomain.dim(deg);
        if bit >= dim {
            return Err(Error::Degree(format!("bit {bit} out of range for degree {deg} (dim {dim})")));
        }
        let mut delta = Elem::zero_with_len(deg, dim);
        delta.flip(bit);
        self.add_entry(&key, &delta)?;
        Ok(())
    }

    /// Value on a tuple of basis elements; missing keys are zero.
    pub fn eval_basis(&self, key: &[Basis]) -> Elem {
        let deg = self.sig.output_degree(key);
        let mut k = key.to_vec();
        self.sig.canonicalize(&mut k);
        match self.table.get(&k) {
            Some(v) => v.clone(),
            None => Elem::zero_with_len(deg, self.sig.codomain.dim(deg)),
        }
    }

    /// Like [`eval_basis`](Self::eval_basis) but xors into `acc` without allocating the key twice.
    fn accumulate(&self, key: &[Basis], acc: &mut Elem) {
        let sym = self.sig.sym_arity();
        let mut sorted = key.to_vec();
        sorted[..sym].sort_unstable();
        if let Some(v) = self.table.get(&sorted) {
            acc.xor_assign(v);
        }
    }

    /// Multilinear evaluation on homogeneous arguments.
    pub fn eval(&self, args: &[Elem]) -> Result<Elem> {
        if args.len() != self.sig.arity {
            return Err(Error::Signature(format!("{} arguments for a map of arity {}", args.len(), self.sig.arity)));
        }
        for (slot, a) in args.iter().enumerate() {
            let dim = self.sig.slot_space(slot).dim(a.degree());
            if a.len() != dim {
                return Err(Error::Space(format!(
                    "argument {} has length {} but its space has dimension {dim} in degree {}",
                    slot + 1,
                    a.len(),
                    a.degree()
                )));
            }
        }
        let deg = args.iter().map(|a| a.degree()).sum::<Degree>() + self.sig.shift;
        let mut acc = Elem::zero_with_len(deg, self.sig.codomain.dim(deg));
        if acc.is_empty() || args.iter().any(|a| a.is_zero()) {
            return Ok(acc);
        }
        let terms: Vec<Vec<Basis>> = args.iter().map(|a| a.basis_terms().collect()).collect();
        let mut key = Vec::with_capacity(args.len());
        self.expand(&terms, &mut key, &mut acc);
        Ok(acc)
    }

    fn expand(&self, terms: &[Vec<Basis>], key: &mut Vec<Basis>, acc: &mut Elem) {
        let slot = key.len();
        if slot == terms.len() {
            self.accumulate(key, acc);
            return;
        }
        for &b in &terms[slot] {
            key.push(b);
            self.expand(terms, key, acc);
            key.pop();
        }
    }

    /// Pointwise sum (xor of tables).
    pub fn add(&self, other: &SymMultiMap) -> Result<SymMultiMap> {
        if !self.sig.matches(&other.sig) {
            return Err(Error::Signature(format!(
                "cannot add arity {} shift {} to arity {} shift {}",
                self.sig.arity, self.sig.shift, other.sig.arity, other.sig.shift
            )));
        }
        let mut out = self.clone();
        for (k, v) in &other.table {
            out.add_entry(k, v)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// First nonzero entry in canonical order, if any.
    pub fn witness(&self) -> Option<(&[Basis], &Elem)> {
        self.table.iter().next().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[Basis], &Elem)> {
        self.table.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Entries whose output degree is inconsistent with the shift; empty for
    /// any map built through the public constructors.
    pub fn degree_audit(&self) -> Vec<Vec<Basis>> {
        self.table.iter().filter(|(k, v)| v.degree() != self.sig.output_degree(k)).map(|(k, _)| k.clone()).collect()
    }
}

fn has_repeat(sorted: &[Basis]) -> bool {
    sorted.windows(2).any(|w| w[0] == w[1])
}

pub fn fmt_key(key: &[Basis]) -> String {
    let parts: Vec<String> = key.iter().map(|b| b.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v3() -> Arc<GradedSpace> {
        Arc::new(GradedSpace::new([(0, 3)]))
    }

    fn b(d: Degree, i: usize) -> Basis {
        Basis::new(d, i)
    }

    fn bracket() -> SymMultiMap {
        // e=0, f=1, h=2; l2(e,f) = h
        let v = v3();
        let mut l2 = SymMultiMap::zero(Signature::symmetric(2, 0, v.clone(), v.clone())).unwrap();
        l2.add_entry(&[b(0, 0), b(0, 1)], &Elem::basis(&v, b(0, 2)).unwrap()).unwrap();
        l2
    }

    #[test]
    fn zero_map_is_zero_everywhere() {
        let v = v3();
        let z = SymMultiMap::zero(Signature::symmetric(2, 0, v.clone(), v.clone())).unwrap();
        for key in z.signature().canonical_keys() {
            assert!(z.eval_basis(&key).is_zero());
        }
        let id_zero = SymMultiMap::zero(Signature::symmetric(1, 0, v.clone(), v.clone())).unwrap();
        let x = Elem::basis(&v, b(0, 1)).unwrap();
        assert!(id_zero.eval(&[x]).unwrap().is_zero());
        assert!(SymMultiMap::zero(Signature::symmetric(0, 0, v.clone(), v)).is_err());
    }

    #[test]
    fn self_sum_vanishes() {
        let l2 = bracket();
        assert!(l2.add(&l2).unwrap().is_zero());
        let z = SymMultiMap::zero(l2.signature().clone()).unwrap();
        assert_eq!(l2.add(&z).unwrap(), l2);
    }

    #[test]
    fn eval_symmetry_and_zero_args() {
        let v = v3();
        let l2 = bracket();
        let e = Elem::basis(&v, b(0, 0)).unwrap();
        let f = Elem::basis(&v, b(0, 1)).unwrap();
        let zero = Elem::zero(&v, 0);
        assert_eq!(l2.eval(&[e.clone(), f.clone()]).unwrap(), l2.eval(&[f.clone(), e.clone()]).unwrap());
        assert_eq!(l2.eval(&[f.clone(), e.clone()]).unwrap(), Elem::basis(&v, b(0, 2)).unwrap());
        assert!(l2.eval(&[zero, f.clone()]).unwrap().is_zero());
        // bilinear: (e+f, f) = (e,f) + (f,f)
        let ef = &e + &f;
        assert_eq!(l2.eval(&[ef, f.clone()]).unwrap(), Elem::basis(&v, b(0, 2)).unwrap());
        assert!(l2.eval(&[e]).is_err());
    }

    #[test]
    fn non_canonical_entries_are_reordered() {
        let v = v3();
        let mut m = SymMultiMap::zero(Signature::symmetric(2, 0, v.clone(), v.clone())).unwrap();
        let reordered = m.add_entry(&[b(0, 1), b(0, 0)], &Elem::basis(&v, b(0, 2)).unwrap()).unwrap();
        assert!(reordered);
        assert_eq!(m, bracket());
    }

    #[test]
    fn degree_errors() {
        let v = Arc::new(GradedSpace::new([(0, 1), (1, 1)]));
        let mut m = SymMultiMap::zero(Signature::symmetric(2, 0, v.clone(), v.clone())).unwrap();
        // (0,0) -> degree 0 is fine, -> degree 1 is not
        assert!(m.add_entry(&[b(0, 0), b(0, 0)], &Elem::basis(&v, b(1, 0)).unwrap()).is_err());
        assert!(m.add_entry(&[b(0, 0), b(0, 0)], &Elem::basis(&v, b(0, 0)).unwrap()).is_ok());
        assert!(m.add_entry(&[b(0, 0), b(5, 0)], &Elem::basis(&v, b(0, 0)).unwrap()).is_err());
        assert!(m.degree_audit().is_empty());
    }

    #[test]
    fn dimension_zero_degree_yields_zero() {
        let v = Arc::new(GradedSpace::new([(0, 2)]));
        let l3 = SymMultiMap::zero(Signature::symmetric(2, 1, v.clone(), v.clone())).unwrap();
        let x = Elem::basis(&v, b(0, 0)).unwrap();
        let out = l3.eval(&[x.clone(), x]).unwrap();
        assert!(out.is_zero());
        assert_eq!(out.degree(), 1);
        assert!(out.is_empty());
    }

    #[test]
    fn witness_reports_single_entry() {
        let l2 = bracket();
        let (k, v) = l2.witness().unwrap();
        assert_eq!(k, &[b(0, 0), b(0, 1)]);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![2]);
        let z = SymMultiMap::zero(l2.signature().clone()).unwrap();
        assert!(z.witness().is_none());
    }

    #[test]
    fn module_slot_is_not_sorted() {
        let l = Arc::new(GradedSpace::new([(0, 2)]));
        let m = Arc::new(GradedSpace::new([(0, 2)]));
        let mut k2 = SymMultiMap::zero(Signature::with_module(2, 0, l.clone(), m.clone(), m.clone())).unwrap();
        let reordered = k2.add_entry(&[b(0, 1), b(0, 0)], &Elem::basis(&m, b(0, 0)).unwrap()).unwrap();
        assert!(!reordered);
        assert!(k2.eval_basis(&[b(0, 0), b(0, 1)]).is_zero());
        assert!(!k2.eval_basis(&[b(0, 1), b(0, 0)]).is_zero());
        assert_eq!(k2.signature().canonical_keys().len(), 4);
    }

    #[test]
    fn alternating_flag() {
        let v = v3();
        let mut m = bracket();
        m.set_alternating(true).unwrap();
        let h = Elem::basis(&v, b(0, 2)).unwrap();
        assert!(m.add_entry(&[b(0, 0), b(0, 0)], &h).is_err());
        let mut plain = bracket();
        plain.add_entry(&[b(0, 0), b(0, 0)], &h).unwrap();
        assert!(plain.set_alternating(true).is_err());
    }

    #[test]
    fn bit_packing_across_words() {
        let big = GradedSpace::new([(0, 130)]);
        let mut e = Elem::zero(&big, 0);
        for i in [0, 63, 64, 129] {
            e.flip(i);
        }
        assert_eq!(e.ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(e.count_ones(), 4);
        let sum = &e + &e;
        assert!(sum.is_zero());
    }
}
