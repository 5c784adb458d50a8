//! Independent checks: the two-presentation unshuffle identity at the level
//! of labeled slot rearrangements, a naive pointwise evaluator for every
//! relation, and single-bit mutation of stored structures.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::bundle::{Bundle, Document, Kind};
use crate::error::{Error, Result};
use crate::gfa::{Basis, Degree, Elem, GradedSpace, Signature, SymMultiMap};
use crate::linfty::{LinfAlgebra, LinfModule, LinfMorphism, ModuleMorphism};
use crate::perm::{self, BlockSpec, Perm};

/// One tensor factor of a labeled operator: an `I`-block reading the listed
/// algebra inputs, or the module slot.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    Block(Vec<usize>),
    Module,
}

/// `(I_{c₁} ⊗ ⋯ ⊗ Id ⊗ ⋯ ⊗ I_{c_α})` applied after some rearrangement of
/// the inputs `1..n`, with input `n` the module element.
///
/// The canonical form is the sequence of groups in output order; it records
/// the blocks with their contents, the module position and the slot order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledOperator {
    groups: Vec<Group>,
}

impl LabeledOperator {
    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// Blocks in output order.
    pub fn blocks(&self) -> impl Iterator<Item = &[usize]> {
        self.groups.iter().filter_map(|g| match g {
            Group::Block(b) => Some(b.as_slice()),
            Group::Module => None,
        })
    }

    /// Index of the module group among all groups (0-based).
    pub fn module_position(&self) -> usize {
        self.groups.iter().position(|g| *g == Group::Module).expect("one module group")
    }

    /// Inputs in output order, the module element written as `n`.
    pub fn slot_sequence(&self) -> Vec<usize> {
        let n = self.groups.iter().map(|g| if let Group::Block(b) = g { b.len() } else { 1 }).sum();
        self.groups
            .iter()
            .flat_map(|g| match g {
                Group::Block(b) => b.clone(),
                Group::Module => vec![n],
            })
            .collect()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks().map(|b| b.len()).collect()
    }
}

impl fmt::Display for LabeledOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|g| match g {
                Group::Block(b) => format!("I({})", b.iter().join(",")),
                Group::Module => "m".to_string(),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// A labeled operator together with the slot action of its composite of
/// permutation layers, computed by composing the layers as permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub operator: LabeledOperator,
    pub action: Vec<usize>,
}

pub type Multiset = BTreeMap<LabeledOperator, usize>;

pub fn to_multiset(summands: &[Summand]) -> Multiset {
    let mut m = Multiset::new();
    for s in summands {
        *m.entry(s.operator.clone()).or_insert(0) += 1;
    }
    m
}

fn direct_sum(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().chain(b.iter().map(|&x| x + a.len())).collect()
}

fn perm_images(p: &Perm) -> Vec<usize> {
    p.images()
}

/// Sorted compositions of `m` with their primed unshuffles; for `m = 0` the
/// empty composition with the identity.
fn primed_or_empty(m: usize) -> Vec<(Vec<usize>, Vec<Vec<usize>>)> {
    if m == 0 {
        return vec![(Vec::new(), vec![Vec::new()])];
    }
    perm::ordered_partitions(m)
        .expect("m >= 1")
        .into_iter()
        .map(|spec| {
            let ps = perm::primed_unshuffles(&spec).expect("sorted").iter().map(perm_images).collect();
            (spec.sizes().to_vec(), ps)
        })
        .collect()
}

fn chunk(xs: &[usize], sizes: &[usize]) -> Vec<Group> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for &s in sizes {
        out.push(Group::Block(xs[at..at + s].to_vec()));
        at += s;
    }
    out
}

fn apply_images(images: &[usize], xs: &[usize]) -> Vec<usize> {
    images.iter().map(|&i| xs[i - 1]).collect()
}

/// Summands of `Σ_p Σ_{σ(p)=n} Σ_{φ∈S′} Σ_{ψ∈S′} (I ⊗ ⋯ ⊗ Id ⊗ ⋯ ⊗ I)(φ• ⊗ Id ⊗ ψ•)σ•`.
pub fn lemma4_lhs_summands(n: usize) -> Result<Vec<Summand>> {
    if n < 2 {
        return Err(Error::Perm("the identity is stated for n >= 2".into()));
    }
    let inputs: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    for p in 1..=n {
        let spec = BlockSpec::split(p, n)?;
        let lefts = primed_or_empty(p - 1);
        let rights = primed_or_empty(n - p);
        for sigma in perm::filtered_unshuffles(&spec, p, n)? {
            let ys = sigma.apply(&inputs)?;
            let (left, rest) = ys.split_at(p - 1);
            let right = &rest[1..];
            for (lsizes, phis) in &lefts {
                for phi in phis {
                    for (rsizes, psis) in &rights {
                        for psi in psis {
                            let mut groups = chunk(&apply_images(phi, left), lsizes);
                            groups.push(Group::Module);
                            groups.extend(chunk(&apply_images(psi, right), rsizes));
                            let layer = Perm::from_images(&direct_sum(&direct_sum(phi, &[1]), psi))?;
                            let action = sigma.compose(&layer).apply(&inputs)?;
                            out.push(Summand { operator: LabeledOperator { groups }, action });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Summands of `Σ_{τ∈S′(c₁,…,c_α)} Σ_r Σ_{θ∈S(r+1,α-r), θ(r+1)=α+1} θ•(I_{c₁} ⊗ ⋯ ⊗ I_{c_α} ⊗ Id)(τ• ⊗ Id)`.
pub fn lemma4_rhs_summands(n: usize) -> Result<Vec<Summand>> {
    if n < 2 {
        return Err(Error::Perm("the identity is stated for n >= 2".into()));
    }
    let inputs: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    for spec in perm::ordered_partitions(n - 1)? {
        let alpha = spec.sizes().len();
        for tau in perm::primed_unshuffles(&spec)? {
            let tau_layer = Perm::from_images(&direct_sum(&tau.images(), &[1]))?;
            let ys = tau_layer.apply(&inputs)?;
            let mut items = chunk(&ys[..n - 1], spec.sizes());
            items.push(Group::Module);
            let mut sizes = spec.sizes().to_vec();
            sizes.push(1);
            for r in 0..=alpha {
                for theta in perm::filtered_unshuffles(&BlockSpec::split(r + 1, alpha + 1)?, r + 1, alpha + 1)? {
                    let groups = theta.apply(&items)?;
                    let action = tau_layer.compose(&lift(&theta, &sizes)?).apply(&inputs)?;
                    out.push(Summand { operator: LabeledOperator { groups }, action });
                }
            }
        }
    }
    Ok(out)
}

/// The slot permutation moving whole groups of the given sizes as `θ` moves groups.
fn lift(theta: &Perm, sizes: &[usize]) -> Result<Perm> {
    let mut starts = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for &s in sizes {
        starts.push(at);
        at += s;
    }
    let mut images = Vec::with_capacity(at);
    for k in 1..=theta.len() {
        let g = theta.image(k) - 1;
        images.extend((starts[g]..starts[g] + sizes[g]).map(|i| i + 1));
    }
    Perm::from_images(&images)
}

pub fn lemma4_lhs(n: usize) -> Result<Multiset> {
    Ok(to_multiset(&lemma4_lhs_summands(n)?))
}

pub fn lemma4_rhs(n: usize) -> Result<Multiset> {
    Ok(to_multiset(&lemma4_rhs_summands(n)?))
}

/// Outcome of comparing both sides at one `n`.
#[derive(Clone, Debug, Serialize)]
pub struct Lemma4Report {
    pub n: usize,
    pub lhs_count: usize,
    pub rhs_count: usize,
    pub distinct: usize,
    /// Operators whose multiplicities differ: (form, lhs count, rhs count).
    pub mismatches: Vec<(String, usize, usize)>,
}

impl Lemma4Report {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn check_lemma4(n: usize) -> Result<Lemma4Report> {
    let lhs = lemma4_lhs(n)?;
    let rhs = lemma4_rhs(n)?;
    let mut mismatches = Vec::new();
    for key in lhs.keys().chain(rhs.keys()).collect::<std::collections::BTreeSet<_>>() {
        let a = lhs.get(key).copied().unwrap_or(0);
        let b = rhs.get(key).copied().unwrap_or(0);
        if a != b {
            mismatches.push((key.to_string(), a, b));
        }
    }
    Ok(Lemma4Report {
        n,
        lhs_count: lhs.values().sum(),
        rhs_count: rhs.values().sum(),
        distinct: lhs.len().max(rhs.len()),
        mismatches,
    })
}

/// A structure whose defining relation the naive evaluator can expand.
#[derive(Clone, Copy, Debug)]
pub enum Relation<'a> {
    Jacobi(&'a LinfAlgebra),
    Morphism(&'a LinfMorphism),
    Module(&'a LinfModule),
    ModuleMorphism(&'a ModuleMorphism),
}

impl Relation<'_> {
    pub fn kind(&self) -> Kind {
        match self {
            Relation::Jacobi(_) => Kind::Algebra,
            Relation::Morphism(_) => Kind::Morphism,
            Relation::Module(_) => Kind::Module,
            Relation::ModuleMorphism(_) => Kind::ModuleMorphism,
        }
    }

    pub fn optimized(&self, n: usize) -> Result<SymMultiMap> {
        match self {
            Relation::Jacobi(a) => a.jacobi_residual(n),
            Relation::Morphism(f) => f.morphism_residual(n),
            Relation::Module(m) => m.module_residual(n),
            Relation::ModuleMorphism(h) => h.modhom_residual(n),
        }
    }
}

/// Block-increasing permutations of `0..n` by filtering all of `S_n`; each
/// result lists, for every output position, the input it reads.
fn brute_unshuffles(sizes: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = sizes.iter().sum();
    (0..n)
        .permutations(n)
        .filter(|p| {
            let mut at = 0;
            sizes.iter().all(|&s| {
                let ok = p[at..at + s].windows(2).all(|w| w[0] < w[1]);
                at += s;
                ok
            })
        })
        .collect()
}

/// Set partitions of `0..n` via restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn grow(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            grow(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        grow(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    grow(0, n, &mut Vec::new(), &mut out);
    out
}

/// Multilinear expansion: every choice of one basis term per argument,
/// sorted on the symmetric slots and looked up in the table.
fn naive_eval(map: Option<&SymMultiMap>, codomain: &GradedSpace, shift: Degree, args: &[Elem]) -> Elem {
    let deg = args.iter().map(|a| a.degree()).sum::<Degree>() + shift;
    let mut acc = Elem::zero(codomain, deg);
    let Some(map) = map else { return acc };
    let sym = map.signature().sym_arity();
    let terms: Vec<Vec<Basis>> = args.iter().map(|a| a.basis_terms().collect()).collect();
    if terms.iter().any(|t| t.is_empty()) {
        return acc;
    }
    for choice in terms.into_iter().multi_cartesian_product() {
        let mut key = choice;
        key[..sym].sort();
        let v = map.eval_basis(&key);
        if !v.is_empty() {
            acc.xor_assign(&v);
        }
    }
    acc
}

fn pick<T: Clone>(xs: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| xs[i].clone()).collect()
}

fn with_last<T: Clone>(mut head: Vec<T>, last: T) -> Vec<T> {
    head.push(last);
    head
}

struct Naive<'a> {
    rel: Relation<'a>,
    n: usize,
}

impl Naive<'_> {
    fn op_alg(&self, a: &LinfAlgebra, k: usize, args: &[Elem]) -> Elem {
        naive_eval(a.op(k), a.space(), k as Degree - 2, args)
    }

    fn op_mod(&self, m: &LinfModule, k: usize, args: &[Elem]) -> Elem {
        naive_eval(m.op(k), m.space(), k as Degree - 2, args)
    }

    fn value(&self, xs: &[Elem], codomain: &GradedSpace, deg: Degree) -> Elem {
        let n = self.n;
        let mut acc = Elem::zero(codomain, deg);
        match self.rel {
            Relation::Jacobi(a) => {
                for i in 1..=n {
                    for s in brute_unshuffles(&[i, n - i]) {
                        let inner = self.op_alg(a, i, &pick(xs, &s[..i]));
                        let mut args = vec![inner];
                        args.extend(pick(xs, &s[i..]));
                        acc.xor_assign(&self.op_alg(a, n + 1 - i, &args));
                    }
                }
            }
            Relation::Morphism(f) => {
                let comp = |k: usize, args: &[Elem]| naive_eval(f.comp(k), f.target().space(), k as Degree - 1, args);
                for k in 1..=n {
                    for s in brute_unshuffles(&[k, n - k]) {
                        let inner = self.op_alg(f.source(), k, &pick(xs, &s[..k]));
                        let mut args = vec![inner];
                        args.extend(pick(xs, &s[k..]));
                        acc.xor_assign(&comp(n + 1 - k, &args));
                    }
                }
                for partition in set_partitions(n) {
                    let args: Vec<Elem> = partition.iter().map(|b| comp(b.len(), &pick(xs, b))).collect();
                    acc.xor_assign(&self.op_alg(f.target(), partition.len(), &args));
                }
            }
            Relation::Module(m) => {
                let a = m.algebra();
                let last = n - 1;
                for p in 1..n {
                    for s in brute_unshuffles(&[p, n - p]).into_iter().filter(|s| s[last] == last) {
                        let inner = self.op_alg(a, p, &pick(xs, &s[..p]));
                        let mut args = vec![inner];
                        args.extend(pick(xs, &s[p..]));
                        acc.xor_assign(&self.op_mod(m, n + 1 - p, &args));
                    }
                }
                for p in 1..=n {
                    for s in brute_unshuffles(&[p, n - p]).into_iter().filter(|s| s[p - 1] == last) {
                        let inner = self.op_mod(m, p, &pick(xs, &s[..p]));
                        acc.xor_assign(&self.op_mod(m, n + 1 - p, &with_last(pick(xs, &s[p..]), inner)));
                    }
                }
            }
            Relation::ModuleMorphism(h) => {
                let a = h.algebra();
                let comp = |k: usize, args: &[Elem]| naive_eval(h.comp(k), h.target().space(), k as Degree - 1, args);
                let last = n - 1;
                for i in 1..n {
                    for s in brute_unshuffles(&[i, n - i]).into_iter().filter(|s| s[last] == last) {
                        let inner = self.op_alg(a, i, &pick(xs, &s[..i]));
                        let mut args = vec![inner];
                        args.extend(pick(xs, &s[i..]));
                        acc.xor_assign(&comp(n + 1 - i, &args));
                    }
                }
                for i in 1..=n {
                    for s in brute_unshuffles(&[i, n - i]).into_iter().filter(|s| s[i - 1] == last) {
                        let inner = self.op_mod(h.source(), i, &pick(xs, &s[..i]));
                        acc.xor_assign(&comp(n + 1 - i, &with_last(pick(xs, &s[i..]), inner)));
                    }
                }
                let m = &xs[last];
                for s in 1..=n {
                    let r = n + 1 - s;
                    for t in brute_unshuffles(&[r - 1, s - 1]) {
                        let inner = comp(s, &with_last(pick(xs, &t[r - 1..]), m.clone()));
                        acc.xor_assign(&self.op_mod(h.target(), r, &with_last(pick(xs, &t[..r - 1]), inner)));
                    }
                }
            }
        }
        acc
    }
}

/// The residual of `rel` at arity `n`, expanded term by term on every basis
/// tuple (not only canonical ones) with its own permutation enumeration and
/// multilinear evaluation. Errors if the expansion is not symmetric.
pub fn naive_residual(rel: Relation<'_>, n: usize) -> Result<SymMultiMap> {
    let (max, sig) = match rel {
        Relation::Jacobi(a) => {
            (a.max_arity(), Signature::symmetric(n, n as Degree - 3, a.space().clone(), a.space().clone()))
        }
        Relation::Morphism(f) => (
            f.max_arity(),
            Signature::symmetric(n, n as Degree - 2, f.source().space().clone(), f.target().space().clone()),
        ),
        Relation::Module(m) => (
            m.max_arity(),
            Signature::with_module(
                n,
                n as Degree - 3,
                m.algebra().space().clone(),
                m.space().clone(),
                m.space().clone(),
            ),
        ),
        Relation::ModuleMorphism(h) => (
            h.max_arity(),
            Signature::with_module(
                n,
                n as Degree - 2,
                h.algebra().space().clone(),
                h.source().space().clone(),
                h.target().space().clone(),
            ),
        ),
    };
    if n == 0 || n > max {
        return Err(Error::Truncation { requested: n, max });
    }
    let naive = Naive { rel, n };
    let slots: Vec<Vec<Basis>> = (0..n).map(|i| sig.slot_space(i).basis()).collect();
    let mut values: BTreeMap<Vec<Basis>, Elem> = BTreeMap::new();
    for tuple in slots.into_iter().multi_cartesian_product() {
        let xs: Vec<Elem> =
            tuple.iter().enumerate().map(|(i, &b)| Elem::basis(sig.slot_space(i), b)).collect::<Result<_>>()?;
        let v = naive.value(&xs, &sig.codomain, sig.output_degree(&tuple));
        let mut key = tuple.clone();
        let sym = sig.sym_arity();
        key[..sym].sort();
        match values.get(&key) {
            Some(prev) if *prev != v => {
                return Err(Error::Structure(format!(
                    "{} residual at n = {n} differs between orderings of the same inputs",
                    rel.kind().relation()
                )))
            }
            Some(_) => {}
            None => {
                values.insert(key, v);
            }
        }
    }
    let mut out = SymMultiMap::zero(sig)?;
    for (k, v) in values {
        if !v.is_zero() {
            out.add_entry(&k, &v)?;
        }
    }
    Ok(out)
}

/// Every relation in a bundle.
pub fn relations(bundle: &Bundle) -> Vec<(String, Relation<'_>)> {
    let mut v: Vec<(String, Relation<'_>)> = Vec::new();
    v.extend(bundle.algebras().map(|a| (a.name().to_string(), Relation::Jacobi(a))));
    v.extend(bundle.morphisms().map(|f| (f.name().to_string(), Relation::Morphism(f))));
    v.extend(bundle.modules().map(|m| (m.name().to_string(), Relation::Module(m))));
    v.extend(bundle.module_morphisms().map(|h| (h.name().to_string(), Relation::ModuleMorphism(h))));
    v
}

/// A single flipped output bit of one stored entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mutation {
    pub structure: String,
    pub arity: usize,
    #[serde(rename = "in")]
    pub input: Vec<Basis>,
    pub bit: Basis,
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} arity {} at {} flip {}", self.structure, self.arity, crate::gfa::fmt_key(&self.input), self.bit)
    }
}

/// Every bit of every stored output vector of a canonical document.
pub fn single_bit_mutations(bundle: &Bundle) -> Vec<Mutation> {
    let mut out = Vec::new();
    let mut push_all = |name: &str, maps: Vec<&SymMultiMap>| {
        for m in maps {
            let codomain = &m.signature().codomain;
            for (key, value) in m.entries() {
                let deg = value.degree();
                for index in 0..codomain.dim(deg) {
                    out.push(Mutation {
                        structure: name.to_string(),
                        arity: m.arity(),
                        input: key.to_vec(),
                        bit: Basis::new(deg, index),
                    });
                }
            }
        }
    };
    for a in bundle.algebras() {
        push_all(a.name(), a.ops().map(|(_, m)| m).collect());
    }
    for f in bundle.morphisms() {
        push_all(f.name(), f.comps().map(|(_, m)| m).collect());
    }
    for m in bundle.modules() {
        push_all(m.name(), m.ops().map(|(_, x)| x).collect());
    }
    for h in bundle.module_morphisms() {
        push_all(h.name(), h.comps().map(|(_, m)| m).collect());
    }
    out
}

/// The document with one output bit toggled; dependents see the change
/// because references are re-resolved on load.
pub fn apply_mutation(doc: &Document, m: &Mutation) -> Result<Document> {
    let mut doc = doc.clone();
    let s = doc
        .structures
        .iter_mut()
        .find(|s| s.name() == m.structure)
        .ok_or_else(|| Error::Format(format!("no structure {:?}", m.structure)))?;
    let map = s
        .maps_mut()
        .iter_mut()
        .find(|x| x.arity == m.arity)
        .ok_or_else(|| Error::Format(format!("no arity {} in {}", m.arity, m.structure)))?;
    let entry = map
        .entries
        .iter_mut()
        .find(|e| e.input == m.input)
        .ok_or_else(|| Error::Format(format!("no entry {}", crate::gfa::fmt_key(&m.input))))?;
    match entry.out.iter().position(|&b| b == m.bit) {
        Some(i) => {
            entry.out.remove(i);
        }
        None => {
            entry.out.push(m.bit);
            entry.out.sort();
        }
    }
    Ok(doc)
}

/// Outcome of the single-bit mutation sweep over one bundle.
#[derive(Clone, Debug, Serialize)]
pub struct MutationReport {
    pub total: usize,
    pub killed: usize,
    /// Mutants whose every relation still vanishes.
    pub survivors: Vec<Mutation>,
}

impl MutationReport {
    pub fn kill_rate(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.killed as f64 / self.total as f64
        }
    }
}

/// Applies each single-bit mutation and re-verifies the whole bundle at its truncation arity.
pub fn mutation_sweep(bundle: &Bundle) -> Result<MutationReport> {
    let doc = bundle.to_document();
    let mutations = single_bit_mutations(bundle);
    let mut killed = 0;
    let mut survivors = Vec::new();
    for m in &mutations {
        let mutant = apply_mutation(&doc, m)?;
        let (b, _) = Bundle::from_documents(&[mutant], Some(bundle.max_arity()))?;
        if b.verify(None)?.passed() {
            survivors.push(m.clone());
        } else {
            killed += 1;
        }
    }
    Ok(MutationReport { total: mutations.len(), killed, survivors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::multinomial;

    #[test]
    fn n2_both_sides() {
        let lhs = lemma4_lhs(2).unwrap();
        let rhs = lemma4_rhs(2).unwrap();
        // p=1: m I(1); p=2: I(1) m
        let a = LabeledOperator { groups: vec![Group::Module, Group::Block(vec![1])] };
        let b = LabeledOperator { groups: vec![Group::Block(vec![1]), Group::Module] };
        let expected: Multiset = [(a, 1), (b, 1)].into_iter().collect();
        assert_eq!(lhs, expected);
        assert_eq!(rhs, expected);
    }

    /// Number of (σ, φ, ψ) tuples: Σ_p C(n-1, p-1) · B(p-1) · B(n-p), with B the Bell numbers.
    #[test]
    fn n3_cardinality() {
        let bell = |m: usize| set_partitions(m).len();
        let n = 3;
        let expected: usize = (1..=n).map(|p| multinomial(&[p - 1, n - p]) as usize * bell(p - 1) * bell(n - p)).sum();
        assert_eq!(expected, 6);
        assert_eq!(lemma4_lhs_summands(3).unwrap().len(), expected);
        assert_eq!(lemma4_rhs_summands(3).unwrap().len(), expected);
    }

    #[test]
    fn forms_agree_with_composed_layers() {
        for n in 2..=5 {
            for s in lemma4_lhs_summands(n).unwrap().into_iter().chain(lemma4_rhs_summands(n).unwrap()) {
                assert_eq!(s.operator.slot_sequence(), s.action, "{}", s.operator);
                for b in s.operator.blocks() {
                    assert!(b.windows(2).all(|w| w[0] < w[1]));
                }
                let mut sizes = s.operator.block_sizes();
                sizes.sort();
                assert_eq!(sizes.iter().sum::<usize>(), n - 1);
            }
        }
    }

    #[test]
    fn small_n_identity() {
        for n in 2..=4 {
            let r = check_lemma4(n).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.lhs_count, r.rhs_count);
        }
        assert!(lemma4_lhs(1).is_err());
    }

    #[test]
    fn brute_helpers() {
        assert_eq!(brute_unshuffles(&[2, 2]).len(), 6);
        assert_eq!(brute_unshuffles(&[0, 3]).len(), 1);
        assert_eq!(brute_unshuffles(&[0, 0]).len(), 1);
        assert_eq!(set_partitions(4).len(), 15);
        assert_eq!(set_partitions(0).len(), 1);
    }
}
