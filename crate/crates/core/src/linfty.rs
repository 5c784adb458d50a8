//! L∞-algebras, L∞-morphisms, L∞-modules and module homomorphisms over F₂,
//! with their defining relations as residual maps.
//!
//! Every collection is truncated at a `max_arity` N: operations of arity
//! above N are zero and relations are checked for arities `1..=N`.
//!
//! Slot conventions used by all module-type maps: the first `n - 1` inputs
//! are algebra elements (symmetric), the last input is the module element.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gfa::{Basis, Degree, Elem, GradedSpace, Signature, SymMultiMap};
use crate::perm::{self, BlockSpec, Perm};

/// Which family a collection of maps belongs to; fixes the degree shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    /// `l_k`, `k_n`: shift `k - 2`
    Operation,
    /// `f_n`, `h_n`: shift `n - 1`
    Morphism,
}

impl Family {
    fn shift(self, arity: usize) -> Degree {
        match self {
            Family::Operation => arity as Degree - 2,
            Family::Morphism => arity as Degree - 1,
        }
    }
}

/// A truncated sequence of maps `m_1, …, m_N` sharing spaces.
#[derive(Clone, Debug, PartialEq)]
struct Tower {
    family: Family,
    domain: Arc<GradedSpace>,
    module: Option<Arc<GradedSpace>>,
    codomain: Arc<GradedSpace>,
    maps: Vec<SymMultiMap>,
}

impl Tower {
    fn new(
        family: Family,
        domain: Arc<GradedSpace>,
        module: Option<Arc<GradedSpace>>,
        codomain: Arc<GradedSpace>,
        max_arity: usize,
    ) -> Result<Self> {
        if max_arity == 0 {
            return Err(Error::Structure("max_arity must be at least 1".into()));
        }
        let mut t = Tower { family, domain, module, codomain, maps: Vec::new() };
        t.maps = (1..=max_arity).map(|k| SymMultiMap::zero(t.signature(k))).collect::<Result<_>>()?;
        Ok(t)
    }

    fn signature(&self, arity: usize) -> Signature {
        Signature {
            arity,
            shift: self.family.shift(arity),
            domain: self.domain.clone(),
            module: self.module.clone(),
            codomain: self.codomain.clone(),
        }
    }

    fn max_arity(&self) -> usize {
        self.maps.len()
    }

    fn get(&self, k: usize) -> Option<&SymMultiMap> {
        k.checked_sub(1).and_then(|i| self.maps.get(i))
    }

    fn get_mut(&mut self, k: usize) -> Option<&mut SymMultiMap> {
        k.checked_sub(1).and_then(move |i| self.maps.get_mut(i))
    }

    fn set(&mut self, k: usize, map: SymMultiMap) -> Result<()> {
        let expected = self.signature(k);
        if !map.signature().matches(&expected) {
            return Err(Error::Signature(format!(
                "component {k} must have arity {k}, shift {} and the declared spaces",
                expected.shift
            )));
        }
        let max = self.max_arity();
        let slot = self.get_mut(k).ok_or(Error::Truncation { requested: k, max })?;
        *slot = map;
        Ok(())
    }

    /// `m_k(args)`, or zero in the right degree when `k > N`.
    fn eval(&self, k: usize, args: &[Elem]) -> Result<Elem> {
        match self.get(k) {
            Some(m) => m.eval(args),
            None => {
                let deg = args.iter().map(|a| a.degree()).sum::<Degree>() + self.family.shift(k);
                Ok(Elem::zero(&self.codomain, deg))
            }
        }
    }

    fn resized(&self, max_arity: usize) -> Result<(Tower, Vec<usize>)> {
        let mut out =
            Tower::new(self.family, self.domain.clone(), self.module.clone(), self.codomain.clone(), max_arity)?;
        let mut dropped = Vec::new();
        for (i, m) in self.maps.iter().enumerate() {
            if i < max_arity {
                out.maps[i] = m.clone();
            } else if !m.is_zero() {
                dropped.push(i + 1);
            }
        }
        Ok((out, dropped))
    }

    fn highest_nonzero(&self) -> usize {
        self.maps.iter().rposition(|m| !m.is_zero()).map_or(0, |i| i + 1)
    }
}

fn check_arity(n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Structure("relations are indexed by n >= 1".into()));
    }
    if n > max {
        return Err(Error::Truncation { requested: n, max });
    }
    Ok(())
}

/// Unit vectors for a basis tuple.
fn unit_args(key: &[Basis], sig: &Signature) -> Vec<Elem> {
    key.iter()
        .enumerate()
        .map(|(slot, &b)| Elem::basis(sig.slot_space(slot), b).expect("canonical keys come from the space"))
        .collect()
}

fn concat(head: Elem, tail: &[Elem]) -> Vec<Elem> {
    let mut v = Vec::with_capacity(tail.len() + 1);
    v.push(head);
    v.extend_from_slice(tail);
    v
}

/// `(i, n-i)`-unshuffles in `S_n`, anchored when requested.
fn split_unshuffles(i: usize, n: usize, anchor: Option<(usize, usize)>) -> Vec<Perm> {
    let spec = BlockSpec::split(i, n).expect("1 <= i <= n");
    match anchor {
        Some((p, v)) => perm::filtered_unshuffles(&spec, p, v).expect("anchor in range"),
        None => perm::unshuffles(&spec),
    }
}

/// Unshuffles for a two-block split where either block may be empty.
/// Returns permutations of `S_total`; for `total = 0` the empty permutation.
fn padded_unshuffles(first: usize, second: usize) -> Vec<Perm> {
    match (first, second) {
        (0, 0) => vec![Perm::empty()],
        (0, n) | (n, 0) => vec![Perm::identity(n).expect("n >= 1")],
        (a, b) => perm::unshuffles(&BlockSpec::new(vec![a, b]).expect("positive")),
    }
}

/// Nondecreasing compositions of `n` together with their primed unshuffles.
pub(crate) fn primed_families(n: usize) -> Vec<(BlockSpec, Vec<Perm>)> {
    perm::ordered_partitions(n)
        .expect("n >= 1")
        .into_iter()
        .map(|spec| {
            let ps = perm::primed_unshuffles(&spec).expect("ordered partitions are sorted");
            (spec, ps)
        })
        .collect()
}

/// An L∞-algebra `(V, {l_k})` truncated at arity N.
#[derive(Clone, Debug)]
pub struct LinfAlgebra {
    name: String,
    ops: Tower,
}

impl PartialEq for LinfAlgebra {
    /// Structural equality; names are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.ops == other.ops
    }
}

impl LinfAlgebra {
    /// The algebra with all brackets zero.
    pub fn abelian(name: impl Into<String>, space: Arc<GradedSpace>, max_arity: usize) -> Result<Self> {
        Ok(LinfAlgebra {
            name: name.into(),
            ops: Tower::new(Family::Operation, space.clone(), None, space, max_arity)?,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.ops.domain
    }

    pub fn max_arity(&self) -> usize {
        self.ops.max_arity()
    }

    /// Signature required of `l_k`.
    pub fn op_signature(&self, k: usize) -> Signature {
        self.ops.signature(k)
    }

    /// `l_k`; `None` above the truncation arity.
    pub fn op(&self, k: usize) -> Option<&SymMultiMap> {
        self.ops.get(k)
    }

    pub fn op_mut(&mut self, k: usize) -> Option<&mut SymMultiMap> {
        self.ops.get_mut(k)
    }

    pub fn set_op(&mut self, k: usize, map: SymMultiMap) -> Result<()> {
        self.ops.set(k, map)
    }

    pub fn ops(&self) -> impl Iterator<Item = (usize, &SymMultiMap)> {
        self.ops.maps.iter().enumerate().map(|(i, m)| (i + 1, m))
    }

    pub fn highest_nonzero_arity(&self) -> usize {
        self.ops.highest_nonzero()
    }

    /// Same operations with a different truncation; also returns the arities
    /// of nonzero operations that were cut off.
    pub fn with_max_arity(&self, max_arity: usize) -> Result<(Self, Vec<usize>)> {
        let (ops, dropped) = self.ops.resized(max_arity)?;
        Ok((LinfAlgebra { name: self.name.clone(), ops }, dropped))
    }

    pub(crate) fn eval_op(&self, k: usize, args: &[Elem]) -> Result<Elem> {
        self.ops.eval(k, args)
    }

    /// `Σ_{i+j=n+1} Σ_{σ∈S(i,n-i)} l_j(l_i(x_σ(1..i)), x_σ(i+1..n))`.
    pub fn jacobi_residual(&self, n: usize) -> Result<SymMultiMap> {
        check_arity(n, self.max_arity())?;
        let sig = Signature::symmetric(n, n as Degree - 3, self.space().clone(), self.space().clone());
        let plan: Vec<(usize, Vec<Perm>)> = (1..=n).map(|i| (i, split_unshuffles(i, n, None))).collect();
        SymMultiMap::from_fn(sig.clone(), |key| {
            let xs = unit_args(key, &sig);
            let mut acc = Elem::zero(self.space(), sig.output_degree(key));
            for (i, sigmas) in &plan {
                let j = n + 1 - i;
                for s in sigmas {
                    let ys = s.apply(&xs)?;
                    let inner = self.eval_op(*i, &ys[..*i])?;
                    if inner.is_zero() {
                        continue;
                    }
                    acc.xor_assign(&self.eval_op(j, &concat(inner, &ys[*i..]))?);
                }
            }
            Ok(acc)
        })
    }
}

/// An L∞-morphism `{f_n}` from `source` to `target`.
#[derive(Clone, Debug)]
pub struct LinfMorphism {
    name: String,
    source: Arc<LinfAlgebra>,
    target: Arc<LinfAlgebra>,
    comps: Tower,
}

impl PartialEq for LinfMorphism {
    fn eq(&self, other: &Self) -> bool {
        *self.source == *other.source && *self.target == *other.target && self.comps == other.comps
    }
}

impl LinfMorphism {
    /// All components zero.
    pub fn zero(
        name: impl Into<String>,
        source: Arc<LinfAlgebra>,
        target: Arc<LinfAlgebra>,
        max_arity: usize,
    ) -> Result<Self> {
        let comps = Tower::new(Family::Morphism, source.space().clone(), None, target.space().clone(), max_arity)?;
        Ok(LinfMorphism { name: name.into(), source, target, comps })
    }

    /// Identity on the underlying spaces: `f_1 = id`, `f_n = 0` otherwise.
    /// The target is a distinct handle so the two algebras may be stored separately.
    pub fn identity(
        name: impl Into<String>,
        source: Arc<LinfAlgebra>,
        target: Arc<LinfAlgebra>,
        max_arity: usize,
    ) -> Result<Self> {
        if **source.space() != **target.space() {
            return Err(Error::Structure("identity morphism needs equal spaces".into()));
        }
        let mut f = LinfMorphism::zero(name, source, target, max_arity)?;
        let mut f1 = SymMultiMap::zero(f.comp_signature(1))?;
        for b in f.source.space().basis() {
            f1.add_entry(&[b], &Elem::basis(f.target.space(), b)?)?;
        }
        f.set_comp(1, f1)?;
        Ok(f)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn source(&self) -> &Arc<LinfAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LinfAlgebra> {
        &self.target
    }

    pub fn max_arity(&self) -> usize {
        self.comps.max_arity()
    }

    pub fn comp_signature(&self, n: usize) -> Signature {
        self.comps.signature(n)
    }

    pub fn comp(&self, n: usize) -> Option<&SymMultiMap> {
        self.comps.get(n)
    }

    pub fn comp_mut(&mut self, n: usize) -> Option<&mut SymMultiMap> {
        self.comps.get_mut(n)
    }

    pub fn set_comp(&mut self, n: usize, map: SymMultiMap) -> Result<()> {
        self.comps.set(n, map)
    }

    pub fn comps(&self) -> impl Iterator<Item = (usize, &SymMultiMap)> {
        self.comps.maps.iter().enumerate().map(|(i, m)| (i + 1, m))
    }

    pub fn highest_nonzero_arity(&self) -> usize {
        self.comps.highest_nonzero()
    }

    /// `f_n = 0` for all `n >= 2`.
    pub fn is_strict(&self) -> bool {
        self.comps.maps.iter().skip(1).all(|m| m.is_zero())
    }

    pub fn with_max_arity(&self, max_arity: usize) -> Result<(Self, Vec<usize>)> {
        let (comps, dropped) = self.comps.resized(max_arity)?;
        Ok((LinfMorphism { comps, ..self.clone() }, dropped))
    }

    pub(crate) fn eval_comp(&self, n: usize, args: &[Elem]) -> Result<Elem> {
        self.comps.eval(n, args)
    }

    /// Left side xor right side of the morphism relation at arity `n`:
    /// `Σ f_j(l_k(x_σ…), x_σ…)` over `j+k=n+1`, `σ∈S(k,n-k)`, plus
    /// `Σ l'_r(f_{i₁}(…), …, f_{i_r}(…))` over sorted compositions and `τ∈S′`.
    pub fn morphism_residual(&self, n: usize) -> Result<SymMultiMap> {
        check_arity(n, self.max_arity())?;
        let src = self.source.space().clone();
        let tgt = self.target.space().clone();
        let sig = Signature::symmetric(n, n as Degree - 2, src, tgt.clone());
        let left: Vec<(usize, Vec<Perm>)> = (1..=n).map(|k| (k, split_unshuffles(k, n, None))).collect();
        let right = primed_families(n);
        SymMultiMap::from_fn(sig.clone(), |key| {
            let xs = unit_args(key, &sig);
            let mut acc = Elem::zero(&tgt, sig.output_degree(key));
            for (k, sigmas) in &left {
                let j = n + 1 - k;
                for s in sigmas {
                    let ys = s.apply(&xs)?;
                    let inner = self.source.eval_op(*k, &ys[..*k])?;
                    if inner.is_zero() {
                        continue;
                    }
                    acc.xor_assign(&self.eval_comp(j, &concat(inner, &ys[*k..]))?);
                }
            }
            for (spec, taus) in &right {
                let r = spec.sizes().len();
                for t in taus {
                    let ys = t.apply(&xs)?;
                    let args = spec
                        .chunk(&ys)
                        .into_iter()
                        .zip(spec.sizes())
                        .map(|(block, &size)| self.eval_comp(size, block))
                        .collect::<Result<Vec<_>>>()?;
                    if args.iter().any(|a| a.is_zero()) {
                        continue;
                    }
                    acc.xor_assign(&self.target.eval_op(r, &args)?);
                }
            }
            Ok(acc)
        })
    }
}

/// An L∞-module `(M, {k_n})` over an L∞-algebra.
#[derive(Clone, Debug)]
pub struct LinfModule {
    name: String,
    algebra: Arc<LinfAlgebra>,
    ops: Tower,
}

impl PartialEq for LinfModule {
    fn eq(&self, other: &Self) -> bool {
        *self.algebra == *other.algebra && self.ops == other.ops
    }
}

impl LinfModule {
    /// The module with every `k_n` zero.
    pub fn trivial(
        name: impl Into<String>,
        algebra: Arc<LinfAlgebra>,
        space: Arc<GradedSpace>,
        max_arity: usize,
    ) -> Result<Self> {
        let ops = Tower::new(Family::Operation, algebra.space().clone(), Some(space.clone()), space, max_arity)?;
        Ok(LinfModule { name: name.into(), algebra, ops })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn algebra(&self) -> &Arc<LinfAlgebra> {
        &self.algebra
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.ops.codomain
    }

    pub fn max_arity(&self) -> usize {
        self.ops.max_arity()
    }

    pub fn op_signature(&self, n: usize) -> Signature {
        self.ops.signature(n)
    }

    pub fn op(&self, n: usize) -> Option<&SymMultiMap> {
        self.ops.get(n)
    }

    pub fn op_mut(&mut self, n: usize) -> Option<&mut SymMultiMap> {
        self.ops.get_mut(n)
    }

    pub fn set_op(&mut self, n: usize, map: SymMultiMap) -> Result<()> {
        self.ops.set(n, map)
    }

    pub fn ops(&self) -> impl Iterator<Item = (usize, &SymMultiMap)> {
        self.ops.maps.iter().enumerate().map(|(i, m)| (i + 1, m))
    }

    pub fn highest_nonzero_arity(&self) -> usize {
        self.ops.highest_nonzero()
    }

    pub fn with_max_arity(&self, max_arity: usize) -> Result<(Self, Vec<usize>)> {
        let (ops, dropped) = self.ops.resized(max_arity)?;
        Ok((LinfModule { ops, ..self.clone() }, dropped))
    }

    pub(crate) fn eval_op(&self, n: usize, args: &[Elem]) -> Result<Elem> {
        self.ops.eval(n, args)
    }

    /// The module relation at arity `n` (slot `n` is the module element):
    /// `Σ_{p<n, σ(n)=n} k_q(l_p(…), …) + Σ_{σ(p)=n} k_q(δ•(k_p(…), …))`.
    pub fn module_residual(&self, n: usize) -> Result<SymMultiMap> {
        check_arity(n, self.max_arity())?;
        let sig = Signature::with_module(
            n,
            n as Degree - 3,
            self.algebra.space().clone(),
            self.space().clone(),
            self.space().clone(),
        );
        let bracket_terms: Vec<(usize, Vec<Perm>)> =
            (1..n).map(|p| (p, split_unshuffles(p, n, Some((n, n))))).collect();
        let action_terms: Vec<(usize, Vec<Perm>, Perm)> = (1..=n)
            .map(|p| (p, split_unshuffles(p, n, Some((p, n))), perm::slot_rotation(n, p).expect("p <= n")))
            .collect();
        SymMultiMap::from_fn(sig.clone(), |key| {
            let xs = unit_args(key, &sig);
            let mut acc = Elem::zero(self.space(), sig.output_degree(key));
            for (p, sigmas) in &bracket_terms {
                let q = n + 1 - p;
                for s in sigmas {
                    let ys = s.apply(&xs)?;
                    let inner = self.algebra.eval_op(*p, &ys[..*p])?;
                    if inner.is_zero() {
                        continue;
                    }
                    acc.xor_assign(&self.eval_op(q, &concat(inner, &ys[*p..]))?);
                }
            }
            for (p, sigmas, rot) in &action_terms {
                let q = n + 1 - p;
                for s in sigmas {
                    let ys = s.apply(&xs)?;
                    let inner = self.eval_op(*p, &ys[..*p])?;
                    if inner.is_zero() {
                        continue;
                    }
                    let args = rot.apply(&concat(inner, &ys[*p..]))?;
                    acc.xor_assign(&self.eval_op(q, &args)?);
                }
            }
            Ok(acc)
        })
    }
}

/// An L∞-module homomorphism `{h_n}` between modules over one algebra.
#[derive(Clone, Debug)]
pub struct ModuleMorphism {
    name: String,
    source: Arc<LinfModule>,
    target: Arc<LinfModule>,
    comps: Tower,
}

impl PartialEq for ModuleMorphism {
    fn eq(&self, other: &Self) -> bool {
        *self.source == *other.source && *self.target == *other.target && self.comps == other.comps
    }
}

fn same_module(a: &Arc<LinfModule>, b: &Arc<LinfModule>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn same_algebra(a: &Arc<LinfAlgebra>, b: &Arc<LinfAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl ModuleMorphism {
    pub fn zero(
        name: impl Into<String>,
        source: Arc<LinfModule>,
        target: Arc<LinfModule>,
        max_arity: usize,
    ) -> Result<Self> {
        if !same_algebra(source.algebra(), target.algebra()) {
            return Err(Error::Structure(format!(
                "modules {} and {} live over different algebras",
                source.name(),
                target.name()
            )));
        }
        let comps = Tower::new(
            Family::Morphism,
            source.algebra().space().clone(),
            Some(source.space().clone()),
            target.space().clone(),
            max_arity,
        )?;
        Ok(ModuleMorphism { name: name.into(), source, target, comps })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn source(&self) -> &Arc<LinfModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LinfModule> {
        &self.target
    }

    pub fn algebra(&self) -> &Arc<LinfAlgebra> {
        self.source.algebra()
    }

    pub fn max_arity(&self) -> usize {
        self.comps.max_arity()
    }

    pub fn comp_signature(&self, n: usize) -> Signature {
        self.comps.signature(n)
    }

    pub fn comp(&self, n: usize) -> Option<&SymMultiMap> {
        self.comps.get(n)
    }

    pub fn comp_mut(&mut self, n: usize) -> Option<&mut SymMultiMap> {
        self.comps.get_mut(n)
    }

    pub fn set_comp(&mut self, n: usize, map: SymMultiMap) -> Result<()> {
        self.comps.set(n, map)
    }

    pub fn comps(&self) -> impl Iterator<Item = (usize, &SymMultiMap)> {
        self.comps.maps.iter().enumerate().map(|(i, m)| (i + 1, m))
    }

    pub fn highest_nonzero_arity(&self) -> usize {
        self.comps.highest_nonzero()
    }

    pub fn with_max_arity(&self, max_arity: usize) -> Result<(Self, Vec<usize>)> {
        let (comps, dropped) = self.comps.resized(max_arity)?;
        Ok((ModuleMorphism { comps, ..self.clone() }, dropped))
    }

    pub(crate) fn eval_comp(&self, n: usize, args: &[Elem]) -> Result<Elem> {
        self.comps.eval(n, args)
    }

    /// `(Id_M)_1 = id`, `(Id_M)_r = 0` for `r >= 2`.
    pub fn identity(module: Arc<LinfModule>) -> Result<Self> {
        let n = module.max_arity();
        ModuleMorphism::identity_between(format!("id_{}", module.name()), module.clone(), module, n)
    }

    /// `h_1 = id` between two modules with the same space (for instance a
    /// module and a separately stored copy of it).
    pub fn identity_between(
        name: impl Into<String>,
        source: Arc<LinfModule>,
        target: Arc<LinfModule>,
        max_arity: usize,
    ) -> Result<Self> {
        if **source.space() != **target.space() {
            return Err(Error::Structure("identity needs equal module spaces".into()));
        }
        let mut h = ModuleMorphism::zero(name, source, target, max_arity)?;
        let mut h1 = SymMultiMap::zero(h.comp_signature(1))?;
        for b in h.source.space().basis() {
            h1.add_entry(&[b], &Elem::basis(h.target.space(), b)?)?;
        }
        h.set_comp(1, h1)?;
        Ok(h)
    }

    /// The module homomorphism relation at arity `n`, left side xor right side.
    ///
    /// Right side: `τ` unshuffles the `n - 1` algebra inputs into a leading
    /// block of `r - 1` (fed to `k'_r`) and a trailing block of `s - 1`
    /// (fed to `h_s` with the module element); the output of `h_s` is the
    /// last input of `k'_r`.
    pub fn modhom_residual(&self, n: usize) -> Result<SymMultiMap> {
        check_arity(n, self.max_arity())?;
        let algebra = self.algebra().clone();
        let target_space = self.target.space().clone();
        let sig = Signature::with_module(
            n,
            n as Degree - 2,
            algebra.space().clone(),
            self.source.space().clone(),
            target_space.clone(),
        );
        let bracket_terms: Vec<(usize, Vec<Perm>)> =
            (1..n).map(|i| (i, split_unshuffles(i, n, Some((n, n))))).collect();
        let action_terms: Vec<(usize, Vec<Perm>, Perm)> = (1..=n)
            .map(|i| (i, split_unshuffles(i, n, Some((i, n))), perm::slot_rotation(n, i).expect("i <= n")))
            .collect();
        let right_terms: Vec<(usize, Vec<Perm>)> = (1..=n).map(|s| (s, padded_unshuffles(n - s, s - 1))).collect();
        SymMultiMap::from_fn(sig.clone(), |key| {
            let xs = unit_args(key, &sig);
            let mut acc = Elem::zero(&target_space, sig.output_degree(key));
            for (i, sigmas) in &bracket_terms {
                let j = n + 1 - i;
                for s in sigmas {
                    let ys = s.apply(&xs)?;
                    let inner = algebra.eval_op(*i, &ys[..*i])?;
                    if inner.is_zero() {
                        continue;
                    }
                    acc.xor_assign(&self.eval_comp(j, &concat(inner, &ys[*i..]))?);
                }
            }
            for (i, sigmas, rot) in &action_terms {
                let j = n + 1 - i;
                for s in sigmas {
                    let ys = s.apply(&xs)?;
                    let inner = self.source.eval_op(*i, &ys[..*i])?;
                    if inner.is_zero() {
                        continue;
                    }
                    acc.xor_assign(&self.eval_comp(j, &rot.apply(&concat(inner, &ys[*i..]))?)?);
                }
            }
            let (alg, m) = xs.split_at(n - 1);
            for (s, taus) in &right_terms {
                let r = n + 1 - s;
                for t in taus {
                    let ys = t.apply(alg)?;
                    let (lead, trail) = ys.split_at(r - 1);
                    let mut h_args = trail.to_vec();
                    h_args.push(m[0].clone());
                    let inner = self.eval_comp(*s, &h_args)?;
                    if inner.is_zero() {
                        continue;
                    }
                    let mut k_args = lead.to_vec();
                    k_args.push(inner);
                    acc.xor_assign(&self.target.eval_op(r, &k_args)?);
                }
            }
            Ok(acc)
        })
    }

    /// `(g∘f)_n = Σ_{i+j=n+1} Σ_{σ(i)=n} g_j(δ•(f_i(x_σ(1..i)), x_σ(i+1..n)))`,
    /// where `self` is `f` and `g` acts second. Truncation is the smaller of the two.
    pub fn then(&self, g: &ModuleMorphism) -> Result<ModuleMorphism> {
        compose(g, self)
    }
}

/// `g ∘ f` for `f: A → B`, `g: B → C`.
pub fn compose(g: &ModuleMorphism, f: &ModuleMorphism) -> Result<ModuleMorphism> {
    if !same_module(f.target(), g.source()) {
        return Err(Error::Structure(format!(
            "cannot compose: target of {} is not the source of {}",
            f.name(),
            g.name()
        )));
    }
    if !same_algebra(f.algebra(), g.algebra()) {
        return Err(Error::Structure("cannot compose morphisms over different algebras".into()));
    }
    let max = f.max_arity().min(g.max_arity());
    let mut out =
        ModuleMorphism::zero(format!("{}_after_{}", g.name(), f.name()), f.source().clone(), g.target().clone(), max)?;
    for n in 1..=max {
        let sig = out.comp_signature(n);
        let terms: Vec<(usize, Vec<Perm>, Perm)> = (1..=n)
            .map(|i| (i, split_unshuffles(i, n, Some((i, n))), perm::slot_rotation(n, i).expect("i <= n")))
            .collect();
        let target_space = g.target().space().clone();
        let comp = SymMultiMap::from_fn(sig.clone(), |key| {
            let xs = unit_args(key, &sig);
            let mut acc = Elem::zero(&target_space, sig.output_degree(key));
            for (i, sigmas, rot) in &terms {
                let j = n + 1 - i;
                for s in sigmas {
                    let ys = s.apply(&xs)?;
                    let inner = f.eval_comp(*i, &ys[..*i])?;
                    if inner.is_zero() {
                        continue;
                    }
                    acc.xor_assign(&g.eval_comp(j, &rot.apply(&concat(inner, &ys[*i..]))?)?);
                }
            }
            Ok(acc)
        })?;
        out.set_comp(n, comp)?;
    }
    Ok(out)
}

/// First differing component of two collections, with a witness entry.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentDiff {
    pub arity: usize,
    pub key: Vec<Basis>,
    pub difference: Elem,
}

/// Componentwise comparison of two module morphisms up to the smaller truncation.
pub fn diff_components(a: &ModuleMorphism, b: &ModuleMorphism) -> Result<Vec<ComponentDiff>> {
    let max = a.max_arity().min(b.max_arity());
    let mut out = Vec::new();
    for n in 1..=max {
        let d = a.comp(n).expect("n <= max").add(b.comp(n).expect("n <= max"))?;
        if let Some((k, v)) = d.witness() {
            out.push(ComponentDiff { arity: n, key: k.to_vec(), difference: v.clone() });
        }
    }
    Ok(out)
}

/// Componentwise comparison of two modules' operations.
pub fn diff_module_ops(a: &LinfModule, b: &LinfModule) -> Result<Vec<ComponentDiff>> {
    let max = a.max_arity().min(b.max_arity());
    let mut out = Vec::new();
    for n in 1..=max {
        let d = a.op(n).expect("n <= max").add(b.op(n).expect("n <= max"))?;
        if let Some((k, v)) = d.witness() {
            out.push(ComponentDiff { arity: n, key: k.to_vec(), difference: v.clone() });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(d: Degree, i: usize) -> Basis {
        Basis::new(d, i)
    }

    /// e=0, f=1, h=2 in degree 0 with l2(e,f)=h.
    fn heisenberg(max: usize) -> Arc<LinfAlgebra> {
        let v = Arc::new(GradedSpace::new([(0, 3)]));
        let mut a = LinfAlgebra::abelian("heis", v.clone(), max).unwrap();
        let mut l2 = SymMultiMap::zero(a.op_signature(2)).unwrap();
        l2.add_entry(&[b(0, 0), b(0, 1)], &Elem::basis(&v, b(0, 2)).unwrap()).unwrap();
        a.set_op(2, l2).unwrap();
        Arc::new(a)
    }

    fn adjoint(alg: &Arc<LinfAlgebra>) -> Arc<LinfModule> {
        let mut m = LinfModule::trivial("adj", alg.clone(), alg.space().clone(), alg.max_arity()).unwrap();
        let l2 = alg.op(2).unwrap();
        let mut k2 = SymMultiMap::zero(m.op_signature(2)).unwrap();
        for x in alg.space().basis() {
            for y in alg.space().basis() {
                k2.add_entry(&[x, y], &l2.eval_basis(&[x, y])).unwrap();
            }
        }
        m.set_op(2, k2).unwrap();
        Arc::new(m)
    }

    #[test]
    fn heisenberg_jacobi_vanishes() {
        let h = heisenberg(6);
        for n in 1..=6 {
            assert!(h.jacobi_residual(n).unwrap().is_zero(), "n = {n}");
        }
        assert!(matches!(h.jacobi_residual(7), Err(Error::Truncation { .. })));
        assert!(h.jacobi_residual(0).is_err());
    }

    #[test]
    fn jacobi_n1_is_differential_square() {
        let v = Arc::new(GradedSpace::new([(0, 1), (1, 1)]));
        let mut a = LinfAlgebra::abelian("d", v.clone(), 3).unwrap();
        let mut l1 = SymMultiMap::zero(a.op_signature(1)).unwrap();
        l1.add_entry(&[b(1, 0)], &Elem::basis(&v, b(0, 0)).unwrap()).unwrap();
        a.set_op(1, l1).unwrap();
        assert!(a.jacobi_residual(1).unwrap().is_zero());
    }

    #[test]
    fn jacobi_detects_non_lie_bracket() {
        // [e,f]=f, [f,h]=e, [e,h]=0 is not a Lie bracket over F2
        let v = Arc::new(GradedSpace::new([(0, 3)]));
        let mut a = LinfAlgebra::abelian("bad", v.clone(), 3).unwrap();
        let mut l2 = SymMultiMap::zero(a.op_signature(2)).unwrap();
        l2.add_entry(&[b(0, 0), b(0, 1)], &Elem::basis(&v, b(0, 1)).unwrap()).unwrap();
        l2.add_entry(&[b(0, 1), b(0, 2)], &Elem::basis(&v, b(0, 0)).unwrap()).unwrap();
        a.set_op(2, l2).unwrap();
        // brute force: [[x,y],z] + [[y,z],x] + [[z,x],y] on (e,f,h)
        let br = a.op(2).unwrap();
        let e = |i| Elem::basis(&v, b(0, i)).unwrap();
        let jac = |x: usize, y: usize, z: usize| {
            let xy = br.eval(&[e(x), e(y)]).unwrap();
            let yz = br.eval(&[e(y), e(z)]).unwrap();
            let zx = br.eval(&[e(z), e(x)]).unwrap();
            &(&br.eval(&[xy, e(z)]).unwrap() + &br.eval(&[yz, e(x)]).unwrap()) + &br.eval(&[zx, e(y)]).unwrap()
        };
        let r3 = a.jacobi_residual(3).unwrap();
        assert_eq!(r3.eval_basis(&[b(0, 0), b(0, 1), b(0, 2)]), jac(0, 1, 2));
        assert!(!r3.is_zero());
    }

    #[test]
    fn adjoint_module_relation() {
        let h = heisenberg(6);
        let m = adjoint(&h);
        for n in 1..=6 {
            assert!(m.module_residual(n).unwrap().is_zero(), "n = {n}");
        }
    }

    #[test]
    fn module_n2_is_leibniz() {
        // L: l1 from degree 1 to degree 0; M: k1 and k2 chosen to break Leibniz
        let l = Arc::new(GradedSpace::new([(0, 1), (1, 1)]));
        let mut alg = LinfAlgebra::abelian("l", l.clone(), 2).unwrap();
        let mut l1 = SymMultiMap::zero(alg.op_signature(1)).unwrap();
        l1.add_entry(&[b(1, 0)], &Elem::basis(&l, b(0, 0)).unwrap()).unwrap();
        alg.set_op(1, l1).unwrap();
        let alg = Arc::new(alg);
        let ms = Arc::new(GradedSpace::new([(0, 1), (1, 1)]));
        let mut m = LinfModule::trivial("m", alg.clone(), ms.clone(), 2).unwrap();
        let mut k2 = SymMultiMap::zero(m.op_signature(2)).unwrap();
        k2.add_entry(&[b(0, 0), b(0, 0)], &Elem::basis(&ms, b(0, 0)).unwrap()).unwrap();
        m.set_op(2, k2).unwrap();
        let r2 = m.module_residual(2).unwrap();
        // k2(l1 x, m) + k2(x, k1 m) + k1 k2(x, m) at x = [1,0], m = [0,0]: k2([0,0],[0,0]) = [0,0]
        let expected = {
            let x = Elem::basis(&l, b(1, 0)).unwrap();
            let mm = Elem::basis(&ms, b(0, 0)).unwrap();
            let lx = alg.op(1).unwrap().eval(std::slice::from_ref(&x)).unwrap();
            let k1m = m.op(1).unwrap().eval(std::slice::from_ref(&mm)).unwrap();
            let t1 = m.op(2).unwrap().eval(&[lx, mm.clone()]).unwrap();
            let t2 = m.op(2).unwrap().eval(&[x.clone(), k1m]).unwrap();
            let t3 = m.op(1).unwrap().eval(&[m.op(2).unwrap().eval(&[x, mm]).unwrap()]).unwrap();
            &(&t1 + &t2) + &t3
        };
        assert_eq!(r2.eval_basis(&[b(1, 0), b(0, 0)]), expected);
        assert!(!expected.is_zero());
    }

    /// Heisenberg with the zero action on a graded space `{0: 2, 1: 1}`.
    fn graded_trivial(max: usize) -> Arc<LinfModule> {
        let h = heisenberg(max);
        let space = Arc::new(GradedSpace::new([(0, 2), (1, 1)]));
        Arc::new(LinfModule::trivial("triv", h, space, max).unwrap())
    }

    #[test]
    fn identity_morphism_is_unit() {
        let h = heisenberg(4);
        let m = adjoint(&h);
        let id = ModuleMorphism::identity(m.clone()).unwrap();
        for n in 1..=4 {
            assert!(id.modhom_residual(n).unwrap().is_zero());
        }
        let t = graded_trivial(4);
        let id = ModuleMorphism::identity(t.clone()).unwrap();
        let mut f = ModuleMorphism::zero("f", t.clone(), t.clone(), 4).unwrap();
        let mut f2 = SymMultiMap::zero(f.comp_signature(2)).unwrap();
        f2.add_entry(&[b(0, 0), b(0, 0)], &Elem::basis(t.space(), b(1, 0)).unwrap()).unwrap();
        f.set_comp(2, f2).unwrap();
        assert!(diff_components(&compose(&id, &f).unwrap(), &f).unwrap().is_empty());
        assert!(diff_components(&compose(&f, &id).unwrap(), &f).unwrap().is_empty());
    }

    #[test]
    fn compose_low_arities() {
        let t = graded_trivial(3);
        let mut f = ModuleMorphism::zero("f", t.clone(), t.clone(), 3).unwrap();
        let mut g = ModuleMorphism::zero("g", t.clone(), t.clone(), 3).unwrap();
        let mut f1 = SymMultiMap::zero(f.comp_signature(1)).unwrap();
        f1.add_entry(&[b(0, 0)], &Elem::basis(t.space(), b(0, 1)).unwrap()).unwrap();
        let mut g1 = SymMultiMap::zero(g.comp_signature(1)).unwrap();
        g1.add_entry(&[b(0, 1)], &Elem::basis(t.space(), b(0, 0)).unwrap()).unwrap();
        let mut g2 = SymMultiMap::zero(g.comp_signature(2)).unwrap();
        g2.add_entry(&[b(0, 2), b(0, 1)], &Elem::basis(t.space(), b(1, 0)).unwrap()).unwrap();
        f.set_comp(1, f1).unwrap();
        g.set_comp(1, g1).unwrap();
        g.set_comp(2, g2).unwrap();
        let gf = compose(&g, &f).unwrap();
        assert_eq!(gf.comp(1).unwrap().eval_basis(&[b(0, 0)]), Elem::basis(t.space(), b(0, 0)).unwrap());
        assert_eq!(gf.comp(1).unwrap().len(), 1);
        // (g∘f)_2(x, m) = g1 f2(x, m) + g2(x, f1 m) with f2 = 0
        let c2 = gf.comp(2).unwrap();
        assert_eq!(c2.eval_basis(&[b(0, 2), b(0, 0)]), Elem::basis(t.space(), b(1, 0)).unwrap());
        assert_eq!(c2.len(), 1);
        assert!(gf.comp(3).unwrap().is_zero());
    }

    #[test]
    fn compose_rejects_mismatch() {
        let h = heisenberg(2);
        let m = adjoint(&h);
        let other_space = Arc::new(GradedSpace::new([(0, 1)]));
        let n = Arc::new(LinfModule::trivial("n", h.clone(), other_space, 2).unwrap());
        let f = ModuleMorphism::zero("f", m.clone(), m.clone(), 2).unwrap();
        let g = ModuleMorphism::zero("g", n.clone(), n.clone(), 2).unwrap();
        assert!(compose(&g, &f).is_err());
    }

    #[test]
    fn strict_lie_morphism_residual() {
        // inclusion of span{e,h} (abelian) into the Heisenberg algebra
        let h = heisenberg(3);
        let sub = Arc::new(LinfAlgebra::abelian("sub", Arc::new(GradedSpace::new([(0, 2)])), 3).unwrap());
        let mut i = LinfMorphism::zero("incl", sub.clone(), h.clone(), 3).unwrap();
        let mut i1 = SymMultiMap::zero(i.comp_signature(1)).unwrap();
        i1.add_entry(&[b(0, 0)], &Elem::basis(h.space(), b(0, 0)).unwrap()).unwrap();
        i1.add_entry(&[b(0, 1)], &Elem::basis(h.space(), b(0, 2)).unwrap()).unwrap();
        i.set_comp(1, i1.clone()).unwrap();
        for n in 1..=3 {
            assert!(i.morphism_residual(n).unwrap().is_zero());
        }
        // sending the sub basis to e and f instead fails: φ([x,y]) + [φx,φy] = h
        let mut bad = LinfMorphism::zero("bad", sub, h.clone(), 3).unwrap();
        let mut j1 = SymMultiMap::zero(bad.comp_signature(1)).unwrap();
        j1.add_entry(&[b(0, 0)], &Elem::basis(h.space(), b(0, 0)).unwrap()).unwrap();
        j1.add_entry(&[b(0, 1)], &Elem::basis(h.space(), b(0, 1)).unwrap()).unwrap();
        bad.set_comp(1, j1).unwrap();
        let r2 = bad.morphism_residual(2).unwrap();
        assert_eq!(r2.eval_basis(&[b(0, 0), b(0, 1)]), Elem::basis(h.space(), b(0, 2)).unwrap());
    }
}
