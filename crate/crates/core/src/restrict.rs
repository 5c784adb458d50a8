//! Restriction of scalars along an L∞-morphism `I: L′ → L`.
//!
//! ```text
//! k′_1 = k_1
//! k′_n = Σ_{r=1}^{n-1} Σ_{τ∈S′(i₁,…,i_r), i₁+…+i_r=n-1} k_{r+1}(I_{i₁}(…), …, I_{i_r}(…), m)
//! ```
//!
//! and the same sum with `f_{r+1}` in place of `k_{r+1}` for morphisms.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gfa::{Basis, Degree, Elem, GradedSpace, Signature, SymMultiMap};
use crate::linfty::{self, ComponentDiff, LinfAlgebra, LinfModule, LinfMorphism, ModuleMorphism};
use crate::perm::{BlockSpec, Perm};

/// An L∞-morphism `I: L′ → L` together with the truncation used for all
/// restricted structures and the outcome of checking `I`.
#[derive(Clone, Debug)]
pub struct RestrictionContext {
    morphism: Arc<LinfMorphism>,
    max_arity: usize,
    failing_arities: Vec<usize>,
}

impl RestrictionContext {
    /// Checks `I` up to its own truncation arity. An invalid `I` is accepted;
    /// everything restricted along it is then marked unverified.
    pub fn new(morphism: Arc<LinfMorphism>) -> Result<Self> {
        let max_arity = morphism.max_arity();
        let mut failing_arities = Vec::new();
        for n in 1..=max_arity {
            if !morphism.morphism_residual(n)?.is_zero() {
                failing_arities.push(n);
            }
        }
        Ok(RestrictionContext { morphism, max_arity, failing_arities })
    }

    pub fn morphism(&self) -> &Arc<LinfMorphism> {
        &self.morphism
    }

    /// `L′`, shared by reference with every restricted structure.
    pub fn source(&self) -> &Arc<LinfAlgebra> {
        self.morphism.source()
    }

    /// `L`
    pub fn target(&self) -> &Arc<LinfAlgebra> {
        self.morphism.target()
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn morphism_verified(&self) -> bool {
        self.failing_arities.is_empty()
    }

    /// Arities at which `morphism_residual(I, n)` is nonzero.
    pub fn failing_arities(&self) -> &[usize] {
        &self.failing_arities
    }

    fn check_over_target(&self, algebra: &Arc<LinfAlgebra>, what: &str) -> Result<()> {
        if Arc::ptr_eq(algebra, self.target()) || **algebra == **self.target() {
            Ok(())
        } else {
            Err(Error::Structure(format!(
                "{what} is not over the target algebra {} of {}",
                self.target().name(),
                self.morphism.name()
            )))
        }
    }

    fn check_truncation(&self, max: usize, what: &str) -> Result<()> {
        if max != self.max_arity {
            return Err(Error::Structure(format!(
                "truncation mismatch: {what} has max_arity {max}, the morphism has {}",
                self.max_arity
            )));
        }
        Ok(())
    }

    /// Evaluates `Σ_{compositions of n-1} Σ_{τ∈S′} m_{r+1}(I_{i₁}(…), …, I_{i_r}(…), last)`.
    fn pulled_back_sum<F>(
        &self,
        families: &[(BlockSpec, Vec<Perm>)],
        xs: &[Elem],
        last: &Elem,
        acc: &mut Elem,
        op: F,
    ) -> Result<()>
    where
        F: Fn(usize, &[Elem]) -> Result<Elem>,
    {
        for (spec, taus) in families {
            let r = spec.sizes().len();
            for t in taus {
                let ys = t.apply(xs)?;
                let mut args = Vec::with_capacity(r + 1);
                for (block, &size) in spec.chunk(&ys).into_iter().zip(spec.sizes()) {
                    args.push(self.morphism.eval_comp(size, block)?);
                }
                if args.iter().any(|a| a.is_zero()) {
                    continue;
                }
                args.push(last.clone());
                acc.xor_assign(&op(r + 1, &args)?);
            }
        }
        Ok(())
    }

    fn pulled_back_map<F>(&self, sig: Signature, codomain: &GradedSpace, op: F) -> Result<SymMultiMap>
    where
        F: Fn(usize, &[Elem]) -> Result<Elem> + Sync,
    {
        let n = sig.arity;
        let families = linfty::primed_families(n - 1);
        SymMultiMap::from_fn(sig.clone(), |key: &[Basis]| {
            let args: Vec<Elem> =
                key.iter().enumerate().map(|(slot, &b)| Elem::basis(sig.slot_space(slot), b)).collect::<Result<_>>()?;
            let (xs, m) = args.split_at(n - 1);
            let mut acc = Elem::zero(codomain, sig.output_degree(key));
            self.pulled_back_sum(&families, xs, &m[0], &mut acc, &op)?;
            Ok(acc)
        })
    }
}

/// A restricted structure together with its verification status.
#[derive(Clone, Debug)]
pub struct Restricted<T> {
    pub value: T,
    /// `false` when `I` itself failed its relation.
    pub input_verified: bool,
    /// `None` when output verification was skipped; otherwise the arities at
    /// which the restricted structure fails its relation.
    pub output_failures: Option<Vec<usize>>,
}

impl<T> Restricted<T> {
    /// Inputs valid and output checked with no failures.
    pub fn is_verified(&self) -> bool {
        self.input_verified && matches!(&self.output_failures, Some(f) if f.is_empty())
    }
}

/// `I*M`: the module `M` over `L` viewed as a module over `L′`.
pub fn restrict_module(ctx: &RestrictionContext, module: &LinfModule, verify: bool) -> Result<Restricted<LinfModule>> {
    ctx.check_over_target(module.algebra(), module.name())?;
    ctx.check_truncation(module.max_arity(), module.name())?;
    let n_max = ctx.max_arity();
    let mut out = LinfModule::trivial(module.name(), ctx.source().clone(), module.space().clone(), n_max)?;
    out.set_op(1, with_signature(module.op(1).expect("arity 1 is stored"), out.op_signature(1))?)?;
    for n in 2..=n_max {
        let sig = out.op_signature(n);
        let kn = ctx.pulled_back_map(sig, module.space(), |k, args| module.eval_op(k, args))?;
        out.set_op(n, kn)?;
    }
    let output_failures = if verify {
        let mut bad = Vec::new();
        for n in 1..=n_max {
            if !out.module_residual(n)?.is_zero() {
                bad.push(n);
            }
        }
        Some(bad)
    } else {
        None
    };
    Ok(Restricted { value: out, input_verified: ctx.morphism_verified(), output_failures })
}

/// `I*f` between `I*A` and `I*B`, with `(I*f)_1 = f_1`.
pub fn restrict_morphism(
    ctx: &RestrictionContext,
    f: &ModuleMorphism,
    verify: bool,
) -> Result<Restricted<ModuleMorphism>> {
    ctx.check_over_target(f.algebra(), f.name())?;
    ctx.check_truncation(f.max_arity(), f.name())?;
    let source = restrict_module(ctx, f.source(), false)?.value;
    let target = restrict_module(ctx, f.target(), false)?.value;
    let n_max = ctx.max_arity();
    let mut out = ModuleMorphism::zero(f.name(), Arc::new(source), Arc::new(target), n_max)?;
    out.set_comp(1, with_signature(f.comp(1).expect("arity 1 is stored"), out.comp_signature(1))?)?;
    for n in 2..=n_max {
        let sig = out.comp_signature(n);
        let hn = ctx.pulled_back_map(sig, f.target().space(), |k, args| f.eval_comp(k, args))?;
        out.set_comp(n, hn)?;
    }
    let output_failures = if verify {
        let mut bad = Vec::new();
        for n in 1..=n_max {
            if !out.modhom_residual(n)?.is_zero() {
                bad.push(n);
            }
        }
        Some(bad)
    } else {
        None
    };
    Ok(Restricted { value: out, input_verified: ctx.morphism_verified(), output_failures })
}

/// Copy of an arity-1 component under the signature of the restricted structure.
fn with_signature(map: &SymMultiMap, sig: Signature) -> Result<SymMultiMap> {
    let mut out = SymMultiMap::zero(sig)?;
    for (k, v) in map.entries() {
        out.add_entry(k, v)?;
    }
    Ok(out)
}

/// Outcome of the functoriality check for a chain `A → B → C`.
#[derive(Clone, Debug, Default)]
pub struct FunctorialityReport {
    /// `I*(Id_X)` against `Id_{I*X}` for `X = A, B, C`.
    pub identity: Vec<(String, Vec<ComponentDiff>)>,
    /// `I*(g∘f)` against `I*g ∘ I*f`.
    pub composition: Vec<ComponentDiff>,
}

impl FunctorialityReport {
    pub fn passed(&self) -> bool {
        self.composition.is_empty() && self.identity.iter().all(|(_, d)| d.is_empty())
    }
}

/// Compares `I*(Id)` with `Id`, and `I*(g∘f)` with `I*g ∘ I*f`, componentwise.
pub fn check_functoriality(
    ctx: &RestrictionContext,
    f: &ModuleMorphism,
    g: &ModuleMorphism,
) -> Result<FunctorialityReport> {
    let mut report = FunctorialityReport::default();
    for module in [f.source(), f.target(), g.target()] {
        let restricted_id = restrict_morphism(ctx, &ModuleMorphism::identity(module.clone())?, false)?.value;
        let id_restricted = ModuleMorphism::identity(Arc::new(restrict_module(ctx, module, false)?.value))?;
        report.identity.push((module.name().to_string(), linfty::diff_components(&restricted_id, &id_restricted)?));
    }
    let left = restrict_morphism(ctx, &linfty::compose(g, f)?, false)?.value;
    let rf = restrict_morphism(ctx, f, false)?.value;
    let rg = restrict_morphism(ctx, g, false)?.value;
    let right = linfty::compose(&rg, &rf)?;
    report.composition = linfty::diff_components(&left, &right)?;
    Ok(report)
}

/// Pulls a Lie representation back along a Lie algebra homomorphism:
/// `k′_2(y, m) = k_2(φ(y), m)`, computed directly from the action table.
pub fn classical_restriction(phi: &LinfMorphism, rho: &LinfModule) -> Result<LinfModule> {
    let lie_shape = |space: &GradedSpace, what: &str| -> Result<()> {
        if space.dims().any(|(d, _)| d != 0) {
            return Err(Error::Structure(format!("{what} is not concentrated in degree 0")));
        }
        Ok(())
    };
    lie_shape(phi.source().space(), "source algebra")?;
    lie_shape(phi.target().space(), "target algebra")?;
    lie_shape(rho.space(), "module")?;
    if !phi.is_strict() {
        return Err(Error::Structure("classical restriction needs a strict morphism".into()));
    }
    for alg in [phi.source(), phi.target()] {
        if alg.ops().any(|(k, l)| k != 2 && !l.is_zero()) {
            return Err(Error::Structure(format!("{} has operations other than a bracket", alg.name())));
        }
    }
    if rho.ops().any(|(k, op)| k > 2 && !op.is_zero()) {
        return Err(Error::Structure(format!("{} has higher operations", rho.name())));
    }
    if !(Arc::ptr_eq(rho.algebra(), phi.target()) || **rho.algebra() == **phi.target()) {
        return Err(Error::Structure("module is not over the target of the morphism".into()));
    }
    let source = phi.source().clone();
    let mut out = LinfModule::trivial(rho.name(), source.clone(), rho.space().clone(), rho.max_arity())?;
    if let Some(k1) = rho.op(1) {
        out.set_op(1, with_signature(k1, out.op_signature(1))?)?;
    }
    let phi1 = phi.comp(1).expect("arity 1 is stored");
    let k2 = rho.op(2).expect("max_arity >= 2 for a Lie module");
    let mut action = SymMultiMap::zero(out.op_signature(2))?;
    for y in source.space().basis() {
        let image = phi1.eval_basis(&[y]);
        for m in rho.space().basis() {
            let mut value = Elem::zero(rho.space(), 0 as Degree);
            for x in image.basis_terms() {
                value.xor_assign(&k2.eval_basis(&[x, m]));
            }
            if !value.is_zero() {
                action.add_entry(&[y, m], &value)?;
            }
        }
    }
    out.set_op(2, action)?;
    Ok(out)
}
