//! Small named structure bundles, all truncated at arity 6.
//!
//! | fixture | algebras | morphisms | modules | module morphisms |
//! |---|---|---|---|---|
//! | `heisenberg-adjoint` | `heis`, `span_eh` | `incl: span_eh → heis` | `adj` | |
//! | `truncated-l3` | `t3` | | | |
//! | `abelian-i2` | `lp`, `l` | `i: lp → l` | `m` | |
//! | `lie-corollary` | `heis`, `span_fh` | `phi: span_fh → heis` | `rep` | |
//! | `functoriality-chain` | `lp`, `l` | `i: lp → l` | `a`, `b`, `c` | `f: a → b`, `g: b → c` |

use std::sync::Arc;

use crate::bundle::Bundle;
use crate::error::{Error, Result};
use crate::gfa::{Basis, Degree, Elem, GradedSpace, Signature, SymMultiMap};
use crate::linfty::{LinfAlgebra, LinfModule, LinfMorphism, ModuleMorphism};

pub const MAX_ARITY: usize = 6;

pub const NAMES: [&str; 5] =
    ["heisenberg-adjoint", "truncated-l3", "abelian-i2", "lie-corollary", "functoriality-chain"];

type Entry<'a> = (&'a [(Degree, usize)], &'a [(Degree, usize)]);

fn table(sig: Signature, entries: &[Entry<'_>]) -> Result<SymMultiMap> {
    let mut map = SymMultiMap::zero(sig)?;
    for (input, out) in entries {
        let key: Vec<Basis> = input.iter().map(|&b| b.into()).collect();
        let outs: Vec<Basis> = out.iter().map(|&b| b.into()).collect();
        let deg = map.signature().output_degree(&key);
        let value = Elem::from_basis_list(&map.signature().codomain, deg, &outs)?;
        map.add_entry(&key, &value)?;
    }
    Ok(map)
}

fn space(dims: &[(Degree, usize)]) -> Arc<GradedSpace> {
    Arc::new(GradedSpace::new(dims.iter().copied()))
}

/// e = [0,0], f = [0,1], h = [0,2]; l₂(e,f) = h.
fn heisenberg() -> Result<LinfAlgebra> {
    let mut a = LinfAlgebra::abelian("heis", space(&[(0, 3)]), MAX_ARITY)?;
    a.set_op(2, table(a.op_signature(2), &[(&[(0, 0), (0, 1)], &[(0, 2)])])?)?;
    Ok(a)
}

fn heisenberg_adjoint() -> Result<Bundle> {
    let heis = Arc::new(heisenberg()?);
    let sub = Arc::new(LinfAlgebra::abelian("span_eh", space(&[(0, 2)]), MAX_ARITY)?);
    let mut incl = LinfMorphism::zero("incl", sub.clone(), heis.clone(), MAX_ARITY)?;
    incl.set_comp(1, table(incl.comp_signature(1), &[(&[(0, 0)], &[(0, 0)]), (&[(0, 1)], &[(0, 2)])])?)?;
    let mut adj = LinfModule::trivial("adj", heis.clone(), heis.space().clone(), MAX_ARITY)?;
    adj.set_op(2, table(adj.op_signature(2), &[(&[(0, 0), (0, 1)], &[(0, 2)]), (&[(0, 1), (0, 0)], &[(0, 2)])])?)?;
    let mut b = Bundle::new(MAX_ARITY);
    b.insert_algebra(heis)?;
    b.insert_algebra(sub)?;
    b.insert_morphism(Arc::new(incl))?;
    b.insert_module(Arc::new(adj))?;
    Ok(b)
}

/// x = [0,0], y = [0,1], z = [1,0]; l₃(x,x,y) = l₃(x,y,y) = z.
fn truncated_l3() -> Result<Bundle> {
    let mut a = LinfAlgebra::abelian("t3", space(&[(0, 2), (1, 1)]), MAX_ARITY)?;
    a.set_op(
        3,
        table(a.op_signature(3), &[(&[(0, 0), (0, 0), (0, 1)], &[(1, 0)]), (&[(0, 0), (0, 1), (0, 1)], &[(1, 0)])])?,
    )?;
    let mut b = Bundle::new(MAX_ARITY);
    b.insert_algebra(Arc::new(a))?;
    Ok(b)
}

/// `lp`: u = [0,0], v = [0,1]. `l`: a = [0,0], c = [1,0]. Both abelian.
fn abelian_pair() -> Result<(Arc<LinfAlgebra>, Arc<LinfAlgebra>)> {
    let lp = LinfAlgebra::abelian("lp", space(&[(0, 2)]), MAX_ARITY)?;
    let l = LinfAlgebra::abelian("l", space(&[(0, 1), (1, 1)]), MAX_ARITY)?;
    Ok((Arc::new(lp), Arc::new(l)))
}

fn i2_morphism(lp: &Arc<LinfAlgebra>, l: &Arc<LinfAlgebra>, i2: &[Entry<'_>]) -> Result<LinfMorphism> {
    let mut i = LinfMorphism::zero("i", lp.clone(), l.clone(), MAX_ARITY)?;
    i.set_comp(1, table(i.comp_signature(1), &[(&[(0, 0)], &[(0, 0)]), (&[(0, 1)], &[(0, 0)])])?)?;
    i.set_comp(2, table(i.comp_signature(2), i2)?)?;
    Ok(i)
}

/// m0 = [0,0], m1 = [1,0], p1 = [1,1], q2 = [2,0].
const MODULE_DIMS: [(Degree, usize); 3] = [(0, 1), (1, 2), (2, 1)];

/// a acts as the identity, c as C: m0 ↦ m1, p1 ↦ q2.
fn action_entries() -> Vec<Entry<'static>> {
    vec![
        (&[(0, 0), (0, 0)], &[(0, 0)]),
        (&[(0, 0), (1, 0)], &[(1, 0)]),
        (&[(0, 0), (1, 1)], &[(1, 1)]),
        (&[(0, 0), (2, 0)], &[(2, 0)]),
        (&[(1, 0), (0, 0)], &[(1, 0)]),
        (&[(1, 0), (1, 1)], &[(2, 0)]),
    ]
}

fn abelian_i2() -> Result<Bundle> {
    let (lp, l) = abelian_pair()?;
    let i = i2_morphism(&lp, &l, &[(&[(0, 0), (0, 1)], &[(1, 0)])])?;
    let mut m = LinfModule::trivial("m", l.clone(), space(&MODULE_DIMS), MAX_ARITY)?;
    // k₁: p1 ↦ m0, q2 ↦ m1
    m.set_op(1, table(m.op_signature(1), &[(&[(1, 1)], &[(0, 0)]), (&[(2, 0)], &[(1, 0)])])?)?;
    m.set_op(2, table(m.op_signature(2), &action_entries())?)?;
    let mut b = Bundle::new(MAX_ARITY);
    b.insert_algebra(lp)?;
    b.insert_algebra(l)?;
    b.insert_morphism(Arc::new(i))?;
    b.insert_module(Arc::new(m))?;
    Ok(b)
}

/// The two-dimensional representation e ↦ E₁₂, f ↦ E₂₁, h ↦ 1 restricted
/// along span{f, h} → Heisenberg.
fn lie_corollary() -> Result<Bundle> {
    let heis = Arc::new(heisenberg()?);
    let sub = Arc::new(LinfAlgebra::abelian("span_fh", space(&[(0, 2)]), MAX_ARITY)?);
    let mut phi = LinfMorphism::zero("phi", sub.clone(), heis.clone(), MAX_ARITY)?;
    phi.set_comp(1, table(phi.comp_signature(1), &[(&[(0, 0)], &[(0, 1)]), (&[(0, 1)], &[(0, 2)])])?)?;
    let mut rep = LinfModule::trivial("rep", heis.clone(), space(&[(0, 2)]), MAX_ARITY)?;
    rep.set_op(
        2,
        table(
            rep.op_signature(2),
            &[
                (&[(0, 0), (0, 1)], &[(0, 0)]),
                (&[(0, 1), (0, 0)], &[(0, 1)]),
                (&[(0, 2), (0, 0)], &[(0, 0)]),
                (&[(0, 2), (0, 1)], &[(0, 1)]),
            ],
        )?,
    )?;
    let mut b = Bundle::new(MAX_ARITY);
    b.insert_algebra(heis)?;
    b.insert_algebra(sub)?;
    b.insert_morphism(Arc::new(phi))?;
    b.insert_module(Arc::new(rep))?;
    Ok(b)
}

/// Three copies of one module with zero differential, and
/// `f = (id, f₂)`, `g = (id, g₂)` with
/// `f₂(a,·) = C`, `f₂(c,·): m0 ↦ q2`, `g₂(a,·): m0 ↦ p1, m1 ↦ q2`.
fn functoriality_chain() -> Result<Bundle> {
    let (lp, l) = abelian_pair()?;
    let i = i2_morphism(&lp, &l, &[(&[(0, 0), (0, 1)], &[(1, 0)]), (&[(0, 1), (0, 1)], &[(1, 0)])])?;
    let module = |name: &str| -> Result<Arc<LinfModule>> {
        let mut m = LinfModule::trivial(name, l.clone(), space(&MODULE_DIMS), MAX_ARITY)?;
        m.set_op(2, table(m.op_signature(2), &action_entries())?)?;
        Ok(Arc::new(m))
    };
    let (a, b, c) = (module("a")?, module("b")?, module("c")?);
    let mut f = ModuleMorphism::identity_between("f", a.clone(), b.clone(), MAX_ARITY)?;
    f.set_comp(
        2,
        table(
            f.comp_signature(2),
            &[(&[(0, 0), (0, 0)], &[(1, 0)]), (&[(0, 0), (1, 1)], &[(2, 0)]), (&[(1, 0), (0, 0)], &[(2, 0)])],
        )?,
    )?;
    let mut g = ModuleMorphism::identity_between("g", b.clone(), c.clone(), MAX_ARITY)?;
    g.set_comp(2, table(g.comp_signature(2), &[(&[(0, 0), (0, 0)], &[(1, 1)]), (&[(0, 0), (1, 0)], &[(2, 0)])])?)?;
    let mut out = Bundle::new(MAX_ARITY);
    out.insert_algebra(lp)?;
    out.insert_algebra(l)?;
    out.insert_morphism(Arc::new(i))?;
    out.insert_module(a)?;
    out.insert_module(b)?;
    out.insert_module(c)?;
    out.insert_module_morphism(Arc::new(f))?;
    out.insert_module_morphism(Arc::new(g))?;
    Ok(out)
}

/// Builds the named fixture.
pub fn fixture(name: &str) -> Result<Bundle> {
    match name {
        "heisenberg-adjoint" => heisenberg_adjoint(),
        "truncated-l3" => truncated_l3(),
        "abelian-i2" => abelian_i2(),
        "lie-corollary" => lie_corollary(),
        "functoriality-chain" => functoriality_chain(),
        _ => Err(Error::Format(format!("unknown fixture {name:?}; expected one of {}", NAMES.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_verifies() {
        for name in NAMES {
            let b = fixture(name).unwrap();
            let report = b.verify(None).unwrap();
            assert!(report.passed(), "{name}\n{report}");
        }
        assert!(fixture("nope").is_err());
    }

    #[test]
    fn fixtures_round_trip() {
        for name in NAMES {
            let b = fixture(name).unwrap();
            let text = b.to_canonical_json();
            let (b2, warnings) = Bundle::from_json(&text).unwrap();
            assert!(warnings.is_empty());
            assert_eq!(b2.to_canonical_json(), text, "{name}");
        }
    }

    #[test]
    fn chain_has_higher_components() {
        let b = fixture("functoriality-chain").unwrap();
        assert!(!b.morphism("i").unwrap().comp(2).unwrap().is_zero());
        assert!(!b.module_morphism("f").unwrap().comp(2).unwrap().is_zero());
        assert!(!b.module_morphism("g").unwrap().comp(2).unwrap().is_zero());
    }
}
