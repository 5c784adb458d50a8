//! JSON structure files.
//!
//! ```json
//! {
//!   "max_arity": 6,
//!   "spaces": {"V": {"dims": {"0": 3}}},
//!   "structures": [
//!     {"kind": "algebra", "name": "heis", "space": "V",
//!      "ops": [{"arity": 2, "shift": 0,
//!               "entries": [{"in": [[0,0],[0,1]], "out": [[0,2]]}]}]},
//!     {"kind": "module", "name": "adj", "algebra": "heis", "space": {"dims": {"0": 3}}, "ops": []}
//!   ]
//! }
//! ```
//!
//! A `space` field is either a name from `spaces` or an inline space.
//! Morphisms name their `source` and `target`. Operations that are not
//! listed are zero. Canonical output inlines every space, sorts object keys,
//! entries and outputs, and omits zero maps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfa::{fmt_key, Basis, Degree, Elem, GradedSpace, Signature, SymMultiMap};
use crate::linfty::{LinfAlgebra, LinfModule, LinfMorphism, ModuleMorphism};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub dims: BTreeMap<String, usize>,
}

impl SpaceDoc {
    pub fn from_space(space: &GradedSpace) -> Self {
        SpaceDoc { dims: space.dims().map(|(d, n)| (d.to_string(), n)).collect() }
    }

    pub fn to_space(&self) -> Result<GradedSpace> {
        let mut dims = Vec::new();
        for (d, &n) in &self.dims {
            let deg: Degree =
                d.trim().parse().map_err(|_| Error::Format(format!("degree key {d:?} is not an integer")))?;
            dims.push((deg, n));
        }
        Ok(GradedSpace::new(dims))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Name(String),
    Inline(SpaceDoc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDoc {
    #[serde(rename = "in")]
    pub input: Vec<Basis>,
    pub out: Vec<Basis>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub arity: usize,
    pub shift: Degree,
    pub entries: Vec<EntryDoc>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub alternating: bool,
}

impl MapDoc {
    pub fn from_map(map: &SymMultiMap) -> Self {
        MapDoc {
            arity: map.arity(),
            shift: map.shift(),
            entries: map
                .entries()
                .map(|(k, v)| EntryDoc { input: k.to_vec(), out: v.basis_terms().collect() })
                .collect(),
            alternating: map.is_alternating(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StructureDoc {
    Algebra { name: String, space: SpaceRef, ops: Vec<MapDoc> },
    Morphism { name: String, source: String, target: String, comps: Vec<MapDoc> },
    Module { name: String, algebra: String, space: SpaceRef, ops: Vec<MapDoc> },
    ModuleMorphism { name: String, source: String, target: String, comps: Vec<MapDoc> },
}

impl StructureDoc {
    pub fn name(&self) -> &str {
        match self {
            StructureDoc::Algebra { name, .. }
            | StructureDoc::Morphism { name, .. }
            | StructureDoc::Module { name, .. }
            | StructureDoc::ModuleMorphism { name, .. } => name,
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            StructureDoc::Algebra { .. } => Kind::Algebra,
            StructureDoc::Morphism { .. } => Kind::Morphism,
            StructureDoc::Module { .. } => Kind::Module,
            StructureDoc::ModuleMorphism { .. } => Kind::ModuleMorphism,
        }
    }

    pub fn maps(&self) -> &[MapDoc] {
        match self {
            StructureDoc::Algebra { ops, .. } | StructureDoc::Module { ops, .. } => ops,
            StructureDoc::Morphism { comps, .. } | StructureDoc::ModuleMorphism { comps, .. } => comps,
        }
    }

    pub fn maps_mut(&mut self) -> &mut Vec<MapDoc> {
        match self {
            StructureDoc::Algebra { ops, .. } | StructureDoc::Module { ops, .. } => ops,
            StructureDoc::Morphism { comps, .. } | StructureDoc::ModuleMorphism { comps, .. } => comps,
        }
    }
}

/// One JSON file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_arity: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub spaces: BTreeMap<String, SpaceDoc>,
    pub structures: Vec<StructureDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Indented JSON with sorted object keys; arrays that hold only scalars
    /// or arrays of scalars stay on one line.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("documents serialize");
        let mut s = String::new();
        write_json(&value, 0, &mut s);
        s.push('\n');
        s
    }
}

fn is_flat(v: &serde_json::Value) -> bool {
    use serde_json::Value;
    match v {
        Value::Array(items) => items.iter().all(|x| match x {
            Value::Array(inner) => inner.iter().all(|y| !y.is_array() && !y.is_object()),
            Value::Object(_) => false,
            _ => true,
        }),
        _ => false,
    }
}

fn write_json(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Array(items) if is_flat(v) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_json(x, indent, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_json(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("strings serialize"));
                out.push_str(": ");
                write_json(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalars serialize")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Algebra,
    Morphism,
    Module,
    ModuleMorphism,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Algebra, Kind::Morphism, Kind::Module, Kind::ModuleMorphism];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Algebra => "algebra",
            Kind::Morphism => "morphism",
            Kind::Module => "module",
            Kind::ModuleMorphism => "module_morphism",
        }
    }

    /// Name of the relation checked for this kind.
    pub fn relation(self) -> &'static str {
        match self {
            Kind::Algebra => "jacobi",
            Kind::Morphism => "morphism",
            Kind::Module => "module",
            Kind::ModuleMorphism => "modhom",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s || (s == "module-morphism" && *k == Kind::ModuleMorphism))
            .ok_or_else(|| Error::Format(format!("unknown kind {s:?}")))
    }
}

/// A named collection of structures sharing one truncation arity.
#[derive(Clone, Debug, Default)]
pub struct Bundle {
    max_arity: usize,
    algebras: BTreeMap<String, Arc<LinfAlgebra>>,
    morphisms: BTreeMap<String, Arc<LinfMorphism>>,
    modules: BTreeMap<String, Arc<LinfModule>>,
    module_morphisms: BTreeMap<String, Arc<ModuleMorphism>>,
}

impl Bundle {
    pub fn new(max_arity: usize) -> Self {
        Bundle { max_arity, ..Default::default() }
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    fn claim(&self, name: &str, max: usize) -> Result<()> {
        if self.contains(name) {
            return Err(Error::Format(format!("duplicate structure name {name:?}")));
        }
        if max != self.max_arity {
            return Err(Error::Structure(format!("{name} has max_arity {max} but the bundle uses {}", self.max_arity)));
        }
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.algebras.contains_key(name)
            || self.morphisms.contains_key(name)
            || self.modules.contains_key(name)
            || self.module_morphisms.contains_key(name)
    }

    pub fn insert_algebra(&mut self, a: Arc<LinfAlgebra>) -> Result<()> {
        self.claim(a.name(), a.max_arity())?;
        self.algebras.insert(a.name().to_string(), a);
        Ok(())
    }

    pub fn insert_morphism(&mut self, f: Arc<LinfMorphism>) -> Result<()> {
        self.claim(f.name(), f.max_arity())?;
        self.morphisms.insert(f.name().to_string(), f);
        Ok(())
    }

    pub fn insert_module(&mut self, m: Arc<LinfModule>) -> Result<()> {
        self.claim(m.name(), m.max_arity())?;
        self.modules.insert(m.name().to_string(), m);
        Ok(())
    }

    pub fn insert_module_morphism(&mut self, h: Arc<ModuleMorphism>) -> Result<()> {
        self.claim(h.name(), h.max_arity())?;
        self.module_morphisms.insert(h.name().to_string(), h);
        Ok(())
    }

    pub fn algebra(&self, name: &str) -> Option<&Arc<LinfAlgebra>> {
        self.algebras.get(name)
    }

    pub fn morphism(&self, name: &str) -> Option<&Arc<LinfMorphism>> {
        self.morphisms.get(name)
    }

    pub fn module(&self, name: &str) -> Option<&Arc<LinfModule>> {
        self.modules.get(name)
    }

    pub fn module_morphism(&self, name: &str) -> Option<&Arc<ModuleMorphism>> {
        self.module_morphisms.get(name)
    }

    pub fn algebras(&self) -> impl Iterator<Item = &Arc<LinfAlgebra>> {
        self.algebras.values()
    }

    pub fn morphisms(&self) -> impl Iterator<Item = &Arc<LinfMorphism>> {
        self.morphisms.values()
    }

    pub fn modules(&self) -> impl Iterator<Item = &Arc<LinfModule>> {
        self.modules.values()
    }

    pub fn module_morphisms(&self) -> impl Iterator<Item = &Arc<ModuleMorphism>> {
        self.module_morphisms.values()
    }

    /// Structure names with their kinds, in canonical order.
    pub fn names(&self) -> Vec<(Kind, String)> {
        let mut v: Vec<(Kind, String)> = Vec::new();
        v.extend(self.algebras.keys().map(|n| (Kind::Algebra, n.clone())));
        v.extend(self.morphisms.keys().map(|n| (Kind::Morphism, n.clone())));
        v.extend(self.modules.keys().map(|n| (Kind::Module, n.clone())));
        v.extend(self.module_morphisms.keys().map(|n| (Kind::ModuleMorphism, n.clone())));
        v
    }

    /// Largest arity carrying a nonzero map.
    pub fn highest_nonzero_arity(&self) -> usize {
        let a = self.algebras.values().map(|x| x.highest_nonzero_arity());
        let b = self.morphisms.values().map(|x| x.highest_nonzero_arity());
        let c = self.modules.values().map(|x| x.highest_nonzero_arity());
        let d = self.module_morphisms.values().map(|x| x.highest_nonzero_arity());
        a.chain(b).chain(c).chain(d).max().unwrap_or(0)
    }

    /// Resolves names across all documents. The truncation arity is, in order
    /// of preference: `max_arity`, the largest declared `max_arity`, or the
    /// largest arity present plus 2. Warnings are returned separately.
    pub fn from_documents(docs: &[Document], max_arity: Option<usize>) -> Result<(Bundle, Vec<String>)> {
        let mut warnings = Vec::new();
        let declared: BTreeSet<usize> = docs.iter().filter_map(|d| d.max_arity).collect();
        let present = docs
            .iter()
            .flat_map(|d| d.structures.iter())
            .flat_map(|s| s.maps().iter())
            .filter(|m| !m.entries.is_empty())
            .map(|m| m.arity)
            .max()
            .unwrap_or(0);
        let n = match (max_arity, declared.last()) {
            (Some(n), _) => n,
            (None, Some(&d)) => {
                if declared.len() > 1 {
                    warnings.push(format!("documents declare different max_arity values {declared:?}; using {d}"));
                }
                d
            }
            (None, None) => present.max(1) + 2,
        };
        if n == 0 {
            return Err(Error::Format("max_arity must be at least 1".into()));
        }
        if present > n {
            return Err(Error::Structure(format!(
                "an operation of arity {present} is present but the truncation arity is {n}"
            )));
        }

        let mut spaces: BTreeMap<&str, &SpaceDoc> = BTreeMap::new();
        for d in docs {
            for (name, s) in &d.spaces {
                if let Some(prev) = spaces.insert(name, s) {
                    if prev != s {
                        return Err(Error::Format(format!("space {name:?} is defined twice differently")));
                    }
                }
            }
        }
        let space = |r: &SpaceRef| -> Result<Arc<GradedSpace>> {
            match r {
                SpaceRef::Inline(s) => Ok(Arc::new(s.to_space()?)),
                SpaceRef::Name(name) => spaces
                    .get(name.as_str())
                    .ok_or_else(|| Error::Format(format!("unknown space {name:?}")))
                    .and_then(|s| Ok(Arc::new(s.to_space()?))),
            }
        };
        let all: Vec<&StructureDoc> = docs.iter().flat_map(|d| d.structures.iter()).collect();
        let mut bundle = Bundle::new(n);
        for kind in Kind::ALL {
            for doc in all.iter().filter(|s| s.kind() == kind) {
                let ctx = |e: Error| Error::Format(format!("{} {:?}: {e}", kind, doc.name()));
                match doc {
                    StructureDoc::Algebra { name, space: s, ops } => {
                        let mut a = LinfAlgebra::abelian(name, space(s).map_err(ctx)?, n)?;
                        for (k, x) in fill(ops, n, |k| a.op_signature(k), name, &mut warnings).map_err(ctx)? {
                            a.set_op(k, x)?;
                        }
                        bundle.insert_algebra(Arc::new(a))?;
                    }
                    StructureDoc::Morphism { name, source, target, comps } => {
                        let src = bundle.resolve(&bundle.algebras, source, "algebra").map_err(ctx)?;
                        let tgt = bundle.resolve(&bundle.algebras, target, "algebra").map_err(ctx)?;
                        let mut f = LinfMorphism::zero(name, src, tgt, n)?;
                        for (k, x) in fill(comps, n, |k| f.comp_signature(k), name, &mut warnings).map_err(ctx)? {
                            f.set_comp(k, x)?;
                        }
                        bundle.insert_morphism(Arc::new(f))?;
                    }
                    StructureDoc::Module { name, algebra, space: s, ops } => {
                        let alg = bundle.resolve(&bundle.algebras, algebra, "algebra").map_err(ctx)?;
                        let mut m = LinfModule::trivial(name, alg, space(s).map_err(ctx)?, n)?;
                        for (k, x) in fill(ops, n, |k| m.op_signature(k), name, &mut warnings).map_err(ctx)? {
                            m.set_op(k, x)?;
                        }
                        bundle.insert_module(Arc::new(m))?;
                    }
                    StructureDoc::ModuleMorphism { name, source, target, comps } => {
                        let src = bundle.resolve(&bundle.modules, source, "module").map_err(ctx)?;
                        let tgt = bundle.resolve(&bundle.modules, target, "module").map_err(ctx)?;
                        let mut h = ModuleMorphism::zero(name, src, tgt, n).map_err(ctx)?;
                        for (k, x) in fill(comps, n, |k| h.comp_signature(k), name, &mut warnings).map_err(ctx)? {
                            h.set_comp(k, x)?;
                        }
                        bundle.insert_module_morphism(Arc::new(h))?;
                    }
                }
            }
        }
        Ok((bundle, warnings))
    }

    pub fn from_json(text: &str) -> Result<(Bundle, Vec<String>)> {
        Bundle::from_documents(&[Document::parse(text)?], None)
    }

    fn resolve<T>(&self, table: &BTreeMap<String, Arc<T>>, name: &str, what: &str) -> Result<Arc<T>> {
        table.get(name).cloned().ok_or_else(|| Error::Format(format!("unresolved reference to {what} {name:?}")))
    }

    /// Canonical document; references to structures outside the bundle are kept by name.
    pub fn to_document(&self) -> Document {
        let maps = |it: &mut dyn Iterator<Item = (usize, &SymMultiMap)>| -> Vec<MapDoc> {
            it.filter(|(_, m)| !m.is_zero()).map(|(_, m)| MapDoc::from_map(m)).collect()
        };
        let mut structures = Vec::new();
        for a in self.algebras.values() {
            structures.push(StructureDoc::Algebra {
                name: a.name().to_string(),
                space: SpaceRef::Inline(SpaceDoc::from_space(a.space())),
                ops: maps(&mut a.ops()),
            });
        }
        for f in self.morphisms.values() {
            structures.push(StructureDoc::Morphism {
                name: f.name().to_string(),
                source: f.source().name().to_string(),
                target: f.target().name().to_string(),
                comps: maps(&mut f.comps()),
            });
        }
        for m in self.modules.values() {
            structures.push(StructureDoc::Module {
                name: m.name().to_string(),
                algebra: m.algebra().name().to_string(),
                space: SpaceRef::Inline(SpaceDoc::from_space(m.space())),
                ops: maps(&mut m.ops()),
            });
        }
        for h in self.module_morphisms.values() {
            structures.push(StructureDoc::ModuleMorphism {
                name: h.name().to_string(),
                source: h.source().name().to_string(),
                target: h.target().name().to_string(),
                comps: maps(&mut h.comps()),
            });
        }
        Document { max_arity: Some(self.max_arity), spaces: BTreeMap::new(), structures, provenance: None }
    }

    pub fn to_canonical_json(&self) -> String {
        self.to_document().to_canonical_json()
    }

    /// Every relation of every selected structure for `n = 1..=max_arity`.
    pub fn verify(&self, kinds: Option<&[Kind]>) -> Result<VerifyReport> {
        let wanted = |k: Kind| kinds.is_none_or(|ks| ks.contains(&k));
        let mut structures = Vec::new();
        let n = self.max_arity;
        if wanted(Kind::Algebra) {
            for a in self.algebras.values() {
                structures.push(check(Kind::Algebra, a.name(), n, |k| a.jacobi_residual(k))?);
            }
        }
        if wanted(Kind::Morphism) {
            for f in self.morphisms.values() {
                structures.push(check(Kind::Morphism, f.name(), n, |k| f.morphism_residual(k))?);
            }
        }
        if wanted(Kind::Module) {
            for m in self.modules.values() {
                structures.push(check(Kind::Module, m.name(), n, |k| m.module_residual(k))?);
            }
        }
        if wanted(Kind::ModuleMorphism) {
            for h in self.module_morphisms.values() {
                structures.push(check(Kind::ModuleMorphism, h.name(), n, |k| h.modhom_residual(k))?);
            }
        }
        Ok(VerifyReport { max_arity: n, structures })
    }
}

fn fill<S>(
    maps: &[MapDoc],
    n: usize,
    sig: S,
    owner: &str,
    warnings: &mut Vec<String>,
) -> Result<Vec<(usize, SymMultiMap)>>
where
    S: Fn(usize) -> Signature,
{
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for doc in maps {
        if doc.arity == 0 || doc.arity > n {
            return Err(Error::Structure(format!("arity {} outside 1..={n}", doc.arity)));
        }
        if !seen.insert(doc.arity) {
            return Err(Error::Format(format!("arity {} listed twice", doc.arity)));
        }
        let expected = sig(doc.arity);
        if doc.shift != expected.shift {
            return Err(Error::Signature(format!(
                "arity {} must have shift {}, found {}",
                doc.arity, expected.shift, doc.shift
            )));
        }
        let mut map = SymMultiMap::zero(expected.clone())?;
        map.set_alternating(doc.alternating)?;
        let mut keys = BTreeSet::new();
        for e in &doc.entries {
            let outs: BTreeSet<Basis> = e.out.iter().copied().collect();
            if outs.len() != e.out.len() {
                return Err(Error::Format(format!("entry {} repeats an output basis element", fmt_key(&e.input))));
            }
            let deg = if e.input.len() == expected.arity { expected.output_degree(&e.input) } else { 0 };
            let value = Elem::from_basis_list(&expected.codomain, deg, &e.out)?;
            let mut canonical = e.input.clone();
            let sym = expected.sym_arity().min(canonical.len());
            canonical[..sym].sort_unstable();
            if !keys.insert(canonical) {
                return Err(Error::Format(format!("arity {}: entry {} given twice", doc.arity, fmt_key(&e.input))));
            }
            if map.add_entry(&e.input, &value)? {
                warnings.push(format!(
                    "{owner}: arity {} entry {} canonicalized on load",
                    doc.arity,
                    fmt_key(&e.input)
                ));
            }
        }
        out.push((doc.arity, map));
    }
    Ok(out)
}

fn check<F>(kind: Kind, name: &str, n: usize, residual: F) -> Result<StructureReport>
where
    F: Fn(usize) -> Result<SymMultiMap>,
{
    let mut failures = Vec::new();
    for k in 1..=n {
        let r = residual(k)?;
        if let Some((key, value)) = r.witness() {
            failures.push(Failure { arity: k, input: key.to_vec(), value: value.basis_terms().collect() });
        }
    }
    Ok(StructureReport { kind, name: name.to_string(), failures })
}

/// A nonzero residual value at one canonical input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub arity: usize,
    #[serde(rename = "in")]
    pub input: Vec<Basis>,
    pub value: Vec<Basis>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub kind: Kind,
    pub name: String,
    /// One witness per failing arity.
    pub failures: Vec<Failure>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub max_arity: usize,
    pub structures: Vec<StructureReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.structures.iter().all(|s| s.passed())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.structures {
            match s.failures.first() {
                None => writeln!(
                    f,
                    "ok    {} {} ({} relation, n <= {})",
                    s.kind,
                    s.name,
                    s.kind.relation(),
                    self.max_arity
                )?,
                Some(w) => writeln!(
                    f,
                    "FAIL  {} {}: {} relation nonzero at n = {}, input {} -> {}",
                    s.kind,
                    s.name,
                    s.kind.relation(),
                    w.arity,
                    fmt_key(&w.input),
                    fmt_key(&w.value)
                )?,
            }
        }
        Ok(())
    }
}
