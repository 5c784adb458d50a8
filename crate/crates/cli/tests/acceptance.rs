//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use itertools::Itertools;
use linfty::bundle::Bundle;
use linfty::fixtures::{fixture, MAX_ARITY, NAMES};
use linfty::gfa::{Basis, Elem};
use linfty::linfty::{compose, diff_components};
use linfty::oracle::{self, apply_mutation, mutation_sweep, naive_residual, relations};
use linfty::perm::{self, BlockSpec, Perm};
use linfty::restrict::{
    check_functoriality, classical_restriction, restrict_module, restrict_morphism, RestrictionContext,
};
use linfty::{LinfModule, ModuleMorphism};
use linfty_cli::{cmd_fixtures, cmd_verify, EXIT_OK};

const LIMIT_TABLES: Duration = Duration::from_millis(1);
const LIMIT_EXAMPLE: Duration = Duration::from_millis(1);
const LIMIT_COUNTING: Duration = Duration::from_secs(10);
const LIMIT_IDENTITY: Duration = Duration::from_secs(60);
const LIMIT_FIXTURES: Duration = Duration::from_secs(30);
const LIMIT_OBJECTS: Duration = Duration::from_secs(30);
const LIMIT_MUTATION: Duration = Duration::from_secs(300);

/// Arity bound for the restriction, composition and differential criteria.
const CHECK_ARITY: usize = 5;

type Check = fn() -> Result<String, String>;

struct Criterion {
    id: usize,
    title: &'static str,
    limit: Option<Duration>,
    check: Check,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn load(name: &str) -> Result<Bundle, String> {
    fixture(name).map_err(err)
}

fn context(b: &Bundle, morphism: &str) -> Result<RestrictionContext, String> {
    let i = b.morphism(morphism).ok_or_else(|| format!("no morphism {morphism}"))?;
    let ctx = RestrictionContext::new(i.clone()).map_err(err)?;
    ensure(ctx.morphism_verified(), || format!("{morphism} fails at {:?}", ctx.failing_arities()))?;
    Ok(ctx)
}

fn table_entries(m: &linfty::SymMultiMap) -> Vec<(Vec<Basis>, Elem)> {
    m.entries().map(|(k, v)| (k.to_vec(), v.clone())).collect()
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn unshuffle_tables() -> Result<String, String> {
    let expected = [
        (vec![1, 3], "1234 2134 3124 4123"),
        (vec![2, 2], "1234 1324 1423 2314 2413 3412"),
        (vec![3, 1], "1234 1243 1342 2341"),
    ];
    let mut counts = Vec::new();
    for (sizes, row) in expected {
        let spec = BlockSpec::new(sizes.clone()).map_err(err)?;
        let got = perm::unshuffles(&spec).iter().map(Perm::to_string).join(" ");
        ensure(got == row, || format!("{sizes:?}: got {got}, expected {row}"))?;
        counts.push(row.split(' ').count());
    }
    Ok(format!("rows of sizes {counts:?}"))
}

fn example_permutation() -> Result<String, String> {
    let sigma = Perm::from_images(&[2, 4, 1, 6, 3, 5, 7]).map_err(err)?;
    let xs: Vec<String> = (1..=7).map(|i| format!("x{i}")).collect();
    let got = sigma.apply(&xs).map_err(err)?;
    let expected = ["x2", "x4", "x1", "x6", "x3", "x5", "x7"];
    ensure(got == expected, || format!("got {got:?}"))?;
    Ok(format!("({})", got.join(",")))
}

fn counting() -> Result<String, String> {
    let mut specs = 0;
    for n in 1..=8usize {
        for mask in 0u32..(1 << (n - 1)) {
            let mut sizes = vec![1usize];
            for bit in 0..n - 1 {
                if mask & (1 << bit) != 0 {
                    sizes.push(1);
                } else {
                    *sizes.last_mut().unwrap() += 1;
                }
            }
            let expected = factorial(n) / sizes.iter().map(|&s| factorial(s)).product::<u128>();
            let got = perm::unshuffles(&BlockSpec::new(sizes.clone()).map_err(err)?).len() as u128;
            ensure(got == expected, || format!("|S{sizes:?}| = {got}, expected {expected}"))?;
            specs += 1;
        }
    }
    let sizes = [1usize, 1, 2, 3];
    let starts = [0usize, 1, 2, 4];
    let brute = (1..=7usize)
        .permutations(7)
        .filter(|s| {
            let within = starts.iter().zip(sizes).all(|(&a, len)| s[a..a + len].windows(2).all(|w| w[0] < w[1]));
            let firsts = (0..3).all(|l| sizes[l] != sizes[l + 1] || s[starts[l]] < s[starts[l + 1]]);
            within && firsts
        })
        .count();
    let primed = perm::primed_unshuffles(&BlockSpec::new(sizes.to_vec()).map_err(err)?).map_err(err)?.len();
    ensure(brute == 210 && primed == 210, || format!("|S′(1,1,2,3)|: brute {brute}, enumerated {primed}"))?;
    Ok(format!("{specs} specs with n <= 8; |S′(1,1,2,3)| = {primed} (brute force {brute})"))
}

fn module_slot_identity() -> Result<String, String> {
    let mut sizes = Vec::new();
    for n in 2..=6 {
        let lhs = oracle::lemma4_lhs(n).map_err(err)?;
        let rhs = oracle::lemma4_rhs(n).map_err(err)?;
        ensure(lhs == rhs, || format!("n = {n}: multisets differ"))?;
        sizes.push(lhs.values().sum::<usize>());
    }
    Ok(format!("n = 2..6 with {sizes:?} terms"))
}

fn fixture_verification() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(err)?;
    let written = cmd_fixtures("all", dir.path());
    ensure(written.code == EXIT_OK, || written.stderr.clone())?;
    for name in NAMES {
        let path = dir.path().join(format!("{name}.json"));
        let out = cmd_verify(&[path], Some(MAX_ARITY), &[], None);
        ensure(out.code == EXIT_OK, || format!("{name}: {}{}", out.stdout, out.stderr))?;
        ensure(out.stdout.contains(&format!("n <= {MAX_ARITY}")), || out.stdout.clone())?;
    }
    Ok(format!("{} fixtures at N = {MAX_ARITY}", NAMES.len()))
}

fn restricted_modules_vanish(b: &Bundle, morphism: &str, module: &str) -> Result<LinfModule, String> {
    let ctx = context(b, morphism)?;
    let m = b.module(module).ok_or_else(|| format!("no module {module}"))?;
    let r = restrict_module(&ctx, m, false).map_err(err)?.value;
    for n in 1..=CHECK_ARITY {
        let res = r.module_residual(n).map_err(err)?;
        ensure(res.is_zero(), || format!("{module} restricted along {morphism}: nonzero at n = {n}"))?;
    }
    Ok(r)
}

fn restricted_modules() -> Result<String, String> {
    let r = restricted_modules_vanish(&load("abelian-i2")?, "i", "m")?;
    ensure(r.op(3).is_some_and(|k| !k.is_zero()), || "k′₃ vanishes on abelian-i2".into())?;
    restricted_modules_vanish(&load("heisenberg-adjoint")?, "incl", "adj")?;
    Ok(format!("abelian-i2 (k′₃ ≠ 0) and heisenberg-adjoint, n <= {CHECK_ARITY}"))
}

fn restricted_module_morphisms() -> Result<String, String> {
    let b = load("functoriality-chain")?;
    let ctx = context(&b, "i")?;
    for name in ["f", "g"] {
        let f = b.module_morphism(name).ok_or("missing morphism")?;
        let r = restrict_morphism(&ctx, f, false).map_err(err)?.value;
        for n in 1..=CHECK_ARITY {
            ensure(r.modhom_residual(n).map_err(err)?.is_zero(), || format!("I*{name}: nonzero at n = {n}"))?;
        }
        let (ours, theirs) = (r.comp(1).ok_or("no arity 1")?, f.comp(1).ok_or("no arity 1")?);
        ensure(table_entries(ours) == table_entries(theirs), || format!("(I*{name})₁ differs from {name}₁"))?;
    }
    Ok(format!("I*f, I*g on functoriality-chain, n <= {CHECK_ARITY}"))
}

fn functoriality() -> Result<String, String> {
    let b = load("functoriality-chain")?;
    let ctx = context(&b, "i")?;
    let (f, g) = (b.module_morphism("f").ok_or("no f")?, b.module_morphism("g").ok_or("no g")?);
    let report = check_functoriality(&ctx, f, g).map_err(err)?;
    ensure(report.passed(), || format!("{report:?}"))?;
    Ok(format!("identities on {} modules and g∘f, arities <= {MAX_ARITY}", report.identity.len()))
}

fn composition() -> Result<String, String> {
    let mut composites = 0;
    let mut units = 0;
    for name in NAMES {
        let b = load(name)?;
        let mut homs: Vec<ModuleMorphism> = b.module_morphisms().map(|h| (**h).clone()).collect();
        for m in b.modules() {
            homs.push(ModuleMorphism::identity(m.clone()).map_err(err)?);
        }
        if let Some(i) = b.morphisms().next() {
            let ctx = RestrictionContext::new(i.clone()).map_err(err)?;
            for h in b.module_morphisms() {
                homs.push(restrict_morphism(&ctx, h, false).map_err(err)?.value);
            }
        }
        for (f, g) in homs.iter().cartesian_product(homs.iter()) {
            let Ok(gf) = compose(g, f) else { continue };
            for n in 1..=CHECK_ARITY {
                let res = gf.modhom_residual(n).map_err(err)?;
                ensure(res.is_zero(), || format!("{name}: {} nonzero at n = {n}", gf.name()))?;
            }
            composites += 1;
        }
        for h in b.module_morphisms() {
            let left = compose(&ModuleMorphism::identity(h.target().clone()).map_err(err)?, h).map_err(err)?;
            let right = compose(h, &ModuleMorphism::identity(h.source().clone()).map_err(err)?).map_err(err)?;
            ensure(diff_components(&left, h).map_err(err)?.is_empty(), || format!("Id∘{} ≠ {}", h.name(), h.name()))?;
            ensure(diff_components(&right, h).map_err(err)?.is_empty(), || format!("{}∘Id ≠ {}", h.name(), h.name()))?;
            units += 1;
        }
    }
    ensure(units > 0, || "no module morphisms in the fixtures".into())?;
    Ok(format!("{composites} composites verified, identity is a unit for {units} morphisms"))
}

fn canonical(m: &LinfModule) -> Result<String, String> {
    let mut b = Bundle::new(m.max_arity());
    b.insert_algebra(m.algebra().clone()).map_err(err)?;
    b.insert_module(Arc::new(m.clone())).map_err(err)?;
    Ok(b.to_canonical_json())
}

fn lie_specialization() -> Result<String, String> {
    let b = load("lie-corollary")?;
    let ctx = context(&b, "phi")?;
    let rho = b.module("rep").ok_or("no rep")?;
    let ours = canonical(&restrict_module(&ctx, rho, false).map_err(err)?.value)?;
    let classical = canonical(&classical_restriction(ctx.morphism(), rho).map_err(err)?)?;
    ensure(ours == classical, || format!("restricted:\n{ours}\nclassical:\n{classical}"))?;
    Ok(format!("{} identical bytes", ours.len()))
}

fn differential() -> Result<String, String> {
    let mut checks = 0;
    for name in NAMES {
        let b = load(name)?;
        for (label, rel) in relations(&b) {
            for n in 1..=CHECK_ARITY {
                let naive = naive_residual(rel, n).map_err(err)?;
                let fast = rel.optimized(n).map_err(err)?;
                ensure(naive == fast, || format!("{name} {label} n = {n}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (structure, n) pairs bit-identical"))
}

fn mutation() -> Result<String, String> {
    let mut lines = Vec::new();
    let mut all_killed = true;
    for name in NAMES {
        let b = load(name)?;
        let report = mutation_sweep(&b).map_err(err)?;
        let doc = b.to_document();
        let mut by_structure: BTreeMap<&str, usize> = BTreeMap::new();
        let mut confirmed = 0;
        for m in &report.survivors {
            *by_structure.entry(m.structure.as_str()).or_default() += 1;
            let (mutant, _) =
                Bundle::from_documents(&[apply_mutation(&doc, m).map_err(err)?], Some(MAX_ARITY)).map_err(err)?;
            let mut valid = true;
            for (_, rel) in relations(&mutant) {
                for n in 1..=CHECK_ARITY {
                    valid &= naive_residual(rel, n).map_err(err)?.is_zero();
                }
            }
            confirmed += usize::from(valid);
        }
        all_killed &= report.survivors.is_empty();
        lines.push(format!(
            "{name}: killed {}/{} ({:.0}%); survivors by structure {by_structure:?}, {confirmed} confirmed valid by the naive evaluator",
            report.killed,
            report.total,
            100.0 * report.kill_rate()
        ));
    }
    let detail = lines.join("\n      ");
    if all_killed {
        Ok(detail)
    } else {
        Err(format!("kill rate below 100%\n      {detail}"))
    }
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "unshuffle tables in S₄", limit: Some(LIMIT_TABLES), check: unshuffle_tables },
        Criterion { id: 2, title: "example permutation", limit: Some(LIMIT_EXAMPLE), check: example_permutation },
        Criterion { id: 3, title: "unshuffle counting", limit: Some(LIMIT_COUNTING), check: counting },
        Criterion {
            id: 4,
            title: "module-slot unshuffle identity",
            limit: Some(LIMIT_IDENTITY),
            check: module_slot_identity,
        },
        Criterion { id: 5, title: "fixture verification", limit: Some(LIMIT_FIXTURES), check: fixture_verification },
        Criterion { id: 6, title: "restricted modules", limit: Some(LIMIT_OBJECTS), check: restricted_modules },
        Criterion { id: 7, title: "restricted module morphisms", limit: None, check: restricted_module_morphisms },
        Criterion { id: 8, title: "functoriality", limit: None, check: functoriality },
        Criterion { id: 9, title: "composition", limit: None, check: composition },
        Criterion { id: 10, title: "Lie specialization", limit: None, check: lie_specialization },
        Criterion { id: 11, title: "naive against optimized residuals", limit: None, check: differential },
        Criterion { id: 12, title: "single-bit mutation sensitivity", limit: Some(LIMIT_MUTATION), check: mutation },
    ];
    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let result = (c.check)();
        let elapsed = start.elapsed();
        let late = c.limit.is_some_and(|l| elapsed > l);
        let limit = c.limit.map_or(String::new(), |l| format!(" limit {l:?}"));
        let (status, detail) = match result {
            Ok(_) if late => ("FAIL", "over time limit".to_string()),
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {status} {} [{elapsed:.2?}{limit}]: {detail}", c.id, c.title);
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
