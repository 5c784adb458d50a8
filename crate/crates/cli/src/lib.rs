//! Commands behind the `linfty` binary. Each returns an [`Outcome`] so the
//! commands can be driven from tests without spawning a process.
//!
//! Exit codes: 0 success, 1 mathematical failure (with a witness), 2 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use linfty::bundle::{Bundle, Document, Kind};
use linfty::oracle;
use linfty::perm::{self, BlockSpec};
use linfty::restrict::{self, RestrictionContext};
use linfty::{fixtures, linfty::compose, Error};
use serde_json::json;
use sha2::{Digest, Sha256};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Exit code and text for one command run. Warnings go to `stderr`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(e: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {e}\n") }
    }

    fn warn(&mut self, msg: &str) {
        self.stderr.push_str("warning: ");
        self.stderr.push_str(msg);
        self.stderr.push('\n');
    }

    fn warn_all(&mut self, msgs: &[String]) {
        for m in msgs {
            self.warn(m);
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "linfty", version, about = "L-infinity algebras, modules and restriction of scalars over F2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every relation of every structure in the given files.
    Verify {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Truncation arity; defaults to the declared value or the largest arity present plus 2.
        #[arg(long)]
        max_arity: Option<usize>,
        /// Only check these kinds (algebra, morphism, module, module_morphism).
        #[arg(long = "kind")]
        kinds: Vec<String>,
        /// Also write the report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Restrict a module (and optionally module morphisms) along an L-infinity morphism.
    Restrict {
        /// File holding the morphism and its algebras.
        #[arg(long)]
        morphism: PathBuf,
        /// File holding the module.
        #[arg(long)]
        module: PathBuf,
        /// Morphism to restrict along, when the file holds several.
        #[arg(long)]
        morphism_name: Option<String>,
        /// Module to restrict, when the file holds several.
        #[arg(long)]
        module_name: Option<String>,
        /// Module morphisms to restrict as well.
        #[arg(long = "also-morphism")]
        also_morphism: Vec<String>,
        /// Name of the restricted module; defaults to `<module>_restricted`.
        #[arg(long)]
        name: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        no_verify: bool,
        #[arg(long)]
        max_arity: Option<usize>,
    },
    /// Compose module morphisms `g ∘ f`.
    Compose {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        name: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        max_arity: Option<usize>,
    },
    /// List unshuffle permutations for the given block sizes.
    Unshuffles {
        #[arg(required = true)]
        sizes: Vec<usize>,
        /// Also order the first elements of equal-size blocks.
        #[arg(long)]
        primed: bool,
        /// Keep only permutations with σ(p) = v, written `p=v`.
        #[arg(long)]
        anchor: Option<String>,
    },
    /// Compare the two presentations of the module-slot unshuffle sum.
    Lemma4 {
        #[arg(long)]
        n: usize,
        /// Print the canonical forms of both sides.
        #[arg(long)]
        dump: bool,
    },
    /// Write a named fixture bundle (or `all`).
    Fixtures {
        name: String,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Verify { paths, max_arity, kinds, report } => cmd_verify(&paths, max_arity, &kinds, report.as_deref()),
        Command::Restrict {
            morphism,
            module,
            morphism_name,
            module_name,
            also_morphism,
            name,
            output,
            no_verify,
            max_arity,
        } => cmd_restrict(&RestrictArgs {
            morphism,
            module,
            morphism_name,
            module_name,
            also_morphism,
            name,
            output,
            verify: !no_verify,
            max_arity,
        }),
        Command::Compose { paths, f, g, name, output, max_arity } => {
            cmd_compose(&paths, &f, &g, name.as_deref(), output.as_deref(), max_arity)
        }
        Command::Unshuffles { sizes, primed, anchor } => cmd_unshuffles(&sizes, primed, anchor.as_deref()),
        Command::Lemma4 { n, dump } => cmd_lemma4(n, dump),
        Command::Fixtures { name, output } => cmd_fixtures(&name, &output),
    }
}

fn read_documents(paths: &[PathBuf]) -> Result<Vec<(PathBuf, String, Document)>, String> {
    let mut out: Vec<(PathBuf, String, Document)> = Vec::new();
    for p in paths {
        if out.iter().any(|(q, _, _)| q == p) {
            continue;
        }
        let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
        let doc = Document::parse(&text).map_err(|e| format!("{}: {e}", p.display()))?;
        out.push((p.clone(), text, doc));
    }
    Ok(out)
}

/// The bundle, its load warnings, and each input path with its text.
type Loaded = (Bundle, Vec<String>, Vec<(PathBuf, String)>);

fn load(paths: &[PathBuf], max_arity: Option<usize>) -> Result<Loaded, String> {
    let docs = read_documents(paths)?;
    let (bundle, warnings) =
        Bundle::from_documents(&docs.iter().map(|(_, _, d)| d.clone()).collect::<Vec<_>>(), max_arity)
            .map_err(|e| e.to_string())?;
    Ok((bundle, warnings, docs.into_iter().map(|(p, t, _)| (p, t)).collect()))
}

fn write_output(path: Option<&Path>, text: &str, outcome: &mut Outcome) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            outcome.stdout.push_str(text);
            Ok(())
        }
    }
}

pub fn cmd_verify(paths: &[PathBuf], max_arity: Option<usize>, kinds: &[String], report: Option<&Path>) -> Outcome {
    let kinds: Vec<Kind> = match kinds.iter().map(|k| k.parse::<Kind>()).collect::<Result<_, Error>>() {
        Ok(k) => k,
        Err(e) => return Outcome::input_error(e),
    };
    let (bundle, warnings, _) = match load(paths, max_arity) {
        Ok(x) => x,
        Err(e) => return Outcome::input_error(e),
    };
    let mut out = Outcome::default();
    out.warn_all(&warnings);
    let filter = (!kinds.is_empty()).then_some(kinds.as_slice());
    let result = match bundle.verify(filter) {
        Ok(r) => r,
        Err(e) => return Outcome::input_error(e),
    };
    out.stdout.push_str(&result.to_string());
    if let Some(p) = report {
        let text = serde_json::to_string_pretty(&result).expect("reports serialize") + "\n";
        if let Err(e) = fs::write(p, text) {
            return Outcome::input_error(format!("{}: {e}", p.display()));
        }
    }
    out.code = if result.passed() { EXIT_OK } else { EXIT_FAILURE };
    out
}

/// Arguments of [`cmd_restrict`].
#[derive(Clone, Debug, Default)]
pub struct RestrictArgs {
    pub morphism: PathBuf,
    pub module: PathBuf,
    pub morphism_name: Option<String>,
    pub module_name: Option<String>,
    pub also_morphism: Vec<String>,
    pub name: Option<String>,
    pub output: Option<PathBuf>,
    pub verify: bool,
    pub max_arity: Option<usize>,
}

fn pick_name<'a>(explicit: Option<&'a str>, candidates: Vec<&'a str>, what: &str) -> Result<&'a str, String> {
    match explicit {
        Some(n) => Ok(n),
        None if candidates.len() == 1 => Ok(candidates[0]),
        None => Err(format!("the file holds {} {what}s; name one explicitly", candidates.len())),
    }
}

fn names_in(doc: &Document, kind: Kind) -> Vec<&str> {
    doc.structures.iter().filter(|s| s.kind() == kind).map(|s| s.name()).collect()
}

pub fn cmd_restrict(args: &RestrictArgs) -> Outcome {
    match restrict_inner(args) {
        Ok(o) => o,
        Err(e) => Outcome::input_error(e),
    }
}

fn restrict_inner(args: &RestrictArgs) -> Result<Outcome, String> {
    let docs = read_documents(&[args.morphism.clone(), args.module.clone()])?;
    let morphism_doc = &docs[0].2;
    let module_doc = &docs.iter().find(|(p, _, _)| *p == args.module).expect("read above").2;
    let morphism_name =
        pick_name(args.morphism_name.as_deref(), names_in(morphism_doc, Kind::Morphism), "morphism")?.to_string();
    let module_name = pick_name(args.module_name.as_deref(), names_in(module_doc, Kind::Module), "module")?.to_string();
    let (bundle, warnings, sources) = load(&[args.morphism.clone(), args.module.clone()], args.max_arity)?;
    let mut out = Outcome::default();
    out.warn_all(&warnings);

    let morphism = bundle.morphism(&morphism_name).ok_or_else(|| format!("no morphism {morphism_name:?}"))?.clone();
    let module = bundle.module(&module_name).ok_or_else(|| format!("no module {module_name:?}"))?.clone();
    let ctx = RestrictionContext::new(morphism.clone()).map_err(|e| e.to_string())?;
    if !ctx.morphism_verified() {
        out.warn(&format!(
            "morphism {morphism_name} fails its relation at n = {:?}; output is unverified",
            ctx.failing_arities()
        ));
    }
    let mut module_ok = true;
    if args.verify {
        for n in 1..=module.max_arity() {
            if !module.module_residual(n).map_err(|e| e.to_string())?.is_zero() {
                out.warn(&format!("module {module_name} fails its relation at n = {n}; output is unverified"));
                module_ok = false;
                break;
            }
        }
    }
    let restricted = restrict::restrict_module(&ctx, &module, args.verify).map_err(|e| e.to_string())?;
    let mut value = restricted.value;
    let out_name = args.name.clone().unwrap_or_else(|| format!("{module_name}_restricted"));
    value.set_name(out_name.clone());

    let mut result = Bundle::new(ctx.max_arity());
    let mut restricted_modules = vec![(module_name.clone(), out_name.clone())];
    result.insert_module(Arc::new(value)).map_err(|e| e.to_string())?;
    let mut failures: Vec<String> = restricted
        .output_failures
        .iter()
        .flatten()
        .map(|n| format!("{out_name}: module relation at n = {n}"))
        .collect();

    for f_name in &args.also_morphism {
        let f = bundle.module_morphism(f_name).ok_or_else(|| format!("no module morphism {f_name:?}"))?;
        let r = restrict::restrict_morphism(&ctx, f, args.verify).map_err(|e| e.to_string())?;
        failures
            .extend(r.output_failures.iter().flatten().map(|n| format!("{f_name}_restricted: relation at n = {n}")));
        // the restricted endpoints are emitted under their own names
        for end in [f.source(), f.target()] {
            if restricted_modules.iter().all(|(src, _)| src != end.name()) {
                let mut m = restrict::restrict_module(&ctx, end, false).map_err(|e| e.to_string())?.value;
                let renamed = format!("{}_restricted", end.name());
                m.set_name(renamed.clone());
                result.insert_module(Arc::new(m)).map_err(|e| e.to_string())?;
                restricted_modules.push((end.name().to_string(), renamed));
            }
        }
        let lookup =
            |n: &str| restricted_modules.iter().find(|(s, _)| s == n).map(|(_, r)| r.clone()).expect("inserted");
        let (src, tgt) = (lookup(f.source().name()), lookup(f.target().name()));
        let mut h = r.value;
        h.set_name(format!("{f_name}_restricted"));
        let h = rename_endpoints(&result, h, &src, &tgt)?;
        result.insert_module_morphism(Arc::new(h)).map_err(|e| e.to_string())?;
    }

    let verified = args.verify.then_some(ctx.morphism_verified() && module_ok && failures.is_empty());
    let mut doc = result.to_document();
    doc.provenance = Some(json!({
        "command": "restrict",
        "inputs": sources
            .iter()
            .map(|(p, text)| json!({"path": p.display().to_string(), "sha256": hex::encode(Sha256::digest(text.as_bytes()))}))
            .collect::<Vec<_>>(),
        "morphism": morphism_name,
        "module": module_name,
        "max_arity": ctx.max_arity(),
        "morphism_verified": ctx.morphism_verified(),
        "verified": verified,
    }));
    write_output(args.output.as_deref(), &doc.to_canonical_json(), &mut out)?;

    if !failures.is_empty() {
        out.code = EXIT_FAILURE;
        if ctx.morphism_verified() && module_ok {
            out.stderr.push_str("error: restricted output fails verification although the inputs verify; this is an implementation bug\n");
        } else {
            out.stderr.push_str("error: restricted output fails verification; the inputs are invalid\n");
        }
        for f in failures {
            out.stderr.push_str(&format!("  {f}\n"));
        }
    }
    Ok(out)
}

/// Points a restricted module morphism at the renamed restricted modules in `result`.
fn rename_endpoints(
    result: &Bundle,
    h: linfty::ModuleMorphism,
    src: &str,
    tgt: &str,
) -> Result<linfty::ModuleMorphism, String> {
    let source = result.module(src).expect("inserted").clone();
    let target = result.module(tgt).expect("inserted").clone();
    let mut out = linfty::ModuleMorphism::zero(h.name(), source, target, h.max_arity()).map_err(|e| e.to_string())?;
    for (n, c) in h.comps() {
        let mut m = linfty::SymMultiMap::zero(out.comp_signature(n)).map_err(|e| e.to_string())?;
        for (k, v) in c.entries() {
            m.add_entry(k, v).map_err(|e| e.to_string())?;
        }
        out.set_comp(n, m).map_err(|e| e.to_string())?;
    }
    Ok(out)
}

pub fn cmd_compose(
    paths: &[PathBuf],
    f: &str,
    g: &str,
    name: Option<&str>,
    output: Option<&Path>,
    max_arity: Option<usize>,
) -> Outcome {
    let (bundle, warnings, _) = match load(paths, max_arity) {
        Ok(x) => x,
        Err(e) => return Outcome::input_error(e),
    };
    let mut out = Outcome::default();
    out.warn_all(&warnings);
    let (Some(fm), Some(gm)) = (bundle.module_morphism(f), bundle.module_morphism(g)) else {
        return Outcome::input_error(format!("module morphisms {f:?} and {g:?} must both be present"));
    };
    let mut gf = match compose(gm, fm) {
        Ok(x) => x,
        Err(e) => return Outcome::input_error(e),
    };
    gf.set_name(name.map_or_else(|| format!("{g}_after_{f}"), str::to_string));
    let mut failing = Vec::new();
    for n in 1..=gf.max_arity() {
        match gf.modhom_residual(n) {
            Ok(r) if r.is_zero() => {}
            Ok(r) => {
                let (k, v) = r.witness().expect("nonzero");
                failing.push(format!("n = {n}, input {} -> {}", linfty::gfa::fmt_key(k), v));
            }
            Err(e) => return Outcome::input_error(e),
        }
    }
    let mut result = Bundle::new(gf.max_arity());
    let gf_name = gf.name().to_string();
    if let Err(e) = result.insert_module_morphism(Arc::new(gf)) {
        return Outcome::input_error(e);
    }
    if let Err(e) = write_output(output, &result.to_canonical_json(), &mut out) {
        return Outcome::input_error(e);
    }
    if !failing.is_empty() {
        out.code = EXIT_FAILURE;
        out.stderr.push_str(&format!("error: {gf_name} is not a module morphism\n"));
        for f in failing {
            out.stderr.push_str(&format!("  {f}\n"));
        }
    }
    out
}

pub fn cmd_unshuffles(sizes: &[usize], primed: bool, anchor: Option<&str>) -> Outcome {
    let spec = match BlockSpec::new(sizes.to_vec()) {
        Ok(s) => s,
        Err(e) => return Outcome::input_error(e),
    };
    let perms = match anchor {
        Some(a) => {
            let parsed = a
                .split_once('=')
                .and_then(|(p, v)| Some((p.trim().parse::<usize>().ok()?, v.trim().parse::<usize>().ok()?)));
            let Some((p, v)) = parsed else {
                return Outcome::input_error(format!("anchor {a:?} must look like p=v"));
            };
            match perm::filtered_unshuffles(&spec, p, v) {
                Ok(ps) if primed => match perm::primed_unshuffles(&spec) {
                    Ok(pr) => ps.into_iter().filter(|x| pr.contains(x)).collect(),
                    Err(e) => return Outcome::input_error(e),
                },
                Ok(ps) => ps,
                Err(e) => return Outcome::input_error(e),
            }
        }
        None if primed => match perm::primed_unshuffles(&spec) {
            Ok(ps) => ps,
            Err(e) => return Outcome::input_error(e),
        },
        None => perm::unshuffles(&spec),
    };
    let mut out = Outcome::default();
    for p in perms {
        out.stdout.push_str(&p.to_string());
        out.stdout.push('\n');
    }
    out
}

pub fn cmd_lemma4(n: usize, dump: bool) -> Outcome {
    if n < 2 {
        return Outcome::input_error("--n must be at least 2");
    }
    let (lhs, rhs, report) = match (oracle::lemma4_lhs(n), oracle::lemma4_rhs(n), oracle::check_lemma4(n)) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return Outcome::input_error(e),
    };
    let mut out = Outcome::default();
    if dump {
        for (side, set) in [("lhs", &lhs), ("rhs", &rhs)] {
            for (op, count) in set {
                out.stdout.push_str(&format!("{side} {count} {op}\n"));
            }
        }
    }
    out.stdout.push_str(&format!(
        "n = {n}: lhs {} terms, rhs {} terms, {} distinct operators\n",
        report.lhs_count, report.rhs_count, report.distinct
    ));
    for (op, a, b) in &report.mismatches {
        out.stdout.push_str(&format!("mismatch {op}: lhs {a}, rhs {b}\n"));
    }
    if report.passed() {
        out.stdout.push_str("PASS\n");
    } else {
        out.stdout.push_str("FAIL\n");
        out.code = EXIT_FAILURE;
    }
    out
}

pub fn cmd_fixtures(name: &str, dir: &Path) -> Outcome {
    let names: Vec<&str> = if name == "all" { fixtures::NAMES.to_vec() } else { vec![name] };
    let mut out = Outcome::default();
    if let Err(e) = fs::create_dir_all(dir) {
        return Outcome::input_error(format!("{}: {e}", dir.display()));
    }
    for n in names {
        let bundle = match fixtures::fixture(n) {
            Ok(b) => b,
            Err(e) => return Outcome::input_error(e),
        };
        let path = dir.join(format!("{n}.json"));
        if let Err(e) = fs::write(&path, bundle.to_canonical_json()) {
            return Outcome::input_error(format!("{}: {e}", path.display()));
        }
        out.stdout.push_str(&format!("{}\n", path.display()));
    }
    out
}

/// Caps rayon's global pool from `LINFTY_THREADS` when set.
pub fn configure_threads() -> Result<(), String> {
    match std::env::var("LINFTY_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| format!("LINFTY_THREADS={v:?} is not a number"))?;
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
        }
        Err(_) => Ok(()),
    }
}
