//! `gspec`: exhaustive checks on finite n-ary Γ-semirings from the command line.
//!
//! Every command prints one JSON report on stdout. Exit status 0 means the
//! command ran and every checked property held, 1 that a checked property
//! failed, 2 a usage or input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gspec_core::axioms::verify_axioms;
use gspec_core::corpus::builtin_example;
use gspec_core::duality::prim_vs_closed;
use gspec_core::ideals::{enumerate_ideals, is_prime_in, jacobson_radical, maximal_ideals_in, PrimeDef};
use gspec_core::localization::{localize, localize_at_prime, mult_closure, residue_at};
use gspec_core::module_search::primitive_spectrum;
use gspec_core::modules::{load_module, verify_bimodule};
use gspec_core::sheaf::{
    affine_comparison, associated_sheaf, build_structure_sheaf, quasi_coherence, sections, stalk,
    verify_module_sheaf_axioms, verify_sheaf_axioms,
};
use gspec_core::spectrum::{basic_open, compute_spectrum, generate_topology, is_partial_order, order_structure};
use gspec_core::structure::{decompose_direct, wedderburn_check, WedderburnCaps};
use gspec_core::{load_semiring, load_semiring_lenient, Error, FiniteGammaSemiring};

const SCHEMA: &str = "gspec/1";

#[derive(Parser)]
#[command(name = "gspec", version, about = "Exhaustive checks on finite n-ary Γ-semirings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Def {
    Elementwise,
    IdealPair,
}

impl From<Def> for PrimeDef {
    fn from(d: Def) -> Self {
        match d {
            Def::Elementwise => PrimeDef::Elementwise,
            Def::IdealPair => PrimeDef::IdealPair,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Primes {
    Elementwise,
    IdealPair,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a built-in algebra (TRIV, B3, N3, B3⊕B3, M2B3)
    Example {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every axiom exhaustively
    Verify {
        file: PathBuf,
        /// also fail on parameter-slot additivity
        #[arg(long)]
        strict: bool,
    },
    /// Ideal lattice with primality and maximality
    Ideals {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        primes: Primes,
    },
    Spectrum {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "ideal-pair")]
        prime_def: Def,
    },
    /// Open sets, closures, specialization and closed points
    Topology {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "ideal-pair")]
        prime_def: Def,
    },
    Localize {
        file: PathBuf,
        /// index of a spectrum point
        #[arg(long, conflicts_with = "invert", required_unless_present = "invert")]
        at_prime: Option<usize>,
        /// comma-separated elements generating the system
        #[arg(long, value_delimiter = ',')]
        invert: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value = "ideal-pair")]
        prime_def: Def,
    },
    /// Structure sheaf: stalks, global sections, optional axiom and module checks
    Sheaf {
        file: PathBuf,
        #[arg(long)]
        check_axioms: bool,
        /// index of an open set in the topology report
        #[arg(long)]
        sections: Option<usize>,
        #[arg(long)]
        module: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "elementwise")]
        prime_def: Def,
    },
    Radical {
        file: PathBuf,
    },
    Decompose {
        file: PathBuf,
        #[arg(long)]
        wedderburn: bool,
    },
    /// Annihilators of simple bi-modules up to a carrier size
    Prim {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_module_size: usize,
    },
    /// Primitive ideals against closed points
    Duality {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_module_size: usize,
    },
}

/// Raised when the input cannot be used at all.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

struct Report {
    input: Value,
    result: Value,
    findings: Vec<String>,
    truncations: Vec<String>,
    failed: bool,
}

impl Report {
    fn new(input: Value, result: Value) -> Self {
        Report {
            input,
            result,
            findings: Vec::new(),
            truncations: Vec::new(),
            failed: false,
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn read(path: &Path) -> Result<String, Usage> {
    std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<FiniteGammaSemiring, Usage> {
    Ok(load_semiring(&read(path)?)?)
}

fn describe(path: &Path, s: &FiniteGammaSemiring) -> Value {
    json!({
        "file": path.display().to_string(),
        "name": s.name(),
        "n": s.n(),
        "t_size": s.t_size(),
        "elements": s.elements(),
        "gammas": s.gamma_names(),
    })
}

/// Errors that are outcomes of a check rather than bad input.
fn property_error(e: &Error) -> bool {
    matches!(
        e,
        Error::ComplementNotClosed { .. }
            | Error::WellDefinednessFailure { .. }
            | Error::NotAnIdeal(_)
            | Error::InconsistentSheaf(_)
            | Error::NoUnitWitness(_)
            | Error::SizeOverflow(..)
    )
}

fn failed_with(input: Value, e: &Error) -> Report {
    let mut r = Report::new(input, json!({ "error": e.to_string() }));
    r.findings.push(e.to_string());
    r.failed = true;
    r
}

/// Runs `body`, turning property errors into a failing report.
fn checked(
    input: Value,
    body: impl FnOnce(&mut Report) -> Result<(), Error>,
) -> Result<Report, Usage> {
    let mut r = Report::new(input.clone(), Value::Null);
    match body(&mut r) {
        Ok(()) => Ok(r),
        Err(e) if property_error(&e) => Ok(failed_with(input, &e)),
        Err(e) => Err(e.into()),
    }
}

fn run(command: &Command) -> Result<Report, Usage> {
    match command {
        Command::Example { name, out } => {
            let s = builtin_example(name)?;
            let doc = s.to_json();
            let mut result = json!({ "name": s.name(), "t_size": s.t_size() });
            match out {
                Some(path) => {
                    std::fs::write(path, format!("{doc}\n"))
                        .map_err(|e| Usage(format!("cannot write {}: {e}", path.display())))?;
                    result["written"] = json!(path.display().to_string());
                }
                None => result["document"] = to_value(&s.to_document()),
            }
            Ok(Report::new(json!({ "example": name }), result))
        }
        Command::Verify { file, strict } => {
            let s = load_semiring_lenient(&read(file)?)?;
            let report = verify_axioms(&s);
            let mut r = Report::new(describe(file, &s), to_value(&report));
            r.result["strict_pass"] = json!(report.strict_pass());
            r.failed = if *strict { !report.strict_pass() } else { !report.pass };
            for v in report.violations.iter().chain(&report.parameter_additivity) {
                r.findings.push(format!("{:?} fails at witness {:?}", v.law, v.witness));
            }
            Ok(r)
        }
        Command::Ideals { file, primes } => {
            let s = load(file)?;
            let lattice = enumerate_ideals(&s);
            let maximal = maximal_ideals_in(&lattice);
            let (ew, ip) = match primes {
                Primes::Elementwise => (true, false),
                Primes::IdealPair => (false, true),
                Primes::Both => (true, true),
            };
            let mut counts = [0usize; 4];
            let mut rows = Vec::new();
            for ideal in lattice.ideals() {
                let mut row = json!({
                    "members": ideal.to_vec(),
                    "proper": ideal.is_proper(),
                    "maximal": maximal.contains(ideal),
                });
                if ideal.is_proper() {
                    let e = is_prime_in(&s, &lattice, ideal, PrimeDef::Elementwise)?;
                    let p = is_prime_in(&s, &lattice, ideal, PrimeDef::IdealPair)?;
                    counts[usize::from(e) * 2 + usize::from(p)] += 1;
                    if ew {
                        row["elementwise_prime"] = json!(e);
                    }
                    if ip {
                        row["ideal_pair_prime"] = json!(p);
                    }
                }
                rows.push(row);
            }
            let mut result = json!({ "ideals": rows });
            if ew && ip {
                result["agreement"] = json!({
                    "both": counts[3],
                    "elementwise_only": counts[2],
                    "ideal_pair_only": counts[1],
                    "neither": counts[0],
                });
            }
            Ok(Report::new(describe(file, &s), result))
        }
        Command::Spectrum { file, prime_def } => {
            let s = load(file)?;
            let spec = compute_spectrum(&s, (*prime_def).into());
            let u: Vec<usize> = vec![0; s.n() - 1];
            let opens: Vec<Value> = (0..s.t_size())
                .map(|a| json!({ "element": a, "points": basic_open(&spec, a, &u) }))
                .collect();
            let result = json!({
                "prime_def": spec.prime_def,
                "points": spec.points,
                "basic_opens": opens,
            });
            Ok(Report::new(describe(file, &s), result))
        }
        Command::Topology { file, prime_def } => {
            let s = load(file)?;
            let spec = compute_spectrum(&s, (*prime_def).into());
            let top = generate_topology(&s, &spec);
            let order = order_structure(&spec, &top);
            let k = spec.len();
            let inclusion_matches = (0..k).all(|p| {
                (0..k).all(|q| spec.points[p].is_subset(&spec.points[q]) == order.specializes(p, q))
            });
            let mut r = Report::new(
                describe(file, &s),
                json!({
                    "prime_def": spec.prime_def,
                    "points": spec.points,
                    "opens": top.opens,
                    "t0": top.t0,
                    "quasi_compact": top.quasi_compact,
                    "closures": order.closures,
                    "specialization": order.specialization,
                    "closed_points": order.closed_points,
                    "partial_order": is_partial_order(&order),
                    "inclusion_matches_specialization": inclusion_matches,
                }),
            );
            if !inclusion_matches {
                r.findings.push("prime inclusion differs from the specialization order".into());
            }
            r.failed = !top.t0 || !is_partial_order(&order);
            Ok(r)
        }
        Command::Localize { file, at_prime, invert, prime_def } => {
            let s = load(file)?;
            checked(describe(file, &s), |r| {
                if let Some(idx) = at_prime {
                    let spec = compute_spectrum(&s, (*prime_def).into());
                    let p = spec.points.get(*idx).ok_or_else(|| {
                        Error::IndexOutOfRange(format!("point {idx} of a {}-point spectrum", spec.len()))
                    })?;
                    let local = localize_at_prime(&s, p)?;
                    let residue = residue_at(&s, p)?;
                    r.result = to_value(&local);
                    r.result["residue_size"] = json!(residue.t_size());
                    if !local.is_local {
                        r.findings.push(format!("localization at {:?} is not local", p.to_vec()));
                        r.failed = true;
                    }
                } else {
                    let gens = invert.clone().unwrap_or_default();
                    if let Some(&bad) = gens.iter().find(|&&a| a >= s.t_size()) {
                        return Err(Error::IndexOutOfRange(format!("element {bad}")));
                    }
                    let system = mult_closure(&s, gens)?;
                    r.result = to_value(&localize(&s, &system)?);
                }
                Ok(())
            })
        }
        Command::Sheaf { file, check_axioms, sections: open_idx, module, prime_def } => {
            let s = load(file)?;
            let module_doc = module.as_deref().map(read).transpose()?;
            checked(describe(file, &s), |r| {
                let spec = compute_spectrum(&s, (*prime_def).into());
                let top = generate_topology(&s, &spec);
                let f = build_structure_sheaf(&s, &spec, &top)?;
                let stalks = (0..spec.len()).map(|p| stalk(&f, p)).collect::<Result<Vec<_>, _>>()?;
                for st in &stalks {
                    if !st.isomorphism.is_found() || !f.stalks[st.point].is_local {
                        r.findings.push(format!("stalk at point {} does not match a local localization", st.point));
                        r.failed = true;
                    }
                }
                let affine = affine_comparison(&s, &f)?;
                if !affine.canonical_is_iso {
                    r.findings.push("global sections differ from the algebra".into());
                }
                r.result = json!({
                    "prime_def": spec.prime_def,
                    "points": spec.points,
                    "opens": top.opens,
                    "local": f.stalks.iter().map(|l| l.is_local).collect::<Vec<_>>(),
                    "stalks": stalks,
                    "affine": affine,
                });
                if *check_axioms {
                    let ax = verify_sheaf_axioms(&f);
                    r.failed |= !ax.pass;
                    r.findings.extend(ax.failures.iter().map(|x| format!("{} fails on {:?}: {}", x.check, x.open_set, x.detail)));
                    r.truncations.extend(ax.truncations.iter().cloned());
                    r.result["axioms"] = to_value(&ax);
                }
                if let Some(idx) = open_idx {
                    let u = top.opens.get(*idx).ok_or_else(|| {
                        Error::IndexOutOfRange(format!("open {idx} of {}", top.opens.len()))
                    })?;
                    let space = sections(&f, u)?;
                    r.result["sections"] = json!({
                        "open": idx,
                        "open_set": space.open_set,
                        "values": space.sections,
                        "algebra": space.algebra.to_document(),
                    });
                }
                if let Some(doc) = &module_doc {
                    let m = load_module(&s, doc)?;
                    let mv = verify_bimodule(&s, &m)?;
                    if !mv.pass {
                        r.failed = true;
                        r.findings.push("module fails the bi-module laws".into());
                    }
                    let ms = associated_sheaf(&s, &m, &f)?;
                    let ax = verify_module_sheaf_axioms(&s, &ms);
                    let qc = quasi_coherence(&s, &ms)?;
                    r.failed |= !ax.pass || !qc.pass;
                    r.findings.extend(ax.failures.iter().map(|x| format!("module {} fails on {:?}: {}", x.check, x.open_set, x.detail)));
                    if !qc.pass {
                        r.findings.push("module sections over some D(a) differ from the fractions".into());
                    }
                    r.truncations.extend(ax.truncations.iter().cloned());
                    r.result["module"] = json!({
                        "size": m.size(),
                        "verify": mv,
                        "axioms": ax,
                        "quasi_coherence": qc,
                    });
                }
                Ok(())
            })
        }
        Command::Radical { file } => {
            let s = load(file)?;
            let lattice = enumerate_ideals(&s);
            let rad = jacobson_radical(&s);
            let mut r = Report::new(
                describe(file, &s),
                json!({ "maximal_ideals": maximal_ideals_in(&lattice), "radical": rad }),
            );
            if rad.degenerate {
                r.findings.push("no proper ideal; the radical is reported as the whole carrier".into());
            }
            Ok(r)
        }
        Command::Decompose { file, wedderburn } => {
            let s = load(file)?;
            checked(describe(file, &s), |r| {
                if *wedderburn {
                    let w = wedderburn_check(&s, &WedderburnCaps::default())?;
                    if let Some(d) = &w.decomposition {
                        r.failed = !d.complete;
                    }
                    r.truncations.extend(w.truncations.iter().cloned());
                    if !w.semisimple {
                        r.findings.push(format!("not semisimple: radical {:?}", w.radical.to_vec()));
                    }
                    r.result = to_value(&w);
                } else {
                    let d = decompose_direct(&s)?;
                    r.failed = !d.complete;
                    r.result = to_value(&d);
                }
                if r.failed {
                    r.findings.push("factors do not recombine to the algebra".into());
                }
                Ok(())
            })
        }
        Command::Prim { file, max_module_size } => {
            let s = load(file)?;
            let size = (*max_module_size).max(2);
            checked(describe(file, &s), |r| {
                let prim = primitive_spectrum(&s, size)?;
                r.truncations = prim.truncations.clone();
                r.result = to_value(&prim);
                Ok(())
            })
        }
        Command::Duality { file, max_module_size } => {
            let s = load(file)?;
            let size = (*max_module_size).max(2);
            checked(describe(file, &s), |r| {
                let d = prim_vs_closed(&s, size)?;
                r.findings = d.findings.clone();
                r.truncations = d.primitive.truncations.clone();
                r.failed = !d.rederived;
                r.result = json!({ "duality": d });
                Ok(())
            })
        }
    }
}

fn name_of(command: &Command) -> &'static str {
    match command {
        Command::Example { .. } => "example",
        Command::Verify { .. } => "verify",
        Command::Ideals { .. } => "ideals",
        Command::Spectrum { .. } => "spectrum",
        Command::Topology { .. } => "topology",
        Command::Localize { .. } => "localize",
        Command::Sheaf { .. } => "sheaf",
        Command::Radical { .. } => "radical",
        Command::Decompose { .. } => "decompose",
        Command::Prim { .. } => "prim",
        Command::Duality { .. } => "duality",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(r) => {
            let out = json!({
                "schema": SCHEMA,
                "command": name_of(&cli.command),
                "input": r.input,
                "result": r.result,
                "findings": r.findings,
                "truncations": r.truncations,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            for f in &r.findings {
                eprintln!("finding: {f}");
            }
            if r.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Usage(msg)) => {
            eprintln!("gspec: {msg}");
            ExitCode::from(2)
        }
    }
}
