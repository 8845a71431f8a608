//! Command-line front end: algebra I/O, construction, classification,
//! decomposition, equation checking, epicness decisions, and certificate
//! emission.
//!
//! Exit codes: 0 = success or true verdict, 1 = well-formed false verdict
//! (an equation fails, a subalgebra is not epic, …), 2 = invalid input or
//! usage.  Certificates go to standard output as JSON; a one-line human
//! summary goes to standard error.  `construct` emits a bare algebra
//! document instead of a certificate so its output can feed the other
//! commands directly.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use demorgan::algebra::{FiniteAlgebra, RawAlgebra};
use demorgan::classify::classify;
use demorgan::corpus;
use demorgan::iso::isomorphism;
use demorgan::morphism::{
    all_homomorphisms, hs_up_to_iso, is_epic, separating_pair, separating_pair_gsm,
    subalgebra_generated, Homomorphism,
};
use demorgan::set::ElemSet;
use demorgan::structure::{
    bound_check, decompose_dmm, decompose_otimes, minimal_generating_set,
    neg_gen_equivalence_suite, reflection_recognize, rigorous_compactness_suite,
};
use demorgan::term::{check_equation, named_equation, parse_equation, EquationVerdict};
use demorgan::{construct, Term};

#[derive(Parser)]
#[command(name = "demorgan", version, about = "Finite-algebra workbench for residuated lattices")]
struct Cli {
    /// Resolve bare algebra arguments against the built-in corpus
    /// (2, 2p, C4, D4, S2…S7, S3o2, S3o3, A2, A3, A5, A2p…A4p, refl2p,
    /// S3C4, RS3) before trying the filesystem.
    #[arg(long, global = true)]
    corpus: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra document.
    Validate { algebra: String },
    /// Classify a validated algebra.
    Classify { algebra: String },
    /// Build an algebra and print its JSON document.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// List every homomorphism from one algebra to another.
    Homs { source: String, target: String },
    /// Decide whether a subuniverse is epic relative to a generated variety.
    Epic(EpicArgs),
    /// Produce a separating pair of homomorphisms at a designated element.
    Separate(SeparateArgs),
    /// Invert a construction.
    Decompose(DecomposeArgs),
    /// Run a check suite or an equation against an algebra.
    Check(CheckArgs),
    /// Compute the subalgebra generated by a set of elements.
    Subalg(SubalgArgs),
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// The Sugihara chain with N elements.
    Sugihara { n: usize },
    /// S3 with the block above e fattened to a K-element chain.
    Oplus { k: usize },
    /// Lexicographic chain sum from a spec document {"base": …, "sizes": […]}.
    Otimes { spec: String },
    /// Reflection of a Dunn monoid.
    Reflect { algebra: String },
    /// Rigorous extension of a De Morgan monoid by an odd Sugihara chain.
    Rext { chain: String, algebra: String },
    /// Truncated-multiplication chain with involution.
    Ap { p: usize },
    /// Involution-free truncated-multiplication chain.
    #[command(name = "ap+")]
    ApPlus { p: usize },
    /// A named small algebra: 2, 2p, C4, D4 or RS3.
    Named { key: String },
}

#[derive(Args)]
struct EpicArgs {
    #[arg(long)]
    ambient: String,
    /// Comma-separated element indices of the subuniverse.
    #[arg(long)]
    sub: String,
    /// Comma-separated generator algebras (paths or corpus keys).
    #[arg(long, value_delimiter = ',')]
    gens: Vec<String>,
}

#[derive(Args)]
struct SeparateArgs {
    #[arg(long)]
    ambient: String,
    #[arg(long)]
    sub: String,
    /// The element the two maps must disagree at.
    #[arg(long)]
    element: usize,
    /// Force the generalized-Sugihara variant.
    #[arg(long)]
    gsm: bool,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long, value_parser = ["otimes", "dmm", "reflect"])]
    mode: String,
    algebra: String,
}

#[derive(Args)]
struct CheckArgs {
    /// A check suite: negcone, bounds or structure.
    #[arg(long, conflicts_with = "equation")]
    suite: Option<String>,
    /// An equation "lhs = rhs", or a named key: sigma, sigma-sm, negcone,
    /// gsm, semilinear.
    #[arg(long)]
    equation: Option<String>,
    /// Generators for the bounds suite (defaults to a minimal set).
    #[arg(long)]
    gens: Option<String>,
    algebra: String,
}

#[derive(Args)]
struct SubalgArgs {
    algebra: String,
    /// Comma-separated element indices to generate from.
    #[arg(long)]
    gens: String,
}

#[derive(Serialize)]
struct InputRecord {
    source: String,
    sha256: String,
}

#[derive(Serialize)]
struct Certificate {
    tool: &'static str,
    version: &'static str,
    command: Vec<String>,
    inputs: Vec<InputRecord>,
    verdict: Value,
    witnesses: Value,
}

struct Loaded {
    algebra: FiniteAlgebra,
    record: InputRecord,
}

#[derive(Debug)]
enum CliError {
    /// Invalid input or usage (exit 2).
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(out, "{msg}"),
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn load_algebra(arg: &str, use_corpus: bool) -> Result<Loaded, CliError> {
    if use_corpus {
        if let Some(algebra) = corpus::corpus_algebra(arg) {
            let doc = algebra.to_raw().to_json();
            return Ok(Loaded {
                algebra,
                record: InputRecord {
                    source: format!("corpus:{arg}"),
                    sha256: sha256_hex(doc.as_bytes()),
                },
            });
        }
    }
    let bytes = fs::read(arg).map_err(|e| CliError::Input(format!("cannot read {arg}: {e}")))?;
    let raw = RawAlgebra::from_json(
        std::str::from_utf8(&bytes).map_err(|e| CliError::Input(format!("{arg}: {e}")))?,
    )
    .map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
    let algebra =
        FiniteAlgebra::validate(raw).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
    Ok(Loaded {
        algebra,
        record: InputRecord {
            source: arg.to_string(),
            sha256: sha256_hex(&bytes),
        },
    })
}

fn parse_elem_set(text: &str, size: usize) -> Result<ElemSet, CliError> {
    let mut set = ElemSet::EMPTY;
    for part in text.split(',').filter(|p| !p.is_empty()) {
        let idx: usize = part
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("bad element index `{part}`")))?;
        if idx >= size {
            return Err(CliError::Input(format!(
                "element index {idx} out of range for a carrier of size {size}"
            )));
        }
        set = set.insert(idx);
    }
    Ok(set)
}

fn doc(a: &FiniteAlgebra) -> Value {
    serde_json::to_value(a.to_raw()).expect("documents serialize")
}

fn hom_value(h: &Homomorphism) -> Value {
    json!({ "map": h.map() })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match run(&cli, argv) {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(cert: &Certificate, summary: &str, code: u8) -> ExitCode {
    println!(
        "{}",
        serde_json::to_string(cert).expect("certificates serialize")
    );
    eprintln!("{summary}");
    ExitCode::from(code)
}

fn run(cli: &Cli, argv: Vec<String>) -> Result<ExitCode, CliError> {
    let cert = |inputs: Vec<InputRecord>, verdict: Value, witnesses: Value| Certificate {
        tool: "demorgan",
        version: env!("CARGO_PKG_VERSION"),
        command: argv.clone(),
        inputs,
        verdict,
        witnesses,
    };
    match &cli.command {
        Command::Validate { algebra } => {
            // Validation failures surface as input errors; reaching this
            // point means the document parsed and every axiom held.
            let loaded = load_algebra(algebra, cli.corpus)?;
            let c = cert(
                vec![loaded.record],
                json!("valid"),
                json!({ "size": loaded.algebra.size() }),
            );
            Ok(emit(
                &c,
                &format!("valid algebra with {} elements", loaded.algebra.size()),
                0,
            ))
        }
        Command::Classify { algebra } => {
            let loaded = load_algebra(algebra, cli.corpus)?;
            let report = classify(&loaded.algebra);
            let summary: Vec<&str> = report
                .entries()
                .iter()
                .filter(|(_, flag)| flag.holds)
                .map(|(name, _)| *name)
                .collect();
            let c = cert(
                vec![loaded.record],
                serde_json::to_value(&report).expect("reports serialize"),
                Value::Null,
            );
            Ok(emit(&c, &format!("holds: {}", summary.join(", ")), 0))
        }
        Command::Construct(what) => {
            let algebra = run_construct(what, cli.corpus)?;
            println!("{}", algebra.to_raw().to_json());
            eprintln!("constructed {} elements", algebra.size());
            Ok(ExitCode::SUCCESS)
        }
        Command::Homs { source, target } => {
            let a = load_algebra(source, cli.corpus)?;
            let b = load_algebra(target, cli.corpus)?;
            if a.algebra.has_involution() != b.algebra.has_involution() {
                return Err(CliError::Input(
                    "homomorphism search requires a common signature".into(),
                ));
            }
            let homs = all_homomorphisms(&a.algebra, &b.algebra);
            let maps: Vec<Value> = homs.iter().map(hom_value).collect();
            let c = cert(
                vec![a.record, b.record],
                json!(homs.len()),
                json!({ "homomorphisms": maps }),
            );
            Ok(emit(&c, &format!("{} homomorphisms", homs.len()), 0))
        }
        Command::Epic(args) => {
            let ambient = load_algebra(&args.ambient, cli.corpus)?;
            let sub = parse_elem_set(&args.sub, ambient.algebra.size())?;
            let mut inputs = vec![ambient.record];
            let mut gens = Vec::new();
            for g in &args.gens {
                let loaded = load_algebra(g, cli.corpus)?;
                inputs.push(loaded.record);
                gens.push(loaded.algebra);
            }
            if gens.is_empty() {
                return Err(CliError::Input("at least one generator is required".into()));
            }
            if gens
                .iter()
                .any(|g| g.has_involution() != ambient.algebra.has_involution())
            {
                return Err(CliError::Input(
                    "generators must share the ambient algebra's signature".into(),
                ));
            }
            // Warn when the ambient algebra is not visibly in the variety.
            let seen = hs_up_to_iso(&gens);
            if !seen
                .iter()
                .any(|c| isomorphism(c, &ambient.algebra).is_some())
            {
                eprintln!(
                    "warning: the ambient algebra is not among the generators' \
                     subquotients; variety membership is the caller's responsibility"
                );
            }
            let verdict = is_epic(&ambient.algebra, sub, &gens)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let witnesses = match &verdict.witness {
                None => Value::Null,
                Some(w) => json!({
                    "target": doc(w.g.target()),
                    "g": hom_value(&w.g),
                    "h": hom_value(&w.h),
                    "disagreesAt": w.disagrees_at,
                }),
            };
            let c = cert(inputs, json!({ "epic": verdict.epic }), witnesses);
            let code = u8::from(!verdict.epic);
            Ok(emit(&c, &format!("epic: {}", verdict.epic), code))
        }
        Command::Separate(args) => {
            let ambient = load_algebra(&args.ambient, cli.corpus)?;
            let sub = parse_elem_set(&args.sub, ambient.algebra.size())?;
            if args.element >= ambient.algebra.size() {
                return Err(CliError::Input("element index out of range".into()));
            }
            let pair = if args.gsm {
                separating_pair_gsm(&ambient.algebra, sub, args.element)
            } else {
                separating_pair(&ambient.algebra, sub, args.element)
            }
            .map_err(|e| CliError::Input(e.to_string()))?;
            let c = cert(
                vec![ambient.record],
                json!("separated"),
                json!({
                    "target": doc(&pair.target),
                    "g": hom_value(&pair.g),
                    "h": hom_value(&pair.h),
                    "separatedAt": pair.separated_at,
                    "replacedBy": pair.replaced_by,
                    "case": format!("{:?}", pair.case),
                }),
            );
            Ok(emit(
                &c,
                &format!("separated element {} via {:?}", pair.separated_at, pair.case),
                0,
            ))
        }
        Command::Decompose(args) => {
            let loaded = load_algebra(&args.algebra, cli.corpus)?;
            match args.mode.as_str() {
                "otimes" => {
                    let d = decompose_otimes(&loaded.algebra)
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    let c = cert(
                        vec![loaded.record],
                        json!("decomposed"),
                        json!({
                            "base": doc(&d.base),
                            "blocks": d.blocks,
                            "reassembled": doc(&d.reassembled),
                            "iso": hom_value(&d.iso),
                        }),
                    );
                    Ok(emit(
                        &c,
                        &format!("base of {} elements, {} blocks", d.base.size(), d.blocks.len()),
                        0,
                    ))
                }
                "dmm" => {
                    let d = decompose_dmm(&loaded.algebra)
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    let c = cert(
                        vec![loaded.record],
                        json!("decomposed"),
                        json!({
                            "core": doc(&d.core),
                            "coreElements": d.core_elems,
                            "oddFactor": doc(&d.odd_factor),
                            "reassembled": doc(&d.reassembled),
                            "iso": hom_value(&d.iso),
                        }),
                    );
                    Ok(emit(
                        &c,
                        &format!(
                            "core of {} elements inside an odd chain of {}",
                            d.core.size(),
                            d.odd_factor.size()
                        ),
                        0,
                    ))
                }
                "reflect" => {
                    let found = reflection_recognize(&loaded.algebra)
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    match found {
                        Some((d, iso)) => {
                            let c = cert(
                                vec![loaded.record],
                                json!({ "reflection": true }),
                                json!({ "base": doc(&d), "iso": hom_value(&iso) }),
                            );
                            Ok(emit(&c, &format!("reflection of {} elements", d.size()), 0))
                        }
                        None => {
                            let c = cert(
                                vec![loaded.record],
                                json!({ "reflection": false }),
                                Value::Null,
                            );
                            Ok(emit(&c, "not a reflection", 1))
                        }
                    }
                }
                _ => unreachable!("clap validates the mode"),
            }
        }
        Command::Check(args) => run_check(cli, args, cert),
        Command::Subalg(args) => {
            let loaded = load_algebra(&args.algebra, cli.corpus)?;
            let gens = parse_elem_set(&args.gens, loaded.algebra.size())?;
            let (sub, embedding) = subalgebra_generated(&loaded.algebra, gens);
            let c = cert(
                vec![loaded.record],
                json!("generated"),
                json!({
                    "subalgebra": doc(&sub),
                    "embedding": hom_value(&embedding),
                }),
            );
            Ok(emit(
                &c,
                &format!("generated {} of {} elements", sub.size(), loaded.algebra.size()),
                0,
            ))
        }
    }
}

fn run_construct(what: &ConstructCmd, use_corpus: bool) -> Result<FiniteAlgebra, CliError> {
    match what {
        ConstructCmd::Sugihara { n } => {
            if *n == 0 {
                return Err(CliError::Input("the chain needs at least one element".into()));
            }
            Ok(construct::sugihara(*n))
        }
        ConstructCmd::Oplus { k } => {
            if *k == 0 {
                return Err(CliError::Input("the block needs at least one element".into()));
            }
            Ok(construct::oplus(*k))
        }
        ConstructCmd::Otimes { spec } => {
            #[derive(serde::Deserialize)]
            struct SpecDoc {
                base: RawAlgebra,
                sizes: Vec<usize>,
            }
            let bytes =
                fs::read(spec).map_err(|e| CliError::Input(format!("cannot read {spec}: {e}")))?;
            let parsed: SpecDoc = serde_json::from_slice(&bytes)
                .map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
            let base = FiniteAlgebra::validate(parsed.base)
                .map_err(|e| CliError::Input(format!("{spec}: base: {e}")))?;
            let out = construct::otimes(&construct::ChainFamilySpec {
                base,
                sizes: parsed.sizes,
            })
            .map_err(|e| CliError::Input(e.to_string()))?;
            Ok(out.algebra)
        }
        ConstructCmd::Reflect { algebra } => {
            let loaded = load_algebra(algebra, use_corpus)?;
            construct::reflection(&loaded.algebra).map_err(|e| CliError::Input(e.to_string()))
        }
        ConstructCmd::Rext { chain, algebra } => {
            let s = load_algebra(chain, use_corpus)?;
            let a = load_algebra(algebra, use_corpus)?;
            construct::rigorous_extension(&s.algebra, &a.algebra)
                .map_err(|e| CliError::Input(e.to_string()))
        }
        ConstructCmd::Ap { p } => {
            if *p == 0 {
                return Err(CliError::Input("p must be positive".into()));
            }
            Ok(construct::ap_family(*p))
        }
        ConstructCmd::ApPlus { p } => {
            if *p == 0 {
                return Err(CliError::Input("p must be positive".into()));
            }
            Ok(construct::ap_plus(*p))
        }
        ConstructCmd::Named { key } => construct::named_algebra(key)
            .ok_or_else(|| CliError::Input(format!("unknown algebra key `{key}`"))),
    }
}

fn run_check(
    cli: &Cli,
    args: &CheckArgs,
    cert: impl Fn(Vec<InputRecord>, Value, Value) -> Certificate,
) -> Result<ExitCode, CliError> {
    let loaded = load_algebra(&args.algebra, cli.corpus)?;
    let a = &loaded.algebra;
    match (&args.suite, &args.equation) {
        (Some(suite), None) => match suite.as_str() {
            "negcone" => {
                let report =
                    neg_gen_equivalence_suite(a).map_err(|e| CliError::Input(e.to_string()))?;
                let ok = report.agree && report.generation;
                let summary = if ok {
                    "negatively generated; all three computations agree".to_string()
                } else if report.agree {
                    match &report.counterexample {
                        Some(asg) => format!(
                            "not negatively generated; counterexample {}",
                            serde_json::to_string(asg).unwrap()
                        ),
                        None => "not negatively generated".to_string(),
                    }
                } else {
                    "computations disagree".to_string()
                };
                let c = cert(
                    vec![loaded.record],
                    serde_json::to_value(&report).expect("reports serialize"),
                    Value::Null,
                );
                Ok(emit(&c, &summary, u8::from(!ok)))
            }
            "bounds" => {
                let gens = match &args.gens {
                    Some(text) => parse_elem_set(text, a.size())?,
                    None => minimal_generating_set(a),
                };
                let report = bound_check(a, gens).map_err(|e| CliError::Input(e.to_string()))?;
                let ok = report.entries.iter().all(|e| e.size <= e.bound);
                let summary = format!(
                    "{} applicable bounds, generators {:?}",
                    report.entries.len(),
                    report.generators
                );
                let c = cert(
                    vec![loaded.record],
                    serde_json::to_value(&report).expect("reports serialize"),
                    Value::Null,
                );
                Ok(emit(&c, &summary, u8::from(!ok)))
            }
            "structure" => {
                let rc = rigorous_compactness_suite(a);
                let reflection = reflection_recognize(a).ok().flatten();
                let report = classify(a);
                let ok = rc.conditions_agree && rc.fsi_dmm_consistent;
                let c = cert(
                    vec![loaded.record],
                    json!({
                        "classification": serde_json::to_value(&report).unwrap(),
                        "rigorousCompactness": serde_json::to_value(&rc).unwrap(),
                        "reflectionOf": reflection.as_ref().map(|(d, _)| doc(d)),
                    }),
                    Value::Null,
                );
                Ok(emit(&c, &format!("structure report; consistent: {ok}"), u8::from(!ok)))
            }
            other => Err(CliError::Input(format!("unknown suite `{other}`"))),
        },
        (None, Some(equation)) => {
            let (lhs, rhs) = match named_equation(equation) {
                Some(pair) => pair,
                None => parse_equation(equation, Some(a.size()))
                    .map_err(|e| CliError::Input(e.to_string()))?,
            };
            let verdict =
                check_equation(a, &lhs, &rhs).map_err(|e| CliError::Input(e.to_string()))?;
            let (value, witnesses, code, summary) = match verdict {
                EquationVerdict::Holds => (
                    json!({ "holds": true }),
                    Value::Null,
                    0u8,
                    format!("{} = {} holds", term_text(&lhs), term_text(&rhs)),
                ),
                EquationVerdict::Fails {
                    assignment,
                    lhs: l,
                    rhs: r,
                } => {
                    let summary = format!(
                        "fails at {} (lhs = {l}, rhs = {r})",
                        serde_json::to_string(&assignment).unwrap()
                    );
                    (
                        json!({ "holds": false }),
                        json!({ "assignment": assignment, "lhs": l, "rhs": r }),
                        1u8,
                        summary,
                    )
                }
            };
            let c = cert(vec![loaded.record], value, witnesses);
            Ok(emit(&c, &summary, code))
        }
        _ => Err(CliError::Input(
            "check needs exactly one of --suite or --equation".into(),
        )),
    }
}

fn term_text(t: &Term) -> String {
    t.to_string()
}
