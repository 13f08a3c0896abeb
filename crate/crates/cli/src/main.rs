//! `dgres`: resolutions of squarefree monomial ideals and their dg structures.

mod input;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use dgres_core::classify::{classify_graph, verify_certificate, Certificate, Evidence};
use dgres_core::complex::{is_minimal, is_resolution_of, resolution_report, verify_complex, LabeledFreeComplex};
use dgres_core::dg::{dg_check, quotient_dg, DgDoc, DgReport, DgStructure};
use dgres_core::diam4::{
    build_cone_resolution, check_boundary_product, check_sign_transfer, check_zification_multiplicative,
};
use dgres_core::morse::{
    check_matching, lyubeznik_matching, lyubeznik_resolution, matching_submodule, morse_reduce, taylor_graph, to_dot,
    MatchingDoc, MorseMatching,
};
use dgres_core::poly::IdealDoc;
use dgres_core::prune::{prune_complex, prune_ideal, restrict_vars, variable_indices};
use dgres_core::taylor::{graded_betti, taylor_dg, taylor_resolution};
use dgres_core::{Error, MonomialIdeal};

/// Why a run stopped early. Each kind has its own exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Check(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Parse(_)
            | Error::Invalid(_)
            | Error::Json(_)
            | Error::VarMismatch(..)
            | Error::TooLarge(_)
            | Error::InvalidMatching(_) => Failure::Input(msg),
            Error::NotChainMap(_) | Error::NotDifferentialClosed(_) | Error::NotDgIdeal(_) | Error::QuotientNotFree(_) => {
                Failure::Check(msg)
            }
            _ => Failure::Internal(msg),
        }
    }
}

const EXIT_CHECK: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Parser)]
#[command(name = "dgres", version, about = "Resolutions of squarefree monomial ideals and their dg algebra structures")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "table")]
    format: Format,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Accepted for scripts; every run is deterministic.
    #[arg(long, global = true, hide = true)]
    seedless: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Taylor resolution of an ideal.
    Taylor {
        ideal: String,
        /// Variable order for an inline ideal, e.g. `x,y,z,w`.
        #[arg(long)]
        vars: Option<String>,
        /// Generator order, as indices or monomials.
        #[arg(long)]
        order: Option<String>,
    },
    /// Lyubeznik resolution for a generator order.
    Lyubeznik {
        ideal: String,
        #[arg(long)]
        vars: Option<String>,
        #[arg(long)]
        order: Option<String>,
    },
    /// Taylor graph, optionally with a matching, as DOT.
    MorseGraph {
        ideal: String,
        #[arg(long)]
        vars: Option<String>,
        #[arg(long)]
        order: Option<String>,
        /// Matching JSON to highlight.
        #[arg(long, conflicts_with = "lyubeznik")]
        matching: Option<PathBuf>,
        /// Highlight the Lyubeznik matching.
        #[arg(long)]
        lyubeznik: bool,
        /// Where to write the DOT graph; `-` prints it.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Morse reduction of the Taylor resolution along a matching.
    Reduce {
        ideal: String,
        #[arg(long)]
        vars: Option<String>,
        #[arg(long)]
        matching: PathBuf,
    },
    /// Graded and total Betti numbers.
    Betti {
        ideal: String,
        #[arg(long)]
        vars: Option<String>,
    },
    /// Cone resolution of a tree of diameter at most four, with all checks.
    Cone4 {
        tree: String,
        /// Write the product structure as JSON.
        #[arg(long)]
        structure_out: Option<PathBuf>,
    },
    /// Checks the dg algebra axioms.
    Dgcheck {
        /// A structure JSON file, or an ideal/family with `--kind`.
        structure: String,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[arg(long)]
        vars: Option<String>,
    },
    /// Prunes a complex by setting variables to zero.
    Prune {
        /// A complex JSON file, or an ideal/family whose Lyubeznik resolution is pruned.
        complex: String,
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<String>,
        /// Write the pruned complex as JSON.
        #[arg(long)]
        complex_out: Option<PathBuf>,
    },
    /// Decides whether a tree or cycle is dg and produces a certificate.
    Classify {
        graph: String,
        /// Write the certificate as JSON.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Re-checks a certificate.
    VerifyCertificate { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Taylor,
    Lyubeznik,
    Cone4,
}

struct Outcome {
    passed: bool,
    result: Value,
    table: String,
}

struct Inputs(Sha256);

impl Inputs {
    fn add(&mut self, bytes: &[u8]) {
        self.0.update((bytes.len() as u64).to_le_bytes());
        self.0.update(bytes);
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Internal(e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "yes"
    } else {
        "NO"
    }
}

fn complex_table(cx: &LabeledFreeComplex) -> String {
    let mut out = format!("ranks: {:?}\n", cx.ranks());
    for (k, d) in cx.diffs().iter().enumerate() {
        let _ = writeln!(out, "d{}:\n{}", k + 1, d.render(cx.vars()));
    }
    out
}

fn generator_names(ideal: &MonomialIdeal) -> Vec<String> {
    ideal.generators().iter().map(|g| g.display(ideal.vars()).to_string()).collect()
}

fn ordered(ideal: MonomialIdeal, order: Option<&str>, inputs: &mut Inputs) -> Result<MonomialIdeal, Failure> {
    match order {
        Some(o) => {
            inputs.add(o.as_bytes());
            let ix = input::order(&ideal, o)?;
            Ok(ideal.reordered(&ix)?)
        }
        None => Ok(ideal),
    }
}

fn dg_table(report: &DgReport) -> String {
    let mut out = format!("basis size: {}\n", report.basis_size);
    for a in &report.axioms {
        let _ = writeln!(out, "{:<22} {:>8} checked  {}", a.axiom, a.checked, if a.passed { "pass" } else { "FAIL" });
        for w in &a.witnesses {
            let _ = writeln!(out, "    {}: {}", w.elements.join(", "), w.detail);
        }
    }
    out
}

fn taylor_cmd(ideal: &str, vars: Option<&str>, order: Option<&str>, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let loaded = input::ideal(ideal, vars)?;
    inputs.add(&loaded.bytes);
    let ideal = ordered(loaded.value, order, inputs)?;
    let t = taylor_resolution(&ideal, None)?;
    let check = verify_complex(&t);
    let minimal = is_minimal(&t);
    let table = format!("generators: {}\nminimal: {}\n{}", generator_names(&ideal).join(" < "), mark(minimal), complex_table(&t));
    Ok(Outcome {
        passed: check.passed,
        result: json!({
            "ideal": IdealDoc::from_ideal(&ideal),
            "ranks": t.ranks(),
            "minimal": minimal,
            "complex_check": to_value(&check)?,
            "complex": t.to_json(),
        }),
        table,
    })
}

fn lyubeznik_cmd(ideal: &str, vars: Option<&str>, order: Option<&str>, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let loaded = input::ideal(ideal, vars)?;
    inputs.add(&loaded.bytes);
    let ideal = ordered(loaded.value, order, inputs)?;
    let m = lyubeznik_matching(&ideal, None)?;
    let l = lyubeznik_resolution(&ideal, None)?;
    let resolution = is_resolution_of(&l, &ideal)?;
    let minimal = is_minimal(&l);
    let table = format!(
        "order: {}\nmatched pairs: {}\nresolution: {}\nminimal: {}\n{}",
        generator_names(&ideal).join(" < "),
        m.len(),
        mark(resolution),
        mark(minimal),
        complex_table(&l)
    );
    Ok(Outcome {
        passed: resolution,
        result: json!({
            "ideal": IdealDoc::from_ideal(&ideal),
            "matching": to_value(&m.to_doc(&ideal))?,
            "ranks": l.ranks(),
            "resolution": resolution,
            "minimal": minimal,
            "complex": l.to_json(),
        }),
        table,
    })
}

fn load_matching(path: &Path, ideal: &MonomialIdeal, inputs: &mut Inputs) -> Result<MorseMatching, Failure> {
    let doc = input::json_file::<MatchingDoc>(path)?;
    inputs.add(&doc.bytes);
    Ok(MorseMatching::from_doc(&doc.value, ideal)?)
}

struct GraphArgs<'a> {
    ideal: &'a str,
    vars: Option<&'a str>,
    order: Option<&'a str>,
    matching: Option<&'a Path>,
    lyubeznik: bool,
    dot: Option<&'a Path>,
}

fn morse_graph_cmd(a: GraphArgs, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let loaded = input::ideal(a.ideal, a.vars)?;
    inputs.add(&loaded.bytes);
    let ideal = ordered(loaded.value, a.order, inputs)?;
    let g = taylor_graph(&ideal)?;
    let m = match (a.matching, a.lyubeznik) {
        (Some(p), _) => Some(load_matching(p, &ideal, inputs)?),
        (None, true) => Some(lyubeznik_matching(&ideal, None)?),
        (None, false) => None,
    };
    let validation = m.as_ref().map(|m| check_matching(&g, m));
    let dot = to_dot(&g, m.as_ref());
    let mut table = format!("generators: {}\narcs: {}\n", generator_names(&ideal).join(", "), g.arcs().len());
    if let Some(v) = &validation {
        let _ = writeln!(table, "matching valid: {}", mark(v.valid));
        for p in &v.problems {
            let _ = writeln!(table, "  {p}");
        }
    }
    match a.dot {
        Some(p) if p == Path::new("-") => table.push_str(&dot),
        Some(p) => write_file(p, &dot)?,
        None => {}
    }
    Ok(Outcome {
        passed: validation.as_ref().is_none_or(|v| v.valid),
        result: json!({
            "ideal": IdealDoc::from_ideal(&ideal),
            "arcs": g.arcs().len(),
            "matching": m.as_ref().map(|m| m.to_doc(&ideal)),
            "validation": validation,
            "dot": dot,
        }),
        table,
    })
}

fn reduce_cmd(ideal: &str, vars: Option<&str>, matching: &Path, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let loaded = input::ideal(ideal, vars)?;
    inputs.add(&loaded.bytes);
    let ideal = loaded.value;
    let m = load_matching(matching, &ideal, inputs)?;
    let validation = check_matching(&taylor_graph(&ideal)?, &m);
    if !validation.valid {
        return Ok(Outcome {
            passed: false,
            table: format!("matching invalid:\n  {}\n", validation.problems.join("\n  ")),
            result: json!({ "ideal": IdealDoc::from_ideal(&ideal), "validation": validation }),
        });
    }
    let r = morse_reduce(&taylor_resolution(&ideal, None)?, &m)?;
    let report = resolution_report(&r, &ideal)?;
    let minimal = is_minimal(&r);
    let table = format!("resolution: {}\nminimal: {}\n{}", mark(report.ok()), mark(minimal), complex_table(&r));
    Ok(Outcome {
        passed: report.ok(),
        result: json!({
            "ideal": IdealDoc::from_ideal(&ideal),
            "validation": validation,
            "ranks": r.ranks(),
            "resolution": to_value(&report)?,
            "minimal": minimal,
            "complex": r.to_json(),
        }),
        table,
    })
}

fn betti_cmd(ideal: &str, vars: Option<&str>, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let loaded = input::ideal(ideal, vars)?;
    inputs.add(&loaded.bytes);
    let b = graded_betti(&loaded.value)?;
    let mut table = format!("totals: {:?}\nprojective dimension: {}\n", b.totals(), b.projective_dimension());
    for ((i, d), v) in b.by_total_degree() {
        let _ = writeln!(table, "  beta_{{{i},{d}}} = {v}");
    }
    let mut result = b.to_json();
    result["ideal"] = to_value(&IdealDoc::from_ideal(&loaded.value))?;
    Ok(Outcome { passed: true, result, table })
}

fn cone4_cmd(tree: &str, structure_out: Option<&Path>, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let g = input::graph(tree)?;
    inputs.add(&g.bytes);
    let cone = build_cone_resolution(&g.value)?;
    let cx = cone.complex();
    let complex_check = verify_complex(cx);
    let resolution = is_resolution_of(cx, &cone.decomposition.edge_ideal())?;
    let minimal = is_minimal(cx);
    let report = dg_check(&cone.dg);
    let identities = [
        check_zification_multiplicative(&cone.decomposition),
        check_sign_transfer(&cone.decomposition),
        check_boundary_product(&cone)?,
    ];
    if let Some(p) = structure_out {
        let text = serde_json::to_string_pretty(&cone.dg.to_doc()).map_err(|e| Failure::Internal(e.to_string()))?;
        write_file(p, &text)?;
    }
    let passed = complex_check.passed && resolution && minimal && report.passed && identities.iter().all(|c| c.passed());
    let summary = cone.decomposition.summary();
    let mut table = format!(
        "center: {}\nspokes: {}\nranks: {:?}\ncomplex: {}\nresolution: {}\nminimal: {}\n",
        summary.center,
        summary.spokes.join(", "),
        cx.ranks(),
        mark(complex_check.passed),
        mark(resolution),
        mark(minimal)
    );
    for c in &identities {
        let _ = writeln!(table, "{}: {} ({} checked)", c.identity, mark(c.passed()), c.checked);
    }
    table.push_str(&dg_table(&report));
    Ok(Outcome {
        passed,
        result: json!({
            "decomposition": summary,
            "ranks": cx.ranks(),
            "complex_check": complex_check,
            "resolution": resolution,
            "minimal": minimal,
            "identities": identities,
            "dg": report,
        }),
        table,
    })
}

fn dgcheck_cmd(structure: &str, kind: Option<Kind>, vars: Option<&str>, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let d: DgStructure = match kind {
        None => {
            let doc = input::json_file::<DgDoc>(Path::new(structure))?;
            inputs.add(&doc.bytes);
            DgStructure::from_doc(&doc.value)?
        }
        Some(Kind::Cone4) => {
            let g = input::graph(structure)?;
            inputs.add(&g.bytes);
            inputs.add(b"cone4");
            build_cone_resolution(&g.value)?.dg
        }
        Some(k) => {
            let loaded = input::ideal(structure, vars)?;
            inputs.add(&loaded.bytes);
            let t = taylor_dg(&loaded.value, None)?;
            if matches!(k, Kind::Taylor) {
                inputs.add(b"taylor");
                t
            } else {
                inputs.add(b"lyubeznik");
                let m = lyubeznik_matching(&loaded.value, None)?;
                quotient_dg(&t, &matching_submodule(t.complex(), &m)?)?
            }
        }
    };
    let report = dg_check(&d);
    Ok(Outcome { passed: report.passed, table: dg_table(&report), result: json!({ "ranks": d.complex().ranks(), "dg": report }) })
}

fn prune_cmd(complex: &str, vars: &[String], complex_out: Option<&Path>, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let path = Path::new(complex);
    let as_complex = path.is_file()
        && std::fs::read_to_string(path).is_ok_and(|t| serde_json::from_str::<dgres_core::complex::ComplexDoc>(&t).is_ok());
    let (f, ideal) = if as_complex {
        let loaded = input::complex_file(path)?;
        inputs.add(&loaded.bytes);
        (loaded.value, None)
    } else {
        let loaded = input::ideal(complex, None)?;
        inputs.add(&loaded.bytes);
        (lyubeznik_resolution(&loaded.value, None)?, Some(loaded.value))
    };
    inputs.add(vars.join(",").as_bytes());
    let z = variable_indices(f.vars(), vars)?;
    let pruned = prune_complex(&f, &z);
    let restricted = restrict_vars(&pruned.complex, &z)?;
    let complex_check = verify_complex(&restricted);
    let resolution = match &ideal {
        Some(i) => Some(is_resolution_of(&restricted, &prune_ideal(i, &z)?)?),
        None => None,
    };
    let minimal = is_minimal(&restricted);
    if let Some(p) = complex_out {
        let text = serde_json::to_string_pretty(&restricted.to_json()).map_err(|e| Failure::Internal(e.to_string()))?;
        write_file(p, &text)?;
    }
    let mut table = String::new();
    for s in &pruned.trace.steps {
        let _ = writeln!(table, "pass {}: deleted columns {:?} {:?}", s.degree, s.deleted_columns, s.deleted_labels);
    }
    let _ = writeln!(table, "minimal: {}", mark(minimal));
    if let Some(r) = resolution {
        let _ = writeln!(table, "resolution of the pruned ideal: {}", mark(r));
    }
    table.push_str(&complex_table(&restricted));
    Ok(Outcome {
        passed: complex_check.passed && resolution.unwrap_or(true),
        result: json!({
            "trace": pruned.trace,
            "stage_ranks": pruned.stages.iter().map(|s| s.ranks()).collect::<Vec<_>>(),
            "ranks": restricted.ranks(),
            "minimal": minimal,
            "resolution": resolution,
            "complex": restricted.to_json(),
        }),
        table,
    })
}

fn certificate_table(c: &Certificate) -> String {
    let mut out = format!("verdict: {}\nevidence: {}\n", c.verdict, c.evidence.name());
    let detail = match &c.evidence {
        Evidence::TaylorMinimal { .. } => "the Taylor resolution is minimal".to_string(),
        Evidence::LyubeznikMatching { order, ranks, .. } => format!("order {order:?}, ranks {ranks:?}"),
        Evidence::ConePsi { decomposition, ranks, .. } => {
            format!("center {}, spokes {}, ranks {ranks:?}", decomposition.center, decomposition.spokes.join(","))
        }
        Evidence::MorseDgIdeal { gap, witness, ranks, .. } => {
            let terms: Vec<String> = witness.iter().map(|w| format!("({})*{}", w.coefficient, w.generator)).collect();
            format!("{gap} = {}, quotient ranks {ranks:?}", terms.join(" + "))
        }
        Evidence::PruningWitness { removed, fact, .. } => format!("remove {}; {}", removed.join(", "), fact.statement),
        Evidence::FVectorFailure { betti, failure } => {
            format!("{betti:?} is not an f-vector: {}, {}", failure.cascade_text(), failure.bound_text())
        }
        Evidence::Cited { fact } => format!("{} ({})", fact.statement, fact.source),
    };
    out.push_str(&detail);
    out.push('\n');
    out
}

fn classify_cmd(graph: &str, certificate: Option<&Path>, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let g = input::graph(graph)?;
    inputs.add(&g.bytes);
    let c = classify_graph(&g.value)?;
    let check = verify_certificate(&c)?;
    if let Some(p) = certificate {
        let text = serde_json::to_string_pretty(&c).map_err(|e| Failure::Internal(e.to_string()))?;
        write_file(p, &text)?;
    }
    Ok(Outcome {
        passed: check.passed,
        table: certificate_table(&c),
        result: json!({ "certificate": c, "check": check }),
    })
}

fn verify_cmd(file: &Path, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let c = input::json_file::<Certificate>(file)?;
    inputs.add(&c.bytes);
    let check = verify_certificate(&c.value)?;
    let mut table = certificate_table(&c.value);
    for (name, ok) in &check.checks {
        let _ = writeln!(table, "  {name}: {}", mark(*ok));
    }
    Ok(Outcome { passed: check.passed, table, result: json!({ "verdict": c.value.verdict, "check": check }) })
}

fn run(cli: &Cli) -> Result<(&'static str, Outcome, String), Failure> {
    let mut inputs = Inputs(Sha256::new());
    let (name, outcome) = match &cli.command {
        Command::Taylor { ideal, vars, order } => ("taylor", taylor_cmd(ideal, vars.as_deref(), order.as_deref(), &mut inputs)?),
        Command::Lyubeznik { ideal, vars, order } => {
            ("lyubeznik", lyubeznik_cmd(ideal, vars.as_deref(), order.as_deref(), &mut inputs)?)
        }
        Command::MorseGraph { ideal, vars, order, matching, lyubeznik, dot } => {
            let args = GraphArgs {
                ideal,
                vars: vars.as_deref(),
                order: order.as_deref(),
                matching: matching.as_deref(),
                lyubeznik: *lyubeznik,
                dot: dot.as_deref(),
            };
            ("morse-graph", morse_graph_cmd(args, &mut inputs)?)
        }
        Command::Reduce { ideal, vars, matching } => ("reduce", reduce_cmd(ideal, vars.as_deref(), matching, &mut inputs)?),
        Command::Betti { ideal, vars } => ("betti", betti_cmd(ideal, vars.as_deref(), &mut inputs)?),
        Command::Cone4 { tree, structure_out } => ("cone4", cone4_cmd(tree, structure_out.as_deref(), &mut inputs)?),
        Command::Dgcheck { structure, kind, vars } => ("dgcheck", dgcheck_cmd(structure, *kind, vars.as_deref(), &mut inputs)?),
        Command::Prune { complex, vars, complex_out } => ("prune", prune_cmd(complex, vars, complex_out.as_deref(), &mut inputs)?),
        Command::Classify { graph, certificate } => ("classify", classify_cmd(graph, certificate.as_deref(), &mut inputs)?),
        Command::VerifyCertificate { file } => ("verify-certificate", verify_cmd(file, &mut inputs)?),
    };
    Ok((name, outcome, hex::encode(inputs.0.finalize())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, outcome, hash) = match run(&cli) {
        Ok(r) => r,
        Err(f) => {
            let (code, kind, msg) = match f {
                Failure::Input(m) => (EXIT_INPUT, "input error", m),
                Failure::Check(m) => (EXIT_CHECK, "check failed", m),
                Failure::Internal(m) => (EXIT_INTERNAL, "internal error", m),
            };
            eprintln!("dgres: {kind}: {msg}");
            return ExitCode::from(code);
        }
    };
    let report = json!({
        "tool": "dgres",
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "input_sha256": hash,
        "passed": outcome.passed,
        "result": outcome.result,
    });
    let text = serde_json::to_string_pretty(&report).expect("reports serialize");
    if let Some(p) = &cli.report {
        if let Err(Failure::Input(m)) = write_file(p, &text) {
            eprintln!("dgres: input error: {m}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let shown = match cli.format {
        Format::Json => format!("{text}\n"),
        Format::Table => format!(
            "dgres {} {name}  input {}\n{}status: {}\n",
            env!("CARGO_PKG_VERSION"),
            &hash[..16],
            outcome.table,
            if outcome.passed { "passed" } else { "FAILED" }
        ),
    };
    // a closed pipe is not an error for a report printer
    let _ = std::io::stdout().lock().write_all(shown.as_bytes());
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK)
    }
}
