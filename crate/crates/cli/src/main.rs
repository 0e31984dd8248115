mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use metricomp::cauchy::{hocolim_model, is_cauchy};
use metricomp::classify::{classify, compact_support_index, Probe};
use metricomp::derived::{cone_of_module_map, graded_hom};
use metricomp::field::FieldDescriptor;
use metricomp::metric::MetricNF;
use metricomp::oracle::{check_cone, selftest, OracleConfig};
use serde_json::{json, Value};

use input::{Document, InputError, ParseError};
use report::{envelope, CauchyOutcome, Membership};

#[derive(Parser)]
#[command(name = "metricomp", version, about = "Metric completions of bounded derived categories")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Number of maps checked by `cauchy` (default: the whole sequence).
    #[arg(long, global = true)]
    horizon: Option<usize>,
    /// Field for `ring kronecker` lines without one, and for `selftest`:
    /// `rational`, `symbolic` or a prime power such as `5` or `F5`.
    #[arg(long, global = true)]
    field: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeOp {
    Meet,
    Join,
    Leq,
    Equivalent,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CauchyMode {
    Build,
    Check,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the completion of every metric in the file (or just NAME).
    Classify { file: PathBuf, name: Option<String> },
    /// Combine or compare two metrics.
    Lattice {
        #[arg(value_enum)]
        op: LatticeOp,
        file: PathBuf,
        left: String,
        right: String,
    },
    /// `build`: certify `small_object` sequences against the class they were
    /// built for. `check`: test any sequence against declared metrics.
    Cauchy {
        #[arg(value_enum)]
        mode: CauchyMode,
        file: PathBuf,
        /// Sequence to check (default: all).
        sequence: Option<String>,
        /// Metric to check against (default: the class a `small_object`
        /// sequence was built for, else every declared metric).
        metric: Option<String>,
    },
    /// Graded Hom between two declared objects.
    Hom { file: PathBuf, source: String, target: String },
    /// Mapping cone of declared module maps.
    Cone { file: PathBuf, map: Option<String> },
    /// Compare the library against independent brute-force computations.
    Selftest {
        #[arg(long, default_value_t = 8)]
        max_dimension: usize,
        #[arg(long, default_value_t = 3)]
        max_generators: usize,
    },
}

enum Failure {
    Parse(ParseError),
    Library(metricomp::Error, Option<usize>),
    Usage(String),
    Io(String),
    Selftest,
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Parse(p) => Failure::Parse(p),
            InputError::Library { line, error } => Failure::Library(error, Some(line)),
        }
    }
}

impl From<metricomp::Error> for Failure {
    fn from(e: metricomp::Error) -> Self {
        Failure::Library(e, None)
    }
}

struct Output {
    json: bool,
    bodies: Vec<Value>,
    text: String,
}

fn load(path: &PathBuf, field: &FieldDescriptor) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(input::parse(&text, field)?)
}

fn need<'a, T>(v: Option<&'a T>, kind: &str, name: &str) -> Result<&'a T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("no {kind} named `{name}`")))
}

fn run(cli: &Cli, out: &mut Output) -> Result<(), Failure> {
    let field = match &cli.field {
        Some(f) => input::field_from_flag(f).map_err(Failure::Parse)?,
        None => FieldDescriptor::Rational,
    };
    match &cli.command {
        Command::Classify { file, name } => {
            let doc = load(file, &field)?;
            let metrics: Vec<&(String, MetricNF)> = match name {
                Some(n) => vec![doc
                    .metrics
                    .iter()
                    .find(|(m, _)| m == n)
                    .ok_or_else(|| Failure::Usage(format!("no metric named `{n}`")))?],
                None => doc.metrics.iter().collect(),
            };
            if metrics.is_empty() {
                return Err(Failure::Usage("the file declares no metric".into()));
            }
            for (name, m) in metrics {
                let r = classify(&doc.ring, m)?;
                let mut members = Vec::new();
                for (oname, x) in &doc.objects {
                    let probe = Probe::Object(x.clone());
                    let member = r.category.is_member(&probe);
                    let support = if member { compact_support_index(&probe, m).ok() } else { None };
                    members.push(Membership { object: oname.clone(), member, support });
                }
                out.bodies.push(report::classification_json(name, m, &r, &members));
                out.text += &report::classification_text(name, m, &r, &members);
            }
        }
        Command::Lattice { op, file, left, right } => {
            let doc = load(file, &field)?;
            let a = need(doc.metric(left), "metric", left)?;
            let b = need(doc.metric(right), "metric", right)?;
            let (name, value, text, matches) = match op {
                LatticeOp::Meet | LatticeOp::Join => {
                    let (name, r) = match op {
                        LatticeOp::Meet => ("meet", a.meet(b)?),
                        _ => ("join", a.join(b)?),
                    };
                    let mut matches = Vec::new();
                    for (n, m) in &doc.metrics {
                        if m.ring() == r.ring() && m.equivalent(&r)? {
                            matches.push(n.clone());
                        }
                    }
                    let mut text = format!("{name}({left}, {right}) = {r}\n");
                    if !matches.is_empty() {
                        text += &format!("  equivalent to {}\n", matches.join(", "));
                    }
                    (name, json!(r.to_string()), text, matches)
                }
                LatticeOp::Leq => {
                    let v = a.finer_leq(b)?;
                    ("leq", json!(v), format!("{left} <= {right}: {v}\n"), Vec::new())
                }
                LatticeOp::Equivalent => {
                    let v = a.equivalent(b)?;
                    ("equivalent", json!(v), format!("{left} ~ {right}: {v}\n"), Vec::new())
                }
            };
            out.bodies.push(report::lattice_json(name, left, right, value, &matches));
            out.text += &text;
        }
        Command::Cauchy { mode, file, sequence, metric } => {
            let doc = load(file, &field)?;
            let seqs: Vec<_> = match sequence {
                Some(n) => vec![(n.clone(), need(doc.sequence(n), "sequence", n)?)],
                None => doc.sequences.iter().map(|(n, s)| (n.clone(), s)).collect(),
            };
            if seqs.is_empty() {
                return Err(Failure::Usage("the file declares no sequence".into()));
            }
            for (sname, decl) in seqs {
                if *mode == CauchyMode::Build {
                    if decl.built_for.is_none() {
                        return Err(Failure::Usage(format!("`{sname}` is not a small_object sequence; use `cauchy check`")));
                    }
                    if metric.is_some() {
                        return Err(Failure::Usage("`cauchy build` checks against the class the sequence was built for".into()));
                    }
                }
                let targets: Vec<(String, MetricNF)> = match (metric, &decl.built_for) {
                    (Some(n), _) => vec![(n.clone(), need(doc.metric(n), "metric", n)?.clone())],
                    (None, Some(c)) => vec![(format!("constant {c}"), MetricNF::constant(doc.ring.clone(), c.clone())?)],
                    (None, None) => doc.metrics.clone(),
                };
                if targets.is_empty() {
                    return Err(Failure::Usage(format!("no metric to check `{sname}` against")));
                }
                let seq = &decl.sequence;
                let horizon = cli.horizon.unwrap_or(seq.steps()).min(seq.steps());
                for (mname, m) in targets {
                    let result = is_cauchy(seq, &m, horizon)?;
                    let limit = match (&result, hocolim_model(seq)) {
                        (Ok(_), Ok(p)) => {
                            let member = classify(&doc.ring, &m).ok().map(|r| r.category.is_member(&p));
                            Some((p, member))
                        }
                        _ => None,
                    };
                    let o = CauchyOutcome { sequence: &sname, metric: mname, seq, horizon, result: &result, limit };
                    out.bodies.push(report::cauchy_json(&o));
                    out.text += &report::cauchy_text(&o);
                }
            }
        }
        Command::Hom { file, source, target } => {
            let doc = load(file, &field)?;
            let x = need(doc.object(source), "object", source)?;
            let y = need(doc.object(target), "object", target)?;
            let hom: Vec<_> = graded_hom(x, y)?.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            out.bodies.push(report::hom_json(source, target, &hom));
            out.text += &report::hom_text(source, target, &hom);
        }
        Command::Cone { file, map } => {
            let doc = load(file, &field)?;
            let maps: Vec<_> = match map {
                Some(n) => vec![(n.clone(), need(doc.map(n), "map", n)?)],
                None => doc.maps.iter().map(|(n, f)| (n.clone(), f)).collect(),
            };
            if maps.is_empty() {
                return Err(Failure::Usage("the file declares no map".into()));
            }
            for (name, f) in maps {
                let cone = cone_of_module_map(f)?;
                let verified = check_cone(f).ok();
                out.bodies.push(report::cone_json(&name, &cone, verified));
                out.text += &report::cone_text(&name, &cone, verified);
            }
        }
        Command::Selftest { max_dimension, max_generators } => {
            let mut config = OracleConfig {
                max_total_dimension: *max_dimension,
                max_generators_z: *max_generators,
                ..OracleConfig::default()
            };
            if cli.field.is_some() {
                config.field_for_enumeration = field;
            }
            let results = selftest(&config);
            for r in &results {
                out.text += &format!("{r}\n");
                for f in r.failures.iter().take(5) {
                    out.text += &format!("  {f}\n");
                }
            }
            out.bodies.push(report::selftest_json(&results));
            if !results.iter().all(|r| r.passed()) {
                emit(out, command_name(&cli.command));
                return Err(Failure::Selftest);
            }
        }
    }
    emit(out, command_name(&cli.command));
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify { .. } => "classify",
        Command::Lattice { .. } => "lattice",
        Command::Cauchy { .. } => "cauchy",
        Command::Hom { .. } => "hom",
        Command::Cone { .. } => "cone",
        Command::Selftest { .. } => "selftest",
    }
}

fn emit(out: &Output, command: &str) {
    if out.json {
        let body = match out.bodies.as_slice() {
            [single] if command == "selftest" => single.clone(),
            many => json!({ "results": many }),
        };
        println!("{}", serde_json::to_string_pretty(&envelope(command, body)).expect("JSON serialises"));
    } else {
        print!("{}", out.text);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Output { json: cli.json, bodies: Vec::new(), text: String::new() };
    let (code, value, message) = match run(&cli, &mut out) {
        Ok(()) => return ExitCode::SUCCESS,
        Err(Failure::Selftest) => return ExitCode::from(1),
        Err(Failure::Parse(e)) => (2, report::parse_error_json(&e), format!("parse error: {e}")),
        Err(Failure::Usage(m)) => (2, report::usage_error_json("usage", &m), format!("error: {m}")),
        Err(Failure::Io(m)) => (2, report::usage_error_json("io", &m), format!("error: {m}")),
        Err(Failure::Library(e, line)) => {
            let at = line.map(|l| format!(" (line {l})")).unwrap_or_default();
            (3, report::library_error_json(&e, line), format!("error{at}: {} — {e}", e.name()))
        }
    };
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&value).expect("JSON serialises"));
    } else {
        eprintln!("{message}");
    }
    ExitCode::from(code)
}
