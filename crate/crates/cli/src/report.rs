//! Text and JSON renderings of command results. JSON documents all carry
//! `schemaVersion` and use camelCase keys; see `docs/json-schema.md`.

use metricomp::cauchy::{CauchyCertificate, CauchyFailure, ObjectSequence};
use metricomp::classify::{CategoryDescriptor, CompactSupport, CompletionReport, Probe};
use metricomp::derived::SplitObject;
use metricomp::indec::Invariant;
use metricomp::metric::MetricNF;
use metricomp::oracle::SuiteResult;
use serde_json::{json, Value};

use crate::input::ParseError;

pub const SCHEMA_VERSION: &str = "1";

pub fn envelope(command: &str, mut body: Value) -> Value {
    let obj = body.as_object_mut().expect("report bodies are objects");
    obj.insert("schemaVersion".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!(command));
    body
}

fn generators(c: &CategoryDescriptor) -> Vec<String> {
    match c {
        CategoryDescriptor::KroneckerLocalisation { generators, .. } => generators.clone(),
        CategoryDescriptor::PerpOfExceptional { sequence, .. } => sequence.iter().map(|m| m.to_string()).collect(),
        _ => Vec::new(),
    }
}

pub struct Membership {
    pub object: String,
    pub member: bool,
    pub support: Option<CompactSupport>,
}

pub fn classification_json(name: &str, m: &MetricNF, r: &CompletionReport, members: &[Membership]) -> Value {
    json!({
        "metric": name,
        "normalForm": m.to_string(),
        "case": r.case.to_string(),
        "kernel": r.kernel.to_string(),
        "countablyGenerated": r.countably_generated,
        "convergesUniformly": r.converges_uniformly,
        "category": r.category.to_string(),
        "generators": generators(&r.category),
        "evidence": r.evidence,
        "members": members.iter().map(|x| json!({
            "object": x.object,
            "member": x.member,
            "compactSupportIndex": x.support.as_ref().and_then(|s| s.index),
        })).collect::<Vec<_>>(),
    })
}

pub fn classification_text(name: &str, m: &MetricNF, r: &CompletionReport, members: &[Membership]) -> String {
    let mut out = format!("metric {name}: {m}\n");
    out += &format!("  case {}\n", r.case);
    out += &format!("  kernel {}\n", r.kernel);
    out += &format!("  countably generated: {}\n", yes_no(r.countably_generated));
    out += &format!("  converges uniformly: {}\n", yes_no(r.converges_uniformly));
    out += &format!("  completion {}\n", r.category);
    for e in &r.evidence {
        out += &format!("  {e}\n");
    }
    for x in members {
        let support = match x.support.as_ref().and_then(|s| s.index) {
            Some(n) => format!(", compactly supported from ball {n}"),
            None => String::new(),
        };
        let verdict = if x.member { "member" } else { "not a member" };
        out += &format!("  {}: {verdict}{support}\n", x.object);
    }
    out
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn lattice_json(op: &str, a: &str, b: &str, value: Value, matches: &[String]) -> Value {
    json!({ "operation": op, "left": a, "right": b, "result": value, "equivalentTo": matches })
}

pub fn hom_json(x: &str, y: &str, hom: &[(i64, Invariant)]) -> Value {
    json!({
        "source": x,
        "target": y,
        "degrees": hom.iter().map(|(j, v)| json!({ "degree": j, "value": v.to_string() })).collect::<Vec<_>>(),
    })
}

pub fn hom_text(x: &str, y: &str, hom: &[(i64, Invariant)]) -> String {
    if hom.is_empty() {
        return format!("Hom({x}, {y}[j]) = 0 for all j\n");
    }
    hom.iter().map(|(j, v)| format!("Hom({x}, {y}[{j}]) = {v}\n")).collect()
}

fn summands_json(x: &SplitObject) -> Vec<Value> {
    x.summands().map(|(d, m)| json!({ "degree": d, "module": m.to_string() })).collect()
}

pub fn cone_json(name: &str, cone: &SplitObject, verified: Option<bool>) -> Value {
    json!({ "map": name, "cone": cone.to_string(), "summands": summands_json(cone), "oracleAgrees": verified })
}

pub fn cone_text(name: &str, cone: &SplitObject, verified: Option<bool>) -> String {
    let mut out = format!("cone of {name}:\n");
    if cone.is_zero() {
        out += "  0\n";
    }
    for (d, m) in cone.summands() {
        out += &format!("  {m} in degree {d}\n");
    }
    match verified {
        Some(true) => out += "  independent check: agrees\n",
        Some(false) => out += "  independent check: DISAGREES\n",
        None => {}
    }
    out
}

pub struct CauchyOutcome<'a> {
    pub sequence: &'a str,
    pub metric: String,
    pub seq: &'a ObjectSequence,
    pub horizon: usize,
    pub result: &'a Result<CauchyCertificate, CauchyFailure>,
    pub limit: Option<(Probe, Option<bool>)>,
}

pub fn cauchy_json(o: &CauchyOutcome) -> Value {
    let verdict = match o.result {
        Ok(cert) => json!({
            "cauchy": true,
            "stabilization": cert.stabilization.iter().map(|(m, n)| json!({ "ball": m, "from": n })).collect::<Vec<_>>(),
        }),
        Err(f) => json!({
            "cauchy": false,
            "counterexample": { "ball": f.ball, "index": f.index, "cone": f.cone.to_string(), "verdict": f.verdict.to_string() },
        }),
    };
    let mut v = json!({
        "sequence": o.sequence,
        "metric": o.metric,
        "entries": o.seq.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "maps": o.seq.maps().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "cones": o.seq.cones().map(|cs| cs.iter().map(|x| x.to_string()).collect::<Vec<_>>()).ok(),
        "horizon": o.horizon,
    });
    let obj = v.as_object_mut().unwrap();
    for (k, x) in verdict.as_object().unwrap() {
        obj.insert(k.clone(), x.clone());
    }
    if let Some((p, member)) = &o.limit {
        obj.insert("limit".into(), json!({ "model": p.to_string(), "inCompletion": member }));
    }
    v
}

pub fn cauchy_text(o: &CauchyOutcome) -> String {
    let mut out = format!("sequence {}: {}\n", o.sequence, o.seq);
    if let Ok(cones) = o.seq.cones() {
        let cs: Vec<String> = cones.iter().map(|x| x.to_string()).collect();
        out += &format!("  cones: {}\n", cs.join(", "));
    }
    out += &format!("  metric {}, horizon {}\n", o.metric, o.horizon);
    match o.result {
        Ok(cert) => {
            out += "  Cauchy within the horizon\n";
            for (m, n) in &cert.stabilization {
                out += &format!("    ball {m}: every cone from map {n} on\n");
            }
        }
        Err(f) => out += &format!("  not Cauchy: {f}\n"),
    }
    if let Some((p, member)) = &o.limit {
        out += &format!("  colimit {p}");
        match member {
            Some(true) => out += ", lies in the completion",
            Some(false) => out += ", does not lie in the completion",
            None => {}
        }
        out += "\n";
    }
    out
}

pub fn selftest_json(results: &[SuiteResult]) -> Value {
    json!({
        "passed": results.iter().all(SuiteResult::passed),
        "suites": results.iter().map(|r| json!({
            "name": r.name,
            "checked": r.checked,
            "skipped": r.skipped,
            "failures": r.failures,
        })).collect::<Vec<_>>(),
    })
}

pub fn parse_error_json(e: &ParseError) -> Value {
    json!({
        "schemaVersion": SCHEMA_VERSION,
        "error": { "kind": "parse", "line": e.line, "column": e.column, "rule": e.rule, "message": e.message },
    })
}

pub fn library_error_json(e: &metricomp::Error, line: Option<usize>) -> Value {
    json!({
        "schemaVersion": SCHEMA_VERSION,
        "error": { "kind": "library", "name": e.name(), "line": line, "message": e.to_string() },
    })
}

pub fn usage_error_json(kind: &str, message: &str) -> Value {
    json!({ "schemaVersion": SCHEMA_VERSION, "error": { "kind": kind, "message": message } })
}
