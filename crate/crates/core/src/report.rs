//! Machine-readable and human-readable reports for scenario runs.
//!
//! The machine format is one self-delimiting JSON document per scenario
//! (a single line), deterministic for a fixed (input, seed, budget) except
//! for the `timing_ms` field.

use serde_json::{json, Value};

use crate::descent::{Certificate, DescentVerdict, Obstruction, Verification};
use crate::error::Decision;
use crate::hermitian::{DivisionAlgebra, HermitianForm};
use crate::quadforms::QuadraticSystem;
use crate::quaternion::{AlgebraWithInvolution, InvolutionKind};
use crate::scenario;

pub const SCHEMA: &str = "witt-descent/1";

#[derive(Debug, Clone)]
pub struct Report {
    pub task: String,
    pub input: String,
    pub payload: Value,
    pub decision: Option<Decision>,
    pub timing_ms: u128,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "tool_version": env!("CARGO_PKG_VERSION"),
            "task": self.task,
            "input": self.input,
            "result": self.payload,
            "timing_ms": self.timing_ms,
        })
    }

    pub fn to_json_line(&self) -> String {
        self.to_json().to_string()
    }

    /// Human-readable rendering; `explain` adds route citations, notes and
    /// intermediate invariants.
    pub fn render_human(&self, explain: bool) -> String {
        let mut out = String::new();
        out.push_str(&format!("task: {}\n", self.task));
        let payload_has_decision = self
            .payload
            .as_object()
            .is_some_and(|m| m.contains_key("decision"));
        if let Some(d) = self.decision {
            if !payload_has_decision {
                out.push_str(&format!("decision: {d}\n"));
            }
        }
        render_value(&self.payload, explain, 0, &mut out);
        out.push_str(&format!("elapsed: {} ms\n", self.timing_ms));
        out
    }
}

fn render_value(v: &Value, explain: bool, depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                if !explain && matches!(k.as_str(), "route" | "notes" | "verification") {
                    continue;
                }
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{indent}{k}:\n"));
                        render_value(val, explain, depth + 1, out);
                    }
                    other => out.push_str(&format!("{indent}{k}: {other}\n")),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) => render_value(item, explain, depth, out),
                    other => out.push_str(&format!("{indent}- {other}\n")),
                }
            }
        }
        other => out.push_str(&format!("{indent}{other}\n")),
    }
}

pub fn verdict_to_json(v: &DescentVerdict) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("decision".into(), json!(v.decision));
    obj.insert("route".into(), json!(v.route));
    if let Some(ob) = &v.obstruction {
        obj.insert("obstruction".into(), obstruction_to_json(ob));
    }
    if let Some(cert) = &v.certificate {
        obj.insert("certificate".into(), certificate_to_json(cert));
    }
    if let Some(ver) = &v.verification {
        obj.insert("verification".into(), verification_to_json(ver));
    }
    if !v.notes.is_empty() {
        obj.insert("notes".into(), json!(v.notes));
    }
    Value::Object(obj)
}

fn verification_to_json(v: &Verification) -> Value {
    json!({
        "passed": v.passed,
        "checks": v.checks.iter().map(|(name, d)| json!({"check": name, "outcome": d})).collect::<Vec<_>>(),
    })
}

fn obstruction_to_json(o: &Obstruction) -> Value {
    match o {
        Obstruction::TransferNotHyperbolic(report) => json!({
            "kind": "transfer-not-hyperbolic",
            "witt": report,
        }),
        Obstruction::CorestrictionNonsplit(report) => json!({
            "kind": "corestriction-nonsplit",
            "cor": report,
        }),
        Obstruction::TransferSystemNotMetabolic => json!({
            "kind": "transfer-system-not-metabolic",
        }),
        Obstruction::SkewLineNotRational => json!({
            "kind": "skew-line-has-no-rational-square",
        }),
        Obstruction::ExhaustedEnumeration => json!({
            "kind": "exhausted-enumeration",
        }),
    }
}

pub fn certificate_to_json(c: &Certificate) -> Value {
    match c {
        Certificate::QuadraticForm(q) => json!({
            "kind": "quadratic-form",
            "field": q.field().to_string(),
            "coeffs": scenario::matrix_string(q),
        }),
        Certificate::System(sys) => json!({
            "kind": "system",
            "field": sys.field().to_string(),
            "forms": sys.components().iter().map(scenario::matrix_string).collect::<Vec<_>>(),
        }),
        Certificate::Hermitian(h) => hermitian_to_json(h),
        Certificate::AlgebraWithInvolution(alg) => algebra_to_json(alg),
        Certificate::Pair { algebra, form } => json!({
            "kind": "pair",
            "algebra": algebra_to_json(algebra),
            "form": hermitian_to_json(form),
        }),
    }
}

pub fn algebra_to_json(alg: &AlgebraWithInvolution) -> Value {
    json!({
        "kind": "quaternion-with-involution",
        "center": alg.alg.center().to_string(),
        "presentation": alg.alg.fmt_presentation(),
        "involution": match &alg.involution {
            InvolutionKind::Canonical => "canonical".to_string(),
            InvolutionKind::IntU(u) => format!("int(u)*gamma, u = {}", alg.alg.fmt_elem(u)),
        },
    })
}

pub fn hermitian_to_json(h: &HermitianForm) -> Value {
    let ring = match h.ring() {
        DivisionAlgebra::Field(f) => json!({"kind": "field", "field": f.to_string()}),
        DivisionAlgebra::Quaternion(q) => algebra_to_json(q),
    };
    let mut rows = Vec::new();
    for i in 0..h.dim() {
        let mut cells = Vec::new();
        for j in 0..h.dim() {
            cells.push(h.ring().fmt_elem(h.gram(i, j)));
        }
        rows.push(cells.join(", "));
    }
    json!({
        "kind": "hermitian",
        "ring": ring,
        "lambda": h.lambda(),
        "dim": h.dim(),
        "gram": format!("[{}]", rows.join("; ")),
    })
}

pub fn system_to_json(sys: &QuadraticSystem) -> Value {
    json!({
        "field": sys.field().to_string(),
        "dim": sys.dim(),
        "forms": sys.components().iter().map(scenario::matrix_string).collect::<Vec<_>>(),
    })
}
