//! Reports and their canonical JSON form.

use nilcx::exterior::Form;
use nilcx::linalg::Matrix;
use nilcx::scalars::{Assignment, Param, Scalar};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Error,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Error => 2,
        }
    }

    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Status::Holds
        } else {
            Status::Fails
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub status: Status,
    pub result: Value,
    pub witnesses: Vec<Value>,
}

/// Outcome of a command before it is stamped with its name and digest.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub result: Value,
    pub witnesses: Vec<Value>,
}

impl Outcome {
    pub fn new(holds: bool, result: Value) -> Self {
        Outcome { status: Status::from_bool(holds), result, witnesses: Vec::new() }
    }

    pub fn witness(mut self, w: Value) -> Self {
        self.witnesses.push(w);
        self
    }
}

impl Report {
    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "status": self.status.label(),
            "result": self.result,
            "witnesses": self.witnesses,
        })
    }

    /// Compact JSON with sorted keys and a trailing newline.
    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string(&self.to_value()).expect("reports serialize");
        s.push('\n');
        s
    }
}

pub fn digest(parts: &[(&str, &[u8])]) -> String {
    let mut h = Sha256::new();
    for (name, bytes) in parts {
        h.update((name.len() as u64).to_le_bytes());
        h.update(name.as_bytes());
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}

pub fn scalar(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn form(f: &Form) -> Value {
    let terms: Vec<Value> =
        f.terms().map(|(b, c)| json!({ "blade": Form::blade_name(f.frame(), *b), "coeff": c.to_string() })).collect();
    json!({ "degree": f.degree(), "text": f.to_dsl(), "terms": terms })
}

pub fn labeled_form(label: &str, f: &Form) -> Value {
    json!({ "label": label, "form": form(f) })
}

pub fn matrix(m: &Matrix<Scalar>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(scalar).collect())).collect())
}

pub fn assignment(asg: &Assignment) -> Value {
    let mut m = Map::new();
    for p in [Param::A, Param::B] {
        if let Some(v) = asg.get(p) {
            m.insert(p.name().into(), Value::String(v.to_string()));
        }
    }
    Value::Object(m)
}
