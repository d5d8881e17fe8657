//! Parsed command-line inputs shared by every command.

use nilcx::dsl::{parse, Document, DslError, DslErrorKind};
use nilcx::liealg::Presentation;
use nilcx::scalars::{Assignment, Param, Rational};
use serde_json::{json, Value};
use std::path::Path;

/// A failure that ends the command with status `error`.
#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub detail: Value,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { kind: "UsageError", message: message.into(), detail: Value::Null }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError { kind: "IoError", message: format!("{}: {e}", path.display()), detail: Value::Null }
    }

    pub fn to_value(&self) -> Value {
        json!({ "error": self.kind, "message": self.message, "detail": self.detail })
    }
}

impl From<nilcx::Error> for CliError {
    fn from(e: nilcx::Error) -> Self {
        let kind = match &e {
            nilcx::Error::SymbolicParameters | nilcx::Error::NonConstant(_) => "SymbolicParameters",
            nilcx::Error::Jacobi(_) => "JacobiFailure",
            _ => "ComputationError",
        };
        CliError { kind, message: e.to_string(), detail: Value::Null }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn parse_assignment(items: &[String]) -> CliResult<Assignment> {
    let mut asg = Assignment::new();
    for item in items {
        let (name, value) =
            item.split_once('=').ok_or_else(|| CliError::usage(format!("expected NAME=VALUE, got `{item}`")))?;
        let p = Param::from_name(name.trim()).ok_or_else(|| CliError::usage(format!("unknown parameter `{name}`")))?;
        asg.set(p, parse_rational(value)?);
    }
    Ok(asg)
}

pub fn parse_rational(s: &str) -> CliResult<Rational> {
    s.trim().parse().map_err(|_| CliError::usage(format!("`{s}` is not a rational number")))
}

/// `a=0,1,2,5/3`.
pub fn parse_sample(s: &str) -> CliResult<(Param, Vec<Rational>)> {
    let (name, values) =
        s.split_once('=').ok_or_else(|| CliError::usage(format!("expected NAME=V1,V2,..., got `{s}`")))?;
    let p = Param::from_name(name.trim()).ok_or_else(|| CliError::usage(format!("unknown parameter `{name}`")))?;
    let vs = values.split(',').map(parse_rational).collect::<CliResult<Vec<_>>>()?;
    Ok((p, vs))
}

fn merged(base: &Assignment, over: &Assignment) -> Assignment {
    let mut out = base.clone();
    for p in [Param::A, Param::B] {
        if let Some(v) = over.get(p) {
            out.set(p, v.clone());
        }
    }
    out
}

pub fn dsl_error(origin: &str, e: DslError) -> CliError {
    CliError {
        kind: match e.kind {
            DslErrorKind::Parse => "ParseError",
            DslErrorKind::DuplicateAssignment => "DuplicateAssignment",
            DslErrorKind::UnknownGenerator => "UnknownGenerator",
            DslErrorKind::BadDimension => "BadDimension",
        },
        message: format!("{origin}: {}", e.message),
        detail: json!({ "line": e.line, "column": e.col, "token": e.token }),
    }
}

#[derive(Clone, Debug)]
pub struct Input {
    pub document: Document,
}

pub fn load(path: &Path) -> CliResult<Input> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let document = parse(&text).map_err(|e| dsl_error(&path.display().to_string(), e))?;
    Ok(Input { document })
}

#[derive(Clone, Debug, Default)]
pub struct Invocation {
    pub positional: Vec<String>,
    pub inputs: Vec<Input>,
    pub set: Assignment,
    pub src_set: Assignment,
    pub dst_set: Assignment,
    pub max: Option<usize>,
    pub form: Option<Input>,
    pub tests: Vec<String>,
    pub k: Option<usize>,
    pub src: Option<Input>,
    pub dst: Option<Input>,
    pub classes: Vec<String>,
}

impl Invocation {
    pub fn input(&self) -> CliResult<&Input> {
        match self.inputs.as_slice() {
            [one] => Ok(one),
            [] => Err(CliError::usage("expected an input file")),
            _ => Err(CliError::usage("expected exactly one input file")),
        }
    }

    /// The input document after `--set`.
    pub fn document(&self) -> CliResult<Document> {
        Ok(self.input()?.document.specialize(&self.set))
    }

    pub fn presentation(&self) -> CliResult<Presentation> {
        Ok(self.document()?.presentation()?)
    }

    pub fn constant_presentation(&self) -> CliResult<Presentation> {
        let g = self.presentation()?;
        if !g.is_constant() {
            return Err(CliError {
                kind: "SymbolicParameters",
                message: "structure constants depend on parameters; bind them with --set".into(),
                detail: Value::Null,
            });
        }
        Ok(g)
    }

    pub fn form_document(&self) -> CliResult<Document> {
        let f = self.form.as_ref().ok_or_else(|| CliError::usage("--form FILE is required"))?;
        Ok(f.document.specialize(&self.set))
    }

    pub fn source_point(&self) -> Assignment {
        merged(&self.set, &self.src_set)
    }

    pub fn target_point(&self) -> Assignment {
        merged(&self.set, &self.dst_set)
    }

    pub fn with_value(&self, p: Param, v: &Rational) -> Invocation {
        let mut inv = self.clone();
        inv.set.set(p, v.clone());
        inv
    }
}
