//! The `.nlf` text format: structure equations, complex structures, metrics,
//! coframe maps and realizations, with a deterministic exporter.
//!
//! ```text
//! frame real 8
//! params a b
//! d e4 = e1^e3
//! d e7 = 2*a*e1^e2 + e1^e5 + e2^e4 + 2*e3^e4
//! J e1 = e2
//! ```

use crate::cxstruct::{AlmostComplexStructure, Realization};
use crate::error::{Error, Result};
use crate::exterior::{Blade, Differential, Form, Frame, FrameRef};
use crate::hermitian::HermitianForm;
use crate::liealg::Presentation;
use crate::linalg::Matrix;
use crate::scalars::{Assignment, Param, Scalar};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DslErrorKind {
    Parse,
    DuplicateAssignment,
    UnknownGenerator,
    BadDimension,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {kind:?} at `{token}`: {message}")]
pub struct DslError {
    pub kind: DslErrorKind,
    pub line: usize,
    pub col: usize,
    pub token: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
    text: String,
}

fn lex(line: usize, src: &str) -> std::result::Result<Vec<Token>, DslError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let text: String = chars[start..k].iter().collect();
            out.push(Token { tok: Tok::Num(text.parse().expect("digits")), col, text });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            let text: String = chars[start..k].iter().collect();
            out.push(Token { tok: Tok::Ident(text.clone()), col, text });
        } else if "+-*/^()=".contains(c) {
            out.push(Token { tok: Tok::Sym(c), col, text: c.to_string() });
            k += 1;
        } else {
            return Err(DslError {
                kind: DslErrorKind::Parse,
                line,
                col,
                token: c.to_string(),
                message: "unexpected character".into(),
            });
        }
    }
    Ok(out)
}

/// How a metric was written: `q F = form` or entries `h j k = s` of `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricSpec {
    Form { multiple: Scalar, form: Form },
    Entries(BTreeMap<(usize, usize), Scalar>),
}

/// A parsed `.nlf` file. Generator keys are 0-based frame indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub name: Option<String>,
    pub frame: FrameRef,
    pub params: Vec<Param>,
    pub differentials: BTreeMap<usize, Form>,
    /// `J*` on generators.
    pub j_dual: BTreeMap<usize, Form>,
    /// `J` on basis vectors, written with the generator names.
    pub j_vector: BTreeMap<usize, Form>,
    pub metric: Option<MetricSpec>,
    /// Rows of a coframe map: the image of each target generator.
    pub map: BTreeMap<usize, Form>,
    /// Real generators written in the complex frame.
    pub realize: BTreeMap<usize, Form>,
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    frame: &'a FrameRef,
    params: &'a [Param],
}

impl<'a> Parser<'a> {
    fn err(&self, kind: DslErrorKind, message: impl Into<String>) -> DslError {
        let (col, token) = match self.toks.get(self.pos) {
            Some(t) => (t.col, t.text.clone()),
            None => (self.toks.last().map_or(1, |t| t.col + t.text.chars().count()), "<end of line>".into()),
        };
        DslError { kind, line: self.line, col, token, message: message.into() }
    }

    fn err_at(&self, at: usize, kind: DslErrorKind, message: impl Into<String>) -> DslError {
        let t = &self.toks[at];
        DslError { kind, line: self.line, col: t.col, token: t.text.clone(), message: message.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> std::result::Result<(), DslError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(DslErrorKind::Parse, format!("expected `{c}`")))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expr(&mut self) -> std::result::Result<Form, DslError> {
        let mut acc = self.term()?;
        loop {
            let at = self.pos;
            let neg = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                return Ok(acc);
            };
            let rhs = self.term()?;
            let r = if neg { acc.try_sub(&rhs) } else { acc.try_add(&rhs) };
            acc = self.sum_result(r, &acc, &rhs, at)?;
        }
    }

    fn sum_result(&self, r: Result<Form>, lhs: &Form, rhs: &Form, at: usize) -> std::result::Result<Form, DslError> {
        match r {
            Ok(f) => Ok(f),
            // `0` is accepted in any degree.
            Err(Error::DegreeMismatch(..)) if lhs.is_zero() && lhs.degree() == 0 => Ok(rhs.clone()),
            Err(Error::DegreeMismatch(..)) if rhs.is_zero() && rhs.degree() == 0 => Ok(lhs.clone()),
            Err(e) => Err(self.err_at(at, DslErrorKind::Parse, e.to_string())),
        }
    }

    fn term(&mut self) -> std::result::Result<Form, DslError> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.wedge()?;
        loop {
            let at = self.pos;
            if self.eat('*') {
                let rhs = self.wedge()?;
                acc = self.product(&acc, &rhs, at)?;
            } else if self.eat('/') {
                let rhs = self.wedge()?;
                let inv = (rhs.degree() == 0)
                    .then(|| rhs.coeff(Blade::EMPTY))
                    .filter(Scalar::is_constant)
                    .and_then(|s| s.invert().ok())
                    .ok_or_else(|| self.err_at(at, DslErrorKind::Parse, "divisor must be a nonzero constant"))?;
                acc = acc.scale(&inv);
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym('('))) {
                let rhs = self.wedge()?;
                acc = self.product(&acc, &rhs, at)?;
            } else {
                break;
            }
        }
        Ok(if neg { acc.neg() } else { acc })
    }

    fn product(&self, lhs: &Form, rhs: &Form, at: usize) -> std::result::Result<Form, DslError> {
        if lhs.degree() != 0 && rhs.degree() != 0 {
            return Err(self.err_at(at, DslErrorKind::Parse, "use `^` to wedge forms"));
        }
        lhs.wedge(rhs).map_err(|e| self.err_at(at, DslErrorKind::Parse, e.to_string()))
    }

    fn wedge(&mut self) -> std::result::Result<Form, DslError> {
        let mut acc = self.atom()?;
        loop {
            let at = self.pos;
            if !self.eat('^') {
                return Ok(acc);
            }
            let rhs = self.atom()?;
            acc = acc.wedge(&rhs).map_err(|e| self.err_at(at, DslErrorKind::Parse, e.to_string()))?;
        }
    }

    fn atom(&mut self) -> std::result::Result<Form, DslError> {
        let at = self.pos;
        let tok = self.peek().cloned().ok_or_else(|| self.err(DslErrorKind::Parse, "expected a term"))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Form::constant(self.frame, Scalar::from_rational(n.into()))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym(_) => Err(self.err_at(at, DslErrorKind::Parse, "expected a term")),
            Tok::Ident(s) => {
                let c = |s: Scalar| Ok(Form::constant(self.frame, s));
                match s.as_str() {
                    "i" => c(Scalar::i()),
                    "s3" => c(Scalar::sqrt3()),
                    _ => {
                        if let Some(p) = Param::from_name(&s) {
                            if !self.params.contains(&p) {
                                return Err(self.err_at(at, DslErrorKind::Parse, "parameter not declared by `params`"));
                            }
                            return c(Scalar::param(p));
                        }
                        let k = generator(self.frame, &s).map_err(|kind| {
                            self.err_at(at, kind, format!("not a generator of frame {}", self.frame))
                        })?;
                        Ok(Form::generator(self.frame, k))
                    }
                }
            }
        }
    }
}

/// Index of a generator name; `v<k>` aliases `e<k>`.
fn generator(frame: &Frame, name: &str) -> std::result::Result<usize, DslErrorKind> {
    let split = name.find(|c: char| c.is_ascii_digit()).ok_or(DslErrorKind::UnknownGenerator)?;
    let (prefix, digits) = name.split_at(split);
    let k: usize = digits.parse().map_err(|_| DslErrorKind::UnknownGenerator)?;
    let n = frame.rank();
    let offset = match (frame.is_complex(), prefix) {
        (false, "e" | "v") => 0,
        (true, "w") => 0,
        (true, "cw") => n,
        _ => return Err(DslErrorKind::UnknownGenerator),
    };
    if k == 0 || k > n {
        return Err(DslErrorKind::BadDimension);
    }
    Ok(offset + k - 1)
}

fn dup(line: usize, t: &Token, what: &str) -> DslError {
    DslError {
        kind: DslErrorKind::DuplicateAssignment,
        line,
        col: t.col,
        token: t.text.clone(),
        message: format!("{what} assigned twice"),
    }
}

fn parse_err(line: usize, t: Option<&Token>, message: &str) -> DslError {
    DslError {
        kind: DslErrorKind::Parse,
        line,
        col: t.map_or(1, |t| t.col),
        token: t.map_or("<end of line>".into(), |t| t.text.clone()),
        message: message.into(),
    }
}

pub fn parse(text: &str) -> std::result::Result<Document, DslError> {
    let mut doc: Option<Document> = None;
    let mut name = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let toks = lex(line, raw)?;
        let Some(head) = toks.first() else { continue };
        let word = match &head.tok {
            Tok::Ident(s) => s.as_str(),
            Tok::Num(_) | Tok::Sym('(') => "F",
            Tok::Sym(_) => return Err(parse_err(line, Some(head), "expected a statement")),
        };
        if word == "frame" {
            if doc.is_some() {
                return Err(dup(line, head, "frame"));
            }
            let flavor = toks.get(1);
            let rank = toks.get(2);
            let n = match rank.map(|t| &t.tok) {
                Some(Tok::Num(n)) => usize::try_from(n).ok().filter(|&n| n >= 1),
                _ => None,
            }
            .ok_or_else(|| parse_err(line, rank, "expected a positive rank"))?;
            let frame = match flavor.map(|t| &t.tok) {
                Some(Tok::Ident(s)) if s == "real" && n <= 64 => Frame::real(n),
                Some(Tok::Ident(s)) if s == "complex" && n <= 32 => Frame::complex(n),
                _ => return Err(parse_err(line, flavor, "expected `real N` (N ≤ 64) or `complex N` (N ≤ 32)")),
            };
            if toks.len() > 3 {
                return Err(parse_err(line, toks.get(3), "trailing input"));
            }
            doc = Some(Document::new(&frame));
            continue;
        }
        if word == "name" {
            if name.is_some() {
                return Err(dup(line, head, "name"));
            }
            match toks.get(1).map(|t| &t.tok) {
                Some(Tok::Ident(s)) if toks.len() == 2 => name = Some(s.clone()),
                _ => return Err(parse_err(line, toks.get(1), "expected a single identifier")),
            }
            continue;
        }
        let d = doc.as_mut().ok_or_else(|| parse_err(line, Some(head), "the first statement must be `frame`"))?;
        if word == "params" {
            if !d.params.is_empty() {
                return Err(dup(line, head, "params"));
            }
            let mut ps = Vec::new();
            for t in &toks[1..] {
                match &t.tok {
                    Tok::Ident(s) => match Param::from_name(s) {
                        Some(p) if !ps.contains(&p) => ps.push(p),
                        Some(_) => return Err(dup(line, t, "parameter")),
                        None => return Err(parse_err(line, Some(t), "parameters are `a` and `b`")),
                    },
                    _ => return Err(parse_err(line, Some(t), "expected a parameter name")),
                }
            }
            if ps.is_empty() {
                return Err(parse_err(line, None, "expected a parameter name"));
            }
            ps.sort();
            d.params = ps;
            continue;
        }
        statement(d, line, word, &toks)?;
    }
    let mut d = doc.ok_or_else(|| parse_err(text.lines().count().max(1), None, "missing `frame` statement"))?;
    d.name = name;
    Ok(d)
}

fn rhs(d: &Document, line: usize, toks: &[Token], from: usize) -> std::result::Result<Form, DslError> {
    let frame = d.frame.clone();
    let mut p = Parser { toks, pos: from, line, frame: &frame, params: &d.params };
    let f = p.expr()?;
    if !p.at_end() {
        return Err(p.err(DslErrorKind::Parse, "trailing input"));
    }
    Ok(f)
}

fn with_degree(f: Form, degree: usize, line: usize, toks: &[Token], at: usize) -> std::result::Result<Form, DslError> {
    if f.degree() == degree {
        Ok(f)
    } else if f.is_zero() {
        Ok(Form::zero(f.frame(), degree))
    } else {
        Err(parse_err(line, toks.get(at), &format!("expected a form of degree {degree}, found degree {}", f.degree())))
    }
}

fn statement(d: &mut Document, line: usize, word: &str, toks: &[Token]) -> std::result::Result<(), DslError> {
    let gen_at = |i: usize, frame: &Frame| -> std::result::Result<usize, DslError> {
        let t = toks.get(i).ok_or_else(|| parse_err(line, None, "expected a generator"))?;
        match &t.tok {
            Tok::Ident(s) => generator(frame, s).map_err(|kind| DslError {
                kind,
                line,
                col: t.col,
                token: t.text.clone(),
                message: format!("not a generator of frame {frame}"),
            }),
            _ => Err(parse_err(line, Some(t), "expected a generator")),
        }
    };
    let eq_at = |i: usize| -> std::result::Result<(), DslError> {
        match toks.get(i).map(|t| &t.tok) {
            Some(Tok::Sym('=')) => Ok(()),
            _ => Err(parse_err(line, toks.get(i), "expected `=`")),
        }
    };
    let frame = d.frame.clone();
    let n = frame.rank();
    match word {
        "d" | "J" | "Jv" | "map" => {
            let k = gen_at(1, &frame)?;
            eq_at(2)?;
            let (degree, target) = match word {
                "d" => (2, &mut d.differentials),
                "J" => (1, &mut d.j_dual),
                "Jv" => (1, &mut d.j_vector),
                _ => (1, &mut d.map),
            };
            if word == "d" && frame.is_complex() && k >= n {
                return Err(parse_err(line, toks.get(1), "differentials of conjugate generators are implied"));
            }
            if target.contains_key(&k) {
                return Err(dup(line, &toks[1], &toks[1].text));
            }
            let f = with_degree(rhs_frame(&frame, &d.params, line, toks, 3)?, degree, line, toks, 3)?;
            let target = match word {
                "d" => &mut d.differentials,
                "J" => &mut d.j_dual,
                "Jv" => &mut d.j_vector,
                _ => &mut d.map,
            };
            target.insert(k, f);
        }
        "realize" => {
            if !frame.is_complex() {
                return Err(parse_err(line, toks.first(), "`realize` needs a complex frame"));
            }
            let real = Frame::real(2 * n);
            let k = gen_at(1, &real)?;
            eq_at(2)?;
            if d.realize.contains_key(&k) {
                return Err(dup(line, &toks[1], &toks[1].text));
            }
            let f = with_degree(rhs(d, line, toks, 3)?, 1, line, toks, 3)?;
            d.realize.insert(k, f);
        }
        "h" => {
            if !frame.is_complex() {
                return Err(parse_err(line, toks.first(), "metric entries need a complex frame"));
            }
            let idx = |i: usize| -> std::result::Result<usize, DslError> {
                match toks.get(i).map(|t| &t.tok) {
                    Some(Tok::Num(v)) => {
                        let v = usize::try_from(v).unwrap_or(usize::MAX);
                        if v == 0 || v > n {
                            Err(DslError {
                                kind: DslErrorKind::BadDimension,
                                line,
                                col: toks[i].col,
                                token: toks[i].text.clone(),
                                message: format!("index outside 1..={n}"),
                            })
                        } else {
                            Ok(v - 1)
                        }
                    }
                    _ => Err(parse_err(line, toks.get(i), "expected an index")),
                }
            };
            let (j, k) = (idx(1)?, idx(2)?);
            eq_at(3)?;
            let entries = match &mut d.metric {
                None => {
                    d.metric = Some(MetricSpec::Entries(BTreeMap::new()));
                    match &mut d.metric {
                        Some(MetricSpec::Entries(e)) => e,
                        _ => unreachable!(),
                    }
                }
                Some(MetricSpec::Entries(e)) => e,
                Some(MetricSpec::Form { .. }) => return Err(dup(line, &toks[0], "metric")),
            };
            if entries.contains_key(&(j, k)) {
                return Err(dup(line, &toks[0], &format!("h {} {}", j + 1, k + 1)));
            }
            let f = rhs_frame(&frame, &d.params, line, toks, 4)?;
            if f.degree() != 0 {
                return Err(parse_err(line, toks.get(4), "expected a scalar"));
            }
            let s = f.coeff(Blade::EMPTY);
            let entries = match &mut d.metric {
                Some(MetricSpec::Entries(e)) => e,
                _ => unreachable!(),
            };
            entries.insert((j, k), s);
        }
        "F" => {
            let fpos = toks
                .iter()
                .position(|t| t.tok == Tok::Ident("F".into()))
                .ok_or_else(|| parse_err(line, toks.first(), "expected a statement"))?;
            let multiple = if fpos == 0 {
                Scalar::one()
            } else {
                let f = rhs_frame(&frame, &d.params, line, &toks[..fpos], 0)?;
                let s = (f.degree() == 0).then(|| f.coeff(Blade::EMPTY)).filter(|s| !s.is_zero());
                s.ok_or_else(|| parse_err(line, toks.first(), "expected a nonzero scalar multiple of F"))?
            };
            eq_at(fpos + 1)?;
            if d.metric.is_some() {
                return Err(dup(line, &toks[fpos], "metric"));
            }
            let form = with_degree(rhs_frame(&frame, &d.params, line, toks, fpos + 2)?, 2, line, toks, fpos + 2)?;
            d.metric = Some(MetricSpec::Form { multiple, form });
        }
        _ => return Err(parse_err(line, toks.first(), "unknown statement")),
    }
    Ok(())
}

fn rhs_frame(
    frame: &FrameRef,
    params: &[Param],
    line: usize,
    toks: &[Token],
    from: usize,
) -> std::result::Result<Form, DslError> {
    let mut p = Parser { toks, pos: from, line, frame, params };
    let f = p.expr()?;
    if !p.at_end() {
        return Err(p.err(DslErrorKind::Parse, "trailing input"));
    }
    Ok(f)
}

fn coords(f: &Form, n: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    for (b, c) in f.terms() {
        if let Some(k) = b.indices().next() {
            v[k] = c.clone();
        }
    }
    v
}

fn unit(n: usize, k: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[k] = Scalar::one();
    v
}

fn scalar_text(s: &Scalar) -> String {
    let (neg, body) = s.as_factor();
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl Document {
    pub fn new(frame: &FrameRef) -> Self {
        Document {
            name: None,
            frame: frame.clone(),
            params: Vec::new(),
            differentials: BTreeMap::new(),
            j_dual: BTreeMap::new(),
            j_vector: BTreeMap::new(),
            metric: None,
            map: BTreeMap::new(),
            realize: BTreeMap::new(),
        }
    }

    fn used_params(&mut self) {
        let mut ps: Vec<Param> = Vec::new();
        let mut note = |s: &Scalar| {
            for p in s.params() {
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
        };
        let forms = self
            .differentials
            .values()
            .chain(self.j_dual.values())
            .chain(self.j_vector.values())
            .chain(self.map.values())
            .chain(self.realize.values());
        for f in forms {
            f.terms().for_each(|(_, c)| note(c));
        }
        match &self.metric {
            Some(MetricSpec::Form { multiple, form }) => {
                note(multiple);
                form.terms().for_each(|(_, c)| note(c));
            }
            Some(MetricSpec::Entries(e)) => e.values().for_each(&mut note),
            None => {}
        }
        ps.sort();
        self.params = ps;
    }

    /// Nonzero differentials only.
    pub fn from_presentation(g: &Presentation) -> Self {
        let n = if g.frame().is_complex() { g.frame().rank() } else { g.dim() };
        let mut d = Document::new(g.frame());
        d.name = g.name().map(str::to_string);
        for k in 0..n {
            let f = g.differential().image(k);
            if !f.is_zero() {
                d.differentials.insert(k, f.clone());
            }
        }
        d.used_params();
        d
    }

    /// All `J*` images on the real frame of `J`.
    pub fn from_structure(j: &AlmostComplexStructure) -> Self {
        let n = j.dim();
        let frame = Frame::real(n);
        let mut d = Document::new(&frame);
        let dual = j.dual_matrix();
        for i in 0..n {
            let f = (0..n)
                .fold(Form::zero(&frame, 1), |acc, r| &acc + &Form::from_indices(&frame, &[r], dual[(r, i)].clone()));
            d.j_dual.insert(i, f);
        }
        d.used_params();
        d
    }

    /// Upper-triangle entries of `h`.
    pub fn from_metric(f: &HermitianForm) -> Self {
        let mut d = Document::new(f.frame());
        let n = f.rank();
        let mut e = BTreeMap::new();
        for j in 0..n {
            for k in j..n {
                let s = &f.matrix()[(j, k)];
                if !s.is_zero() {
                    e.insert((j, k), s.clone());
                }
            }
        }
        d.metric = Some(MetricSpec::Entries(e));
        d.used_params();
        d
    }

    pub fn from_map(frame: &FrameRef, lambda: &Matrix<Scalar>) -> Self {
        let mut d = Document::new(frame);
        for i in 0..lambda.rows() {
            let f = (0..lambda.cols())
                .fold(Form::zero(frame, 1), |acc, j| &acc + &Form::from_indices(frame, &[j], lambda[(i, j)].clone()));
            d.map.insert(i, f);
        }
        d.used_params();
        d
    }

    pub fn from_realization(r: &Realization) -> Self {
        let frame = r.complex_frame();
        let mut d = Document::new(frame);
        let m = r.real_in_complex();
        for i in 0..m.rows() {
            let f = (0..m.cols())
                .fold(Form::zero(frame, 1), |acc, j| &acc + &Form::from_indices(frame, &[j], m[(i, j)].clone()));
            d.realize.insert(i, f);
        }
        d.used_params();
        d
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    fn generator_count(&self) -> usize {
        if self.frame.is_complex() {
            self.frame.rank()
        } else {
            self.frame.len()
        }
    }

    pub fn differential(&self) -> Result<Differential> {
        let n = self.generator_count();
        let images: Vec<Form> =
            (0..n).map(|k| self.differentials.get(&k).cloned().unwrap_or_else(|| Form::zero(&self.frame, 2))).collect();
        if self.frame.is_complex() {
            Differential::from_holomorphic(&self.frame, images)
        } else {
            Differential::new(&self.frame, images)
        }
    }

    /// Jacobi-checked presentation; unlisted differentials are zero.
    pub fn presentation(&self) -> Result<Presentation> {
        let g = Presentation::new(self.differential()?)?;
        Ok(match &self.name {
            Some(n) => g.named(n.clone()),
            None => g,
        })
    }

    pub fn presentation_unchecked(&self) -> Result<Presentation> {
        Ok(Presentation::unchecked(self.differential()?))
    }

    /// Either all images (a full matrix) or images of half a basis, completed by `J² = −Id`.
    pub fn structure(&self) -> Result<Option<AlmostComplexStructure>> {
        let n = self.frame.len();
        let (images, dual) = match (self.j_dual.is_empty(), self.j_vector.is_empty()) {
            (true, true) => return Ok(None),
            (false, true) => (&self.j_dual, true),
            (true, false) => (&self.j_vector, false),
            (false, false) => return Err(Error::NotAlmostComplex),
        };
        if self.frame.is_complex() {
            return Err(Error::ComplexFrame);
        }
        let j = if images.len() == n {
            let cols: Vec<Vec<Scalar>> = (0..n).map(|k| coords(&images[&k], n)).collect();
            let m = Matrix::from_cols(n, &cols);
            AlmostComplexStructure::from_matrix(if dual { m.transpose() } else { m })?
        } else {
            let pairs: Vec<(Vec<Scalar>, Vec<Scalar>)> =
                images.iter().map(|(k, f)| (unit(n, *k), coords(f, n))).collect();
            if dual {
                AlmostComplexStructure::from_dual_images(n, &pairs)?
            } else {
                AlmostComplexStructure::from_vector_images(n, &pairs)?
            }
        };
        Ok(Some(j))
    }

    pub fn metric(&self) -> Result<Option<HermitianForm>> {
        match &self.metric {
            None => Ok(None),
            Some(MetricSpec::Form { multiple, form }) => {
                Ok(Some(HermitianForm::from_form(&form.scale(&multiple.invert()?))?))
            }
            Some(MetricSpec::Entries(e)) => {
                let n = self.frame.rank();
                let mut h = Matrix::zeros(n, n);
                for (&(j, k), s) in e {
                    h[(j, k)] = s.clone();
                    if !e.contains_key(&(k, j)) {
                        h[(k, j)] = s.conjugate();
                    }
                }
                Ok(Some(HermitianForm::from_matrix(&self.frame, &h, &Scalar::one())?))
            }
        }
    }

    /// Rows are the images of the listed generators; every generator must be listed.
    pub fn map_matrix(&self) -> Result<Option<Matrix<Scalar>>> {
        if self.map.is_empty() {
            return Ok(None);
        }
        let n = self.frame.len();
        if self.map.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.map.len() });
        }
        Ok(Some(Matrix::from_rows((0..n).map(|k| coords(&self.map[&k], n)).collect())))
    }

    pub fn realization(&self) -> Result<Option<Realization>> {
        if self.realize.is_empty() {
            return Ok(None);
        }
        let n = self.frame.len();
        if self.realize.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.realize.len() });
        }
        let m = Matrix::from_rows((0..n).map(|k| coords(&self.realize[&k], n)).collect());
        Ok(Some(Realization::new(self.frame.rank(), m)?))
    }

    pub fn specialize(&self, asg: &Assignment) -> Document {
        let map = |m: &BTreeMap<usize, Form>| m.iter().map(|(k, f)| (*k, f.specialize(asg))).collect();
        let mut d = Document {
            name: self.name.clone(),
            frame: self.frame.clone(),
            params: Vec::new(),
            differentials: map(&self.differentials),
            j_dual: map(&self.j_dual),
            j_vector: map(&self.j_vector),
            metric: self.metric.as_ref().map(|m| match m {
                MetricSpec::Form { multiple, form } => {
                    MetricSpec::Form { multiple: multiple.specialize(asg), form: form.specialize(asg) }
                }
                MetricSpec::Entries(e) => MetricSpec::Entries(e.iter().map(|(k, s)| (*k, s.specialize(asg))).collect()),
            }),
            map: map(&self.map),
            realize: map(&self.realize),
        };
        d.params = self.params.iter().copied().filter(|p| asg.get(*p).is_none()).collect();
        d
    }

    /// Canonical text; `parse(export(d)) == d`.
    pub fn export(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            out.push_str(&format!("name {n}\n"));
        }
        let flavor = if self.frame.is_complex() { "complex" } else { "real" };
        out.push_str(&format!("frame {flavor} {}\n", self.frame.rank()));
        if !self.params.is_empty() {
            let ps: Vec<&str> = self.params.iter().map(|p| p.name()).collect();
            out.push_str(&format!("params {}\n", ps.join(" ")));
        }
        let gen = |k: usize| self.frame.generator_name(k);
        for (k, f) in &self.differentials {
            out.push_str(&format!("d {} = {}\n", gen(*k), f.to_dsl()));
        }
        for (k, f) in &self.j_dual {
            out.push_str(&format!("J {} = {}\n", gen(*k), f.to_dsl()));
        }
        for (k, f) in &self.j_vector {
            out.push_str(&format!("Jv {} = {}\n", gen(*k), f.to_dsl()));
        }
        match &self.metric {
            Some(MetricSpec::Form { multiple, form }) => {
                let lhs = if multiple.is_one() { "F".to_string() } else { format!("({})F", scalar_text(multiple)) };
                out.push_str(&format!("{lhs} = {}\n", form.to_dsl()));
            }
            Some(MetricSpec::Entries(e)) => {
                for ((j, k), s) in e {
                    out.push_str(&format!("h {} {} = {}\n", j + 1, k + 1, scalar_text(s)));
                }
            }
            None => {}
        }
        for (k, f) in &self.map {
            out.push_str(&format!("map {} = {}\n", gen(*k), f.to_dsl()));
        }
        let real = Frame::real(2 * self.frame.rank());
        for (k, f) in &self.realize {
            out.push_str(&format!("realize {} = {}\n", real.generator_name(*k), f.to_dsl()));
        }
        out
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.export())
    }
}

/// Parses a single form expression on `frame`.
pub fn parse_form(frame: &FrameRef, params: &[Param], text: &str) -> std::result::Result<Form, DslError> {
    let toks = lex(1, text)?;
    rhs_frame(frame, params, 1, &toks, 0)
}
