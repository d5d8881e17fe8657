//! The subcommand registry.

use crate::invocation::{dsl_error, CliError, CliResult, Invocation};
use crate::report::{self, labeled_form, matrix, scalar, Outcome};
use nilcx::catalog::{
    self, canonicalize, family_iso_verdict, lemma36_relation_check, to_v_basis, Family, FamilyPoint, IsoJustification,
    Object,
};
use nilcx::cohomology::{Cohomology, SymplecticVerdict};
use nilcx::cxstruct::{
    j_series_classify, j_series_invariants, nijenhuis, snn_structure_assert, AlmostComplexStructure,
};
use nilcx::dsl::{parse_form, Document};
use nilcx::exterior::Frame;
use nilcx::hermitian::{gauduchon_constant, metric_report, positivity_report, HermitianForm, Witness};
use nilcx::liealg::{ascending_series, descending_series, is_isomorphism, morphism_residual, Presentation};
use nilcx::linalg::Matrix;
use nilcx::scalars::{Assignment, Param, Rational, Scalar};
use serde_json::{json, Value};

pub trait Command: Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    /// Whether positional arguments name `.nlf` files.
    fn takes_files(&self) -> bool {
        true
    }
    /// Whether `--sample` may sweep this command over a parameter.
    fn sweepable(&self) -> bool {
        false
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome>;
}

pub static REGISTRY: &[&dyn Command] = &[
    &CheckJacobi,
    &Series,
    &JSeries,
    &Nijenhuis,
    &Classify,
    &Betti,
    &CohomologyCmd,
    &Cup,
    &Symplectic,
    &Metric,
    &GauduchonConstant,
    &Catalog,
    &Canonicalize,
    &Iso,
    &Morphism,
    &Lemma36,
];

pub fn lookup(name: &str) -> Option<&'static dyn Command> {
    REGISTRY.iter().copied().find(|c| c.name() == name)
}

pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.name()).collect()
}

fn structure(doc: &Document) -> CliResult<AlmostComplexStructure> {
    doc.structure()?.ok_or_else(|| CliError::usage("input declares no J or Jv lines"))
}

fn metric_of(doc: &Document) -> CliResult<HermitianForm> {
    doc.metric()?.ok_or_else(|| CliError::usage("--form file declares no F or h lines"))
}

fn rational_point(asg: &Assignment, flag: &str) -> CliResult<(Rational, Rational)> {
    match (asg.get(Param::A), asg.get(Param::B)) {
        (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
        _ => Err(CliError::usage(format!("{flag} must bind both a and b"))),
    }
}

fn point_value(a: &Rational, b: &Rational) -> Value {
    json!({ "a": a.to_string(), "b": b.to_string() })
}

fn checks(list: &[nilcx::cxstruct::Check]) -> Value {
    Value::Array(list.iter().map(|c| json!({ "name": c.name, "pass": c.pass })).collect())
}

fn vector(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar).collect())
}

fn frame_label(frame: &Frame) -> String {
    if frame.is_complex() {
        format!("complex {}", frame.rank())
    } else {
        format!("real {}", frame.len())
    }
}

struct CheckJacobi;

impl Command for CheckJacobi {
    fn name(&self) -> &'static str {
        "check-jacobi"
    }
    fn about(&self) -> &'static str {
        "d^2 = 0 on every generator"
    }
    fn sweepable(&self) -> bool {
        true
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let g = inv.document()?.presentation_unchecked()?;
        let frame = g.frame().clone();
        let nonzero: Vec<_> = g.differential().d_squared_residual().into_iter().filter(|(_, f)| !f.is_zero()).collect();
        let result = json!({
            "frame": frame_label(&frame),
            "dimension": g.dim(),
            "symbolic": !g.is_constant(),
            "nonzero_residuals": nonzero.len(),
        });
        let mut out = Outcome::new(nonzero.is_empty(), result);
        if let Some((k, f)) = nonzero.first() {
            out = out.witness(labeled_form(&format!("d(d {})", frame.generator_name(*k)), f));
        }
        Ok(out)
    }
}

struct Series;

impl Command for Series {
    fn name(&self) -> &'static str {
        "series"
    }
    fn about(&self) -> &'static str {
        "ascending and descending central series dimensions"
    }
    fn sweepable(&self) -> bool {
        true
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let g = inv.constant_presentation()?;
        let asc = ascending_series(&g)?;
        let desc = descending_series(&g)?;
        let result = json!({
            "ascending": asc.dims,
            "descending": desc.dims,
            "nilpotent": asc.step.is_some(),
            "step": asc.step,
        });
        Ok(Outcome::new(asc.step.is_some(), result))
    }
}

struct JSeries;

impl Command for JSeries {
    fn name(&self) -> &'static str {
        "j-series"
    }
    fn about(&self) -> &'static str {
        "J-compatible ascending series and the nilpotency type of J"
    }
    fn sweepable(&self) -> bool {
        true
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let g = inv.constant_presentation()?;
        let j = structure(&inv.document()?)?;
        let s = j_series_classify(&g, &j)?;
        let invariants = j_series_invariants(&g, &j, &s)?;
        let result = json!({ "dims": s.dims, "type": s.verdict.label(), "invariants": invariants });
        Ok(Outcome::new(invariants, result))
    }
}

struct Nijenhuis;

impl Command for Nijenhuis {
    fn name(&self) -> &'static str {
        "nijenhuis"
    }
    fn about(&self) -> &'static str {
        "Nijenhuis tensor of J on all basis pairs"
    }
    fn sweepable(&self) -> bool {
        true
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let doc = inv.document()?;
        let g = doc.presentation()?;
        let j = structure(&doc)?;
        let n = nijenhuis(&g, &j)?;
        let nonzero: Vec<_> = n.iter().filter(|(_, v)| v.iter().any(|s| !s.is_zero())).collect();
        let result =
            json!({ "pairs_checked": n.len(), "nonzero_pairs": nonzero.len(), "integrable": nonzero.is_empty() });
        let mut out = Outcome::new(nonzero.is_empty(), result);
        if let Some(((a, b), v)) = nonzero.first() {
            out = out.witness(json!({ "pair": [a + 1, b + 1], "value": vector(v) }));
        }
        Ok(out)
    }
}

struct Classify;

impl Command for Classify {
    fn name(&self) -> &'static str {
        "classify"
    }
    fn about(&self) -> &'static str {
        "structural constraints for algebras with a strongly non-nilpotent J"
    }
    fn sweepable(&self) -> bool {
        true
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let g = inv.constant_presentation()?;
        let j = structure(&inv.document()?)?;
        let asc = ascending_series(&g)?;
        let s = j_series_classify(&g, &j)?;
        let report = snn_structure_assert(g.dim(), &asc.dims, s.verdict)?;
        let result = json!({
            "dimension": g.dim(),
            "ascending": asc.dims,
            "j_series": s.dims,
            "type": s.verdict.label(),
            "checks": checks(&report.checks),
        });
        Ok(Outcome::new(report.pass(), result))
    }
}

struct Betti;

impl Command for Betti {
    fn name(&self) -> &'static str {
        "betti"
    }
    fn about(&self) -> &'static str {
        "Betti numbers b_1..b_max"
    }
    fn sweepable(&self) -> bool {
        true
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let g = inv.constant_presentation()?;
        let max = inv.max.unwrap_or(g.dim()).min(g.dim());
        let b = Cohomology::new(&g)?.betti(max);
        Ok(Outcome::new(true, json!(b[1..].to_vec())))
    }
}

struct CohomologyCmd;

impl Command for CohomologyCmd {
    fn name(&self) -> &'static str {
        "cohomology"
    }
    fn about(&self) -> &'static str {
        "representatives of H^k (--k, or every degree up to --max)"
    }
    fn sweepable(&self) -> bool {
        true
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let g = inv.constant_presentation()?;
        let h = Cohomology::new(&g)?;
        let degrees: Vec<usize> = match inv.k {
            Some(k) if k > g.dim() => {
                return Err(CliError::usage(format!("--k {k} exceeds the dimension {}", g.dim())))
            }
            Some(k) => vec![k],
            None => (0..=inv.max.unwrap_or(g.dim()).min(g.dim())).collect(),
        };
        let spaces: Vec<Value> = degrees
            .into_iter()
            .map(|k| {
                let s = h.representatives(k);
                let reps: Vec<String> = s.representatives.iter().map(|f| f.to_dsl()).collect();
                json!({ "degree": k, "dim": s.dim, "representatives": reps })
            })
            .collect();
        Ok(Outcome::new(true, Value::Array(spaces)))
    }
}

struct Cup;

impl Command for Cup {
    fn name(&self) -> &'static str {
        "cup"
    }
    fn about(&self) -> &'static str {
        "cup product of the closed forms given by --class"
    }
    fn sweepable(&self) -> bool {
        true
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        if inv.classes.is_empty() {
            return Err(CliError::usage("at least one --class EXPR is required"));
        }
        let doc = inv.document()?;
        let g = inv.constant_presentation()?;
        let forms = inv
            .classes
            .iter()
            .map(|c| parse_form(g.frame(), &doc.params, c).map_err(|e| dsl_error("--class", e)))
            .collect::<CliResult<Vec<_>>>()?;
        let class = Cohomology::new(&g)?.cup(&forms)?;
        let coords: Vec<String> = class.coordinates.iter().map(ToString::to_string).collect();
        let result = json!({
            "degree": class.degree,
            "coordinates": coords,
            "zero": class.is_zero(),
            "representative": report::form(&class.representative),
        });
        Ok(Outcome::new(!class.is_zero(), result))
    }
}

struct Symplectic;

impl Command for Symplectic {
    fn name(&self) -> &'static str {
        "symplectic"
    }
    fn about(&self) -> &'static str {
        "obstruction to a symplectic form from the generic degree-2 class"
    }
    fn sweepable(&self) -> bool {
        true
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let g = inv.constant_presentation()?;
        let r = nilcx::cohomology::symplectic_obstruction(&g)?;
        let obstructed = r.verdict == SymplecticVerdict::NoSymplecticStructure;
        let result = json!({
            "verdict": if obstructed { "no symplectic structure" } else { "inconclusive" },
            "vanishing_power": r.vanishing_power,
            "checked_power": r.checked_power,
            "monomials_checked": r.monomials_checked,
            "lambda": r.lambda.as_ref().map(|l| l.iter().map(ToString::to_string).collect::<Vec<_>>()),
        });
        let mut out = Outcome::new(obstructed, result);
        if let Some(w) = &r.witness {
            out = out.witness(labeled_form("class", w));
        }
        if let Some(t) = &r.top_power {
            out = out.witness(labeled_form("top power", t));
        }
        Ok(out)
    }
}

struct Metric;

const DEFAULT_TESTS: &[&str] = &["balanced", "skt", "astheno_kahler", "strongly_gauduchon"];

fn witness_value(condition: &str, w: &Witness) -> Option<Value> {
    match w {
        Witness::None => None,
        Witness::Form { label, form } => {
            Some(json!({ "condition": condition, "label": label, "form": report::form(form) }))
        }
        Witness::Rank { rank_system, rank_augmented } => Some(json!({
            "condition": condition,
            "rank_system": rank_system,
            "rank_augmented": rank_augmented,
        })),
    }
}

impl Command for Metric {
    fn name(&self) -> &'static str {
        "metric"
    }
    fn about(&self) -> &'static str {
        "special-metric conditions (--test NAME, repeatable) for the metric in --form"
    }
    fn sweepable(&self) -> bool {
        true
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let g = inv.presentation()?;
        let f = metric_of(&inv.form_document()?)?;
        let names: Vec<&str> =
            if inv.tests.is_empty() { DEFAULT_TESTS.to_vec() } else { inv.tests.iter().map(String::as_str).collect() };
        let r = metric_report(&g, &f, &names)?;
        let mut conditions = serde_json::Map::new();
        let mut witnesses = Vec::new();
        for (name, v) in &r.conditions {
            conditions.insert(name.clone(), Value::Bool(v.holds));
            witnesses.extend(witness_value(name, &v.witness));
        }
        let holds = r.conditions.iter().all(|(_, v)| v.holds);
        let minors: Vec<Value> = r.positivity.minors.iter().map(scalar).collect();
        let result = json!({
            "conditions": conditions,
            "positivity": { "verdict": r.positivity.verdict.label(), "minors": minors },
        });
        Ok(Outcome { witnesses, ..Outcome::new(holds, result) })
    }
}

struct GauduchonConstant;

impl Command for GauduchonConstant {
    fn name(&self) -> &'static str {
        "gauduchon-constant"
    }
    fn about(&self) -> &'static str {
        "the constant c with d d^c F^k ^ F^(n-k-1) = c F^n; holds when c = 0"
    }
    fn sweepable(&self) -> bool {
        true
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let k = inv.k.ok_or_else(|| CliError::usage("--k is required"))?;
        let g = inv.presentation()?;
        let f = metric_of(&inv.form_document()?)?;
        let c = gauduchon_constant(&g, &f, k)?;
        let result = json!({
            "k": k,
            "constant": scalar(&c),
            "positivity": positivity_report(&f).verdict.label(),
        });
        Ok(Outcome::new(c.is_zero(), result))
    }
}

struct Catalog;

fn object_document(object: &Object) -> Document {
    match object {
        Object::Presentation(g) => Document::from_presentation(g),
        Object::Structure(j) => Document::from_structure(j),
        Object::Metric(f) => Document::from_metric(f),
        Object::BasisChange(m) => Document::from_map(&Frame::real(m.rows()), m),
        Object::Realization(r) => Document::from_realization(r),
    }
}

impl Command for Catalog {
    fn name(&self) -> &'static str {
        "catalog"
    }
    fn about(&self) -> &'static str {
        "list the built-in objects, or export NAME as a document"
    }
    fn takes_files(&self) -> bool {
        false
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let name = match inv.positional.as_slice() {
            [] => {
                let list: Vec<Value> =
                    Family::ALL.iter().map(|f| json!({ "name": f.name(), "label": f.label() })).collect();
                return Ok(Outcome::new(true, Value::Array(list)));
            }
            [name] => name,
            _ => return Err(CliError::usage("catalog takes at most one NAME")),
        };
        let family = Family::from_name(name)?;
        let coord = |p: Param, fallback: Scalar| inv.set.get(p).cloned().map_or(fallback, Scalar::from_rational);
        let point = FamilyPoint::new(coord(Param::A, Scalar::a()), coord(Param::B, Scalar::b()))?;
        let entry = catalog::make(family, &point)?;
        let text = object_document(&entry.object).named(family.name()).export();
        let result = json!({
            "name": family.name(),
            "label": entry.label,
            "point": { "a": scalar(&point.a), "b": scalar(&point.b) },
            "document": text,
        });
        Ok(Outcome::new(true, result))
    }
}

struct Canonicalize;

fn certificate(m: &Matrix<Scalar>, rho: &Rational) -> Value {
    json!({ "matrix": matrix(m), "rho": rho.to_string() })
}

impl Command for Canonicalize {
    fn name(&self) -> &'static str {
        "canonicalize"
    }
    fn about(&self) -> &'static str {
        "canonical representative of g_{a,b} (--set a=.. b=..) with an isomorphism onto it"
    }
    fn takes_files(&self) -> bool {
        false
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        if !inv.positional.is_empty() {
            return Err(CliError::usage("canonicalize takes no positional arguments"));
        }
        let (a, b) = rational_point(&inv.set, "--set")?;
        let (rep, cert) = canonicalize(&a, &b)?;
        let verified = cert.verify()?;
        let result = json!({ "source": point_value(&a, &b), "representative": rep.to_string() });
        Ok(Outcome::new(verified, result).witness(certificate(&cert.matrix, &cert.rho)))
    }
}

struct Iso;

impl Command for Iso {
    fn name(&self) -> &'static str {
        "iso"
    }
    fn about(&self) -> &'static str {
        "decide g_{a,b} = g_{a',b'} for --src-set and --dst-set points"
    }
    fn takes_files(&self) -> bool {
        false
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        if !inv.positional.is_empty() {
            return Err(CliError::usage("iso takes no positional arguments"));
        }
        let (a, b) = rational_point(&inv.source_point(), "--src-set")?;
        let (a2, b2) = rational_point(&inv.target_point(), "--dst-set")?;
        let v = family_iso_verdict(&a, &b, &a2, &b2)?;
        let result = json!({
            "source": point_value(&a, &b),
            "target": point_value(&a2, &b2),
            "source_representative": v.source.to_string(),
            "target_representative": v.target.to_string(),
            "isomorphic": v.isomorphic,
        });
        let witness = match &v.justification {
            IsoJustification::Witness(c) => certificate(&c.matrix, &c.rho),
            IsoJustification::NoScale(obs) => Value::Array(
                obs.iter().map(|o| json!({ "sign": o.sign, "equations": o.equations, "reason": o.reason })).collect(),
            ),
        };
        Ok(Outcome::new(v.isomorphic, result).witness(witness))
    }
}

struct Morphism;

fn map_of(inv: &Invocation) -> CliResult<Option<Matrix<Scalar>>> {
    match inv.inputs.as_slice() {
        [] => Ok(None),
        [m] => Ok(Some(
            m.document
                .specialize(&inv.set)
                .map_matrix()?
                .ok_or_else(|| CliError::usage("MAP declares no map lines"))?,
        )),
        _ => Err(CliError::usage("expected at most one MAP file")),
    }
}

fn endpoint(inv: &Invocation, src: bool) -> CliResult<Presentation> {
    let (input, point, flag) =
        if src { (&inv.src, inv.source_point(), "--src") } else { (&inv.dst, inv.target_point(), "--dst") };
    let input = input.as_ref().ok_or_else(|| CliError::usage(format!("{flag} FILE is required")))?;
    Ok(input.document.specialize(&point).presentation()?)
}

impl Command for Morphism {
    fn name(&self) -> &'static str {
        "morphism"
    }
    fn about(&self) -> &'static str {
        "check that MAP is a homomorphism --src -> --dst"
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let lambda = map_of(inv)?.ok_or_else(|| CliError::usage("expected a MAP file"))?;
        let src = endpoint(inv, true)?;
        let dst = endpoint(inv, false)?;
        let residual = morphism_residual(&lambda, &src, &dst)?;
        let bad: Vec<_> = residual.iter().filter(|(_, f)| !f.is_zero()).collect();
        let homomorphism = bad.is_empty();
        let isomorphism = match is_isomorphism(&lambda, &src, &dst) {
            Ok(v) => Value::Bool(v),
            Err(nilcx::Error::SymbolicParameters) => Value::Null,
            Err(e) => return Err(e.into()),
        };
        let result = json!({
            "homomorphism": homomorphism,
            "isomorphism": isomorphism,
            "det": scalar(&lambda.det()),
        });
        let mut out = Outcome::new(homomorphism, result);
        if let Some((i, f)) = bad.first() {
            out = out.witness(labeled_form(&format!("residual {}", dst.frame().generator_name(*i)), f));
        }
        Ok(out)
    }
}

struct Lemma36;

impl Command for Lemma36 {
    fn name(&self) -> &'static str {
        "lemma36"
    }
    fn about(&self) -> &'static str {
        "diagonal and parameter relations of an isomorphism in the normalized basis"
    }
    fn run(&self, inv: &Invocation) -> CliResult<Outcome> {
        let (a, b) = rational_point(&inv.source_point(), "--src-set")?;
        let (a2, b2) = rational_point(&inv.target_point(), "--dst-set")?;
        let src = FamilyPoint::rational(a.clone(), b.clone());
        let dst = FamilyPoint::rational(a2.clone(), b2.clone());
        let lambda_e = match map_of(inv)? {
            Some(m) => m,
            None => match family_iso_verdict(&a, &b, &a2, &b2)?.justification {
                IsoJustification::Witness(c) => c.matrix,
                IsoJustification::NoScale(_) => {
                    let result = json!({
                        "source": point_value(&a, &b),
                        "target": point_value(&a2, &b2),
                        "isomorphic": false,
                    });
                    return Ok(Outcome::new(false, result));
                }
            },
        };
        let lambda_v = to_v_basis(&lambda_e, &src, &dst)?;
        let r = lemma36_relation_check(&lambda_v, &src, &dst)?;
        let result = json!({
            "source": point_value(&a, &b),
            "target": point_value(&a2, &b2),
            "checks": checks(&r.checks),
            "rho": scalar(&r.rho),
            "sign": r.sign,
        });
        Ok(Outcome::new(r.pass(), result).witness(json!({ "matrix_v": matrix(&lambda_v) })))
    }
}

/// Runs `cmd` once per sampled value of `p`; holds iff every run holds.
pub fn sweep(cmd: &dyn Command, inv: &Invocation, p: Param, values: &[Rational]) -> CliResult<Outcome> {
    let mut runs = Vec::with_capacity(values.len());
    let mut witnesses = Vec::new();
    let mut all = true;
    for v in values {
        let out = cmd.run(&inv.with_value(p, v))?;
        all &= out.status == report::Status::Holds;
        let at = json!({ p.name(): v.to_string() });
        runs.push(json!({ "at": at, "status": out.status.label(), "result": out.result }));
        witnesses.extend(out.witnesses.into_iter().map(|w| json!({ "at": at, "witness": w })));
    }
    Ok(Outcome { witnesses, ..Outcome::new(all, Value::Array(runs)) })
}
