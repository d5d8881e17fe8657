//! Hermitian metrics on complex-frame presentations and the special metric
//! conditions, each available by name from a registry.

use crate::error::{Error, Result};
use crate::exterior::{blades_of_degree, same_frame, Blade, Form, FrameRef};
use crate::liealg::Presentation;
use crate::linalg::Matrix;
use crate::scalars::{Assignment, Scalar, Tower};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// `F = i Σ h_{jk̄} ω^j ∧ ω̄^k` with `h` Hermitian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianForm {
    frame: FrameRef,
    h: Matrix<Scalar>,
}

fn is_hermitian(h: &Matrix<Scalar>) -> bool {
    h.is_square() && *h == h.transpose().conjugate()
}

impl HermitianForm {
    /// `h = factor · displayed`.
    pub fn from_matrix(frame: &FrameRef, displayed: &Matrix<Scalar>, factor: &Scalar) -> Result<Self> {
        if !frame.is_complex() {
            return Err(Error::RealFrame);
        }
        let n = frame.rank();
        if displayed.rows() != n || displayed.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: displayed.rows() });
        }
        let h = displayed.map(|s| s * factor);
        if !is_hermitian(&h) {
            return Err(Error::NotHermitian);
        }
        Ok(HermitianForm { frame: frame.clone(), h })
    }

    /// Reads `h_{jk̄}` off a real (1,1)-form.
    pub fn from_form(f: &Form) -> Result<Self> {
        let frame = f.frame().clone();
        if !frame.is_complex() {
            return Err(Error::RealFrame);
        }
        if f.degree() != 2 {
            return Err(Error::NotOneOne);
        }
        let n = frame.rank();
        let mut h = Matrix::zeros(n, n);
        let minus_i = -Scalar::i();
        for (b, c) in f.terms() {
            let idx: Vec<usize> = b.indices().collect();
            let (j, k) = (idx[0], idx[1]);
            if !(j < n && k >= n) {
                return Err(Error::NotOneOne);
            }
            h[(j, k - n)] = &minus_i * c;
        }
        if !is_hermitian(&h) {
            return Err(Error::NotHermitian);
        }
        Ok(HermitianForm { frame, h })
    }

    pub fn frame(&self) -> &FrameRef {
        &self.frame
    }

    pub fn rank(&self) -> usize {
        self.frame.rank()
    }

    pub fn matrix(&self) -> &Matrix<Scalar> {
        &self.h
    }

    pub fn form(&self) -> Form {
        let n = self.rank();
        let i = Scalar::i();
        let mut f = Form::zero(&self.frame, 2);
        for j in 0..n {
            for k in 0..n {
                let c = &self.h[(j, k)];
                if !c.is_zero() {
                    f = &f + &Form::from_indices(&self.frame, &[j, n + k], &i * c);
                }
            }
        }
        f
    }

    pub fn scale(&self, t: &Scalar) -> Result<Self> {
        if !t.is_real() {
            return Err(Error::NotHermitian);
        }
        Ok(HermitianForm { frame: self.frame.clone(), h: self.h.map(|s| s * t) })
    }

    pub fn specialize(&self, asg: &Assignment) -> Self {
        HermitianForm { frame: self.frame.clone(), h: self.h.map(|s| s.specialize(asg)) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    PositiveDefinite,
    PositiveForAllPositiveParameters,
    NotPositiveDefinite,
    RequiresSpecialization,
}

impl Positivity {
    pub fn label(self) -> &'static str {
        match self {
            Positivity::PositiveDefinite => "positive-definite",
            Positivity::PositiveForAllPositiveParameters => "positive-for-all-positive-parameters",
            Positivity::NotPositiveDefinite => "not-positive-definite",
            Positivity::RequiresSpecialization => "requires-specialization",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub minors: Vec<Scalar>,
    pub verdict: Positivity,
}

fn constant_sign(s: &Scalar) -> Option<Ordering> {
    s.as_constant().and_then(|t| t.real_sign())
}

/// Sylvester's criterion on the leading principal minors of `h`.
pub fn positivity_report(f: &HermitianForm) -> PositivityReport {
    let minors = f.h.leading_minors();
    let verdict = if minors.iter().all(|m| constant_sign(m) == Some(Ordering::Greater)) {
        Positivity::PositiveDefinite
    } else if minors.iter().any(|m| m.is_constant() && constant_sign(m) != Some(Ordering::Greater)) {
        Positivity::NotPositiveDefinite
    } else if minors.iter().all(|m| !m.is_zero() && m.has_nonnegative_rational_coeffs()) {
        Positivity::PositiveForAllPositiveParameters
    } else {
        Positivity::RequiresSpecialization
    };
    PositivityReport { minors, verdict }
}

fn check_frames(g: &Presentation, f: &HermitianForm) -> Result<usize> {
    if !g.frame().is_complex() {
        return Err(Error::RealFrame);
    }
    if !same_frame(g.frame(), f.frame()) {
        return Err(Error::FrameMismatch);
    }
    Ok(g.frame().rank())
}

fn ddbar(g: &Presentation, x: &Form) -> Result<Form> {
    let d = g.differential();
    d.del(&d.delbar(x)?)
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k < 1 || k + 1 > n {
        return Err(Error::BadK { k, max: n.saturating_sub(1) });
    }
    Ok(())
}

/// `∂∂̄F^k ∧ F^{n-k-1}`.
pub fn gauduchon_form(g: &Presentation, f: &HermitianForm, k: usize) -> Result<Form> {
    let n = check_frames(g, f)?;
    check_k(k, n)?;
    let ff = f.form().reframe(g.frame());
    ddbar(g, &ff.wedge_pow(k))?.wedge(&ff.wedge_pow(n - k - 1))
}

/// The constant `c` with `(i/2) ∂∂̄F^k ∧ F^{n-k-1} = c F^n`; zero exactly for k-th Gauduchon metrics.
pub fn gauduchon_constant(g: &Presentation, f: &HermitianForm, k: usize) -> Result<Scalar> {
    let n = check_frames(g, f)?;
    check_k(k, n)?;
    let ff = f.form().reframe(g.frame());
    let volume = ff.wedge_pow(n).top_coefficient();
    if volume.is_zero() {
        return Err(Error::DegenerateMetric);
    }
    let lhs = gauduchon_form(g, f, k)?.scale(&(&Scalar::i() * &Scalar::frac(1, 2)));
    let num = lhs.top_coefficient();
    if num.is_zero() {
        return Ok(Scalar::zero());
    }
    if !volume.is_constant() {
        return Err(Error::SymbolicParameters);
    }
    Ok(&num * &volume.invert()?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    None,
    /// A nonzero form obstructing the condition, or certifying it (a primitive `γ`).
    Form {
        label: String,
        form: Form,
    },
    /// The linear system for `γ` is inconsistent.
    Rank {
        rank_system: usize,
        rank_augmented: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionVerdict {
    pub holds: bool,
    pub witness: Witness,
}

impl ConditionVerdict {
    fn vanishing(label: &str, form: Form) -> Self {
        if form.is_zero() {
            ConditionVerdict { holds: true, witness: Witness::None }
        } else {
            ConditionVerdict { holds: false, witness: Witness::Form { label: label.into(), form } }
        }
    }
}

/// A special-metric condition on a fundamental form.
pub trait MetricCondition: Send + Sync {
    fn name(&self) -> String;
    fn check(&self, g: &Presentation, f: &HermitianForm) -> Result<ConditionVerdict>;
}

pub struct Gauduchon(pub usize);

impl MetricCondition for Gauduchon {
    fn name(&self) -> String {
        format!("gauduchon:{}", self.0)
    }

    fn check(&self, g: &Presentation, f: &HermitianForm) -> Result<ConditionVerdict> {
        let form = gauduchon_form(g, f, self.0)?;
        Ok(ConditionVerdict::vanishing("ddbar(F^k)^F^(n-k-1)", form))
    }
}

pub struct Balanced;

impl MetricCondition for Balanced {
    fn name(&self) -> String {
        "balanced".into()
    }

    fn check(&self, g: &Presentation, f: &HermitianForm) -> Result<ConditionVerdict> {
        let n = check_frames(g, f)?;
        let ff = f.form().reframe(g.frame());
        let form = g.differential().differentiate(&ff.wedge_pow(n - 1))?;
        Ok(ConditionVerdict::vanishing("d(F^(n-1))", form))
    }
}

pub struct Skt;

impl MetricCondition for Skt {
    fn name(&self) -> String {
        "skt".into()
    }

    fn check(&self, g: &Presentation, f: &HermitianForm) -> Result<ConditionVerdict> {
        check_frames(g, f)?;
        let form = ddbar(g, &f.form().reframe(g.frame()))?;
        Ok(ConditionVerdict::vanishing("ddbar(F)", form))
    }
}

pub struct AsthenoKahler;

impl MetricCondition for AsthenoKahler {
    fn name(&self) -> String {
        "astheno_kahler".into()
    }

    fn check(&self, g: &Presentation, f: &HermitianForm) -> Result<ConditionVerdict> {
        let n = check_frames(g, f)?;
        if n < 2 {
            return Err(Error::BadK { k: 0, max: n.saturating_sub(1) });
        }
        let form = ddbar(g, &f.form().reframe(g.frame()).wedge_pow(n - 2))?;
        Ok(ConditionVerdict::vanishing("ddbar(F^(n-2))", form))
    }
}

pub struct StronglyGauduchon;

impl MetricCondition for StronglyGauduchon {
    fn name(&self) -> String {
        "strongly_gauduchon".into()
    }

    /// Solves `∂F^{n-1} = ∂̄γ` over the invariant `(n, n-2)`-forms.
    fn check(&self, g: &Presentation, f: &HermitianForm) -> Result<ConditionVerdict> {
        let n = check_frames(g, f)?;
        let ff = f.form().reframe(g.frame());
        let d = g.differential();
        let target = d.del(&ff.wedge_pow(n - 1))?;
        if target.is_zero() {
            return Ok(ConditionVerdict {
                holds: true,
                witness: Witness::Form { label: "gamma".into(), form: Form::zero(g.frame(), 2 * n - 2) },
            });
        }
        if !g.is_constant() || !target.is_constant() {
            return Err(Error::SymbolicParameters);
        }
        let frame = g.frame();
        let holo = Blade((1u64 << n) - 1);
        let shift = |b: Blade| Blade(b.0 << n);
        let sources: Vec<Blade> = if n >= 2 {
            blades_of_degree(n, n - 2).into_iter().map(|b| holo.union(shift(b))).collect()
        } else {
            Vec::new()
        };
        let targets: Vec<Blade> = blades_of_degree(n, n - 1).into_iter().map(|b| holo.union(shift(b))).collect();
        let index: BTreeMap<Blade, usize> = targets.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let mut cols = Vec::with_capacity(sources.len());
        for b in &sources {
            let img = d.delbar(&Form::monomial(frame, *b, Scalar::one()))?;
            cols.push(img.to_vector(&index, targets.len()).ok_or(Error::SymbolicParameters)?);
        }
        let rhs = target.to_vector(&index, targets.len()).ok_or(Error::SymbolicParameters)?;
        let a = if cols.is_empty() { Matrix::zeros(targets.len(), 0) } else { Matrix::from_cols(targets.len(), &cols) };
        match a.solve_tower(&rhs) {
            Some(x) => {
                let gamma = Form::from_vector(frame, 2 * n - 2, &sources, &x);
                Ok(ConditionVerdict { holds: true, witness: Witness::Form { label: "gamma".into(), form: gamma } })
            }
            None => {
                let mut aug = cols.clone();
                aug.push(rhs);
                Ok(ConditionVerdict {
                    holds: false,
                    witness: Witness::Rank {
                        rank_system: a.rank(),
                        rank_augmented: Matrix::from_cols(targets.len(), &aug).rank(),
                    },
                })
            }
        }
    }
}

/// Names accepted by [`condition`].
pub const CONDITION_NAMES: &[&str] = &["gauduchon:<k>", "balanced", "skt", "astheno_kahler", "strongly_gauduchon"];

/// Looks up a condition by name; `gauduchon:k` carries its `k`.
pub fn condition(name: &str) -> Result<Box<dyn MetricCondition>> {
    if let Some(k) = name.strip_prefix("gauduchon:") {
        let k: usize = k.parse().map_err(|_| Error::UnknownName(name.into()))?;
        return Ok(Box::new(Gauduchon(k)));
    }
    Ok(match name {
        "balanced" => Box::new(Balanced),
        "skt" => Box::new(Skt),
        "astheno_kahler" => Box::new(AsthenoKahler),
        "strongly_gauduchon" => Box::new(StronglyGauduchon),
        _ => return Err(Error::UnknownName(name.into())),
    })
}

pub fn condition_check(g: &Presentation, f: &HermitianForm, name: &str) -> Result<ConditionVerdict> {
    condition(name)?.check(g, f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricReport {
    pub positivity: PositivityReport,
    pub conditions: Vec<(String, ConditionVerdict)>,
}

pub fn metric_report(g: &Presentation, f: &HermitianForm, names: &[&str]) -> Result<MetricReport> {
    let mut conditions = Vec::with_capacity(names.len());
    for name in names {
        let c = condition(name)?;
        conditions.push((c.name(), c.check(g, f)?));
    }
    Ok(MetricReport { positivity: positivity_report(f), conditions })
}

/// The constant part of `t`, if `t` is a positive rational.
pub fn positive_rational(t: &Scalar) -> bool {
    t.as_constant().as_ref().and_then(Tower::as_rational).is_some_and(|r| r > &Default::default())
}
