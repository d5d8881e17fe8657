//! The `g_{a,b}` family: structure equations in the complex, real and
//! normalized coframes, its complex structure, three invariant metrics, and
//! the isomorphism classification of the family.

use crate::cxstruct::{is_integrable, AlmostComplexStructure, Check, Realization};
use crate::error::{Error, Result};
use crate::exterior::{Differential, Form, Frame, FrameRef};
use crate::hermitian::HermitianForm;
use crate::liealg::{compose, is_isomorphism, Presentation};
use crate::linalg::Matrix;
use crate::scalars::{Rational, Scalar, Tower};
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A parameter point `(a, b)`; either coordinate may stay symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyPoint {
    pub a: Scalar,
    pub b: Scalar,
}

impl FamilyPoint {
    pub fn symbolic() -> Self {
        FamilyPoint { a: Scalar::a(), b: Scalar::b() }
    }

    pub fn new(a: Scalar, b: Scalar) -> Result<Self> {
        let real = |s: &Scalar, name: &str| {
            if s.is_real() && s.params().iter().all(|p| p.name() == name) {
                Ok(())
            } else {
                Err(Error::BadPoint(format!("{name} = {s}")))
            }
        };
        real(&a, "a")?;
        real(&b, "b")?;
        Ok(FamilyPoint { a, b })
    }

    pub fn rational(a: Rational, b: Rational) -> Self {
        FamilyPoint { a: Scalar::from_rational(a), b: Scalar::from_rational(b) }
    }

    pub fn ints(a: i64, b: i64) -> Self {
        FamilyPoint { a: Scalar::from_int(a), b: Scalar::from_int(b) }
    }

    /// Inverts `α = 4a/√3`, `β = 2b/3`.
    pub fn from_alpha_beta(alpha: &Scalar, beta: &Scalar) -> Result<Self> {
        let a = alpha.scale(&(Tower::sqrt3() * Tower::frac(1, 4)));
        let b = beta.scale(&Tower::frac(3, 2));
        FamilyPoint::new(a, b)
    }

    pub fn alpha(&self) -> Scalar {
        self.a.scale(&(Tower::sqrt3() * Tower::frac(4, 3)))
    }

    pub fn beta(&self) -> Scalar {
        self.b.scale(&Tower::frac(2, 3))
    }

    pub fn rational_coords(&self) -> Option<(Rational, Rational)> {
        let r = |s: &Scalar| s.as_constant().and_then(|t| t.as_rational().cloned());
        Some((r(&self.a)?, r(&self.b)?))
    }
}

impl fmt::Display for FamilyPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a, b) = ({}, {})", self.a, self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    GAbReal,
    GAbComplex,
    MAlphaBeta,
    JAb,
    MetricF,
    MetricF0,
    MetricFa,
    EToVChange,
    OmegaToERealization,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::GAbReal,
        Family::GAbComplex,
        Family::MAlphaBeta,
        Family::JAb,
        Family::MetricF,
        Family::MetricF0,
        Family::MetricFa,
        Family::EToVChange,
        Family::OmegaToERealization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::GAbReal => "g_ab_real",
            Family::GAbComplex => "g_ab_complex",
            Family::MAlphaBeta => "m_alphabeta",
            Family::JAb => "J_ab",
            Family::MetricF => "metric_F",
            Family::MetricF0 => "metric_F0",
            Family::MetricFa => "metric_Fa",
            Family::EToVChange => "e_to_v_change",
            Family::OmegaToERealization => "omega_to_e_realization",
        }
    }

    pub fn from_name(s: &str) -> Result<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::UnknownName(s.into()))
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::GAbReal => "real structure equations of g_{a,b} in the basis e^1..e^8",
            Family::GAbComplex => "complex structure equations of (g_{a,b}, J_{a,b}) in the basis w^1..w^4",
            Family::MAlphaBeta => "normalized structure equations of m_{alpha,beta} in the basis v^1..v^8",
            Family::JAb => "complex structure J_{a,b}: J e^1 = e^2, J e^3 = e^8/2, J e^4 = e^5, J e^6 = e^7",
            Family::MetricF => "k-th Gauduchon metric F on X_a",
            Family::MetricF0 => "balanced metric F_0 on X_0, given as 2F_0",
            Family::MetricFa => "balanced metric F_a on X_a (a > 0), given as 2F_a",
            Family::EToVChange => "normalizing coframe change v^i = sum_j C_ij e^j",
            Family::OmegaToERealization => "real coframe e^i written in w, conj(w)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Presentation(Presentation),
    Structure(AlmostComplexStructure),
    Metric(HermitianForm),
    BasisChange(Matrix<Scalar>),
    Realization(Realization),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub family: Family,
    pub label: &'static str,
    pub point: FamilyPoint,
    pub object: Object,
}

fn mono(fr: &FrameRef, c: Scalar, idx: &[usize]) -> Form {
    Form::from_indices(fr, idx, c)
}

fn sum(fr: &FrameRef, degree: usize, terms: Vec<Form>) -> Form {
    terms.iter().fold(Form::zero(fr, degree), |acc, t| &acc + t)
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

const W1: usize = 0;
const W2: usize = 1;
const W3: usize = 2;
const W4: usize = 3;
const CW1: usize = 4;
const CW2: usize = 5;
const CW3: usize = 6;
const CW4: usize = 7;

/// `dω` of `(g_{a,b}, J_{a,b})` on the frame `w1..w4, cw1..cw4`.
pub fn g_ab_complex(p: &FamilyPoint) -> Result<Presentation> {
    let fr = Frame::complex(4);
    let i = Scalar::i();
    let ib = &i * &p.b;
    let dw1 = Form::zero(&fr, 2);
    let dw2 = sum(&fr, 2, vec![mono(&fr, int(-1), &[W1, W4]), mono(&fr, int(1), &[W1, CW4])]);
    let dw3 = sum(
        &fr,
        2,
        vec![
            mono(&fr, p.a.clone(), &[W1, CW1]),
            mono(&fr, -&i, &[W1, W2]),
            mono(&fr, i.clone(), &[W1, CW2]),
            mono(&fr, i.clone(), &[W2, CW1]),
            mono(&fr, i.clone(), &[W2, W4]),
            mono(&fr, -&i, &[W2, CW4]),
        ],
    );
    let dw4 = sum(
        &fr,
        2,
        vec![
            mono(&fr, ib.clone(), &[W1, CW2]),
            mono(&fr, ib, &[W2, CW1]),
            mono(&fr, int(1), &[W1, CW3]),
            mono(&fr, i, &[W2, CW2]),
            mono(&fr, int(-1), &[W3, CW1]),
        ],
    );
    Ok(Presentation::new(Differential::from_holomorphic(&fr, vec![dw1, dw2, dw3, dw4])?)?.named("g_ab_complex"))
}

/// `de` of `g_{a,b}` on `e1..e8`.
pub fn g_ab_real(p: &FamilyPoint) -> Result<Presentation> {
    let fr = Frame::real(8);
    let m = |c: Scalar, i: usize, j: usize| mono(&fr, c, &[i - 1, j - 1]);
    let two_a = &int(2) * &p.a;
    let m2b = &int(-2) * &p.b;
    let images = vec![
        Form::zero(&fr, 2),
        Form::zero(&fr, 2),
        Form::zero(&fr, 2),
        m(int(1), 1, 3),
        m(int(1), 2, 3),
        sum(&fr, 2, vec![m(int(3), 1, 4), m(int(1), 2, 5), m(int(-2), 3, 5)]),
        sum(&fr, 2, vec![m(two_a, 1, 2), m(int(1), 1, 5), m(int(1), 2, 4), m(int(2), 3, 4)]),
        sum(&fr, 2, vec![m(m2b.clone(), 1, 4), m(int(1), 1, 6), m(m2b, 2, 5), m(int(1), 2, 7), m(int(-2), 4, 5)]),
    ];
    Ok(Presentation::new(Differential::new(&fr, images)?)?.named("g_ab_real"))
}

/// `dv` of `m_{α,β}` with `α = 4a/√3`, `β = 2b/3`.
pub fn m_alphabeta(p: &FamilyPoint) -> Result<Presentation> {
    let fr = Frame::real(8);
    let m = |c: Scalar, i: usize, j: usize| mono(&fr, c, &[i - 1, j - 1]);
    let alpha = p.alpha();
    let beta = p.beta();
    let images = vec![
        Form::zero(&fr, 2),
        Form::zero(&fr, 2),
        Form::zero(&fr, 2),
        m(int(1), 1, 3),
        m(int(1), 2, 3),
        sum(&fr, 2, vec![m(int(1), 1, 4), m(int(1), 2, 5), m(int(-1), 3, 5)]),
        sum(&fr, 2, vec![m(alpha, 1, 2), m(int(1), 1, 5), m(int(1), 2, 4), m(int(1), 3, 4)]),
        sum(
            &fr,
            2,
            vec![m(int(1), 1, 6), m(&int(-2) * &beta, 2, 5), m(int(1), 2, 7), m(-beta, 3, 5), m(int(-1), 4, 5)],
        ),
    ];
    Ok(Presentation::new(Differential::new(&fr, images)?)?.named("m_alphabeta"))
}

fn unit(n: usize, k: usize, c: Scalar) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[k] = c;
    v
}

/// The dual images `J*e¹ = e²`, `J*e³ = ½e⁸`, `J*e⁴ = e⁵`, `J*e⁶ = e⁷`, completed by `J² = −Id`.
pub fn j_ab() -> AlmostComplexStructure {
    let e = |k: usize, c: Scalar| unit(8, k - 1, c);
    let pairs = [
        (e(1, int(1)), e(2, int(1))),
        (e(3, int(1)), e(8, Scalar::frac(1, 2))),
        (e(4, int(1)), e(5, int(1))),
        (e(6, int(1)), e(7, int(1))),
    ];
    AlmostComplexStructure::from_dual_images(8, &pairs).expect("the four pairs complete to a basis")
}

fn realization(rows: &[(usize, usize, Scalar)]) -> Realization {
    let mut m = Matrix::zeros(8, 8);
    for (row, col, c) in rows {
        m[(row - 1, *col)] = c.clone();
    }
    Realization::new(4, m).expect("the realization is real and invertible")
}

/// Rows write `e^1..e^8` in `ω^1..ω^4, ω̄^1..ω̄^4`:
/// `ω¹ = ½(−e¹ + ie²)`, `ω² = ½(e⁵ + ie⁴)`, `ω³ = ¼(−e⁶ + ie⁷)`, `ω⁴ = ¼(e⁸ + 2ie³)`.
pub fn omega_to_e() -> Realization {
    let i = Scalar::i();
    realization(&[
        (1, W1, int(-1)),
        (1, CW1, int(-1)),
        (2, W1, -&i),
        (2, CW1, i.clone()),
        (3, W4, -&i),
        (3, CW4, i.clone()),
        (4, W2, -&i),
        (4, CW2, i.clone()),
        (5, W2, int(1)),
        (5, CW2, int(1)),
        (6, W3, int(-2)),
        (6, CW3, int(-2)),
        (7, W3, &int(-2) * &i),
        (7, CW3, &int(2) * &i),
        (8, W4, int(2)),
        (8, CW4, int(2)),
    ])
}

/// `ω² = ½(e⁴ − ie⁵)`, `ω⁴ = ¼(−2e³ + ie⁸)`: the same `J`, with `ω²` and `ω⁴`
/// rotated by `−i` and `i` against [`omega_to_e`].
pub fn omega_to_e_unrotated() -> Realization {
    let i = Scalar::i();
    realization(&[
        (1, W1, int(-1)),
        (1, CW1, int(-1)),
        (2, W1, -&i),
        (2, CW1, i.clone()),
        (3, W4, int(-1)),
        (3, CW4, int(-1)),
        (4, W2, int(1)),
        (4, CW2, int(1)),
        (5, W2, i.clone()),
        (5, CW2, -&i),
        (6, W3, int(-2)),
        (6, CW3, int(-2)),
        (7, W3, &int(-2) * &i),
        (7, CW3, &int(2) * &i),
        (8, W4, &int(-2) * &i),
        (8, CW4, &int(2) * &i),
    ])
}

/// `C` with `v^i = Σ_j C_ij e^j`; depends on `b`.
pub fn e_to_v(p: &FamilyPoint) -> Matrix<Scalar> {
    let s3 = Tower::sqrt3();
    let c = |t: Tower| Scalar::from_tower(t);
    let inv_s3 = s3.inverse().expect("nonzero");
    let mut m = Matrix::zeros(8, 8);
    m[(0, 0)] = int(1);
    m[(1, 1)] = c(inv_s3.clone());
    m[(2, 2)] = c(&Tower::from_int(2) * &inv_s3);
    m[(3, 3)] = c(&Tower::from_int(2) * &inv_s3);
    m[(4, 4)] = Scalar::frac(2, 3);
    m[(5, 5)] = c(&Tower::frac(2, 3) * &inv_s3);
    m[(6, 6)] = Scalar::frac(2, 3);
    m[(7, 7)] = c(&Tower::frac(2, 3) * &inv_s3);
    m[(7, 5)] = p.b.scale(&(&Tower::frac(4, 9) * &inv_s3));
    m
}

fn hermitian(displayed: Vec<Vec<Scalar>>, factor: Scalar) -> HermitianForm {
    HermitianForm::from_matrix(&Frame::complex(4), &Matrix::from_rows(displayed), &factor)
        .expect("catalog metrics are Hermitian")
}

/// `F = (101/4)iω^{11̄} + iω^{22̄} + iω^{33̄} + ½iω^{44̄} − 5ω^{13̄} + 5ω^{31̄}`.
pub fn metric_f() -> HermitianForm {
    let z = Scalar::zero;
    let i5 = &int(5) * &Scalar::i();
    hermitian(
        vec![
            vec![Scalar::frac(101, 4), z(), i5.clone(), z()],
            vec![z(), int(1), z(), z()],
            vec![-i5, z(), int(1), z()],
            vec![z(), z(), z(), Scalar::frac(1, 2)],
        ],
        int(1),
    )
}

/// `2F₀ = i(2ω^{11̄} + ω^{22̄} + 4ω^{33̄} + ω^{44̄}) + 2ω^{13̄} − 2ω^{31̄}`.
pub fn metric_f0() -> HermitianForm {
    let z = Scalar::zero;
    let i2 = &int(2) * &Scalar::i();
    hermitian(
        vec![
            vec![int(2), z(), -&i2, z()],
            vec![z(), int(1), z(), z()],
            vec![i2, z(), int(4), z()],
            vec![z(), z(), z(), int(1)],
        ],
        Scalar::frac(1, 2),
    )
}

/// `2F_a = i(a(a+1)ω^{11̄} + ω^{22̄} + ω^{33̄} + 2ω^{44̄}) + aω^{13̄} − aω^{31̄} + ω^{24̄} − ω^{42̄}`.
pub fn metric_fa(a: &Scalar) -> HermitianForm {
    let z = Scalar::zero;
    let i = Scalar::i();
    let ia = &i * a;
    let a11 = a * &(a + &int(1));
    hermitian(
        vec![
            vec![a11, z(), -&ia, z()],
            vec![z(), int(1), z(), -&i],
            vec![ia, z(), int(1), z()],
            vec![z(), i, z(), int(2)],
        ],
        Scalar::frac(1, 2),
    )
}

fn constant_sign(s: &Scalar) -> Option<std::cmp::Ordering> {
    s.as_constant().and_then(|t| t.real_sign())
}

fn require_b_one(p: &FamilyPoint, family: Family) -> Result<()> {
    if p.b.is_constant() && !p.b.is_one() {
        return Err(Error::BadPoint(format!("{} lives on b = 1, got {p}", family.name())));
    }
    Ok(())
}

/// Builds a catalog object and runs its load-time consistency check.
pub fn make(family: Family, p: &FamilyPoint) -> Result<Entry> {
    let object = match family {
        Family::GAbReal => Object::Presentation(g_ab_real(p)?),
        Family::GAbComplex => Object::Presentation(g_ab_complex(p)?),
        Family::MAlphaBeta => Object::Presentation(m_alphabeta(p)?),
        Family::JAb => {
            let j = j_ab();
            if !is_integrable(&g_ab_real(p)?, &j)? {
                return Err(Error::NotIntegrable);
            }
            Object::Structure(j)
        }
        Family::MetricF => {
            require_b_one(p, family)?;
            Object::Metric(metric_f())
        }
        Family::MetricF0 => {
            require_b_one(p, family)?;
            if !p.a.is_zero() {
                return Err(Error::BadPoint(format!("metric_F0 lives on a = 0, got {p}")));
            }
            Object::Metric(metric_f0())
        }
        Family::MetricFa => {
            require_b_one(p, family)?;
            if p.a.is_constant() && constant_sign(&p.a) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::BadPoint(format!("metric_Fa needs a > 0, got {p}")));
            }
            Object::Metric(metric_fa(&p.a))
        }
        Family::EToVChange => Object::BasisChange(e_to_v(p)),
        Family::OmegaToERealization => Object::Realization(omega_to_e()),
    };
    Ok(Entry { family, label: family.label(), point: p.clone(), object })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChangeReport {
    pub transformed: Differential,
    pub expected: Differential,
    /// Generators whose transformed differential differs from the expected one.
    pub mismatches: Vec<usize>,
}

impl BasisChangeReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Pushes the `e`-basis equations through `e_to_v` and compares with `m_{α,β}`.
pub fn basis_change_check(p: &FamilyPoint) -> Result<BasisChangeReport> {
    let g = g_ab_real(p)?;
    let expected = m_alphabeta(p)?.differential().clone();
    let transformed = crate::cxstruct::change_basis(g.differential(), g.frame(), &e_to_v(p))?;
    let mismatches = (0..8).filter(|&k| transformed.image(k) != expected.image(k)).collect();
    Ok(BasisChangeReport { transformed, expected, mismatches })
}

/// Canonical members of the family up to isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Representative {
    G00,
    G10,
    /// `g_{a,1}` with `a ≥ 0`.
    GA1(Rational),
}

impl Representative {
    pub fn point(&self) -> FamilyPoint {
        match self {
            Representative::G00 => FamilyPoint::ints(0, 0),
            Representative::G10 => FamilyPoint::ints(1, 0),
            Representative::GA1(a) => FamilyPoint::rational(a.clone(), Rational::one()),
        }
    }
}

impl fmt::Display for Representative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representative::G00 => write!(f, "g_{{0,0}}"),
            Representative::G10 => write!(f, "g_{{1,0}}"),
            Representative::GA1(a) => write!(f, "g_{{{a},1}}"),
        }
    }
}

/// A verified isomorphism `g_{source} ≅ g_{target}` with `a' = ±ρa`, `b' = ρb`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCertificate {
    /// Rows: `F(e'^i) = Σ_j λ^i_j e^j`, `e'` on the target.
    pub matrix: Matrix<Scalar>,
    pub source: FamilyPoint,
    pub target: FamilyPoint,
    pub rho: Rational,
}

impl IsoCertificate {
    fn verified(matrix: Matrix<Scalar>, source: FamilyPoint, target: FamilyPoint, rho: Rational) -> Result<Self> {
        if !is_isomorphism(&matrix, &g_ab_real(&source)?, &g_ab_real(&target)?)? {
            return Err(Error::NotIsomorphism);
        }
        Ok(IsoCertificate { matrix, source, target, rho })
    }

    pub fn verify(&self) -> Result<bool> {
        is_isomorphism(&self.matrix, &g_ab_real(&self.source)?, &g_ab_real(&self.target)?)
    }
}

fn weight_diag(t: &Rational) -> Matrix<Scalar> {
    let inv = t.recip();
    let pw = |k: i32| Scalar::from_rational(inv.pow(k));
    Matrix::diag(vec![pw(1), pw(1), pw(1), pw(2), pw(2), pw(3), pw(3), pw(4)])
}

/// `diag(1, −1, −1, −1, 1, −1, 1, −1)`: `g_{a,1} ≅ g_{−a,1}`.
pub fn sign_flip() -> Matrix<Scalar> {
    Matrix::diag([1, -1, -1, -1, 1, -1, 1, -1].into_iter().map(int).collect())
}

/// The representative of `g_{a,b}` with an isomorphism onto it.
pub fn canonicalize(a: &Rational, b: &Rational) -> Result<(Representative, IsoCertificate)> {
    let source = FamilyPoint::rational(a.clone(), b.clone());
    if b.is_zero() {
        if a.is_zero() {
            let cert = IsoCertificate::verified(Matrix::identity(8), source.clone(), source, Rational::one())?;
            return Ok((Representative::G00, cert));
        }
        let rep = Representative::G10;
        let cert = IsoCertificate::verified(weight_diag(a), source, rep.point(), a.recip())?;
        return Ok((rep, cert));
    }
    let ratio = a / b;
    let scaled = weight_diag(b);
    let (rep, matrix) = if ratio.is_negative() {
        (Representative::GA1(-ratio), compose(&scaled, &sign_flip()))
    } else {
        (Representative::GA1(ratio), scaled)
    };
    let cert = IsoCertificate::verified(matrix, source, rep.point(), b.recip())?;
    Ok((rep, cert))
}

/// What the relation `a' = σρa`, `b' = ρb` forces on `ρ ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioObstruction {
    pub sign: i8,
    pub equations: [String; 2],
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoJustification {
    Witness(IsoCertificate),
    /// Both sign choices admit no nonzero real `ρ`.
    NoScale([RatioObstruction; 2]),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoVerdict {
    pub isomorphic: bool,
    pub source: Representative,
    pub target: Representative,
    pub justification: IsoJustification,
}

enum Forced {
    Any,
    Value(Rational),
    Never,
}

/// `lhs = ρ·c`.
fn forced(lhs: &Rational, c: &Rational) -> Forced {
    if !c.is_zero() {
        Forced::Value(lhs / c)
    } else if lhs.is_zero() {
        Forced::Any
    } else {
        Forced::Never
    }
}

fn obstruction(sign: i8, a: &Rational, b: &Rational, a2: &Rational, b2: &Rational) -> Option<RatioObstruction> {
    let sa = if sign > 0 { a.clone() } else { -a };
    let pm = if sign > 0 { "+" } else { "-" };
    let equations = [format!("{a2} = {pm}rho*{a}"), format!("{b2} = rho*{b}")];
    let from_a = forced(a2, &sa);
    let from_b = forced(b2, b);
    let reason = match (&from_a, &from_b) {
        (Forced::Never, _) => "first equation has no solution".to_string(),
        (_, Forced::Never) => "second equation has no solution".to_string(),
        (Forced::Value(x), Forced::Value(y)) if x != y => format!("rho = {x} and rho = {y}"),
        (Forced::Value(x), _) | (_, Forced::Value(x)) if x.is_zero() => "forces rho = 0".to_string(),
        _ => return None,
    };
    Some(RatioObstruction { sign, equations, reason })
}

/// Decides `g_{a,b} ≅ g_{a',b'}` through the canonical representatives.
pub fn family_iso_verdict(a: &Rational, b: &Rational, a2: &Rational, b2: &Rational) -> Result<IsoVerdict> {
    let (r1, c1) = canonicalize(a, b)?;
    let (r2, c2) = canonicalize(a2, b2)?;
    if r1 == r2 {
        let inv = c2.matrix.inverse_poly().map_err(|_| Error::Singular)?;
        let rho = &c1.rho / &c2.rho;
        let cert = IsoCertificate::verified(inv.mul(&c1.matrix), c1.source, c2.source, rho)?;
        return Ok(IsoVerdict {
            isomorphic: true,
            source: r1,
            target: r2,
            justification: IsoJustification::Witness(cert),
        });
    }
    let plus = obstruction(1, a, b, a2, b2);
    let minus = obstruction(-1, a, b, a2, b2);
    match (plus, minus) {
        (Some(p), Some(m)) => Ok(IsoVerdict {
            isomorphic: false,
            source: r1,
            target: r2,
            justification: IsoJustification::NoScale([p, m]),
        }),
        _ => Err(Error::NotIsomorphism),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma36Report {
    pub checks: Vec<Check>,
    /// `λ¹₁`.
    pub rho: Scalar,
    /// `s` in `λ³₃ = λ²₂ = sλ¹₁`, when it is ±1.
    pub sign: Option<i8>,
}

impl Lemma36Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Checks the diagonal and parameter relations carried by an isomorphism
/// `m_{α,β} → m_{α',β'}` given in the `v`-bases.
pub fn lemma36_relation_check(lambda: &Matrix<Scalar>, src: &FamilyPoint, dst: &FamilyPoint) -> Result<Lemma36Report> {
    if !is_isomorphism(lambda, &m_alphabeta(src)?, &m_alphabeta(dst)?)? {
        return Err(Error::NotIsomorphism);
    }
    let l = |i: usize| lambda[(i - 1, i - 1)].clone();
    let (l1, l2, l3) = (l(1), l(2), l(3));
    let sign = if l2 == l1 {
        Some(1)
    } else if l2 == -&l1 {
        Some(-1)
    } else {
        None
    };
    let mut checks = Vec::new();
    let mut check = |name: &str, pass: bool| checks.push(Check { name: name.into(), pass });
    check("lower triangular", lambda.is_lower_triangular());
    check("l44 = l11 l33", l(4) == &l1 * &l3);
    check("l55 = l22 l33", l(5) == &l2 * &l3);
    check("l66 = l22 l33^2", l(6) == &l2 * &l3.pow(2));
    check("l77 = l11 l33^2", l(7) == &l1 * &l3.pow(2));
    check("l33 = l22", l3 == l2);
    check("l22 = +-l11", sign.is_some());
    let s = int(sign.unwrap_or(0) as i64);
    check("l44 = s l11^2", l(4) == &s * &l1.pow(2));
    check("l55 = l11^2", l(5) == l1.pow(2));
    check("l66 = s l11^3", l(6) == &s * &l1.pow(3));
    check("l77 = l11^3", l(7) == l1.pow(3));
    check("l88 = s l11^4", l(8) == &s * &l1.pow(4));
    check("alpha' = s l11 alpha", dst.alpha() == &(&s * &l1) * &src.alpha());
    check("beta' = l11 beta", dst.beta() == &l1 * &src.beta());
    Ok(Lemma36Report { checks, rho: l1, sign })
}

/// The `v`-basis matrix of an `e`-basis morphism: `C' Λ C⁻¹`.
pub fn to_v_basis(lambda_e: &Matrix<Scalar>, src: &FamilyPoint, dst: &FamilyPoint) -> Result<Matrix<Scalar>> {
    let c_inv = e_to_v(src).inverse_poly()?;
    Ok(e_to_v(dst).mul(lambda_e).mul(&c_inv))
}
