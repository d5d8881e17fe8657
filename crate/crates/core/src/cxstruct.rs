//! Almost complex structures on real presentations: integrability, the
//! J-compatible series, real/complex frame conversion and the generic
//! strongly non-nilpotent family in real dimension 8.

use crate::error::{Error, Result};
use crate::exterior::{Blade, Differential, Form, Frame, FrameRef};
use crate::liealg::{annihilator, ascending_subspaces, stack, Presentation};
use crate::linalg::Matrix;
use crate::scalars::{Assignment, Scalar, Tower};
use std::collections::BTreeMap;

/// `J` acting on vectors: column `j` holds the coordinates of `J e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostComplexStructure {
    j: Matrix<Scalar>,
}

fn complete(n: usize, pairs: &[(Vec<Scalar>, Vec<Scalar>)]) -> Result<Matrix<Scalar>> {
    if !n.is_multiple_of(2) || pairs.len() * 2 != n {
        return Err(Error::NotAlmostComplex);
    }
    let mut src = Vec::with_capacity(n);
    let mut dst = Vec::with_capacity(n);
    for (x, y) in pairs {
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len().max(y.len()) });
        }
    }
    for (x, y) in pairs {
        src.push(x.clone());
        dst.push(y.clone());
    }
    for (x, _) in pairs {
        dst.push(x.iter().map(|s| -s).collect());
    }
    for (_, y) in pairs {
        src.push(y.clone());
    }
    let s = Matrix::from_cols(n, &src);
    let t = Matrix::from_cols(n, &dst);
    let sinv = s.inverse_poly().map_err(|_| Error::NotAlmostComplex)?;
    Ok(t.mul(&sinv))
}

impl AlmostComplexStructure {
    pub fn from_matrix(j: Matrix<Scalar>) -> Result<Self> {
        if !j.is_square() {
            return Err(Error::NotAlmostComplex);
        }
        let n = j.rows();
        let sq = j.mul(&j);
        let minus_id = Matrix::<Scalar>::identity(n).scale(&Scalar::from_int(-1));
        if sq != minus_id {
            return Err(Error::NotAlmostComplex);
        }
        Ok(AlmostComplexStructure { j })
    }

    /// Completes `J x_k = y_k` by `J y_k = -x_k`.
    pub fn from_vector_images(n: usize, pairs: &[(Vec<Scalar>, Vec<Scalar>)]) -> Result<Self> {
        Self::from_matrix(complete(n, pairs)?)
    }

    /// Same as [`Self::from_vector_images`] for the dual action on 1-forms, `J*θ = J^T θ`.
    pub fn from_dual_images(n: usize, pairs: &[(Vec<Scalar>, Vec<Scalar>)]) -> Result<Self> {
        Self::from_matrix(complete(n, pairs)?.transpose())
    }

    pub fn dim(&self) -> usize {
        self.j.rows()
    }

    pub fn matrix(&self) -> &Matrix<Scalar> {
        &self.j
    }

    /// Column `i` holds the coordinates of `J*(e^i)`.
    pub fn dual_matrix(&self) -> Matrix<Scalar> {
        self.j.transpose()
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.j.mul_vec(x)
    }

    pub fn specialize(&self, asg: &Assignment) -> Self {
        AlmostComplexStructure { j: self.j.map(|s| s.specialize(asg)) }
    }

    pub fn is_constant(&self) -> bool {
        (0..self.dim()).all(|i| self.j.row(i).iter().all(Scalar::is_constant))
    }
}

fn basis_vector(n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }).collect()
}

fn vsub(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn vadd(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn check_real_dims(g: &Presentation, j: &AlmostComplexStructure) -> Result<()> {
    if g.frame().is_complex() {
        return Err(Error::ComplexFrame);
    }
    if j.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: j.dim() });
    }
    Ok(())
}

/// `N_J(e_i, e_j)` for all `i < j`.
pub fn nijenhuis(g: &Presentation, j: &AlmostComplexStructure) -> Result<BTreeMap<(usize, usize), Vec<Scalar>>> {
    check_real_dims(g, j)?;
    let n = g.dim();
    let basis: Vec<Vec<Scalar>> = (0..n).map(|i| basis_vector(n, i)).collect();
    let jb: Vec<Vec<Scalar>> = basis.iter().map(|x| j.apply(x)).collect();
    let mut out = BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            let xy = g.bracket(&basis[a], &basis[b]);
            let t2 = j.apply(&g.bracket(&jb[a], &basis[b]));
            let t3 = j.apply(&g.bracket(&basis[a], &jb[b]));
            let t4 = g.bracket(&jb[a], &jb[b]);
            out.insert((a, b), vsub(&vadd(&vadd(&xy, &t2), &t3), &t4));
        }
    }
    Ok(out)
}

pub fn is_integrable(g: &Presentation, j: &AlmostComplexStructure) -> Result<bool> {
    Ok(nijenhuis(g, j)?.values().all(|v| v.iter().all(Scalar::is_zero)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JVerdict {
    StronglyNonNilpotent,
    Nilpotent,
    WeaklyNonNilpotent,
}

impl JVerdict {
    pub fn label(self) -> &'static str {
        match self {
            JVerdict::StronglyNonNilpotent => "SnN",
            JVerdict::Nilpotent => "nilpotent",
            JVerdict::WeaklyNonNilpotent => "weakly non-nilpotent",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JSeries {
    pub dims: Vec<usize>,
    /// Bases of `a_1(J) ⊂ a_2(J) ⊂ …`.
    pub subspaces: Vec<Vec<Vec<Tower>>>,
    pub verdict: JVerdict,
}

/// The ascending J-compatible series and its type.
pub fn j_series_classify(g: &Presentation, j: &AlmostComplexStructure) -> Result<JSeries> {
    check_real_dims(g, j)?;
    if !g.is_constant() || !j.is_constant() {
        return Err(Error::SymbolicParameters);
    }
    if !is_integrable(g, j)? {
        return Err(Error::NotIntegrable);
    }
    let table = g.bracket_table()?;
    let n = g.dim();
    let jm = j.matrix().constant()?;
    let ads: Vec<Matrix<Tower>> = (0..n).map(|k| Presentation::right_ad(&table, k)).collect();
    let adj: Vec<Matrix<Tower>> = ads.iter().map(|a| a.mul(&jm)).collect();
    let mut prev: Vec<Vec<Tower>> = Vec::new();
    let mut subspaces = Vec::new();
    loop {
        let q = annihilator(&prev, n);
        let blocks: Vec<Matrix<Tower>> = ads.iter().chain(adj.iter()).map(|a| q.mul(a)).collect();
        let m = stack(&blocks, n);
        let next = if m.rows() == 0 {
            (0..n).map(|i| (0..n).map(|k| if i == k { Tower::one() } else { Tower::zero() }).collect()).collect()
        } else {
            m.null_space()
        };
        let stable = next.len() == prev.len();
        if !stable || subspaces.is_empty() {
            subspaces.push(next.clone());
        }
        if stable {
            break;
        }
        prev = next;
    }
    let dims: Vec<usize> = subspaces.iter().map(Vec::len).collect();
    let verdict = if dims[0] == 0 {
        JVerdict::StronglyNonNilpotent
    } else if *dims.last().unwrap() == n {
        JVerdict::Nilpotent
    } else {
        JVerdict::WeaklyNonNilpotent
    };
    Ok(JSeries { dims, subspaces, verdict })
}

/// True when every vector of `inner` lies in `span(outer)`.
pub fn contained_in(inner: &[Vec<Tower>], outer: &[Vec<Tower>], n: usize) -> bool {
    if inner.is_empty() {
        return true;
    }
    if outer.is_empty() {
        return inner.iter().all(|v| v.iter().all(Tower::is_zero));
    }
    let base = Matrix::from_cols(n, outer).rank();
    let mut all = outer.to_vec();
    all.extend(inner.iter().cloned());
    Matrix::from_cols(n, &all).rank() == base
}

/// Structural checks on a J-series: `a_k ⊆ g_k`, J-invariance, even dimension.
pub fn j_series_invariants(g: &Presentation, j: &AlmostComplexStructure, s: &JSeries) -> Result<bool> {
    let n = g.dim();
    let asc = ascending_subspaces(g)?;
    let jm = j.matrix().constant()?;
    for (k, a) in s.subspaces.iter().enumerate() {
        if a.len() % 2 != 0 {
            return Ok(false);
        }
        let gk = asc.get(k).or(asc.last()).unwrap();
        if !contained_in(a, gk, n) {
            return Ok(false);
        }
        let ja: Vec<Vec<Tower>> = a.iter().map(|v| jm.mul_vec(v)).collect();
        if !contained_in(&ja, a, n) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Differential in a new coframe `new^i = Σ_j P_ij old^j`.
pub fn change_basis(d: &Differential, new_frame: &FrameRef, p: &Matrix<Scalar>) -> Result<Differential> {
    let n = d.frame().len();
    if new_frame.len() != n || p.rows() != n || p.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.rows() });
    }
    let q = p.inverse_poly().map_err(|_| Error::SingularRealization)?;
    let images: Vec<Form> = (0..n)
        .map(|j| {
            let mut f = Form::zero(new_frame, 1);
            for (k, c) in q.row(j).iter().enumerate() {
                if !c.is_zero() {
                    f = &f + &Form::monomial(new_frame, Blade::single(k), c.clone());
                }
            }
            f
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = Form::zero(d.frame(), 2);
        for (j, c) in p.row(i).iter().enumerate() {
            if !c.is_zero() {
                acc.add_scaled(d.image(j), c)?;
            }
        }
        out.push(acc.pullback(&images)?);
    }
    Differential::new(new_frame, out)
}

/// Each real generator `e^i` written in `ω^1..ω^n, ω̄^1..ω̄^n` (row `i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    complex: FrameRef,
    real: FrameRef,
    real_in_complex: Matrix<Scalar>,
}

impl Realization {
    pub fn new(rank: usize, real_in_complex: Matrix<Scalar>) -> Result<Self> {
        let complex = Frame::complex(rank);
        let real = Frame::real(2 * rank);
        if real_in_complex.rows() != 2 * rank || real_in_complex.cols() != 2 * rank {
            return Err(Error::DimensionMismatch { expected: 2 * rank, found: real_in_complex.rows() });
        }
        for i in 0..2 * rank {
            let row = real_in_complex.row(i);
            for k in 0..2 * rank {
                if row[complex.conj_index(k)] != row[k].conjugate() {
                    return Err(Error::NotReal);
                }
            }
        }
        let det = real_in_complex.det();
        if det.is_zero() || !det.is_constant() {
            return Err(Error::SingularRealization);
        }
        Ok(Realization { complex, real, real_in_complex })
    }

    pub fn complex_frame(&self) -> &FrameRef {
        &self.complex
    }

    pub fn real_frame(&self) -> &FrameRef {
        &self.real
    }

    pub fn real_in_complex(&self) -> &Matrix<Scalar> {
        &self.real_in_complex
    }

    /// Row `k` writes the `k`-th complex generator in the real ones.
    pub fn complex_in_real(&self) -> Matrix<Scalar> {
        self.real_in_complex.inverse_poly().expect("checked invertible")
    }

    /// The structure for which the complex generators have type (1,0): `J*ω = iω`.
    pub fn complex_structure(&self) -> AlmostComplexStructure {
        let n = self.complex.rank();
        let signs: Vec<Scalar> = (0..2 * n).map(|k| if k < n { Scalar::i() } else { -Scalar::i() }).collect();
        let dual = self.real_in_complex.mul(&Matrix::diag(signs)).mul(&self.complex_in_real());
        AlmostComplexStructure::from_matrix(dual).expect("J² = -Id by construction")
    }
}

/// Complex structure equations rewritten in the real coframe.
pub fn realify(cx: &Presentation, r: &Realization) -> Result<Presentation> {
    if !cx.frame().is_complex() {
        return Err(Error::RealFrame);
    }
    if cx.frame().rank() != r.complex.rank() {
        return Err(Error::DimensionMismatch { expected: r.complex.rank(), found: cx.frame().rank() });
    }
    let d = change_basis(&cx.differential().reframe_to(&r.complex)?, &r.real, &r.real_in_complex)?;
    if !d.images().iter().all(Form::has_real_coeffs) {
        return Err(Error::NotReal);
    }
    Presentation::new(d)
}

/// Real structure equations rewritten in the complex coframe.
pub fn complexify(real: &Presentation, r: &Realization) -> Result<Presentation> {
    if real.frame().is_complex() {
        return Err(Error::ComplexFrame);
    }
    if real.dim() != r.real.len() {
        return Err(Error::DimensionMismatch { expected: r.real.len(), found: real.dim() });
    }
    let d = change_basis(&real.differential().reframe_to(&r.real)?, &r.complex, &r.complex_in_real())?;
    Presentation::new(d)
}

/// Coefficients of the generic SnN structure equations with `dim g_1 = 1`, `dim g_2 = 3`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SnnCoefficients {
    pub s: Scalar,
    pub coeff_a: Scalar,
    pub coeff_b: Scalar,
    pub coeff_c: Scalar,
    pub coeff_d: Scalar,
    pub coeff_e: Scalar,
    pub coeff_f: Scalar,
    pub coeff_g: Scalar,
    pub coeff_h: Scalar,
    pub coeff_k: Scalar,
    pub coeff_l: Scalar,
    pub coeff_m: Scalar,
    pub coeff_n: Scalar,
    pub coeff_p: Scalar,
}

/// Builds the family in the complex frame of rank 4 and returns it with its `d²` residuals.
pub fn snn_p412_build(c: &SnnCoefficients) -> Result<(Presentation, Vec<(usize, Form)>)> {
    if !c.s.is_real() {
        return Err(Error::NotReal);
    }
    let fr = Frame::complex(4);
    // w1..w4 -> 0..3, cw1..cw4 -> 4..7
    let t = |s: &Scalar, i: usize, j: usize| Form::from_indices(&fr, &[i, j], s.clone());
    let (w1, w2, w3, w4) = (0, 1, 2, 3);
    let (c1, c2, c3, c4) = (4, 5, 6, 7);
    let sum = |terms: Vec<Form>| terms.iter().fold(Form::zero(&fr, 2), |acc, f| &acc + f);

    let dw1 = Form::zero(&fr, 2);
    let dw2 = sum(vec![t(&c.coeff_a, w1, c1), t(&c.coeff_b, w1, w4).neg(), t(&c.coeff_b, w1, c4)]);
    let dw3 = sum(vec![
        t(&(&c.coeff_c - &c.coeff_d), w1, w2),
        t(&c.coeff_e, w1, w4).neg(),
        t(&c.coeff_e, w1, c4),
        t(&c.coeff_f, w1, c1),
        t(&(&c.coeff_g + &c.coeff_d), w1, c2),
        t(&c.coeff_h, w2, w4).neg(),
        t(&c.coeff_h, w2, c4),
        t(&(&c.coeff_c - &c.coeff_g), w2, c1),
        t(&c.coeff_k, w2, c2),
    ]);
    let dw4 = sum(vec![
        t(&c.coeff_l, w1, c1),
        t(&c.coeff_m, w1, c2),
        t(&c.coeff_n, w1, c3),
        t(&c.coeff_m.conjugate(), w2, c1).neg(),
        t(&(&Scalar::i() * &c.s), w2, c2),
        t(&c.coeff_p, w2, c3),
        t(&c.coeff_n.conjugate(), w3, c1).neg(),
        t(&c.coeff_p.conjugate(), w3, c2).neg(),
    ]);
    let d = Differential::from_holomorphic(&fr, vec![dw1, dw2, dw3, dw4])?;
    let residuals = d.d_squared_residual();
    Ok((Presentation::unchecked(d), residuals))
}

/// One named pass/fail line of a structural assertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub checks: Vec<Check>,
}

impl StructureReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

const ALLOWED_6: &[&[usize]] = &[&[1, 3, 6], &[1, 3, 4, 6]];
const ALLOWED_8: &[&[usize]] =
    &[&[1, 3, 8], &[1, 3, 5, 8], &[1, 3, 6, 8], &[1, 3, 5, 6, 8], &[1, 4, 8], &[1, 4, 6, 8], &[1, 5, 8], &[1, 5, 6, 8]];

/// Ascending-series constraints for algebras carrying a strongly non-nilpotent structure.
pub fn snn_structure_assert(dim: usize, ascending: &[usize], verdict: JVerdict) -> Result<StructureReport> {
    let allowed = match dim {
        6 => ALLOWED_6,
        8 => ALLOWED_8,
        _ => return Err(Error::UnsupportedDimension(dim)),
    };
    let mut checks = vec![Check { name: "verdict is SnN".into(), pass: verdict == JVerdict::StronglyNonNilpotent }];
    let n = dim / 2;
    if n >= 4 {
        let g1 = ascending.first().copied().unwrap_or(0);
        checks.push(Check { name: format!("1 <= dim g_1 <= {}", n - 3), pass: 1 <= g1 && g1 <= n - 3 });
    }
    checks
        .push(Check { name: format!("ascending dims listed for dimension {dim}"), pass: allowed.contains(&ascending) });
    Ok(StructureReport { checks })
}
