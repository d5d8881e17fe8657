//! Chevalley-Eilenberg cohomology of a presentation with constant structure
//! constants: Betti numbers, representative cocycles, cup products and the
//! symplectic obstruction.

use crate::error::{Error, Result};
use crate::exterior::{blades_of_degree, Blade, Form, FrameRef};
use crate::liealg::{ascending_series, descending_series, Presentation};
use crate::linalg::Matrix;
use crate::scalars::{Rational, Scalar, Tower};
use std::collections::BTreeMap;
use std::sync::OnceLock;

struct Space {
    /// Cocycles completing the coboundaries to a basis of the closed forms.
    reps: Vec<Vec<Tower>>,
    /// `L` with `L [B | R] = I`; the last `reps.len()` rows read off class coordinates.
    left_inverse: Matrix<Tower>,
}

/// The cochain complex `(Λ^• g*, d)` of a presentation.
pub struct Cohomology {
    frame: FrameRef,
    bases: Vec<Vec<Blade>>,
    index: Vec<BTreeMap<Blade, usize>>,
    d: Vec<Matrix<Tower>>,
    spaces: Vec<OnceLock<Space>>,
}

fn unit_vectors(n: usize) -> Vec<Vec<Tower>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Tower::one() } else { Tower::zero() }).collect()).collect()
}

fn left_inverse(cols: &[Vec<Tower>], rows: usize) -> Matrix<Tower> {
    if cols.is_empty() {
        return Matrix::zeros(0, rows);
    }
    let m = Matrix::from_cols(rows, cols);
    let mstar = m.transpose().map(Tower::conjugate);
    let gram = mstar.mul(&m);
    gram.inverse_tower().expect("independent columns").mul(&mstar)
}

impl Cohomology {
    pub fn new(g: &Presentation) -> Result<Self> {
        if !g.is_constant() {
            return Err(Error::SymbolicParameters);
        }
        let n = g.dim();
        let frame = g.frame().clone();
        let bases: Vec<Vec<Blade>> = (0..=n).map(|k| blades_of_degree(n, k)).collect();
        let index: Vec<BTreeMap<Blade, usize>> =
            bases.iter().map(|b| b.iter().enumerate().map(|(i, x)| (*x, i)).collect()).collect();
        let mut d = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let rows = if k < n { bases[k + 1].len() } else { 0 };
            let mut m = Matrix::zeros(rows, bases[k].len());
            if k < n {
                for (j, b) in bases[k].iter().enumerate() {
                    let df = g.differential().differentiate(&Form::monomial(&frame, *b, Scalar::one()))?;
                    for (blade, c) in df.terms() {
                        m[(index[k + 1][blade], j)] = c.as_constant().expect("constant presentation");
                    }
                }
            }
            d.push(m);
        }
        let spaces = (0..=n).map(|_| OnceLock::new()).collect();
        Ok(Cohomology { frame, bases, index, d, spaces })
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    pub fn frame(&self) -> &FrameRef {
        &self.frame
    }

    /// Matrix of `d: Λ^k → Λ^{k+1}` in the lexicographic blade bases.
    pub fn differential_matrix(&self, k: usize) -> &Matrix<Tower> {
        &self.d[k]
    }

    pub fn basis(&self, k: usize) -> &[Blade] {
        &self.bases[k]
    }

    fn rank_d(&self, k: isize) -> usize {
        if k < 0 || k as usize >= self.dim() {
            0
        } else {
            self.d[k as usize].rank()
        }
    }

    pub fn betti_number(&self, k: usize) -> usize {
        self.bases[k].len() - self.rank_d(k as isize) - self.rank_d(k as isize - 1)
    }

    /// Betti numbers `b_0..=b_{k_max}`.
    pub fn betti(&self, k_max: usize) -> Vec<usize> {
        (0..=k_max.min(self.dim())).map(|k| self.betti_number(k)).collect()
    }

    fn space(&self, k: usize) -> &Space {
        self.spaces[k].get_or_init(|| {
            let len = self.bases[k].len();
            let cocycles = if self.d[k].rows() == 0 { unit_vectors(len) } else { self.d[k].null_space() };
            let exact: Vec<Vec<Tower>> = if k == 0 {
                Vec::new()
            } else {
                let prev = &self.d[k - 1];
                let image: Vec<Vec<Tower>> = (0..prev.cols()).map(|j| prev.col(j)).collect();
                if image.is_empty() {
                    image
                } else {
                    Matrix::from_cols(len, &image).pivot_columns().into_iter().map(|j| image[j].clone()).collect()
                }
            };
            let mut all = exact.clone();
            all.extend(cocycles.iter().cloned());
            let pivots = if all.is_empty() { Vec::new() } else { Matrix::from_cols(len, &all).pivot_columns() };
            let reps: Vec<Vec<Tower>> = pivots.iter().filter(|&&p| p >= exact.len()).map(|&p| all[p].clone()).collect();
            let mut basis = exact;
            basis.extend(reps.iter().cloned());
            Space { reps, left_inverse: left_inverse(&basis, len) }
        })
    }

    fn to_form(&self, k: usize, v: &[Tower]) -> Form {
        Form::from_vector(&self.frame, k, &self.bases[k], v)
    }

    pub fn representatives(&self, k: usize) -> CohomologySpace {
        let reps = self.space(k).reps.iter().map(|v| self.to_form(k, v)).collect::<Vec<_>>();
        CohomologySpace { degree: k, dim: reps.len(), representatives: reps }
    }

    fn vector(&self, f: &Form) -> Result<Vec<Tower>> {
        let k = f.degree();
        if !f.is_constant() {
            return Err(Error::SymbolicParameters);
        }
        Ok(f.to_vector(&self.index[k], self.bases[k].len()).expect("blade of matching degree"))
    }

    pub fn is_closed(&self, f: &Form) -> Result<bool> {
        let k = f.degree();
        if k >= self.dim() {
            return Ok(true);
        }
        let v = self.vector(f)?;
        Ok(self.d[k].mul_vec(&v).iter().all(Tower::is_zero))
    }

    /// Coordinates of the class of a closed form in the representative basis.
    pub fn class_coordinates(&self, f: &Form) -> Result<Vec<Tower>> {
        if !crate::exterior::same_frame(f.frame(), &self.frame) {
            return Err(Error::FrameMismatch);
        }
        if !self.is_closed(f)? {
            return Err(Error::NotClosed);
        }
        let k = f.degree();
        let sp = self.space(k);
        let all = sp.left_inverse.mul_vec(&self.vector(f)?);
        Ok(all[all.len() - sp.reps.len()..].to_vec())
    }

    /// The canonical representative `Σ c_i r_i` of the class of `f`.
    pub fn reduce(&self, f: &Form) -> Result<Form> {
        let coords = self.class_coordinates(f)?;
        Ok(self.from_coordinates(f.degree(), &coords))
    }

    pub fn from_coordinates(&self, k: usize, coords: &[Tower]) -> Form {
        let sp = self.space(k);
        let len = self.bases[k].len();
        let mut v = vec![Tower::zero(); len];
        for (c, r) in coords.iter().zip(&sp.reps) {
            if c.is_zero() {
                continue;
            }
            for (slot, x) in v.iter_mut().zip(r) {
                *slot = &*slot + &(c * x);
            }
        }
        self.to_form(k, &v)
    }

    /// Class of the wedge product of closed forms.
    pub fn cup(&self, forms: &[Form]) -> Result<CohomologyClass> {
        let mut acc = Form::constant(&self.frame, Scalar::one());
        for f in forms {
            if !self.is_closed(f)? {
                return Err(Error::NotClosed);
            }
            acc = acc.wedge(f)?;
        }
        let coords = self.class_coordinates(&acc)?;
        let representative = self.from_coordinates(acc.degree(), &coords);
        Ok(CohomologyClass { degree: acc.degree(), coordinates: coords, representative })
    }

    /// True when the forms are closed and their classes are linearly independent.
    pub fn classes_independent(&self, forms: &[Form]) -> Result<bool> {
        let vs = forms.iter().map(|f| self.class_coordinates(f)).collect::<Result<Vec<_>>>()?;
        if vs.is_empty() {
            return Ok(true);
        }
        Ok(Matrix::from_cols(vs[0].len(), &vs).rank() == vs.len())
    }

    /// Dimension of the span of the classes of closed forms.
    pub fn class_span_dim(&self, forms: &[Form]) -> Result<usize> {
        let vs = forms.iter().map(|f| self.class_coordinates(f)).collect::<Result<Vec<_>>>()?;
        if vs.is_empty() || vs[0].is_empty() {
            return Ok(0);
        }
        Ok(Matrix::from_cols(vs[0].len(), &vs).rank())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologySpace {
    pub degree: usize,
    pub dim: usize,
    pub representatives: Vec<Form>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: usize,
    pub coordinates: Vec<Tower>,
    pub representative: Form,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(Tower::is_zero)
    }
}

pub fn betti(g: &Presentation, k_max: usize) -> Result<Vec<usize>> {
    Ok(Cohomology::new(g)?.betti(k_max))
}

pub fn representatives(g: &Presentation, k: usize) -> Result<CohomologySpace> {
    Ok(Cohomology::new(g)?.representatives(k))
}

pub fn cup(g: &Presentation, forms: &[Form]) -> Result<CohomologyClass> {
    Cohomology::new(g)?.cup(forms)
}

/// Polynomial in internal indeterminates `λ_1..λ_r` with form coefficients.
pub type LambdaPoly = BTreeMap<Vec<u32>, Form>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymplecticVerdict {
    NoSymplecticStructure,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticReport {
    pub verdict: SymplecticVerdict,
    /// Smallest `p` with `a^p ≡ 0` for the generic class `a`.
    pub vanishing_power: Option<usize>,
    /// Power whose monomial coefficients were all verified to vanish: `n/2 - 1` when possible.
    pub checked_power: usize,
    pub monomials_checked: usize,
    pub lambda: Option<Vec<Rational>>,
    pub witness: Option<Form>,
    pub top_power: Option<Form>,
}

#[cfg(test)]
fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn evaluate_poly(h: &Cohomology, poly: &LambdaPoly, lambda: &[Rational], degree: usize) -> Form {
    let mut acc = Form::zero(h.frame(), degree);
    for (mono, f) in poly {
        let mut c = Rational::from_integer(1.into());
        for (e, l) in mono.iter().zip(lambda) {
            c *= num_traits::pow(l.clone(), *e as usize);
        }
        if c != Rational::from_integer(0.into()) {
            acc = &acc + &f.scale(&Scalar::from_rational(c));
        }
    }
    acc
}

/// Powers of the generic degree-2 class; no symplectic form exists if the top power vanishes identically.
pub fn symplectic_obstruction(g: &Presentation) -> Result<SymplecticReport> {
    let h = Cohomology::new(g)?;
    let n = h.dim();
    if n % 2 != 0 {
        return Err(Error::DimensionMismatch { expected: n + 1, found: n });
    }
    let m = n / 2;
    let reps = h.representatives(2).representatives;
    let r = reps.len();
    // Unreduced products of representatives, one entry per monomial of degree p.
    let mut raw: LambdaPoly = BTreeMap::new();
    raw.insert(vec![0; r], Form::constant(h.frame(), Scalar::one()));
    let mut vanishing_power = None;
    let mut poly: LambdaPoly = BTreeMap::new();
    for p in 1..=m {
        let mut next: LambdaPoly = BTreeMap::new();
        for (mono, f) in &raw {
            for (i, rep) in reps.iter().enumerate() {
                let mut key = mono.clone();
                key[i] += 1;
                let w = f.wedge(rep)?;
                let slot = next.entry(key).or_insert_with(|| Form::zero(h.frame(), 2 * p));
                *slot = &*slot + &w;
            }
        }
        raw = next;
        poly = BTreeMap::new();
        for (k, f) in &raw {
            let rf = h.reduce(f)?;
            if !rf.is_zero() {
                poly.insert(k.clone(), rf);
            }
        }
        if poly.is_empty() {
            vanishing_power.get_or_insert(p);
            if p + 1 >= m {
                return Ok(SymplecticReport {
                    verdict: SymplecticVerdict::NoSymplecticStructure,
                    vanishing_power,
                    checked_power: p,
                    monomials_checked: raw.len(),
                    lambda: None,
                    witness: None,
                    top_power: None,
                });
            }
        }
    }
    let (lead, _) = poly.iter().next_back().expect("nonzero top power");
    let vars: Vec<usize> = (0..r).filter(|&i| lead[i] > 0).collect();
    let mut candidates: Vec<Vec<u32>> = vec![vec![1; vars.len()]];
    let mut grid = vec![0u32; vars.len()];
    loop {
        let mut i = 0;
        while i < grid.len() {
            grid[i] += 1;
            if grid[i] as usize <= m {
                break;
            }
            grid[i] = 0;
            i += 1;
        }
        if i == grid.len() {
            break;
        }
        candidates.push(grid.clone());
    }
    for cand in candidates {
        let mut lambda = vec![Rational::from_integer(0.into()); r];
        for (v, c) in vars.iter().zip(&cand) {
            lambda[*v] = Rational::from_integer((*c).into());
        }
        let top = evaluate_poly(&h, &poly, &lambda, n);
        if !top.is_zero() {
            let mut witness = Form::zero(h.frame(), 2);
            for (l, rep) in lambda.iter().zip(&reps) {
                witness = &witness + &rep.scale(&Scalar::from_rational(l.clone()));
            }
            return Ok(SymplecticReport {
                verdict: SymplecticVerdict::Inconclusive,
                vanishing_power: None,
                checked_power: 0,
                monomials_checked: 0,
                lambda: Some(lambda),
                top_power: Some(witness.wedge_pow(m)),
                witness: Some(witness),
            });
        }
    }
    unreachable!("a nonzero polynomial has a nonzero value on the grid {{0..=deg}}")
}

/// Series dimensions and Betti numbers: invariants that do not separate the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub ascending: Vec<usize>,
    pub descending: Vec<usize>,
    pub betti: Vec<usize>,
}

impl Fingerprint {
    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(k, b)| if k % 2 == 0 { *b as i64 } else { -(*b as i64) }).sum()
    }
}

pub fn fingerprint(g: &Presentation) -> Result<Fingerprint> {
    let h = Cohomology::new(g)?;
    Ok(Fingerprint {
        ascending: ascending_series(g)?.dims,
        descending: descending_series(g)?.dims,
        betti: h.betti(h.dim()),
    })
}
