//! Lie-algebra-level computations on a presentation: brackets, central series
//! and morphisms checked in the dual (structure-equation) picture.

use crate::error::{Error, Result};
use crate::exterior::{Blade, Differential, Form, FrameRef};
use crate::linalg::Matrix;
use crate::scalars::{Assignment, Scalar, Tower};

/// A Lie algebra given by the differential of its degree-1 generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    name: Option<String>,
    d: Differential,
}

impl Presentation {
    /// Verifies `d² = 0` on every generator.
    pub fn new(d: Differential) -> Result<Self> {
        if let Some((k, _)) = d.d_squared_residual().into_iter().find(|(_, f)| !f.is_zero()) {
            return Err(Error::Jacobi(d.frame().generator_name(k)));
        }
        Ok(Presentation { name: None, d })
    }

    /// No Jacobi check; for experiments with invalid structure equations.
    pub fn unchecked(d: Differential) -> Self {
        Presentation { name: None, d }
    }

    pub fn abelian(frame: &FrameRef) -> Self {
        Presentation { name: None, d: Differential::zero(frame) }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn frame(&self) -> &FrameRef {
        self.d.frame()
    }

    pub fn differential(&self) -> &Differential {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.frame().len()
    }

    pub fn specialize(&self, asg: &Assignment) -> Presentation {
        Presentation { name: self.name.clone(), d: self.d.specialize(asg) }
    }

    pub fn is_constant(&self) -> bool {
        self.d.is_constant()
    }

    /// `γ^k_ij`, the coefficient of `e_k` in `[e_i, e_j]`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        if i == j {
            return Scalar::zero();
        }
        let (lo, hi, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let c = self.d.image(k).coeff(Blade::from_indices(&[lo, hi]).unwrap());
        if sign > 0 {
            -c
        } else {
            c
        }
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim()).map(|k| self.structure_constant(i, j, k)).collect()
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for (i, xi) in x.iter().enumerate().take(n) {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate().take(n) {
                if yj.is_zero() || i == j {
                    continue;
                }
                let xy = xi * yj;
                for (k, slot) in out.iter_mut().enumerate() {
                    let g = self.structure_constant(i, j, k);
                    if !g.is_zero() {
                        *slot = &*slot + &(&xy * &g);
                    }
                }
            }
        }
        out
    }

    /// Constant brackets `table[i][j] = [e_i, e_j]`.
    pub fn bracket_table(&self) -> Result<Vec<Vec<Vec<Tower>>>> {
        if !self.is_constant() {
            return Err(Error::SymbolicParameters);
        }
        let n = self.dim();
        Ok((0..n)
            .map(|i| {
                (0..n).map(|j| self.bracket_basis(i, j).iter().map(|s| s.as_constant().unwrap()).collect()).collect()
            })
            .collect())
    }

    /// Matrix of `X ↦ [X, e_j]`.
    pub(crate) fn right_ad(table: &[Vec<Vec<Tower>>], j: usize) -> Matrix<Tower> {
        let n = table.len();
        let cols: Vec<Vec<Tower>> = (0..n).map(|i| table[i][j].clone()).collect();
        Matrix::from_cols(n, &cols)
    }
}

/// Dimensions of a central series and the nilpotency step when it reaches the extremes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesProfile {
    pub dims: Vec<usize>,
    pub step: Option<usize>,
}

/// Rows spanning the linear functionals vanishing on `span(basis)`.
pub(crate) fn annihilator(basis: &[Vec<Tower>], n: usize) -> Matrix<Tower> {
    if basis.is_empty() {
        return Matrix::identity(n);
    }
    let m = Matrix::from_rows(basis.to_vec());
    let ker = m.null_space();
    if ker.is_empty() {
        Matrix::zeros(0, n)
    } else {
        Matrix::from_rows(ker)
    }
}

/// Stacks matrices with the same number of columns.
pub(crate) fn stack(blocks: &[Matrix<Tower>], cols: usize) -> Matrix<Tower> {
    let rows: Vec<Vec<Tower>> = blocks.iter().flat_map(|b| (0..b.rows()).map(|i| b.row(i).to_vec())).collect();
    if rows.is_empty() {
        Matrix::zeros(0, cols)
    } else {
        Matrix::from_rows(rows)
    }
}

fn kernel_of(m: &Matrix<Tower>, n: usize) -> Vec<Vec<Tower>> {
    if m.rows() == 0 {
        (0..n).map(|i| (0..n).map(|j| if i == j { Tower::one() } else { Tower::zero() }).collect()).collect()
    } else {
        m.null_space()
    }
}

/// Bases of `g_1 ⊂ g_2 ⊂ …` until the series stabilizes.
pub fn ascending_subspaces(g: &Presentation) -> Result<Vec<Vec<Vec<Tower>>>> {
    let table = g.bracket_table()?;
    let n = g.dim();
    let ads: Vec<Matrix<Tower>> = (0..n).map(|j| Presentation::right_ad(&table, j)).collect();
    let mut prev: Vec<Vec<Tower>> = Vec::new();
    let mut out = Vec::new();
    loop {
        let q = annihilator(&prev, n);
        let blocks: Vec<Matrix<Tower>> = ads.iter().map(|a| q.mul(a)).collect();
        let next = kernel_of(&stack(&blocks, n), n);
        let stable = next.len() == prev.len();
        if !stable || out.is_empty() {
            out.push(next.clone());
        }
        if stable {
            return Ok(out);
        }
        prev = next;
    }
}

pub fn ascending_series(g: &Presentation) -> Result<SeriesProfile> {
    let dims: Vec<usize> = ascending_subspaces(g)?.iter().map(Vec::len).collect();
    let step = (dims.last() == Some(&g.dim())).then_some(dims.len());
    Ok(SeriesProfile { dims, step })
}

pub(crate) fn span_basis(vectors: Vec<Vec<Tower>>, n: usize) -> Vec<Vec<Tower>> {
    if vectors.is_empty() {
        return vectors;
    }
    let m = Matrix::from_cols(n, &vectors);
    let (_, pivots) = m.bareiss_rank();
    pivots.into_iter().map(|c| vectors[c].clone()).collect()
}

/// Dimensions of `g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ …`, omitting a trailing zero.
pub fn descending_series(g: &Presentation) -> Result<SeriesProfile> {
    let table = g.bracket_table()?;
    let n = g.dim();
    let mut current: Vec<Vec<Tower>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Tower::one() } else { Tower::zero() }).collect()).collect();
    let mut dims = vec![n];
    let reached_zero = loop {
        let mut gens = Vec::new();
        for i in 0..n {
            let ad = Presentation::right_ad(&table, i);
            for w in &current {
                let v = ad.mul_vec(w);
                if v.iter().any(|t| !t.is_zero()) {
                    gens.push(v);
                }
            }
        }
        let next = span_basis(gens, n);
        if next.is_empty() {
            break true;
        }
        if next.len() == current.len() {
            break false;
        }
        dims.push(next.len());
        current = next;
    };
    let step = reached_zero.then_some(dims.len());
    Ok(SeriesProfile { dims, step })
}

/// Results of a computation at several parameter values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sweep<T> {
    pub values: Vec<(Assignment, T)>,
    pub agree: bool,
}

/// Specializes at each sample, runs `f`, and reports whether all results coincide.
pub fn sweep<T: PartialEq + Clone>(
    g: &Presentation,
    samples: &[Assignment],
    f: impl Fn(&Presentation) -> Result<T>,
) -> Result<Sweep<T>> {
    let mut values = Vec::with_capacity(samples.len());
    for s in samples {
        values.push((s.clone(), f(&g.specialize(s))?));
    }
    let agree = values.windows(2).all(|w| w[0].1 == w[1].1);
    Ok(Sweep { values, agree })
}

/// The 1-forms `F(v'^i) = Σ_j λ^i_j v^j` on the source frame.
pub fn pullback_images(lambda: &Matrix<Scalar>, src: &FrameRef) -> Vec<Form> {
    (0..lambda.rows())
        .map(|i| {
            let mut f = Form::zero(src, 1);
            for (j, c) in lambda.row(i).iter().enumerate() {
                if !c.is_zero() {
                    f = &f + &Form::monomial(src, Blade::single(j), c.clone());
                }
            }
            f
        })
        .collect()
}

/// Per target generator: `F(d v'^i) − d(F v'^i)`, with `F` the dual map given by the rows of `Λ`.
pub fn morphism_residual(
    lambda: &Matrix<Scalar>,
    src: &Presentation,
    dst: &Presentation,
) -> Result<Vec<(usize, Form)>> {
    let n = src.dim();
    if dst.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: dst.dim() });
    }
    if lambda.rows() != n || lambda.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: lambda.rows().max(lambda.cols()) });
    }
    if src.frame().flavor() != dst.frame().flavor() {
        return Err(Error::FrameMismatch);
    }
    let images = pullback_images(lambda, src.frame());
    let mut out = Vec::with_capacity(n);
    for (i, img) in images.iter().enumerate() {
        let lhs = dst.differential().image(i).pullback(&images)?;
        let rhs = src.differential().differentiate(img)?;
        out.push((i, lhs.try_sub(&rhs)?));
    }
    Ok(out)
}

pub fn is_homomorphism(lambda: &Matrix<Scalar>, src: &Presentation, dst: &Presentation) -> Result<bool> {
    Ok(morphism_residual(lambda, src, dst)?.iter().all(|(_, f)| f.is_zero()))
}

/// Homomorphism with nonzero determinant. A parameter-dependent determinant is
/// refused since its vanishing depends on the parameters.
pub fn is_isomorphism(lambda: &Matrix<Scalar>, src: &Presentation, dst: &Presentation) -> Result<bool> {
    if !is_homomorphism(lambda, src, dst)? {
        return Ok(false);
    }
    let det = lambda.det();
    if det.is_zero() {
        return Ok(false);
    }
    if !det.is_constant() {
        return Err(Error::SymbolicParameters);
    }
    Ok(true)
}

/// Matrix of the dual map of `f2 ∘ f1`, where `Λ1` describes `f1: A → B` and `Λ2` describes `f2: B → C`.
pub fn compose(lambda1: &Matrix<Scalar>, lambda2: &Matrix<Scalar>) -> Matrix<Scalar> {
    lambda2.mul(lambda1)
}
