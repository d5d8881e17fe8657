use super::frame::{same_frame, Frame, FrameRef};
use crate::error::{Error, Result};
use crate::scalars::{Assignment, Scalar, Tower};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// A strictly increasing multi-index, stored as a bit set over generator indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Blade(pub u64);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn single(k: usize) -> Blade {
        Blade(1u64 << k)
    }

    pub fn from_indices(idx: &[usize]) -> Option<Blade> {
        let mut m = 0u64;
        for &i in idx {
            let bit = 1u64 << i;
            if m & bit != 0 {
                return None;
            }
            m |= bit;
        }
        Some(Blade(m))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 & (1u64 << k) != 0
    }

    /// Sign of `self ∧ other` after sorting, or `None` when an index repeats.
    pub fn wedge_sign(self, other: Blade) -> Option<i32> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        for b in other.indices() {
            inversions += (self.0 >> b).count_ones();
        }
        Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
    }

    pub fn union(self, other: Blade) -> Blade {
        Blade(self.0 | other.0)
    }
}

impl Ord for Blade {
    /// Degree first, then lexicographic order of the index sequences.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        if self.0 & low != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All blades of degree `k` over `n` generators, in lexicographic order.
pub fn blades_of_degree(n: usize, k: usize) -> Vec<Blade> {
    fn rec(start: usize, n: usize, k: usize, cur: u64, out: &mut Vec<Blade>) {
        if k == 0 {
            out.push(Blade(cur));
            return;
        }
        for i in start..=n - k {
            rec(i + 1, n, k - 1, cur | (1u64 << i), out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

/// A homogeneous exterior form with sorted multi-indices and no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form {
    frame: FrameRef,
    degree: usize,
    terms: BTreeMap<Blade, Scalar>,
}

impl Form {
    pub fn zero(frame: &FrameRef, degree: usize) -> Form {
        Form { frame: frame.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn constant(frame: &FrameRef, s: Scalar) -> Form {
        Form::monomial(frame, Blade::EMPTY, s)
    }

    pub fn generator(frame: &FrameRef, k: usize) -> Form {
        assert!(k < frame.len(), "generator index out of range");
        Form::monomial(frame, Blade::single(k), Scalar::one())
    }

    pub fn monomial(frame: &FrameRef, blade: Blade, s: Scalar) -> Form {
        let mut f = Form::zero(frame, blade.degree());
        f.add_term(blade, s);
        f
    }

    /// Builds `sign · e^{i1} ∧ ... ∧ e^{ik}` from unsorted indices (0-based).
    pub fn from_indices(frame: &FrameRef, idx: &[usize], s: Scalar) -> Form {
        let mut f = Form::constant(frame, s);
        for &i in idx {
            f = f.wedge(&Form::generator(frame, i)).expect("same frame");
        }
        if f.is_zero() {
            Form::zero(frame, idx.len())
        } else {
            f
        }
    }

    pub fn frame(&self) -> &FrameRef {
        &self.frame
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: Blade) -> Scalar {
        self.terms.get(&b).cloned().unwrap_or_default()
    }

    /// Leading (lexicographically first) nonzero term.
    pub fn leading(&self) -> Option<(Blade, &Scalar)> {
        self.terms.iter().next().map(|(b, s)| (*b, s))
    }

    pub(crate) fn add_term(&mut self, b: Blade, s: Scalar) {
        debug_assert_eq!(b.degree(), self.degree);
        if s.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(b) {
            Entry::Vacant(v) => {
                v.insert(s);
            }
            Entry::Occupied(mut o) => {
                let v = o.get() + &s;
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Form) -> Result<()> {
        if !same_frame(&self.frame, &other.frame) {
            return Err(Error::FrameMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (b, s) in &other.terms {
            out.add_term(*b, s.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Form) -> Result<Form> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (b, s) in &other.terms {
            out.add_term(*b, -s);
        }
        Ok(out)
    }

    /// `self += s · other`.
    pub fn add_scaled(&mut self, other: &Form, s: &Scalar) -> Result<()> {
        self.check_compatible(other)?;
        if s.is_zero() {
            return Ok(());
        }
        for (b, c) in &other.terms {
            self.add_term(*b, c * s);
        }
        Ok(())
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        let mut out = Form::zero(&self.frame, self.degree);
        if s.is_zero() {
            return out;
        }
        for (b, c) in &self.terms {
            out.add_term(*b, c * s);
        }
        out
    }

    pub fn neg(&self) -> Form {
        self.map_coeffs(|c| -c)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Form {
        let mut out = Form::zero(&self.frame, self.degree);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c));
        }
        out
    }

    pub fn specialize(&self, asg: &Assignment) -> Form {
        self.map_coeffs(|c| c.specialize(asg))
    }

    /// Same coefficients on another frame with the same number of generators.
    pub fn reframe(&self, frame: &FrameRef) -> Form {
        assert_eq!(frame.len(), self.frame.len());
        Form { frame: frame.clone(), degree: self.degree, terms: self.terms.clone() }
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        if !same_frame(&self.frame, &other.frame) {
            return Err(Error::FrameMismatch);
        }
        let mut out = Form::zero(&self.frame, self.degree + other.degree);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                if let Some(sign) = b1.wedge_sign(*b2) {
                    let c = c1 * c2;
                    out.add_term(b1.union(*b2), if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `self^k` under the wedge product (`k = 0` gives the constant 1).
    pub fn wedge_pow(&self, k: usize) -> Form {
        let mut acc = Form::constant(&self.frame, Scalar::one());
        for _ in 0..k {
            acc = acc.wedge(self).expect("same frame");
        }
        acc
    }

    /// Substitutes each generator `k` by the 1-form `images[k]` on another frame.
    pub fn pullback(&self, images: &[Form]) -> Result<Form> {
        if images.len() != self.frame.len() {
            return Err(Error::DimensionMismatch { expected: self.frame.len(), found: images.len() });
        }
        let target = images.first().map_or_else(|| self.frame.clone(), |f| f.frame.clone());
        let mut out = Form::zero(&target, self.degree);
        for (b, c) in &self.terms {
            let mut acc = Form::constant(&target, c.clone());
            for k in b.indices() {
                acc = acc.wedge(&images[k])?;
                if acc.is_zero() {
                    break;
                }
            }
            if !acc.is_zero() {
                out = out.try_add(&acc)?;
            }
        }
        Ok(out)
    }

    fn require_complex(&self) -> Result<()> {
        if self.frame.is_complex() {
            Ok(())
        } else {
            Err(Error::RealFrame)
        }
    }

    /// `(p, q)` type of a blade on a complex frame.
    pub fn blade_bidegree(frame: &Frame, b: Blade) -> (usize, usize) {
        let n = frame.rank();
        let low = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        ((b.0 & low).count_ones() as usize, (b.0 & !low).count_ones() as usize)
    }

    pub fn bidegree_project(&self, p: usize, q: usize) -> Result<Form> {
        self.require_complex()?;
        let mut out = Form::zero(&self.frame, self.degree);
        for (b, c) in &self.terms {
            if Form::blade_bidegree(&self.frame, *b) == (p, q) {
                out.add_term(*b, c.clone());
            }
        }
        Ok(out)
    }

    /// Bidegrees present in the form, ascending in `p`.
    pub fn bidegrees(&self) -> Result<Vec<(usize, usize)>> {
        self.require_complex()?;
        let mut v: Vec<_> = self.terms.keys().map(|b| Form::blade_bidegree(&self.frame, *b)).collect();
        v.sort();
        v.dedup();
        Ok(v)
    }

    /// Complex conjugation: swaps each generator with its conjugate and conjugates coefficients.
    pub fn conj(&self) -> Result<Form> {
        self.require_complex()?;
        let mut out = Form::zero(&self.frame, self.degree);
        for (b, c) in &self.terms {
            let idx: Vec<usize> = b.indices().map(|k| self.frame.conj_index(k)).collect();
            let (blade, sign) = sort_with_sign(&idx);
            let cc = c.conjugate();
            out.add_term(blade, if sign < 0 { -cc } else { cc });
        }
        Ok(out)
    }

    /// Single coefficient of a top-degree form.
    pub fn top_coefficient(&self) -> Scalar {
        debug_assert_eq!(self.degree, self.frame.len());
        self.terms.values().next().cloned().unwrap_or_default()
    }

    /// True when every coefficient is parameter-free.
    pub fn is_constant(&self) -> bool {
        self.terms.values().all(Scalar::is_constant)
    }

    /// True when every coefficient is real.
    pub fn has_real_coeffs(&self) -> bool {
        self.terms.values().all(Scalar::is_real)
    }

    /// Coefficient vector on `basis` (blades of this degree); `None` if the
    /// form has a term outside `basis` or a parameter-dependent coefficient.
    pub fn to_vector(&self, index: &BTreeMap<Blade, usize>, len: usize) -> Option<Vec<Tower>> {
        let mut v = vec![Tower::zero(); len];
        for (b, c) in &self.terms {
            v[*index.get(b)?] = c.as_constant()?;
        }
        Some(v)
    }

    pub fn from_vector(frame: &FrameRef, degree: usize, basis: &[Blade], v: &[Tower]) -> Form {
        let mut f = Form::zero(frame, degree);
        for (b, c) in basis.iter().zip(v) {
            f.add_term(*b, Scalar::from_tower(c.clone()));
        }
        f
    }

    pub fn blade_name(frame: &Frame, b: Blade) -> String {
        if b == Blade::EMPTY {
            return "1".into();
        }
        b.indices().map(|k| frame.generator_name(k)).collect::<Vec<_>>().join("^")
    }
}

/// Sorts distinct indices, returning the blade and the permutation sign.
pub fn sort_with_sign(idx: &[usize]) -> (Blade, i32) {
    let mut inv = 0;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
                inv += 1;
            }
        }
    }
    (Blade::from_indices(idx).expect("distinct indices"), if inv % 2 == 0 { 1 } else { -1 })
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dsl())
    }
}

fn coeff_times(body: String, name: String) -> String {
    if body == "1" {
        name
    } else if body.contains('/') && !body.starts_with('(') {
        format!("({})*{}", body, name)
    } else {
        format!("{}*{}", body, name)
    }
}

impl Form {
    /// DSL rendering with ` + ` / ` - ` between terms.
    pub fn to_dsl(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (b, c)) in self.terms.iter().enumerate() {
            let name = Form::blade_name(&self.frame, *b);
            let (neg, body) = c.as_factor();
            let body = if *b == Blade::EMPTY { body } else { coeff_times(body, name) };
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&body);
        }
        s
    }
}

impl std::ops::Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.try_add(rhs).expect("incompatible forms")
    }
}

impl std::ops::Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self.try_sub(rhs).expect("incompatible forms")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(frame: &FrameRef, idx: &[usize]) -> Form {
        let z: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        Form::from_indices(frame, &z, Scalar::one())
    }

    #[test]
    fn blade_order_is_lexicographic() {
        let b = blades_of_degree(4, 2);
        let names: Vec<Vec<usize>> = b.iter().map(|x| x.indices().collect()).collect();
        assert_eq!(names, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut sorted = b.clone();
        sorted.sort();
        assert_eq!(sorted, b);
    }

    #[test]
    fn wedge_examples() {
        let fr = Frame::real(8);
        assert!(e(&fr, &[1]).wedge(&e(&fr, &[1])).unwrap().is_zero());
        assert_eq!(e(&fr, &[1, 4]).wedge(&e(&fr, &[2, 5])).unwrap(), e(&fr, &[1, 2, 4, 5]).neg());
        assert_eq!(e(&fr, &[2, 5]).wedge(&e(&fr, &[3, 4])).unwrap(), e(&fr, &[2, 3, 4, 5]));
    }

    #[test]
    fn wedge_frame_mismatch() {
        let a = Frame::real(4);
        let b = Frame::complex(2);
        assert_eq!(e(&a, &[1]).wedge(&Form::generator(&b, 0)), Err(Error::FrameMismatch));
    }

    #[test]
    fn degree_mixing_rejected() {
        let fr = Frame::real(3);
        assert_eq!(e(&fr, &[1]).try_add(&e(&fr, &[1, 2])), Err(Error::DegreeMismatch(1, 2)));
    }

    #[test]
    fn bidegree_of_mixed_blade() {
        let fr = Frame::complex(4);
        // w1 ^ w2 ^ cw1
        let f = Form::from_indices(&fr, &[0, 1, 4], Scalar::one());
        assert_eq!(f.bidegrees().unwrap(), vec![(2, 1)]);
        assert_eq!(Form::generator(&Frame::real(2), 0).bidegrees(), Err(Error::RealFrame));
    }

    #[test]
    fn conj_example() {
        let fr = Frame::complex(4);
        // -w1^w4 + w1^cw4  ->  -cw1^cw4 - w4^cw1
        let f = &Form::from_indices(&fr, &[0, 3], -Scalar::one()) + &Form::from_indices(&fr, &[0, 7], Scalar::one());
        let expect =
            &Form::from_indices(&fr, &[4, 7], -Scalar::one()) - &Form::from_indices(&fr, &[3, 4], Scalar::one());
        assert_eq!(f.conj().unwrap(), expect);
        assert_eq!(f.conj().unwrap().conj().unwrap(), f);
    }

    #[test]
    fn display_uses_generator_names() {
        let fr = Frame::complex(2);
        let f = Form::from_indices(&fr, &[0, 2], Scalar::i().scale(&Tower::frac(101, 4)));
        assert_eq!(f.to_dsl(), "(101/4)*i*w1^cw1");
    }
}
