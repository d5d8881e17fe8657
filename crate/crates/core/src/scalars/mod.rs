//! Exact coefficients: the tower Q ⊂ Q(i) ⊂ Q(i)(√3) and polynomials in the
//! real parameters `a`, `b` over it.

mod tower;

pub(crate) use tower::join_signed;
pub use tower::{rat, Rational, Tower};

use crate::error::{Error, Result};
use crate::ring::Ring;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// The two real parameters a scalar may depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    A,
    B,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::A => "a",
            Param::B => "b",
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        match s {
            "a" => Some(Param::A),
            "b" => Some(Param::B),
            _ => None,
        }
    }
}

/// Values for the parameters; unset entries stay symbolic under `specialize`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub a: Option<Rational>,
    pub b: Option<Rational>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, p: Param, v: Rational) -> Self {
        self.set(p, v);
        self
    }

    pub fn set(&mut self, p: Param, v: Rational) {
        match p {
            Param::A => self.a = Some(v),
            Param::B => self.b = Some(v),
        }
    }

    pub fn get(&self, p: Param) -> Option<&Rational> {
        match p {
            Param::A => self.a.as_ref(),
            Param::B => self.b.as_ref(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_none() && self.b.is_none()
    }
}

/// Exponents `(m, n)` of the monomial `a^m b^n`.
pub type Monomial = (u32, u32);

/// Sparse polynomial in `a`, `b` with tower coefficients. No zero coefficient is stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Scalar {
    terms: BTreeMap<Monomial, Tower>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_tower(Tower::one())
    }

    pub fn from_tower(t: Tower) -> Self {
        Scalar::monomial((0, 0), t)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_tower(Tower::from_int(n))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Scalar::from_tower(Tower::frac(p, q))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::from_tower(Tower::from_rational(r))
    }

    pub fn i() -> Self {
        Scalar::from_tower(Tower::i())
    }

    pub fn sqrt3() -> Self {
        Scalar::from_tower(Tower::sqrt3())
    }

    pub fn param(p: Param) -> Self {
        let m = match p {
            Param::A => (1, 0),
            Param::B => (0, 1),
        };
        Scalar::monomial(m, Tower::one())
    }

    pub fn a() -> Self {
        Scalar::param(Param::A)
    }

    pub fn b() -> Self {
        Scalar::param(Param::B)
    }

    pub fn monomial(m: Monomial, c: Tower) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Scalar { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Tower)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|t| t.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == (0, 0))
    }

    pub fn as_constant(&self) -> Option<Tower> {
        if self.is_constant() {
            Some(self.terms.get(&(0, 0)).cloned().unwrap_or_else(Tower::zero))
        } else {
            None
        }
    }

    /// Constant value, or `NonConstant` if `a` or `b` occurs.
    pub fn constant(&self) -> Result<Tower> {
        self.as_constant().ok_or_else(|| Error::NonConstant(self.to_string()))
    }

    pub fn params(&self) -> Vec<Param> {
        let mut out = Vec::new();
        if self.terms.keys().any(|m| m.0 > 0) {
            out.push(Param::A);
        }
        if self.terms.keys().any(|m| m.1 > 0) {
            out.push(Param::B);
        }
        out
    }

    /// True when every coefficient has vanishing imaginary coordinates.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(Tower::is_real)
    }

    pub fn conjugate(&self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(m, c)| (*m, c.conjugate())).collect() }
    }

    pub fn real_part(&self) -> Scalar {
        self.map_coeffs(Tower::real_part)
    }

    pub fn imag_part(&self) -> Scalar {
        self.map_coeffs(Tower::imag_part)
    }

    pub fn scale(&self, t: &Tower) -> Scalar {
        self.map_coeffs(|c| c * t)
    }

    fn map_coeffs(&self, f: impl Fn(&Tower) -> Tower) -> Scalar {
        Scalar {
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let v = f(c);
                    (!v.is_zero()).then_some((*m, v))
                })
                .collect(),
        }
    }

    pub fn invert(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(Scalar::from_tower(self.constant()?.inverse()?))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        (0..e).fold(Scalar::one(), |acc, _| &acc * self)
    }

    pub fn evaluate(&self, assignment: &Assignment) -> Result<Tower> {
        let s = self.specialize(assignment);
        if let Some(p) = s.params().first() {
            return Err(Error::UnboundParameter(p.name().to_string()));
        }
        Ok(s.as_constant().unwrap())
    }

    /// Substitutes the parameters that `assignment` binds; others stay symbolic.
    pub fn specialize(&self, assignment: &Assignment) -> Scalar {
        if assignment.is_empty() {
            return self.clone();
        }
        let mut out = Scalar::zero();
        for (&(m, n), c) in &self.terms {
            let mut t = c.clone();
            let mut mono = (m, n);
            if let Some(av) = &assignment.a {
                t = t.scale(&num_traits::pow(av.clone(), m as usize));
                mono.0 = 0;
            }
            if let Some(bv) = &assignment.b {
                t = t.scale(&num_traits::pow(bv.clone(), n as usize));
                mono.1 = 0;
            }
            out.add_term(mono, t);
        }
        out
    }

    /// Replaces `p` by an arbitrary scalar.
    pub fn substitute(&self, p: Param, value: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (&(m, n), c) in &self.terms {
            let (e, rest) = match p {
                Param::A => (m, (0, n)),
                Param::B => (n, (m, 0)),
            };
            let term = &Scalar::monomial(rest, c.clone()) * &value.pow(e);
            out = &out + &term;
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Tower) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// True if every coefficient is a nonnegative rational.
    pub fn has_nonnegative_rational_coeffs(&self) -> bool {
        use num_traits::Signed;
        self.terms.values().all(|c| c.as_rational().is_some_and(|r| !r.is_negative()))
    }

    /// Renders the scalar with each term as a `(negative, body)` pair.
    pub(crate) fn signed_terms(&self) -> Vec<(bool, String)> {
        let mut out = Vec::new();
        for (&(m, n), c) in &self.terms {
            let mono: Vec<&str> =
                std::iter::repeat_n("a", m as usize).chain(std::iter::repeat_n("b", n as usize)).collect();
            let mono = mono.join("*");
            let ct = c.signed_terms();
            if mono.is_empty() {
                out.extend(ct);
            } else if ct.len() == 1 {
                let (neg, body) = &ct[0];
                let body = if body == "1" {
                    mono.clone()
                } else if body.chars().all(|ch| ch.is_ascii_digit())
                    || body.starts_with('(')
                    || body.contains(char::is_alphabetic)
                {
                    format!("{}*{}", body, mono)
                } else {
                    format!("({})*{}", body, mono)
                };
                out.push((*neg, body));
            } else {
                out.push((false, format!("({})*{}", join_signed(&ct), mono)));
            }
        }
        out
    }

    /// Formats as a factor of a product: parenthesized when it has several terms.
    pub fn as_factor(&self) -> (bool, String) {
        let t = self.signed_terms();
        match t.len() {
            0 => (false, "0".into()),
            1 => t.into_iter().next().unwrap(),
            _ => (false, format!("({})", join_signed(&t))),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.signed_terms();
        if t.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", join_signed(&t))
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term((m1.0 + m2.0, m1.1 + m2.1), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl From<Tower> for Scalar {
    fn from(t: Tower) -> Self {
        Scalar::from_tower(t)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_examples() {
        assert_eq!(Scalar::i().conjugate(), -Scalar::i());
        let x = &(&Scalar::from_int(2) * &Scalar::a()) + &Scalar::from_int(3).scale(&Tower::i());
        let y = &(&Scalar::from_int(2) * &Scalar::a()) - &Scalar::from_int(3).scale(&Tower::i());
        assert_eq!(x.conjugate(), y);
        let z = &(&Scalar::one() + &Scalar::i()) * &Scalar::sqrt3();
        let zc = z.conjugate();
        assert_eq!(zc, &(&Scalar::one() - &Scalar::i()) * &Scalar::sqrt3());
        // z * conj(z) = |1+i|^2 * 3 = 6 has no i-coordinates
        let n = &z * &zc;
        assert!(n.is_real());
        assert_eq!(n, Scalar::from_int(6));
    }

    #[test]
    fn invert_examples() {
        let x = &Scalar::from_int(2) + &Scalar::i();
        let inv = x.invert().unwrap();
        assert_eq!(inv, (&Scalar::from_int(2) - &Scalar::i()).scale(&Tower::frac(1, 5)));
        assert_eq!(Scalar::sqrt3().invert().unwrap(), Scalar::sqrt3().scale(&Tower::frac(1, 3)));
        assert_eq!(Scalar::one().invert().unwrap(), Scalar::one());
    }

    #[test]
    fn invert_errors() {
        assert_eq!(Scalar::zero().invert(), Err(Error::ZeroInverse));
        assert!(matches!(Scalar::a().invert(), Err(Error::NonConstant(_))));
        let x = &Scalar::one() + &Scalar::b();
        assert!(matches!(x.invert(), Err(Error::NonConstant(_))));
    }

    #[test]
    fn evaluate_examples() {
        // 4a/√3 at a = 3 is 4√3
        let alpha = Scalar::a().scale(&Tower::sqrt3().inverse().unwrap().scale(&rat(4, 1)));
        let asg = Assignment::new().with(Param::A, rat(3, 1));
        assert_eq!(alpha.evaluate(&asg).unwrap(), Tower::sqrt3().scale(&rat(4, 1)));
        // 2b/3 at b = 1
        let beta = Scalar::b().scale(&Tower::frac(2, 3));
        let asg = Assignment::new().with(Param::B, rat(1, 1));
        assert_eq!(beta.evaluate(&asg).unwrap(), Tower::frac(2, 3));
        assert_eq!(Scalar::zero().evaluate(&asg).unwrap(), Tower::zero());
    }

    #[test]
    fn evaluate_unbound() {
        let asg = Assignment::new().with(Param::A, rat(1, 1));
        assert_eq!(Scalar::b().evaluate(&asg), Err(Error::UnboundParameter("b".into())));
    }

    #[test]
    fn substitute_param() {
        // a(a+1) with a -> 2b gives 4b^2 + 2b
        let x = &Scalar::a() * &(&Scalar::a() + &Scalar::one());
        let y = x.substitute(Param::A, &Scalar::b().scale(&Tower::from_int(2)));
        let b = Scalar::b();
        let expect = &(&b * &b).scale(&Tower::from_int(4)) + &b.scale(&Tower::from_int(2));
        assert_eq!(y, expect);
    }

    #[test]
    fn display_forms() {
        let x = &Scalar::a() * &(&Scalar::a() + &Scalar::one());
        assert_eq!(x.to_string(), "a+a*a");
        assert_eq!(Scalar::i().scale(&Tower::frac(1, 2)).to_string(), "(1/2)*i");
        assert_eq!(Scalar::b().scale(&Tower::from_int(-2)).to_string(), "-2*b");
        let y = &Scalar::a() * &(&Scalar::one() + &Scalar::i());
        assert_eq!(y.to_string(), "(1+i)*a");
        assert_eq!(Scalar::a().scale(&Tower::frac(-1, 2)).to_string(), "-(1/2)*a");
    }
}
