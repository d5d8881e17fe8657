//! The number field Q(i)(√3), stored on the Q-basis {1, i, √3, i√3}.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

// basis index products: (target index, integer factor)
const MUL_TABLE: [[(usize, i64); 4]; 4] = [
    [(0, 1), (1, 1), (2, 1), (3, 1)],
    [(1, 1), (0, -1), (3, 1), (2, -1)],
    [(2, 1), (3, 1), (0, 3), (1, 3)],
    [(3, 1), (2, -1), (1, 3), (0, -3)],
];

/// `c0 + c1·i + c2·√3 + c3·i√3` with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tower {
    c: [Rational; 4],
}

impl Default for Tower {
    fn default() -> Self {
        Tower::zero()
    }
}

impl Tower {
    pub fn new(c0: Rational, c1: Rational, c2: Rational, c3: Rational) -> Self {
        Tower { c: [c0, c1, c2, c3] }
    }

    pub fn zero() -> Self {
        Tower::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Tower::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Tower::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_rational(r: Rational) -> Self {
        Tower { c: [r, Rational::zero(), Rational::zero(), Rational::zero()] }
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Tower::from_rational(rat(p, q))
    }

    pub fn i() -> Self {
        let mut t = Tower::zero();
        t.c[1] = Rational::one();
        t
    }

    pub fn sqrt3() -> Self {
        let mut t = Tower::zero();
        t.c[2] = Rational::one();
        t
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// Rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// True when the imaginary coordinates vanish (the element lies in Q(√3)).
    pub fn is_real(&self) -> bool {
        self.c[1].is_zero() && self.c[3].is_zero()
    }

    pub fn conjugate(&self) -> Tower {
        Tower { c: [self.c[0].clone(), -&self.c[1], self.c[2].clone(), -&self.c[3]] }
    }

    pub fn real_part(&self) -> Tower {
        Tower::new(self.c[0].clone(), Rational::zero(), self.c[2].clone(), Rational::zero())
    }

    pub fn imag_part(&self) -> Tower {
        Tower::new(self.c[1].clone(), Rational::zero(), self.c[3].clone(), Rational::zero())
    }

    pub fn scale(&self, r: &Rational) -> Tower {
        Tower { c: [&self.c[0] * r, &self.c[1] * r, &self.c[2] * r, &self.c[3] * r] }
    }

    /// Sign of a real element `p + q√3`; `None` if the element is not real.
    pub fn real_sign(&self) -> Option<Ordering> {
        if !self.is_real() {
            return None;
        }
        let (p, q) = (&self.c[0], &self.c[2]);
        let sp = p.cmp(&Rational::zero());
        let sq = q.cmp(&Rational::zero());
        Some(match (sp, sq) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (a, b) if a == b => a,
            // opposite signs: compare p^2 with 3 q^2
            (a, _) => {
                let p2 = p * p;
                let q2 = q * q * Rational::from_integer(3.into());
                match p2.cmp(&q2) {
                    Ordering::Greater => a,
                    Ordering::Less => a.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        })
    }

    pub fn inverse(&self) -> Result<Tower> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        // x = p + q√3 with p, q in Q(i); x^{-1} = (p - q√3) / (p^2 - 3 q^2)
        let p = Gauss(self.c[0].clone(), self.c[1].clone());
        let q = Gauss(self.c[2].clone(), self.c[3].clone());
        let norm = p.mul(&p).sub(&q.mul(&q).scale(&Rational::from_integer(3.into())));
        let ninv = norm.inv();
        let a = p.mul(&ninv);
        let b = q.mul(&ninv);
        Ok(Tower::new(a.0, a.1, -b.0, -b.1))
    }

    /// Product of every coordinate denominator's lcm; multiplying by it yields integer coordinates.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.c.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
    }
}

#[derive(Clone)]
struct Gauss(Rational, Rational);

impl Gauss {
    fn mul(&self, o: &Gauss) -> Gauss {
        Gauss(&self.0 * &o.0 - &self.1 * &o.1, &self.0 * &o.1 + &self.1 * &o.0)
    }
    fn sub(&self, o: &Gauss) -> Gauss {
        Gauss(&self.0 - &o.0, &self.1 - &o.1)
    }
    fn scale(&self, r: &Rational) -> Gauss {
        Gauss(&self.0 * r, &self.1 * r)
    }
    fn inv(&self) -> Gauss {
        let n = &self.0 * &self.0 + &self.1 * &self.1;
        Gauss(&self.0 / &n, -&self.1 / &n)
    }
}

impl<'a> Add<&'a Tower> for &'a Tower {
    type Output = Tower;
    fn add(self, rhs: &Tower) -> Tower {
        Tower { c: [&self.c[0] + &rhs.c[0], &self.c[1] + &rhs.c[1], &self.c[2] + &rhs.c[2], &self.c[3] + &rhs.c[3]] }
    }
}

impl<'a> Sub<&'a Tower> for &'a Tower {
    type Output = Tower;
    fn sub(self, rhs: &Tower) -> Tower {
        Tower { c: [&self.c[0] - &rhs.c[0], &self.c[1] - &rhs.c[1], &self.c[2] - &rhs.c[2], &self.c[3] - &rhs.c[3]] }
    }
}

impl<'a> Mul<&'a Tower> for &'a Tower {
    type Output = Tower;
    fn mul(self, rhs: &Tower) -> Tower {
        let mut out = Tower::zero();
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.c.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let (k, f) = MUL_TABLE[i][j];
                out.c[k] += x * y * Rational::from_integer(f.into());
            }
        }
        out
    }
}

impl Neg for &Tower {
    type Output = Tower;
    fn neg(self) -> Tower {
        Tower { c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]] }
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Tower, Add, add);
forward_owned!(Tower, Sub, sub);
forward_owned!(Tower, Mul, mul);

impl Neg for Tower {
    type Output = Tower;
    fn neg(self) -> Tower {
        -&self
    }
}

impl From<Rational> for Tower {
    fn from(r: Rational) -> Self {
        Tower::from_rational(r)
    }
}

impl From<i64> for Tower {
    fn from(n: i64) -> Self {
        Tower::from_int(n)
    }
}

impl crate::ring::Ring for Tower {
    fn zero() -> Self {
        Tower::zero()
    }
    fn one() -> Self {
        Tower::one()
    }
    fn is_zero(&self) -> bool {
        Tower::is_zero(self)
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

impl crate::ring::Domain for Tower {
    fn exact_div(&self, rhs: &Self) -> Self {
        self * &rhs.inverse().expect("division by zero")
    }
}

impl crate::ring::Field for Tower {
    fn inv(&self) -> Self {
        self.inverse().expect("division by zero")
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders `|r|·unit` for a nonzero coefficient, `unit` possibly empty.
pub(crate) fn fmt_unit_term(r: &Rational, unit: &str) -> (bool, String) {
    let neg = r.is_negative();
    let a = r.abs();
    let body = if unit.is_empty() {
        fmt_rational(&a)
    } else if a.is_one() {
        unit.to_string()
    } else if a.is_integer() {
        format!("{}*{}", fmt_rational(&a), unit)
    } else {
        format!("({})*{}", fmt_rational(&a), unit)
    };
    (neg, body)
}

pub(crate) fn join_signed(terms: &[(bool, String)]) -> String {
    let mut s = String::new();
    for (k, (neg, body)) in terms.iter().enumerate() {
        match (k, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push('-'),
            (_, false) => s.push('+'),
        }
        s.push_str(body);
    }
    s
}

impl Tower {
    pub(crate) fn signed_terms(&self) -> Vec<(bool, String)> {
        const UNITS: [&str; 4] = ["", "i", "s3", "i*s3"];
        self.c.iter().zip(UNITS).filter(|(r, _)| !r.is_zero()).map(|(r, u)| fmt_unit_term(r, u)).collect()
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.signed_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", join_signed(&terms))
    }
}
