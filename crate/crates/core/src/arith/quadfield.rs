//! Exact arithmetic in real quadratic fields Q(sqrt d).

use super::factor::factorize;
use super::rational::{exact_sqrt, rat};
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Q(sqrt d) for a squarefree `d > 1`; the fixed real embedding takes
/// `sqrt d > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadField {
    d: u64,
}

impl QuadField {
    pub fn new(d: u64) -> Result<QuadField> {
        if d < 2 {
            return Err(Error::Domain(format!("Q(sqrt {d}) is not a real quadratic field")));
        }
        if factorize(&BigUint::from(d)).values().any(|&e| e > 1) {
            return Err(Error::Domain(format!("{d} is not squarefree")));
        }
        Ok(QuadField { d })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn sqrt_d(&self) -> QuadFieldElem {
        QuadFieldElem::new(rat(0), rat(1), *self)
    }

    pub fn from_rational(&self, q: BigRational) -> QuadFieldElem {
        QuadFieldElem::new(q, rat(0), *self)
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt {})", self.d)
    }
}

/// Real embedding selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Embedding {
    /// sqrt d > 0
    Identity,
    /// sqrt d < 0
    Conjugate,
}

/// `a + b sqrt d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadFieldElem {
    pub a: BigRational,
    pub b: BigRational,
    field: QuadField,
}

impl QuadFieldElem {
    pub fn new(a: BigRational, b: BigRational, field: QuadField) -> Self {
        QuadFieldElem { a, b, field }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn d(&self) -> u64 {
        self.field.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The Galois conjugate `a - b sqrt d`.
    pub fn conjugate(&self) -> Self {
        QuadFieldElem::new(self.a.clone(), -&self.b, self.field)
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.field.d as i64)
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conjugate();
        Some(QuadFieldElem::new(c.a / &n, c.b / &n, self.field))
    }

    /// Sign at the chosen real embedding.
    pub fn sign_at(&self, emb: Embedding) -> Ordering {
        let b = match emb {
            Embedding::Identity => self.b.clone(),
            Embedding::Conjugate => -&self.b,
        };
        let sa = self.a.cmp(&BigRational::zero());
        let sb = b.cmp(&BigRational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with d b^2
        let lhs = &self.a * &self.a;
        let rhs = &b * &b * rat(self.field.d as i64);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn sign(&self) -> Ordering {
        self.sign_at(Embedding::Identity)
    }

    /// Positive at every real embedding.
    pub fn is_totally_positive(&self) -> bool {
        self.sign_at(Embedding::Identity) == Ordering::Greater
            && self.sign_at(Embedding::Conjugate) == Ordering::Greater
    }

    /// Whether the element lies in the ring of integers (integral trace and norm).
    pub fn is_algebraic_integer(&self) -> bool {
        self.trace().is_integer() && self.norm().is_integer()
    }

    /// Exact square root inside the field, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        let f = self.field;
        let d = rat(f.d as i64);
        if self.b.is_zero() {
            if let Some(r) = exact_sqrt(&self.a) {
                return Some(f.from_rational(r));
            }
            // a = d y^2
            return exact_sqrt(&(&self.a / &d)).map(|y| QuadFieldElem::new(rat(0), y, f));
        }
        // (x + y sqrt d)^2 = a + b sqrt d  =>  x^2 = (a +- sqrt(a^2 - d b^2)) / 2, y = b / 2x
        let s = exact_sqrt(&self.norm())?;
        for cand in [(&self.a + &s) / rat(2), (&self.a - &s) / rat(2)] {
            if cand.is_zero() {
                continue;
            }
            if let Some(x) = exact_sqrt(&cand) {
                let y = &self.b / (rat(2) * &x);
                let w = QuadFieldElem::new(x, y, f);
                if &w * &w == *self {
                    return Some(w);
                }
            }
        }
        None
    }

    pub fn numerators_and_denominators(&self) -> [&BigInt; 4] {
        [self.a.numer(), self.a.denom(), self.b.numer(), self.b.denom()]
    }
}

/// Whether `x` is a square in its field, with a witness `w`, `w^2 = x`.
pub fn is_square_in_field(x: &QuadFieldElem) -> (bool, Option<QuadFieldElem>) {
    match x.sqrt() {
        Some(w) => (true, Some(w)),
        None => (false, None),
    }
}

pub fn field_conjugate(x: &QuadFieldElem) -> QuadFieldElem {
    x.conjugate()
}

fn same_field(x: &QuadFieldElem, y: &QuadFieldElem) -> QuadField {
    assert_eq!(x.field, y.field, "mixed quadratic fields");
    x.field
}

impl<'a> Add<&'a QuadFieldElem> for &'a QuadFieldElem {
    type Output = QuadFieldElem;
    fn add(self, rhs: &QuadFieldElem) -> QuadFieldElem {
        let f = same_field(self, rhs);
        QuadFieldElem::new(&self.a + &rhs.a, &self.b + &rhs.b, f)
    }
}

impl<'a> Sub<&'a QuadFieldElem> for &'a QuadFieldElem {
    type Output = QuadFieldElem;
    fn sub(self, rhs: &QuadFieldElem) -> QuadFieldElem {
        let f = same_field(self, rhs);
        QuadFieldElem::new(&self.a - &rhs.a, &self.b - &rhs.b, f)
    }
}

impl<'a> Mul<&'a QuadFieldElem> for &'a QuadFieldElem {
    type Output = QuadFieldElem;
    fn mul(self, rhs: &QuadFieldElem) -> QuadFieldElem {
        let f = same_field(self, rhs);
        let d = rat(f.d as i64);
        QuadFieldElem::new(&self.a * &rhs.a + &self.b * &rhs.b * d, &self.a * &rhs.b + &self.b * &rhs.a, f)
    }
}

impl Neg for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn neg(self) -> QuadFieldElem {
        QuadFieldElem::new(-&self.a, -&self.b, self.field)
    }
}

impl fmt::Display for QuadFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sqrt = format!("sqrt{}", self.field.d);
        let bpart = if self.b.is_one() {
            sqrt
        } else if (-&self.b).is_one() {
            format!("-{sqrt}")
        } else {
            format!("{}*{sqrt}", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{bpart}")
        } else if self.b.is_negative() {
            write!(f, "{}{}", self.a, bpart)
        } else {
            write!(f, "{}+{}", self.a, bpart)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::ratio;

    fn q5() -> QuadField {
        QuadField::new(5).unwrap()
    }

    fn e(a: BigRational, b: BigRational) -> QuadFieldElem {
        QuadFieldElem::new(a, b, q5())
    }

    #[test]
    fn field_validation() {
        assert!(QuadField::new(1).is_err());
        assert!(QuadField::new(12).is_err());
        assert!(QuadField::new(10).is_ok());
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(q5().sqrt_d().conjugate(), e(rat(0), rat(-1)));
        assert_eq!(q5().from_rational(rat(7)).conjugate(), q5().from_rational(rat(7)));
        let c = e(ratio(1, 4), ratio(1, 4));
        assert_eq!(c.conjugate(), e(ratio(1, 4), ratio(-1, 4)));
    }

    #[test]
    fn squares() {
        assert_eq!(q5().from_rational(rat(5)).sqrt(), Some(q5().sqrt_d()));
        assert_eq!(q5().from_rational(rat(2)).sqrt(), None);
        // (1 + sqrt5)^2 = 6 + 2 sqrt5
        let w = e(rat(6), rat(2)).sqrt().unwrap();
        assert_eq!(&w * &w, e(rat(6), rat(2)));
        // golden ratio squared: (3 + sqrt5)/2
        let phi2 = e(ratio(3, 2), ratio(1, 2));
        let w = phi2.sqrt().unwrap();
        assert_eq!(&w * &w, phi2);
    }

    #[test]
    fn two_is_not_a_square_bounded_search() {
        // bounded-denominator search; N(w)^2 = N(2) = 4 forces N(w) = +-2,
        // and x^2 - 5y^2 = +-2 has no solution mod 5
        let two = q5().from_rational(rat(2));
        for den in 1..=12i64 {
            for xn in -30..=30i64 {
                for yn in -30..=30i64 {
                    let w = e(ratio(xn, den), ratio(yn, den));
                    assert_ne!(&w * &w, two);
                }
            }
        }
        assert_eq!(is_square_in_field(&two), (false, None));
    }

    #[test]
    fn signs_at_embeddings() {
        // 2 - sqrt5 < 0, conjugate 2 + sqrt5 > 0
        let x = e(rat(2), rat(-1));
        assert_eq!(x.sign_at(Embedding::Identity), Ordering::Less);
        assert_eq!(x.sign_at(Embedding::Conjugate), Ordering::Greater);
        assert!(!x.is_totally_positive());
        assert!(e(rat(3), rat(1)).is_totally_positive());
    }

    #[test]
    fn integrality() {
        // golden ratio (1 + sqrt5)/2 is integral, (1 + sqrt5)/4 is not
        assert!(e(ratio(1, 2), ratio(1, 2)).is_algebraic_integer());
        assert!(!e(ratio(1, 4), ratio(1, 4)).is_algebraic_integer());
    }

    #[test]
    fn inverse() {
        let x = e(rat(2), rat(1));
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, q5().from_rational(rat(1)));
    }
}
