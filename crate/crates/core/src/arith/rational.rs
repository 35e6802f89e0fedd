//! Rational helpers: square classes, valuations and exact square roots.

use super::factor::factorize;
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A class in Q*/(Q*)^2, represented by its squarefree integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass(BigInt);

impl SquareClass {
    pub fn representative(&self) -> &BigInt {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_one()
    }

    /// Class of the product.
    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        squarefree_part(&BigRational::from_integer(&self.0 * &other.0)).expect("product of nonzero classes is nonzero")
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.0.clone())
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Squarefree integer `s` with `q = s * t^2` for some rational `t`.
pub fn squarefree_part(q: &BigRational) -> Result<SquareClass> {
    if q.is_zero() {
        return Err(Error::Zero("squarefree_part of 0"));
    }
    // n/d and n*d share a square class
    let n = q.numer() * q.denom();
    let mut s = BigInt::one();
    for (p, e) in factorize(n.magnitude()) {
        if e % 2 == 1 {
            s *= BigInt::from(p);
        }
    }
    if n.is_negative() {
        s = -s;
    }
    Ok(SquareClass(s))
}

/// `p`-adic valuation of a nonzero rational.
pub fn valuation(q: &BigRational, p: &BigUint) -> i64 {
    debug_assert!(!q.is_zero());
    val_int(q.numer().magnitude(), p) - val_int(q.denom().magnitude(), p)
}

pub fn val_int(n: &BigUint, p: &BigUint) -> i64 {
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() || n.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Exact integer square root, if `n` is a perfect square.
pub fn exact_sqrt_int(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact rational square root, if `q` is a square in Q.
pub fn exact_sqrt(q: &BigRational) -> Option<BigRational> {
    let n = exact_sqrt_int(q.numer())?;
    let d = exact_sqrt_int(q.denom())?;
    Some(BigRational::new(n, d))
}

pub fn is_square(q: &BigRational) -> bool {
    exact_sqrt(q).is_some()
}

/// Distinct primes dividing numerator or denominator.
pub fn prime_support(q: &BigRational) -> Vec<BigUint> {
    if q.is_zero() {
        return Vec::new();
    }
    let mut v: Vec<BigUint> = factorize(q.numer().magnitude()).into_keys().collect();
    for p in factorize(q.denom().magnitude()).into_keys() {
        if !v.contains(&p) {
            v.push(p);
        }
    }
    v.sort();
    v
}

/// Least common multiple of denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a BigRational>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction (positive scale factor). Zero vectors stay zero.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let den = common_denominator(v.iter());
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn sign_of(q: &BigRational) -> Sign {
    q.numer().sign()
}
