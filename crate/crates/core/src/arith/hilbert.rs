//! Hilbert symbols and local square tests at the places of Q.

use super::rational::valuation;
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// A place of Q: the real place or a finite prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Prime(BigUint),
}

impl Place {
    pub fn prime(p: u64) -> Place {
        Place::Prime(BigUint::from(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Splits nonzero `q` as `p^v * u` with `u` a `p`-adic unit.
fn split_unit(q: &BigRational, p: &BigUint) -> (i64, BigRational) {
    let v = valuation(q, p);
    let pp = BigRational::from_integer(BigInt::from(p.clone()));
    let u = if v >= 0 { q / num_traits::pow(pp, v as usize) } else { q * num_traits::pow(pp, (-v) as usize) };
    (v, u)
}

/// Legendre symbol of a `p`-adic unit rational, `p` odd.
fn legendre_unit(u: &BigRational, p: &BigUint) -> i8 {
    let pi = BigInt::from(p.clone());
    let leg = |x: &BigInt| -> i8 {
        let r = x.mod_floor(&pi).to_biguint().expect("nonnegative residue");
        let e = (p - 1u32) >> 1;
        if r.modpow(&e, p).is_one() {
            1
        } else {
            -1
        }
    };
    leg(u.numer()) * leg(u.denom())
}

/// Residue of a 2-adic unit rational modulo 8.
fn unit_mod8(u: &BigRational) -> u8 {
    let n = u.numer().mod_floor(&BigInt::from(8)).to_u8().unwrap();
    let d = u.denom().mod_floor(&BigInt::from(8)).to_u8().unwrap();
    // odd d satisfies d^-1 = d mod 8
    (n * d) % 8
}

/// `+1` iff `z^2 = a x^2 + b y^2` has a nontrivial solution over the completion.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Zero("hilbert_symbol argument"));
    }
    match place {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Prime(p) if p == &BigUint::from(2u32) => {
            let (alpha, u) = split_unit(a, p);
            let (beta, v) = split_unit(b, p);
            let (u, v) = (unit_mod8(&u), unit_mod8(&v));
            let eps = |x: u8| ((x as u32 - 1) / 2) % 2;
            let omega = |x: u8| ((x as u32 * x as u32 - 1) / 8) % 2;
            let e = eps(u) * eps(v) + (alpha.rem_euclid(2) as u32) * omega(v) + (beta.rem_euclid(2) as u32) * omega(u);
            Ok(if e.is_multiple_of(2) { 1 } else { -1 })
        }
        Place::Prime(p) => {
            if p < &BigUint::from(2u32) {
                return Err(Error::Domain(format!("{p} is not a prime")));
            }
            let (alpha, u) = split_unit(a, p);
            let (beta, v) = split_unit(b, p);
            let eps_p = ((p - 1u32) >> 1u32).is_odd();
            let mut s: i8 = 1;
            if eps_p && alpha.rem_euclid(2) == 1 && beta.rem_euclid(2) == 1 {
                s = -s;
            }
            if beta.rem_euclid(2) == 1 {
                s *= legendre_unit(&u, p);
            }
            if alpha.rem_euclid(2) == 1 {
                s *= legendre_unit(&v, p);
            }
            Ok(s)
        }
    }
}

/// Whether nonzero `q` is a square in the completion at `place`.
pub fn is_local_square(q: &BigRational, place: &Place) -> bool {
    match place {
        Place::Infinity => q.is_positive(),
        Place::Prime(p) => {
            let (v, u) = split_unit(q, p);
            if v.rem_euclid(2) != 0 {
                return false;
            }
            if p == &BigUint::from(2u32) {
                unit_mod8(&u) == 1
            } else {
                legendre_unit(&u, p) == 1
            }
        }
    }
}
