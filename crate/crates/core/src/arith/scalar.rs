//! The scalar abstraction shared by forms and matrices: Q and Q(sqrt d).

use super::quadfield::{Embedding, QuadField, QuadFieldElem};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::hash::Hash;

/// Marker for the field of rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

/// Which field a form or matrix lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Rational,
    Quadratic(QuadField),
}

impl std::fmt::Display for FieldTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "Q"),
            FieldTag::Quadratic(k) => write!(f, "{k}"),
        }
    }
}

/// An exact, ordered (via a fixed real embedding) field element.
pub trait Scalar: Clone + Eq + Hash + Debug + Display + Send + Sync + 'static {
    type Field: Copy + Eq + Hash + Debug + Send + Sync + 'static;

    fn zero_of(field: &Self::Field) -> Self;
    fn one_of(field: &Self::Field) -> Self;
    fn from_rational(field: &Self::Field, q: BigRational) -> Self;
    fn field_of(&self) -> Self::Field;
    fn tag(field: &Self::Field) -> FieldTag;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn eq_zero(&self) -> bool;

    /// Sign at the chosen embedding; for Q both embeddings coincide.
    fn sign_at(&self, emb: Embedding) -> Ordering;
    /// Galois conjugate; the identity on Q.
    fn conjugate(&self) -> Self;
    /// Membership in the ring of integers.
    fn is_integral(&self) -> bool;
    fn to_rational(&self) -> Option<BigRational>;
    /// An exact square root inside the field, if there is one.
    fn exact_sqrt(&self) -> Option<Self>;

    fn sign(&self) -> Ordering {
        self.sign_at(Embedding::Identity)
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn eq_one(&self) -> bool {
        *self == Self::one_of(&self.field_of())
    }

    /// Canonical positive multiple of a direction; primitive integral over Q.
    fn normalize_direction(v: &[Self]) -> Vec<Self> {
        v.to_vec()
    }
}

impl Scalar for BigRational {
    type Field = Rationals;

    fn zero_of(_: &Rationals) -> Self {
        BigRational::zero()
    }
    fn one_of(_: &Rationals) -> Self {
        BigRational::one()
    }
    fn from_rational(_: &Rationals, q: BigRational) -> Self {
        q
    }
    fn field_of(&self) -> Rationals {
        Rationals
    }
    fn tag(_: &Rationals) -> FieldTag {
        FieldTag::Rational
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
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn eq_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sign_at(&self, _: Embedding) -> Ordering {
        self.cmp(&BigRational::zero())
    }
    fn conjugate(&self) -> Self {
        self.clone()
    }
    fn is_integral(&self) -> bool {
        self.is_integer()
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn exact_sqrt(&self) -> Option<Self> {
        super::rational::exact_sqrt(self)
    }
    fn normalize_direction(v: &[Self]) -> Vec<Self> {
        super::rational::primitive_integer_vector(v).into_iter().map(BigRational::from_integer).collect()
    }
}

impl Scalar for QuadFieldElem {
    type Field = QuadField;

    fn zero_of(f: &QuadField) -> Self {
        f.from_rational(BigRational::zero())
    }
    fn one_of(f: &QuadField) -> Self {
        f.from_rational(BigRational::one())
    }
    fn from_rational(f: &QuadField, q: BigRational) -> Self {
        f.from_rational(q)
    }
    fn field_of(&self) -> QuadField {
        self.field()
    }
    fn tag(f: &QuadField) -> FieldTag {
        FieldTag::Quadratic(*f)
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
    fn inv(&self) -> Option<Self> {
        QuadFieldElem::inv(self)
    }
    fn eq_zero(&self) -> bool {
        QuadFieldElem::is_zero(self)
    }
    fn sign_at(&self, emb: Embedding) -> Ordering {
        QuadFieldElem::sign_at(self, emb)
    }
    fn conjugate(&self) -> Self {
        QuadFieldElem::conjugate(self)
    }
    fn is_integral(&self) -> bool {
        self.is_algebraic_integer()
    }
    fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.a.clone())
        } else {
            None
        }
    }
    fn exact_sqrt(&self) -> Option<Self> {
        QuadFieldElem::sqrt(self)
    }
}
