//! Quadratic forms over Q and Q(sqrt d): invariants, diagonalization,
//! isotropy and representation with basis-change certificates.

mod diagonalize;
mod local;
mod represent;
mod search;

pub use diagonalize::{diagonalize, Diagonalization};
pub use local::{discriminant_class, hasse_invariant, is_isotropic, is_locally_isotropic, relevant_places};
pub use represent::{
    represents_form, represents_number, represents_number_with, RepresentMode, Representation, SplittingWitness,
};
pub use search::{find_isotropic_vector, IsotropyCertificate, IsotropyVerdict};

use crate::arith::{rat, BigRational, Embedding, FieldTag, QuadFieldElem, Rationals, Scalar};
use crate::error::{Error, Result};
use crate::matrix::{bilinear, Matrix};
use std::cmp::Ordering;
use std::fmt;

/// A quadratic form given by its symmetric Gram matrix; `f(v) = v^t G v`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm<T: Scalar> {
    gram: Matrix<T>,
}

pub type RationalForm = QuadraticForm<BigRational>;

impl<T: Scalar> fmt::Debug for QuadraticForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadraticForm over {} {:?}", T::tag(&self.field()), self.gram)
    }
}

/// Sign counts of a diagonalization: `(pos, neg, zero)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Signature {
    pub fn new(pos: usize, neg: usize, zero: usize) -> Self {
        Signature { pos, neg, zero }
    }

    pub fn rank(&self) -> usize {
        self.pos + self.neg
    }

    pub fn is_lorentzian(&self) -> bool {
        self.neg == 1 && self.zero == 0 && self.pos >= 1
    }

    pub fn is_indefinite(&self) -> bool {
        self.pos > 0 && self.neg > 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.pos, self.neg, self.zero)
    }
}

impl<T: Scalar> QuadraticForm<T> {
    /// Validates that the Gram matrix is square and exactly symmetric.
    pub fn new(gram: Matrix<T>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch { expected: gram.rows(), found: gram.cols() });
        }
        if !gram.is_symmetric() {
            return Err(Error::Domain("Gram matrix is not symmetric".into()));
        }
        Ok(QuadraticForm { gram })
    }

    pub fn diagonal(entries: &[T], field: T::Field) -> Self {
        QuadraticForm { gram: Matrix::diagonal(entries, field) }
    }

    pub fn empty(field: T::Field) -> Self {
        QuadraticForm { gram: Matrix::zeros(0, 0, field) }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    pub fn field(&self) -> T::Field {
        self.gram.field()
    }

    pub fn field_tag(&self) -> FieldTag {
        T::tag(&self.field())
    }

    /// `f(v)`.
    pub fn value(&self, v: &[T]) -> T {
        bilinear(&self.gram, v, v)
    }

    /// The associated bilinear pairing `(u, v) = u^t G v`.
    pub fn pairing(&self, u: &[T], v: &[T]) -> T {
        bilinear(&self.gram, u, v)
    }

    pub fn determinant(&self) -> T {
        self.gram.determinant()
    }

    pub fn is_singular(&self) -> bool {
        self.dim() > 0 && self.determinant().eq_zero()
    }

    pub(crate) fn require_nonsingular(&self, what: &str) -> Result<()> {
        if self.is_singular() {
            Err(Error::Singular(format!("{what} requires a nonsingular form")))
        } else {
            Ok(())
        }
    }

    /// Sign counts at the fixed real embedding.
    pub fn signature(&self) -> Signature {
        self.signature_at(Embedding::Identity)
    }

    pub fn signature_at(&self, emb: Embedding) -> Signature {
        let d = diagonalize(self);
        let mut s = Signature::new(0, 0, 0);
        for x in d.diagonal.gram.diagonal_entries() {
            match x.sign_at(emb) {
                Ordering::Greater => s.pos += 1,
                Ordering::Less => s.neg += 1,
                Ordering::Equal => s.zero += 1,
            }
        }
        s
    }

    /// Positive definiteness at an embedding via leading principal minors.
    pub fn is_positive_definite_at(&self, emb: Embedding) -> bool {
        self.gram.leading_minors().iter().all(|m| m.sign_at(emb) == Ordering::Greater)
    }

    /// The entrywise Galois conjugate form.
    pub fn conjugate(&self) -> Self {
        QuadraticForm { gram: self.gram.map(|x| x.conjugate()) }
    }

    /// Principal restriction to the span of the basis vectors in `idx`.
    pub fn restrict(&self, idx: &[usize]) -> Result<Self> {
        if idx.is_empty() {
            return Err(Error::Domain("restriction to an empty index set".into()));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.dim()) {
            return Err(Error::IndexOutOfRange { index: bad, dim: self.dim() });
        }
        Ok(QuadraticForm { gram: self.gram.principal_submatrix(idx) })
    }

    /// Orthogonal direct sum (block-diagonal Gram matrix).
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field_tag(), other.field_tag())));
        }
        Ok(QuadraticForm { gram: self.gram.block_diagonal(&other.gram) })
    }

    /// Entrywise scaling of the Gram matrix by a nonzero scalar.
    pub fn scale(&self, lambda: &T) -> Result<Self> {
        if lambda.eq_zero() {
            return Err(Error::Zero("scale factor"));
        }
        Ok(QuadraticForm { gram: self.gram.scale(lambda) })
    }

    /// The form in a new basis: `T^t G T`.
    pub fn transform(&self, t: &Matrix<T>) -> Self {
        QuadraticForm { gram: t.congruence(&self.gram) }
    }
}

/// A form over Q or over a real quadratic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyForm {
    Rational(RationalForm),
    Quadratic(QuadraticForm<QuadFieldElem>),
}

impl AnyForm {
    pub fn dim(&self) -> usize {
        match self {
            AnyForm::Rational(f) => f.dim(),
            AnyForm::Quadratic(f) => f.dim(),
        }
    }

    pub fn signature(&self) -> Signature {
        match self {
            AnyForm::Rational(f) => f.signature(),
            AnyForm::Quadratic(f) => f.signature(),
        }
    }

    pub fn field_tag(&self) -> FieldTag {
        match self {
            AnyForm::Rational(f) => f.field_tag(),
            AnyForm::Quadratic(f) => f.field_tag(),
        }
    }

    pub fn as_rational(&self) -> Option<&RationalForm> {
        match self {
            AnyForm::Rational(f) => Some(f),
            AnyForm::Quadratic(_) => None,
        }
    }

    pub fn as_quadratic(&self) -> Option<&QuadraticForm<QuadFieldElem>> {
        match self {
            AnyForm::Quadratic(f) => Some(f),
            AnyForm::Rational(_) => None,
        }
    }
}

impl From<RationalForm> for AnyForm {
    fn from(f: RationalForm) -> Self {
        AnyForm::Rational(f)
    }
}

impl From<QuadraticForm<QuadFieldElem>> for AnyForm {
    fn from(f: QuadraticForm<QuadFieldElem>) -> Self {
        AnyForm::Quadratic(f)
    }
}

impl RationalForm {
    /// `q_n = -x_0^2 + x_1^2 + ... + x_n^2`.
    pub fn q(n: usize) -> Self {
        let mut d = vec![rat(1); n + 1];
        d[0] = rat(-1);
        Self::diagonal(&d, Rationals)
    }

    pub fn from_integer_diagonal(entries: &[i64]) -> Self {
        let d: Vec<BigRational> = entries.iter().map(|&x| rat(x)).collect();
        Self::diagonal(&d, Rationals)
    }

    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let g = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), Rationals)?;
        Self::new(g)
    }
}
