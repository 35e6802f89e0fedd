//! Hyperboloid-model geometry over a Lorentzian form: hyperplanes as
//! spacelike normals, boundary points as isotropic rays, reflections as
//! exact matrices. Every predicate compares squared quantities exactly.

use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::forms::QuadraticForm;
use crate::matrix::{proportional, unit_vector, vec_scale, vec_sub, Matrix};
use std::cmp::Ordering;
use std::fmt;

/// A form of signature `(n, 1)` with its pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LorentzSpace<T: Scalar> {
    form: QuadraticForm<T>,
}

impl<T: Scalar> LorentzSpace<T> {
    pub fn new(form: QuadraticForm<T>) -> Result<Self> {
        let sig = form.signature();
        if !sig.is_lorentzian() {
            return Err(Error::Precondition(format!("signature (n, 1) required, got {sig}")));
        }
        Ok(LorentzSpace { form })
    }

    pub fn form(&self) -> &QuadraticForm<T> {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn pairing(&self, u: &[T], v: &[T]) -> T {
        self.form.pairing(u, v)
    }

    pub fn norm(&self, u: &[T]) -> T {
        self.form.value(u)
    }

    fn check_len(&self, v: &[T]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }

    pub fn hyperplane(&self, normal: &[T]) -> Result<Hyperplane<T>> {
        self.check_len(normal)?;
        if self.norm(normal).sign() != Ordering::Greater {
            return Err(Error::Domain("hyperplane normal must satisfy (e, e) > 0".into()));
        }
        Ok(Hyperplane { normal: T::normalize_direction(normal) })
    }

    pub fn boundary_point(&self, rep: &[T]) -> Result<BoundaryPoint<T>> {
        self.check_len(rep)?;
        if rep.iter().all(|x| x.eq_zero()) {
            return Err(Error::Zero("boundary point representative"));
        }
        if !self.norm(rep).eq_zero() {
            return Err(Error::Domain("boundary point must be isotropic".into()));
        }
        Ok(BoundaryPoint { rep: T::normalize_direction(rep) })
    }

    /// Wraps a matrix with freshly computed flags.
    pub fn element(&self, m: Matrix<T>) -> Result<LorentzMatrix<T>> {
        let (integral, form_preserving) = check_element(self, &m)?;
        Ok(LorentzMatrix { matrix: m, integral, form_preserving })
    }
}

/// The hyperplane `e^perp` of a spacelike normal `e`; equality is projective.
#[derive(Clone, Debug, Eq)]
pub struct Hyperplane<T: Scalar> {
    normal: Vec<T>,
}

impl<T: Scalar> PartialEq for Hyperplane<T> {
    fn eq(&self, other: &Self) -> bool {
        proportional(&self.normal, &other.normal)
    }
}

impl<T: Scalar> Hyperplane<T> {
    pub fn normal(&self) -> &[T] {
        &self.normal
    }

    /// Image under a form-preserving matrix: the normal maps to `M e`.
    pub fn image(&self, m: &LorentzMatrix<T>) -> Result<Hyperplane<T>> {
        if !m.form_preserving {
            return Err(Error::Domain("hyperplane image needs a form-preserving matrix".into()));
        }
        Ok(Hyperplane { normal: T::normalize_direction(&m.matrix.mul_vec(&self.normal)) })
    }
}

/// The ray of a nonzero isotropic vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryPoint<T: Scalar> {
    rep: Vec<T>,
}

impl<T: Scalar> BoundaryPoint<T> {
    pub fn rep(&self) -> &[T] {
        &self.rep
    }
}

/// A matrix with exact flags; the flags are always recomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LorentzMatrix<T: Scalar> {
    matrix: Matrix<T>,
    integral: bool,
    form_preserving: bool,
}

impl<T: Scalar> LorentzMatrix<T> {
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn is_form_preserving(&self) -> bool {
        self.form_preserving
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        self.matrix.mul_vec(v)
    }

    pub fn compose(&self, other: &Self) -> Self {
        let m = self.matrix.mul(&other.matrix);
        let integral = m.entries().all(|x| x.is_integral());
        LorentzMatrix { matrix: m, integral, form_preserving: self.form_preserving && other.form_preserving }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairClass {
    Equal,
    Intersecting,
    Parallel,
    Ultraparallel,
}

impl PairClass {
    pub fn is_disjoint(self) -> bool {
        matches!(self, PairClass::Parallel | PairClass::Ultraparallel)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PairClass::Equal => "equal",
            PairClass::Intersecting => "intersecting",
            PairClass::Parallel => "parallel",
            PairClass::Ultraparallel => "ultraparallel",
        }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Compares `(e_A, e_B)^2` with `(e_A, e_A)(e_B, e_B)`.
pub fn classify_pair<T: Scalar>(space: &LorentzSpace<T>, a: &Hyperplane<T>, b: &Hyperplane<T>) -> Result<PairClass> {
    space.check_len(&a.normal)?;
    space.check_len(&b.normal)?;
    if a == b {
        return Ok(PairClass::Equal);
    }
    let p = space.pairing(&a.normal, &b.normal);
    let lhs = p.mul(&p);
    let rhs = space.norm(&a.normal).mul(&space.norm(&b.normal));
    Ok(match lhs.sub(&rhs).sign() {
        Ordering::Less => PairClass::Intersecting,
        Ordering::Equal => PairClass::Parallel,
        Ordering::Greater => PairClass::Ultraparallel,
    })
}

/// `w -> w - 2 (w, u) / (u, u) u`.
pub fn reflection_in_vector<T: Scalar>(space: &LorentzSpace<T>, u: &[T]) -> Result<LorentzMatrix<T>> {
    space.check_len(u)?;
    let uu = space.norm(u);
    let Some(inv) = uu.inv() else {
        return Err(Error::Domain("reflection vector must satisfy (u, u) != 0".into()));
    };
    let n = space.dim();
    let field = space.form.field();
    let gu = space.form.gram().mul_vec(u);
    let two = T::one_of(&field).add(&T::one_of(&field));
    let c = two.mul(&inv);
    let mut r: Matrix<T> = Matrix::identity(n, field);
    for i in 0..n {
        for j in 0..n {
            let v = r[(i, j)].sub(&c.mul(&u[i]).mul(&gu[j]));
            r[(i, j)] = v;
        }
    }
    space.element(r)
}

/// `(integral, form_preserving)`, both exact.
pub fn check_element<T: Scalar>(space: &LorentzSpace<T>, m: &Matrix<T>) -> Result<(bool, bool)> {
    if !m.is_square() || m.rows() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: m.rows() });
    }
    let integral = m.entries().all(|x| x.is_integral());
    let preserving = m.congruence(space.form.gram()) == *space.form.gram();
    Ok((integral, preserving))
}

pub fn boundary_point_on_hyperplane<T: Scalar>(
    space: &LorentzSpace<T>,
    p: &BoundaryPoint<T>,
    a: &Hyperplane<T>,
) -> bool {
    space.pairing(&p.rep, &a.normal).eq_zero()
}

/// Base vectors tried for timelike representatives: `b_0`, `b_0 +- b_1/2`,
/// then `b_j` and `b_j +- b_k/2` for all `j != k`.
fn base_vectors<T: Scalar>(n: usize, field: &T::Field) -> Vec<Vec<T>> {
    let half = T::one_of(field).div(&T::one_of(field).add(&T::one_of(field))).expect("2 != 0");
    let e = |i: usize| unit_vector::<T>(n, i, field);
    let mut out = vec![e(0)];
    let push_pair = |j: usize, k: usize, out: &mut Vec<Vec<T>>| {
        let h = vec_scale(&half, &e(k));
        out.push(crate::matrix::vec_add(&e(j), &h));
        out.push(vec_sub(&e(j), &h));
    };
    if n > 1 {
        push_pair(0, 1, &mut out);
    }
    for j in 0..n {
        out.push(e(j));
        for k in 0..n {
            if j != k {
                push_pair(j, k, &mut out);
            }
        }
    }
    out
}

/// Whether `w` separates `a` from `b`: project a timelike base vector onto
/// each of `a`, `b`, put both projections in the same cone and compare the
/// signs of their pairings with the normal of `w`.
pub fn separates<T: Scalar>(
    space: &LorentzSpace<T>,
    w: &Hyperplane<T>,
    a: &Hyperplane<T>,
    b: &Hyperplane<T>,
) -> Result<bool> {
    for (x, y, what) in [(w, a, "W and A"), (w, b, "W and B"), (a, b, "A and B")] {
        let c = classify_pair(space, x, y)?;
        if !c.is_disjoint() {
            return Err(Error::Domain(format!("{what} must be disjoint, found {c}")));
        }
    }
    let field = space.form.field();
    let base = base_vectors::<T>(space.dim(), &field)
        .into_iter()
        .find(|v| space.norm(v).sign() == Ordering::Less)
        .ok_or_else(|| Error::Internal("no timelike base vector in the fallback list".into()))?;
    let side = |h: &Hyperplane<T>| -> Result<Ordering> {
        let e = &h.normal;
        let c = space.pairing(&base, e).div(&space.norm(e)).expect("(e, e) > 0");
        let mut x = vec_sub(&base, &vec_scale(&c, e));
        if space.norm(&x).sign() != Ordering::Less {
            return Err(Error::Internal("projection is not timelike".into()));
        }
        if space.pairing(&x, &base).sign() == Ordering::Greater {
            x = x.iter().map(|t| t.neg()).collect();
        }
        Ok(space.pairing(&w.normal, &x).sign())
    };
    Ok(side(a)? != side(b)?)
}
