//! Coxeter matrices, their cosine Gram matrices and the geometric
//! reflection representation, with exact checks of the Coxeter relations.

use crate::arith::{ratio, QuadField, QuadFieldElem, Rationals, Scalar};
use crate::error::{Error, Result};
use crate::forms::{AnyForm, QuadraticForm};
use crate::matrix::Matrix;
use rayon::prelude::*;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoxeterLabel {
    Finite(u32),
    Infinity,
}

impl fmt::Display for CoxeterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterLabel::Finite(m) => write!(f, "{m}"),
            CoxeterLabel::Infinity => write!(f, "inf"),
        }
    }
}

impl CoxeterLabel {
    /// The radical `-cos(pi/m)` needs, if any.
    fn radical(self) -> Option<u64> {
        match self {
            CoxeterLabel::Finite(4) => Some(2),
            CoxeterLabel::Finite(5) => Some(5),
            CoxeterLabel::Finite(6) => Some(3),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterMatrix {
    labels: Vec<Vec<CoxeterLabel>>,
}

impl CoxeterMatrix {
    pub fn new(labels: Vec<Vec<CoxeterLabel>>) -> Result<Self> {
        let m = labels.len();
        for (i, row) in labels.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: row.len() });
            }
            for (j, &l) in row.iter().enumerate() {
                if i == j {
                    if l != CoxeterLabel::Finite(1) {
                        return Err(Error::Domain(format!("diagonal label at ({i}, {j}) must be 1, got {l}")));
                    }
                    continue;
                }
                if l != labels[j][i] {
                    return Err(Error::Domain(format!("labels at ({i}, {j}) and ({j}, {i}) differ")));
                }
                let ok = matches!(l, CoxeterLabel::Infinity | CoxeterLabel::Finite(2..=6));
                if !ok {
                    return Err(Error::Domain(format!("unsupported label {l} at ({i}, {j})")));
                }
            }
        }
        Ok(CoxeterMatrix { labels })
    }

    /// Off-diagonal labels from `u32`s, 0 meaning infinity.
    pub fn from_u32(rows: &[Vec<u32>]) -> Result<Self> {
        let labels = rows
            .iter()
            .map(|r| r.iter().map(|&x| if x == 0 { CoxeterLabel::Infinity } else { CoxeterLabel::Finite(x) }).collect())
            .collect();
        Self::new(labels)
    }

    /// Linear diagram with the given consecutive labels, 2 elsewhere.
    pub fn path(edges: &[u32]) -> Result<Self> {
        let m = edges.len() + 1;
        let mut rows = vec![vec![2u32; m]; m];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = 1;
        }
        for (i, &e) in edges.iter().enumerate() {
            rows[i][i + 1] = e;
            rows[i + 1][i] = e;
        }
        Self::from_u32(&rows)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize, j: usize) -> CoxeterLabel {
        self.labels[i][j]
    }

    pub fn labels(&self) -> &[Vec<CoxeterLabel>] {
        &self.labels
    }
}

/// `-cos(pi/m)` in Q(sqrt d); the rational labels ignore `d`.
fn cosine_entry(l: CoxeterLabel, k: QuadField) -> QuadFieldElem {
    let z = ratio(0, 1);
    match l {
        CoxeterLabel::Finite(2) => k.from_rational(z),
        CoxeterLabel::Finite(3) => k.from_rational(ratio(-1, 2)),
        CoxeterLabel::Finite(4) | CoxeterLabel::Finite(6) => QuadFieldElem::new(z, ratio(-1, 2), k),
        CoxeterLabel::Finite(5) => QuadFieldElem::new(ratio(-1, 4), ratio(-1, 4), k),
        CoxeterLabel::Infinity => k.from_rational(ratio(-1, 1)),
        CoxeterLabel::Finite(1) => k.from_rational(ratio(1, 1)),
        CoxeterLabel::Finite(m) => unreachable!("label {m} rejected at construction"),
    }
}

/// Unit diagonal and `-cos(pi/m_ij)` off it, over Q when no radical is
/// needed and over the single quadratic field otherwise.
pub fn gram_from_coxeter(m: &CoxeterMatrix) -> Result<AnyForm> {
    let n = m.size();
    let mut radical: Option<(u64, usize, usize)> = None;
    for i in 0..n {
        for j in i + 1..n {
            if let Some(d) = m.label(i, j).radical() {
                match radical {
                    None => radical = Some((d, i, j)),
                    Some((d0, i0, j0)) if d0 != d => {
                        return Err(Error::Domain(format!(
                            "labels {} at ({i0}, {j0}) and {} at ({i}, {j}) need Q(sqrt {d0}) and Q(sqrt {d})",
                            m.label(i0, j0),
                            m.label(i, j)
                        )))
                    }
                    _ => {}
                }
            }
        }
    }
    let d = radical.map_or(5, |r| r.0);
    let k = QuadField::new(d)?;
    let rows: Vec<Vec<QuadFieldElem>> =
        (0..n).map(|i| (0..n).map(|j| cosine_entry(m.label(i, j), k)).collect()).collect();
    if radical.is_none() {
        let q = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_rational().expect("rational label")).collect())
            .collect();
        return Ok(AnyForm::Rational(QuadraticForm::new(Matrix::from_rows(q, Rationals)?)?));
    }
    Ok(AnyForm::Quadratic(QuadraticForm::new(Matrix::from_rows(rows, k)?)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricRepresentation<T: Scalar> {
    pub gram: QuadraticForm<T>,
    /// `r_i(v) = v - 2 (v, b_i) b_i`.
    pub generators: Vec<Matrix<T>>,
}

impl<T: Scalar> GeometricRepresentation<T> {
    pub fn is_involutive(&self, i: usize) -> bool {
        let r = &self.generators[i];
        r.mul(r).is_identity()
    }

    pub fn preserves_form(&self, i: usize) -> bool {
        self.generators[i].congruence(self.gram.gram()) == *self.gram.gram()
    }
}

pub fn reflection_representation<T: Scalar>(gram: &QuadraticForm<T>) -> Result<GeometricRepresentation<T>> {
    let g = gram.gram();
    let n = gram.dim();
    let field = gram.field();
    for i in 0..n {
        if !g[(i, i)].eq_one() {
            return Err(Error::Domain(format!("unit diagonal required, entry ({i}, {i}) is {}", g[(i, i)])));
        }
    }
    let two = T::one_of(&field).add(&T::one_of(&field));
    let generators: Vec<Matrix<T>> = (0..n)
        .map(|i| {
            let mut r: Matrix<T> = Matrix::identity(n, field);
            for j in 0..n {
                let v = r[(i, j)].sub(&two.mul(&g[(i, j)]));
                r[(i, j)] = v;
            }
            r
        })
        .collect();
    let rep = GeometricRepresentation { gram: gram.clone(), generators };
    for i in 0..n {
        if !rep.is_involutive(i) || !rep.preserves_form(i) {
            return Err(Error::Internal(format!("generator {i} fails its flags")));
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub i: usize,
    pub j: usize,
    pub label: CoxeterLabel,
    /// Least `t <= bound` with `(r_i r_j)^t = I`.
    pub order: Option<u32>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub cap: u32,
    pub involutions: Vec<bool>,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.involutions.iter().all(|&b| b) && self.checks.iter().all(|c| c.passed)
    }
}

pub const DEFAULT_CAP: u32 = 12;

/// Exact orders of `r_i r_j`: equal to `m_ij` when finite, above `cap` for infinity.
pub fn verify_relations<T: Scalar>(
    rep: &GeometricRepresentation<T>,
    m: &CoxeterMatrix,
    cap: u32,
) -> Result<RelationReport> {
    let n = rep.generators.len();
    if m.size() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.size() });
    }
    let involutions = (0..n).map(|i| rep.is_involutive(i) && rep.preserves_form(i)).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let checks = pairs
        .par_iter()
        .map(|&(i, j)| {
            let label = m.label(i, j);
            let bound = match label {
                CoxeterLabel::Finite(k) => k,
                CoxeterLabel::Infinity => cap,
            };
            let p = rep.generators[i].mul(&rep.generators[j]);
            let mut acc = p.clone();
            let mut order = None;
            for t in 1..=bound {
                if acc.is_identity() {
                    order = Some(t);
                    break;
                }
                acc = acc.mul(&p);
            }
            let passed = match label {
                CoxeterLabel::Finite(k) => order == Some(k),
                CoxeterLabel::Infinity => order.is_none(),
            };
            RelationCheck { i, j, label, order, passed }
        })
        .collect();
    Ok(RelationReport { cap, involutions, checks })
}

/// The 120-cell simplex diagram, labels 5, 3, 3, 5 along a path.
pub fn bowditch_mess_coxeter() -> CoxeterMatrix {
    CoxeterMatrix::path(&[5, 3, 3, 5]).expect("valid labels")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, BigRational, Embedding};
    use crate::constructions::bowditch_mess_gram;
    use crate::forms::{RationalForm, Signature};

    fn rational_rep(f: &AnyForm) -> GeometricRepresentation<BigRational> {
        reflection_representation(f.as_rational().unwrap()).unwrap()
    }

    #[test]
    fn a2_gram_and_order() {
        let m = CoxeterMatrix::path(&[3]).unwrap();
        let g = gram_from_coxeter(&m).unwrap();
        assert_eq!(
            g,
            AnyForm::Rational(
                RationalForm::new(
                    Matrix::from_rows(vec![vec![rat(1), ratio(-1, 2)], vec![ratio(-1, 2), rat(1)]], Rationals).unwrap()
                )
                .unwrap()
            )
        );
        let rep = rational_rep(&g);
        let r = verify_relations(&rep, &m, DEFAULT_CAP).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks[0].order, Some(3));
    }

    #[test]
    fn rank_one() {
        let rep = reflection_representation(&RationalForm::from_integer_diagonal(&[1])).unwrap();
        assert_eq!(rep.generators[0][(0, 0)], rat(-1));
        assert!(reflection_representation(&RationalForm::from_integer_diagonal(&[2])).is_err());
    }

    #[test]
    fn bowditch_mess_recovered() {
        let g = gram_from_coxeter(&bowditch_mess_coxeter()).unwrap();
        assert_eq!(g, AnyForm::Quadratic(bowditch_mess_gram()));
        let q = g.as_quadratic().unwrap();
        assert_eq!(q.signature(), Signature::new(4, 1, 0));
        assert!(q.is_positive_definite_at(Embedding::Conjugate));
        let rep = reflection_representation(q).unwrap();
        let r = verify_relations(&rep, &bowditch_mess_coxeter(), DEFAULT_CAP).unwrap();
        assert!(r.passed());
        let orders: Vec<(usize, usize, Option<u32>)> = r.checks.iter().map(|c| (c.i, c.j, c.order)).collect();
        assert!(orders.contains(&(0, 1, Some(5))));
        assert!(orders.contains(&(1, 2, Some(3))));
        assert!(orders.contains(&(0, 4, Some(2))));
    }

    #[test]
    fn mixed_radicals_rejected() {
        let m = CoxeterMatrix::path(&[4, 5]).unwrap();
        match gram_from_coxeter(&m) {
            Err(Error::Domain(s)) => assert!(s.contains("(0, 1)") && s.contains("(1, 2)")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn commuting_and_parabolic() {
        let m = CoxeterMatrix::path(&[2]).unwrap();
        let rep = rational_rep(&gram_from_coxeter(&m).unwrap());
        let (a, b) = (&rep.generators[0], &rep.generators[1]);
        assert_eq!(a.mul(b), b.mul(a));
        let m = CoxeterMatrix::from_u32(&[vec![1, 0], vec![0, 1]]).unwrap();
        let rep = rational_rep(&gram_from_coxeter(&m).unwrap());
        let r = verify_relations(&rep, &m, DEFAULT_CAP).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks[0].order, None);
    }

    #[test]
    fn labels_validated() {
        assert!(CoxeterMatrix::from_u32(&[vec![1, 7], vec![7, 1]]).is_err());
        assert!(CoxeterMatrix::from_u32(&[vec![1, 3], vec![4, 1]]).is_err());
        assert!(CoxeterMatrix::from_u32(&[vec![2, 3], vec![3, 1]]).is_err());
    }

    #[test]
    fn b3_and_g2() {
        for edges in [vec![4, 3], vec![6], vec![3, 4, 3]] {
            let m = CoxeterMatrix::path(&edges).unwrap();
            let q = gram_from_coxeter(&m).unwrap();
            let rep = reflection_representation(q.as_quadratic().unwrap()).unwrap();
            assert!(verify_relations(&rep, &m, DEFAULT_CAP).unwrap().passed());
        }
    }
}
