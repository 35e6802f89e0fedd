//! Representation of numbers and of forms, with explicit certificates.

use super::search::{search_zero, IntegerGram};
use super::{diagonalize, is_isotropic, RationalForm};
use crate::arith::rational::{exact_sqrt, primitive_integer_vector};
use crate::arith::{rat, BigRational, Rationals};
use crate::error::{Error, Result};
use crate::lattice::integer_kernel;
use crate::matrix::{unit_vector, vec_add, vec_scale, Matrix};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Default max-norm for witness searches.
pub const DEFAULT_WITNESS_HEIGHT: u64 = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub represented: bool,
    /// `f(witness) = b` exactly; absent when the decision is positive but the
    /// bounded witness search came up empty.
    pub witness: Option<Vec<BigRational>>,
}

fn standard_basis(n: usize) -> Vec<Vec<BigRational>> {
    (0..n).map(|i| unit_vector(n, i, &Rationals)).collect()
}

fn restricted(f: &RationalForm, basis: &[Vec<BigRational>]) -> RationalForm {
    let c = Matrix::from_columns(basis, f.dim(), Rationals);
    f.transform(&c)
}

/// Index sets of size `k` in lexicographic order.
fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Basis vectors used for the witness search. With more than four
/// available, picks four spanning a nonsingular subform which together with
/// `<-b>` is indefinite of rank 5, hence isotropic; smallest entries first.
fn choose_coordinates(sub: &RationalForm, b: &BigRational) -> Vec<usize> {
    let m = sub.dim();
    if m <= 4 {
        return (0..m).collect();
    }
    let mut best: Option<(BigRational, Vec<usize>)> = None;
    for idx in combinations(m, 4) {
        let r = sub.restrict(&idx).expect("indices in range");
        if r.is_singular() {
            continue;
        }
        let sig = r.signature();
        if (b.is_positive() && sig.pos == 0) || (b.is_negative() && sig.neg == 0) {
            continue;
        }
        let score = r.gram().entries().map(|x| x.abs()).max().unwrap_or_default();
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, idx));
        }
    }
    best.map(|(_, idx)| idx).unwrap_or_else(|| (0..m).collect())
}

/// A vector `v` in the span of `basis` with `f(v) = b`, or `None` when the
/// bounded search fails. `basis` must span a nonsingular subspace.
fn represent_in_span(
    f: &RationalForm,
    basis: &[Vec<BigRational>],
    b: &BigRational,
    height: u64,
) -> Result<Option<Vec<BigRational>>> {
    let n = f.dim();
    // a basis vector of value b * t^2 already does it
    for r in basis {
        let q = f.value(r) / b;
        if let Some(t) = exact_sqrt(&q).filter(|_| q.is_positive()) {
            return Ok(Some(vec_scale(&t.recip(), r)));
        }
    }
    let sub = restricted(f, basis);
    let idx = choose_coordinates(&sub, b);
    let big = sub.restrict(&idx)?.direct_sum(&RationalForm::diagonal(&[-b], Rationals))?;
    let gram = IntegerGram::new(&big, 0)?;
    let Some(zero) = search_zero(&gram, height.min(gram.safe_height())) else {
        return Ok(None);
    };
    let mut x = vec![rat(0); n];
    for (k, &i) in idx.iter().enumerate() {
        x = vec_add(&x, &vec_scale(&rat(zero[k]), &basis[i]));
    }
    let y = *zero.last().expect("nonempty zero");
    if y != 0 {
        return Ok(Some(vec_scale(&rat(y).recip(), &x)));
    }
    // y = 0: x is isotropic; complete a hyperbolic pair inside the span
    let (w, pw) = basis
        .iter()
        .map(|w| (w, f.pairing(&x, w)))
        .find(|(_, p)| !p.is_zero())
        .ok_or_else(|| Error::Internal("isotropic vector in the radical".into()))?;
    let s = (b - f.value(w)) / (rat(2) * pw);
    Ok(Some(vec_add(&vec_scale(&s, &x), w)))
}

/// Small integral basis of the orthogonal complement of `vs` in `Q^n`.
fn complement(f: &RationalForm, vs: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let rows: Vec<Vec<BigInt>> = vs.iter().map(|v| primitive_integer_vector(&f.gram().mul_vec(v))).collect();
    integer_kernel(&rows, f.dim()).into_iter().map(|x| x.into_iter().map(BigRational::from_integer).collect()).collect()
}

pub fn represents_number(f: &RationalForm, b: &BigRational) -> Result<Representation> {
    represents_number_with(f, b, DEFAULT_WITNESS_HEIGHT)
}

/// Decides whether `f` represents `b` through the isotropy of
/// `F = f + <-b>`, then searches a witness with max-norm `height`.
pub fn represents_number_with(f: &RationalForm, b: &BigRational, height: u64) -> Result<Representation> {
    f.require_nonsingular("represents_number")?;
    if b.is_zero() {
        return Err(Error::Zero("represented number"));
    }
    if !represents_decision(f, b)? {
        return Ok(Representation { represented: false, witness: None });
    }
    let witness = represent_in_span(f, &standard_basis(f.dim()), b, height)?;
    if let Some(w) = &witness {
        if f.value(w) != *b {
            return Err(Error::Internal("representation witness failed exact check".into()));
        }
    }
    Ok(Representation { represented: true, witness })
}

fn represents_decision(f: &RationalForm, b: &BigRational) -> Result<bool> {
    let big_f = f.direct_sum(&RationalForm::diagonal(&[-b], Rationals))?;
    Ok(is_isotropic(&big_f)?.is_isotropic())
}

/// Whether `represents_form` enforces the rank-gap hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepresentMode {
    /// Requires `rank(f) - rank(g) >= 3`; success is then guaranteed.
    Checked,
    /// Runs the same induction without the rank-gap guarantee; succeeds only
    /// if every bounded subsearch succeeds.
    Unchecked { height: u64 },
}

/// `transform^t * gram(f) * transform = diag(gram(g_part), gram(h_part))`,
/// with `g_basis^t * gram(g) * g_basis = gram(g_part)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingWitness {
    pub transform: Matrix<BigRational>,
    pub g_part: RationalForm,
    pub h_part: RationalForm,
    pub g_basis: Matrix<BigRational>,
}

impl SplittingWitness {
    /// Exact block identity against `f`.
    pub fn verify(&self, f: &RationalForm) -> bool {
        let block = self.g_part.gram().block_diagonal(self.h_part.gram());
        self.transform.determinant() != rat(0) && self.transform.congruence(f.gram()) == block
    }

    /// Basis change splitting `f` as `g + h` with `g` itself in the first block.
    pub fn transform_for_g(&self) -> Matrix<BigRational> {
        let inv = self.g_basis.inverse().expect("g basis is invertible");
        let k = self.h_part.dim();
        self.transform.mul(&inv.block_diagonal(&Matrix::identity(k, Rationals)))
    }
}

/// `f = g + h` literally (leading block equals `g`, off-diagonal block zero).
fn literal_split(f: &RationalForm, g: &RationalForm) -> Option<SplittingWitness> {
    let (n, k) = (f.dim(), g.dim());
    let fg = f.gram();
    for i in 0..n {
        for j in 0..n {
            let x = &fg[(i, j)];
            let ok = match (i < k, j < k) {
                (true, true) => *x == g.gram()[(i, j)],
                (true, false) | (false, true) => x.is_zero(),
                (false, false) => true,
            };
            if !ok {
                return None;
            }
        }
    }
    let h = f.restrict(&(k..n).collect::<Vec<_>>()).ok()?;
    Some(SplittingWitness {
        transform: Matrix::identity(n, Rationals),
        g_part: g.clone(),
        h_part: h,
        g_basis: Matrix::identity(k, Rationals),
    })
}

/// Splits off `g` from `f` by the inductive argument: diagonalize `g` as
/// `b_1 x_1^2 + ... + b_k x_k^2`, then repeatedly represent `b_i` by the
/// orthogonal complement of the vectors found so far.
pub fn represents_form(f: &RationalForm, g: &RationalForm, mode: RepresentMode) -> Result<SplittingWitness> {
    f.require_nonsingular("represents_form (f)")?;
    g.require_nonsingular("represents_form (g)")?;
    let (sf, sg) = (f.signature(), g.signature());
    if sf.pos < sg.pos {
        return Err(Error::Precondition(format!("r >= p failed: r = {}, p = {}", sf.pos, sg.pos)));
    }
    if sf.neg < sg.neg {
        return Err(Error::Precondition(format!("s >= q failed: s = {}, q = {}", sf.neg, sg.neg)));
    }
    let height = match mode {
        RepresentMode::Checked => {
            if f.dim() < g.dim() + 3 {
                return Err(Error::Precondition(format!(
                    "rank(f) - rank(g) >= 3 failed: {} - {} = {}",
                    f.dim(),
                    g.dim(),
                    f.dim() as i64 - g.dim() as i64
                )));
            }
            100 * DEFAULT_WITNESS_HEIGHT
        }
        RepresentMode::Unchecked { height } => height,
    };
    if let Some(w) = literal_split(f, g) {
        return Ok(w);
    }

    let n = f.dim();
    let gd = diagonalize(g);
    let targets = gd.diagonal.gram().diagonal_entries();
    let mut residual = standard_basis(n);
    let mut found: Vec<Vec<BigRational>> = Vec::with_capacity(targets.len());

    for (step, b) in targets.iter().enumerate() {
        let fail = |why: &str| match mode {
            RepresentMode::Checked => Error::Internal(format!(
                "no representing vector for b_{} = {b} ({why}) although the rank gap guarantees one",
                step + 1
            )),
            RepresentMode::Unchecked { height } => Error::Precondition(format!(
                "unchecked mode: residual form does not represent b_{} = {b} ({why}, height {height})",
                step + 1
            )),
        };
        if !represents_decision(&restricted(f, &residual), b)? {
            return Err(fail("local obstruction"));
        }
        let v = represent_in_span(f, &residual, b, height)?.ok_or_else(|| fail("search bound reached"))?;
        found.push(v);
        residual = complement(f, &found);
    }

    let h_part = restricted(f, &residual);
    let mut cols = found;
    cols.extend(residual);
    let witness = SplittingWitness {
        transform: Matrix::from_columns(&cols, n, Rationals),
        g_part: gd.diagonal.clone(),
        h_part,
        g_basis: gd.transform.clone(),
    };
    if !witness.verify(f) {
        return Err(Error::Internal("splitting witness failed the block identity".into()));
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Signature;

    #[test]
    fn number_examples() {
        let q3 = RationalForm::q(3);
        let r = represents_number(&q3, &rat(1)).unwrap();
        assert!(r.represented);
        assert_eq!(r.witness.unwrap(), vec![rat(0), rat(1), rat(0), rat(0)]);

        let id2 = RationalForm::from_integer_diagonal(&[1, 1]);
        assert_eq!(represents_number(&id2, &rat(3)).unwrap(), Representation { represented: false, witness: None });
        // oracle: the rank-3 isotropy criterion on diag(1, 1, -3)
        assert!(!is_isotropic(&RationalForm::from_integer_diagonal(&[1, 1, -3])).unwrap().is_isotropic());

        let id4 = RationalForm::from_integer_diagonal(&[1, 1, 1, 1]);
        let r = represents_number(&id4, &rat(7)).unwrap();
        assert!(r.represented);
        let w = r.witness.unwrap();
        assert_eq!(w, vec![rat(2), rat(1), rat(1), rat(1)]);
        assert_eq!(id4.value(&w), rat(7));
    }

    #[test]
    fn number_via_hyperbolic_plane() {
        // q4 sub-search hits a zero with vanishing last coordinate
        let q4 = RationalForm::q(4);
        for b in [-5, -1, 2, 3, 10] {
            let r = represents_number(&q4, &rat(b)).unwrap();
            assert!(r.represented);
            assert_eq!(q4.value(&r.witness.unwrap()), rat(b));
        }
        let h = RationalForm::from_integer_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        let r = represents_number(&h, &crate::arith::ratio(-7, 3)).unwrap();
        assert_eq!(h.value(&r.witness.unwrap()), crate::arith::ratio(-7, 3));
    }

    #[test]
    fn number_rejects_bad_inputs() {
        let sing = RationalForm::from_integer_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(matches!(represents_number(&sing, &rat(1)), Err(Error::Singular(_))));
        assert!(represents_number(&RationalForm::q(2), &rat(0)).is_err());
        let posdef = RationalForm::from_integer_diagonal(&[1, 2, 3, 5]);
        assert!(!represents_number(&posdef, &rat(-1)).unwrap().represented);
    }

    #[test]
    fn block_form_gives_identity() {
        let g = RationalForm::from_integer_diagonal(&[-1, 2]);
        let h = RationalForm::from_integer_rows(&[vec![2, 1, 0], vec![1, 3, 0], vec![0, 0, 5]]).unwrap();
        let f = g.direct_sum(&h).unwrap();
        let w = represents_form(&f, &g, RepresentMode::Checked).unwrap();
        assert!(w.transform.is_identity());
        assert_eq!(w.h_part, h);
        assert!(w.verify(&f));
    }

    #[test]
    fn q8_represents_q3() {
        let f = RationalForm::q(8);
        let g = RationalForm::q(3);
        let w = represents_form(&f, &g, RepresentMode::Checked).unwrap();
        assert!(w.verify(&f));
        assert_eq!(w.h_part.signature(), Signature::new(5, 0, 0));
        let t = w.transform_for_g();
        assert_eq!(t.congruence(f.gram()), g.gram().block_diagonal(w.h_part.gram()));
    }

    #[test]
    fn q4_q3_needs_unchecked() {
        let f = RationalForm::q(4);
        let g = RationalForm::q(3);
        let err = represents_form(&f, &g, RepresentMode::Checked).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("rank(f) - rank(g) >= 3")));
        let w = represents_form(&f, &g, RepresentMode::Unchecked { height: 50 }).unwrap();
        assert!(w.verify(&f));
    }

    #[test]
    fn signature_preconditions_named() {
        let f = RationalForm::from_integer_diagonal(&[1, 1, 1, 1, 1, 1, -1]);
        let g = RationalForm::from_integer_diagonal(&[-1, -1]);
        let err = represents_form(&f, &g, RepresentMode::Checked).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.starts_with("s >= q")));
    }

    #[test]
    fn nontrivial_split() {
        let f = RationalForm::from_integer_rows(&[
            vec![2, 1, 0, 0, 0, 0],
            vec![1, -3, 1, 0, 0, 0],
            vec![0, 1, 5, 2, 0, 0],
            vec![0, 0, 2, 7, 1, 0],
            vec![0, 0, 0, 1, -1, 3],
            vec![0, 0, 0, 0, 3, 11],
        ])
        .unwrap();
        let g = RationalForm::from_integer_rows(&[vec![3, 1, 0], vec![1, 6, 0], vec![0, 0, -7]]).unwrap();
        let w = represents_form(&f, &g, RepresentMode::Checked).unwrap();
        assert!(w.verify(&f));
        let (sf, sg) = (f.signature(), g.signature());
        assert_eq!(w.h_part.signature(), Signature::new(sf.pos - sg.pos, sf.neg - sg.neg, 0));
    }
}
