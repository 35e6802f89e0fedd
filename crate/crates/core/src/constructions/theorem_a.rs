//! The integral reflection configuration built from an embedding of `q_3`:
//! two reflections whose mirrors are perpendicular, each parallel to the
//! hyperplane `H` spanned by the embedded `q_3` space.

use crate::arith::{rat, ratio, BigRational, Rationals};
use crate::error::{Error, Result};
use crate::forms::{represents_form, RationalForm, RepresentMode};
use crate::lorentz::{
    boundary_point_on_hyperplane, classify_pair, reflection_in_vector, BoundaryPoint, Hyperplane, LorentzMatrix,
    LorentzSpace, PairClass,
};
use crate::matrix::{unit_vector, vec_add, vec_scale, Matrix};
use num_traits::{Signed, Zero};

/// Basis change from `q_3` coordinates to `g = 2 y_1 y_2 + y_3^2 + y_4^2`,
/// with `y_1 = x_0 + x_1`, `y_2 = (x_1 - x_0) / 2`: `T^t q_3 T = g`.
pub fn q3_to_g_basis() -> (Matrix<BigRational>, RationalForm) {
    let mut t = Matrix::identity(4, Rationals);
    t[(0, 0)] = ratio(1, 2);
    t[(0, 1)] = rat(-1);
    t[(1, 0)] = ratio(1, 2);
    t[(1, 1)] = rat(1);
    let g = RationalForm::from_integer_rows(&[vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]])
        .expect("symmetric");
    (t, g)
}

/// One named exact check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Vectors `u_i`, reflections, hyperplanes and boundary points live in the
/// coordinates of the basis `e_1..e_5` of `W`; `basis` holds the same basis
/// in the coordinates of `f`.
#[derive(Clone, Debug)]
pub struct TheoremAWitness {
    pub h: RationalForm,
    pub basis: Vec<Vec<BigRational>>,
    /// `e_2` before the rescaling `e_2 <- a e_2`.
    pub e2_unscaled: Vec<BigRational>,
    pub a: BigRational,
    pub u1: Vec<BigRational>,
    pub u2: Vec<BigRational>,
    pub tau1: LorentzMatrix<BigRational>,
    pub tau2: LorentzMatrix<BigRational>,
    pub tau3: LorentzMatrix<BigRational>,
    pub hyperplane_h: Hyperplane<BigRational>,
    pub pi1: Hyperplane<BigRational>,
    pub pi2: Hyperplane<BigRational>,
    pub p1: BoundaryPoint<BigRational>,
    pub p2: BoundaryPoint<BigRational>,
    pub report: Vec<Check>,
}

impl TheoremAWitness {
    pub fn space(&self) -> LorentzSpace<BigRational> {
        LorentzSpace::new(self.h.clone()).expect("h is Lorentzian")
    }

    /// `W` coordinates to coordinates of `f`.
    pub fn to_ambient(&self, w: &[BigRational]) -> Vec<BigRational> {
        let n = self.basis[0].len();
        w.iter().zip(&self.basis).fold(vec![rat(0); n], |acc, (c, e)| vec_add(&acc, &vec_scale(c, e)))
    }

    /// The hyperplanes `H, tau_1 H, tau_2 H, tau_3 H, Pi_1, Pi_2`.
    pub fn hyperplane_family(&self) -> Result<Vec<Hyperplane<BigRational>>> {
        Ok(vec![
            self.hyperplane_h.clone(),
            self.hyperplane_h.image(&self.tau1)?,
            self.hyperplane_h.image(&self.tau2)?,
            self.hyperplane_h.image(&self.tau3)?,
            self.pi1.clone(),
            self.pi2.clone(),
        ])
    }

    pub fn all_passed(&self) -> bool {
        all_passed(&self.report)
    }
}

/// Runs the construction for a form of signature `(n, 1)`, `n >= 4`. When the
/// rank gap to `q_3` is below 3 the splitting runs unchecked with `height`.
pub fn build_theorem_a_witness(f: &RationalForm, height: u64) -> Result<TheoremAWitness> {
    f.require_nonsingular("build_theorem_a_witness")?;
    let sig = f.signature();
    if !sig.is_lorentzian() {
        return Err(Error::Precondition(format!("signature (n, 1) required, got {sig}")));
    }
    if f.dim() < 5 {
        return Err(Error::Precondition(format!("n >= 4 required, got n = {}", f.dim() - 1)));
    }
    let q3 = RationalForm::q(3);
    let mode = if f.dim() >= q3.dim() + 3 { RepresentMode::Checked } else { RepresentMode::Unchecked { height } };
    let split =
        represents_form(f, &q3, mode).map_err(|e| Error::Precondition(format!("f does not represent q3: {e}")))?;
    let t = split.transform_for_g();
    let (tqg, _) = q3_to_g_basis();

    let mut basis: Vec<Vec<BigRational>> = (0..4)
        .map(|i| (0..4).fold(vec![rat(0); f.dim()], |acc, k| vec_add(&acc, &vec_scale(&tqg[(k, i)], &t.column(k)))))
        .collect();
    let e5 = t.column(4);
    let a = f.value(&e5);
    if !a.is_positive() {
        return Err(Error::Internal(format!("residual vector has f(e5) = {a} <= 0")));
    }
    let e2_unscaled = basis[1].clone();
    basis[1] = vec_scale(&a, &basis[1]);
    basis.push(e5);

    let e = Matrix::from_columns(&basis, f.dim(), Rationals);
    let h = f.transform(&e);
    let space = LorentzSpace::new(h.clone())?;
    let w = |i: usize| unit_vector::<BigRational>(5, i, &Rationals);
    let u1 = vec_add(&w(0), &w(4));
    let u2 = vec_add(&vec_scale(&rat(-1), &w(1)), &w(4));
    let tau1 = reflection_in_vector(&space, &u1)?;
    let tau2 = reflection_in_vector(&space, &u2)?;
    let tau3 = tau1.compose(&tau2);
    let mut witness = TheoremAWitness {
        hyperplane_h: space.hyperplane(&w(4))?,
        pi1: space.hyperplane(&u1)?,
        pi2: space.hyperplane(&u2)?,
        p1: space.boundary_point(&w(0))?,
        p2: space.boundary_point(&w(1))?,
        h,
        basis,
        e2_unscaled,
        a,
        u1,
        u2,
        tau1,
        tau2,
        tau3,
        report: Vec::new(),
    };
    witness.report = theorem_a_checks(f, &witness);
    Ok(witness)
}

/// Recomputes every check from the stored data.
pub fn theorem_a_checks(f: &RationalForm, w: &TheoremAWitness) -> Vec<Check> {
    let mut out = Vec::new();
    let mut check = |name: &str, ok: bool| out.push(Check::new(name, ok));
    let Ok(space) = LorentzSpace::new(w.h.clone()) else {
        check("h has signature (4, 1)", false);
        return out;
    };
    check("h has signature (4, 1)", w.h.dim() == 5);
    let e = Matrix::from_columns(&w.basis, f.dim(), Rationals);
    check("basis is linearly independent", e.rows() >= 5 && !f.transform(&e).determinant().is_zero());
    check("h is the restriction of f to W", f.transform(&e) == w.h);
    check("e2 = a * e2 before rescaling", w.basis[1] == vec_scale(&w.a, &w.e2_unscaled));
    let (_, g) = q3_to_g_basis();
    let mut g_scaled = g.gram().clone();
    g_scaled[(0, 1)] = w.a.clone();
    g_scaled[(1, 0)] = w.a.clone();
    check("U carries g with (e1, e2) = a", w.h.gram().principal_submatrix(&[0, 1, 2, 3]) == g_scaled);
    check("a = f(e5) > 0", w.a.is_positive() && f.value(&w.basis[4]) == w.a);
    let e5_perp = (0..4).all(|i| w.h.gram()[(i, 4)].is_zero());
    check("e5 is orthogonal to U", e5_perp);

    let unit = |i: usize| unit_vector::<BigRational>(5, i, &Rationals);
    let p = |x: &[BigRational], y: &[BigRational]| space.pairing(x, y);
    let a = &w.a;
    let zero = rat(0);
    check("(u1, u1) = a", p(&w.u1, &w.u1) == *a);
    check("(u2, u2) = a", p(&w.u2, &w.u2) == *a);
    check("(u1, u2) = 0", p(&w.u1, &w.u2) == zero);
    check("(u1, e1) = 0", p(&w.u1, &unit(0)) == zero);
    check("(u2, e2) = 0", p(&w.u2, &unit(1)) == zero);
    check("(u1, e2) = a", p(&w.u1, &unit(1)) == *a);
    check("(u2, e1) = -a", p(&w.u2, &unit(0)) == -a);
    check("g(e1) = 0", space.norm(&unit(0)) == zero);
    check("g(e2) = 0", space.norm(&unit(1)) == zero);

    let id = Matrix::identity(5, Rationals);
    let fresh = |m: &LorentzMatrix<BigRational>| space.element(m.matrix().clone()).ok();
    for (name, t, u) in [("tau1", &w.tau1, &w.u1), ("tau2", &w.tau2, &w.u2)] {
        let f2 = fresh(t);
        check(&format!("{name} is integral"), f2.as_ref().is_some_and(|m| m.is_integral()));
        check(&format!("{name} preserves h"), f2.as_ref().is_some_and(|m| m.is_form_preserving()));
        check(&format!("{name}^2 = I"), t.matrix().mul(t.matrix()) == id);
        let r = reflection_in_vector(&space, u).ok();
        check(&format!("{name} is the reflection in its vector"), r.is_some_and(|r| r.matrix() == t.matrix()));
    }
    let t12 = w.tau1.matrix().mul(w.tau2.matrix());
    let t21 = w.tau2.matrix().mul(w.tau1.matrix());
    check("tau1 tau2 = tau2 tau1", t12 == t21);
    check("tau3 = tau1 tau2", *w.tau3.matrix() == t12);
    check("tau3^2 = I", w.tau3.matrix().mul(w.tau3.matrix()) == id);
    check("tau3 is integral", fresh(&w.tau3).is_some_and(|m| m.is_integral() && m.is_form_preserving()));

    check("H has normal e5", space.hyperplane(&unit(4)).is_ok_and(|h| h == w.hyperplane_h));
    check("Pi1 has normal u1", space.hyperplane(&w.u1).is_ok_and(|h| h == w.pi1));
    check("Pi2 has normal u2", space.hyperplane(&w.u2).is_ok_and(|h| h == w.pi2));
    check("p1 is e1", w.p1.rep() == unit(0).as_slice());
    check("p2 is e2", w.p2.rep() == unit(1).as_slice());
    check("p1 lies on the boundary of Pi1", boundary_point_on_hyperplane(&space, &w.p1, &w.pi1));
    check("p2 lies on the boundary of Pi2", boundary_point_on_hyperplane(&space, &w.p2, &w.pi2));
    let class = |x: &Hyperplane<BigRational>, y: &Hyperplane<BigRational>| classify_pair(&space, x, y).ok();
    check(
        "Pi1 and Pi2 are perpendicular",
        class(&w.pi1, &w.pi2) == Some(PairClass::Intersecting) && p(w.pi1.normal(), w.pi2.normal()) == zero,
    );
    check("Pi1 is parallel to H", class(&w.pi1, &w.hyperplane_h) == Some(PairClass::Parallel));
    check("Pi2 is parallel to H", class(&w.pi2, &w.hyperplane_h) == Some(PairClass::Parallel));
    for (name, t) in [("tau1", &w.tau1), ("tau2", &w.tau2), ("tau3", &w.tau3)] {
        let img = w.hyperplane_h.image(t).ok();
        let direct = space.hyperplane(&t.apply(&unit(4))).ok();
        check(&format!("{name}(H) has normal {name} e5"), img.is_some() && img == direct);
        check(
            &format!("{name}(H) is disjoint from H"),
            img.and_then(|i| class(&i, &w.hyperplane_h)).is_some_and(|c| c.is_disjoint()),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(f: &RationalForm) -> TheoremAWitness {
        let w = build_theorem_a_witness(f, 100).unwrap();
        for c in &w.report {
            assert!(c.passed, "{}", c.name);
        }
        w
    }

    #[test]
    fn q3_to_g() {
        let (t, g) = q3_to_g_basis();
        assert_eq!(t.congruence(RationalForm::q(3).gram()), *g.gram());
        assert!(!t.determinant().is_zero());
    }

    #[test]
    fn q4_bundle() {
        let w = run(&RationalForm::q(4));
        assert_eq!(w.a, rat(1));
        let v = |x: &[i64]| x.iter().map(|&a| rat(a)).collect::<Vec<_>>();
        // tau1 e5 = -2 e1 - e5; tau3 e5 = -2 e1 + 2 e2 - 3 e5
        assert_eq!(w.tau1.apply(&v(&[0, 0, 0, 0, 1])), v(&[-2, 0, 0, 0, -1]));
        assert_eq!(w.tau3.apply(&v(&[0, 0, 0, 0, 1])), v(&[-2, 2, 0, 0, -3]));
        let fam = w.hyperplane_family().unwrap();
        let s = w.space();
        assert_eq!(classify_pair(&s, &fam[0], &fam[1]).unwrap(), PairClass::Parallel);
        assert_eq!(classify_pair(&s, &fam[0], &fam[3]).unwrap(), PairClass::Ultraparallel);
    }

    #[test]
    fn seven_bundle() {
        let f = RationalForm::from_integer_diagonal(&[-1, 1, 1, 1, 7]);
        let w = run(&f);
        assert_eq!(w.a, rat(7));
    }

    #[test]
    fn rejects_small_n() {
        let err = build_theorem_a_witness(&RationalForm::q(3), 100).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("n >= 4 required")));
        let err = build_theorem_a_witness(&RationalForm::from_integer_diagonal(&[1, 1, 1, 1, 1]), 100).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("signature")));
    }

    #[test]
    fn non_diagonal_input() {
        // q5 in a scrambled basis
        let rows = [
            [1, 1, 0, 0, 0, 0],
            [0, 1, 2, 0, 0, 0],
            [0, 0, 1, 0, 0, 1],
            [0, 0, 0, 1, 1, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 0, 1],
        ];
        let t =
            Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), Rationals).unwrap();
        run(&RationalForm::q(5).transform(&t));
    }
}
