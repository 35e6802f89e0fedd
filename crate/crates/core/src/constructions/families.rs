//! Families of forms: the noncompact family over Q, the compact family over
//! Q(sqrt 5) built on the 120-cell Gram matrix, and the forms `f + <a>`.

use crate::arith::{rat, ratio, Embedding, FieldTag, QuadField, QuadFieldElem, Scalar};
use crate::error::{Error, Result};
use crate::forms::{is_isotropic, AnyForm, QuadraticForm, RationalForm};
use crate::matrix::Matrix;
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Over Q: `q_3 + a x_4^2 + x_5^2 + ... + x_n^2`.
    Nonuniform,
    /// Over Q(sqrt 5): `q + a x_5^2 + x_6^2 + ... + x_n^2`, `q` the 120-cell Gram matrix.
    Compact,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Nonuniform => "nonuniform",
            Flavor::Compact => "compact",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyForm {
    pub a: u64,
    pub n: usize,
    pub flavor: Flavor,
    pub form: AnyForm,
}

pub fn sqrt5() -> QuadField {
    QuadField::new(5).expect("5 is squarefree")
}

/// Gram matrix of the right-angled 120-cell simplex group over Q(sqrt 5):
/// unit diagonal, `-cos(pi/5) = -(1 + sqrt 5)/4` and `-1/2` along the path.
pub fn bowditch_mess_gram() -> QuadraticForm<QuadFieldElem> {
    let k = sqrt5();
    let c5 = QuadFieldElem::new(ratio(-1, 4), ratio(-1, 4), k);
    let half = k.from_rational(ratio(-1, 2));
    let mut g = Matrix::identity(5, k);
    for (i, x) in [(0, &c5), (1, &half), (2, &half), (3, &c5)] {
        g[(i, i + 1)] = x.clone();
        g[(i + 1, i)] = x.clone();
    }
    QuadraticForm::new(g).expect("symmetric")
}

pub fn family_form(a: u64, n: usize, flavor: Flavor) -> Result<FamilyForm> {
    if a == 0 {
        return Err(Error::Domain("family parameter a must be positive".into()));
    }
    let form = match flavor {
        Flavor::Nonuniform => {
            if n < 4 {
                return Err(Error::Domain(format!("nonuniform family needs n >= 4, got {n}")));
            }
            let mut d = vec![rat(1); n + 1];
            d[0] = rat(-1);
            d[4] = rat(a as i64);
            AnyForm::Rational(RationalForm::diagonal(&d, crate::arith::Rationals))
        }
        Flavor::Compact => {
            if n < 5 {
                return Err(Error::Domain(format!("compact family needs n >= 5, got {n}")));
            }
            let k = sqrt5();
            let mut d = vec![k.from_rational(rat(1)); n - 4];
            d[0] = k.from_rational(rat(a as i64));
            let rest = QuadraticForm::diagonal(&d, k);
            AnyForm::Quadratic(bowditch_mess_gram().direct_sum(&rest)?)
        }
    };
    Ok(FamilyForm { a, n, flavor, form })
}

/// Signature `(n, 1)` at the fixed embedding and, over Q(sqrt d), positive
/// definite Galois conjugate. Over Q there is no nontrivial embedding.
pub fn condition_star_check<T: Scalar>(f: &QuadraticForm<T>) -> bool {
    if f.is_singular() || !f.signature().is_lorentzian() {
        return false;
    }
    match f.field_tag() {
        FieldTag::Rational => true,
        FieldTag::Quadratic(_) => f.is_positive_definite_at(Embedding::Conjugate),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithmeticFlag {
    Square,
    Nonsquare,
}

impl ArithmeticFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            ArithmeticFlag::Square => "square",
            ArithmeticFlag::Nonsquare => "nonsquare",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpsForm<T: Scalar> {
    pub base: QuadraticForm<T>,
    pub a: T,
    pub form: QuadraticForm<T>,
    pub arithmetic_flag: ArithmeticFlag,
}

/// `h_a = f + <a>` for a totally positive `a`.
pub fn gps_form<T: Scalar>(f: &QuadraticForm<T>, a: &T) -> Result<GpsForm<T>> {
    if !condition_star_check(f) {
        return Err(Error::Precondition("base form must have signature (n-1, 1) and satisfy condition (*)".into()));
    }
    let positive = [Embedding::Identity, Embedding::Conjugate].iter().all(|&e| a.sign_at(e) == Ordering::Greater);
    if !positive {
        return Err(Error::Domain(format!("a in K+ required (totally positive), got {a}")));
    }
    if a.field_of() != f.field() {
        return Err(Error::FieldMismatch(format!("a lies in {}, f over {}", T::tag(&a.field_of()), f.field_tag())));
    }
    let form = f.direct_sum(&QuadraticForm::diagonal(std::slice::from_ref(a), f.field()))?;
    let arithmetic_flag = if a.exact_sqrt().is_some() { ArithmeticFlag::Square } else { ArithmeticFlag::Nonsquare };
    Ok(GpsForm { base: f.clone(), a: a.clone(), form, arithmetic_flag })
}

/// Over Q, a Lorentzian form gives a nonuniform lattice iff it is isotropic.
pub fn is_nonuniform(f: &RationalForm) -> Result<bool> {
    f.require_nonsingular("is_nonuniform")?;
    let sig = f.signature();
    if !sig.is_lorentzian() {
        return Err(Error::Precondition(format!("signature (n, 1) required, got {sig}")));
    }
    Ok(is_isotropic(f)?.is_isotropic())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Signature;

    #[test]
    fn bowditch_mess_entries() {
        let g = bowditch_mess_gram();
        let k = sqrt5();
        assert_eq!(g.gram()[(0, 1)], QuadFieldElem::new(ratio(-1, 4), ratio(-1, 4), k));
        assert_eq!(g.gram()[(1, 2)], k.from_rational(ratio(-1, 2)));
        assert_eq!(g.gram()[(0, 2)], k.from_rational(rat(0)));
        assert_eq!(g.signature(), Signature::new(4, 1, 0));
        assert!(g.conjugate().is_positive_definite_at(Embedding::Identity));
        assert!(condition_star_check(&g));
    }

    #[test]
    fn condition_star_examples() {
        let k = sqrt5();
        let one = k.from_rational(rat(1));
        let f = QuadraticForm::diagonal(&[k.from_rational(rat(-1)), one.clone(), one.clone()], k);
        assert!(!condition_star_check(&f));
        let f = QuadraticForm::diagonal(&[k.sqrt_d().neg(), one.clone(), one], k);
        assert!(condition_star_check(&f));
    }

    #[test]
    fn family_examples() {
        let f = family_form(1, 4, Flavor::Nonuniform).unwrap();
        assert_eq!(f.form, AnyForm::Rational(RationalForm::q(4)));
        let f = family_form(7, 5, Flavor::Nonuniform).unwrap();
        assert_eq!(f.form, AnyForm::Rational(RationalForm::from_integer_diagonal(&[-1, 1, 1, 1, 7, 1])));
        let f = family_form(2, 5, Flavor::Compact).unwrap();
        let k = sqrt5();
        let expect = bowditch_mess_gram().direct_sum(&QuadraticForm::diagonal(&[k.from_rational(rat(2))], k)).unwrap();
        assert_eq!(f.form, AnyForm::Quadratic(expect));
        assert!(family_form(1, 3, Flavor::Nonuniform).is_err());
        assert!(family_form(1, 4, Flavor::Compact).is_err());
        for n in 4..=8 {
            assert_eq!(family_form(1, n, Flavor::Nonuniform).unwrap().form, AnyForm::Rational(RationalForm::q(n)));
        }
    }

    #[test]
    fn gps_examples() {
        let q3 = RationalForm::q(3);
        let h = gps_form(&q3, &rat(2)).unwrap();
        assert_eq!(h.form, RationalForm::q(3).direct_sum(&RationalForm::from_integer_diagonal(&[2])).unwrap());
        assert_eq!(h.arithmetic_flag, ArithmeticFlag::Nonsquare);
        assert_eq!(gps_form(&q3, &rat(4)).unwrap().arithmetic_flag, ArithmeticFlag::Square);
        assert!(gps_form(&q3, &rat(-1)).is_err());
        let k = sqrt5();
        let g = gps_form(&bowditch_mess_gram(), &k.from_rational(rat(5))).unwrap();
        assert_eq!(g.arithmetic_flag, ArithmeticFlag::Square);
        assert_eq!(g.form.signature(), Signature::new(5, 1, 0));
        // sqrt 5 is not totally positive
        assert!(matches!(gps_form(&bowditch_mess_gram(), &k.sqrt_d()), Err(Error::Domain(_))));
    }

    #[test]
    fn nonuniform_examples() {
        assert!(is_nonuniform(&RationalForm::q(4)).unwrap());
        assert!(!is_nonuniform(&RationalForm::from_integer_diagonal(&[-1, 3])).unwrap());
        for a in [1, 2, 3, 5, 7, 11] {
            let f = family_form(a, 4, Flavor::Nonuniform).unwrap();
            assert!(is_nonuniform(f.form.as_rational().unwrap()).unwrap());
        }
    }
}
