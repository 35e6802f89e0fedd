//! Local invariants over Q and the Hasse-Minkowski isotropy decision.

use super::{diagonalize, IsotropyCertificate, IsotropyVerdict, RationalForm};
use crate::arith::rational::prime_support;
use crate::arith::{hilbert_symbol, is_local_square, rat, squarefree_part, BigRational, Place, SquareClass};
use crate::error::Result;
use num_bigint::BigUint;
use num_traits::One;

/// Squarefree integer coefficients of a diagonalization of a nonsingular form.
pub(crate) fn squarefree_diagonal(f: &RationalForm) -> Result<Vec<BigRational>> {
    f.require_nonsingular("local invariants")?;
    diagonalize(f)
        .diagonal
        .gram()
        .diagonal_entries()
        .iter()
        .map(|a| squarefree_part(a).map(|s| s.to_rational()))
        .collect()
}

/// Square class of the determinant.
pub fn discriminant_class(f: &RationalForm) -> Result<SquareClass> {
    f.require_nonsingular("discriminant")?;
    squarefree_part(&f.determinant())
}

fn hasse_of_diagonal(a: &[BigRational], place: &Place) -> i8 {
    let mut s = 1i8;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            s *= hilbert_symbol(&a[i], &a[j], place).expect("nonzero coefficients");
        }
    }
    s
}

/// `prod_{i<j} (a_i, a_j)_v` for a diagonalization `diag(a_1..a_n)`.
pub fn hasse_invariant(f: &RationalForm, place: &Place) -> Result<i8> {
    let a = squarefree_diagonal(f)?;
    Ok(hasse_of_diagonal(&a, place))
}

/// `{inf}` plus the primes dividing 2, the determinant, and every entry's
/// numerator and denominator. Outside this set all Hasse invariants are +1.
pub fn relevant_places(f: &RationalForm) -> Vec<Place> {
    let mut primes: Vec<BigUint> = vec![BigUint::from(2u32)];
    let mut add = |q: &BigRational| {
        for p in prime_support(q) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    };
    add(&f.determinant());
    for x in f.gram().entries() {
        add(x);
    }
    if let Ok(a) = squarefree_diagonal(f) {
        for x in &a {
            add(x);
        }
    }
    primes.sort();
    std::iter::once(Place::Infinity).chain(primes.into_iter().map(Place::Prime)).collect()
}

fn locally_isotropic_diagonal(a: &[BigRational], place: &Place) -> bool {
    let n = a.len();
    if let Place::Infinity = place {
        let pos = a.iter().any(|x| x > &rat(0));
        let neg = a.iter().any(|x| x < &rat(0));
        return n >= 2 && pos && neg;
    }
    let d: BigRational = a.iter().product();
    match n {
        0 | 1 => false,
        2 => is_local_square(&-d, place),
        3 => {
            let lhs = hilbert_symbol(&rat(-1), &-d, place).expect("nonzero");
            lhs == hasse_of_diagonal(a, place)
        }
        4 => {
            !is_local_square(&d, place)
                || hasse_of_diagonal(a, place) == hilbert_symbol(&rat(-1), &rat(-1), place).expect("nonzero")
        }
        _ => true,
    }
}

/// Isotropy over the completion at one place.
pub fn is_locally_isotropic(f: &RationalForm, place: &Place) -> Result<bool> {
    let a = squarefree_diagonal(f)?;
    Ok(locally_isotropic_diagonal(&a, place))
}

/// Exact isotropy verdict over Q by rank: rank 1 never, rank 2 iff `-det`
/// is a square, ranks 3-4 by local solubility at the real place and the
/// primes dividing `2 det`, rank >= 5 iff indefinite. Never carries a witness.
pub fn is_isotropic(f: &RationalForm) -> Result<IsotropyCertificate> {
    let a = squarefree_diagonal(f)?;
    let iso = match a.len() {
        0 | 1 => false,
        2 => crate::arith::rational::is_square(&-(&a[0] * &a[1])),
        3 | 4 => {
            let d: BigRational = a.iter().product();
            let mut places = vec![Place::Infinity, Place::Prime(BigUint::from(2u32))];
            places.extend(
                prime_support(&d).into_iter().filter(|p| !p.is_one() && p != &BigUint::from(2u32)).map(Place::Prime),
            );
            places.iter().all(|v| locally_isotropic_diagonal(&a, v))
        }
        _ => locally_isotropic_diagonal(&a, &Place::Infinity),
    };
    Ok(IsotropyCertificate {
        verdict: if iso { IsotropyVerdict::Isotropic } else { IsotropyVerdict::Anisotropic },
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rationals;
    use crate::error::Error;
    use crate::matrix::Matrix;

    #[test]
    fn hasse_examples() {
        let id2 = RationalForm::from_integer_diagonal(&[1, 1]);
        for p in [Place::Infinity, Place::prime(2), Place::prime(3), Place::prime(5)] {
            assert_eq!(hasse_invariant(&id2, &p).unwrap(), 1);
        }
        let m = RationalForm::from_integer_diagonal(&[-1, -1]);
        assert_eq!(hasse_invariant(&m, &Place::Infinity).unwrap(), -1);
        assert_eq!(hasse_invariant(&RationalForm::q(4), &Place::prime(2)).unwrap(), 1);
    }

    #[test]
    fn hasse_is_basis_independent() {
        // q4 in a second basis: T unimodular upper triangular
        let q4 = RationalForm::q(4);
        let rows = [[1, 2, 0, 1, 0], [0, 1, 3, 0, 0], [0, 0, 1, -1, 2], [0, 0, 0, 1, 1], [0, 0, 0, 0, 1]];
        let t =
            Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), Rationals).unwrap();
        let g = q4.transform(&t);
        for p in [Place::Infinity, Place::prime(2), Place::prime(3), Place::prime(7)] {
            assert_eq!(hasse_invariant(&g, &p).unwrap(), hasse_invariant(&q4, &p).unwrap());
        }
    }

    #[test]
    fn singular_is_rejected() {
        let f = RationalForm::from_integer_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(matches!(hasse_invariant(&f, &Place::Infinity), Err(Error::Singular(_))));
        assert!(matches!(is_isotropic(&f), Err(Error::Singular(_))));
    }

    #[test]
    fn isotropy_examples() {
        let v = |e: &[i64]| is_isotropic(&RationalForm::from_integer_diagonal(e)).unwrap().verdict;
        assert_eq!(is_isotropic(&RationalForm::q(4)).unwrap().verdict, IsotropyVerdict::Isotropic);
        assert_eq!(v(&[1, 2, 3]), IsotropyVerdict::Anisotropic);
        assert_eq!(v(&[1, -3]), IsotropyVerdict::Anisotropic);
        assert_eq!(v(&[1, -4]), IsotropyVerdict::Isotropic);
        // x^2 + y^2 = 3 z^2 has no rational solution
        assert_eq!(v(&[1, 1, -3]), IsotropyVerdict::Anisotropic);
        assert_eq!(v(&[1, 1, -2]), IsotropyVerdict::Isotropic);
        // x^2+y^2+z^2 = 7 w^2: 7 is not a sum of three squares
        assert_eq!(v(&[1, 1, 1, -7]), IsotropyVerdict::Anisotropic);
        assert_eq!(v(&[1, 1, 1, -3]), IsotropyVerdict::Isotropic);
        assert_eq!(v(&[-1, 2, 3, 5, 7]), IsotropyVerdict::Isotropic);
        assert_eq!(v(&[1, 2, 3, 5, 7]), IsotropyVerdict::Anisotropic);
    }
}
