mod common;

use common::*;
use lorentz_forms::arith::{
    field_conjugate, hilbert_symbol, rat, ratio, squarefree_part, BigRational, Place, QuadField, QuadFieldElem, Scalar,
};
use lorentz_forms::constructions::{build_theorem_a_witness, condition_star_check, gps_form, ArithmeticFlag};
use lorentz_forms::forms::{
    discriminant_class, find_isotropic_vector, hasse_invariant, is_isotropic, represents_form, represents_number,
    RationalForm, RepresentMode,
};
use lorentz_forms::lorentz::{classify_pair, reflection_in_vector, separates, LorentzSpace, PairClass};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

fn q(a: i64) -> BigRational {
    rat(a)
}

fn nz(bound: i64) -> impl Strategy<Value = i64> {
    (-bound..=bound).prop_filter("nonzero", |x| *x != 0)
}

fn powmod(b: i64, e: i64, m: i64) -> i64 {
    let (mut r, mut b, mut e) = (1i64, b.rem_euclid(m), e);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn strip_squares(mut a: i64, p: i64) -> (i64, u32) {
    while a % (p * p) == 0 {
        a /= p * p;
    }
    if a % p == 0 {
        (a / p, 1)
    } else {
        (a, 0)
    }
}

fn vp(mut x: i64, p: i64) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Whether `a x^2 + b y^2 - z^2` has a primitive zero mod `p^m` that lifts by
/// Hensel: some partial derivative has valuation `t` with `2t + 1 <= m`.
fn hensel_zero(a: i64, b: i64, p: i64, m: u32) -> bool {
    let pm = p.pow(m);
    let mut roots: Vec<Vec<i64>> = vec![Vec::new(); pm as usize];
    for z in 0..pm {
        roots[(z * z % pm) as usize].push(z);
    }
    let coef = [a, b, -1];
    for x in 0..pm {
        for y in 0..pm {
            let s = (a.rem_euclid(pm) * (x * x % pm) + b.rem_euclid(pm) * (y * y % pm)) % pm;
            for &z in &roots[s as usize] {
                if x % p == 0 && y % p == 0 && z % p == 0 {
                    continue;
                }
                let v = [x, y, z];
                let lifts = (0..3).any(|i| {
                    let d = (2 * coef[i] * v[i]).rem_euclid(pm);
                    d != 0 && 2 * vp(d, p) < m
                });
                if lifts {
                    return true;
                }
            }
        }
    }
    false
}

/// `(a, b)_p` from the definition: `+1` iff `z^2 = a x^2 + b y^2` has a
/// nontrivial p-adic solution. Units have valuation-free partial derivative
/// for the unit coordinate, so `m = 1` suffices with unit coefficients, `m = 3`
/// otherwise, and `m = 5` at 2.
fn hilbert_oracle(a: i64, b: i64, p: i64, memo: &mut HashMap<(i64, u32, i64, u32), i8>) -> i8 {
    let (a1, va) = strip_squares(a, p);
    let (b1, vb) = strip_squares(b, p);
    let key = if p == 2 {
        (a1.rem_euclid(8), va, b1.rem_euclid(8), vb)
    } else {
        (powmod(a1, (p - 1) / 2, p), va, powmod(b1, (p - 1) / 2, p), vb)
    };
    if let Some(&s) = memo.get(&key) {
        return s;
    }
    let m = if p == 2 {
        5
    } else if va + vb == 0 {
        1
    } else {
        3
    };
    let aa = a1 * if va == 1 { p } else { 1 };
    let bb = b1 * if vb == 1 { p } else { 1 };
    let s = if hensel_zero(aa, bb, p, m) { 1 } else { -1 };
    memo.insert(key, s);
    s
}

#[test]
fn hilbert_matches_brute_force_oracle() {
    for p in [2i64, 3, 5, 7, 11, 13] {
        let mut memo = HashMap::new();
        for a in -20i64..=20 {
            for b in -20i64..=20 {
                if a == 0 || b == 0 {
                    continue;
                }
                let got = hilbert_symbol(&q(a), &q(b), &Place::prime(p as u64)).unwrap();
                assert_eq!(got, hilbert_oracle(a, b, p, &mut memo), "({a}, {b})_{p}");
            }
        }
    }
}

fn all_places(a: i64, b: i64) -> Vec<Place> {
    let mut v = vec![Place::Infinity];
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        v.push(Place::prime(p));
    }
    let _ = (a, b);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hilbert_symmetric_and_bilinear(a in nz(50), b in nz(50), c in nz(50)) {
        for v in all_places(a, b) {
            let h = |x: i64, y: i64| hilbert_symbol(&q(x), &q(y), &v).unwrap();
            prop_assert_eq!(h(a, b), h(b, a));
            prop_assert_eq!(h(a, b * c), h(a, b) * h(a, c));
            prop_assert_eq!(h(a, -a), 1);
        }
    }

    #[test]
    fn hilbert_product_formula(a in nz(50), b in nz(50)) {
        // |a|, |b| <= 50, so every prime involved is below 50
        let prod: i8 = all_places(a, b).iter().map(|v| hilbert_symbol(&q(a), &q(b), v).unwrap()).product();
        prop_assert_eq!(prod, 1);
    }

    #[test]
    fn hilbert_rational_arguments(a in nz(30), b in nz(30), s in 1i64..10, t in 1i64..10) {
        for v in [Place::Infinity, Place::prime(2), Place::prime(3), Place::prime(5)] {
            let x = hilbert_symbol(&(q(a) * q(s) * q(s)), &(q(b) / (q(t) * q(t))), &v).unwrap();
            prop_assert_eq!(x, hilbert_symbol(&q(a), &q(b), &v).unwrap());
        }
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(
        d in prop::sample::select(vec![2u64, 3, 5, 6, 7, 10]),
        x in (-30i64..30, 1i64..8, -30i64..30, 1i64..8),
        y in (-30i64..30, 1i64..8, -30i64..30, 1i64..8),
    ) {
        let k = QuadField::new(d).unwrap();
        let e = |t: (i64, i64, i64, i64)| QuadFieldElem::new(ratio(t.0, t.1), ratio(t.2, t.3), k);
        let (u, v) = (e(x), e(y));
        prop_assert_eq!(field_conjugate(&field_conjugate(&u)), u.clone());
        prop_assert_eq!(field_conjugate(&u.mul(&v)), field_conjugate(&u).mul(&field_conjugate(&v)));
        prop_assert_eq!(field_conjugate(&u.add(&v)), field_conjugate(&u).add(&field_conjugate(&v)));
        prop_assert!(u.mul(&field_conjugate(&u)).is_rational());
    }

    #[test]
    fn invariants_under_congruence(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_form(&mut rng, n, 6);
        let t = random_invertible(&mut rng, n, 3);
        let g = f.transform(&t);
        prop_assert_eq!(f.signature(), g.signature());
        prop_assert_eq!(discriminant_class(&f).unwrap(), discriminant_class(&g).unwrap());
        for v in places_of(&f, &g) {
            prop_assert_eq!(hasse_invariant(&f, &v).unwrap(), hasse_invariant(&g, &v).unwrap());
        }
        prop_assert_eq!(is_isotropic(&f).unwrap().is_isotropic(), is_isotropic(&g).unwrap().is_isotropic());
    }

    #[test]
    fn hasse_product_formula_for_forms(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_form(&mut rng, n, 20);
        prop_assert_eq!(hasse_product(&f), 1);
    }

    #[test]
    fn meyer_rank_five(d in proptest::collection::vec(nz(10), 5)) {
        let f = RationalForm::from_integer_diagonal(&d);
        let indefinite = d.iter().any(|&x| x > 0) && d.iter().any(|&x| x < 0);
        prop_assert_eq!(is_isotropic(&f).unwrap().is_isotropic(), indefinite);
    }

    #[test]
    fn isotropy_witness_is_a_zero(d in proptest::collection::vec(nz(6), 2..=5)) {
        let f = RationalForm::from_integer_diagonal(&d);
        prop_assume!(is_isotropic(&f).unwrap().is_isotropic());
        let c = find_isotropic_vector(&f, 20).unwrap();
        if let Some(w) = c.witness {
            let v: Vec<BigRational> = w.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            prop_assert!(f.value(&v).is_zero());
            prop_assert!(is_isotropic(&f).unwrap().is_isotropic());
        }
    }

    #[test]
    fn represents_number_sound(d in proptest::collection::vec(nz(6), 1..=4), b in nz(12)) {
        let f = RationalForm::from_integer_diagonal(&d);
        let r = represents_number(&f, &q(b)).unwrap();
        match (&r.represented, &r.witness) {
            (true, Some(w)) => prop_assert_eq!(f.value(w), q(b)),
            (true, None) => {}
            (false, _) => {
                // no x / t with f(x) = b t^2 among small vectors
                let n = d.len();
                let h = 4i64;
                let mut x = vec![-h; n];
                loop {
                    let fx: i64 = x.iter().zip(&d).map(|(xi, di)| di * xi * xi).sum();
                    for t in 1..=6i64 {
                        prop_assert!(fx != b * t * t, "found {:?}/{}", x, t);
                    }
                    let mut i = 0;
                    while i < n && x[i] == h {
                        x[i] = -h;
                        i += 1;
                    }
                    if i == n { break; }
                    x[i] += 1;
                }
            }
        }
    }

    #[test]
    fn splitting_certificates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rand::Rng::gen_range(&mut rng, 1..=2usize);
        let n = k + 3 + rand::Rng::gen_range(&mut rng, 0..=1usize);
        let g = random_form(&mut rng, k, 5);
        let f = loop {
            let f = random_form(&mut rng, n, 4);
            let (sf, sg) = (f.signature(), g.signature());
            if sf.pos >= sg.pos && sf.neg >= sg.neg { break f; }
        };
        let w = represents_form(&f, &g, RepresentMode::Checked).unwrap();
        prop_assert!(w.verify(&f));
        let t = w.transform_for_g();
        let top = f.transform(&t).restrict(&(0..k).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(top, g.clone());
        let (sf, sg, sh) = (f.signature(), g.signature(), w.h_part.signature());
        prop_assert_eq!((sh.pos, sh.neg), (sf.pos - sg.pos, sf.neg - sg.neg));
    }

    #[test]
    fn classify_pair_invariance(a in proptest::collection::vec(-4i64..=4, 4), b in proptest::collection::vec(-4i64..=4, 4),
                                s in nz(5), u in proptest::collection::vec(-2i64..=2, 4)) {
        let space = LorentzSpace::new(RationalForm::q(3)).unwrap();
        let v = |x: &[i64]| x.iter().map(|&t| q(t)).collect::<Vec<_>>();
        let (av, bv) = (v(&a), v(&b));
        prop_assume!(space.norm(&av).is_positive() && space.norm(&bv).is_positive());
        let ha = space.hyperplane(&av).unwrap();
        let hb = space.hyperplane(&bv).unwrap();
        let c = classify_pair(&space, &ha, &hb).unwrap();
        prop_assert_eq!(c, classify_pair(&space, &hb, &ha).unwrap());
        let scaled: Vec<BigRational> = av.iter().map(|x| x * q(s)).collect();
        prop_assert_eq!(c, classify_pair(&space, &space.hyperplane(&scaled).unwrap(), &hb).unwrap());
        let uv = v(&u);
        prop_assume!(!space.norm(&uv).is_zero());
        let r = reflection_in_vector(&space, &uv).unwrap();
        prop_assert_eq!(c, classify_pair(&space, &ha.image(&r).unwrap(), &hb.image(&r).unwrap()).unwrap());
        if ha == hb { prop_assert_eq!(c, PairClass::Equal); }
    }

    #[test]
    fn reflection_properties(u in proptest::collection::vec(-4i64..=4, 4), diag in prop::sample::select(vec![vec![-1i64, 1, 1, 1], vec![-2, 1, 3, 1], vec![-1, 1, 1, 7]])) {
        let f = RationalForm::from_integer_diagonal(&diag);
        let space = LorentzSpace::new(f.clone()).unwrap();
        let uv: Vec<BigRational> = u.iter().map(|&t| q(t)).collect();
        let uu = space.norm(&uv);
        prop_assume!(!uu.is_zero());
        let r = reflection_in_vector(&space, &uv).unwrap();
        let m = r.matrix();
        prop_assert!(m.mul(m).is_identity());
        prop_assert_eq!(m.determinant(), q(-1));
        prop_assert_eq!(m.trace(), q(2));
        prop_assert!(r.is_form_preserving());
        // primitive u: integral iff (u, u) divides 2 (u, b_j)
        let g = u.iter().fold(0i64, |acc, &x| num_integer::Integer::gcd(&acc, &x));
        if g == 1 {
            let gu: Vec<BigRational> = f.gram().mul_vec(&uv);
            let crit = gu.iter().all(|x| (q(2) * x / &uu).is_integer());
            prop_assert_eq!(r.is_integral(), crit);
        }
    }

    #[test]
    fn separates_symmetric_and_scale_free(s in nz(4), t in nz(4), k in 2i64..6) {
        // three vertical chords in the upper half plane picture of q_2
        let space = LorentzSpace::new(RationalForm::q(2)).unwrap();
        let chord = |c: i64| vec![q(c), q(c), q(1)];
        let (a, w, b) = (chord(-k), chord(0), chord(k));
        let h = |v: &Vec<BigRational>, m: i64| space.hyperplane(&v.iter().map(|x| x * q(m)).collect::<Vec<_>>());
        let (ha, hw, hb) = (h(&a, 1).unwrap(), h(&w, 1).unwrap(), h(&b, 1).unwrap());
        prop_assume!(classify_pair(&space, &ha, &hw).unwrap().is_disjoint());
        let base = separates(&space, &hw, &ha, &hb).unwrap();
        prop_assert_eq!(base, separates(&space, &hw, &hb, &ha).unwrap());
        prop_assert_eq!(base, separates(&space, &h(&w, s).unwrap(), &h(&a, t).unwrap(), &hb).unwrap());
    }

    #[test]
    fn gps_adds_one_positive(seed in any::<u64>(), a in 1i64..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rand::Rng::gen_range(&mut rng, 2..=5usize);
        let mut d: Vec<i64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, 1..=9)).collect();
        d[0] = -d[0];
        let f = RationalForm::from_integer_diagonal(&d).transform(&random_invertible(&mut rng, n, 2));
        prop_assert!(condition_star_check(&f));
        let h = gps_form(&f, &q(a)).unwrap();
        let (sf, sh) = (f.signature(), h.form.signature());
        prop_assert_eq!((sh.pos, sh.neg, sh.zero), (sf.pos + 1, sf.neg, sf.zero));
        let square = lorentz_forms::arith::rational::is_square(&q(a));
        prop_assert_eq!(h.arithmetic_flag == ArithmeticFlag::Square, square);
    }
}

#[test]
fn squarefree_classes_multiply() {
    for a in 1i64..40 {
        for b in 1i64..40 {
            let s = squarefree_part(&q(a * b)).unwrap();
            let t = squarefree_part(&q(a)).unwrap().mul(&squarefree_part(&q(b)).unwrap());
            assert_eq!(s, t);
        }
    }
}

#[test]
fn theorem_a_on_scrambled_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [5usize, 6, 7] {
        for _ in 0..3 {
            let t = loop {
                let t = random_invertible(&mut rng, n, 2);
                if t.determinant().abs() == q(1) {
                    break t;
                }
            };
            let f = RationalForm::q(n - 1).transform(&t);
            let w = build_theorem_a_witness(&f, 200).unwrap();
            assert!(w.all_passed(), "{:?}", w.report.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
    }
}
