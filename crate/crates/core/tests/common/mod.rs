#![allow(dead_code, clippy::needless_range_loop)]

use lorentz_forms::arith::{rat, BigRational, Place, Rationals};
use lorentz_forms::forms::{hasse_invariant, relevant_places, RationalForm};
use lorentz_forms::matrix::Matrix;
use num_traits::Zero;
use rand::Rng;

pub fn sym_from_upper(n: usize, upper: &[i64]) -> RationalForm {
    let mut rows = vec![vec![0i64; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            rows[i][j] = upper[k];
            rows[j][i] = upper[k];
            k += 1;
        }
    }
    RationalForm::from_integer_rows(&rows).expect("symmetric")
}

/// Nonsingular symmetric integer form, entries in `[-bound, bound]`.
pub fn random_form<R: Rng>(rng: &mut R, n: usize, bound: i64) -> RationalForm {
    loop {
        let upper: Vec<i64> = (0..n * (n + 1) / 2).map(|_| rng.gen_range(-bound..=bound)).collect();
        let f = sym_from_upper(n, &upper);
        if !f.is_singular() {
            return f;
        }
    }
}

pub fn random_invertible<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Matrix<BigRational> {
    loop {
        let rows: Vec<Vec<BigRational>> =
            (0..n).map(|_| (0..n).map(|_| rat(rng.gen_range(-bound..=bound))).collect()).collect();
        let m = Matrix::from_rows(rows, Rationals).unwrap();
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

pub fn nonzero<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    loop {
        let x = rng.gen_range(-bound..=bound);
        if x != 0 {
            return x;
        }
    }
}

pub fn hasse_product(f: &RationalForm) -> i8 {
    relevant_places(f).iter().map(|v| hasse_invariant(f, v).unwrap()).product()
}

pub fn places_of(f: &RationalForm, g: &RationalForm) -> Vec<Place> {
    let mut v = relevant_places(f);
    for p in relevant_places(g) {
        if !v.contains(&p) {
            v.push(p);
        }
    }
    v
}

/// Brute-force zero search over all integer vectors with max-norm `<= h`:
/// whether some nonzero `v` has `f(v) = 0`.
pub fn brute_isotropic(diag: &[i64], h: i64) -> bool {
    // meet in the middle on the split coordinates
    let n = diag.len();
    let k = n / 2;
    let sums = |idx: &[usize]| -> Vec<(i64, bool)> {
        let mut out = vec![(0i64, true)];
        for &i in idx {
            let mut next = Vec::with_capacity(out.len() * (2 * h as usize + 1));
            for &(s, z) in &out {
                for x in -h..=h {
                    next.push((s + diag[i] * x * x, z && x == 0));
                }
            }
            out = next;
        }
        out
    };
    let left: Vec<usize> = (0..k).collect();
    let right: Vec<usize> = (k..n).collect();
    let l = sums(&left);
    let mut r = sums(&right);
    r.sort_unstable();
    for (s, lz) in l {
        let target = -s;
        let lo = r.partition_point(|&(v, _)| v < target);
        let mut i = lo;
        while i < r.len() && r[i].0 == target {
            if !(lz && r[i].1) {
                return true;
            }
            i += 1;
        }
    }
    false
}
