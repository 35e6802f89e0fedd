use super::QuadraticForm;
use crate::arith::Scalar;
use crate::matrix::Matrix;

/// `transform^t * gram(f) * transform = gram(diagonal)`, exactly.
#[derive(Clone, Debug)]
pub struct Diagonalization<T: Scalar> {
    pub transform: Matrix<T>,
    pub diagonal: QuadraticForm<T>,
}

/// Symmetric Gaussian reduction. Zero pivots are handled by splitting a
/// hyperbolic pair `b_i, b_j` into `b_i + b_j, b_i - b_j`; a zero block is
/// left as zeros on the diagonal.
pub fn diagonalize<T: Scalar>(f: &QuadraticForm<T>) -> Diagonalization<T> {
    let n = f.dim();
    let field = f.field();
    let mut d = f.gram().clone();
    let mut t = Matrix::identity(n, field);

    for k in 0..n {
        if let Some(i) = (k..n).find(|&i| !d[(i, i)].eq_zero()) {
            swap_basis(&mut d, &mut t, i, k);
        } else {
            let pair = (k..n).find_map(|i| (i + 1..n).find(|&j| !d[(i, j)].eq_zero()).map(|j| (i, j)));
            let Some((i, j)) = pair else {
                break;
            };
            // k <= i < j, so the first swap leaves j in place
            swap_basis(&mut d, &mut t, i, k);
            swap_basis(&mut d, &mut t, j, k + 1);
            split_hyperbolic_pair(&mut d, &mut t, k);
        }
        let pivot_inv = d[(k, k)].inv().expect("nonzero pivot");
        for j in k + 1..n {
            if d[(k, j)].eq_zero() {
                continue;
            }
            let c = d[(k, j)].mul(&pivot_inv);
            add_multiple(&mut d, &mut t, j, k, &c.neg());
        }
    }
    Diagonalization { transform: t, diagonal: QuadraticForm { gram: d } }
}

fn swap_basis<T: Scalar>(d: &mut Matrix<T>, t: &mut Matrix<T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    d.swap_rows(a, b);
    d.swap_cols(a, b);
    t.swap_cols(a, b);
}

/// Basis change `b_j <- b_j + c * b_k`, applied by congruence.
fn add_multiple<T: Scalar>(d: &mut Matrix<T>, t: &mut Matrix<T>, j: usize, k: usize, c: &T) {
    let n = d.rows();
    for r in 0..n {
        let v = d[(r, j)].add(&c.mul(&d[(r, k)]));
        d[(r, j)] = v;
    }
    for col in 0..n {
        let v = d[(j, col)].add(&c.mul(&d[(k, col)]));
        d[(j, col)] = v;
    }
    for r in 0..t.rows() {
        let v = t[(r, j)].add(&c.mul(&t[(r, k)]));
        t[(r, j)] = v;
    }
}

/// `(b_k, b_{k+1}) <- (b_k + b_{k+1}, b_k - b_{k+1})`.
fn split_hyperbolic_pair<T: Scalar>(d: &mut Matrix<T>, t: &mut Matrix<T>, k: usize) {
    let n = d.rows();
    let m = k + 1;
    let apply_cols = |x: &mut Matrix<T>| {
        for r in 0..x.rows() {
            let a = x[(r, k)].clone();
            let b = x[(r, m)].clone();
            x[(r, k)] = a.add(&b);
            x[(r, m)] = a.sub(&b);
        }
    };
    apply_cols(d);
    apply_cols(t);
    for c in 0..n {
        let a = d[(k, c)].clone();
        let b = d[(m, c)].clone();
        d[(k, c)] = a.add(&b);
        d[(m, c)] = a.sub(&b);
    }
}
