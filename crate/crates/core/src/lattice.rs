//! LLL reduction and small integral kernels.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn dot(u: &[BigInt], v: &[BigInt]) -> BigInt {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn round(x: &BigRational) -> BigInt {
    (x + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// Gram-Schmidt coefficients `mu[i][j]` (`j < i`) and squared norms of `b*_i`.
fn gso(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.len();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    for i in 0..n {
        // <b_i, b*_j> = <b_i, b_j> - sum_{l<j} mu[j][l] <b_i, b*_l>
        let mut inner: Vec<BigRational> = Vec::with_capacity(i);
        for j in 0..i {
            let mut r = BigRational::from_integer(dot(&b[i], &b[j]));
            for l in 0..j {
                r -= &mu[j][l] * &inner[l];
            }
            mu[i][j] = &r / &norms[j];
            inner.push(r);
        }
        let mut nb = BigRational::from_integer(dot(&b[i], &b[i]));
        for j in 0..i {
            nb -= &mu[i][j] * &inner[j];
        }
        norms.push(nb);
    }
    (mu, norms)
}

/// In-place LLL reduction (delta = 3/4) of linearly independent rows.
pub fn lll_reduce(b: &mut [Vec<BigInt>]) {
    let n = b.len();
    if n < 2 {
        return;
    }
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let (mut mu, mut norms) = gso(b);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = round(&mu[k][j]);
            if q.is_zero() {
                continue;
            }
            let bj = b[j].clone();
            for (x, y) in b[k].iter_mut().zip(&bj) {
                *x -= &q * y;
            }
            let qr = BigRational::from_integer(q);
            for l in 0..j {
                let t = &qr * &mu[j][l];
                mu[k][l] -= t;
            }
            mu[k][j] -= &qr;
        }
        let lovasz = norms[k] >= ((&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1]);
        if lovasz {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (mu, norms) = gso(b);
            k = (k - 1).max(1);
        }
    }
}

/// LLL-reduced basis of `{x in Z^n : a x = 0}` for an integer matrix `a`
/// with linearly independent rows.
pub fn integer_kernel(a: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let k = a.len();
    if k == 0 {
        let mut id: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect();
        lll_reduce(&mut id);
        return id;
    }
    let max = a.iter().flatten().map(|x| x.abs()).max().unwrap_or_default();
    let mut scale = (BigInt::one() << (n + 4)) * (max + 1u32);
    loop {
        let mut rows: Vec<Vec<BigInt>> = (0..n)
            .map(|j| {
                let mut r: Vec<BigInt> = (0..n).map(|i| BigInt::from(u8::from(i == j))).collect();
                r.extend(a.iter().map(|row| &scale * &row[j]));
                r
            })
            .collect();
        lll_reduce(&mut rows);
        let kernel: Vec<Vec<BigInt>> =
            rows.iter().take_while(|r| r[n..].iter().all(|x| x.is_zero())).map(|r| r[..n].to_vec()).collect();
        if kernel.len() == n - k {
            return kernel;
        }
        scale = &scale * &scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&t| BigInt::from(t)).collect()
    }

    #[test]
    fn reduces_a_skewed_basis() {
        let mut b = vec![v(&[1, 0, 0]), v(&[1000, 1, 0]), v(&[734, 591, 1])];
        lll_reduce(&mut b);
        // unimodular image of Z^3: reduced vectors are units
        for r in &b {
            assert_eq!(dot(r, r), BigInt::from(1));
        }
    }

    #[test]
    fn kernel_is_saturated_and_small() {
        let a = vec![v(&[6, 10, 15, 0]), v(&[0, 0, 1, 1])];
        let k = integer_kernel(&a, 4);
        assert_eq!(k.len(), 2);
        for x in &k {
            for row in &a {
                assert!(dot(row, x).is_zero());
            }
            assert!(x.iter().all(|t| t.abs() <= BigInt::from(20)));
        }
        // saturation: the 2x2 minors of the kernel basis are coprime
        let minors: Vec<BigInt> = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .map(|(i, j)| &k[0][i] * &k[1][j] - &k[0][j] * &k[1][i])
            .collect();
        let g = minors.iter().fold(BigInt::zero(), |acc, m| num_integer::Integer::gcd(&acc, m));
        assert_eq!(g, BigInt::from(1));
    }
}
