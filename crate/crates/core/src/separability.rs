//! Congruence levels separating a hyperplane `H_0` from a disjoint family
//! `H_1..H_k`, integral orthogonal elements for testing, and an exact check
//! of the resulting dichotomy: every `gamma` of level `N` either fixes
//! `H_0` or moves it off `H_0, ..., H_k`.

use crate::arith::factor::{is_prime_u64, next_prime_after};
use crate::arith::rational::primitive_integer_vector;
use crate::arith::{BigInt, BigRational, Rationals};
use crate::constructions::build_theorem_a_witness;
use crate::error::{Error, Result};
use crate::forms::RationalForm;
use crate::lorentz::{LorentzMatrix, LorentzSpace};
use crate::matrix::Matrix;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::HashSet;

/// `H_0` and its companions, all given by primitive integer normals over a
/// Lorentzian form with integer Gram matrix.
#[derive(Clone, Debug)]
pub struct HyperplaneFamily {
    space: LorentzSpace<BigRational>,
    gram: Vec<Vec<BigInt>>,
    normals: Vec<Vec<BigInt>>,
}

fn integer_gram(space: &LorentzSpace<BigRational>) -> Result<Vec<Vec<BigInt>>> {
    space
        .form()
        .gram()
        .to_rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(x.to_integer())
                    } else {
                        Err(Error::Domain("integer Gram matrix required".into()))
                    }
                })
                .collect()
        })
        .collect()
}

fn pair(g: &[Vec<BigInt>], u: &[BigInt], v: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            s += ui * &g[i][j] * vj;
        }
    }
    s
}

impl HyperplaneFamily {
    /// `normals[0]` is `e_0`.
    pub fn new(space: LorentzSpace<BigRational>, normals: Vec<Vec<BigInt>>) -> Result<Self> {
        let gram = integer_gram(&space)?;
        if normals.is_empty() {
            return Err(Error::Domain("a family needs at least e_0".into()));
        }
        for (i, e) in normals.iter().enumerate() {
            if e.len() != space.dim() {
                return Err(Error::DimensionMismatch { expected: space.dim(), found: e.len() });
            }
            let g = e.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !g.is_one() {
                return Err(Error::Domain(format!("normal e_{i} is not primitive (content {g})")));
            }
            if !pair(&gram, e, e).is_positive() {
                return Err(Error::Domain(format!("normal e_{i} must satisfy (e, e) > 0")));
            }
        }
        Ok(HyperplaneFamily { space, gram, normals })
    }

    /// Normals scaled to primitive integer vectors first.
    pub fn from_rational_normals(space: LorentzSpace<BigRational>, normals: &[Vec<BigRational>]) -> Result<Self> {
        let ints = normals.iter().map(|v| primitive_integer_vector(v)).collect();
        Self::new(space, ints)
    }

    pub fn space(&self) -> &LorentzSpace<BigRational> {
        &self.space
    }

    pub fn normals(&self) -> &[Vec<BigInt>] {
        &self.normals
    }

    pub fn pairing(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        pair(&self.gram, u, v)
    }
}

/// `H, tau_1 H, tau_2 H, tau_3 H, Pi_1, Pi_2` from the construction on `f`,
/// as primitive integer normals in the coordinates of `f`.
pub fn theorem_a_family(f: &RationalForm, height: u64) -> Result<HyperplaneFamily> {
    let w = build_theorem_a_witness(f, height)?;
    let normals: Vec<Vec<BigRational>> = w.hyperplane_family()?.iter().map(|h| w.to_ambient(h.normal())).collect();
    HyperplaneFamily::from_rational_normals(LorentzSpace::new(f.clone())?, &normals)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypothesisVerdict {
    Parallel,
    Ultraparallel,
    Intersecting,
    /// `e_i = +-e_0`; excluded from the family.
    SameHyperplane,
}

impl HypothesisVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            HypothesisVerdict::Parallel => "parallel",
            HypothesisVerdict::Ultraparallel => "ultraparallel",
            HypothesisVerdict::Intersecting => "intersecting",
            HypothesisVerdict::SameHyperplane => "same hyperplane",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisEntry {
    pub index: usize,
    pub pairing: BigInt,
    pub verdict: HypothesisVerdict,
}

/// For each `i >= 1`, compares `(e_i, e_0)^2` with `(e_i, e_i)(e_0, e_0)`.
pub fn check_family_hypothesis(family: &HyperplaneFamily) -> Vec<HypothesisEntry> {
    let e0 = &family.normals[0];
    let n00 = family.pairing(e0, e0);
    family.normals[1..]
        .iter()
        .enumerate()
        .map(|(k, ei)| {
            let p = family.pairing(e0, ei);
            let neg: Vec<BigInt> = ei.iter().map(|x| -x).collect();
            let verdict = if ei == e0 || neg == *e0 {
                HypothesisVerdict::SameHyperplane
            } else {
                match (&p * &p).cmp(&(family.pairing(ei, ei) * &n00)) {
                    std::cmp::Ordering::Less => HypothesisVerdict::Intersecting,
                    std::cmp::Ordering::Equal => HypothesisVerdict::Parallel,
                    std::cmp::Ordering::Greater => HypothesisVerdict::Ultraparallel,
                }
            };
            HypothesisEntry { index: k + 1, pairing: p, verdict }
        })
        .collect()
}

/// Entry positions of `e_0 + e_i` and `e_0 - e_i` that `N` does not divide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelWitness {
    pub index: usize,
    pub plus_entry: usize,
    pub minus_entry: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceLevel {
    pub n: u64,
    /// `max_{i = 0..k} |(e_0, e_i)|` over the retained indices.
    pub max_pairing: BigInt,
    /// Retained indices `i >= 1` (same-hyperplane entries dropped).
    pub indices: Vec<usize>,
    pub witnesses: Vec<LevelWitness>,
}

fn sum_diff(e0: &[BigInt], ei: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    (e0.iter().zip(ei).map(|(a, b)| a + b).collect(), e0.iter().zip(ei).map(|(a, b)| a - b).collect())
}

fn undivided_entry(v: &[BigInt], n: u64) -> Option<usize> {
    let n = BigInt::from(n);
    v.iter().position(|x| !x.is_zero() && !(x % &n).is_zero())
}

/// The non-divisibility witnesses at level `n`, when every retained index has them.
pub fn level_witnesses(family: &HyperplaneFamily, indices: &[usize], n: u64) -> Option<Vec<LevelWitness>> {
    let e0 = &family.normals[0];
    indices
        .iter()
        .map(|&i| {
            let (plus, minus) = sum_diff(e0, &family.normals[i]);
            Some(LevelWitness {
                index: i,
                plus_entry: undivided_entry(&plus, n)?,
                minus_entry: undivided_entry(&minus, n)?,
            })
        })
        .collect()
}

/// Smallest prime `N > 2 max |(e_0, e_i)|` (over `i = 0..k`) that fails to
/// divide some nonzero entry of `e_0 + e_i` and of `e_0 - e_i` for each `i`.
pub fn compute_congruence_level(family: &HyperplaneFamily) -> Result<CongruenceLevel> {
    let report = check_family_hypothesis(family);
    let mut indices = Vec::new();
    for entry in &report {
        match entry.verdict {
            HypothesisVerdict::Intersecting => {
                return Err(Error::Precondition(format!(
                    "H_0 and H_{} intersect: (e_0, e_i)^2 < (e_0, e_0)(e_i, e_i)",
                    entry.index
                )))
            }
            HypothesisVerdict::SameHyperplane => {}
            _ => indices.push(entry.index),
        }
    }
    let e0 = &family.normals[0];
    for &i in &indices {
        let (plus, minus) = sum_diff(e0, &family.normals[i]);
        for (v, sign) in [(&plus, "+"), (&minus, "-")] {
            if v.iter().all(|x| x.is_zero()) {
                return Err(Error::Precondition(format!(
                    "e_0 {sign} e_{i} = 0: excluding gamma(e_0) = -+e_{i} is unachievable"
                )));
            }
        }
    }
    let max_pairing = std::iter::once(0)
        .chain(indices.iter().copied())
        .map(|i| family.pairing(e0, &family.normals[i]).abs())
        .max()
        .expect("nonempty");
    let bound = (BigInt::from(2) * &max_pairing).to_u64().ok_or(Error::Overflow("congruence level bound"))?;
    let mut n = next_prime_after(bound);
    loop {
        if let Some(witnesses) = level_witnesses(family, &indices, n) {
            return Ok(CongruenceLevel { n, max_pairing, indices, witnesses });
        }
        n = next_prime_after(n);
    }
}

/// Whether a smaller prime would also do; the computed level never admits one.
pub fn smaller_admissible_prime(family: &HyperplaneFamily, level: &CongruenceLevel) -> Option<u64> {
    let bound = (BigInt::from(2) * &level.max_pairing).to_u64()?;
    (bound + 1..level.n).filter(|&p| is_prime_u64(p)).find(|&p| level_witnesses(family, &level.indices, p).is_some())
}

pub type IntMatrix = Vec<Vec<i64>>;

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            let x = a[i][k];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                let t = x.checked_mul(b[k][j]).ok_or(Error::Overflow("element product"))?;
                out[i][j] = out[i][j].checked_add(t).ok_or(Error::Overflow("element product"))?;
            }
        }
    }
    Ok(out)
}

/// An integral form-preserving matrix and a word in the generating
/// reflections that produces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalElement {
    pub matrix: IntMatrix,
    pub word: Vec<usize>,
}

impl OrthogonalElement {
    pub fn to_matrix(&self) -> Matrix<BigRational> {
        let rows =
            self.matrix.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
        Matrix::from_rows(rows, Rationals).expect("rectangular")
    }

    pub fn to_lorentz(&self, space: &LorentzSpace<BigRational>) -> Result<LorentzMatrix<BigRational>> {
        space.element(self.to_matrix())
    }

    pub fn is_identity_mod(&self, n: u64) -> bool {
        let n = n as i64;
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| (x - i64::from(i == j)).rem_euclid(n) == 0))
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    /// Reflection vectors `u`, in generator order.
    pub generators: Vec<Vec<i64>>,
    pub reflections: Vec<IntMatrix>,
    /// Identity first, then by word length; first word reaching a matrix wins.
    pub elements: Vec<OrthogonalElement>,
}

fn small_gram(space: &LorentzSpace<BigRational>) -> Result<Vec<Vec<i64>>> {
    integer_gram(space)?
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.to_i64().ok_or(Error::Overflow("Gram entry"))).collect())
        .collect()
}

/// Primitive `u` with max-norm `<= height`, first nonzero entry positive,
/// `(u, u) != 0` and `(u, u) | 2 (u, b_j)` for every basis vector `b_j`.
/// Ordered by max-norm, then lexicographically.
pub fn integral_reflection_vectors(space: &LorentzSpace<BigRational>, height: u64) -> Result<Vec<Vec<i64>>> {
    let g = small_gram(space)?;
    let n = space.dim();
    let h = height as i64;
    let side = (2 * h + 1) as u64;
    let total = side.checked_pow(n as u32).ok_or(Error::Overflow("reflection vector shell"))?;
    let mut found: Vec<Vec<i64>> = (0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut u = vec![0i64; n];
            for x in u.iter_mut() {
                *x = (code % side) as i64 - h;
                code /= side;
            }
            let first = *u.iter().find(|&&x| x != 0)?;
            if first < 0 || u.iter().fold(0i64, |a, &x| a.gcd(&x)) != 1 {
                return None;
            }
            let gu: Vec<i64> = (0..n).map(|j| (0..n).map(|i| u[i] * g[i][j]).sum()).collect();
            let uu: i64 = u.iter().zip(&gu).map(|(a, b)| a * b).sum();
            if uu == 0 || gu.iter().any(|&x| (2 * x) % uu != 0) {
                return None;
            }
            Some(u)
        })
        .collect();
    found.sort_by(|a, b| {
        let ma = a.iter().map(|x| x.abs()).max();
        let mb = b.iter().map(|x| x.abs()).max();
        ma.cmp(&mb).then_with(|| a.cmp(b))
    });
    Ok(found)
}

fn reflection_matrix(g: &[Vec<i64>], u: &[i64]) -> IntMatrix {
    let n = u.len();
    let gu: Vec<i64> = (0..n).map(|j| (0..n).map(|i| u[i] * g[i][j]).sum()).collect();
    let uu: i64 = u.iter().zip(&gu).map(|(a, b)| a * b).sum();
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j) - u[i] * (2 * gu[j] / uu)).collect()).collect()
}

/// All products of at most `word_length` integral reflections in vectors of
/// max-norm `<= vector_height`, deduplicated.
pub fn enumerate_orthogonal_elements(
    space: &LorentzSpace<BigRational>,
    vector_height: u64,
    word_length: usize,
) -> Result<Enumeration> {
    let g = small_gram(space)?;
    let n = space.dim();
    let generators = integral_reflection_vectors(space, vector_height)?;
    let reflections: Vec<IntMatrix> = generators.iter().map(|u| reflection_matrix(&g, u)).collect();
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    let id = OrthogonalElement { matrix: identity(n), word: vec![] };
    seen.insert(id.matrix.clone());
    let mut elements = vec![id];
    let mut frontier = vec![0usize];
    for _ in 0..word_length {
        let products: Vec<Vec<OrthogonalElement>> = frontier
            .par_iter()
            .map(|&k| {
                let base = &elements[k];
                reflections
                    .iter()
                    .enumerate()
                    .map(|(r, m)| {
                        let mut word = base.word.clone();
                        word.push(r);
                        Ok(OrthogonalElement { matrix: mat_mul(&base.matrix, m)?, word })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for e in products.into_iter().flatten() {
            if seen.insert(e.matrix.clone()) {
                next.push(elements.len());
                elements.push(e);
            }
        }
        frontier = next;
    }
    Ok(Enumeration { generators, reflections, elements })
}

/// Recomputes an element from its word.
pub fn word_product(enumeration: &Enumeration, word: &[usize]) -> Result<IntMatrix> {
    let n = enumeration.elements[0].matrix.len();
    word.iter().try_fold(identity(n), |acc, &r| mat_mul(&acc, &enumeration.reflections[r]))
}

/// `(M x, y) = (x, y) mod N` for integer `M`, `x`, `y`.
pub fn congruence_step_holds(gram: &[Vec<i64>], m: &IntMatrix, x: &[i64], y: &[i64], n: u64) -> bool {
    let g: Vec<Vec<BigInt>> = gram.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
    let yb: Vec<BigInt> = y.iter().map(|&v| BigInt::from(v)).collect();
    let mx: Vec<BigInt> = m.iter().map(|r| r.iter().zip(&xb).map(|(&a, b)| BigInt::from(a) * b).sum()).collect();
    let d = pair(&g, &mx, &yb) - pair(&g, &xb, &yb);
    (d % BigInt::from(n)).is_zero()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub word: Vec<usize>,
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DichotomyReport {
    pub level: u64,
    pub examined: usize,
    /// Elements congruent to the identity mod `N`.
    pub congruent: usize,
    pub fixed: usize,
    pub moved_off: usize,
    pub checks: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl DichotomyReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn proportional_int(u: &[BigInt], v: &[BigInt]) -> bool {
    // u x v = 0 componentwise (all 2x2 minors vanish)
    (0..u.len()).all(|i| (i + 1..u.len()).all(|j| &u[i] * &v[j] == &u[j] * &v[i]))
}

/// Every element `gamma = I mod N` either fixes `H_0` (`gamma e_0` parallel
/// to `e_0`) or sends it off each `H_i`, `i = 0..k`:
/// `(gamma e_0, e_i)^2 >= (e_0, e_0)(e_i, e_i)` with `gamma e_0 != +-e_i`.
/// The congruence `(gamma e_0, e_i) = (e_0, e_i) mod N` is checked too.
pub fn verify_dichotomy(
    family: &HyperplaneFamily,
    level: &CongruenceLevel,
    elements: &[OrthogonalElement],
) -> Result<DichotomyReport> {
    let n = family.space.dim();
    let big = |m: &IntMatrix| -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    };
    for e in elements {
        if e.matrix.len() != n || e.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: e.matrix.len() });
        }
        let m = big(&e.matrix);
        // M^t G M = G
        for i in 0..n {
            for j in 0..n {
                let ci: Vec<BigInt> = (0..n).map(|r| m[r][i].clone()).collect();
                let cj: Vec<BigInt> = (0..n).map(|r| m[r][j].clone()).collect();
                if family.pairing(&ci, &cj) != family.gram[i][j] {
                    return Err(Error::Domain(format!("element {:?} does not preserve the form", e.word)));
                }
            }
        }
    }
    let e0 = &family.normals[0];
    let n00 = family.pairing(e0, e0);
    let modulus = BigInt::from(level.n);
    let indices: Vec<usize> = std::iter::once(0).chain(level.indices.iter().copied()).collect();
    let congruent: Vec<&OrthogonalElement> = elements.iter().filter(|e| e.is_identity_mod(level.n)).collect();
    let results: Vec<(bool, usize, Vec<Counterexample>)> = congruent
        .par_iter()
        .map(|e| {
            let m = big(&e.matrix);
            let ge0: Vec<BigInt> = m.iter().map(|r| r.iter().zip(e0).map(|(a, b)| a * b).sum()).collect();
            let fixed = proportional_int(&ge0, e0);
            let mut bad = Vec::new();
            let mut checks = 0;
            for &i in &indices {
                let ei = &family.normals[i];
                let p = family.pairing(&ge0, ei);
                let p0 = family.pairing(e0, ei);
                checks += 1;
                if !((&p - &p0) % &modulus).is_zero() {
                    bad.push(Counterexample {
                        word: e.word.clone(),
                        index: i,
                        reason: "congruence mod N fails".into(),
                    });
                }
                if fixed {
                    continue;
                }
                let neg: Vec<BigInt> = ei.iter().map(|x| -x).collect();
                if ge0 == *ei || ge0 == neg {
                    bad.push(Counterexample { word: e.word.clone(), index: i, reason: "gamma e_0 = +-e_i".into() });
                } else if &p * &p < &n00 * family.pairing(ei, ei) {
                    bad.push(Counterexample { word: e.word.clone(), index: i, reason: "gamma(H_0) meets H_i".into() });
                }
            }
            (fixed, checks, bad)
        })
        .collect();
    let fixed = results.iter().filter(|r| r.0).count();
    Ok(DichotomyReport {
        level: level.n,
        examined: elements.len(),
        congruent: congruent.len(),
        fixed,
        moved_off: congruent.len() - fixed,
        checks: results.iter().map(|r| r.1).sum(),
        counterexamples: results.into_iter().flat_map(|r| r.2).collect(),
    })
}
