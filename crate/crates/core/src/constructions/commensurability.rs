//! Certified rational non-similarity of family members.
//!
//! Commensurable lattices come from similar forms, `f = lambda g` up to
//! isometry. A pair is certified when every square class `lambda` that could
//! work leaves some invariant (signature, determinant class, a Hasse
//! invariant) different. Uncertified pairs are undecided, never commensurable.

use super::families::{family_form, Flavor};
use crate::arith::rational::prime_support;
use crate::arith::{squarefree_part, BigInt, BigRational, Place};
use crate::error::{Error, Result};
use crate::forms::{hasse_invariant, RationalForm};
use num_bigint::BigUint;
use num_traits::One;

/// A differing invariant of `f` and `lambda g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub lambda: BigInt,
    pub invariant: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    /// Odd dimension: one mismatch for each `lambda` in the complete sweep.
    Sweep,
    /// Even dimension: determinant classes differ, and scaling keeps them.
    Discriminant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCertificate {
    pub kind: CertificateKind,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairStatus {
    Certified(PairCertificate),
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairVerdict {
    pub a: u64,
    pub b: u64,
    pub status: PairStatus,
}

impl PairVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self.status, PairStatus::Certified(_))
    }
}

fn sweep_primes(f: &RationalForm, g: &RationalForm) -> Vec<BigUint> {
    let mut primes = vec![BigUint::from(2u32)];
    for p in prime_support(&(f.determinant() * g.determinant())) {
        if !p.is_one() && !primes.contains(&p) {
            primes.push(p);
        }
    }
    primes.sort();
    primes
}

/// All `+-` products of subsets of `primes`, in a fixed order.
fn sweep_lambdas(primes: &[BigUint]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(2 << primes.len());
    for mask in 0u64..(1 << primes.len()) {
        let mut m = BigInt::one();
        for (i, p) in primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                m *= BigInt::from(p.clone());
            }
        }
        out.push(m.clone());
        out.push(-m);
    }
    out
}

/// First invariant distinguishing `f` from `lambda g`, if any.
fn first_mismatch(f: &RationalForm, g: &RationalForm, lambda: &BigInt) -> Result<Option<Mismatch>> {
    let lg = g.scale(&BigRational::from_integer(lambda.clone()))?;
    let mk =
        |inv: &str, l: String, r: String| Mismatch { lambda: lambda.clone(), invariant: inv.into(), left: l, right: r };
    let (sf, sg) = (f.signature(), lg.signature());
    if sf != sg {
        return Ok(Some(mk("signature", sf.to_string(), sg.to_string())));
    }
    let (df, dg) = (squarefree_part(&f.determinant())?, squarefree_part(&lg.determinant())?);
    if df != dg {
        return Ok(Some(mk("determinant class", df.to_string(), dg.to_string())));
    }
    let mut places = vec![Place::Infinity];
    let mut primes = sweep_primes(f, &lg);
    for p in prime_support(&BigRational::from_integer(lambda.clone())) {
        if !p.is_one() && !primes.contains(&p) {
            primes.push(p);
        }
    }
    primes.sort();
    places.extend(primes.into_iter().map(Place::Prime));
    for v in &places {
        let (hf, hg) = (hasse_invariant(f, v)?, hasse_invariant(&lg, v)?);
        if hf != hg {
            return Ok(Some(mk(&format!("hasse invariant at {v}"), hf.to_string(), hg.to_string())));
        }
    }
    Ok(None)
}

/// A proof that `f` and `g` are not similar over Q, if the invariants give one.
pub fn similarity_certificate(f: &RationalForm, g: &RationalForm) -> Result<Option<PairCertificate>> {
    f.require_nonsingular("similarity certificate")?;
    g.require_nonsingular("similarity certificate")?;
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    if f.dim().is_multiple_of(2) {
        let one = BigInt::one();
        let m = first_mismatch(f, g, &one)?;
        return Ok(match m {
            Some(m) if m.invariant == "determinant class" => {
                Some(PairCertificate { kind: CertificateKind::Discriminant, mismatches: vec![m] })
            }
            _ => None,
        });
    }
    let mut mismatches = Vec::new();
    for lambda in sweep_lambdas(&sweep_primes(f, g)) {
        match first_mismatch(f, g, &lambda)? {
            Some(m) => mismatches.push(m),
            None => return Ok(None),
        }
    }
    Ok(Some(PairCertificate { kind: CertificateKind::Sweep, mismatches }))
}

/// Recomputes a certificate from scratch: coverage of the sweep and every
/// recorded mismatch.
pub fn verify_pair_certificate(f: &RationalForm, g: &RationalForm, cert: &PairCertificate) -> bool {
    let Ok(lambdas) = (match cert.kind {
        CertificateKind::Sweep if f.dim() % 2 == 1 => Ok(sweep_lambdas(&sweep_primes(f, g))),
        CertificateKind::Discriminant if f.dim().is_multiple_of(2) => Ok(vec![BigInt::one()]),
        _ => Err(()),
    }) else {
        return false;
    };
    if lambdas.len() != cert.mismatches.len() {
        return false;
    }
    lambdas.iter().zip(&cert.mismatches).all(|(l, m)| {
        if m.lambda != *l {
            return false;
        }
        let lg = match g.scale(&BigRational::from_integer(l.clone())) {
            Ok(x) => x,
            Err(_) => return false,
        };
        recompute(f, &lg, &m.invariant).is_some_and(|(x, y)| x == m.left && y == m.right && x != y)
            && (cert.kind == CertificateKind::Sweep || m.invariant == "determinant class")
    })
}

fn recompute(f: &RationalForm, lg: &RationalForm, invariant: &str) -> Option<(String, String)> {
    match invariant {
        "signature" => Some((f.signature().to_string(), lg.signature().to_string())),
        "determinant class" => Some((
            squarefree_part(&f.determinant()).ok()?.to_string(),
            squarefree_part(&lg.determinant()).ok()?.to_string(),
        )),
        s => {
            let place = s.strip_prefix("hasse invariant at ")?;
            let v = if place == "inf" { Place::Infinity } else { Place::Prime(place.parse::<BigUint>().ok()?) };
            Some((hasse_invariant(f, &v).ok()?.to_string(), hasse_invariant(lg, &v).ok()?.to_string()))
        }
    }
}

/// Pairwise certification over a parameter list; pairs in input order.
pub fn pairwise_noncommensurable(params: &[u64], n: usize, flavor: Flavor) -> Result<Vec<PairVerdict>> {
    if flavor != Flavor::Nonuniform {
        return Err(Error::Precondition("certification is only available for the nonuniform family over Q".into()));
    }
    let forms: Vec<RationalForm> = params
        .iter()
        .map(|&a| Ok(family_form(a, n, flavor)?.form.as_rational().expect("rational family").clone()))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in 0..params.len() {
        for j in i + 1..params.len() {
            let status = match similarity_certificate(&forms[i], &forms[j])? {
                Some(c) => PairStatus::Certified(c),
                None => PairStatus::Undecided,
            };
            out.push(PairVerdict { a: params[i], b: params[j], status });
        }
    }
    Ok(out)
}
