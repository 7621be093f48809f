//! Bohr sets `H(p, q)` and `K(p, q)`: the `x` in `(p, q]` whose multiples `x·ξ`
//! fall within a shrinking threshold of an integer.
//!
//! `H` uses the threshold `δ/(p·ln(p+1))^β`, fixed over the range; `K` uses
//! `δ/(x·ln(x+1))^β` at each point. Both are enumerated either by a naive scan
//! or, for irrational `ξ`, by jumping between hits of the rotation by `ξ`.

pub mod lemma;
pub mod rotation;

use crate::certarith::{BadlyApproxWitness, Classification, Classifier, DEFAULT_CAP_BITS};
use crate::error::{Error, Result};
use crate::rational::Rational;
use rotation::{Rotation, MODULUS};
use serde::Serialize;

pub use lemma::{corollary3_sum, lemma2_check, Corollary3Record, Lemma2Record};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Naive,
    Accelerated,
}

#[derive(Clone, Debug)]
pub struct BohrQuery {
    pub xi: BadlyApproxWitness,
    pub beta: Rational,
    pub delta: Rational,
    pub p: u64,
    pub q: u64,
    pub cap_bits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BohrSetResult {
    pub members: Vec<u64>,
    pub mode: Mode,
    /// Members admitted only because the precision cap was reached.
    pub conservative_count: usize,
}

impl BohrQuery {
    pub fn new(xi: BadlyApproxWitness, beta: Rational, delta: Rational, p: u64, q: u64) -> Self {
        Self { xi, beta, delta, p, q, cap_bits: DEFAULT_CAP_BITS }
    }

    fn check_range(&self) -> Result<()> {
        if self.p > self.q {
            return Err(Error::Range(format!("empty range requires p <= q, got p = {} > q = {}", self.p, self.q)));
        }
        Ok(())
    }

    pub fn classifier(&self) -> Result<Classifier> {
        Classifier::new(self.xi.clone(), self.beta.clone(), self.delta.clone(), self.cap_bits)
    }
}

fn collect(
    xs: impl IntoIterator<Item = u64>,
    mut classify: impl FnMut(u64) -> Result<Classification>,
    mode: Mode,
) -> Result<BohrSetResult> {
    let mut members = Vec::new();
    let mut conservative_count = 0;
    for x in xs {
        let c = classify(x)?;
        if c.is_dangerous() {
            members.push(x);
            if c.is_conservative() {
                conservative_count += 1;
            }
        }
    }
    Ok(BohrSetResult { members, mode, conservative_count })
}

fn rotation_for(xi: &BadlyApproxWitness) -> Result<Rotation> {
    if xi.is_rational() {
        return Err(Error::Unsupported("accelerated enumeration needs an irrational ξ".into()));
    }
    Ok(Rotation::from_fixed128(xi.fixed_frac()))
}

/// Window half-width in rotation units for a float threshold, padded upward.
fn threshold_units(t: f64) -> u128 {
    let padded = t * (1.0 + 1.0 / (1u64 << 20) as f64);
    let units = padded * MODULUS as f64;
    if units >= MODULUS as f64 {
        MODULUS
    } else {
        units.ceil() as u128 + 1
    }
}

/// `H(p, q)`: threshold evaluated at the range start `p`.
pub fn enumerate_h(query: &BohrQuery, mode: Mode) -> Result<BohrSetResult> {
    query.check_range()?;
    if query.p == 0 {
        return Err(Error::Domain("H threshold needs p >= 1 (ln(p+1) = 0 at p = 0)".into()));
    }
    let c = query.classifier()?;
    let (p, q) = (query.p, query.q);
    match mode {
        Mode::Naive => collect(p + 1..=q, |x| c.classify_weighted(x, p), mode),
        Mode::Accelerated => {
            let rot = rotation_for(&query.xi)?;
            let cands = rot.candidates(p + 1, q, threshold_units(c.threshold_f64(p)));
            collect(cands, |x| c.classify_weighted(x, p), mode)
        }
    }
}

/// `K(p, q)`: threshold evaluated at each `x`.
pub fn enumerate_k(query: &BohrQuery, mode: Mode) -> Result<BohrSetResult> {
    query.check_range()?;
    let c = query.classifier()?;
    match mode {
        Mode::Naive => collect(query.p + 1..=query.q, |x| c.classify(x), mode),
        Mode::Accelerated => enumerate_k_accelerated(query),
    }
}

/// `K(p, q)` via the rotation: dyadic blocks `[s, 2s)` share the window of their
/// first (largest) threshold, and every candidate is then classified exactly.
pub fn enumerate_k_accelerated(query: &BohrQuery) -> Result<BohrSetResult> {
    query.check_range()?;
    let rot = rotation_for(&query.xi)?;
    let c = query.classifier()?;
    let mut cands = Vec::new();
    let mut s = query.p + 1;
    while s <= query.q {
        let e = s.saturating_mul(2).saturating_sub(1).min(query.q);
        cands.extend(rot.candidates(s, e, threshold_units(c.threshold_f64(s))));
        if e == u64::MAX {
            break;
        }
        s = e + 1;
    }
    collect(cands, |x| c.classify(x), Mode::Accelerated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certarith::QuadraticReal;
    use crate::rational::rat;

    fn q(beta: Rational, delta: Rational, p: u64, qq: u64) -> BohrQuery {
        BohrQuery::new(BadlyApproxWitness::golden(), beta, delta, p, qq)
    }

    #[test]
    fn h_examples() {
        let r = enumerate_h(&q(rat(1, 2), rat(3, 10), 10, 20), Mode::Naive).unwrap();
        assert_eq!(r.members, vec![13]);
        let r = enumerate_h(&q(rat(1, 1), rat(3, 10), 10, 20), Mode::Naive).unwrap();
        assert!(r.members.is_empty());
        let r = enumerate_h(&q(rat(1, 2), rat(3, 10), 10, 10), Mode::Naive).unwrap();
        assert!(r.members.is_empty());
    }

    #[test]
    fn h_rejects_zero_start_and_reversed_range() {
        assert!(matches!(enumerate_h(&q(rat(1, 2), rat(3, 10), 0, 20), Mode::Naive), Err(Error::Domain(_))));
        assert!(matches!(enumerate_k(&q(rat(1, 2), rat(3, 10), 21, 20), Mode::Naive), Err(Error::Range(_))));
    }

    #[test]
    fn k_examples_both_modes() {
        for mode in [Mode::Naive, Mode::Accelerated] {
            assert!(enumerate_k(&q(rat(1, 1), rat(1, 10), 0, 20), mode).unwrap().members.is_empty());
            assert_eq!(enumerate_k(&q(rat(0, 1), rat(3, 10), 0, 10), mode).unwrap().members, vec![2, 3, 5, 6, 8, 10]);
            assert_eq!(enumerate_k(&q(rat(1, 2), rat(1, 4), 0, 30), mode).unwrap().members, vec![8, 13, 21]);
            assert!(enumerate_k(&q(rat(1, 2), rat(1, 4), 30, 30), mode).unwrap().members.is_empty());
        }
    }

    #[test]
    fn accelerated_rejects_rational_xi() {
        let w = BadlyApproxWitness::unchecked(QuadraticReal::rational(rat(1, 3)));
        let query = BohrQuery::new(w, rat(1, 2), rat(1, 4), 0, 30);
        assert!(matches!(enumerate_k_accelerated(&query), Err(Error::Unsupported(_))));
    }

    #[test]
    fn k_within_h_and_monotone_in_delta() {
        for beta in [rat(0, 1), rat(1, 3), rat(1, 2), rat(1, 1)] {
            for p in [1u64, 7, 50, 300] {
                let k = enumerate_k(&q(beta.clone(), rat(1, 4), p, 4 * p), Mode::Naive).unwrap();
                let h = enumerate_h(&q(beta.clone(), rat(1, 4), p, 4 * p), Mode::Naive).unwrap();
                assert!(k.members.iter().all(|x| h.members.contains(x)));
                let small = enumerate_k(&q(beta.clone(), rat(1, 10), 0, 2000), Mode::Accelerated).unwrap();
                let large = enumerate_k(&q(beta.clone(), rat(1, 4), 0, 2000), Mode::Accelerated).unwrap();
                assert!(small.members.iter().all(|x| large.members.contains(x)));
            }
        }
    }

    #[test]
    fn accelerated_matches_naive_h() {
        for (beta, delta, p, qq) in [(rat(1, 2), rat(3, 10), 100, 200), (rat(0, 1), rat(1, 32), 1000, 2000), (rat(1, 4), rat(1, 256), 4096, 8192)] {
            let query = q(beta, delta, p, qq);
            assert_eq!(enumerate_h(&query, Mode::Naive).unwrap().members, enumerate_h(&query, Mode::Accelerated).unwrap().members);
        }
    }
}
