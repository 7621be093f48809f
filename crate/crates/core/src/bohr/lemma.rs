//! Counting bounds for Bohr sets: the `#H(p, 2p)` bound and the weighted sum over `K(p, q)`.

use super::{enumerate_h, enumerate_k, BohrQuery, Mode};
use crate::certarith::enclosure::{ln_raw, pow_enclosure, RationalEnclosure, Target};
use crate::certarith::BadlyApproxWitness;
use crate::construction::schedule_next;
use crate::error::{Error, Result};
use crate::rational::{int, rat, Rational};
use num_traits::{One, Zero};

const BITS: u32 = 64;
const SUM_GRID: u32 = 96;

#[derive(Clone, Debug)]
pub struct Lemma2Record {
    pub p: u64,
    pub count: usize,
    pub conservative_count: usize,
    pub bound: RationalEnclosure,
    pub ok: bool,
    /// `count <= bound.lo`; when false but `ok`, the verdict leaned on enclosure slack.
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct Corollary3Record {
    pub p: u64,
    pub q: u64,
    pub members: usize,
    pub conservative_count: usize,
    pub sum: RationalEnclosure,
    pub bound: RationalEnclosure,
    pub ok: bool,
}

fn require_badly_approximable(xi: &BadlyApproxWitness, delta: &Rational) -> Result<()> {
    if delta > &xi.delta_xi {
        return Err(Error::Precondition(format!(
            "delta = {delta} exceeds the certified bound {} for ξ",
            xi.delta_xi
        )));
    }
    Ok(())
}

/// `(24δ + 2)·p^(1−β) / ln(p+1)^β`.
pub fn lemma2_bound(delta: &Rational, beta: &Rational, p: u64) -> Result<RationalEnclosure> {
    let alpha = Rational::one() - beta;
    let pa = pow_enclosure(&RationalEnclosure::point(int(p)), &alpha, BITS)?;
    let lb = pow_enclosure(&ln_raw(&int(p + 1), BITS)?, beta, BITS)?;
    let c = rat(24, 1) * delta + rat(2, 1);
    Ok(pa.div(&lb)?.scale(&c).with_target(Target::Expr(format!("(24·{delta}+2)·{p}^{alpha}/ln({})^{beta}", p + 1))))
}

/// Checks `#H(p, 2p) <= (24δ + 2)·p^α / ln(p+1)^β` with `α = 1 − β`, counting by brute force.
pub fn lemma2_check(xi: &BadlyApproxWitness, delta: &Rational, beta: &Rational, p: u64) -> Result<Lemma2Record> {
    if p == 0 {
        return Err(Error::Domain("p must be >= 1".into()));
    }
    require_badly_approximable(xi, delta)?;
    let query = BohrQuery::new(xi.clone(), beta.clone(), delta.clone(), p, 2 * p);
    let h = enumerate_h(&query, Mode::Naive)?;
    let bound = lemma2_bound(delta, beta, p)?;
    let count = int(h.members.len() as u64);
    let certified = count <= bound.lo;
    Ok(Lemma2Record {
        p,
        count: h.members.len(),
        conservative_count: h.conservative_count,
        ok: certified || count <= bound.hi,
        certified,
        bound,
    })
}

/// `64·(1 + ln(1/δ))`.
pub fn corollary3_bound(delta: &Rational) -> Result<RationalEnclosure> {
    let l = ln_raw(&delta.recip(), BITS)?;
    let one = RationalEnclosure::point(Rational::one());
    Ok(one.add(&l).scale(&int(64)).with_target(Target::Expr(format!("64·(1+ln(1/{delta}))"))))
}

/// Checks `Σ_{x ∈ K(p, q)} 1/(x·ln(x+1))^α <= 64·(1 + ln(1/δ))` with
/// `q = floor((p²/δ)·ln(p²/δ)) + 1` and `α = 1 − β`.
pub fn corollary3_sum(xi: &BadlyApproxWitness, delta: &Rational, beta: &Rational, p: u64) -> Result<Corollary3Record> {
    if p == 0 {
        return Err(Error::Domain("p must be >= 1".into()));
    }
    if delta >= &rat(1, 24) {
        return Err(Error::Precondition(format!("delta = {delta} must be < 1/24")));
    }
    require_badly_approximable(xi, delta)?;
    let q: u64 = schedule_next(p as u128, delta)?
        .try_into()
        .map_err(|_| Error::Range("q exceeds u64".into()))?;
    let mode = if xi.is_rational() { Mode::Naive } else { Mode::Accelerated };
    let k = enumerate_k(&BohrQuery::new(xi.clone(), beta.clone(), delta.clone(), p, q), mode)?;
    let alpha = Rational::one() - beta;
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for &x in &k.members {
        let wl = ln_raw(&int(x + 1), BITS)?.scale(&int(x));
        let term = pow_enclosure(&wl, &alpha, BITS)?.recip()?.round_outward(SUM_GRID);
        lo += term.lo;
        hi += term.hi;
    }
    let sum = RationalEnclosure::new(lo, hi, Target::Expr(format!("sum over K({p}, {q})")));
    let bound = corollary3_bound(delta)?;
    Ok(Corollary3Record {
        p,
        q,
        members: k.members.len(),
        conservative_count: k.conservative_count,
        ok: sum.hi <= bound.lo,
        sum,
        bound,
    })
}
