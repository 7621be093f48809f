use super::params::ConstructionParams;
use super::schedule::schedule_next;
use super::stage::{to_u64, StageRecord};
use crate::certarith::classify::threshold_enclosure;
use crate::certarith::RationalEnclosure;
use crate::dyadic::{covered_measure, RemovalFamily};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use num_traits::Zero;

/// `μ(B_q ∩ A_α(x))` against `8δ·μ(B_q)/(x·ln(x+1))^α`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma4Record {
    pub nu: usize,
    pub q: u128,
    pub x: u64,
    pub alpha: Rational,
    pub lhs: Rational,
    pub rhs: RationalEnclosure,
    pub ok: bool,
}

/// Smallest admissible `x`: `ceil((q²/δ)·ln(q²/δ))`, and `1` for `q = 0`.
pub fn lemma4_range_start(q: u128, delta: &Rational) -> Result<u128> {
    // (q²/δ)·ln(q²/δ) is irrational for q >= 1, so its ceiling is floor + 1
    schedule_next(q, delta)
}

pub fn lemma4_check(stage: &StageRecord, x: u64, alpha: &Rational, delta: &Rational) -> Result<Lemma4Record> {
    if stage.measure.is_zero() {
        return Err(Error::Precondition(format!("stage {} has measure 0", stage.nu)));
    }
    let start = lemma4_range_start(stage.q, delta)?;
    if (x as u128) < start {
        return Err(Error::Range(format!("x = {x} below the admissible start {start} for q = {}", stage.q)));
    }
    let family = RemovalFamily::build(x, alpha, delta)?;
    let lhs = covered_measure(&stage.survivor, &family);
    let mut bits = 64;
    loop {
        let rhs = threshold_enclosure(x, alpha, delta, bits)?.scale(&(&stage.measure * int(8)));
        let ok = lhs <= rhs.lo;
        if ok || lhs > rhs.hi || bits >= 1024 {
            return Ok(Lemma4Record { nu: stage.nu, q: stage.q, x, alpha: alpha.clone(), lhs, rhs, ok });
        }
        bits *= 2;
    }
}

/// `count` points spread evenly over `[x_min, 4·x_min]`.
pub fn lemma4_samples(x_min: u64, count: u64) -> Vec<u64> {
    if count <= 1 {
        return vec![x_min];
    }
    (0..count).map(|k| x_min + ((3 * x_min as u128 * k as u128) / (count - 1) as u128) as u64).collect()
}

/// Checks every stage with positive measure at `count` sampled `x` for both families.
pub fn lemma4_sweep(stages: &[StageRecord], params: &ConstructionParams, count: u64) -> Result<Vec<Lemma4Record>> {
    let mut out = Vec::new();
    for stage in stages.iter().filter(|s| !s.measure.is_zero()) {
        let x_min = to_u64(lemma4_range_start(stage.q, &params.delta)?)?;
        for x in lemma4_samples(x_min, count) {
            for (alpha, _) in params.families() {
                out.push(lemma4_check(stage, x, alpha, &params.delta)?);
            }
        }
    }
    Ok(out)
}
