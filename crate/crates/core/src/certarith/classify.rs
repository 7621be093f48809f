//! Safe/dangerous classification of multiples `x·ξ` against the Bohr thresholds.
//!
//! `threshold_classify` is the certified path: exact distances against rational
//! enclosures on a precision ladder. `Classifier` puts a floating-point filter in
//! front of it; the filter only decides when the margin exceeds `FILTER_MARGIN`
//! relative, everything closer falls through to the certified path.

use super::enclosure::{ln_raw, pow_enclosure, RationalEnclosure};
use super::quadratic::{compare, QuadraticReal};
use crate::error::{Error, Result};
use crate::rational::{int, rat, to_f64, Rational};
use num_traits::{ToPrimitive, Zero};
use std::cmp::Ordering;

pub const START_BITS: u32 = 64;
pub const DEFAULT_CAP_BITS: u32 = 4096;
const FILTER_MARGIN: f64 = 1.0 / (1u64 << 30) as f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Safe,
    /// `certified = false` means the precision cap was hit and the point is
    /// treated as dangerous conservatively.
    Dangerous { certified: bool },
}

impl Classification {
    pub fn is_dangerous(self) -> bool {
        matches!(self, Classification::Dangerous { .. })
    }

    pub fn is_conservative(self) -> bool {
        matches!(self, Classification::Dangerous { certified: false })
    }
}

/// A quadratic irrational (or rational) certified to satisfy `p·‖pξ‖ >= delta_xi` for `p <= checked_up_to`.
#[derive(Clone, Debug)]
pub struct BadlyApproxWitness {
    pub xi: QuadraticReal,
    pub delta_xi: Rational,
    pub checked_up_to: u64,
    fixed: u128,
}

impl BadlyApproxWitness {
    /// Verifies the bound for every `p <= up_to` and returns the witness, or the first failing `p`.
    pub fn certify(xi: QuadraticReal, delta_xi: Rational, up_to: u64) -> Result<Self> {
        let fixed = fixed_frac(&xi);
        let w = Self { xi, delta_xi, checked_up_to: up_to, fixed };
        let claim = to_f64(&w.delta_xi);
        for p in 1..=up_to {
            let (lo, _) = w.dist_f64(p);
            if (p as f64) * lo > claim * (1.0 + FILTER_MARGIN) {
                continue;
            }
            let d = w.xi.nearest_int_dist(p).scale(&int(p));
            if compare(&d, &w.delta_xi) == Ordering::Less {
                return Err(Error::Precondition(format!(
                    "p = {p}: p·‖pξ‖ < {} so ξ is not {}-badly approximable",
                    w.delta_xi, w.delta_xi
                )));
            }
        }
        Ok(w)
    }

    /// Golden-ratio conjugate with the bound `0.38` checked up to `10^6`.
    pub fn golden() -> Self {
        use std::sync::OnceLock;
        static GOLDEN: OnceLock<BadlyApproxWitness> = OnceLock::new();
        GOLDEN
            .get_or_init(|| Self::certify(QuadraticReal::golden(), rat(38, 100), 1_000_000).expect("golden ratio bound"))
            .clone()
    }

    /// Wraps `xi` without any badly-approximable claim (`delta_xi = 0`).
    pub fn unchecked(xi: QuadraticReal) -> Self {
        let fixed = fixed_frac(&xi);
        Self { xi, delta_xi: Rational::zero(), checked_up_to: 0, fixed }
    }

    /// `floor(frac(ξ)·2^128)`.
    pub fn fixed_frac(&self) -> u128 {
        self.fixed
    }

    /// Rigorous `[lo, hi]` for `‖xξ‖` up to float rounding of the final conversion.
    pub fn dist_f64(&self, x: u64) -> (f64, f64) {
        const TWO128: f64 = 340282366920938463463374607431768211456.0;
        let x = x as u128;
        let v = x.wrapping_mul(self.fixed);
        // true frac(xξ)·2^128 lies in [v, v + x)
        let (end, wrapped) = v.overflowing_add(x);
        if wrapped {
            return (0.0, (x as f64) / TWO128);
        }
        let half = 1u128 << 127;
        let lo = if end <= half {
            v
        } else if v >= half {
            u128::MAX - end + 1
        } else {
            v.min(u128::MAX - end + 1)
        };
        let hi = if end <= half {
            end
        } else if v >= half {
            u128::MAX - v + 1
        } else {
            half
        };
        (lo as f64 / TWO128, hi as f64 / TWO128)
    }

    pub fn is_rational(&self) -> bool {
        self.xi.is_rational()
    }
}

fn fixed_frac(xi: &QuadraticReal) -> u128 {
    xi.frac_fixed(128).to_u128().expect("fractional part below 1")
}

/// Enclosure of `delta / (w·ln(w+1))^beta`.
pub fn threshold_enclosure(weight: u64, beta: &Rational, delta: &Rational, bits: u32) -> Result<RationalEnclosure> {
    if beta.is_zero() {
        return Ok(RationalEnclosure::point(delta.clone()));
    }
    let ln = ln_raw(&int(weight + 1), bits)?;
    let wl = ln.scale(&int(weight));
    let p = pow_enclosure(&wl, beta, bits)?;
    Ok(p.recip()?.scale(delta))
}

fn check_params(beta: &Rational, delta: &Rational) -> Result<()> {
    if beta < &Rational::zero() || beta > &rat(1, 1) {
        return Err(Error::Domain(format!("beta = {beta} outside [0, 1]")));
    }
    if delta <= &Rational::zero() || delta >= &rat(1, 2) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, 1/2)")));
    }
    Ok(())
}

/// Certified classification of `‖xξ‖` against `delta / (w·ln(w+1))^beta` with weight `w`.
pub fn classify_weighted(
    xi: &BadlyApproxWitness,
    x: u64,
    weight: u64,
    beta: &Rational,
    delta: &Rational,
    cap_bits: u32,
) -> Result<Classification> {
    if x == 0 || weight == 0 {
        return Err(Error::Domain("x and weight must be >= 1".into()));
    }
    check_params(beta, delta)?;
    let dist = xi.xi.nearest_int_dist(x);
    if beta.is_zero() {
        return Ok(match compare(&dist, delta) {
            Ordering::Greater => Classification::Safe,
            _ => Classification::Dangerous { certified: true },
        });
    }
    let mut bits = START_BITS;
    loop {
        let t = threshold_enclosure(weight, beta, delta, bits)?;
        if compare(&dist, &t.hi) == Ordering::Greater {
            return Ok(Classification::Safe);
        }
        if compare(&dist, &t.lo) != Ordering::Greater {
            return Ok(Classification::Dangerous { certified: true });
        }
        if bits >= cap_bits {
            return Ok(Classification::Dangerous { certified: false });
        }
        bits = (bits * 2).min(cap_bits);
    }
}

/// Is `‖xξ‖ <= delta / (x·ln(x+1))^beta`? Conservative at the precision cap.
pub fn threshold_classify(
    xi: &BadlyApproxWitness,
    x: u64,
    beta: &Rational,
    delta: &Rational,
    cap_bits: u32,
) -> Result<Classification> {
    classify_weighted(xi, x, x, beta, delta, cap_bits)
}

/// Fast classifier for fixed `(ξ, β, δ)`: float filter, certified fallback.
#[derive(Clone, Debug)]
pub struct Classifier {
    pub witness: BadlyApproxWitness,
    pub beta: Rational,
    pub delta: Rational,
    pub cap_bits: u32,
    beta_f: f64,
    delta_f: f64,
}

impl Classifier {
    pub fn new(witness: BadlyApproxWitness, beta: Rational, delta: Rational, cap_bits: u32) -> Result<Self> {
        check_params(&beta, &delta)?;
        let beta_f = to_f64(&beta);
        let delta_f = to_f64(&delta);
        Ok(Self { witness, beta, delta, cap_bits, beta_f, delta_f })
    }

    /// Float estimate of the threshold at weight `w`.
    pub fn threshold_f64(&self, w: u64) -> f64 {
        if self.beta_f == 0.0 {
            return self.delta_f;
        }
        let w = w as f64;
        self.delta_f / (w * (w + 1.0).ln()).powf(self.beta_f)
    }

    pub fn classify_weighted(&self, x: u64, weight: u64) -> Result<Classification> {
        if x == 0 || weight == 0 {
            return Err(Error::Domain("x and weight must be >= 1".into()));
        }
        let t = self.threshold_f64(weight);
        let (lo, hi) = self.witness.dist_f64(x);
        if lo > t * (1.0 + FILTER_MARGIN) {
            return Ok(Classification::Safe);
        }
        if hi < t * (1.0 - FILTER_MARGIN) {
            return Ok(Classification::Dangerous { certified: true });
        }
        classify_weighted(&self.witness, x, weight, &self.beta, &self.delta, self.cap_bits)
    }

    pub fn classify(&self, x: u64) -> Result<Classification> {
        self.classify_weighted(x, x)
    }
}
