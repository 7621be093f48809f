//! Removal intervals `E_α(x)` around the fractions `y/x`, their dyadic levels and covers.

use super::set::{merge_runs, DyadicSet, Run, MAX_LEVEL, UNIT};
use crate::certarith::enclosure::{ln_raw, pow_enclosure, RationalEnclosure};
use crate::error::{Error, Result};
use crate::rational::{ceil, floor_log2, int, pow2, rat, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Extra bits carried by the rounded-up radius beyond the cover level.
const RADIUS_GUARD: u32 = 32;

fn check_delta(delta: &Rational) -> Result<()> {
    if delta <= &Rational::zero() || delta >= &rat(1, 2) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, 1/2)")));
    }
    Ok(())
}

fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha < &Rational::zero() || alpha > &rat(1, 1) {
        return Err(Error::Domain(format!("alpha = {alpha} outside [0, 1]")));
    }
    Ok(())
}

/// Enclosure of `x^(1+α)·ln(x+1)^α = x·(x·ln(x+1))^α`.
fn weight_enclosure(x: u64, alpha: &Rational, bits: u32) -> Result<RationalEnclosure> {
    if alpha.is_zero() {
        return Ok(RationalEnclosure::point(int(x)));
    }
    let wl = ln_raw(&int(x + 1), bits)?.scale(&int(x));
    Ok(pow_enclosure(&wl, alpha, bits)?.scale(&int(x)))
}

/// `floor(log2(x^(1+α)·ln(x+1)^α / 2δ))`, with `level_of(0) = 0`.
///
/// Values below 1 (possible only at `x = 1`) clamp to level 0.
pub fn level_of(x: u64, alpha: &Rational, delta: &Rational) -> Result<u32> {
    check_delta(delta)?;
    check_alpha(alpha)?;
    if x == 0 {
        return Ok(0);
    }
    let two_delta = delta * int(2);
    let mut bits = 64;
    let k = loop {
        let w = weight_enclosure(x, alpha, bits)?;
        let lo = floor_log2(&(&w.lo / &two_delta));
        let hi = floor_log2(&(&w.hi / &two_delta));
        if lo == hi {
            break lo;
        }
        bits *= 2;
    };
    let k = k.max(0) as u32;
    if k > MAX_LEVEL {
        return Err(Error::Range(format!("level {k} for x = {x} exceeds {MAX_LEVEL}")));
    }
    Ok(k)
}

/// `E_α(x)`: the `x + 1` open intervals `(y/x − r, y/x + r)`, clipped to `[0, 1]`,
/// with `r` rounded up to the grid `2^-(level + 32)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovalFamily {
    pub x: u64,
    pub alpha: Rational,
    pub delta: Rational,
    pub level: u32,
    /// Radius upper bound is `radius_num / 2^(level + 32)`.
    radius_num: u128,
}

impl RemovalFamily {
    pub fn build(x: u64, alpha: &Rational, delta: &Rational) -> Result<Self> {
        if x == 0 {
            return Err(Error::Domain("removal family needs x >= 1".into()));
        }
        let level = level_of(x, alpha, delta)?;
        let shift = level + RADIUS_GUARD;
        let w = weight_enclosure(x, alpha, 64)?;
        let r_hi = delta / &w.lo;
        let num = ceil(&(r_hi * int(pow2(shift))));
        let radius_num = num.to_u128().ok_or_else(|| Error::Range("radius numerator overflow".into()))?;
        Ok(Self { x, alpha: alpha.clone(), delta: delta.clone(), level, radius_num })
    }

    /// The rounded-up radius as an exact rational.
    pub fn radius(&self) -> Rational {
        BigRational::new(BigInt::from(self.radius_num), pow2(self.level + RADIUS_GUARD))
    }

    /// `(y/x − r, y/x + r) ∩ [0, 1]` as rational endpoints, `y = 0..=x`.
    pub fn intervals(&self) -> impl Iterator<Item = (Rational, Rational)> + '_ {
        let r = self.radius();
        let zero = Rational::zero();
        let one = rat(1, 1);
        (0..=self.x).map(move |y| {
            let c = BigRational::new(BigInt::from(y), BigInt::from(self.x));
            let lo = (&c - &r).max(zero.clone());
            let hi = (&c + &r).min(one.clone());
            (lo, hi)
        })
    }

    pub fn total_length(&self) -> Rational {
        self.intervals().fold(Rational::zero(), |acc, (a, b)| acc + b - a)
    }

    /// Indices `[c_lo, c_hi]` of the level cells meeting the closure of interval `y`.
    pub fn cell_range(&self, y: u64) -> (u128, u128) {
        let l = self.level;
        let top = (1u128 << l) - 1;
        let x = self.x as u128;
        let den_shift = RADIUS_GUARD;
        // (y/x ± r)·2^l = (y·2^(l+G) ± k·x) / (x·2^G)
        let fast = (y as u128)
            .checked_shl(l + den_shift)
            .filter(|v| v >> (l + den_shift) == y as u128)
            .zip(self.radius_num.checked_mul(x));
        let (lo, hi) = match fast {
            Some((num, kx)) if num.checked_add(kx).is_some() => {
                let den = x << den_shift;
                let hi = (num + kx) / den;
                let lo = if num <= kx {
                    0
                } else {
                    (num - kx).div_ceil(den).saturating_sub(1)
                };
                (lo, hi)
            }
            _ => {
                let num = BigInt::from(y) << (l + den_shift) as usize;
                let kx = BigInt::from(self.radius_num) * BigInt::from(self.x);
                let den = BigInt::from(self.x) << den_shift as usize;
                let hi: BigInt = (&num + &kx).div_floor(&den);
                let lo: BigInt = ceil(&BigRational::new(&num - &kx, den)) - BigInt::from(1);
                let lo = if lo < BigInt::zero() { 0 } else { lo.to_u128().unwrap() };
                (lo, hi.to_u128().unwrap_or(u128::MAX))
            }
        };
        (lo, hi.min(top))
    }

    /// Cover runs (endpoint units) for `y` in `[y0, y1]`, merged.
    fn runs_for(&self, y0: u64, y1: u64) -> Vec<Run> {
        let shift = MAX_LEVEL - self.level;
        let mut runs: Vec<Run> = Vec::new();
        for y in y0..=y1 {
            let (a, b) = self.cell_range(y);
            let (s, e) = (a << shift, (b + 1) << shift);
            match runs.last_mut() {
                Some(last) if s <= last.1 => last.1 = last.1.max(e),
                _ => runs.push((s, e)),
            }
        }
        runs
    }

    /// Range of `y` whose cover can meet `[s, e]` (endpoint units).
    fn y_range(&self, s: u128, e: u128) -> (u64, u64) {
        // cover of y stays within (r + 2^-l) of y/x; r <= 2^-l here
        let reach = 2 * (UNIT >> self.level) + 1;
        let lo = s.saturating_sub(reach);
        let hi = (e + reach).min(UNIT);
        let y0 = mul_div_floor(self.x, lo).saturating_sub(1);
        let y1 = (mul_div_floor(self.x, hi) + 1).min(self.x);
        (y0, y1)
    }

    /// Cover runs clipped to `[s, e]`.
    pub fn cover_runs_in(&self, s: u128, e: u128) -> Vec<Run> {
        let (y0, y1) = self.y_range(s, e);
        if y0 > y1 {
            return Vec::new();
        }
        self.runs_for(y0, y1)
            .into_iter()
            .filter_map(|(a, b)| {
                let (a, b) = (a.max(s), b.min(e));
                (a < b).then_some((a, b))
            })
            .collect()
    }

    /// Measure (endpoint units) of the cover inside `[s, e]`.
    pub fn covered_units_in(&self, s: u128, e: u128) -> u128 {
        self.cover_runs_in(s, e).iter().map(|(a, b)| b - a).sum()
    }
}

/// `floor(x · v / 2^MAX_LEVEL)` without overflow, for `v <= 2^MAX_LEVEL`.
fn mul_div_floor(x: u64, v: u128) -> u64 {
    let hi = v >> 64;
    let lo = v & u64::MAX as u128;
    let x = x as u128;
    // x·v = x·hi·2^64 + x·lo
    let a = x * hi; // < 2^121
    let b = x * lo; // < 2^128
    let total_hi = a + (b >> 64); // units of 2^64
    (total_hi >> (MAX_LEVEL - 64)) as u64
}

/// `A_α(x)`: the smallest union of level-`l(x, α)` segments covering the
/// closure of every removal interval. A segment that only touches an
/// interval endpoint is included.
pub fn dyadic_cover(family: &RemovalFamily) -> DyadicSet {
    DyadicSet::from_runs(family.runs_for(0, family.x))
}

/// Union of several covers as merged runs.
pub fn cover_union_runs<'a>(families: impl IntoIterator<Item = &'a RemovalFamily>) -> Vec<Run> {
    let mut runs = Vec::new();
    for f in families {
        runs.extend(f.runs_for(0, f.x));
    }
    merge_runs(runs)
}

/// `μ(S ∩ A_α(x))` exactly, without materialising the cover.
pub fn covered_measure(set: &DyadicSet, family: &RemovalFamily) -> Rational {
    let units: u128 = set.runs().iter().map(|&(s, e)| family.covered_units_in(s, e)).sum();
    BigRational::new(BigInt::from(units), pow2(MAX_LEVEL))
}
