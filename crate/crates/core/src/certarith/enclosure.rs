//! Certified rational enclosures of natural logarithms and rational powers.
//!
//! Every routine rounds outward: lower ends are floored and upper ends are
//! ceiled on a dyadic grid, so the true value always lies in `[lo, hi]`.

use crate::error::{Error, Result};
use crate::rational::{ceil, floor, floor_log2, int, pow2, Rational};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// What an enclosure encloses. Only used for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Exact,
    Ln(Rational),
    Pow(Box<Target>, Rational),
    Expr(String),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Exact => write!(f, "exact"),
            Target::Ln(x) => write!(f, "ln({x})"),
            Target::Pow(b, e) => write!(f, "({b})^({e})"),
            Target::Expr(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalEnclosure {
    pub lo: Rational,
    pub hi: Rational,
    pub target: Target,
}

impl RationalEnclosure {
    pub fn new(lo: Rational, hi: Rational, target: Target) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi, target }
    }

    pub fn point(r: Rational) -> Self {
        Self { lo: r.clone(), hi: r, target: Target::Exact }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    /// `self ⊆ other`.
    pub fn within(&self, other: &RationalEnclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn with_target(mut self, target: Target) -> Self {
        self.target = target;
        self
    }

    pub fn add(&self, other: &RationalEnclosure) -> Self {
        Self::new(&self.lo + &other.lo, &self.hi + &other.hi, Target::Expr(format!("{} + {}", self.target, other.target)))
    }

    pub fn mul(&self, other: &RationalEnclosure) -> Self {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::new(lo, hi, Target::Expr(format!("{} * {}", self.target, other.target)))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let (a, b) = (&self.lo * k, &self.hi * k);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Self::new(lo, hi, Target::Expr(format!("{k} * {}", self.target)))
    }

    /// `1 / self`; requires an enclosure bounded away from zero.
    pub fn recip(&self) -> Result<Self> {
        if !(self.lo.is_positive() || self.hi.is_negative()) {
            return Err(Error::Domain(format!("reciprocal of enclosure containing 0: [{}, {}]", self.lo, self.hi)));
        }
        Ok(Self::new(self.hi.recip(), self.lo.recip(), Target::Expr(format!("1/({})", self.target))))
    }

    pub fn div(&self, other: &RationalEnclosure) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// Rounds both ends outward onto the grid `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> Self {
        Self {
            lo: crate::rational::round_down(&self.lo, bits),
            hi: crate::rational::round_up(&self.hi, bits),
            target: self.target.clone(),
        }
    }
}

/// `atanh(p/q)·2^w` enclosed as integers, for `0 <= p < q`.
fn atanh_fixed(p: &BigInt, q: &BigInt, w: u32) -> (BigInt, BigInt) {
    if p.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let one = pow2(w);
    let p2 = p * p;
    let q2 = q * q;
    let mut pw_lo = (p * &one).div_floor(q);
    let mut pw_hi = -((-(p * &one)).div_floor(q));
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut k = BigInt::one();
    loop {
        sum_lo += pw_lo.div_floor(&k);
        sum_hi += -((-&pw_hi).div_floor(&k));
        k += 2;
        pw_lo = (&pw_lo * &p2).div_floor(&q2);
        pw_hi = -((-(&pw_hi * &p2)).div_floor(&q2));
        if pw_hi <= BigInt::one() {
            // tail: sum_{i} z^(k+2i)/(k+2i) <= z^k / (k (1 - z²))
            let den = &k * (&q2 - &p2);
            sum_hi += -((-(&pw_hi * &q2)).div_floor(&den));
            break;
        }
    }
    (sum_lo, sum_hi)
}

/// Raw enclosure of `ln(x)` with width a small multiple of `2^-w`. Not nested across `w`.
pub fn ln_raw(x: &Rational, w: u32) -> Result<RationalEnclosure> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("ln of nonpositive {x}")));
    }
    if x.is_one() {
        return Ok(RationalEnclosure::new(Rational::zero(), Rational::zero(), Target::Ln(x.clone())));
    }
    // x = 2^k · m with m in [2/3, 4/3]
    let mut k = floor_log2(x);
    let mut m = if k >= 0 { x / int(pow2(k as u32)) } else { x * int(pow2((-k) as u32)) };
    if m > BigRational::new(4.into(), 3.into()) {
        k += 1;
        m /= int(2);
    }
    let z = (&m - Rational::one()) / (&m + Rational::one());
    let kbits = 64 - (k.unsigned_abs()).leading_zeros();
    let ww = w + 4 + kbits;
    let (zl, zh) = atanh_fixed(&z.numer().abs(), z.denom(), ww);
    let (zl, zh) = if z.is_negative() { (-zh, -zl) } else { (zl, zh) };
    let (l2l, l2h) = atanh_fixed(&BigInt::one(), &BigInt::from(3), ww);
    let kk = BigInt::from(k);
    let (kl, kh) = if k >= 0 { (&kk * &l2l, &kk * &l2h) } else { (&kk * &l2h, &kk * &l2l) };
    let scale = pow2(ww);
    let lo = BigRational::new(2 * (kl + zl), scale.clone());
    let hi = BigRational::new(2 * (kh + zh), scale);
    Ok(RationalEnclosure::new(lo, hi, Target::Ln(x.clone())))
}

/// Enclosure of `ln(x)` of width at most `2^-precision_bits`.
///
/// The result is the unique grid cell `[c/2^b, (c+1)/2^b]` containing `ln(x)`
/// (or the exact point for `x = 1`), so refining the precision only ever
/// shrinks the enclosure.
pub fn log_enclosure(x: &Rational, precision_bits: u32) -> Result<RationalEnclosure> {
    if precision_bits == 0 {
        return Err(Error::Domain("precision_bits must be >= 1".into()));
    }
    if x.is_one() {
        return ln_raw(x, 1);
    }
    let grid = int(pow2(precision_bits));
    let mut w = precision_bits + 16;
    loop {
        let raw = ln_raw(x, w)?;
        let c = floor(&(&raw.lo * &grid));
        let top = &c + 1;
        // ln of a rational other than 1 is irrational, so it never sits on the grid
        if ceil(&(&raw.hi * &grid)) <= top {
            return Ok(RationalEnclosure::new(
                BigRational::new(c, pow2(precision_bits)),
                BigRational::new(top, pow2(precision_bits)),
                Target::Ln(x.clone()),
            ));
        }
        w += 32;
    }
}

/// Exponent `m/n` split into nonnegative parts; rejects exponents outside `[0, 2]`.
fn split_exponent(e: &Rational) -> Result<(u32, u32)> {
    if e.is_negative() || e > &int(2) {
        return Err(Error::Domain(format!("exponent {e} outside [0, 2]")));
    }
    let m: u32 = e.numer().try_into().map_err(|_| Error::Domain(format!("exponent {e} too large")))?;
    let n: u32 = e.denom().try_into().map_err(|_| Error::Domain(format!("exponent {e} too large")))?;
    Ok((m, n))
}

fn exact_root(x: &BigUint, n: u32) -> Option<BigUint> {
    let r = x.nth_root(n);
    (r.pow(n) == *x).then_some(r)
}

/// Lower (`up = false`) or upper bound of `r^(m/n)` on the grid `2^-w`, for `r > 0`.
fn pow_point(r: &Rational, m: u32, n: u32, w: u32, up: bool) -> Rational {
    let rm = num_traits::pow(r.clone(), m as usize);
    let p = rm.numer().magnitude().clone();
    let q = rm.denom().magnitude().clone();
    if let (Some(a), Some(b)) = (exact_root(&p, n), exact_root(&q, n)) {
        return BigRational::new(a.into(), b.into());
    }
    let scaled = &p << (w as usize * n as usize);
    let (quot, rem) = scaled.div_rem(&q);
    let root = if up {
        let target = if rem.is_zero() { quot } else { quot + 1u32 };
        let r0 = target.nth_root(n);
        if r0.pow(n) < target { r0 + 1u32 } else { r0 }
    } else {
        quot.nth_root(n)
    };
    BigRational::new(root.into(), pow2(w))
}

/// Enclosure of `base^exponent` for a positive base enclosure and a rational exponent in `[0, 2]`.
///
/// When `base` is a point the width is at most `2^-precision_bits`.
pub fn pow_enclosure(base: &RationalEnclosure, exponent: &Rational, precision_bits: u32) -> Result<RationalEnclosure> {
    if !base.lo.is_positive() {
        return Err(Error::Domain(format!("power of nonpositive base enclosure [{}, {}]", base.lo, base.hi)));
    }
    let (m, n) = split_exponent(exponent)?;
    let target = Target::Pow(Box::new(base.target.clone()), exponent.clone());
    if m == 0 {
        return Ok(RationalEnclosure::new(Rational::one(), Rational::one(), target));
    }
    let w = precision_bits + 1;
    let lo = pow_point(&base.lo, m, n, w, false);
    let hi = pow_point(&base.hi, m, n, w, true);
    Ok(RationalEnclosure::new(lo, hi, target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, to_f64};

    #[test]
    fn ln_one_is_exact_zero() {
        let e = log_enclosure(&rat(1, 1), 20).unwrap();
        assert_eq!(e.lo, Rational::zero());
        assert_eq!(e.hi, Rational::zero());
    }

    #[test]
    fn ln_two_twenty_bits() {
        let e = log_enclosure(&rat(2, 1), 20).unwrap();
        assert!(e.contains(&rat(6931471805, 10_000_000_000)));
        assert!(e.width() <= BigRational::new(1.into(), pow2(20)));
        let fine = log_enclosure(&rat(2, 1), 30).unwrap();
        assert!(fine.within(&e));
    }

    #[test]
    fn ln_small_and_large_arguments() {
        for (x, v) in [(rat(1, 1000), -6.907755278982137), (rat(101, 1), 4.61512051684126), (rat(3, 4), -0.2876820724517809), (rat(1 << 40, 3), 26.6272749337297)] {
            let e = ln_raw(&x, 60).unwrap();
            assert!(to_f64(&e.lo) <= v + 1e-12 && v - 1e-12 <= to_f64(&e.hi), "{x}");
            assert!(e.width() < BigRational::new(1.into(), pow2(56)));
        }
    }

    #[test]
    fn ln_rejects_nonpositive() {
        assert!(ln_raw(&rat(0, 1), 10).is_err());
        assert!(log_enclosure(&rat(-2, 1), 10).is_err());
    }

    #[test]
    fn pow_exact_cases() {
        let four = RationalEnclosure::point(rat(4, 1));
        let r = pow_enclosure(&four, &rat(1, 2), 30).unwrap();
        assert_eq!((r.lo, r.hi), (rat(2, 1), rat(2, 1)));
        let two = RationalEnclosure::point(rat(2, 1));
        let r = pow_enclosure(&two, &rat(1, 1), 30).unwrap();
        assert_eq!((r.lo, r.hi), (rat(2, 1), rat(2, 1)));
        let r = pow_enclosure(&two, &rat(0, 1), 30).unwrap();
        assert_eq!((r.lo, r.hi), (rat(1, 1), rat(1, 1)));
    }

    #[test]
    fn sqrt_of_ln_101() {
        let l = log_enclosure(&rat(101, 1), 40).unwrap();
        let r = pow_enclosure(&l, &rat(1, 2), 40).unwrap();
        assert!(to_f64(&r.lo) <= 2.148283155648077 && 2.148283155648077 <= to_f64(&r.hi));
        assert!(r.width() < rat(1, 1 << 30));
    }

    #[test]
    fn pow_point_width() {
        let b = RationalEnclosure::point(rat(7, 3));
        let r = pow_enclosure(&b, &rat(2, 3), 50).unwrap();
        assert!(r.width() <= BigRational::new(1.into(), pow2(50)));
        let v = (7.0f64 / 3.0).powf(2.0 / 3.0);
        assert!(to_f64(&r.lo) <= v + 1e-15 && v <= to_f64(&r.hi) + 1e-15);
    }

    #[test]
    fn pow_domain_errors() {
        let z = RationalEnclosure::new(rat(0, 1), rat(1, 1), Target::Exact);
        assert!(pow_enclosure(&z, &rat(1, 2), 10).is_err());
        let b = RationalEnclosure::point(rat(2, 1));
        assert!(pow_enclosure(&b, &rat(5, 2), 10).is_err());
        assert!(pow_enclosure(&b, &rat(-1, 2), 10).is_err());
    }
}
