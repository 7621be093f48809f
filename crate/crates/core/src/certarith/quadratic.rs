//! Exact arithmetic on `a + b·√d` with rational `a`, `b` and squarefree `d`.

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Exact real `a + b·√d`. When `b = 0` the value is the rational `a` and `d` is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticReal {
    a: Rational,
    b: Rational,
    d: u64,
}

fn is_squarefree(d: u64) -> bool {
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl QuadraticReal {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self> {
        if b.is_zero() {
            return Ok(Self::rational(a));
        }
        if d < 2 || !is_squarefree(d) {
            return Err(Error::Domain(format!("radicand {d} must be squarefree and >= 2")));
        }
        Ok(Self { a, b, d })
    }

    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), d: 1 }
    }

    /// The golden-ratio conjugate `(√5 − 1)/2`.
    pub fn golden() -> Self {
        Self {
            a: BigRational::new((-1).into(), 2.into()),
            b: BigRational::new(1.into(), 2.into()),
            d: 5,
        }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::rational(Rational::zero());
        }
        Self { a: &self.a * k, b: &self.b * k, d: self.d }
    }

    pub fn add_rational(&self, r: &Rational) -> Self {
        Self { a: &self.a + r, b: self.b.clone(), d: self.d }
    }

    /// `r − self`.
    pub fn rsub(&self, r: &Rational) -> Self {
        Self { a: r - &self.a, b: -&self.b, d: self.d }
    }

    /// Sign of the value as −1, 0, 1.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with b²·d
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * int(self.d);
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Exact `floor(self)`.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return crate::rational::floor(&self.a);
        }
        // value = (A + s·√d) / D over a common denominator
        let den = self.a.denom() * self.b.denom();
        let a_num = self.a.numer() * self.b.denom();
        let s = self.b.numer() * self.a.denom();
        let m = (&s * &s * BigInt::from(self.d)).sqrt();
        // s·√d lies strictly between ±m and ±(m+1) since √d is irrational
        let n = if s.sign() == Sign::Minus { a_num - m - 1 } else { a_num + m };
        n.div_floor(&den)
    }

    /// `‖x·self‖` for a positive integer multiplier, exactly.
    pub fn nearest_int_dist(&self, x: u64) -> QuadraticReal {
        let v = self.scale(&int(x));
        let frac = v.add_rational(&int(-v.floor()));
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if compare(&frac, &half) == Ordering::Greater {
            frac.rsub(&Rational::one())
        } else {
            frac
        }
    }

    /// `floor(frac(self)·2^bits)` as an integer.
    pub fn frac_fixed(&self, bits: u32) -> BigInt {
        let frac = self.add_rational(&int(-self.floor()));
        frac.scale(&int(BigInt::one() << bits)).floor()
    }

    /// Float value, accurate to about `2^-100` absolute before the final rounding.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let scaled = self.scale(&int(BigInt::one() << 100u32)).floor();
        scaled.to_f64().unwrap_or(f64::NAN) / 2f64.powi(100)
    }
}

/// Exact ordering of `q` against the rational `r`.
pub fn compare(q: &QuadraticReal, r: &Rational) -> Ordering {
    q.add_rational(&-r).signum()
}

impl fmt::Display for QuadraticReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}·√{}", self.a, self.b, self.d)
        }
    }
}

impl QuadraticReal {
    /// Value must be positive for the inequality checks built on it.
    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn golden() -> QuadraticReal {
        QuadraticReal::golden()
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(QuadraticReal::new(rat(0, 1), rat(1, 1), 12).is_err());
        assert!(QuadraticReal::new(rat(0, 1), rat(1, 1), 1).is_err());
        assert!(QuadraticReal::new(rat(0, 1), rat(1, 1), 30).is_ok());
        // b = 0 collapses to a rational regardless of d
        assert!(QuadraticReal::new(rat(1, 3), rat(0, 1), 4).unwrap().is_rational());
    }

    #[test]
    fn nearest_int_dist_golden() {
        let g = golden();
        // (3 − √5)/2
        let expect1 = QuadraticReal::new(rat(3, 2), rat(-1, 2), 5).unwrap();
        assert_eq!(g.nearest_int_dist(1), expect1);
        // (5√5 − 11)/2
        let expect5 = QuadraticReal::new(rat(-11, 2), rat(5, 2), 5).unwrap();
        assert_eq!(g.nearest_int_dist(5), expect5);
        assert!((g.nearest_int_dist(5).to_f64() - 0.0901699437494742).abs() < 1e-15);
    }

    #[test]
    fn nearest_int_dist_rational() {
        let third = QuadraticReal::rational(rat(1, 3));
        assert_eq!(third.nearest_int_dist(3), QuadraticReal::rational(rat(0, 1)));
        assert_eq!(third.nearest_int_dist(2), QuadraticReal::rational(rat(1, 3)));
    }

    #[test]
    fn compare_examples() {
        let g = golden();
        assert_eq!(compare(&g, &rat(62, 100)), Ordering::Less);
        assert_eq!(compare(&g, &rat(618, 1000)), Ordering::Greater);
        let half = QuadraticReal::new(rat(1, 2), rat(0, 1), 5).unwrap();
        assert_eq!(compare(&half, &rat(1, 2)), Ordering::Equal);
    }

    #[test]
    fn floor_of_negative_and_large() {
        let g = golden();
        assert_eq!(g.floor(), BigInt::from(0));
        assert_eq!(g.scale(&rat(-1, 1)).floor(), BigInt::from(-1));
        assert_eq!(g.scale(&rat(1_000_000, 1)).floor(), BigInt::from(618_033));
    }

    #[test]
    fn distance_bounded_by_half() {
        let g = golden();
        for x in 1..400u64 {
            let d = g.nearest_int_dist(x);
            assert_ne!(d.signum(), Ordering::Less);
            assert_ne!(compare(&d, &rat(1, 2)), Ordering::Greater);
        }
    }
}
