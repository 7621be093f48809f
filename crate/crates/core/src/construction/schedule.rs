use crate::certarith::enclosure::ln_raw;
use crate::error::{Error, Result};
use crate::rational::{floor, int, rat, Rational};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Next scheduled denominator bound: `floor((q²/δ)·ln(q²/δ)) + 1`, and `1` for `q = 0`.
pub fn schedule_next(q: u128, delta: &Rational) -> Result<u128> {
    if delta <= &Rational::zero() || delta >= &rat(1, 2) {
        return Err(Error::Domain(format!("delta = {delta} outside (0, 1/2)")));
    }
    if q == 0 {
        return Ok(1);
    }
    let n = int(q) * int(q) / delta;
    let mut bits = 64;
    loop {
        let l = ln_raw(&n, bits)?;
        let lo = floor(&(&n * &l.lo));
        let hi = floor(&(&n * &l.hi));
        if lo == hi {
            return (lo + 1u32)
                .to_u128()
                .ok_or_else(|| Error::Range(format!("schedule value after {q} exceeds u128")));
        }
        bits *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleRule {
    Paper,
    Custom,
}

/// `q_0 = 0 < q_1 < q_2 < …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub q_values: Vec<u128>,
    pub rule: ScheduleRule,
}

impl Schedule {
    /// `q_0 = 0` followed by `nu_max` applications of [`schedule_next`]; stops early on overflow.
    pub fn paper(delta: &Rational, nu_max: usize) -> Result<Self> {
        let mut q_values = vec![0u128];
        for _ in 0..nu_max {
            let next = schedule_next(*q_values.last().unwrap(), delta)?;
            q_values.push(next);
        }
        Ok(Self { q_values, rule: ScheduleRule::Paper })
    }

    pub fn custom(q_values: Vec<u128>) -> Result<Self> {
        if q_values.first() != Some(&0) {
            return Err(Error::Domain("custom schedule must start at q_0 = 0".into()));
        }
        if q_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("custom schedule must be strictly increasing".into()));
        }
        Ok(Self { q_values, rule: ScheduleRule::Custom })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn next_values() {
        assert_eq!(schedule_next(0, &rat(1, 4)).unwrap(), 1);
        assert_eq!(schedule_next(0, &rat(1, 1 << 20)).unwrap(), 1);
        assert_eq!(schedule_next(1, &rat(1, 4)).unwrap(), 6);
        assert_eq!(schedule_next(6, &rat(1, 4)).unwrap(), 716);
        assert_eq!(schedule_next(716, &rat(1, 4)).unwrap(), 29_803_062);
        assert!(schedule_next(3, &rat(1, 2)).is_err());
    }

    #[test]
    fn paper_schedule() {
        let s = Schedule::paper(&rat(1, 4), 3).unwrap();
        assert_eq!(s.q_values, vec![0, 1, 6, 716]);
        let s = Schedule::paper(&rat(1, 1 << 20), 3).unwrap();
        assert!(s.q_values[3] > 10u128.pow(21));
    }

    #[test]
    fn custom_validation() {
        assert!(Schedule::custom(vec![0, 5, 5]).is_err());
        assert!(Schedule::custom(vec![1, 5]).is_err());
        assert!(Schedule::custom(vec![0, 5, 9]).is_ok());
    }
}
