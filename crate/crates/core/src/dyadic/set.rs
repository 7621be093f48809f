//! Finite unions of closed dyadic segments with exact measure.
//!
//! Endpoints are kept as integers in units of `2^-MAX_LEVEL`, so every set
//! operation reduces to merging sorted runs. A set is always stored in its
//! canonical form: the maximal dyadic segments of its merged runs, sorted.
//! Isolated points never survive an operation.

use crate::error::{Error, Result};
use crate::rational::{pow2, Rational};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;

pub const MAX_LEVEL: u32 = 120;
/// `1` in endpoint units.
pub const UNIT: u128 = 1 << MAX_LEVEL;

/// The closed segment `[numerator / 2^level, (numerator + 1) / 2^level]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub numerator: u128,
    pub level: u32,
}

impl DyadicInterval {
    pub fn new(numerator: u128, level: u32) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::Range(format!("dyadic level {level} exceeds {MAX_LEVEL}")));
        }
        if numerator >> level != 0 {
            return Err(Error::Range(format!("numerator {numerator} not below 2^{level}")));
        }
        Ok(Self { numerator, level })
    }

    pub fn full() -> Self {
        Self { numerator: 0, level: 0 }
    }

    /// Left endpoint in units of `2^-MAX_LEVEL`.
    pub fn start(&self) -> u128 {
        self.numerator << (MAX_LEVEL - self.level)
    }

    pub fn end(&self) -> u128 {
        (self.numerator + 1) << (MAX_LEVEL - self.level)
    }

    pub fn lo(&self) -> Rational {
        BigRational::new(BigInt::from(self.numerator), pow2(self.level))
    }

    pub fn hi(&self) -> Rational {
        BigRational::new(BigInt::from(self.numerator + 1), pow2(self.level))
    }

    pub fn measure(&self) -> Rational {
        BigRational::new(BigInt::from(1), pow2(self.level))
    }

    pub fn contains(&self, other: &DyadicInterval) -> bool {
        self.start() <= other.start() && other.end() <= self.end()
    }

    /// The `2^(level_to - level)` subsegments at `level_to`, left to right.
    pub fn children_at(&self, level_to: u32) -> impl Iterator<Item = DyadicInterval> {
        let shift = level_to.saturating_sub(self.level);
        let base = self.numerator << shift;
        let level = self.level + shift;
        (0..(1u128 << shift)).map(move |i| DyadicInterval { numerator: base + i, level })
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}/2^{}, {}/2^{}]", self.numerator, self.level, self.numerator + 1, self.level)
    }
}

/// Closed run `[start, end]` in endpoint units, `start < end`.
pub type Run = (u128, u128);

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DyadicSet {
    segments: Vec<DyadicInterval>,
}

/// Sorts runs and merges overlapping or touching ones; drops empty runs.
pub fn merge_runs(mut runs: Vec<Run>) -> Vec<Run> {
    runs.retain(|r| r.0 < r.1);
    runs.sort_unstable();
    let mut out: Vec<Run> = Vec::with_capacity(runs.len());
    for (s, e) in runs {
        match out.last_mut() {
            Some(last) if s <= last.1 => last.1 = last.1.max(e),
            _ => out.push((s, e)),
        }
    }
    out
}

fn decompose(runs: &[Run]) -> Vec<DyadicInterval> {
    let mut segs = Vec::new();
    for &(mut s, e) in runs {
        while s < e {
            let align = if s == 0 { MAX_LEVEL } else { s.trailing_zeros().min(MAX_LEVEL) };
            let mut k = align;
            while (1u128 << k) > e - s {
                k -= 1;
            }
            segs.push(DyadicInterval { numerator: s >> k, level: MAX_LEVEL - k });
            s += 1u128 << k;
        }
    }
    segs
}

impl DyadicSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        Self { segments: vec![DyadicInterval::full()] }
    }

    /// Canonical set covering the given runs.
    pub fn from_runs(runs: Vec<Run>) -> Self {
        let runs = merge_runs(runs);
        Self { segments: decompose(&runs) }
    }

    /// Union of arbitrary (possibly overlapping) segments.
    pub fn from_segments(segs: impl IntoIterator<Item = DyadicInterval>) -> Self {
        Self::from_runs(segs.into_iter().map(|s| (s.start(), s.end())).collect())
    }

    /// Rebuilds from a JSON-decoded list, validating every segment.
    pub fn from_pairs(pairs: &[(u128, u32)]) -> Result<Self> {
        let segs = pairs.iter().map(|&(a, l)| DyadicInterval::new(a, l)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_segments(segs))
    }

    pub fn segments(&self) -> &[DyadicInterval] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Maximal runs of the set (touching segments merged).
    pub fn runs(&self) -> Vec<Run> {
        let mut out: Vec<Run> = Vec::new();
        for s in &self.segments {
            match out.last_mut() {
                Some(last) if last.1 == s.start() => last.1 = s.end(),
                _ => out.push((s.start(), s.end())),
            }
        }
        out
    }

    pub fn measure_units(&self) -> u128 {
        self.segments.iter().map(|s| s.end() - s.start()).sum()
    }

    /// Exact `Σ 2^-level`.
    pub fn measure(&self) -> Rational {
        BigRational::new(BigInt::from(self.measure_units()), pow2(MAX_LEVEL))
    }

    pub fn complement(&self) -> Self {
        let mut runs = Vec::new();
        let mut cur = 0u128;
        for (s, e) in self.runs() {
            if s > cur {
                runs.push((cur, s));
            }
            cur = e;
        }
        if cur < UNIT {
            runs.push((cur, UNIT));
        }
        Self { segments: decompose(&runs) }
    }

    pub fn intersect(&self, other: &DyadicSet) -> Self {
        Self { segments: decompose(&intersect_runs(&self.runs(), &other.runs())) }
    }

    pub fn union(&self, other: &DyadicSet) -> Self {
        let mut runs = self.runs();
        runs.extend(other.runs());
        Self::from_runs(runs)
    }

    /// Closure of `self ∖ other`.
    pub fn subtract(&self, other: &DyadicSet) -> Self {
        self.subtract_runs(&other.runs())
    }

    /// Closure of `self ∖ ⋃ runs`.
    pub fn subtract_runs(&self, runs: &[Run]) -> Self {
        let comp = complement_runs(&merge_runs(runs.to_vec()));
        Self { segments: decompose(&intersect_runs(&self.runs(), &comp)) }
    }

    /// `self ⊆ other` (up to finitely many points).
    pub fn is_subset(&self, other: &DyadicSet) -> bool {
        self.subtract(other).is_empty()
    }

    /// Largest segment, leftmost among equals.
    pub fn largest_segment(&self) -> Option<DyadicInterval> {
        self.segments.iter().copied().min_by_key(|s| (s.level, s.numerator))
    }

    pub fn contains_point(&self, t: &Rational) -> bool {
        self.segments.iter().any(|s| &s.lo() <= t && t <= &s.hi())
    }
}

pub fn complement_runs(runs: &[Run]) -> Vec<Run> {
    let mut out = Vec::with_capacity(runs.len() + 1);
    let mut cur = 0u128;
    for &(s, e) in runs {
        if s > cur {
            out.push((cur, s.min(UNIT)));
        }
        cur = cur.max(e);
    }
    if cur < UNIT {
        out.push((cur, UNIT));
    }
    out
}

pub fn intersect_runs(a: &[Run], b: &[Run]) -> Vec<Run> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        let s = a[i].0.max(b[j].0);
        let e = a[i].1.min(b[j].1);
        if s < e {
            out.push((s, e));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn seg(a: u128, l: u32) -> DyadicInterval {
        DyadicInterval::new(a, l).unwrap()
    }

    #[test]
    fn interval_validation() {
        assert!(DyadicInterval::new(4, 2).is_err());
        assert!(DyadicInterval::new(0, MAX_LEVEL + 1).is_err());
        assert_eq!(seg(3, 2).lo(), rat(3, 4));
    }

    #[test]
    fn siblings_merge() {
        let s = DyadicSet::from_segments([seg(2, 3), seg(3, 3)]);
        assert_eq!(s.segments(), &[seg(1, 2)]);
        // touching but not siblings stay apart
        let s = DyadicSet::from_segments([seg(1, 2), seg(2, 2)]);
        assert_eq!(s.segments(), &[seg(1, 2), seg(2, 2)]);
        assert_eq!(DyadicSet::from_segments([seg(0, 1), seg(1, 1)]), DyadicSet::full());
    }

    #[test]
    fn complement_examples() {
        assert!(DyadicSet::full().complement().is_empty());
        assert_eq!(DyadicSet::empty().complement(), DyadicSet::full());
        let cover = DyadicSet::from_segments([seg(0, 3), seg(3, 3), seg(4, 3), seg(7, 3)]);
        let c = cover.complement();
        assert_eq!(c, DyadicSet::from_segments([seg(1, 3), seg(2, 3), seg(5, 3), seg(6, 3)]));
        assert_eq!(c.measure(), rat(1, 2));
    }

    #[test]
    fn intersect_examples() {
        let s = DyadicSet::from_segments([seg(1, 3), seg(6, 4)]);
        assert_eq!(s.intersect(&DyadicSet::full()), s);
        assert!(s.intersect(&DyadicSet::empty()).is_empty());
        let a = DyadicSet::from_segments([seg(0, 1)]);
        let b = DyadicSet::from_segments([seg(1, 2), seg(2, 2)]);
        assert_eq!(a.intersect(&b), DyadicSet::from_segments([seg(1, 2)]));
    }

    #[test]
    fn measure_examples() {
        assert_eq!(DyadicSet::full().measure(), rat(1, 1));
        assert_eq!(DyadicSet::empty().measure(), rat(0, 1));
    }

    #[test]
    fn touching_sets_intersect_in_a_point_only() {
        let a = DyadicSet::from_segments([seg(0, 1)]);
        let b = DyadicSet::from_segments([seg(1, 1)]);
        assert!(a.intersect(&b).is_empty());
    }

    #[test]
    fn json_shape() {
        let s = DyadicSet::from_segments([seg(1, 3)]);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"[{"numerator":1,"level":3}]"#);
    }

    fn arb_set() -> impl Strategy<Value = DyadicSet> {
        prop::collection::vec((0u32..9, any::<u64>()), 0..12).prop_map(|v| {
            DyadicSet::from_segments(v.into_iter().map(|(l, a)| seg(a as u128 % (1u128 << l), l)))
        })
    }

    proptest! {
        #[test]
        fn algebra_laws(a in arb_set(), b in arb_set(), c in arb_set()) {
            prop_assert_eq!(a.complement().complement(), a.clone());
            prop_assert_eq!(a.intersect(&b), b.intersect(&a));
            prop_assert_eq!(a.intersect(&b).intersect(&c), a.intersect(&b.intersect(&c)));
            prop_assert_eq!(a.intersect(&a), a.clone());
            prop_assert_eq!(
                a.intersect(&b).measure() + a.union(&b).measure(),
                a.measure() + b.measure()
            );
            let ab = a.intersect(&b);
            prop_assert!(ab.measure() <= a.measure());
            prop_assert!(ab.is_subset(&a));
            prop_assert_eq!(a.subtract(&b), a.intersect(&b.complement()));
            // canonical: no two siblings both present
            for w in a.segments().windows(2) {
                let sib = w[0].level == w[1].level && w[0].numerator % 2 == 0 && w[1].numerator == w[0].numerator + 1;
                prop_assert!(!sib);
            }
        }
    }
}
