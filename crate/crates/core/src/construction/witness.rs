use super::params::ConstructionParams;
use super::stage::{dangerous_set, remove_covers, to_u64, StageRecord};
use crate::certarith::classify::threshold_enclosure;
use crate::certarith::{compare, Classification, Classifier, QuadraticReal};
use crate::dyadic::{DyadicInterval, DyadicSet};
use crate::error::{Error, Result};
use crate::rational::{ceil, floor, int, to_f64, Rational};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Largest surviving segment of the last stage, leftmost on ties.
pub fn extract_witness(stages: &[StageRecord]) -> Result<DyadicInterval> {
    let last = stages.last().ok_or_else(|| Error::Precondition("empty trace".into()))?;
    last.survivor.largest_segment().ok_or(Error::EmptySurvivor { q: last.q })
}

/// A survivor carried past the last exact stage inside a single segment of it.
#[derive(Clone, Debug)]
pub struct Deepening {
    /// Last-stage segment the refinement started from.
    pub start: DyadicInterval,
    /// Subsegment of `start` the survivor was finally restricted to.
    pub window: DyadicInterval,
    pub q_from: u128,
    pub q_to: u128,
    /// `B_{q_to} ∩ window`.
    pub survivor: DyadicSet,
    pub dangerous_counts: [usize; 2],
    pub conservative_count: usize,
    /// Windows tried before one survived, including the successful one.
    pub windows_tried: usize,
    pub witness: DyadicInterval,
}

/// Segment count above which the window is narrowed.
pub const FOCUS_SEGMENTS: usize = 1 << 15;
const DEEPEN_CHUNK: usize = 256;

/// Once the survivor exceeds `FOCUS_SEGMENTS` segments, halves `window` towards the
/// heavier side (left on ties) until at most a quarter of that remain.
fn focus(mut window: DyadicInterval, mut survivor: DyadicSet) -> (DyadicInterval, DyadicSet) {
    if survivor.len() <= FOCUS_SEGMENTS {
        return (window, survivor);
    }
    while survivor.len() > FOCUS_SEGMENTS / 4 && window.level < crate::dyadic::MAX_LEVEL {
        let mut halves = window.children_at(window.level + 1);
        let (l, r) = (halves.next().unwrap(), halves.next().unwrap());
        let sl = survivor.intersect(&DyadicSet::from_segments([l]));
        let sr = survivor.intersect(&DyadicSet::from_segments([r]));
        (window, survivor) = if sl.measure_units() >= sr.measure_units() { (l, sl) } else { (r, sr) };
    }
    (window, survivor)
}

/// Refines `last` from `last.q` to `q_to` inside one of its segments at a time,
/// largest first, returning the first window whose survivor stays nonempty.
/// The window narrows whenever the survivor exceeds [`FOCUS_SEGMENTS`] segments.
pub fn deepen(last: &StageRecord, q_to: u128, params: &ConstructionParams) -> Result<Deepening> {
    let mut windows: Vec<DyadicInterval> = last.survivor.segments().to_vec();
    if windows.is_empty() {
        return Err(Error::EmptySurvivor { q: last.q });
    }
    windows.sort_by_key(|s| (s.level, s.numerator));
    if q_to <= last.q {
        let w = windows[0];
        return Ok(Deepening {
            start: w,
            window: w,
            q_from: last.q,
            q_to: last.q,
            survivor: DyadicSet::from_segments([w]),
            dangerous_counts: [0, 0],
            conservative_count: 0,
            windows_tried: 1,
            witness: w,
        });
    }
    let (p, q) = (to_u64(last.q)?, to_u64(q_to)?);
    let mut counts = [0; 2];
    let mut conservative_count = 0;
    let mut removals = Vec::new();
    for (i, (alpha, beta)) in params.families().into_iter().enumerate() {
        let k = dangerous_set(params, beta, p, q)?;
        counts[i] = k.members.len();
        conservative_count += k.conservative_count;
        removals.extend(k.members.into_iter().map(|x| (alpha, x)));
    }
    removals.sort_by_key(|&(_, x)| x);
    let width = to_f64(&windows[0].measure());
    let estimated: f64 = removals.iter().map(|&(_, x)| x as f64 * width + 2.0).sum();
    if estimated > params.work_budget as f64 {
        return Err(Error::Infeasible {
            what: format!("windowed refinement q = {p} -> {q}"),
            estimated,
            budget: params.work_budget,
        });
    }
    for (tried, start) in windows.iter().enumerate() {
        let mut window = *start;
        let mut survivor = DyadicSet::from_segments([window]);
        for chunk in removals.chunks(DEEPEN_CHUNK) {
            survivor = remove_covers(&survivor, chunk.iter().copied(), &params.delta)?;
            if survivor.is_empty() {
                break;
            }
            (window, survivor) = focus(window, survivor);
        }
        if let Some(witness) = survivor.largest_segment() {
            return Ok(Deepening {
                start: *start,
                window,
                q_from: last.q,
                q_to,
                survivor,
                dangerous_counts: counts,
                conservative_count,
                windows_tried: tried + 1,
                witness,
            });
        }
    }
    Err(Error::EmptySurvivor { q: q_to })
}

/// Certificate that `(η, ξ)` satisfies both weighted inequalities and
/// `p·‖pξ‖ >= δ` for every `η` in the interval and every `p <= verified_up_to`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub eta_interval: DyadicInterval,
    pub xi: String,
    pub delta: String,
    pub alphas: [String; 2],
    pub betas: [String; 2],
    pub verified_up_to: u64,
    pub failures: Vec<u64>,
}

impl WitnessCertificate {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `min_{t ∈ [lo, hi]} ‖p·t‖`.
pub fn interval_nearest_int_dist(lo: &Rational, hi: &Rational, p: u64) -> Rational {
    let (a, b) = (lo * int(p), hi * int(p));
    let c = ceil(&a);
    if Rational::from_integer(c.clone()) <= b {
        return Rational::zero();
    }
    let f = Rational::from_integer(floor(&a));
    let da = &a - &f;
    let db = Rational::from_integer(c) - &b;
    da.min(db)
}

/// Is `d >= δ/(p·ln(p+1))^α`? Undecided at the precision cap counts as no.
fn weighted_at_least(d: &Rational, p: u64, alpha: &Rational, delta: &Rational, cap_bits: u32) -> Result<bool> {
    if d.is_zero() {
        return Ok(false);
    }
    let mut bits = 64;
    loop {
        let t = threshold_enclosure(p, alpha, delta, bits)?;
        if d >= &t.hi {
            return Ok(true);
        }
        if d < &t.lo || bits >= cap_bits {
            return Ok(false);
        }
        bits = (bits * 2).min(cap_bits);
    }
}

struct PairChecker<'a> {
    params: &'a ConstructionParams,
    classifiers: [Classifier; 2],
}

impl<'a> PairChecker<'a> {
    fn new(params: &'a ConstructionParams) -> Result<Self> {
        let mk = |beta: &Rational| Classifier::new(params.xi.clone(), beta.clone(), params.delta.clone(), params.cap_bits);
        Ok(Self { params, classifiers: [mk(&params.beta1)?, mk(&params.beta2)?] })
    }

    fn xi_badly_approximable(&self, p: u64) -> bool {
        let xi = &self.params.xi;
        if p <= xi.checked_up_to && self.params.delta <= xi.delta_xi {
            return true;
        }
        compare(&xi.xi.nearest_int_dist(p).scale(&int(p)), &self.params.delta) != Ordering::Less
    }

    /// All conditions at `p` for every `t ∈ [lo, hi]`.
    fn holds(&self, lo: &Rational, hi: &Rational, p: u64) -> Result<bool> {
        if !self.xi_badly_approximable(p) {
            return Ok(false);
        }
        let mut eta_dist = None;
        for (c, (alpha, _)) in self.classifiers.iter().zip(self.params.families()) {
            if c.classify(p)? == Classification::Safe {
                continue;
            }
            let d = eta_dist.get_or_insert_with(|| interval_nearest_int_dist(lo, hi, p));
            if !weighted_at_least(d, p, alpha, &self.params.delta, self.params.cap_bits)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn failures(&self, lo: &Rational, hi: &Rational, up_to: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for p in 1..=up_to {
            if !self.holds(lo, hi, p)? {
                out.push(p);
            }
        }
        Ok(out)
    }
}

fn describe_xi(xi: &QuadraticReal) -> String {
    format!("{} + {}*sqrt({})", xi.a(), xi.b(), xi.d())
}

/// Certifies `max((p·ln(p+1))^α_i·‖pt‖, (p·ln(p+1))^β_i·‖pξ‖) >= δ` for `i = 1, 2`
/// and `p·‖pξ‖ >= δ`, for all `t` in `eta` and `p <= up_to`.
pub fn certify_pair(eta: &DyadicInterval, params: &ConstructionParams, up_to: u64) -> Result<WitnessCertificate> {
    if up_to == 0 {
        return Err(Error::Precondition("verification bound must be >= 1".into()));
    }
    let failures = PairChecker::new(params)?.failures(&eta.lo(), &eta.hi(), up_to)?;
    Ok(WitnessCertificate {
        eta_interval: *eta,
        xi: describe_xi(&params.xi.xi),
        delta: params.delta.to_string(),
        alphas: [params.alpha1.to_string(), params.alpha2.to_string()],
        betas: [params.beta1.to_string(), params.beta2.to_string()],
        verified_up_to: up_to,
        failures,
    })
}

/// The same conditions at a single point `t`.
pub fn point_failures(t: &Rational, params: &ConstructionParams, up_to: u64) -> Result<Vec<u64>> {
    PairChecker::new(params)?.failures(t, t, up_to)
}
