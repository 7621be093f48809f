use super::params::ConstructionParams;
use super::schedule::Schedule;
use crate::bohr::{enumerate_k, BohrQuery, BohrSetResult};
use crate::dyadic::set::Run;
use crate::dyadic::{DyadicSet, RemovalFamily, UNIT};
use crate::error::{Error, Result};
use crate::rational::{pow2, to_f64, Rational};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// One stage `B_q` of the nested construction.
#[derive(Clone, Debug, PartialEq)]
pub struct StageRecord {
    pub nu: usize,
    pub q: u128,
    pub survivor: DyadicSet,
    pub measure: Rational,
    /// `#K^{(β_i)}` members processed by the step that produced this stage.
    pub dangerous_counts: [usize; 2],
    pub conservative_count: usize,
}

impl StageRecord {
    /// `B_0 = [0, 1]`.
    pub fn initial() -> Self {
        Self {
            nu: 0,
            q: 0,
            survivor: DyadicSet::full(),
            measure: Rational::one(),
            dangerous_counts: [0, 0],
            conservative_count: 0,
        }
    }
}

pub(crate) fn to_u64(q: u128) -> Result<u64> {
    u64::try_from(q).map_err(|_| Error::Range(format!("q = {q} exceeds the 64-bit enumeration range")))
}

/// `K^{(β)}(p, q]` for the ξ of `params`.
pub fn dangerous_set(params: &ConstructionParams, beta: &Rational, p: u64, q: u64) -> Result<BohrSetResult> {
    let mut query = BohrQuery::new(params.xi.clone(), beta.clone(), params.delta.clone(), p, q);
    query.cap_bits = params.cap_bits;
    enumerate_k(&query, params.mode)
}

/// Removes from `survivor` the covers `A_α(x)` for the listed `(α, x)` pairs.
///
/// Covers are evaluated only over the current survivor (run by run, or over its
/// hull when that is cheaper), and pending cuts are applied whenever they outnumber
/// the survivor's runs, so later covers see the already-reduced set.
pub fn remove_covers<'a>(
    survivor: &DyadicSet,
    removals: impl IntoIterator<Item = (&'a Rational, u64)>,
    delta: &Rational,
) -> Result<DyadicSet> {
    let mut current = survivor.clone();
    let mut base = current.runs();
    let mut cut: Vec<Run> = Vec::new();
    for (alpha, x) in removals {
        if base.is_empty() {
            break;
        }
        let f = RemovalFamily::build(x, alpha, delta)?;
        let hull = (base[0].0, base[base.len() - 1].1);
        let span = |units: u128| x as f64 * units as f64 / UNIT as f64;
        let by_runs = span(current.measure_units()) + 2.0 * base.len() as f64;
        if span(hull.1 - hull.0) <= by_runs {
            cut.extend(f.cover_runs_in(hull.0, hull.1));
        } else {
            for &(s, e) in &base {
                cut.extend(f.cover_runs_in(s, e));
            }
        }
        if cut.len() >= base.len().max(1024) {
            current = current.subtract_runs(&cut);
            cut.clear();
            base = current.runs();
        }
    }
    Ok(current.subtract_runs(&cut))
}

/// `B_{q_to}` from `B_{prev.q}`: subtract `A_{α_i}(x)` for `x ∈ K^{(β_i)}(prev.q, q_to]`.
pub fn refine(prev: &StageRecord, q_to: u128, params: &ConstructionParams) -> Result<StageRecord> {
    if q_to <= prev.q {
        return Err(Error::Precondition(format!("refine needs q_to > {}, got {q_to}", prev.q)));
    }
    let (p, q) = (to_u64(prev.q)?, to_u64(q_to)?);
    let mut counts = [0; 2];
    let mut conservative_count = 0;
    let mut removals = Vec::new();
    for (i, (alpha, beta)) in params.families().into_iter().enumerate() {
        let k = dangerous_set(params, beta, p, q)?;
        counts[i] = k.members.len();
        conservative_count += k.conservative_count;
        removals.extend(k.members.into_iter().map(|x| (alpha, x)));
    }
    let survivor = if prev.survivor.is_empty() {
        DyadicSet::empty()
    } else {
        remove_covers(&prev.survivor, removals, &params.delta)?
    };
    let measure = survivor.measure();
    Ok(StageRecord { nu: prev.nu + 1, q: q_to, survivor, measure, dangerous_counts: counts, conservative_count })
}

/// Predicted number of removal segments `Σ_{x∈K}(x+1)` over `(p, q]`, from the
/// per-block count bound `#K(s, 2s) <= (24δ+2)·s^(1-β)/ln(s+1)^β`.
pub fn estimate_work(params: &ConstructionParams, p: u128, q: u128) -> f64 {
    let delta = to_f64(&params.delta);
    let mut total = 0.0;
    for (_, beta) in params.families() {
        let beta = to_f64(beta);
        let mut s = p as f64 + 1.0;
        let q = q as f64;
        while s <= q {
            let e = (2.0 * s - 1.0).min(q);
            let bound = (24.0 * delta + 2.0) * s.powf(1.0 - beta) / (s + 1.0).ln().powf(beta);
            let count = bound.ceil().min(e - s + 1.0);
            total += count * (e + 1.0);
            if e >= q {
                break;
            }
            s = e + 1.0;
        }
    }
    total
}

fn check_feasible(params: &ConstructionParams, nu: usize, p: u128, q: u128) -> Result<()> {
    let estimated = estimate_work(params, p, q);
    if estimated > params.work_budget as f64 {
        return Err(Error::Infeasible {
            what: format!("stage {nu} (q = {p} -> {q})"),
            estimated,
            budget: params.work_budget,
        });
    }
    Ok(())
}

/// Halving bookkeeping for the step producing stage `nu >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalvingStep {
    pub nu: usize,
    /// `μ(B_{q_{ν-1}}) >= μ(B_{q_{ν-2}})/2 > 0`
    pub hypothesis: bool,
    /// `μ(B_{q_ν}) >= μ(B_{q_{ν-1}})/2`
    pub conclusion: bool,
}

#[derive(Clone, Debug)]
pub struct Trace {
    pub stages: Vec<StageRecord>,
    pub steps: Vec<HalvingStep>,
}

impl Trace {
    /// `μ(B_{q_ν}) >= 2^-ν` per stage.
    pub fn measure_checks(&self) -> Vec<(usize, bool)> {
        self.stages
            .iter()
            .map(|s| (s.nu, s.measure >= BigRational::new(BigInt::one(), pow2(s.nu as u32))))
            .collect()
    }

    pub fn measures_ok(&self) -> bool {
        self.measure_checks().iter().all(|&(_, ok)| ok)
    }

    /// Every step whose hypothesis held also satisfied the conclusion.
    pub fn halving_ok(&self) -> bool {
        self.steps.iter().all(|s| !s.hypothesis || s.conclusion)
    }

    pub fn last(&self) -> &StageRecord {
        self.stages.last().expect("trace has at least B_0")
    }
}

fn halving_steps(stages: &[StageRecord]) -> Vec<HalvingStep> {
    stages
        .windows(3)
        .map(|w| {
            let (m0, m1, m2) = (&w[0].measure, &w[1].measure, &w[2].measure);
            let two = Rational::from_integer(2.into());
            HalvingStep {
                nu: w[2].nu,
                hypothesis: !m0.is_zero() && m1 * &two >= *m0,
                conclusion: m2 * &two >= *m1,
            }
        })
        .collect()
}

/// Stages `ν = 0..=nu_max` along `schedule`. Every stage is checked against
/// the work budget before any refinement starts.
pub fn run_trace(params: &ConstructionParams, schedule: &Schedule, nu_max: usize) -> Result<Trace> {
    let qs = &schedule.q_values;
    if qs.len() <= nu_max {
        return Err(Error::Precondition(format!("schedule has {} values, nu_max = {nu_max} needs {}", qs.len(), nu_max + 1)));
    }
    for nu in 1..=nu_max {
        check_feasible(params, nu, qs[nu - 1], qs[nu])?;
    }
    let mut stages = vec![StageRecord::initial()];
    for &q in &qs[1..=nu_max] {
        let next = refine(stages.last().unwrap(), q, params)?;
        stages.push(next);
    }
    let steps = halving_steps(&stages);
    Ok(Trace { stages, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certarith::BadlyApproxWitness;
    use crate::rational::rat;

    fn params(alpha1: Rational, alpha2: Rational) -> ConstructionParams {
        ConstructionParams::new(BadlyApproxWitness::golden(), rat(1, 4), alpha1, alpha2).unwrap()
    }

    #[test]
    fn refine_without_dangerous_points_keeps_survivor() {
        let p = params(rat(2, 3), rat(1, 3));
        let s = refine(&StageRecord::initial(), 1, &p).unwrap();
        assert_eq!(s.dangerous_counts, [0, 0]);
        assert_eq!(s.measure, rat(1, 1));
    }

    #[test]
    fn refine_golden_to_30() {
        let p = params(rat(1, 2), rat(1, 2));
        let s = refine(&StageRecord::initial(), 30, &p).unwrap();
        assert_eq!(s.dangerous_counts, [3, 3]);
        assert!(s.measure > rat(0, 1) && s.measure < rat(1, 1));
        assert!(s.survivor.is_subset(&DyadicSet::full()));
    }

    #[test]
    fn refine_rejects_non_increasing() {
        let p = params(rat(1, 2), rat(1, 2));
        assert!(matches!(refine(&StageRecord::initial(), 0, &p), Err(Error::Precondition(_))));
    }

    #[test]
    fn trace_nests() {
        let p = params(rat(2, 3), rat(1, 3));
        let sched = Schedule::paper(&p.delta, 3).unwrap();
        let t = run_trace(&p, &sched, 3).unwrap();
        assert_eq!(t.stages.iter().map(|s| s.q).collect::<Vec<_>>(), vec![0, 1, 6, 716]);
        for w in t.stages.windows(2) {
            assert!(w[1].survivor.is_subset(&w[0].survivor));
            assert!(w[1].measure <= w[0].measure);
        }
        assert_eq!(t.stages[0].measure, rat(1, 1));
        assert_eq!(t.steps.len(), 2);
    }

    #[test]
    fn zero_stage_trace() {
        let p = params(rat(2, 3), rat(1, 3));
        let sched = Schedule::paper(&p.delta, 0).unwrap();
        let t = run_trace(&p, &sched, 0).unwrap();
        assert_eq!(t.stages.len(), 1);
        assert!(t.measures_ok());
    }

    #[test]
    fn tight_delta_is_infeasible() {
        let delta = rat(1, 1 << 20);
        let p = ConstructionParams::new(BadlyApproxWitness::golden(), delta.clone(), rat(2, 3), rat(1, 3)).unwrap();
        let sched = Schedule::paper(&delta, 3).unwrap();
        assert!(matches!(run_trace(&p, &sched, 3), Err(Error::Infeasible { .. })));
    }
}
