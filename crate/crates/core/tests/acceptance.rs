//! One test per acceptance criterion. Each prints a single PASS/FAIL line.

use badapprox::bohr::{corollary3_sum, enumerate_k, lemma2_check, BohrQuery, Mode};
use badapprox::certarith::classify::threshold_enclosure;
use badapprox::certarith::{compare, log_enclosure, pow_enclosure, BadlyApproxWitness};
use badapprox::construction::{
    certify_pair, deepen, lemma4_sweep, run_trace, schedule_next, ConstructionParams, Schedule, Trace,
};
use badapprox::dyadic::{dyadic_cover, level_of, DyadicInterval, RemovalFamily};
use badapprox::rational::{ceil, floor, floor_log2, int, pow2, rat, Rational};
use badapprox::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

/// Written to the raw stderr handle so the line survives libtest's output capture.
fn report(n: u32, name: &str, ok: bool, detail: String) {
    let line = format!("criterion {n} [{name}]: {} ({detail})\n", if ok { "PASS" } else { "FAIL" });
    std::io::stderr().write_all(line.as_bytes()).unwrap();
}

fn golden() -> BadlyApproxWitness {
    BadlyApproxWitness::golden()
}

fn default_params() -> ConstructionParams {
    ConstructionParams::new(golden(), rat(1, 4), rat(2, 3), rat(1, 3)).unwrap()
}

fn default_trace(p: &ConstructionParams) -> Trace {
    run_trace(p, &Schedule::paper(&p.delta, 3).unwrap(), 3).unwrap()
}

#[test]
fn criterion_1_h_count_bound() {
    let t0 = Instant::now();
    let xi = golden();
    let betas = [rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1)];
    let mut checked = 0;
    let mut violations = Vec::new();
    for delta in [rat(1, 32), rat(1, 256)] {
        for beta in &betas {
            for k in 1..=14 {
                let r = lemma2_check(&xi, &delta, beta, 1 << k).unwrap();
                checked += 1;
                if !r.ok {
                    violations.push((delta.clone(), beta.clone(), r.p, r.count));
                }
            }
        }
    }
    let elapsed = t0.elapsed();
    let ok = violations.is_empty() && elapsed < Duration::from_secs(300);
    report(1, "H count bound", ok, format!("{checked} cases, violations {violations:?}, {elapsed:.1?}"));
    assert!(ok);
}

#[test]
fn criterion_2_k_weighted_sum() {
    let t0 = Instant::now();
    let xi = golden();
    let delta = rat(1, 32);
    let mut violations = Vec::new();
    let mut worst = 0.0f64;
    let mut max_q = 0;
    for beta in [rat(1, 2), rat(1, 1)] {
        for p in 2..=100 {
            let r = corollary3_sum(&xi, &delta, &beta, p).unwrap();
            worst = worst.max(r.sum.hi.to_f64().unwrap());
            max_q = max_q.max(r.q);
            if !r.ok {
                violations.push((beta.clone(), p));
            }
        }
    }
    let elapsed = t0.elapsed();
    let ok = violations.is_empty() && elapsed < Duration::from_secs(600);
    report(
        2,
        "K weighted sum",
        ok,
        format!("largest sum {worst:.4} vs 285.8, q up to {max_q}, violations {violations:?}, {elapsed:.1?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_3_enumeration_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut mismatches = Vec::new();
    for _ in 0..200 {
        let bd = rng.gen_range(1..=12i64);
        let beta = rat(rng.gen_range(0..=bd), bd);
        let delta = rat(rng.gen_range(1..=99), 200);
        let q = rng.gen_range(1..=100_000u64);
        let p = rng.gen_range(0..q);
        let query = BohrQuery::new(golden(), beta.clone(), delta.clone(), p, q);
        let naive = enumerate_k(&query, Mode::Naive).unwrap();
        let fast = enumerate_k(&query, Mode::Accelerated).unwrap();
        if naive.members != fast.members {
            mismatches.push((beta, delta, p, q));
        }
    }
    let ok = mismatches.is_empty();
    report(3, "accelerated K enumeration", ok, format!("200 queries, mismatches {mismatches:?}"));
    assert!(ok);
}

/// Cells `c` at `level` with `[c, c+1]/2^level` meeting `[y/x − r, y/x + r] ∩ [0, 1]` for some `y`.
fn naive_cells(x: u64, level: u32, r: &Rational) -> BTreeSet<u128> {
    let n = Rational::from_integer(pow2(level));
    let top = (1u128 << level) - 1;
    let mut cells = BTreeSet::new();
    for y in 0..=x {
        let u = BigRational::new(BigInt::from(y), BigInt::from(x));
        let lo = (&u - r).max(Rational::zero());
        let hi = (&u + r).min(rat(1, 1));
        let first = (ceil(&(&lo * &n)) - BigInt::from(1)).max(BigInt::zero()).to_u128().unwrap();
        let last = floor(&(&hi * &n)).to_u128().unwrap().min(top);
        cells.extend(first..=last);
    }
    cells
}

fn naive_cover(x: u64, alpha: &Rational, delta: &Rational) -> (u32, BTreeSet<u128>) {
    let ln = log_enclosure(&int(x + 1), 128).unwrap().scale(&int(x));
    let w = pow_enclosure(&ln, alpha, 128).unwrap().scale(&int(x));
    let two_delta = delta * int(2);
    let (l_lo, l_hi) = (floor_log2(&(&w.lo / &two_delta)), floor_log2(&(&w.hi / &two_delta)));
    assert_eq!(l_lo, l_hi, "level undecided at x = {x}");
    let level = l_lo.max(0) as u32;
    let r_min = delta / &w.hi;
    let r_max = delta / &w.lo * rat(1 + (1 << 40), 1 << 40) + BigRational::new(BigInt::from(1), pow2(level + 32));
    let required = naive_cells(x, level, &r_min);
    let allowed = naive_cells(x, level, &r_max);
    assert_eq!(required, allowed, "cover undecided at x = {x}, alpha = {alpha}");
    (level, required)
}

#[test]
fn criterion_4_dyadic_oracle() {
    let mut compared = 0;
    let mut mismatches = Vec::new();
    for delta in [rat(1, 4), rat(1, 32)] {
        for alpha in [rat(1, 3), rat(1, 2), rat(2, 3)] {
            for x in 1..=500u64 {
                let (level, expected) = naive_cover(x, &alpha, &delta);
                let family = RemovalFamily::build(x, &alpha, &delta).unwrap();
                let got: BTreeSet<u128> = dyadic_cover(&family)
                    .segments()
                    .iter()
                    .flat_map(|s| s.children_at(level))
                    .map(|c| c.numerator)
                    .collect();
                compared += 1;
                if level != level_of(x, &alpha, &delta).unwrap() || got != expected {
                    mismatches.push((delta.clone(), alpha.clone(), x));
                }
            }
        }
    }
    let ok = mismatches.is_empty();
    report(4, "dyadic cover vs naive oracle", ok, format!("{compared} covers, mismatches {mismatches:?}"));
    assert!(ok);
}

#[test]
fn criterion_5_cover_measure_bound() {
    let p = default_params();
    let trace = default_trace(&p);
    let records = lemma4_sweep(&trace.stages, &p, 20).unwrap();
    let bad: Vec<_> = records.iter().filter(|r| !r.ok).map(|r| (r.nu, r.x, r.alpha.to_string())).collect();
    let ok = bad.is_empty() && !records.is_empty();
    report(5, "cover measure bound on the construction", ok, format!("{} checks, violations {bad:?}", records.len()));
    assert!(ok);
}

#[test]
fn criterion_6_construction_trace() {
    let t0 = Instant::now();
    let p = default_params();
    let trace = default_trace(&p);
    let measures: Vec<String> = trace.stages.iter().map(|s| format!("q={} mu={}", s.q, s.measure)).collect();
    let below: Vec<usize> = trace.measure_checks().into_iter().filter(|&(_, ok)| !ok).map(|(nu, _)| nu).collect();
    let halving: Vec<usize> = trace.steps.iter().filter(|s| s.hypothesis && !s.conclusion).map(|s| s.nu).collect();
    let last = trace.last();
    let q4 = schedule_next(last.q, &p.delta).unwrap();
    let lazy = match deepen(last, q4, &p.clone().with_work_budget(1_000_000_000)) {
        Ok(d) => format!("lazy q={q4}: window {} keeps {} segment(s), witness {}", d.window, d.survivor.len(), d.witness),
        Err(e) => format!("lazy q={q4}: {e}"),
    };
    let ok = below.is_empty() && halving.is_empty() && t0.elapsed() < Duration::from_secs(1800);
    report(
        6,
        "construction trace measures",
        ok,
        format!("{measures:?}; below 2^-nu at {below:?}; halving fails at {halving:?}; {lazy}"),
    );
    assert!(ok);
}

/// `‖p·n/d‖` as an exact rational.
fn frac_dist(p: u64, n: &BigInt, d: &BigInt) -> Rational {
    let m = (BigInt::from(p) * n) % d;
    let m = m.clone().min(d - m);
    BigRational::new(m, d.clone())
}

fn weighted_ok(dist: &Rational, p: u64, exponent: &Rational, delta: &Rational) -> bool {
    for bits in [64, 256, 1024] {
        let t = threshold_enclosure(p, exponent, delta, bits).unwrap();
        if dist >= &t.hi {
            return true;
        }
        if dist < &t.lo {
            return false;
        }
    }
    false
}

/// Float estimate of `δ/(p·ln(p+1))^e`, used only to skip clear cases.
fn threshold_f64(p: u64, e: f64, delta: f64) -> f64 {
    let p = p as f64;
    delta / (p * (p + 1.0).ln()).powf(e)
}

const CLEAR: f64 = 1.0 + 1e-9;

/// First `p <= up_to` where the point `n/d` violates any of the pair conditions.
fn direct_violation(n: &BigInt, d: &BigInt, params: &ConstructionParams, up_to: u64) -> Option<u64> {
    let xi = &params.xi;
    let delta_f = params.delta.to_f64().unwrap();
    let (n_f, d_f) = (n.to_f64().unwrap(), d.to_f64().unwrap());
    for p in 1..=up_to {
        let (xi_lo, _) = xi.dist_f64(p);
        if (p as f64) * xi_lo <= delta_f * CLEAR
            && compare(&xi.xi.nearest_int_dist(p).scale(&int(p)), &params.delta) == Ordering::Less
        {
            return Some(p);
        }
        let eta_f = {
            let v = (p as f64 * n_f / d_f).fract();
            v.min(1.0 - v)
        };
        let mut eta_dist = None;
        for (alpha, beta) in params.families() {
            let (a_f, b_f) = (alpha.to_f64().unwrap(), beta.to_f64().unwrap());
            if xi_lo > threshold_f64(p, b_f, delta_f) * CLEAR || eta_f > threshold_f64(p, a_f, delta_f) * CLEAR + 1e-9 {
                continue;
            }
            let xi_side = {
                let xi_dist = xi.xi.nearest_int_dist(p);
                let mut ok = false;
                for bits in [64, 256, 1024] {
                    let t = threshold_enclosure(p, beta, &params.delta, bits).unwrap();
                    if compare(&xi_dist, &t.hi) != Ordering::Less {
                        ok = true;
                        break;
                    }
                    if compare(&xi_dist, &t.lo) == Ordering::Less {
                        break;
                    }
                }
                ok
            };
            let eta = eta_dist.get_or_insert_with(|| frac_dist(p, n, d));
            if !xi_side && !weighted_ok(eta, p, alpha, &params.delta) {
                return Some(p);
            }
        }
    }
    None
}

#[test]
fn criterion_7_witness_certification() {
    let p = default_params();
    let trace = default_trace(&p);
    let d = deepen(trace.last(), 100_000, &p).unwrap();
    let eta: DyadicInterval = d.witness;
    let cert = certify_pair(&eta, &p, 100_000).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let (lo, hi) = (eta.lo(), eta.hi());
    let mut point_failures = Vec::new();
    for _ in 0..100 {
        let m: i64 = rng.gen_range(1..=1_000_000);
        let k: i64 = rng.gen_range(0..=m);
        let t = &lo + (&hi - &lo) * rat(k, m);
        if let Some(bad) = direct_violation(t.numer(), t.denom(), &p, 10_000) {
            point_failures.push((t.to_string(), bad));
        }
    }
    let ok = cert.is_valid() && point_failures.is_empty();
    report(
        7,
        "witness certification",
        ok,
        format!("witness {eta}, interval failures {:?}, point failures {point_failures:?}", cert.failures),
    );
    assert!(ok);
}

#[test]
fn criterion_8_infeasibility() {
    let delta = BigRational::new(BigInt::from(1), pow2(20));
    let p = ConstructionParams::new(golden(), delta.clone(), rat(2, 3), rat(1, 3)).unwrap();
    let lib = run_trace(&p, &Schedule::paper(&delta, 3).unwrap(), 3);
    let lib_ok = matches!(lib, Err(Error::Infeasible { .. }));

    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, r#"{"delta": "1/1048576", "nu_max": 3}"#).unwrap();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_badapprox"))
        .args(["construct", "--config", config.to_str().unwrap(), "--out", dir.path().to_str().unwrap()])
        .output()
        .unwrap();
    let cli_ok = out.status.code() == Some(3) && !dir.path().join("trace.csv").exists();
    let ok = lib_ok && cli_ok;
    report(
        8,
        "infeasibility is explicit",
        ok,
        format!("library {:?}, cli exit {:?}", lib.err().map(|e| e.to_string()), out.status.code()),
    );
    assert!(ok);
}
