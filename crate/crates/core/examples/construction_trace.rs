//! The nested construction B_0 ⊇ B_1 ⊇ B_6 ⊇ B_716 and the cover measure bound sampled over it.
use badapprox::certarith::BadlyApproxWitness;
use badapprox::construction::{lemma4_sweep, run_trace, ConstructionParams, Schedule};
use badapprox::rational::{rat, to_f64};

fn main() -> badapprox::Result<()> {
    let params = ConstructionParams::new(BadlyApproxWitness::golden(), rat(1, 4), rat(2, 3), rat(1, 3))?;
    let trace = run_trace(&params, &Schedule::paper(&params.delta, 3)?, 3)?;
    for (s, (_, ok)) in trace.stages.iter().zip(trace.measure_checks()) {
        println!(
            "ν = {} q = {:>4}  μ = {:<12} ({:.5})  ≥ 2^-ν: {ok:<5}  #K = {:?}  segments {}",
            s.nu, s.q, s.measure.to_string(), to_f64(&s.measure), s.dangerous_counts, s.survivor.len()
        );
    }
    for step in &trace.steps {
        println!("halving step to ν = {}: hypothesis {}, conclusion {}", step.nu, step.hypothesis, step.conclusion);
    }
    let records = lemma4_sweep(&trace.stages, &params, 5)?;
    let ok = records.iter().filter(|r| r.ok).count();
    println!("cover measure bound: {ok}/{} sampled checks hold", records.len());
    Ok(())
}
