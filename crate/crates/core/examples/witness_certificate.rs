//! Deepen the last stage inside one segment, extract η and certify (η, ξ).
use badapprox::certarith::BadlyApproxWitness;
use badapprox::construction::{certify_pair, deepen, run_trace, ConstructionParams, Schedule};
use badapprox::dyadic::DyadicInterval;
use badapprox::rational::rat;

fn main() -> badapprox::Result<()> {
    let params = ConstructionParams::new(BadlyApproxWitness::golden(), rat(1, 4), rat(2, 3), rat(1, 3))?;
    let trace = run_trace(&params, &Schedule::paper(&params.delta, 3)?, 3)?;
    let d = deepen(trace.last(), 100_000, &params)?;
    println!("start {} after {} tries, window {}, #K = {:?}, witness η ∈ {}", d.start, d.windows_tried, d.window, d.dangerous_counts, d.witness);
    let cert = certify_pair(&d.witness, &params, 100_000)?;
    println!("certified up to p = {}: failures {:?}", cert.verified_up_to, cert.failures);

    let half = DyadicInterval::new(512, 10)?;
    let bad = certify_pair(&half, &params, 50)?;
    println!("{half} (contains 1/2) fails at p = {:?}", bad.failures);
    Ok(())
}
