//! The schedule q_{ν+1} = [q_ν²/δ·ln(q_ν²/δ)] + 1 and its work estimate.
use badapprox::certarith::BadlyApproxWitness;
use badapprox::construction::{estimate_work, ConstructionParams, Schedule};
use badapprox::rational::{pow2, rat};
use num_rational::BigRational;

fn main() -> badapprox::Result<()> {
    for (delta, nu_max) in [(rat(1, 4), 4), (BigRational::new(1.into(), pow2(20)), 3)] {
        let params = ConstructionParams::new(BadlyApproxWitness::golden(), delta.clone(), rat(2, 3), rat(1, 3))?;
        let s = Schedule::paper(&delta, nu_max)?;
        println!("δ = {delta}");
        for (nu, w) in s.q_values.windows(2).enumerate() {
            println!("  q_{} = {:<28} estimated segments {:.3e}", nu + 1, w[1], estimate_work(&params, w[0], w[1]));
        }
    }
    Ok(())
}
