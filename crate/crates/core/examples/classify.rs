//! Certified classification of ‖xξ‖ against δ/(x·ln(x+1))^β.
use badapprox::certarith::{threshold_classify, BadlyApproxWitness, Classifier};
use badapprox::rational::rat;

fn main() -> badapprox::Result<()> {
    let xi = BadlyApproxWitness::golden();
    let c = Classifier::new(xi.clone(), rat(1, 2), rat(1, 4), 4096)?;
    for x in [5u64, 8, 13, 20, 21, 34] {
        println!("x = {x:>2}: float filter + fallback {:?}, certified {:?}", c.classify(x)?, threshold_classify(&xi, x, &rat(1, 2), &rat(1, 4), 4096)?);
    }
    Ok(())
}
