//! Nested rational enclosures of ln x and of fractional powers.
use badapprox::certarith::{log_enclosure, pow_enclosure, RationalEnclosure};
use badapprox::rational::{rat, to_f64};

fn main() -> badapprox::Result<()> {
    for bits in [16, 64, 256] {
        let e = log_enclosure(&rat(145, 1), bits)?;
        println!("ln 145 ∈ [{:.18}, {:.18}] at {bits} bits", to_f64(&e.lo), to_f64(&e.hi));
    }
    let base = RationalEnclosure::point(rat(27, 8));
    let cube_root = pow_enclosure(&base, &rat(1, 3), 64)?;
    println!("(27/8)^(1/3) = [{}, {}]", cube_root.lo, cube_root.hi);
    Ok(())
}
