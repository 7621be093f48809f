//! Exact floors and nearest-integer distances for a + b·√d.
use badapprox::certarith::{compare, nearest_int_dist, QuadraticReal};
use badapprox::rational::rat;

fn main() -> badapprox::Result<()> {
    let xi = QuadraticReal::golden();
    println!("ξ = {xi} ≈ {:.15}", xi.to_f64());
    for x in [1u64, 8, 144, 10_946] {
        let d = nearest_int_dist(&xi, x);
        println!("‖{x}ξ‖ = {d}  (≈ {:.3e}, x·‖xξ‖ > 0.38: {:?})", d.to_f64(), compare(&d.scale(&rat(x as i64, 1)), &rat(38, 100)));
    }
    let s2 = QuadraticReal::new(rat(0, 1), rat(1000, 1), 2)?;
    println!("floor(1000·√2) = {}", s2.floor());
    Ok(())
}
