//! Removal intervals E_α(x) and their dyadic covers A_α(x).
use badapprox::dyadic::{dyadic_cover, level_of, RemovalFamily};
use badapprox::rational::{rat, to_f64};

fn main() -> badapprox::Result<()> {
    let f = RemovalFamily::build(2, &rat(0, 1), &rat(1, 8))?;
    let cover = dyadic_cover(&f);
    println!("x = 2, α = 0, δ = 1/8: level {}, radius {}", f.level, f.radius());
    println!("  cover {:?}, measure {}", cover.segments().iter().map(ToString::to_string).collect::<Vec<_>>(), cover.measure());

    for x in [10u64, 100, 1000] {
        let f = RemovalFamily::build(x, &rat(2, 3), &rat(1, 4))?;
        let cover = dyadic_cover(&f);
        println!(
            "x = {x}: level {}, E length {:.5}, A measure {:.5}, {} segments",
            level_of(x, &rat(2, 3), &rat(1, 4))?,
            to_f64(&f.total_length()),
            to_f64(&cover.measure()),
            cover.len()
        );
    }
    Ok(())
}
