//! H and K Bohr sets, naive scan against the rotation-accelerated enumeration.
use badapprox::bohr::{enumerate_h, enumerate_k, BohrQuery, Mode};
use badapprox::certarith::BadlyApproxWitness;
use badapprox::rational::rat;
use std::time::Instant;

fn main() -> badapprox::Result<()> {
    let xi = BadlyApproxWitness::golden();
    let h = enumerate_h(&BohrQuery::new(xi.clone(), rat(1, 2), rat(3, 10), 10, 20), Mode::Naive)?;
    println!("H^(1/2)(10, 20] at δ = 3/10: {:?}", h.members);

    let q = BohrQuery::new(xi, rat(1, 3), rat(1, 4), 0, 2_000_000);
    for mode in [Mode::Naive, Mode::Accelerated] {
        let t = Instant::now();
        let k = enumerate_k(&q, mode)?;
        println!("{mode:?}: #K^(1/3)(0, 2e6] = {}, first {:?}, {:.2?}", k.members.len(), &k.members[..8], t.elapsed());
    }
    Ok(())
}
