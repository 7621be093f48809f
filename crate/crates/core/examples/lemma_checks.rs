//! Counting bound for H over (p, 2p] and the weighted sum over K(p, q].
use badapprox::bohr::{corollary3_sum, lemma2_check};
use badapprox::certarith::BadlyApproxWitness;
use badapprox::rational::{rat, to_f64};

fn main() -> badapprox::Result<()> {
    let xi = BadlyApproxWitness::golden();
    let delta = rat(1, 32);
    for k in [4, 8, 12] {
        let r = lemma2_check(&xi, &delta, &rat(1, 2), 1 << k)?;
        println!("#H(p, 2p) at p = 2^{k}: {} <= {:.2} ({})", r.count, to_f64(&r.bound.lo), r.ok);
    }
    for p in [2, 10, 40] {
        let r = corollary3_sum(&xi, &delta, &rat(1, 2), p)?;
        println!("p = {p}, q = {}: sum {:.4} <= {:.1} ({})", r.q, to_f64(&r.sum.hi), to_f64(&r.bound.lo), r.ok);
    }
    Ok(())
}
