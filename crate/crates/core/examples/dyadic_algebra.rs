//! Exact set algebra on finite unions of dyadic segments.
use badapprox::dyadic::{DyadicInterval, DyadicSet};

fn main() -> badapprox::Result<()> {
    let a = DyadicSet::from_segments([DyadicInterval::new(0, 2)?, DyadicInterval::new(1, 2)?]);
    let b = DyadicSet::from_segments([DyadicInterval::new(3, 3)?, DyadicInterval::new(5, 3)?]);
    println!("a = {:?}", a.segments().iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("a ∪ b measure {}", a.union(&b).measure());
    println!("a ∩ b = {:?}", a.intersect(&b).segments().iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("a ∖ b measure {}, complement of a measure {}", a.subtract(&b).measure(), a.complement().measure());
    println!("{}", serde_json::to_string(&a.subtract(&b)).unwrap());
    Ok(())
}
