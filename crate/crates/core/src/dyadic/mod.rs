//! Dyadic segments, exact set algebra and the removal covers built from them.

pub mod removal;
pub mod set;

pub use removal::{covered_measure, dyadic_cover, level_of, RemovalFamily};
pub use set::{DyadicInterval, DyadicSet, MAX_LEVEL, UNIT};

/// `[0, 1] ∖ S`, closed.
pub fn complement(s: &DyadicSet) -> DyadicSet {
    s.complement()
}

pub fn intersect(a: &DyadicSet, b: &DyadicSet) -> DyadicSet {
    a.intersect(b)
}

pub fn measure(s: &DyadicSet) -> crate::rational::Rational {
    s.measure()
}
