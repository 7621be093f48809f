//! Exact quadratic irrationals, certified enclosures and threshold classification.

pub mod classify;
pub mod enclosure;
pub mod quadratic;

pub use classify::{threshold_classify, BadlyApproxWitness, Classification, Classifier, DEFAULT_CAP_BITS};
pub use enclosure::{log_enclosure, pow_enclosure, RationalEnclosure, Target};
pub use quadratic::{compare, QuadraticReal};

/// `‖x·ξ‖` exactly.
pub fn nearest_int_dist(xi: &QuadraticReal, x: u64) -> QuadraticReal {
    xi.nearest_int_dist(x)
}
