use crate::bohr::Mode;
use crate::certarith::{BadlyApproxWitness, DEFAULT_CAP_BITS};
use crate::error::{Error, Result};
use crate::rational::{pow2, rat, Rational};
use num_rational::BigRational;
use num_traits::{One, Zero};

pub const DEFAULT_WORK_BUDGET: u64 = 100_000_000;

/// `(ξ, δ, α₁, β₁, α₂, β₂)` with `α_i + β_i = 1` and `α₁ >= α₂`.
#[derive(Clone, Debug)]
pub struct ConstructionParams {
    pub xi: BadlyApproxWitness,
    pub delta: Rational,
    pub alpha1: Rational,
    pub beta1: Rational,
    pub alpha2: Rational,
    pub beta2: Rational,
    pub cap_bits: u32,
    /// Upper limit on the estimated number of removal segments per stage.
    pub work_budget: u64,
    pub mode: Mode,
}

impl ConstructionParams {
    pub fn new(xi: BadlyApproxWitness, delta: Rational, alpha1: Rational, alpha2: Rational) -> Result<Self> {
        if delta <= Rational::zero() || delta >= rat(1, 2) {
            return Err(Error::Domain(format!("delta = {delta} outside (0, 1/2)")));
        }
        for a in [&alpha1, &alpha2] {
            if a < &Rational::zero() || a > &Rational::one() {
                return Err(Error::Domain(format!("alpha = {a} outside [0, 1]")));
            }
        }
        if alpha1 < alpha2 {
            return Err(Error::Domain(format!("alpha1 = {alpha1} must be >= alpha2 = {alpha2}")));
        }
        if delta > xi.delta_xi {
            return Err(Error::Precondition(format!(
                "delta = {delta} exceeds the badly-approximable constant {} of xi",
                xi.delta_xi
            )));
        }
        let beta1 = Rational::one() - &alpha1;
        let beta2 = Rational::one() - &alpha2;
        Ok(Self {
            xi,
            delta,
            alpha1,
            beta1,
            alpha2,
            beta2,
            cap_bits: DEFAULT_CAP_BITS,
            work_budget: DEFAULT_WORK_BUDGET,
            mode: Mode::Accelerated,
        })
    }

    pub fn with_cap_bits(mut self, cap_bits: u32) -> Self {
        self.cap_bits = cap_bits;
        self
    }

    pub fn with_work_budget(mut self, work_budget: u64) -> Self {
        self.work_budget = work_budget;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    /// `(α_i, β_i)` for `i = 1, 2`.
    pub fn families(&self) -> [(&Rational, &Rational); 2] {
        [(&self.alpha1, &self.beta1), (&self.alpha2, &self.beta2)]
    }

    /// True when `δ > 2^-20`, outside the range where the halving lemma is proved.
    pub fn relaxed_delta(&self) -> bool {
        self.delta > BigRational::new(1.into(), pow2(20))
    }
}
