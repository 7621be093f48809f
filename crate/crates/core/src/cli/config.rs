use crate::certarith::{BadlyApproxWitness, QuadraticReal, DEFAULT_CAP_BITS};
use crate::construction::{ConstructionParams, Schedule, DEFAULT_WORK_BUDGET};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum XiSpec {
    Named(String),
    /// `a + b·√d` with `a`, `b` as `"num/den"` strings.
    Quadratic { a: String, b: String, d: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleSpec {
    Named(String),
    List(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub xi: XiSpec,
    /// Badly-approximable constant claimed for a custom `xi`; checked up to `verified_up_to`.
    pub xi_delta: Option<String>,
    pub delta: String,
    pub alpha1: String,
    pub alpha2: String,
    pub schedule: ScheduleSpec,
    pub nu_max: usize,
    pub precision_cap_bits: u32,
    pub work_budget: u64,
    /// Bound `P` for the witness certificate.
    pub verified_up_to: u64,
    /// Depth the windowed refinement is carried to before extracting the witness;
    /// defaults to `verified_up_to`.
    pub witness_depth: Option<u128>,
    pub trace_csv: String,
    pub witness_json: String,
    pub certificate_json: String,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            xi: XiSpec::Named("golden".into()),
            xi_delta: None,
            delta: "1/4".into(),
            alpha1: "2/3".into(),
            alpha2: "1/3".into(),
            schedule: ScheduleSpec::Named("paper".into()),
            nu_max: 3,
            precision_cap_bits: DEFAULT_CAP_BITS,
            work_budget: DEFAULT_WORK_BUDGET,
            verified_up_to: 100_000,
            witness_depth: None,
            trace_csv: "trace.csv".into(),
            witness_json: "witness.json".into(),
            certificate_json: "certificate.json".into(),
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn delta(&self) -> Result<Rational> {
        parse_rational(&self.delta)
    }

    pub fn xi(&self) -> Result<BadlyApproxWitness> {
        match &self.xi {
            XiSpec::Named(name) if name == "golden" => Ok(BadlyApproxWitness::golden()),
            XiSpec::Named(name) => Err(Error::Parse(format!("unknown xi preset {name:?}"))),
            XiSpec::Quadratic { a, b, d } => {
                let xi = QuadraticReal::new(parse_rational(a)?, parse_rational(b)?, *d)?;
                let claim = match &self.xi_delta {
                    Some(s) => parse_rational(s)?,
                    None => self.delta()?,
                };
                BadlyApproxWitness::certify(xi, claim, self.verified_up_to)
            }
        }
    }

    pub fn params(&self) -> Result<ConstructionParams> {
        Ok(ConstructionParams::new(self.xi()?, self.delta()?, parse_rational(&self.alpha1)?, parse_rational(&self.alpha2)?)?
            .with_cap_bits(self.precision_cap_bits)
            .with_work_budget(self.work_budget))
    }

    pub fn schedule(&self, delta: &Rational) -> Result<Schedule> {
        match &self.schedule {
            ScheduleSpec::Named(name) if name == "paper" => Schedule::paper(delta, self.nu_max),
            ScheduleSpec::Named(name) => Err(Error::Parse(format!("unknown schedule {name:?}"))),
            ScheduleSpec::List(q) => Schedule::custom(q.iter().map(|&v| v as u128).collect()),
        }
    }
}
