//! The nested construction `B_0 ⊇ B_{q_1} ⊇ …`, its lemma checks and the final witness.

pub mod lemma4;
pub mod params;
pub mod schedule;
pub mod stage;
pub mod witness;

pub use lemma4::{lemma4_check, lemma4_range_start, lemma4_sweep, Lemma4Record};
pub use params::{ConstructionParams, DEFAULT_WORK_BUDGET};
pub use schedule::{schedule_next, Schedule, ScheduleRule};
pub use stage::{estimate_work, refine, run_trace, HalvingStep, StageRecord, Trace};
pub use witness::{certify_pair, deepen, extract_witness, Deepening, WitnessCertificate};
