//! Weighted shortest (expected) processing time list scheduling on identical
//! parallel machines: closed-form performance bounds, the instance families
//! that make them tight, and exact oracles to check both.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod exact;
pub mod instance;
pub mod report;
pub mod schedule;
pub mod stochastic;
pub mod worst_case;

pub use error::{Error, Result};
pub use instance::{AnyInstance, DeterministicInstance, Distribution, Job, StochasticInstance, StochasticJob};
pub use report::RatioReport;
pub use schedule::{list_schedule, wspt_schedule, Schedule, ScheduledJob};
