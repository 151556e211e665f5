//! Single-machine scheduling under release dates and precedence
//! constraints, minimizing total weighted completion time.
//!
//! The pipeline: solve the completion-time LP relaxation by cutting
//! planes for a lower bound, preemptively list schedule in LP order on a
//! double-speed machine (whose cost never exceeds the bound), then
//! convert to a nonpreemptive unit-speed schedule by alpha-point list
//! scheduling. The derandomized conversion costs at most
//! `sqrt(e)/(sqrt(e)-1) ≈ 2.5415` times the optimum. A brute-force
//! oracle for small instances backs the test suite; `sched` is the CLI.

pub mod alpha;
pub mod error;
pub mod exact;
pub mod instance;
pub mod lp;
pub mod pipeline;
pub mod report;
pub mod schedule;
pub mod simplex;
pub mod svg;

pub use error::{Error, Result};
pub use instance::{Instance, Job};
pub use schedule::Schedule;
