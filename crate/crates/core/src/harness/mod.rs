//! Instance I/O, generation, the multistart solver driver and benchmark
//! reporting.

pub mod format;
pub mod generate;
pub mod multistart;
pub mod report;

pub use format::{parse_instance, write_instance, InstanceBody, ParsedInstance};
pub use generate::{generate_instance, random_vrp, SynthConfig};
pub use multistart::{multistart_solve, MultistartOutcome, SolverParams};
pub use report::{compare_report, BenchmarkReport};
