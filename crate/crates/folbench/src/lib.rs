//! File formats, backends, external provers, the parallel runner, reports and
//! the command line for `folbench_core`.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod dataset;
pub mod external;
pub mod http;
pub mod logicbench;
pub mod prove;
pub mod report;
pub mod runner;

/// Version written into every file this crate produces.
pub const SCHEMA_VERSION: u32 = 1;
