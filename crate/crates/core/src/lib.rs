//! Link assessment for social networks from companion interaction networks.
//!
//! Given a self-reported social network and one or more interaction networks
//! over the same people, this crate builds feature data models from edge
//! proximity measures, trains binary classifiers to separate real from
//! spurious links, and ranks the assessed links by tie strength.

pub mod classify;
pub mod dataset;
pub mod error;
mod exec;
pub mod experiments;
pub mod features;
pub mod graph;
pub mod metrics;
pub mod ranking;
pub mod report;
pub mod synthetic;

pub use error::{Error, Result};
pub use exec::ExecMode;
