//! Open-access full-text detection for bibliographic records, accuracy
//! auditing with signal-detection theory, and OA-vs-NOA citation statistics.

pub mod analysis;
pub mod corpus;
pub mod metrics;
pub mod records;
pub mod report;
pub mod robot;
pub mod stats;
