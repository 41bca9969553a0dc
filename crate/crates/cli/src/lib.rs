//! File formats, DOT export, reporting and campaigns for the `preopa`
//! command-line tool.

pub mod campaign;
pub mod dot;
pub mod model;
pub mod report;
