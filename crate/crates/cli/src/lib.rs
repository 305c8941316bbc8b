//! Command line and HTTP front end.

pub mod api;
pub mod play;
pub mod report;
pub mod session;
