//! Library surface of the command-line front end (exposed for tests).

pub mod app;
pub mod config;
pub mod output;
