//! File formats, run configuration and the end-to-end pipeline behind the
//! `topling` command.

pub mod config;
pub mod error;
pub mod formats;
pub mod pipeline;
