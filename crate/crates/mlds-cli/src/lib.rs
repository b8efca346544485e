//! File formats and command implementations behind the `mlds` binary.
//!
//! The library half exists so integration tests can drive the exact code
//! paths the binary uses: format parsing and atomic writes in
//! [`formats`], the command bodies in [`commands`], and the exit-code
//! mapping in [`error`].

pub mod commands;
pub mod error;
pub mod formats;
