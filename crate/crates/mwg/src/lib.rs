//! File formats, the seeded reproduction suite, parallel search and the
//! acceptance verifier behind the `mwg` command-line tool.

pub mod commands;
pub mod io;
pub mod output;
pub mod search;
pub mod suite;
pub mod verify;

pub use mwg_core as core;
