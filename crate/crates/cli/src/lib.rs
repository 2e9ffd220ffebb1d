//! Command-line driver over [`bun2_core`]: curve spec files, class and
//! divisor literals, deterministic seeded experiments, and the report
//! emitters.  Exposed as a library so integration tests exercise the same
//! code paths the binary runs.

pub mod app;
pub mod commands;
pub mod formats;
