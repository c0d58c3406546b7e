//! Command-line front end and experiment drivers for `hots_core`.
//!
//! The `experiments` module produces the `fig1` to `fig5` sweep tables as plain
//! rows; `app` wires every library entry point to a subcommand of `hots`.

pub mod app;
pub mod experiments;
pub mod grid;
pub mod output;
