//! Command-line front end for the finite vector-lattice operator calculus:
//! workspace documents, subcommands, and deterministic reports.

pub mod commands;
pub mod doc;
pub mod report;
pub mod verify;

pub use commands::GlobalOpts;
pub use report::{ExitClass, Outcome};
