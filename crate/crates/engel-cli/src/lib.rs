//! Library surface of the command-line front end: the definition-language
//! parser, the registry builder, report rendering, and the command runner.
//! The binary in `main.rs` is a thin argument-parsing wrapper, so all of
//! this is exercisable (and fuzzable) in-process.

pub mod defs;
pub mod registry;
pub mod report;
pub mod run;

pub use defs::{parse_definitions, Constructor, DefError, GroupDefinition, Word};
pub use registry::{build, Built, Registry};
pub use run::{Command, Options, Outcome};
