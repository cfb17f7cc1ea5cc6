pub mod commands;
pub mod report;
pub mod text;

pub use commands::{run, Cli, Outcome};
