pub mod error;
pub mod exec;
pub mod order;
pub mod presheaf;
pub mod search;
pub mod site;

pub use error::{Error, Result};
pub mod colimit;
pub mod subobject;
pub mod sieve;
pub mod adjoint;
pub mod homotopy;
pub mod corpus;
