//! Exact computer algebra for twisted multiloop Lie algebras and their
//! universal central extensions.

pub mod centext;
pub mod error;
pub mod h2oracle;
pub mod kaehler;
pub mod laurent;
pub mod liealg;
pub mod linalg;
pub mod loopdescent;
pub mod report;
pub mod scalars;
pub mod session;

pub use error::{Error, Result};
