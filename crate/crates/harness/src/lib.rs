//! Wire protocol and two-party harness for the commutator key exchange,
//! plus the identity suite behind `plgroup verify-identities`.

pub mod error;
pub mod exchange;
pub mod frame;
pub mod identities;
pub mod transcript;
pub mod transport;

pub use error::{HarnessError, Result};
