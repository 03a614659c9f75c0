//! Exact computation in Thompson's groups F and T, the orientation
//! preserving automorphisms of F, a finitely presented extension of F with
//! solvable word problem, and a commutator key exchange built on it.

pub mod aag;
pub mod autf;
pub mod dyadic;
pub mod error;
pub mod extension;
pub mod groupf;
pub mod groupt;
pub mod plmap;
pub mod rng;
pub mod syntax;
pub mod varint;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
