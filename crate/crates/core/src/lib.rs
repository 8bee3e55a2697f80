//! Prime-order automorphisms of smooth cubic hypersurfaces.
//!
//! The crate decides which primes occur as automorphism orders of smooth
//! cubic `n`-folds, classifies the hypersurfaces carrying such an
//! automorphism by signature, certifies smoothness with Gröbner bases over
//! prime fields, and computes the character of the induced action on graded
//! pieces of the Jacobian ring.

pub mod admissibility;
pub mod cli;
pub mod classify;
pub mod error;
pub mod forms;
pub mod hodge;
pub mod signatures;
pub mod smoothness;

pub use error::{Error, Result};
