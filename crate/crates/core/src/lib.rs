//! Lie algebras `u(1,n)`, `su(1,n)`, `so(2,n)` and their actions on anti de
//! Sitter spacetimes: root decompositions, closed-form exponentials, orbit
//! slices and a numerical verification harness.

pub mod error;
pub mod indefinite;
pub mod kaehler;
pub mod lie;
pub mod orbit;
pub mod report;
pub mod roots;
pub mod so2n;
pub mod su1n;
pub mod verify;

pub use error::{Error, Result};
