//! Knot Floer staircase complexes over F2 and their epsilon-equivalence classes.
//!
//! Complexes are finite and U-suppressed; tensor products are taken over the
//! ground field. See the individual modules for the pieces.

pub mod complex;
pub mod error;
pub mod falg;
pub mod knots;
pub mod laurent;
pub mod linalg;
pub mod seq;
pub mod simplify;

pub use complex::{BifilteredComplex, Generator};
pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use seq::StepSequence;
