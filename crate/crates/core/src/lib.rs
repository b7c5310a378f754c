//! Two-color Rado numbers for `x1 + ... + xm + c = a*x0`.
//!
//! Closed forms and the published registry live in [`formula`]; the rest
//! checks, searches for, and certifies colorings.

mod bits;
pub mod checker;
pub mod coloring;
pub mod continuous;
pub mod error;
pub mod formula;
mod par;
pub mod proofs;
pub mod search;

pub use checker::{find_mono_solution, is_solution, Witness};
pub use coloring::{Color, Coloring, PartialColoring};
pub use error::{RadoError, Result};
pub use formula::{evaluate, EquationParams, Obstruction, RadoValue};
pub use par::parallel_enabled;
pub use search::{find_valid_coloring, rado_brute, SearchBudget, SearchOutcome};
