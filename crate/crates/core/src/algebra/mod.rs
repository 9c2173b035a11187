//! Free associative algebra over graded generator symbols.

mod alphabet;
mod element;

pub use alphabet::{Alphabet, Generator, Grading, Sector, DPP_HCHARGE};
pub use element::{canonical_trace, Element, Sym, Word};
