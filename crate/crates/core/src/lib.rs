//! Exact computations around the Markov and Lagrange spectra near 3.

pub mod ab_words;
pub mod dimension;
pub mod error;
pub mod exact_cf;
pub mod lang;
pub mod renorm;
pub mod word;

pub use error::{Error, Result};
pub use exact_cf::{BiSeq, Cylinder, QuadSurd, Rational, SurdSum};
pub use word::Word;
