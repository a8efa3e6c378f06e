//! Exact continued-fraction arithmetic: cylinders, quadratic surds, eventually periodic
//! two-sided sequences and their λ- and Markov values.

pub mod biseq;
pub mod cf;
pub mod markov;
pub mod surd;
pub mod surd_sum;

pub use biseq::BiSeq;
pub use cf::{continuants, cylinder, eval_cf, r_exponent, Cylinder, Mobius, Rational};
pub use markov::{
    extremal_tail, lambda_at, markov_value, periodic_cf_value, Direction, ExtremalTail, MarkovValue,
};
pub use surd::QuadSurd;
pub use surd_sum::SurdSum;
