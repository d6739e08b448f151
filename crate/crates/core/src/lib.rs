//! Computable Peano-like structures and the induction principles they do or
//! do not satisfy.

pub mod dsl;
pub mod gallery;
pub mod implication;
pub mod model;
pub mod oracle;
pub mod ordinal;
pub mod principles;
pub mod reproduce;
