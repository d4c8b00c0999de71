//! Exact computation with towers and ind-sequences of finitely generated
//! abelian groups and finite pointed sets.

pub mod cli;
pub mod error;
pub mod factorization;
pub mod fgab;
pub mod grid;
pub mod indcalc;
pub mod random;
pub mod steenrod;
pub mod towers;

pub use error::{Error, Result};
