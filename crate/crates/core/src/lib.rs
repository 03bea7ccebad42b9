pub mod action;
pub mod coset;
pub mod error;
pub mod input;
pub mod kernel;
pub mod linalg;
pub mod perm;
pub mod pipeline;
pub mod polytope;
pub mod presets;
pub mod quotient;
pub mod rewrite;
pub mod selftest;
pub mod tietze;
pub mod word;

pub use error::{Error, Result};
