//! Exact computations for the discrete Heisenberg group and its extensions
//! `Hei ⋊ Z/m`, `m ∈ {2, 3, 4, 6}`.

pub mod abelian;
pub mod assembly;
pub mod checks;
pub mod error;
pub mod group;
pub mod homology;
pub mod quotient;
pub mod report;
pub mod vc;

pub use error::{Error, Result};
