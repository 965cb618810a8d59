//! Exact computer algebra for metaplectic Hecke algebra representations.

pub mod checks;
pub mod daha_gl;
pub mod error;
pub mod finite_hecke;
pub mod fixtures;
pub mod grouplalg;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod render;
pub mod roots;
pub mod scalars;
pub mod weight;
pub mod weyl_meta;

pub use error::{Error, Result};
