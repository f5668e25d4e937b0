pub mod error;
pub mod grid;
pub mod qnum;
pub mod repcls;
pub mod matrep;
pub mod hopfgen;
pub mod schrod;
pub mod geometry;
pub mod io;
pub mod cli;

pub use error::{Error, Result, Sign};
pub use qnum::Deformation;
