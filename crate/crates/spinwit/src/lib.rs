pub mod error;
pub mod gamma;
pub mod lp;
pub mod operator;
pub mod relativistic;
pub mod states;
pub mod witness;

pub use error::{Error, Result};

/// Dense complex matrix used for every operator in the crate.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<num_complex::Complex64>;
