pub mod blobcomplex;
pub mod coefficients;
pub mod error;
pub mod fields;
pub mod hocolim;
pub mod hochschild;
pub mod linalg;
pub mod manifold;

pub use error::{Error, Result};
