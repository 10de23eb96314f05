pub mod algebra;
pub mod error;
pub mod euler;
pub mod kernels;
pub mod numerics;
pub mod sampling;
pub mod verify;
pub mod volumes;

pub use error::{Error, Result};
