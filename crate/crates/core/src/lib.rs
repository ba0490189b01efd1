pub mod approx;
pub mod artheory;
pub mod birkhoff;
pub mod decomp;
pub mod error;
pub mod ffmat;
pub mod format;
pub mod lambdamod;
pub mod posetrep;
pub mod random;

pub use error::{Error, Result};
