pub mod bounds;
pub mod error;
pub mod generate;
pub mod instance;
pub mod l2;
pub mod report;
pub mod rng;
pub mod sharpness;
pub mod space;
pub mod suite;

pub use error::{Error, Result};
