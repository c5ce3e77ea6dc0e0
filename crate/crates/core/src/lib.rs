pub mod cwt;
pub mod error;
pub mod fluctuation;
pub mod holder;
pub mod numerics;
pub mod reconstruction;
pub mod series;

pub use error::{Error, Result};
