pub mod cartier;
pub mod cli;
pub mod error;
pub mod exactnum;

pub use error::{Error, Result};
pub mod formulas;
pub mod funcfield;
pub mod linalg;
pub mod pcurvature;
pub mod verify;
