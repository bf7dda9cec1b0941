pub mod cli;
pub mod error;
pub mod field_arith;
pub mod forms;
pub mod funcfield;
pub mod linalg;
pub mod rational;
pub mod settings;
pub mod sigfunc;
pub mod witt_decide;

pub use error::{Error, Result};
pub use settings::Settings;
