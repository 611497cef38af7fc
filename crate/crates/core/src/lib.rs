pub mod actions;
pub mod algebra;
pub mod cohomology;
pub mod constructors;
pub mod error;
pub mod groups;
pub mod io;
pub mod k_theory;
pub mod phase;

pub use error::{Error, Result};
pub use phase::Phase;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
