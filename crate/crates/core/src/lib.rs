pub mod atomic;
pub mod cli;
pub mod embed;
pub mod error;
pub mod evaluate;
pub mod harvest;
pub mod inventory;
pub mod pos;
pub mod propagate;

pub use error::{Error, Result};
pub use pos::Pos;
