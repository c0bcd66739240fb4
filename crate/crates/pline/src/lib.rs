pub mod budget;
pub mod chains;
pub mod cli;
pub mod error;
pub mod graph;
pub mod groups;
pub mod mat2;
pub mod projective;
pub mod ring;
pub mod standard_form;
pub mod verify;

pub use error::{Error, Result};
