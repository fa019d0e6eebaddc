pub mod brute;
pub mod difflie;
pub mod error;
pub mod freelie;
pub mod growth;
pub mod limits;
pub mod moore;
pub mod selftest;
pub mod serde_util;
pub mod zpmod;

pub use error::{Error, Result};
pub use limits::Limits;
