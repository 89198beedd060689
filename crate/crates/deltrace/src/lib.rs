pub mod bits;
pub mod channel;
pub mod deck;
pub mod error;
pub mod harness;
pub mod lab;
pub mod lcs;
pub mod oracle;
pub mod recon;

pub use error::{Error, Result};
