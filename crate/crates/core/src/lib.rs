//! Pfaffian witnesses for the distinguished coefficients of the
//! characteristic pencil `det(sX + tg + lI)` of a nilpotent `X` in so(2N).

pub mod batch;
pub mod det;
pub mod error;
pub mod field;
pub mod matrix;
pub mod partition;
pub mod pencil;
pub mod poly;
pub mod somatrix;
pub mod witness;

pub use error::{Error, Result};
pub use partition::Partition;
pub use poly::Poly;
