pub mod arith;
pub mod division_algebra;
pub mod error;
pub mod expr;
pub mod ff;
pub mod local_ring;
pub mod modcat;
pub mod rmat;
pub mod par;
pub mod tensor;
pub mod verify;
pub mod witt;
pub mod zmod;

pub use error::{Error, Result};
