//! c-differential uniformity of functions over GF(p^n).

pub mod cdiff;
pub mod error;
pub mod field;
pub mod function;
mod int;
pub mod number_theory;
pub mod report;
pub mod tables;
pub mod theorems;
pub mod walsh;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use function::{FunctionSpec, FunctionTable, Origin};
