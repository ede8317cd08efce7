//! Exact coefficient rings: prime fields, extension fields and dual numbers.

mod dual;
mod field;
pub(crate) mod fp_poly;
mod ring;

pub use dual::Dual;
pub use field::{Field, FieldValue};
pub use fp_poly::{is_irreducible, is_prime};
pub use ring::{FieldLike, Ring};
