//! Exact arithmetic substrate: rationals, square classes, Hilbert symbols
//! and real quadratic fields.

pub mod factor;
pub mod hilbert;
pub mod quadfield;
pub mod rational;
pub mod scalar;

pub use hilbert::{hilbert_symbol, is_local_square, Place};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use quadfield::{field_conjugate, is_square_in_field, Embedding, QuadField, QuadFieldElem};
pub use rational::{rat, ratio, squarefree_part, SquareClass};
pub use scalar::{FieldTag, Rationals, Scalar};
