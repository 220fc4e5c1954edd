//! Finite fields, matrices over GF(p), and fields hidden inside GL_d(p).

mod field;
pub mod linalg;
mod matrix;
mod space;
mod structure;

pub use field::{is_prime, prime_power, GaloisField};
pub use matrix::{decode, encode, MatrixModP, MatrixSpace};
pub use space::CoordinateSystem;
pub use structure::{
    centralizer_space, enumerate_field_structures, enumerate_units, field_from_element, prime_field_structure,
    semilinear_check, tuple_intertwiner, FieldEnumeration, FieldStructure, ZECH_ZERO,
};
