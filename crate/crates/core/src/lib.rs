//! Exact computational algebra around Schur algebras S(n,d).
//!
//! The crate builds, over any supported coefficient ring (prime fields,
//! extension fields, Z/m, Z):
//!
//! - dense exact linear algebra (row reduction over fields, Hermite and Smith
//!   normal forms over Z),
//! - tensor powers of k^n with the place-permutation and diagonal GL actions,
//! - symmetric tensors with the orbit-sum basis and the correspondence
//!   between homogeneous polynomial maps and linear maps on them,
//! - the Schur algebra in its two realizations together with structure
//!   constants,
//! - the canonical map from the group algebra of GL(n) into the Schur
//!   algebra, with surjectivity, epimorphism, and integral-obstruction tests,
//! - block/radical analysis of small finite-dimensional algebras,
//! - polynomial representations of GL(n) and their interchange with
//!   Schur-algebra modules.

#![allow(clippy::needless_range_loop)]
#![allow(clippy::manual_is_multiple_of)]

pub mod duality;
pub mod error;
pub mod fdalg;
pub mod guards;
pub mod linalg;
pub mod polyrep;
pub mod ring;
pub mod schur;
pub mod symtensor;
pub mod tensor;

pub use error::{Error, Result};
pub use linalg::{Matrix, SnfResult};
pub use ring::{Ring, RingRepr, Scalar};
