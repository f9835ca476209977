//! Exact arithmetic for evolution algebras over commutative rings.
//!
//! An evolution algebra has a basis `x_1, ..., x_N` with `x_i x_j = 0` for
//! `i != j` and `x_j^2 = sum_k c_kj x_k`. The crate covers finite-dimensional
//! algebras given by their structure matrix and infinite-dimensional ones
//! given by a structure rule, together with tests for nil, nilpotent and
//! strongly nilpotent algebras that return checkable witnesses.

pub mod algebra;
pub mod analysis;
pub mod error;
pub mod infinite;
pub mod matrix;
pub mod ring;

pub use algebra::{Element, EvolutionAlgebra, DEFAULT_PLENARY_CAP};
pub use error::{Error, Result};
pub use infinite::{RuleKind, SparseElement, StructureRule};
pub use matrix::RingMatrix;
pub use ring::{is_prime, NilpotencyIndex, Ring, RingDescriptor, RingValue};
