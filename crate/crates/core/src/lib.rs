//! Counting formulas and orbit machinery for t-singular linear spaces over
//! finite fields.
//!
//! A t-singular linear space is GF(q)^(n_1+...+n_t) acted on from the right
//! by the invertible matrices that are block upper triangular with respect to
//! the partition (n_1, ..., n_t). Subspaces fall into orbits indexed by their
//! type; this crate evaluates the closed-form counts attached to those orbits
//! and checks every one of them against exhaustive enumeration.
//!
//! - [`field`]: GF(q) arithmetic on integer codes.
//! - [`matrix`]: dense matrices, RREF, subspaces and their lattice operations.
//! - [`qcount`]: exact Gaussian coefficients, rank counts and anzahl formulas.
//! - [`spaces`]: types, canonical representatives, the group and its action.
//! - [`suborbits`]: the stabilizer-orbit invariants for t = 3 and the oracle.
//! - [`verify`]: the formula-versus-enumeration harness and its report.

pub mod error;
pub mod field;
pub mod matrix;
pub mod qcount;
pub mod spaces;
pub mod suborbits;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use matrix::{Matrix, Subspace};
pub use qcount::{Count, Shape, TypeVector};
pub use spaces::GroupElement;
pub use suborbits::{InvariantTuple, OrbitReport, RawDims};
