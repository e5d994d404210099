//! Exact symbolic toolkit for complex orthogonal designs (CODs) and balanced
//! CODs (BCODs).
//!
//! Entries are `0` or `±z_i` / `±z_i*` over formal complex indeterminates, so
//! every check is exact: orthogonality is decided on Hermitian products of
//! monomials, never numerically.

pub mod canonical;
pub mod entry;
pub mod equivalence;
pub mod error;
pub mod format;
pub mod hermitian;
pub mod matrix;
pub mod search;
pub mod structure;
pub mod verify;

pub use canonical::{are_equivalent, canonical_bcod, canonicalize, CanonicalCertificate};
pub use entry::{Atom, Entry};
pub use equivalence::{apply, invert, EquivOp, OpScript};
pub use error::{Error, Result};
pub use hermitian::{column_inner_product, HermitianProduct, Monomial};
pub use matrix::{CodMatrix, RowClass};
pub use verify::{verify_bcod, verify_cod, VerificationReport, Violation};
