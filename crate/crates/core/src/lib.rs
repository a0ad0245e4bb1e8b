//! Path rings of finite-dimensional rational cdga's.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] — exact sparse linear algebra over `ℚ`;
//! * [`cdga`] — commutative differential graded algebras, their cohomology,
//!   augmentations and formal models;
//! * [`bar`] — the two-sided reduced bar complex and the connectedness and
//!   concentration checks;
//! * [`hopf`] — the shuffle Hopf algebra on words, cocomposition, cotorsors;
//! * [`sullivan`] — Bousfield–Guggenheim cofibrant replacement stages;
//! * [`chen`] — iterated integrals and unipotent parallel transport on
//!   punctured lines.

pub mod bar;
pub mod cdga;
pub mod chen;
pub mod hopf;
pub mod lincomb;
pub mod linalg;
pub mod report;
pub mod rational;
pub mod sign;
pub mod sullivan;
pub mod word;

pub use lincomb::LinComb;
pub use linalg::{Rational, SparseMatrix, SparseVec};
pub use word::Word;
