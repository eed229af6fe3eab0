//! Exact tools for zero-sum problems over small finite abelian groups:
//! counting zero-sum subsequences, building extremal sequences, checking
//! the mod-`p` count congruences, and computing Erdős–Ginzburg–Ziv style
//! constants by symmetry-reduced exhaustive search.

pub mod error;
pub mod group;
pub mod seq;
pub mod symmetry;
pub mod count;
pub mod constructions;
pub mod search;
pub mod constants;
pub mod congruences;
pub mod acceptance;

pub use error::{Error, Result};
pub use group::{Element, Group};
pub use seq::Seq;
pub use symmetry::SymmetryMode;
