//! Exact computations with finite-dimensional restricted Lie algebras over
//! small finite fields: structure constants and p-maps, reduced enveloping
//! algebras with PBW straightening, induced modules, projective
//! indecomposables, tori, and filtered/graded structure.
//!
//! Everything is exact arithmetic over F_{p^k}; no floating point anywhere.
//! Randomized search paths (module splitting, isomorphism search) are seeded
//! and reproducible, and every positive answer they return is certified by a
//! deterministic check.

pub mod catalog;
pub mod cli;
pub mod doc;
pub mod field;
pub mod filt;
pub mod lie;
pub mod matrix;
pub mod meataxe;
pub mod module;
pub mod pbw;
pub mod pim;
pub mod poly;
pub mod report;
pub mod sweep;
pub mod torus;

use thiserror::Error;

/// Crate-wide error type.  Input validation failures, structural
/// preconditions, and resource caps are kept distinct so the command-line
/// driver can map them to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime in the supported range 2..=251")]
    BadPrime(u64),
    #[error("field F_{{{p}^{k}}} exceeds the exact-table limit")]
    FieldTooLarge { p: u32, k: u32 },
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("structure validation failed: {0}")]
    Invalid(String),
    #[error("{what}: needs {needed}, cap is {cap} (raise --cap to proceed)")]
    ResourceCap {
        what: String,
        needed: u64,
        cap: u64,
    },
    #[error("p-character mismatch: {0}")]
    Character(String),
    #[error("{0}")]
    Precondition(String),
    #[error("undecided within configured limits: {0}")]
    Undecided(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI: 2 for input problems, 3 when a
    /// resource cap or search budget stopped the computation, 1 for
    /// everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BadPrime(_)
            | Error::FieldTooLarge { .. }
            | Error::Dim(_)
            | Error::FieldMismatch
            | Error::Invalid(_)
            | Error::Character(_)
            | Error::Parse(_)
            | Error::UnknownCatalog(_)
            | Error::Precondition(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            Error::ResourceCap { .. } | Error::Undecided(_) => 3,
        }
    }
}
