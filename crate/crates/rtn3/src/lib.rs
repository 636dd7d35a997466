//! Three non-interacting qubits subject to classical random telegraph noise
//! (RTN), with the noise either local to each qubit or shared by all three.
//!
//! The crate provides:
//!
//! * [`matrix`] — small dense complex-matrix substrate (Kronecker products,
//!   partial trace/transpose, Hermitian spectra, von Neumann entropy);
//! * [`noise`] — the telegraph process itself: closed-form dephasing factors
//!   `G_n(t)`, trajectory sampling and the single-qubit propagator;
//! * [`evolution`] — GHZ- and W-type Werner initial states evolved by two
//!   interchangeable engines: exact noise-averaged matrices and Monte Carlo
//!   trajectory averaging;
//! * [`correlations`] — tripartite negativity, entanglement witnesses and
//!   genuine tripartite total/classical/quantum correlations (discord) with
//!   measurement-frame optimization;
//! * [`sweep`] — the parameter-sweep front end behind the `rtn3` binary,
//!   emitting CSV over `(γt, r)` grids.
//!
//! All entropic quantities use base-2 logarithms (bits). The qubit ordering
//! convention throughout is A ⊗ B ⊗ C with A the most significant bit of the
//! 8-dimensional basis index, i.e. rows are ordered |000⟩, |001⟩, …, |111⟩.

pub mod correlations;
pub mod evolution;
pub mod matrix;
pub mod noise;
pub mod sweep;

/// Crate-wide error type.
///
/// `InvalidArgument` marks caller mistakes (bad ranges, shape mismatches,
/// non-Hermitian inputs); `Internal` marks numerical invariant violations
/// that indicate a bug rather than noise (e.g. an eigenvalue far below zero
/// on a supposed density matrix, or a discord value below -1e-6).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal numerical error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI maps each error class to: 2 for usage
    /// errors, 3 for I/O failures, 4 for internal numerical errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) => 2,
            Error::Io(_) => 3,
            Error::Internal(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
