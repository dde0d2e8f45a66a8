//! Spectral toolkit for threshold graphs.
//!
//! A threshold graph is given by its creation sequence. The [`diagonalize`]
//! sweep produces, in linear time, a diagonal matrix congruent to `A + σI`,
//! whose signs count the eigenvalues on either side of `-σ`. On top of that:
//!
//! - [`spectra`] reads the inertia off substring counts and localizes the
//!   smallest positive eigenvalue and the largest eigenvalue below `-1` by
//!   bisection on the counts;
//! - [`oracle`] is an independent dense Jacobi eigensolver used to certify
//!   the counting machinery;
//! - [`verify`] checks exhaustively, for small orders, that the anti-regular
//!   graph `A_n` is extremal for both quantities.

pub mod diagonalize;
pub mod oracle;
pub mod sequences;
pub mod sig;
pub mod spectra;
pub mod verify;

pub use diagonalize::{
    alpha_trace, diagonalize, eigencount, perturb_compare, transfer_eval, DiagonalizeError,
    DiagonalizeTrace, EigenCounts, Shift, Sign, Subcase, Tolerances, Transfer, TransferFunctions,
};
pub use oracle::{count_relative, eigenvalues, OracleError, Spectrum};
pub use sequences::{
    adjacency, anti_regular, enumerate_connected, enumerate_critical, parse, parse_flexible,
    AdjacencyMatrix, CreationSequence, RunLengthForm, SequenceError,
};
pub use spectra::{
    forbidden_interval_clear, inertia_by_counting, inertia_by_diagonalization, locate_lambda_minus,
    locate_lambda_plus, BisectionConfig, ForbiddenInterval, Inertia, SpectraError, SpectralSummary,
};
pub use verify::{
    verify_conjecture, verify_corollary2_inequalities, verify_critical_cases, verify_sign_pattern,
    verify_theorem5_chain, ConjectureReport, VerifyConfig, VerifyError,
};
