//! Hermitian spectral calculus and randomized certification of the Golden-Thompson trace
//! inequality `tr exp(A + B) <= tr exp(A) · tr exp(B)`.
//!
//! The inequality is equivalent to convexity of `F(A) = log tr exp(A)` on Hermitian matrices.
//! `F` is a symmetric function of the eigenvalues, so its convexity reduces to that of
//! log-sum-exp on real vectors, whose Hessian `diag(p) - p pᵀ` (with `p` the softmax weights) is
//! a weighted complete-graph Laplacian and hence positive semidefinite.
//!
//! - [`hermitian`]: validated Hermitian and unitary matrices, random ensembles,
//!   eigendecomposition, matrix exponential, unitary conjugation.
//! - [`spectral`]: lifting symmetric functions to spectral functions, and checks for symmetry,
//!   unitary invariance, diagonal restriction and segment convexity.
//! - [`logsumexp`]: log-sum-exp, softmax, analytic and finite-difference Hessians, Laplacians,
//!   PSD certificates.
//! - [`check`] and [`campaign`]: log-space inequality checks and seeded, reproducible
//!   verification campaigns with JSON reports.
//! - [`cli`]: the `gtcheck` command-line front end.

#![forbid(unsafe_code)]

pub mod campaign;
pub mod check;
pub mod cli;
pub mod error;
pub mod hermitian;
pub mod logsumexp;
pub mod matrix_io;
pub mod spectral;

pub use campaign::{run_campaign, CampaignConfig, CampaignReport, CheckKind};
pub use check::{convexity_check, gt_strong_check, gt_weak_check, log_trace_exp, CheckResult};
pub use error::{Error, Result};
pub use hermitian::{
    conjugate, eigh, eigvalsh, matrix_exp, random_hermitian, random_unitary, trace_re,
    validate_hermitian, Complex64, EigenDecomposition, EnsembleKind, EnsembleSpec,
    HermitianMatrix, UnitaryMatrix,
};
pub use logsumexp::{
    complete_graph_laplacian, dkd_factorization, hessian_fd, lse, lse_hessian_analytic,
    psd_certify, softmax, weighted_laplacian, PsdCertificate, RealSymmetricMatrix,
    SoftmaxWeights,
};
pub use matrix_io::{load_matrix, save_matrix};
pub use spectral::{
    check_davis_restriction, check_symmetry, check_unitary_invariance, lift_eval,
    midpoint_convexity_residual, SpectralFunction, SymmetricScalarFunction,
};
