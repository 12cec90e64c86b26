//! Single-trial trace inequality and convexity checks, all carried out in log space.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hermitian::{eigh, HermitianMatrix};
use crate::logsumexp::lse_unchecked;
use crate::spectral::{lift_eval, segment_convexity_residual, SpectralFunction};

/// Outcome of one inequality or invariance trial.
///
/// `pass` holds iff `slack >= -tol * max(1, |rhs|)`. A NaN slack never passes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tol: f64,
    pub pass: bool,
    pub trial_seed: u64,
}

impl CheckResult {
    pub fn new(lhs: f64, rhs: f64, slack: f64, tol: f64) -> Self {
        CheckResult {
            lhs,
            rhs,
            slack,
            tol,
            pass: slack >= -tol * rhs.abs().max(1.0),
            trial_seed: 0,
        }
    }

    /// `lhs <= rhs`, with slack `rhs - lhs`.
    pub fn upper_bound(lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::new(lhs, rhs, rhs - lhs, tol)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.trial_seed = seed;
        self
    }
}

/// `log tr exp(A)`, computed as log-sum-exp of the spectrum so it never overflows.
pub fn log_trace_exp(a: &HermitianMatrix) -> Result<f64> {
    lift_eval(&SpectralFunction::log_trace_exp(), a)
}

/// `tr exp(A + B) <= tr exp(A) · tr exp(B)` in the form
/// `log tr exp(A + B) <= log tr exp(A) + log tr exp(B)`.
pub fn gt_weak_check(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<CheckResult> {
    let sum = a.add(b)?;
    let lhs = log_trace_exp(&sum)?;
    let rhs = log_trace_exp(a)? + log_trace_exp(b)?;
    Ok(CheckResult::upper_bound(lhs, rhs, tol))
}

/// Midpoint convexity of `log tr exp`: slack is `(F(A) + F(B)) / 2 - F((A + B) / 2)`.
pub fn convexity_check(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<CheckResult> {
    convexity_check_at(&SpectralFunction::log_trace_exp(), a, b, 0.5, tol)
}

/// Convexity of `f` at the point `(1 - t) A + t B`; `lhs` is the value there, `rhs` the chord.
pub fn convexity_check_at(
    f: &SpectralFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    t: f64,
    tol: f64,
) -> Result<CheckResult> {
    let (on_segment, chord) = segment_convexity_residual(f, a, b, t)?;
    Ok(CheckResult::upper_bound(on_segment, chord, tol))
}

/// The product form `tr exp(A + B) <= tr(exp(A) exp(B))`, which is stronger than the
/// trace-product form checked by [`gt_weak_check`].
///
/// Both exponentials are shifted by their largest eigenvalue before multiplying, so the
/// right-hand side `λmax(A) + λmax(B) + log tr(exp(A - λmax) exp(B - λmax))` stays finite.
pub fn gt_strong_check(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<CheckResult> {
    let sum = a.add(b)?;
    let lhs = log_trace_exp(&sum)?;
    let ea = eigh(a)?;
    let eb = eigh(b)?;
    let (sa, sb) = (ea.max_eigenvalue(), eb.max_eigenvalue());
    let x = ea.map_spectrum(|l| (l - sa).exp());
    let y = eb.map_spectrum(|l| (l - sb).exp());
    let (x, y) = (x.as_matrix(), y.as_matrix());
    let n = a.n();
    let mut trace = 0.0;
    for i in 0..n {
        for j in 0..n {
            trace += (x[(i, j)] * y[(j, i)]).re;
        }
    }
    let rhs = sa + sb + trace.ln();
    Ok(CheckResult::upper_bound(lhs, rhs, tol))
}

/// `log tr exp(A) - λmax(A)`, which lies in `[0, log n]`.
pub fn log_trace_exp_excess(a: &HermitianMatrix) -> Result<f64> {
    let eig = eigh(a)?;
    let top = eig.max_eigenvalue();
    Ok(lse_unchecked(eig.eigenvalues()) - top)
}
