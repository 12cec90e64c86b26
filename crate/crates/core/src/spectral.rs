//! Spectral lifts of symmetric functions.
//!
//! A function `f` of `n` real variables that is invariant under permutations lifts to a
//! function `F(A) = f(λ(A))` of `n x n` Hermitian matrices, which is then invariant under
//! unitary conjugation. `F` is convex exactly when `f` is. The checks here probe each piece of
//! that statement numerically: symmetry of `f`, unitary invariance of `F`, agreement of `F`
//! with `f` on diagonal matrices, and convexity of `F` along segments.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::hermitian::{conjugate, eigvalsh, rng_from_seed, HermitianMatrix, UnitaryMatrix};
use crate::logsumexp::lse_unchecked;

/// Largest dimension for which [`check_symmetry`] enumerates every permutation.
pub const EXHAUSTIVE_PERMUTATION_LIMIT: usize = 5;

/// Segment points used by [`worst_segment_residual`].
pub const SEGMENT_POINTS: [f64; 3] = [0.25, 0.5, 0.75];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Any,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    Concave,
    Neither,
}

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A permutation-invariant function of a real vector.
///
/// Evaluators must be pure: no side effects, same output for the same input. Symmetry is a
/// registration requirement that [`check_symmetry`] can probe but not enforce.
#[derive(Clone)]
pub struct SymmetricScalarFunction {
    name: String,
    arity: Arity,
    convexity: Convexity,
    eval: Evaluator,
}

impl fmt::Debug for SymmetricScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymmetricScalarFunction")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("convexity", &self.convexity)
            .finish_non_exhaustive()
    }
}

impl SymmetricScalarFunction {
    pub fn new(
        name: impl Into<String>,
        arity: Arity,
        convexity: Convexity,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SymmetricScalarFunction {
            name: name.into(),
            arity,
            convexity,
            eval: Arc::new(eval),
        }
    }

    /// `log Σ exp(x_i)`.
    pub fn lse() -> Self {
        Self::new("lse", Arity::Any, Convexity::Convex, lse_unchecked)
    }

    pub fn max() -> Self {
        Self::new("max", Arity::Any, Convexity::Convex, |x| {
            x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        })
    }

    /// Concave; serves as the negative control for convexity probes.
    pub fn min() -> Self {
        Self::new("min", Arity::Any, Convexity::Concave, |x| {
            x.iter().copied().fold(f64::INFINITY, f64::min)
        })
    }

    /// Linear, hence both convex and concave; registered as convex.
    pub fn sum() -> Self {
        Self::new("sum", Arity::Any, Convexity::Convex, |x| x.iter().sum())
    }

    /// `(Σ |x_i|^p)^(1/p)` for `p >= 1`.
    pub fn pnorm(p: f64) -> Result<Self> {
        if !(p >= 1.0) || p.is_nan() {
            return Err(Error::InvalidArgument(format!("pnorm needs p >= 1, got {p}")));
        }
        Ok(Self::new(format!("pnorm:{p}"), Arity::Any, Convexity::Convex, move |x| {
            pnorm(x, p)
        }))
    }

    /// Looks up a built-in by name: `lse`, `max`, `min`, `sum`, or `pnorm:<p>`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "lse" => Ok(Self::lse()),
            "max" => Ok(Self::max()),
            "min" => Ok(Self::min()),
            "sum" => Ok(Self::sum()),
            _ => {
                let p = name
                    .strip_prefix("pnorm:")
                    .ok_or_else(|| Error::UnknownFunction(name.to_string()))?;
                let p: f64 = p
                    .parse()
                    .map_err(|_| Error::UnknownFunction(name.to_string()))?;
                Self::pnorm(p)
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn convexity(&self) -> Convexity {
        self.convexity
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check_arity(x.len())?;
        Ok((self.eval)(x))
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        match self.arity {
            Arity::Fixed(expected) if expected != n => Err(Error::ArityMismatch {
                name: self.name.clone(),
                expected,
                found: n,
            }),
            _ => Ok(()),
        }
    }
}

fn pnorm(x: &[f64], p: f64) -> f64 {
    let scale = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return scale;
    }
    scale * x.iter().map(|v| (v.abs() / scale).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `F(A) = f(λ(A))`, a unitarily invariant function of Hermitian matrices.
#[derive(Debug, Clone)]
pub struct SpectralFunction {
    base: SymmetricScalarFunction,
}

impl SpectralFunction {
    pub fn lift(base: SymmetricScalarFunction) -> Self {
        SpectralFunction { base }
    }

    /// `log tr exp`.
    pub fn log_trace_exp() -> Self {
        Self::lift(SymmetricScalarFunction::lse())
    }

    pub fn base(&self) -> &SymmetricScalarFunction {
        &self.base
    }
}

/// Evaluates `F` on the ascending eigenvalues of `a`.
pub fn lift_eval(f: &SpectralFunction, a: &HermitianMatrix) -> Result<f64> {
    f.base.check_arity(a.n())?;
    let eigenvalues = eigvalsh(a)?;
    f.base.evaluate(&eigenvalues)
}

fn deviation_result(reference: f64, worst_value: f64, deviation: f64, tol: f64) -> CheckResult {
    CheckResult::new(worst_value, reference, -deviation, tol)
}

/// Compares `f(x)` with `f(σ(x))`: over all permutations when `x.len() <= 5`, otherwise over
/// `n_perms` uniformly sampled permutations (seed 0).
pub fn check_symmetry(
    f: &SymmetricScalarFunction,
    x: &[f64],
    n_perms: usize,
    tol: f64,
) -> Result<CheckResult> {
    check_symmetry_seeded(f, x, n_perms, tol, 0)
}

pub fn check_symmetry_seeded(
    f: &SymmetricScalarFunction,
    x: &[f64],
    n_perms: usize,
    tol: f64,
    seed: u64,
) -> Result<CheckResult> {
    if n_perms == 0 {
        return Err(Error::InvalidArgument("n_perms must be >= 1".into()));
    }
    let reference = f.evaluate(x)?;
    let mut worst_value = reference;
    let mut worst = 0.0f64;
    let mut record = |y: &[f64]| -> Result<()> {
        let v = f.evaluate(y)?;
        let d = (v - reference).abs();
        // NaN counts as the worst possible deviation.
        if d > worst || d.is_nan() {
            worst = if d.is_nan() { f64::INFINITY } else { d };
            worst_value = v;
        }
        Ok(())
    };
    if x.len() <= EXHAUSTIVE_PERMUTATION_LIMIT {
        let mut idx: Vec<usize> = (0..x.len()).collect();
        loop {
            let y: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
            record(&y)?;
            if !next_permutation(&mut idx) {
                break;
            }
        }
    } else {
        let mut rng = rng_from_seed(seed);
        let mut y = x.to_vec();
        for _ in 0..n_perms {
            y.shuffle(&mut rng);
            record(&y)?;
        }
    }
    Ok(deviation_result(reference, worst_value, worst, tol).with_seed(seed))
}

/// Lexicographic successor; returns false after the last permutation.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Passes when `|F(U^H A U) - F(A)| <= tol * max(1, |F(A)|)`.
pub fn check_unitary_invariance(
    f: &SpectralFunction,
    a: &HermitianMatrix,
    u: &UnitaryMatrix,
    tol: f64,
) -> Result<CheckResult> {
    let conjugated = conjugate(a, u)?;
    let reference = lift_eval(f, a)?;
    let moved = lift_eval(f, &conjugated)?;
    Ok(deviation_result(reference, moved, (moved - reference).abs(), tol))
}

/// `(1 - t) F(A) + t F(B) - F((1 - t) A + t B)`; non-negative for convex `F`.
pub fn segment_convexity_residual(
    f: &SpectralFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    t: f64,
) -> Result<(f64, f64)> {
    let point = a.lerp(b, t)?;
    let chord = (1.0 - t) * lift_eval(f, a)? + t * lift_eval(f, b)?;
    let on_segment = lift_eval(f, &point)?;
    Ok((on_segment, chord))
}

/// `(F(A) + F(B)) / 2 - F((A + B) / 2)`.
pub fn midpoint_convexity_residual(
    f: &SpectralFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<f64> {
    let mid = a.midpoint(b)?;
    let chord = 0.5 * (lift_eval(f, a)? + lift_eval(f, b)?);
    Ok(chord - lift_eval(f, &mid)?)
}

/// The most negative segment residual over [`SEGMENT_POINTS`], as a check at `tol`.
pub fn worst_segment_residual(
    f: &SpectralFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<CheckResult> {
    let mut worst: Option<CheckResult> = None;
    for t in SEGMENT_POINTS {
        let (on_segment, chord) = segment_convexity_residual(f, a, b, t)?;
        let r = CheckResult::new(on_segment, chord, chord - on_segment, tol);
        if worst.as_ref().is_none_or(|w| r.slack < w.slack) {
            worst = Some(r);
        }
    }
    Ok(worst.expect("non-empty segment points"))
}

/// Lifts `f`, evaluates it on `diag(x)`, and compares with `f(x)`.
pub fn check_davis_restriction(
    f: &SymmetricScalarFunction,
    x: &[f64],
    tol: f64,
) -> Result<CheckResult> {
    let direct = f.evaluate(x)?;
    let d = HermitianMatrix::from_real_diagonal(x)?;
    let lifted = lift_eval(&SpectralFunction::lift(f.clone()), &d)?;
    Ok(deviation_result(direct, lifted, (lifted - direct).abs(), tol))
}
