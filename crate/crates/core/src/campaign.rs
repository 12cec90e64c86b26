//! Randomized verification campaigns.
//!
//! Trial `i` of a campaign with master seed `s` uses the seed [`trial_seed`]`(s, i)`, the
//! `i`-th output of a SplitMix64 generator whose state starts at `s`. Objects inside a trial
//! (the two matrices, the unitary, ...) get further seeds `trial_seed(trial, 0)`,
//! `trial_seed(trial, 1)`, and so on. Seeds depend only on `(s, i)`, and aggregation is a
//! count plus a minimum with ties going to the lowest trial index, so the report does not
//! depend on whether trials run in parallel.

use std::time::Instant;

use rand_distr::{Distribution, Normal, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{gt_strong_check, gt_weak_check, CheckResult};
use crate::error::{Error, Result};
use crate::hermitian::{
    random_hermitian, random_unitary, rng_from_seed, EnsembleKind, EnsembleSpec, GENERATOR_ID,
};
use crate::logsumexp::{lse_hessian_analytic, psd_certify_default};
use crate::spectral::{
    check_unitary_invariance, worst_segment_residual, SpectralFunction, SymmetricScalarFunction,
};

const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function applied to `state + GAMMA`.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(SPLITMIX_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_mul(SPLITMIX_GAMMA)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckKind {
    /// `tr exp(A+B) <= tr exp(A) tr exp(B)` on two sampled matrices.
    #[serde(rename = "GT_WEAK")]
    GtWeak,
    /// Convexity of a lifted function at `t ∈ {1/4, 1/2, 3/4}` between two sampled matrices.
    #[serde(rename = "MIDPOINT_CONVEXITY")]
    MidpointConvexity,
    /// Minimum eigenvalue of the log-sum-exp Hessian at a sampled vector.
    #[serde(rename = "HESSIAN_PSD")]
    HessianPsd,
    /// `F(U^H A U) = F(A)` for a sampled matrix and Haar unitary.
    #[serde(rename = "UNITARY_INVARIANCE")]
    UnitaryInvariance,
    /// `tr exp(A+B) <= tr(exp(A) exp(B))`. A stronger statement than `GT_WEAK`; never run
    /// unless requested.
    #[serde(rename = "GT_STRONG")]
    GtStrong,
}

impl CheckKind {
    /// The name used in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::GtWeak => "GT_WEAK",
            CheckKind::MidpointConvexity => "MIDPOINT_CONVEXITY",
            CheckKind::HessianPsd => "HESSIAN_PSD",
            CheckKind::UnitaryInvariance => "UNITARY_INVARIANCE",
            CheckKind::GtStrong => "GT_STRONG",
        }
    }

    fn takes_function(self) -> bool {
        matches!(self, CheckKind::MidpointConvexity | CheckKind::UnitaryInvariance)
    }
}

impl std::fmt::Display for CheckKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub check_kind: CheckKind,
    /// The seed here is the master seed.
    pub ensemble: EnsembleSpec,
    pub trials: u64,
    pub tol: f64,
    pub parallel: bool,
    /// Built-in function name for `MIDPOINT_CONVEXITY` and `UNITARY_INVARIANCE`; `lse` when
    /// absent.
    pub function: Option<String>,
}

impl CampaignConfig {
    pub fn new(check_kind: CheckKind, ensemble: EnsembleSpec, trials: u64, tol: f64) -> Self {
        CampaignConfig {
            check_kind,
            ensemble,
            trials,
            tol,
            parallel: false,
            function: None,
        }
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn function(mut self, name: impl Into<String>) -> Self {
        self.function = Some(name.into());
        self
    }

    fn validate(&self) -> Result<()> {
        self.ensemble.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidArgument(format!("tol must be >= 0, got {}", self.tol)));
        }
        if self.function.is_some() && !self.check_kind.takes_function() {
            return Err(Error::InvalidArgument(format!(
                "{:?} campaigns do not take a function",
                self.check_kind
            )));
        }
        Ok(())
    }

    fn spectral_function(&self) -> Result<SpectralFunction> {
        let name = self.function.as_deref().unwrap_or("lse");
        Ok(SpectralFunction::lift(SymmetricScalarFunction::builtin(name)?))
    }
}

/// Aggregate of a campaign. Field names and order are the JSON report format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub check_kind: CheckKind,
    pub ensemble: EnsembleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    pub trials: u64,
    pub violations: u64,
    pub worst_slack: f64,
    pub worst_trial_seed: u64,
    pub tol: f64,
    pub generator_id: String,
    pub wall_time_s: f64,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the wall-clock field zeroed, for reproducibility comparisons.
    pub fn to_json_without_wall_time(&self) -> String {
        CampaignReport {
            wall_time_s: 0.0,
            ..self.clone()
        }
        .to_json()
    }
}

/// A vector with the marginal law of the ensemble's diagonal: `N(0, scale²)` entries for
/// GUE/GOE, uniform on `[-scale, scale]` for DIAGONAL-UNIFORM.
pub fn random_vector(spec: &EnsembleSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut rng = rng_from_seed(spec.seed);
    Ok(match spec.kind {
        EnsembleKind::Gue | EnsembleKind::Goe => {
            let d = Normal::new(0.0, spec.scale).expect("positive scale");
            (0..spec.n).map(|_| d.sample(&mut rng)).collect()
        }
        EnsembleKind::DiagonalUniform => {
            let d = Uniform::new_inclusive(-spec.scale, spec.scale).expect("positive scale");
            (0..spec.n).map(|_| d.sample(&mut rng)).collect()
        }
    })
}

struct TrialRunner {
    kind: CheckKind,
    ensemble: EnsembleSpec,
    tol: f64,
    function: SpectralFunction,
}

impl TrialRunner {
    fn run(&self, seed: u64) -> Result<CheckResult> {
        let sub = |k| self.ensemble.with_seed(trial_seed(seed, k));
        let result = match self.kind {
            CheckKind::GtWeak => {
                let a = random_hermitian(&sub(0))?;
                let b = random_hermitian(&sub(1))?;
                gt_weak_check(&a, &b, self.tol)?
            }
            CheckKind::GtStrong => {
                let a = random_hermitian(&sub(0))?;
                let b = random_hermitian(&sub(1))?;
                gt_strong_check(&a, &b, self.tol)?
            }
            CheckKind::MidpointConvexity => {
                let a = random_hermitian(&sub(0))?;
                let b = random_hermitian(&sub(1))?;
                worst_segment_residual(&self.function, &a, &b, self.tol)?
            }
            CheckKind::HessianPsd => {
                let x = random_vector(&sub(0))?;
                let cert = psd_certify_default(&lse_hessian_analytic(&x)?)?;
                CheckResult::upper_bound(0.0, cert.min_eigenvalue, self.tol)
            }
            CheckKind::UnitaryInvariance => {
                let a = random_hermitian(&sub(0))?;
                let u = random_unitary(self.ensemble.n, trial_seed(seed, 1))?;
                check_unitary_invariance(&self.function, &a, &u, self.tol)?
            }
        };
        Ok(result.with_seed(seed))
    }
}

/// Runs `config.trials` independent trials. The first failing trial (by index) aborts the
/// campaign with its seed attached.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    config.validate()?;
    let runner = TrialRunner {
        kind: config.check_kind,
        ensemble: config.ensemble,
        tol: config.tol,
        function: config.spectral_function()?,
    };
    let master = config.ensemble.seed;
    let start = Instant::now();
    let one = |i: u64| {
        let seed = trial_seed(master, i);
        runner.run(seed).map_err(|e| Error::Trial {
            seed,
            source: Box::new(e),
        })
    };
    let outcomes: Vec<Result<CheckResult>> = if config.parallel {
        (0..config.trials).into_par_iter().map(one).collect()
    } else {
        (0..config.trials).map(one).collect()
    };

    let mut violations = 0u64;
    let mut worst: Option<(f64, u64)> = None;
    for outcome in outcomes {
        let r = outcome?;
        if !r.pass {
            violations += 1;
        }
        let slack = if r.slack.is_nan() { f64::NEG_INFINITY } else { r.slack };
        if worst.is_none_or(|(w, _)| slack < w) {
            worst = Some((slack, r.trial_seed));
        }
    }
    let (worst_slack, worst_trial_seed) = worst.expect("trials >= 1");

    Ok(CampaignReport {
        check_kind: config.check_kind,
        ensemble: config.ensemble,
        function: config.function.clone(),
        trials: config.trials,
        violations,
        worst_slack,
        worst_trial_seed,
        tol: config.tol,
        generator_id: GENERATOR_ID.to_string(),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}
