//! `gtcheck`: command-line front end.
//!
//! Exit status is 0 when every check passes, 1 when any check is violated (the report is still
//! written), and 2 for usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::campaign::{random_vector, run_campaign, trial_seed, CampaignConfig, CheckKind};
use crate::check::{convexity_check, gt_weak_check, CheckResult};
use crate::error::{Error, Result};
use crate::hermitian::{rng_from_seed, EnsembleKind, EnsembleSpec};
use crate::logsumexp::{
    dkd_factorization, hessian_fd, lse_hessian_analytic, psd_certify_default, softmax,
    RealSymmetricMatrix, HESSIAN_FD_STEP,
};
use crate::matrix_io::load_matrix;
use crate::spectral::{
    check_davis_restriction, check_symmetry_seeded, lift_eval, SpectralFunction,
    SymmetricScalarFunction,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Max-entry error accepted between the analytic and finite-difference Hessians.
pub const FD_HESSIAN_TOL: f64 = 1e-6;
/// Half-width of the box `[-r, r]^n` the finite-difference comparison samples from.
pub const FD_SAMPLE_RADIUS: f64 = 10.0;
/// Off-diagonal agreement required of the `D K D` factorization.
pub const DKD_OFFDIAG_TOL: f64 = 1e-14;
/// Permutations sampled per vector by `davis-check` when the dimension exceeds 5.
pub const SYMMETRY_PERMUTATIONS: usize = 100;

#[derive(Debug, Parser)]
#[command(name = "gtcheck", version, about = "Numerical certification of the Golden-Thompson inequality and log-sum-exp convexity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// tr exp(A+B) <= tr exp(A) tr exp(B): a campaign, or one check with --matrix/--matrix-b
    VerifyGt {
        #[command(flatten)]
        campaign: CampaignArgs,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Convexity of the lifted function (log tr exp by default) along random segments
    VerifyConvexity {
        #[command(flatten)]
        campaign: CampaignArgs,
        #[command(flatten)]
        pair: PairArgs,
        /// lse, max, min, sum or pnorm:<p>
        #[arg(long = "fn")]
        function: Option<String>,
    },
    /// Log-sum-exp Hessian: PSD campaign plus analytic vs finite-difference comparison
    HessianCheck {
        #[command(flatten)]
        campaign: CampaignArgs,
        /// Check a single point instead of sampling, e.g. "0,1.5,-2"
        #[arg(long)]
        x: Option<String>,
    },
    /// Unitary invariance of a lifted function plus its agreement on diagonal matrices
    DavisCheck {
        #[command(flatten)]
        campaign: CampaignArgs,
        /// lse, max, min, sum or pnorm:<p>
        #[arg(long = "fn", default_value = "lse")]
        function: String,
    },
    /// Compare the Hessian with the unweighted D K D factorization at a point
    ErratumDkd {
        /// Comma-separated point, e.g. "0,1.0986123"
        #[arg(long)]
        x: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a spectral function on a matrix file
    Eval {
        #[arg(long = "fn", default_value = "lse")]
        function: String,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct CampaignArgs {
    /// Matrix or vector dimension
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// gue, goe or diag
    #[arg(long, default_value = "gue")]
    ensemble: String,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Master seed; required whenever anything is sampled
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PairArgs {
    #[arg(long, requires = "matrix_b")]
    matrix: Option<PathBuf>,
    #[arg(long = "matrix-b", requires = "matrix")]
    matrix_b: Option<PathBuf>,
}

impl CampaignArgs {
    fn config(&self, kind: CheckKind) -> Result<CampaignConfig> {
        let seed = self.seed.ok_or_else(|| {
            Error::InvalidArgument("--seed is required for sampling subcommands".into())
        })?;
        let n = self
            .dim
            .ok_or_else(|| Error::InvalidArgument("--dim is required for campaigns".into()))?;
        let kind_of_ensemble: EnsembleKind = self.ensemble.parse()?;
        let ensemble = EnsembleSpec::new(kind_of_ensemble, n, self.scale, seed)?;
        let config = CampaignConfig::new(kind, ensemble, self.trials, self.tol).parallel(self.parallel);
        Ok(config)
    }
}

/// Parses `argv` (program name first), runs the subcommand, and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match dispatch(cli.command) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_VIOLATION,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command) -> Result<bool> {
    match command {
        Command::VerifyGt { campaign, pair } => match pair_paths(&pair) {
            Some((a, b)) => single_pair("gt_weak", a, b, campaign.tol, campaign.out.as_deref(), |a, b, tol| gt_weak_check(a, b, tol)),
            None => plain_campaign(campaign.config(CheckKind::GtWeak)?, campaign.out.as_deref()),
        },
        Command::VerifyConvexity {
            campaign,
            pair,
            function,
        } => match pair_paths(&pair) {
            Some((a, b)) => {
                let f = SpectralFunction::lift(SymmetricScalarFunction::builtin(
                    function.as_deref().unwrap_or("lse"),
                )?);
                single_pair("midpoint_convexity", a, b, campaign.tol, campaign.out.as_deref(), |a, b, tol| {
                    if function.is_none() {
                        convexity_check(a, b, tol)
                    } else {
                        crate::check::convexity_check_at(&f, a, b, 0.5, tol)
                    }
                })
            }
            None => {
                let mut config = campaign.config(CheckKind::MidpointConvexity)?;
                config.function = function;
                plain_campaign(config, campaign.out.as_deref())
            }
        },
        Command::HessianCheck { campaign, x } => match x {
            Some(x) => hessian_at_point(&parse_vector(&x)?, campaign.out.as_deref()),
            None => hessian_campaign(&campaign),
        },
        Command::DavisCheck { campaign, function } => davis_campaign(&campaign, function),
        Command::ErratumDkd { x, out } => erratum(&parse_vector(&x)?, out.as_deref()),
        Command::Eval {
            function,
            matrix,
            out,
        } => {
            let f = SpectralFunction::lift(SymmetricScalarFunction::builtin(&function)?);
            let a = load_matrix(&matrix)?;
            let value = lift_eval(&f, &a)?;
            println!("{function}({}) = {value}", matrix.display());
            write_json(out.as_deref(), &json!({"fn": function, "n": a.n(), "value": value}))?;
            Ok(true)
        }
    }
}

fn pair_paths(pair: &PairArgs) -> Option<(&Path, &Path)> {
    Some((pair.matrix.as_deref()?, pair.matrix_b.as_deref()?))
}

/// Comma-separated decimal literals.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let values = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("`{}` is not a number", t.trim())))
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    Ok(values)
}

fn write_json(out: Option<&Path>, value: &impl Serialize) -> Result<()> {
    let Some(path) = out else { return Ok(()) };
    let text = serde_json::to_string_pretty(value).expect("serializable report");
    fs::write(path, text + "\n").map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn single_pair(
    name: &str,
    a: &Path,
    b: &Path,
    tol: f64,
    out: Option<&Path>,
    check: impl Fn(&crate::HermitianMatrix, &crate::HermitianMatrix, f64) -> Result<CheckResult>,
) -> Result<bool> {
    let a = load_matrix(a)?;
    let b = load_matrix(b)?;
    let r = check(&a, &b, tol)?;
    println!(
        "{name}: lhs = {}, rhs = {}, slack = {:e}, tol = {:e}: {}",
        r.lhs,
        r.rhs,
        r.slack,
        r.tol,
        verdict(r.pass)
    );
    let mut value = serde_json::to_value(r).expect("serializable");
    value["check"] = json!(name);
    write_json(out, &value)?;
    Ok(r.pass)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn print_report(report: &crate::CampaignReport) {
    println!(
        "{} on {} n={} scale={} seed={}: {} trials, {} violations, worst slack {:e} (trial seed {:#018x}), {:.3}s: {}",
        report.check_kind,
        report.ensemble.kind,
        report.ensemble.n,
        report.ensemble.scale,
        report.ensemble.seed,
        report.trials,
        report.violations,
        report.worst_slack,
        report.worst_trial_seed,
        report.wall_time_s,
        verdict(report.passed())
    );
}

fn plain_campaign(config: CampaignConfig, out: Option<&Path>) -> Result<bool> {
    let report = run_campaign(&config)?;
    print_report(&report);
    write_json(out, &report)?;
    Ok(report.passed())
}

fn seed_stream(master: u64, i: u64) -> u64 {
    // Offset stream so these samples are independent of the campaign's own trial objects.
    trial_seed(trial_seed(master, i), 0x5EED)
}

fn hessian_campaign(args: &CampaignArgs) -> Result<bool> {
    let config = args.config(CheckKind::HessianPsd)?;
    let report = run_campaign(&config)?;
    print_report(&report);

    let n = config.ensemble.n;
    let mut max_error = 0.0f64;
    let mut worst_seed = 0u64;
    let mut fd_violations = 0u64;
    for i in 0..config.trials {
        let seed = seed_stream(config.ensemble.seed, i);
        let mut rng = rng_from_seed(seed);
        let x: Vec<f64> = (0..n)
            .map(|_| rng.random_range(-FD_SAMPLE_RADIUS..=FD_SAMPLE_RADIUS))
            .collect();
        let err = lse_hessian_analytic(&x)?.max_abs_diff(&hessian_fd(&x, HESSIAN_FD_STEP)?)?;
        if !(err <= FD_HESSIAN_TOL) {
            fd_violations += 1;
        }
        if err > max_error || i == 0 {
            max_error = err;
            worst_seed = seed;
        }
    }
    println!(
        "analytic vs finite-difference Hessian (h = {HESSIAN_FD_STEP:e}, x in [-{FD_SAMPLE_RADIUS}, {FD_SAMPLE_RADIUS}]^{n}): max error {max_error:e}, {fd_violations} above {FD_HESSIAN_TOL:e}: {}",
        verdict(fd_violations == 0)
    );

    let mut value = serde_json::to_value(&report).expect("serializable");
    value["fd_check"] = json!({
        "trials": config.trials,
        "h": HESSIAN_FD_STEP,
        "tol": FD_HESSIAN_TOL,
        "violations": fd_violations,
        "max_error": max_error,
        "worst_seed": worst_seed,
    });
    write_json(args.out.as_deref(), &value)?;
    Ok(report.passed() && fd_violations == 0)
}

fn hessian_at_point(x: &[f64], out: Option<&Path>) -> Result<bool> {
    let h = lse_hessian_analytic(x)?;
    let fd = hessian_fd(x, HESSIAN_FD_STEP)?;
    let err = h.max_abs_diff(&fd)?;
    let cert = psd_certify_default(&h)?;
    println!("analytic Hessian:\n{}", format_matrix(&h));
    println!("finite-difference Hessian (h = {HESSIAN_FD_STEP:e}):\n{}", format_matrix(&fd));
    println!("max |analytic - fd| = {err:e} (tol {FD_HESSIAN_TOL:e}): {}", verdict(err <= FD_HESSIAN_TOL));
    println!(
        "PSD: min eigenvalue {:e}, nullspace dim {}, tol {:e}: {}",
        cert.min_eigenvalue,
        cert.nullspace_dim,
        cert.tol,
        verdict(cert.pass)
    );
    write_json(
        out,
        &json!({
            "x": x,
            "hessian": h.rows(),
            "hessian_fd": fd.rows(),
            "fd_max_error": err,
            "fd_tol": FD_HESSIAN_TOL,
            "min_eigenvalue": cert.min_eigenvalue,
            "nullspace_dim": cert.nullspace_dim,
            "psd_tol": cert.tol,
            "psd_pass": cert.pass,
        }),
    )?;
    Ok(err <= FD_HESSIAN_TOL && cert.pass)
}

fn davis_campaign(args: &CampaignArgs, function: String) -> Result<bool> {
    let f = SymmetricScalarFunction::builtin(&function)?;
    let mut config = args.config(CheckKind::UnitaryInvariance)?;
    config.function = Some(function.clone());
    let report = run_campaign(&config)?;
    print_report(&report);

    let mut restriction_violations = 0u64;
    let mut restriction_worst = f64::INFINITY;
    let mut symmetry_violations = 0u64;
    let mut symmetry_worst = f64::INFINITY;
    for i in 0..config.trials {
        let seed = seed_stream(config.ensemble.seed, i);
        let x = random_vector(&config.ensemble.with_seed(seed))?;
        let r = check_davis_restriction(&f, &x, config.tol)?;
        restriction_violations += u64::from(!r.pass);
        restriction_worst = restriction_worst.min(r.slack);
        let s = check_symmetry_seeded(&f, &x, SYMMETRY_PERMUTATIONS, config.tol, seed)?;
        symmetry_violations += u64::from(!s.pass);
        symmetry_worst = symmetry_worst.min(s.slack);
    }
    println!(
        "diagonal restriction of {function}: {restriction_violations} violations, worst slack {restriction_worst:e}: {}",
        verdict(restriction_violations == 0)
    );
    println!(
        "permutation symmetry of {function}: {symmetry_violations} violations, worst slack {symmetry_worst:e}: {}",
        verdict(symmetry_violations == 0)
    );

    let mut value = serde_json::to_value(&report).expect("serializable");
    value["restriction_check"] = json!({
        "trials": config.trials,
        "violations": restriction_violations,
        "worst_slack": restriction_worst,
    });
    value["symmetry_check"] = json!({
        "trials": config.trials,
        "violations": symmetry_violations,
        "worst_slack": symmetry_worst,
    });
    write_json(args.out.as_deref(), &value)?;
    Ok(report.passed() && restriction_violations == 0 && symmetry_violations == 0)
}

/// Result of comparing the Hessian with `D K D` at one point.
#[derive(Debug, Clone, Serialize)]
pub struct DkdComparison {
    pub x: Vec<f64>,
    pub softmax: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
    pub dkd: Vec<Vec<f64>>,
    /// `|DKD_ii - H_ii|` per diagonal entry.
    pub diag_diff: Vec<f64>,
    pub max_diag_diff: f64,
    pub max_offdiag_diff: f64,
    pub softmax_uniform: bool,
}

pub fn compare_dkd(x: &[f64]) -> Result<DkdComparison> {
    let h = lse_hessian_analytic(x)?;
    let dkd = dkd_factorization(x)?;
    let p = softmax(x)?;
    let (max_diag_diff, max_offdiag_diff) = dkd.max_abs_diff_split(&h)?;
    let diag_diff = h
        .diagonal()
        .iter()
        .zip(dkd.diagonal())
        .map(|(a, b)| (a - b).abs())
        .collect();
    Ok(DkdComparison {
        x: x.to_vec(),
        softmax: p.as_slice().to_vec(),
        hessian: h.rows(),
        dkd: dkd.rows(),
        diag_diff,
        max_diag_diff,
        max_offdiag_diff,
        softmax_uniform: p.is_uniform(),
    })
}

fn erratum(x: &[f64], out: Option<&Path>) -> Result<bool> {
    let c = compare_dkd(x)?;
    let show = |rows: &[Vec<f64>]| format_matrix(&RealSymmetricMatrix::from_rows(rows).expect("symmetric"));
    println!("softmax p = {:?}", c.softmax);
    println!("Hessian H = diag(p) - p p^T:\n{}", show(&c.hessian));
    println!("D K D (D = diag(p), K = complete-graph Laplacian):\n{}", show(&c.dkd));
    println!("max off-diagonal |DKD - H| = {:e}", c.max_offdiag_diff);
    println!("diagonal |DKD - H| = {:?}", c.diag_diff);
    println!("max diagonal |DKD - H| = {}", c.max_diag_diff);
    println!(
        "softmax uniform: {}; diagonal {}",
        c.softmax_uniform,
        if c.max_diag_diff == 0.0 { "agrees" } else { "differs" }
    );
    write_json(out, &c)?;
    Ok(c.max_offdiag_diff <= DKD_OFFDIAG_TOL)
}

fn format_matrix(m: &RealSymmetricMatrix) -> String {
    m.rows()
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>12.8}")).collect();
            format!("  [{}]", cells.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}
