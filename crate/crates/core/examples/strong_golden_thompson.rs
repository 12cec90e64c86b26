//! The product form `tr exp(A+B) <= tr(e^A e^B)` is stronger than the trace-product form;
//! it is tight for commuting matrices. Both are evaluated in log space.
//!
//! Run with `cargo run --release --example strong_golden_thompson`.

use gt_davis::{
    gt_strong_check, gt_weak_check, random_hermitian, run_campaign, CampaignConfig, CheckKind,
    EnsembleKind, EnsembleSpec, HermitianMatrix,
};

fn main() -> gt_davis::Result<()> {
    let spec = EnsembleSpec::new(EnsembleKind::Gue, 6, 2.0, 1)?;
    let a = random_hermitian(&spec)?;
    let b = random_hermitian(&spec.with_seed(2))?;
    let weak = gt_weak_check(&a, &b, 1e-10)?;
    let strong = gt_strong_check(&a, &b, 1e-10)?;
    println!("log tr exp(A+B)       = {:.12}", weak.lhs);
    println!("log tr(e^A e^B)       = {:.12}", strong.rhs);
    println!("log tr e^A + log tr e^B = {:.12}", weak.rhs);

    let d1 = HermitianMatrix::from_real_diagonal(&[0.5, 2.0, -1.0])?;
    let d2 = HermitianMatrix::from_real_diagonal(&[1.0, -3.0, 0.25])?;
    println!("commuting pair: strong slack {:.2e}", gt_strong_check(&d1, &d2, 1e-10)?.slack);

    let report = run_campaign(&CampaignConfig::new(CheckKind::GtStrong, spec, 2000, 1e-10))?;
    println!("GT_STRONG campaign: {} violations, worst slack {:.3e}", report.violations, report.worst_slack);
    Ok(())
}
