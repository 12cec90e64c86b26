//! A randomized Golden-Thompson campaign: `log tr exp(A+B) <= log tr exp A + log tr exp B`
//! over sampled GUE and GOE pairs, plus the convexity of `log tr exp` and the PSD check of
//! the log-sum-exp Hessian. Reports are deterministic in the seed.
//!
//! Run with `cargo run --release --example golden_thompson_campaign`.

use gt_davis::{run_campaign, CampaignConfig, CheckKind, EnsembleKind, EnsembleSpec};

fn main() -> gt_davis::Result<()> {
    for kind in [CheckKind::GtWeak, CheckKind::MidpointConvexity, CheckKind::HessianPsd] {
        for ensemble in [EnsembleKind::Gue, EnsembleKind::Goe] {
            for n in [2, 8] {
                let spec = EnsembleSpec::new(ensemble, n, 1.0, 42)?;
                let report = run_campaign(&CampaignConfig::new(kind, spec, 2000, 1e-10).parallel(true))?;
                println!(
                    "{:<19} {} n={n:<2} violations {} worst slack {:.3e} ({:.2}s)",
                    report.check_kind.as_str(),
                    ensemble,
                    report.violations,
                    report.worst_slack,
                    report.wall_time_s
                );
            }
        }
    }

    let spec = EnsembleSpec::new(EnsembleKind::Gue, 4, 1.0, 42)?;
    let report = run_campaign(&CampaignConfig::new(CheckKind::GtWeak, spec, 100, 1e-10))?;
    println!("\nJSON report:\n{}", report.to_json());
    Ok(())
}
