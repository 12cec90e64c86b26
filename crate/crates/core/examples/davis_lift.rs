//! Spectral lifts F(A) = f(λ(A)) of symmetric functions: they restrict to f on diagonal
//! matrices, are unitarily invariant, and inherit convexity from f. The concave `min`
//! shows what a failed convexity check looks like.
//!
//! Run with `cargo run --example davis_lift`.

use gt_davis::spectral::{check_davis_restriction, worst_segment_residual};
use gt_davis::{
    check_symmetry, check_unitary_invariance, lift_eval, random_hermitian, random_unitary,
    EnsembleKind, EnsembleSpec, HermitianMatrix, SpectralFunction, SymmetricScalarFunction,
};

fn main() -> gt_davis::Result<()> {
    let spec = EnsembleSpec::new(EnsembleKind::Gue, 4, 1.0, 2024)?;
    let a = random_hermitian(&spec)?;
    let b = random_hermitian(&spec.with_seed(2025))?;
    let u = random_unitary(4, 2026)?;
    let x = [0.3, -1.2, 2.5, 0.0];

    println!("{:<8} {:>12} {:>12} {:>12} {:>14}", "f", "F(A)", "restrict", "invariance", "convex slack");
    for name in ["lse", "max", "sum", "pnorm:2", "min"] {
        let f = SymmetricScalarFunction::builtin(name)?;
        assert!(check_symmetry(&f, &x, 100, 1e-12)?.pass);
        let lifted = SpectralFunction::lift(f.clone());
        let restriction = check_davis_restriction(&f, &x, 1e-12)?;
        let invariance = check_unitary_invariance(&lifted, &a, &u, 1e-10)?;
        let convexity = worst_segment_residual(&lifted, &a, &b, 1e-10)?;
        println!(
            "{:<8} {:>12.6} {:>12.1e} {:>12.1e} {:>14.6}{}",
            name,
            lift_eval(&lifted, &a)?,
            -restriction.slack,
            -invariance.slack,
            convexity.slack,
            if convexity.pass { "" } else { "  <- violation" }
        );
    }

    let d = HermitianMatrix::from_real_diagonal(&[1.0, -1.0])?;
    let lse = SpectralFunction::log_trace_exp();
    println!("lse on diag(1, -1) = {:.12} = log(e + 1/e)", lift_eval(&lse, &d)?);
    Ok(())
}
