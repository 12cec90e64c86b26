//! Hermitian spectral calculus: sample a GUE matrix, diagonalize it, build `exp(A)` from the
//! spectrum, and confirm that conjugation by a Haar unitary leaves trace and spectrum alone.
//!
//! Run with `cargo run --example spectral_calculus`.

use gt_davis::{
    conjugate, eigh, eigvalsh, matrix_exp, random_hermitian, random_unitary, trace_re,
    EnsembleKind, EnsembleSpec,
};

fn main() -> gt_davis::Result<()> {
    let spec = EnsembleSpec::new(EnsembleKind::Gue, 5, 1.0, 7)?;
    let a = random_hermitian(&spec)?;

    let eig = eigh(&a)?;
    println!("spectrum of A: {:.6?}", eig.eigenvalues());
    let err = (eig.reconstruct().as_matrix() - a.as_matrix()).norm();
    println!("‖V Λ V^H - A‖_F = {err:.2e}");

    let exp_a = matrix_exp(&a)?;
    let direct: f64 = eig.eigenvalues().iter().map(|l| l.exp()).sum();
    println!("tr exp(A) = {:.12} (sum of e^λ = {direct:.12})", trace_re(&exp_a));

    let u = random_unitary(a.n(), 8)?;
    println!("Haar unitary deviation ‖U^H U - I‖ = {:.2e}", u.deviation());
    let b = conjugate(&a, &u)?;
    println!("spectrum of U^H A U: {:.6?}", eigvalsh(&b)?);
    println!("tr A = {:.12}, tr U^H A U = {:.12}", trace_re(&a), trace_re(&b));
    Ok(())
}
