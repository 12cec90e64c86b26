//! A = diag(1, -1), B = Pauli X: every quantity has a closed form. A + B has eigenvalues
//! ±√2, each of A and B has eigenvalues ±1, and (A + B)/2 has eigenvalues ±1/√2.
//!
//! Run with `cargo run --example closed_form_instance`.

use gt_davis::check::convexity_check;
use gt_davis::{gt_weak_check, HermitianMatrix};

fn main() -> gt_davis::Result<()> {
    let a = HermitianMatrix::from_real_diagonal(&[1.0, -1.0])?;
    let b = HermitianMatrix::from_parts(&[vec![0.0, 1.0], vec![1.0, 0.0]], None, 0.0)?;

    let gt = gt_weak_check(&a, &b, 1e-10)?;
    println!("log tr exp(A+B)             = {:.15}  closed form {:.15}", gt.lhs, (2.0 * 2f64.sqrt().cosh()).ln());
    println!("log tr exp A + log tr exp B = {:.15}  closed form {:.15}", gt.rhs, 2.0 * (2.0 * 1f64.cosh()).ln());
    println!("slack {:.15}, pass {}", gt.slack, gt.pass);

    let cx = convexity_check(&a, &b, 1e-10)?;
    let closed = (2.0 * 1f64.cosh()).ln() - (2.0 * std::f64::consts::FRAC_1_SQRT_2.cosh()).ln();
    println!("midpoint convexity slack    = {:.15}  closed form {closed:.15}", cx.slack);
    Ok(())
}
