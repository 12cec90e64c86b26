//! The log-sum-exp Hessian: softmax gradient, analytic Hessian against finite differences,
//! its weighted-Laplacian form, and a PSD certificate with a one-dimensional nullspace.
//!
//! Run with `cargo run --example lse_hessian`.

use gt_davis::logsumexp::{lse_gradient_fd, psd_certify_default, GRADIENT_FD_STEP, HESSIAN_FD_STEP};
use gt_davis::{hessian_fd, lse, lse_hessian_analytic, softmax, weighted_laplacian};

fn main() -> gt_davis::Result<()> {
    let x = [1.0, -0.5, 2.0, 0.25];
    println!("lse(x) = {:.12}", lse(&x)?);

    let p = softmax(&x)?;
    let g = lse_gradient_fd(&x, GRADIENT_FD_STEP)?;
    println!("softmax  = {:.10?}", p.as_slice());
    println!("gradient = {:.10?} (central differences)", g);

    let h = lse_hessian_analytic(&x)?;
    println!("Hessian:");
    for row in h.rows() {
        println!("  {:+.8?}", row);
    }
    println!("max |H - FD|      = {:.2e}", h.max_abs_diff(&hessian_fd(&x, HESSIAN_FD_STEP)?)?);
    println!("max |H - L(p)|    = {:.2e}  (weighted graph Laplacian, w_ij = p_i p_j)", h.max_abs_diff(&weighted_laplacian(&p))?);
    let worst_row = h.row_sums().iter().fold(0.0f64, |m, s| m.max(s.abs()));
    println!("max |row sum|     = {worst_row:.1e}  (H·1 = 0)");

    let cert = psd_certify_default(&h)?;
    println!(
        "PSD: {} (min eigenvalue {:.2e}, nullspace dimension {}, tol {:.1e})",
        cert.pass, cert.min_eigenvalue, cert.nullspace_dim, cert.tol
    );

    println!("large inputs stay finite: lse([1000, 1000]) = {}", lse(&[1000.0, 1000.0])?);
    Ok(())
}
