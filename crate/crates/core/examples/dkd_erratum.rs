//! `D K D` with D = diag(softmax) and K the complete-graph Laplacian reproduces the
//! off-diagonal entries of the log-sum-exp Hessian but not its diagonal, except when the
//! softmax is uniform.
//!
//! Run with `cargo run --example dkd_erratum`.

use gt_davis::cli::compare_dkd;
use gt_davis::complete_graph_laplacian;

fn main() -> gt_davis::Result<()> {
    println!("K_3 =");
    for row in complete_graph_laplacian(3)?.rows() {
        println!("  {row:?}");
    }

    for x in [vec![0.0, 3f64.ln()], vec![0.4, 0.4, 0.4], vec![-1.0, 0.0, 2.0]] {
        let c = compare_dkd(&x)?;
        println!("\nx = {:?}, softmax = {:.6?}", c.x, c.softmax);
        println!("  diag H   = {:.6?}", (0..x.len()).map(|i| c.hessian[i][i]).collect::<Vec<_>>());
        println!("  diag DKD = {:.6?}", (0..x.len()).map(|i| c.dkd[i][i]).collect::<Vec<_>>());
        println!("  max off-diagonal difference {:.1e}, diagonal differences {:.6?}", c.max_offdiag_diff, c.diag_diff);
        println!("  uniform softmax: {}", c.softmax_uniform);
    }
    Ok(())
}
