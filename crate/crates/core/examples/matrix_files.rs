//! Matrix files: `{"n": N, "re": [[...]], "im": [[...]]}`. Saving and loading reproduces
//! every entry bit for bit; malformed or non-Hermitian input is rejected.
//!
//! Run with `cargo run --example matrix_files`.

use gt_davis::matrix_io::{matrix_from_json, matrix_to_json};
use gt_davis::{load_matrix, log_trace_exp, random_hermitian, save_matrix, EnsembleKind, EnsembleSpec};

fn main() -> gt_davis::Result<()> {
    let a = random_hermitian(&EnsembleSpec::new(EnsembleKind::Gue, 3, 1.0, 5)?)?;
    let path = std::env::temp_dir().join("gt_davis_example_matrix.json");
    save_matrix(&path, &a)?;
    println!("wrote {}:\n{}", path.display(), std::fs::read_to_string(&path).unwrap_or_default());

    let back = load_matrix(&path)?;
    let identical = a.as_matrix().iter().zip(back.as_matrix().iter()).all(|(x, y)| x == y);
    println!("round trip identical: {identical}");
    println!("log tr exp = {:.15}", log_trace_exp(&back)?);
    let _ = std::fs::remove_file(&path);

    let real = matrix_from_json(r#"{"n": 2, "re": [[1, 2], [2, 3]]}"#)?;
    println!("real matrix serializes without \"im\": {}", matrix_to_json(&real));

    for bad in [
        r#"{"n": 2, "re": [[0, 1], [0, 0]]}"#,
        r#"{"n": 2, "re": [[0, 1], [1, 0]], "im": [[1, 0], [0, 0]]}"#,
        r#"{"n": 3, "re": [[0, 1], [1, 0]]}"#,
        r#"{"n": 2, "re": [[0, 1], [1"#,
    ] {
        match matrix_from_json(bad) {
            Ok(_) => println!("accepted?! {bad}"),
            Err(e) => println!("rejected: {e}"),
        }
    }
    Ok(())
}
