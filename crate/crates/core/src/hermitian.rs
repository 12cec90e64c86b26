//! Dense Hermitian linear algebra.
//!
//! Every matrix function in this crate goes through [`eigh`]: a function `g` of a Hermitian
//! matrix `A = V diag(λ) V^H` is `V diag(g(λ)) V^H`. There is no power-series exponential.
//!
//! Real symmetric matrices are Hermitian matrices whose imaginary parts are all zero.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;

/// Tolerance used to re-validate the output of conjugation and file loads.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Max-entry deviation of `U^H U` from the identity accepted for a [`UnitaryMatrix`].
pub const UNITARY_TOL: f64 = 1e-10;
/// Relative max-entry reconstruction error accepted from the eigensolver.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;
/// Largest eigenvalue for which `exp` is computed directly.
pub const EXP_OVERFLOW_LIMIT: f64 = 700.0;

/// Identifies the pseudo-random generator behind every sampling routine. Reports carry it
/// because seeds only reproduce a sample under the same generator.
pub const GENERATOR_ID: &str = "rand_chacha-0.9/ChaCha8Rng::seed_from_u64";

/// Dense `n x n` complex matrix with `a[i][j] == conj(a[j][i])` holding exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Caller guarantees exact conjugate symmetry. Negative zeros become positive zeros, so a
    /// real matrix has no `-0.0` imaginary parts left over from conjugation.
    fn from_exact(mut inner: DMatrix<Complex64>) -> Self {
        debug_assert!(inner.is_square());
        for z in inner.iter_mut() {
            z.re += 0.0;
            z.im += 0.0;
        }
        HermitianMatrix { inner }
    }

    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        Ok(Self::from_exact(DMatrix::zeros(n, n)))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::scalar(n, 1.0)
    }

    /// `value * I`.
    pub fn scalar(n: usize, value: f64) -> Result<Self> {
        Self::from_real_diagonal(&vec![value; n])
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if diag.iter().any(|d| !d.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        Ok(Self::from_exact(m))
    }

    /// Builds a matrix from row-major real and (optional) imaginary parts, validated with `tol`.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>, tol: f64) -> Result<Self> {
        let rows = re.len();
        let cols = re.first().map_or(0, Vec::len);
        if re.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse("ragged rows in real part".into()));
        }
        if let Some(im) = im {
            if im.len() != rows || im.iter().any(|r| r.len() != cols) {
                return Err(Error::Parse("imaginary part shape differs from real part".into()));
            }
        }
        let m = DMatrix::from_fn(rows, cols, |i, j| {
            Complex64::new(re[i][j], im.map_or(0.0, |im| im[i][j]))
        });
        validate_hermitian(&m, tol)
    }

    pub fn n(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.inner
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.inner.iter().all(|z| z.im == 0.0)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn real_parts(&self) -> Vec<Vec<f64>> {
        self.rows_of(|z| z.re)
    }

    pub fn imag_parts(&self) -> Vec<Vec<f64>> {
        self.rows_of(|z| z.im)
    }

    fn rows_of(&self, part: impl Fn(&Complex64) -> f64) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| part(&self.inner[(i, j)])).collect())
            .collect()
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(())
    }

    // Entrywise real-linear combinations keep conjugate symmetry exact: real and imaginary
    // parts are combined independently with identical operations on mirrored entries.

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self::from_exact(&self.inner + &other.inner))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self::from_exact(&self.inner - &other.inner))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_exact(self.inner.map(|z| z * factor))
    }

    /// `(1 - t) * self + t * other`.
    pub fn lerp(&self, other: &Self, t: f64) -> Result<Self> {
        self.check_same_dim(other)?;
        let s = 1.0 - t;
        Ok(Self::from_exact(
            self.inner.zip_map(&other.inner, |a, b| a * s + b * t),
        ))
    }

    /// `(self + other) / 2`.
    pub fn midpoint(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self::from_exact(
            self.inner.zip_map(&other.inner, |a, b| (a + b) * 0.5),
        ))
    }
}

/// Square complex matrix with `U^H U = I` to within [`UNITARY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    inner: DMatrix<Complex64>,
}

impl UnitaryMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::EmptyMatrix);
        }
        let deviation = unitarity_deviation(&m);
        if !(deviation <= UNITARY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(UnitaryMatrix { inner: m })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(DMatrix::identity(n, n))
    }

    /// Permutation matrix with `U[perm[j]][j] = 1`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        let mut m = DMatrix::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            if i >= n || seen[i] {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
            seen[i] = true;
            m[(i, j)] = Complex64::new(1.0, 0.0);
        }
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    /// Max-entry deviation of `U^H U` from the identity.
    pub fn deviation(&self) -> f64 {
        unitarity_deviation(&self.inner)
    }
}

fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let gram = m.adjoint() * m;
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Eigenvalues in ascending order, with column `k` of the eigenvector matrix paired with
/// eigenvalue `k`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: UnitaryMatrix,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &UnitaryMatrix {
        &self.eigenvectors
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("dimension >= 1")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `V diag(g(λ)) V^H`, symmetrized exactly.
    pub fn map_spectrum(&self, g: impl Fn(f64) -> f64) -> HermitianMatrix {
        let v = self.eigenvectors.as_matrix();
        let mut scaled = v.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let gk = g(lambda);
            scaled.column_mut(k).apply(|z| *z *= gk);
        }
        symmetrize(&(scaled * v.adjoint()))
    }

    /// `V diag(λ) V^H`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map_spectrum(|x| x)
    }
}

/// `(M + M^H) / 2` with the mirrored entries written as exact conjugates.
fn symmetrize(m: &DMatrix<Complex64>) -> HermitianMatrix {
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out[(i, j)] = z;
            out[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::from_exact(out)
}

/// Accepts `m` as Hermitian when `max|M - M^H| <= tol * max(1, max|M|)` and returns the exact
/// Hermitian part `(M + M^H) / 2`.
pub fn validate_hermitian(m: &DMatrix<Complex64>, tol: f64) -> Result<HermitianMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be >= 0, got {tol}")));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    let n = m.nrows();
    let mut residual = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            scale = scale.max(m[(i, j)].norm());
            residual = residual.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    let allowed = tol * scale.max(1.0);
    if residual > allowed {
        return Err(Error::HermiticityViolation { residual, allowed });
    }
    Ok(symmetrize(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnsembleKind {
    #[serde(rename = "GUE")]
    Gue,
    #[serde(rename = "GOE")]
    Goe,
    #[serde(rename = "DIAGONAL-UNIFORM")]
    DiagonalUniform,
}

impl EnsembleKind {
    /// The name used in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::Gue => "GUE",
            EnsembleKind::Goe => "GOE",
            EnsembleKind::DiagonalUniform => "DIAGONAL-UNIFORM",
        }
    }
}

impl std::fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gue" => Ok(EnsembleKind::Gue),
            "goe" => Ok(EnsembleKind::Goe),
            "diag" | "diagonal-uniform" => Ok(EnsembleKind::DiagonalUniform),
            other => Err(Error::InvalidArgument(format!(
                "unknown ensemble `{other}` (expected gue, goe or diag)"
            ))),
        }
    }
}

/// What to sample: ensemble kind, dimension, entry scale, and seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub scale: f64,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize, scale: f64, seed: u64) -> Result<Self> {
        let spec = EnsembleSpec {
            kind,
            n,
            scale,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "ensemble scale must be positive and finite, got {}",
                self.scale
            )));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        EnsembleSpec { seed, ..self }
    }
}

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Samples from the ensemble. GUE: off-diagonal real and imaginary parts each have variance
/// `scale^2 / 2`, diagonal variance `scale^2`. GOE: the same with zero imaginary parts.
/// DIAGONAL-UNIFORM: diagonal uniform in `[-scale, scale]`, zero elsewhere.
pub fn random_hermitian(spec: &EnsembleSpec) -> Result<HermitianMatrix> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = rng_from_seed(spec.seed);
    let mut m = DMatrix::zeros(n, n);
    match spec.kind {
        EnsembleKind::Gue | EnsembleKind::Goe => {
            let diag = Normal::new(0.0, spec.scale).expect("positive scale");
            let off = Normal::new(0.0, spec.scale * std::f64::consts::FRAC_1_SQRT_2)
                .expect("positive scale");
            for i in 0..n {
                m[(i, i)] = Complex64::new(diag.sample(&mut rng), 0.0);
                for j in (i + 1)..n {
                    let re = off.sample(&mut rng);
                    let im = if spec.kind == EnsembleKind::Gue {
                        off.sample(&mut rng)
                    } else {
                        0.0
                    };
                    m[(i, j)] = Complex64::new(re, im);
                    m[(j, i)] = Complex64::new(re, -im);
                }
            }
        }
        EnsembleKind::DiagonalUniform => {
            let u = Uniform::new_inclusive(-spec.scale, spec.scale).expect("positive scale");
            for i in 0..n {
                m[(i, i)] = Complex64::new(u.sample(&mut rng), 0.0);
            }
        }
    }
    Ok(HermitianMatrix::from_exact(m))
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix, with the phases of `R`'s diagonal
/// moved into `Q` so that the triangular factor has a positive real diagonal.
pub fn random_unitary(n: usize, seed: u64) -> Result<UnitaryMatrix> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut rng = rng_from_seed(seed);
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid");
    let ginibre = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))
    });
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..n {
        let d = r[(k, k)];
        let norm = d.norm();
        let phase = if norm > 0.0 {
            d / norm
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.column_mut(k).apply(|z| *z *= phase);
    }
    UnitaryMatrix::new(q)
}

/// Hermitian eigendecomposition with ascending eigenvalues.
///
/// Returns [`Error::ConvergenceFailure`] when the iterative solver stalls or when the
/// reconstruction `V diag(λ) V^H` misses `a` by more than [`RECONSTRUCTION_TOL`] relative.
pub fn eigh(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = a.n();
    let max_niter = 100 * n + 1000;
    let eig = SymmetricEigen::try_new(a.inner.clone(), f64::EPSILON, max_niter)
        .ok_or(Error::ConvergenceFailure { n })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    if eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::ConvergenceFailure { n });
    }
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    let eigenvectors =
        UnitaryMatrix::new(vectors).map_err(|_| Error::ConvergenceFailure { n })?;

    let decomposition = EigenDecomposition {
        eigenvalues,
        eigenvectors,
    };
    let rebuilt = decomposition.reconstruct();
    let err = rebuilt
        .inner
        .zip_map(&a.inner, |x, y| (x - y).norm())
        .max();
    if !(err <= RECONSTRUCTION_TOL * a.max_abs().max(1.0)) {
        return Err(Error::ConvergenceFailure { n });
    }
    Ok(decomposition)
}

/// Ascending eigenvalues of `a`.
pub fn eigvalsh(a: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(eigh(a)?.eigenvalues)
}

/// `exp(A) = V diag(exp(λ)) V^H`.
pub fn matrix_exp(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = eigh(a)?;
    let max_eigenvalue = eig.max_eigenvalue();
    if max_eigenvalue > EXP_OVERFLOW_LIMIT {
        return Err(Error::OverflowRisk { max_eigenvalue });
    }
    Ok(eig.map_spectrum(f64::exp))
}

/// `U^H A U`, re-validated as Hermitian with [`HERMITIAN_TOL`].
pub fn conjugate(a: &HermitianMatrix, u: &UnitaryMatrix) -> Result<HermitianMatrix> {
    if a.n() != u.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: u.n(),
        });
    }
    let uh = u.inner.adjoint();
    validate_hermitian(&(uh * &a.inner * &u.inner), HERMITIAN_TOL)
}

/// Sum of the (real) diagonal.
pub fn trace_re(a: &HermitianMatrix) -> f64 {
    (0..a.n()).map(|i| a.inner[(i, i)].re).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_entry_diff(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
        a.as_matrix()
            .zip_map(b.as_matrix(), |x, y| (x - y).norm())
            .max()
    }

    #[test]
    fn validate_accepts_exact_hermitian_unchanged() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let h = validate_hermitian(&m, 1e-12).unwrap();
        assert_eq!(h.as_matrix(), &m);
    }

    #[test]
    fn validate_rejects_nilpotent() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            validate_hermitian(&m, 1e-12),
            Err(Error::HermiticityViolation { .. })
        ));
    }

    #[test]
    fn validate_symmetrizes_small_asymmetry_exactly() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 1e-14), c(0.5, 1e-14), c(0.5, 0.0), c(-3.0, 0.0)],
        );
        let h = validate_hermitian(&m, 1e-12).unwrap();
        assert_eq!(h.get(0, 1), h.get(1, 0).conj());
        assert_eq!(h.get(0, 0).im, 0.0);
        assert_eq!(h.get(0, 1), c(0.5, 0.5e-14));
    }

    #[test]
    fn validate_rejects_non_square_and_empty() {
        let m = DMatrix::<Complex64>::zeros(2, 3);
        assert!(matches!(validate_hermitian(&m, 0.0), Err(Error::NotSquare { rows: 2, cols: 3 })));
        let m = DMatrix::<Complex64>::zeros(0, 0);
        assert!(matches!(validate_hermitian(&m, 0.0), Err(Error::EmptyMatrix)));
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = EnsembleSpec::new(EnsembleKind::Gue, 4, 1.0, 7).unwrap();
        assert_eq!(random_hermitian(&spec).unwrap(), random_hermitian(&spec).unwrap());
        assert_eq!(random_unitary(5, 3).unwrap(), random_unitary(5, 3).unwrap());
        assert_ne!(
            random_hermitian(&spec).unwrap(),
            random_hermitian(&spec.with_seed(8)).unwrap()
        );
    }

    #[test]
    fn goe_is_real_and_diag_is_diagonal() {
        let goe = random_hermitian(&EnsembleSpec::new(EnsembleKind::Goe, 3, 1.0, 1).unwrap()).unwrap();
        assert!(goe.is_real());
        let spec = EnsembleSpec::new(EnsembleKind::DiagonalUniform, 5, 2.5, 1).unwrap();
        let d = random_hermitian(&spec).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                if i == j {
                    assert!(d.get(i, i).re.abs() <= 2.5);
                } else {
                    assert_eq!(d.get(i, j), c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn ensemble_spec_rejects_bad_parameters() {
        assert!(EnsembleSpec::new(EnsembleKind::Gue, 0, 1.0, 0).is_err());
        assert!(EnsembleSpec::new(EnsembleKind::Gue, 2, 0.0, 0).is_err());
        assert!(EnsembleSpec::new(EnsembleKind::Gue, 2, f64::NAN, 0).is_err());
    }

    #[test]
    fn gue_offdiagonal_second_moment() {
        // E|a_ij|^2 = scale^2 for i != j.
        let n = 64;
        let mut total = 0.0;
        let mut count = 0usize;
        for seed in 0..1000 {
            let a = random_hermitian(&EnsembleSpec::new(EnsembleKind::Gue, n, 1.0, seed).unwrap())
                .unwrap();
            // one entry per draw keeps samples independent
            total += a.get(0, 1).norm_sqr();
            count += 1;
            total += a.get(7, 40).norm_sqr();
            count += 1;
        }
        let mean = total / count as f64;
        assert!((mean - 1.0).abs() < 0.1, "mean {mean}");
    }

    #[test]
    fn unitary_dimension_one_is_unit_modulus() {
        let u = random_unitary(1, 11).unwrap();
        assert_abs_diff_eq!(u.as_matrix()[(0, 0)].norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn haar_second_moment() {
        let n = 8;
        let mean: f64 = (0..200)
            .map(|s| random_unitary(n, s).unwrap().as_matrix()[(0, 0)].norm_sqr())
            .sum::<f64>()
            / 200.0;
        assert!((mean - 1.0 / n as f64).abs() < 0.2 / n as f64, "mean {mean}");
    }

    #[test]
    fn unitary_rejects_non_unitary() {
        let m = DMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(matches!(UnitaryMatrix::new(m), Err(Error::NotUnitary { .. })));
        assert!(UnitaryMatrix::permutation(&[0, 0]).is_err());
    }

    #[test]
    fn eigh_diagonal_and_pauli_x() {
        let d = HermitianMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(eigvalsh(&d).unwrap(), vec![1.0, 2.0, 3.0]);
        let x = HermitianMatrix::from_parts(&[vec![0.0, 1.0], vec![1.0, 0.0]], None, 0.0).unwrap();
        let ev = eigvalsh(&x).unwrap();
        assert_abs_diff_eq!(ev[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eigh_recovers_planted_spectrum() {
        let u = random_unitary(3, 99).unwrap();
        let d = HermitianMatrix::from_real_diagonal(&[-2.0, 0.0, 5.0]).unwrap();
        // U diag U^H = conjugate by U^H
        let uh = UnitaryMatrix::new(u.as_matrix().adjoint()).unwrap();
        let a = conjugate(&d, &uh).unwrap();
        let ev = eigvalsh(&a).unwrap();
        for (got, want) in ev.iter().zip([-2.0, 0.0, 5.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = matrix_exp(&HermitianMatrix::zeros(3).unwrap()).unwrap();
        assert!(max_entry_diff(&e, &HermitianMatrix::identity(3).unwrap()) < 1e-15);
    }

    #[test]
    fn exp_of_diagonal() {
        let e = matrix_exp(&HermitianMatrix::from_real_diagonal(&[1.0, -1.0]).unwrap()).unwrap();
        let want =
            HermitianMatrix::from_real_diagonal(&[1f64.exp(), (-1f64).exp()]).unwrap();
        assert!(max_entry_diff(&e, &want) < 1e-14);
    }

    #[test]
    fn exp_of_pauli_x_closed_form() {
        let x = HermitianMatrix::from_parts(&[vec![0.0, 1.0], vec![1.0, 0.0]], None, 0.0).unwrap();
        let e = matrix_exp(&x).unwrap();
        let (ch, sh) = (1f64.cosh(), 1f64.sinh());
        let want =
            HermitianMatrix::from_parts(&[vec![ch, sh], vec![sh, ch]], None, 0.0).unwrap();
        assert!(max_entry_diff(&e, &want) < 1e-14);
    }

    #[test]
    fn exp_flags_overflow() {
        let a = HermitianMatrix::from_real_diagonal(&[701.0, 0.0]).unwrap();
        assert!(matches!(matrix_exp(&a), Err(Error::OverflowRisk { .. })));
    }

    #[test]
    fn conjugation_examples() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]).unwrap();
        let same = conjugate(&a, &UnitaryMatrix::identity(2).unwrap()).unwrap();
        assert_eq!(same, a);
        let swapped = conjugate(&a, &UnitaryMatrix::permutation(&[1, 0]).unwrap()).unwrap();
        assert_eq!(swapped, HermitianMatrix::from_real_diagonal(&[2.0, 1.0]).unwrap());
        assert!(matches!(
            conjugate(&a, &UnitaryMatrix::identity(3).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace_re(&HermitianMatrix::identity(5).unwrap()), 5.0);
        assert_eq!(trace_re(&HermitianMatrix::from_real_diagonal(&[1.0, -1.0]).unwrap()), 0.0);
        let e = matrix_exp(&HermitianMatrix::from_real_diagonal(&[0.0, 2f64.ln()]).unwrap())
            .unwrap();
        assert_abs_diff_eq!(trace_re(&e), 3.0, epsilon = 1e-14);
    }

    #[test]
    fn linear_combinations_stay_exactly_hermitian() {
        let spec = EnsembleSpec::new(EnsembleKind::Gue, 6, 1.0, 5).unwrap();
        let a = random_hermitian(&spec).unwrap();
        let b = random_hermitian(&spec.with_seed(6)).unwrap();
        for m in [a.add(&b).unwrap(), a.sub(&b).unwrap(), a.lerp(&b, 0.3).unwrap(), a.midpoint(&b).unwrap(), a.scale(-1.7)] {
            assert!(validate_hermitian(m.as_matrix(), 0.0).is_ok());
        }
    }
}
