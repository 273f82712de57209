//! Dense complex linear-algebra helpers shared by the signal-processing modules.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand_distr::StandardNormal;

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Largest entry magnitude, `‖A‖_max`.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `‖A - A^H‖_max` for a square matrix.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Returns `(A + A^H) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted in descending order.
///
/// The input is symmetrized before decomposition so round-off asymmetry in the
/// caller's matrix never leaks into complex eigenvalues.
pub fn hermitian_eigen(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let eig = hermitize(m).symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = CMatrix::zeros(m.nrows(), n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = hermitize(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Spectral condition number `λ_max / λ_min` of a Hermitian matrix.
/// Infinite when the smallest eigenvalue is not positive.
pub fn hermitian_condition(m: &CMatrix) -> f64 {
    let eig = hermitian_eigenvalues(m);
    match (eig.first(), eig.last()) {
        (Some(&max), Some(&min)) if min > 0.0 && max > 0.0 => max / min,
        _ => f64::INFINITY,
    }
}

/// Cholesky factorization of a Hermitian positive-definite matrix.
pub(crate) fn cholesky(m: &CMatrix) -> Option<Cholesky<C64, Dyn>> {
    hermitize(m).cholesky()
}

/// Draws `n` i.i.d. `CN(0, variance)` entries.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize, variance: f64) -> CVector {
    let scale = (variance / 2.0).sqrt();
    CVector::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    })
}

/// Draws an `rows x cols` matrix with i.i.d. `CN(0, 1)` entries (column-major fill order).
pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let v = complex_gaussian(rng, rows * cols, 1.0);
    CMatrix::from_column_slice(rows, cols, v.as_slice())
}

/// `‖A‖_F²`
pub fn frobenius_sq(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Real part of the trace.
pub fn trace_re(m: &CMatrix) -> f64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)].re).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eigen_sorted_and_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = complex_gaussian_matrix(&mut rng, 5, 5);
        let c = &a * a.adjoint();
        let (vals, vecs) = hermitian_eigen(&c);
        assert!(vals.as_slice().windows(2).all(|w| w[0] >= w[1]));
        let lam = CMatrix::from_diagonal(&vals.map(|v| C64::new(v, 0.0)));
        let rebuilt = &vecs * lam * vecs.adjoint();
        assert!(max_abs(&(rebuilt - &c)) < 1e-10 * max_abs(&c));
    }

    #[test]
    fn condition_of_singular_is_infinite() {
        let v = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)]);
        let c = &v * v.adjoint();
        assert!(hermitian_condition(&c) > 1e15);
        assert_eq!(hermitian_condition(&CMatrix::identity(3, 3)), 1.0);
    }
}
