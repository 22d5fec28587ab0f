//! Operator and Hilbert-Schmidt norms, and extreme eigenvalues of symmetric operators.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const DEFAULT_NORM_TOL: f64 = 1e-10;

const MAX_POWER_STEPS: usize = 200_000;

fn start_vector(n: usize, seed: u64) -> DVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = DVector::<f64>::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
    let norm = v.norm();
    v / norm
}

/// Largest singular value by power iteration on `a* a`. A start vector in the
/// kernel triggers a restart from the next seeded vector.
pub fn operator_norm(a: &DMatrix<f64>, tol: f64) -> f64 {
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 || a.amax() == 0.0 {
        return 0.0;
    }
    let at = a.transpose();
    for seed in 0..8u64 {
        let mut v = start_vector(n, seed);
        let mut w = &at * (a * &v);
        let mut lambda = v.dot(&w);
        if !(lambda > 0.0) {
            continue;
        }
        for _ in 0..MAX_POWER_STEPS {
            v = &w / w.norm();
            w = &at * (a * &v);
            let next = v.dot(&w);
            let done = (next - lambda).abs() <= tol * next;
            lambda = next;
            if done {
                break;
            }
        }
        return lambda.sqrt();
    }
    0.0
}

/// Frobenius norm.
pub fn hs_norm(a: &DMatrix<f64>) -> f64 {
    a.norm()
}

/// Smallest and largest eigenvalue of a symmetric operator of dimension `n`, given
/// by its action on vectors. Lanczos with full reorthogonalization from a seeded
/// Gaussian start vector.
pub fn symmetric_extremes<F>(n: usize, mut apply: F, tol: f64) -> (f64, f64)
where
    F: FnMut(&DVector<f64>) -> DVector<f64>,
{
    assert!(n > 0, "empty operator");
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut q = start_vector(n, 0x5eed);
    let mut scale: f64 = 0.0;
    loop {
        let mut w = apply(&q);
        let a = q.dot(&w);
        basis.push(q.clone());
        alpha.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c = v.dot(&w);
                w.axpy(-c, v, 1.0);
            }
        }
        let b = w.norm();
        scale = scale.max(a.abs()).max(b);
        let m = basis.len();
        if m == n {
            return tridiagonal_extremes(&alpha, &beta).0;
        }
        // A generic start vector meets every eigenspace, so an exhausted Krylov
        // space already holds every distinct eigenvalue.
        if b <= 1e-12 * scale.max(1.0) {
            return tridiagonal_extremes(&alpha, &beta).0;
        }
        if m % 10 == 0 {
            let ((lo, hi), (rlo, rhi)) = tridiagonal_extremes(&alpha, &beta);
            if (rlo * b).max(rhi * b) <= tol * scale.max(1.0) {
                return (lo, hi);
            }
        }
        q = w / b;
        beta.push(b);
    }
}

/// Extreme eigenvalues of the tridiagonal matrix and the last components of the
/// corresponding eigenvectors (residual factors).
fn tridiagonal_extremes(alpha: &[f64], beta: &[f64]) -> ((f64, f64), (f64, f64)) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (mut ilo, mut ihi) = (0, 0);
    for i in 0..m {
        if eig.eigenvalues[i] < eig.eigenvalues[ilo] {
            ilo = i;
        }
        if eig.eigenvalues[i] > eig.eigenvalues[ihi] {
            ihi = i;
        }
    }
    (
        (eig.eigenvalues[ilo], eig.eigenvalues[ihi]),
        (eig.eigenvectors[(m - 1, ilo)].abs(), eig.eigenvectors[(m - 1, ihi)].abs()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_symmetric(n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::<f64>::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng));
        (&a + a.transpose()) * 0.5
    }

    #[test]
    fn identity_and_projection_norms() {
        let id = DMatrix::<f64>::identity(7, 7);
        assert!((operator_norm(&id, DEFAULT_NORM_TOL) - 1.0).abs() < 1e-12);
        let mut p = DMatrix::<f64>::zeros(6, 6);
        for i in 0..4 {
            p[(i, i)] = 1.0;
        }
        assert!((hs_norm(&p) - 2.0).abs() < 1e-15);
        assert_eq!(operator_norm(&DMatrix::zeros(3, 2), DEFAULT_NORM_TOL), 0.0);
    }

    #[test]
    fn power_method_matches_svd() {
        for seed in 0..5 {
            let a = random_symmetric(30, seed).columns(0, 20).into_owned();
            let svd = a.clone().svd(false, false);
            let top = svd.singular_values.max();
            assert!((operator_norm(&a, 1e-13) - top).abs() < 1e-8 * top, "seed {seed}");
        }
    }

    #[test]
    fn lanczos_matches_dense_eigen() {
        for (n, seed) in [(1, 1), (5, 2), (60, 3), (250, 4)] {
            let a = random_symmetric(n, seed);
            let eig = SymmetricEigen::new(a.clone());
            let (lo, hi) = symmetric_extremes(n, |v| &a * v, 1e-12);
            assert!((lo - eig.eigenvalues.min()).abs() < 1e-9, "n = {n}");
            assert!((hi - eig.eigenvalues.max()).abs() < 1e-9, "n = {n}");
        }
        // A projection: its Krylov space from one vector is two-dimensional.
        let mut p = DMatrix::<f64>::zeros(40, 40);
        for i in 0..13 {
            p[(i, i)] = 1.0;
        }
        let (lo, hi) = symmetric_extremes(40, |v| &p * v, 1e-12);
        assert!(lo.abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }
}
