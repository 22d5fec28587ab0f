//! Kronecker products of isometries, applied without forming the dense product.

use nalgebra::{DMatrix, DMatrixView};

/// Dense Kronecker product, first factor most significant.
pub fn kron_dense(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

/// `V_1 (x) ... (x) V_r` with each `V_i` of shape `D_i x d_i`.
#[derive(Clone, Debug)]
pub struct KronBasis<'a> {
    factors: Vec<&'a DMatrix<f64>>,
}

impl<'a> KronBasis<'a> {
    pub fn new(factors: Vec<&'a DMatrix<f64>>) -> Self {
        KronBasis { factors }
    }

    /// `prod D_i`.
    pub fn ambient_dim(&self) -> usize {
        self.factors.iter().map(|v| v.nrows()).product()
    }

    /// `prod d_i`.
    pub fn dim(&self) -> usize {
        self.factors.iter().map(|v| v.ncols()).product()
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let mut acc = DMatrix::from_element(1, 1, 1.0);
        for v in &self.factors {
            acc = acc.kronecker(*v);
        }
        acc
    }

    /// `(V_1 (x) ... (x) V_r)^T y`, column by column.
    pub fn transpose_apply(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(y.nrows(), self.ambient_dim(), "row count must match the ambient dimension");
        let mut shape: Vec<usize> = self.factors.iter().map(|v| v.nrows()).collect();
        let mut data = y.as_slice().to_vec();
        for (mode, v) in self.factors.iter().enumerate() {
            data = mode_product(&data, y.ncols(), &shape, mode, v, true);
            shape[mode] = v.ncols();
        }
        DMatrix::from_vec(self.dim(), y.ncols(), data)
    }

    /// `(V_1 (x) ... (x) V_r) c`, column by column.
    pub fn apply(&self, c: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(c.nrows(), self.dim(), "row count must match the compressed dimension");
        let mut shape: Vec<usize> = self.factors.iter().map(|v| v.ncols()).collect();
        let mut data = c.as_slice().to_vec();
        for (mode, v) in self.factors.iter().enumerate() {
            data = mode_product(&data, c.ncols(), &shape, mode, v, false);
            shape[mode] = v.nrows();
        }
        DMatrix::from_vec(self.ambient_dim(), c.ncols(), data)
    }
}

/// Contracts one tensor mode of `cols` stacked row-major tensors of the given shape
/// with `v` (`D x d`): by `v^T` when `transpose` (extent `D -> d`), else by `v`.
fn mode_product(
    data: &[f64],
    cols: usize,
    shape: &[usize],
    mode: usize,
    v: &DMatrix<f64>,
    transpose: bool,
) -> Vec<f64> {
    let left: usize = cols * shape[..mode].iter().product::<usize>();
    let right: usize = shape[mode + 1..].iter().product();
    let old = shape[mode];
    let new = if transpose { v.ncols() } else { v.nrows() };
    let mut out = vec![0.0; left * new * right];
    if right == 1 {
        // Row-major (left x old) is column-major (old x left).
        let z = DMatrixView::from_slice(data, old, left);
        let r = if transpose { v.transpose() * z } else { v * z };
        out.copy_from_slice(r.as_slice());
        return out;
    }
    let m = if transpose { v.clone_owned() } else { v.transpose() };
    for l in 0..left {
        // Row-major (old x right) is column-major (right x old).
        let b = DMatrixView::from_slice(&data[l * old * right..(l + 1) * old * right], right, old);
        let r = b * &m;
        out[l * new * right..(l + 1) * new * right].copy_from_slice(r.as_slice());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        DMatrix::<f64>::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
    }

    #[test]
    fn matches_dense_kronecker() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random(4, 3, &mut rng);
        let b = random(5, 2, &mut rng);
        let c = random(3, 3, &mut rng);
        let k = KronBasis::new(vec![&a, &b, &c]);
        let dense = k.dense();
        assert_eq!(dense.shape(), (60, 18));
        let y = random(60, 4, &mut rng);
        assert!((k.transpose_apply(&y) - dense.transpose() * &y).amax() < 1e-12);
        let x = random(18, 3, &mut rng);
        assert!((k.apply(&x) - &dense * &x).amax() < 1e-12);
        assert!((kron_dense(&a, &b) - KronBasis::new(vec![&a, &b]).dense()).amax() == 0.0);
    }
}
