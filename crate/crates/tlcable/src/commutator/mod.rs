//! The commutator operator `T : L^2 -> H_1 (x) L^2 (x) H_1` on a truncated GNS space.
//!
//! `L^2` is `(+)_k H_k (x) H_k`; a vector of block `k` is a `d_k x d_k` matrix `X` in
//! tower coordinates (row index on the first factor). A block of `T` sends block `k`
//! to `H_1 (x) H_m (x) H_m (x) H_1` with `m = k + alpha`, stored as a
//! `(d_1 d_m) x (d_m d_1)` matrix. With `A = phi_L`, `B = phi_R` and the flip `s`,
//! `T^(alpha)_k X = c (A X B^T - (s B) X (s* A)^T)`, where `c` is the block prefactor.

mod constants;
mod identities;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::concrete_rep::{symmetric_extremes, AlgebraSpec, ProjectorTower, StructureMaps};
use crate::error::{Error, Result};
use crate::qarith::{coupling_constant_value, q_integer_value};
use crate::rd_harness::{gaussian_matrix, trial_rng};
use crate::tl_elements::{phi_triple, Rho, Side};

pub use constants::{c_of_q, f_grid, g_of_q, lower_bound_constants, LowerBoundConstants};
pub use identities::{
    flip_expansion_residual, verify_appendix_identities, FlipExpansion, IdentityCheck, IdentityMode,
};

/// Relative tolerance handed to the Lanczos extremes.
const EXTREME_TOL: f64 = 1e-12;

/// `([2k + 2 alpha + 1]_q / [2k+1]_q)^1/2`.
pub fn block_prefactor(k: usize, alpha: i32, q: f64) -> f64 {
    let top = 2 * k as i64 + 2 * alpha as i64 + 1;
    (q_integer_value(top as u32, q) / q_integer_value(2 * k as u32 + 1, q)).sqrt()
}

/// Flip of row coordinates `H_a (x) H_b -> H_b (x) H_a`, `d_a`, `d_b` the factor dimensions.
pub fn flip_rows(x: &DMatrix<f64>, da: usize, db: usize) -> DMatrix<f64> {
    assert_eq!(x.nrows(), da * db, "row count must be d_a d_b");
    DMatrix::from_fn(da * db, x.ncols(), |row, c| {
        let (j, i) = (row / da, row % da);
        x[(i * db + j, c)]
    })
}

/// `||phi_L^* s phi_R||` bound: `([2k+1] + [2]^2 (1 + [2k]/[2k+2]) + [2]/[2k+2]) / [2k+3]`.
pub fn flip_overlap_bound(k: usize, q: f64) -> f64 {
    let n = |a: usize| q_integer_value(a as u32, q);
    (n(2 * k + 1) + n(2).powi(2) * (1.0 + n(2 * k) / n(2 * k + 2)) + n(2) / n(2 * k + 2)) / n(2 * k + 3)
}

/// Vector of the truncated GNS space or of its target, keyed by block.
pub type BlockVector = BTreeMap<usize, DMatrix<f64>>;

fn block_norm_squared(v: &BlockVector) -> f64 {
    v.values().map(|x| x.norm_squared()).sum()
}

fn add_into(acc: &mut BlockVector, m: usize, y: DMatrix<f64>) {
    match acc.get_mut(&m) {
        Some(a) => *a += y,
        None => {
            acc.insert(m, y);
        }
    }
}

/// One block `T^(alpha)_k` with its isometries.
#[derive(Clone, Debug)]
pub struct TBlock {
    pub k: usize,
    pub alpha: i32,
    /// `k + alpha`.
    pub target: usize,
    pub prefactor: f64,
    phi_l: DMatrix<f64>,
    phi_r: DMatrix<f64>,
    flip_r: DMatrix<f64>,
    flip_l: DMatrix<f64>,
}

impl TBlock {
    /// `phi_L : H_k -> H_1 (x) H_m`.
    pub fn phi_l(&self) -> &DMatrix<f64> {
        &self.phi_l
    }

    /// `phi_R : H_k -> H_m (x) H_1`.
    pub fn phi_r(&self) -> &DMatrix<f64> {
        &self.phi_r
    }

    /// `T X` for `X` on `H_k (x) H_k`.
    pub fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let direct = &self.phi_l * x * self.phi_r.transpose();
        let crossed = &self.flip_r * x * self.flip_l.transpose();
        (direct - crossed) * self.prefactor
    }

    /// `T* Y` for `Y` on the target block.
    pub fn adjoint_apply(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        let direct = self.phi_l.transpose() * y * &self.phi_r;
        let crossed = self.flip_r.transpose() * y * &self.flip_l;
        (direct - crossed) * self.prefactor
    }

    /// `phi_L^* s phi_R` on `H_k`, the operator whose norm is the flip overlap.
    pub fn overlap_operator(&self) -> DMatrix<f64> {
        self.phi_l.transpose() * &self.flip_r
    }
}

/// Maps, tower and assembled blocks of `T` for blocks `0..=kmax`.
#[derive(Debug)]
pub struct TruncatedGns {
    maps: StructureMaps,
    tower: ProjectorTower,
    kmax: usize,
    blocks: BTreeMap<(usize, i32), TBlock>,
    taus: Vec<DMatrix<f64>>,
}

impl TruncatedGns {
    pub fn new(spec: &AlgebraSpec, kmax: usize) -> Result<Self> {
        Self::with_maps(StructureMaps::new(spec), kmax)
    }

    /// Builds the tower through `H_kmax`; levels above are added on demand.
    pub fn with_maps(maps: StructureMaps, kmax: usize) -> Result<Self> {
        let tower = ProjectorTower::build(&maps, kmax.max(1))?;
        Ok(TruncatedGns { maps, tower, kmax, blocks: BTreeMap::new(), taus: Vec::new() })
    }

    pub fn maps(&self) -> &StructureMaps {
        &self.maps
    }

    pub fn tower(&self) -> &ProjectorTower {
        &self.tower
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn q(&self) -> f64 {
        self.maps.q()
    }

    pub fn dim(&mut self, k: usize) -> Result<usize> {
        if k > self.tower.kmax() {
            self.tower.extend(&self.maps, k)?;
        }
        Ok(self.tower.dim(k))
    }

    /// `C^-1/2 rho` for the triple of `phi^(alpha)_{k,side}`, also for `k = 0`.
    pub fn phi(&mut self, k: usize, alpha: i32, side: Side) -> Result<DMatrix<f64>> {
        if (k as i64) + (alpha as i64) < 0 {
            return Err(Error::Domain(format!("k + alpha = {k} + {alpha} is negative")));
        }
        let (n, kk, l) = phi_triple(k, alpha, side);
        let rho = Rho::new(n, kk, l)?;
        self.maps.tensor_dim(n + kk)?;
        self.dim(n.max(kk).max(l))?;
        let c = coupling_constant_value(n, kk, l, self.q())?;
        Ok(self.tower.rho_coordinates(&self.maps, &rho)? / c.sqrt())
    }

    /// `t_{2k}` as a `d_k x d_k` matrix indexed (first factor, second factor), built by
    /// `t_{2k} = ([2k-1][3]/[2k+1])^1/2 (1 (x) p_{2k})(1 (x) t_2 (x) 1) t_{2k-2}`
    /// inside `H_{k-1} (x) H_1 (x) H_1 (x) H_{k-1}`, which never touches `B^{(x) 2k}`.
    pub fn t_coordinates(&mut self, k: usize) -> Result<DMatrix<f64>> {
        if let Some(t) = self.taus.get(k) {
            return Ok(t.clone());
        }
        self.dim(k)?;
        if self.taus.is_empty() {
            self.taus.push(DMatrix::from_element(1, 1, 1.0));
        }
        if self.taus.len() == 1 && k >= 1 {
            self.taus.push(self.tower.t2_coordinates(&self.maps)?);
        }
        let q = self.q();
        while self.taus.len() <= k {
            let j = self.taus.len();
            let (dp, d1, dj) = (self.tower.dim(j - 1), self.tower.dim(1), self.tower.dim(j));
            let vj = self.tower.basis(j);
            // H_j inside H_{j-1} (x) H_1 and inside H_1 (x) H_{j-1}.
            let left = self.tower.kron(&[j - 1, 1]).transpose_apply(vj);
            let right = self.tower.kron(&[1, j - 1]).transpose_apply(vj);
            let (prev, t2) = (&self.taus[j - 1], &self.taus[1]);
            let middle = DMatrix::from_fn(dp * d1, d1 * dp, |row, col| {
                let (x, b) = (row / d1, row % d1);
                let (c, y) = (col / dp, col % dp);
                prev[(x, y)] * t2[(b, c)]
            });
            let n = |a: usize| q_integer_value(a as u32, q);
            let scale = (n(2 * j - 1) * n(3) / n(2 * j + 1)).sqrt();
            let t = left.transpose() * middle * right * scale;
            assert_eq!(t.shape(), (dj, dj));
            self.taus.push(t);
        }
        Ok(self.taus[k].clone())
    }

    /// `T^(alpha)_k`. Blocks with `k + alpha` outside the fusion range are errors.
    pub fn t_block(&mut self, k: usize, alpha: i32) -> Result<&TBlock> {
        if !self.blocks.contains_key(&(k, alpha)) {
            let target = (k as i64 + alpha as i64) as usize;
            let phi_l = self.phi(k, alpha, Side::L)?;
            let phi_r = self.phi(k, alpha, Side::R)?;
            let (d1, dm) = (self.dim(1)?, self.dim(target)?);
            let flip_r = flip_rows(&phi_r, dm, d1);
            let flip_l = flip_rows(&phi_l, d1, dm);
            let prefactor = block_prefactor(k, alpha, self.q());
            let block = TBlock { k, alpha, target, prefactor, phi_l, phi_r, flip_r, flip_l };
            self.blocks.insert((k, alpha), block);
        }
        Ok(&self.blocks[&(k, alpha)])
    }

    /// Admissible `alpha` for block `k`: all three for `k >= 1`, only `+1` on the vacuum.
    pub fn alphas(k: usize) -> &'static [i32] {
        if k == 0 {
            &[1]
        } else {
            &[1, 0, -1]
        }
    }

    /// `(sum_{alpha in alphas} T^(alpha)) xi`.
    pub fn apply(&mut self, xi: &BlockVector, alphas: &[i32]) -> Result<BlockVector> {
        let mut out = BlockVector::new();
        for (&k, x) in xi {
            for &alpha in alphas.iter().filter(|a| Self::alphas(k).contains(a)) {
                let b = self.t_block(k, alpha)?;
                let m = b.target;
                let y = b.apply(x);
                add_into(&mut out, m, y);
            }
        }
        Ok(out)
    }

    /// `(sum T^(alpha))^* eta` restricted to the blocks in `support`.
    pub fn adjoint_apply(&mut self, eta: &BlockVector, alphas: &[i32], support: &[usize]) -> Result<BlockVector> {
        let mut out = BlockVector::new();
        for &k in support {
            let d = self.dim(k)?;
            let mut acc = DMatrix::zeros(d, d);
            for &alpha in alphas.iter().filter(|a| Self::alphas(k).contains(a)) {
                let b = self.t_block(k, alpha)?;
                if let Some(y) = eta.get(&b.target) {
                    acc += b.adjoint_apply(y);
                }
            }
            out.insert(k, acc);
        }
        Ok(out)
    }

    /// Extreme eigenvalues of `S^* S` on the blocks in `support`, `S = sum_{alphas} T^(alpha)`.
    pub fn gram_extremes(&mut self, alphas: &[i32], support: &[usize]) -> Result<(f64, f64)> {
        let dims: Vec<usize> = support.iter().map(|&k| self.dim(k)).collect::<Result<_>>()?;
        for &k in support {
            for &alpha in alphas.iter().filter(|a| Self::alphas(k).contains(a)) {
                self.t_block(k, alpha)?;
            }
        }
        let n: usize = dims.iter().map(|d| d * d).sum();
        let mut failure = None;
        let extremes = symmetric_extremes(
            n,
            |v| {
                let xi = unpack(v, support, &dims);
                let res = self.apply(&xi, alphas).and_then(|eta| self.adjoint_apply(&eta, alphas, support));
                match res {
                    Ok(g) => pack(&g, support, &dims),
                    Err(e) => {
                        failure = Some(e);
                        DVector::zeros(n)
                    }
                }
            },
            EXTREME_TOL,
        );
        match failure {
            Some(e) => Err(e),
            None => Ok(extremes),
        }
    }

    /// `||T^(alpha)_k||`.
    pub fn block_norm(&mut self, k: usize, alpha: i32) -> Result<f64> {
        Ok(self.gram_extremes(&[alpha], &[k])?.1.max(0.0).sqrt())
    }

    /// Smallest singular value of `T^(alpha)_k`.
    pub fn block_sigma_min(&mut self, k: usize, alpha: i32) -> Result<f64> {
        Ok(self.gram_extremes(&[alpha], &[k])?.0.max(0.0).sqrt())
    }

    /// `||phi^(+1)*_{k,L} s phi^(+1)_{k,R}||`.
    pub fn flip_overlap(&mut self, k: usize) -> Result<f64> {
        let g = self.t_block(k, 1)?.overlap_operator();
        Ok(g.singular_values().max())
    }

    /// `||T^(alpha) xi_0||` for each `alpha`; `alpha = 0, -1` have no admissible vacuum block.
    pub fn vacuum_residuals(&mut self) -> Result<[f64; 3]> {
        let mut xi = BlockVector::new();
        xi.insert(0, DMatrix::from_element(1, 1, 1.0));
        let mut out = [0.0; 3];
        for (slot, alpha) in [1, 0, -1].into_iter().enumerate() {
            out[slot] = block_norm_squared(&self.apply(&xi, &[alpha])?).sqrt();
        }
        Ok(out)
    }

    /// The isometries `phi^(-alpha)_{k+alpha,L} : H_{k+alpha} -> H_1 (x) H_k`: largest
    /// entry of the off-diagonal Gram blocks and of `sum phi phi^* - 1`.
    pub fn decomposition_residuals(&mut self, k: usize) -> Result<(f64, f64)> {
        if k == 0 {
            return Err(Error::Domain("the decomposition of H_1 (x) H_k needs k >= 1".into()));
        }
        let parts = [self.phi(k + 1, -1, Side::L)?, self.phi(k, 0, Side::L)?, self.phi(k - 1, 1, Side::L)?];
        let mut orth: f64 = 0.0;
        for i in 0..3 {
            for j in 0..i {
                orth = orth.max((parts[i].transpose() * &parts[j]).amax());
            }
        }
        let total = parts[0].nrows();
        let mut sum = -DMatrix::<f64>::identity(total, total);
        for p in &parts {
            sum += p * p.transpose();
        }
        Ok((orth, sum.amax()))
    }

    /// `||(T^(0) + T^(-1))||` on blocks `1..=kmax`, including cross terms between
    /// `T^(0)` on block `k` and `T^(-1)` on block `k+1`.
    pub fn lower_order_norm(&mut self, kmax: usize) -> Result<f64> {
        let support: Vec<usize> = (1..=kmax).collect();
        Ok(self.gram_extremes(&[0, -1], &support)?.1.max(0.0).sqrt())
    }

    /// Extremes of `Phi = 1 - T^*T / (2[3]_q)` compressed to blocks `1..kmax`.
    pub fn simplicity_map_extremes(&mut self) -> Result<(f64, f64)> {
        if self.kmax < 2 {
            return Err(Error::Domain("interior blocks need K >= 2".into()));
        }
        let support: Vec<usize> = (1..self.kmax).collect();
        let (lo, hi) = self.gram_extremes(&[1, 0, -1], &support)?;
        let s = 2.0 * q_integer_value(3, self.q());
        Ok((1.0 - hi / s, 1.0 - lo / s))
    }

    /// Random unit vectors on blocks `1..kmax`: the three norms of the triangle chain.
    pub fn triangle_chain(&mut self, trials: usize, seed: u64) -> Result<Vec<TriangleSample>> {
        let support: Vec<usize> = (1..self.kmax).collect();
        let mut out = Vec::with_capacity(trials);
        for t in 0..trials {
            let mut rng = trial_rng(seed, t as u64);
            let mut xi = BlockVector::new();
            for &k in &support {
                let d = self.dim(k)?;
                xi.insert(k, gaussian_matrix(d, d, &mut rng));
            }
            let norm = block_norm_squared(&xi).sqrt();
            for x in xi.values_mut() {
                *x /= norm;
            }
            let full = block_norm_squared(&self.apply(&xi, &[1, 0, -1])?).sqrt();
            let raising = block_norm_squared(&self.apply(&xi, &[1])?).sqrt();
            let lower = block_norm_squared(&self.apply(&xi, &[0, -1])?).sqrt();
            out.push(TriangleSample { full, raising, lower });
        }
        Ok(out)
    }
}

/// `||T xi||`, `||T^(+1) xi||` and `||(T^(0) + T^(-1)) xi||` for a unit vector.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TriangleSample {
    pub full: f64,
    pub raising: f64,
    pub lower: f64,
}

fn pack(v: &BlockVector, support: &[usize], dims: &[usize]) -> DVector<f64> {
    let n: usize = dims.iter().map(|d| d * d).sum();
    let mut out = DVector::zeros(n);
    let mut off = 0;
    for (&k, &d) in support.iter().zip(dims) {
        if let Some(x) = v.get(&k) {
            out.rows_mut(off, d * d).copy_from_slice(x.as_slice());
        }
        off += d * d;
    }
    out
}

fn unpack(v: &DVector<f64>, support: &[usize], dims: &[usize]) -> BlockVector {
    let mut out = BlockVector::new();
    let mut off = 0;
    for (&k, &d) in support.iter().zip(dims) {
        out.insert(k, DMatrix::from_column_slice(d, d, &v.as_slice()[off..off + d * d]));
        off += d * d;
    }
    out
}

/// Per-block measurements of the gap suite.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GapRow {
    pub k: usize,
    pub sigma_min_squared: f64,
    /// `2 ([2k+3]/[2k+1]) (1 - overlap^2)`.
    pub chain_bound: f64,
    pub overlap: f64,
    pub lowering_norm: f64,
    /// `2 ([2k-1]/[2k+1])^1/2`.
    pub lowering_bound: f64,
}

/// The gap suite on blocks `1..kmax` together with the simplicity-map extremes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapReport {
    pub spec: String,
    pub kmax: usize,
    pub rows: Vec<GapRow>,
    pub simplicity_min: f64,
    pub simplicity_max: f64,
    /// `1 - f(sqrt 8)^2 / 2`.
    pub simplicity_bound: f64,
}

impl GapReport {
    pub fn simplicity_norm(&self) -> f64 {
        self.simplicity_min.abs().max(self.simplicity_max.abs())
    }
}

/// Runs the per-block chain and the simplicity map on blocks `1..K`.
pub fn gap_suite(spec: &AlgebraSpec, kmax: usize) -> Result<GapReport> {
    gap_suite_with_maps(StructureMaps::new(spec), kmax)
}

/// [`gap_suite`] on prebuilt maps, which carry the tensor budget.
pub fn gap_suite_with_maps(maps: StructureMaps, kmax: usize) -> Result<GapReport> {
    let spec = maps.spec().clone();
    if spec.dim_b() < 5 {
        return Err(Error::Domain(format!("dim B = {} is below 5", spec.dim_b())));
    }
    let mut gns = TruncatedGns::with_maps(maps, kmax)?;
    let q = gns.q();
    let mut rows = Vec::new();
    for k in 1..kmax {
        let sigma_min = gns.block_sigma_min(k, 1)?;
        let overlap = gns.flip_overlap(k)?;
        let c2 = block_prefactor(k, 1, q).powi(2);
        let lowering_norm = gns.block_norm(k, -1)?;
        rows.push(GapRow {
            k,
            sigma_min_squared: sigma_min * sigma_min,
            chain_bound: 2.0 * c2 * (1.0 - overlap * overlap),
            overlap,
            lowering_norm,
            lowering_bound: 2.0 * block_prefactor(k, -1, q),
        });
    }
    let (lo, hi) = gns.simplicity_map_extremes()?;
    let f8 = lower_bound_constants(8f64.sqrt())?.f.expect("C(q) > 0 at delta^2 = 8");
    Ok(GapReport {
        spec: spec.to_string(),
        kmax,
        rows,
        simplicity_min: lo,
        simplicity_max: hi,
        simplicity_bound: 1.0 - f8 * f8 / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gns(spec: &str, kmax: usize) -> TruncatedGns {
        TruncatedGns::new(&AlgebraSpec::parse(spec).unwrap(), kmax).unwrap()
    }

    #[test]
    fn flip_permutes_factors() {
        let x = DMatrix::from_fn(6, 1, |i, _| i as f64);
        // (i, j) in 2 x 3 goes to (j, i) in 3 x 2.
        let y = flip_rows(&x, 2, 3);
        assert_eq!(y.column(0).iter().copied().collect::<Vec<_>>(), vec![0.0, 3.0, 1.0, 4.0, 2.0, 5.0]);
        assert_eq!(flip_rows(&y, 3, 2), x);
    }

    #[test]
    fn isometries_have_orthonormal_columns() {
        let mut g = gns("1,1,1,1,1", 3);
        for k in 1..=2 {
            for alpha in [1, 0, -1] {
                for side in [Side::L, Side::R] {
                    let p = g.phi(k, alpha, side).unwrap();
                    let d = p.ncols();
                    assert!((p.transpose() * &p - DMatrix::<f64>::identity(d, d)).amax() < 1e-10);
                }
            }
        }
        assert!(g.phi(0, -1, Side::L).is_err());
    }

    #[test]
    fn recursive_t_matches_direct_compression() {
        let mut g = gns("2,1", 2);
        for k in 1..=2 {
            let t = g.t_coordinates(k).unwrap();
            let direct = g.tower().rho_coordinates(g.maps(), &Rho::new(k, k, 0).unwrap()).unwrap();
            let d = t.nrows();
            let direct = DMatrix::from_fn(d, d, |i, a| direct[(i * d + a, 0)]);
            assert!((t - direct).amax() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn vacuum_is_annihilated() {
        for spec in ["1,1,1,1,1", "2,1", "2,2"] {
            let mut g = gns(spec, 1);
            let r = g.vacuum_residuals().unwrap();
            assert!(r.iter().all(|&v| v < 1e-10), "{spec}: {r:?}");
        }
    }

    #[test]
    fn decomposition_of_h1_tensor_hk() {
        let mut g = gns("1,1,1,1,1", 3);
        for k in 1..=3 {
            let (orth, complete) = g.decomposition_residuals(k).unwrap();
            assert!(orth < 1e-10 && complete < 1e-10, "k = {k}: {orth:e} {complete:e}");
        }
    }

    #[test]
    fn adjoint_matches_inner_products() {
        let mut g = gns("2,1", 2);
        let mut rng = trial_rng(1, 0);
        for (k, alpha) in [(1, 1), (1, 0), (1, -1), (2, 0)] {
            let d = g.dim(k).unwrap();
            let x = gaussian_matrix(d, d, &mut rng);
            let b = g.t_block(k, alpha).unwrap().clone();
            let tx = b.apply(&x);
            let y = gaussian_matrix(tx.nrows(), tx.ncols(), &mut rng);
            let lhs = tx.dot(&y);
            let rhs = x.dot(&b.adjoint_apply(&y));
            assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn block_norms_obey_the_upper_bounds() {
        let mut g = gns("1,1,1,1,1", 3);
        let q = g.q();
        for k in 1..=2 {
            assert!(g.block_norm(k, 0).unwrap() <= 2.0 + 1e-9);
            assert!(g.block_norm(k, -1).unwrap() <= 2.0 * block_prefactor(k, -1, q) + 1e-9);
            assert!(g.flip_overlap(k).unwrap() <= flip_overlap_bound(k, q) + 1e-9);
        }
        assert!(g.lower_order_norm(2).unwrap() <= 2.0 * (1.0 + q) + 1e-9);
    }

    #[test]
    fn raising_block_gap_chain() {
        let mut g = gns("2,2", 2);
        let q = g.q();
        let k = 1;
        let s = g.block_sigma_min(k, 1).unwrap();
        let o = g.flip_overlap(k).unwrap();
        let chain = 2.0 * block_prefactor(k, 1, q).powi(2) * (1.0 - o * o);
        assert!(s * s >= chain - 1e-8, "{} < {chain}", s * s);
    }
}
