//! Dual-side convolution on `(+)_k B(H_k)` and the rapid-decay estimates.
//!
//! Blocks are stored in the coordinates of the tower bases `V_k`, so a block on
//! `H_k` is a `d_k x d_k` matrix. Weights are `m_k = d_k` throughout (tracial case).
//! The convolution is the closed form
//! `P_l(x * y) = sum (d_n d_k / d_l) C^-1 rho* (x_n (x) y_k) rho`
//! with `rho = rho_l^{n (x) k}` in tower coordinates.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::concrete_rep::{kron_dense, AlgebraSpec, ProjectorTower, StructureMaps};
use crate::error::{Error, Result};
use crate::qarith::{coupling_constant_value, empirical_d0, fusion_defect, q_integer_value};
use crate::spectral::pi_value;
use crate::tl_elements::Rho;

/// Largest `n, k` of the coupling-constant minimum used as `D_0`.
pub const D0_SCAN_MAX: usize = 6;

/// `{k : U^l is contained in U^n (x) U^k}`, at most `2n + 1` elements.
pub fn fusion_neighbors(n: usize, l: usize) -> BTreeSet<usize> {
    (l.saturating_sub(n)..=l + n).filter(|&k| fusion_defect(n, k, l).is_some()).collect()
}

/// `{l : U^l is contained in U^n (x) U^k}`, that is `|n - k| ..= n + k`.
pub fn fusion_products(n: usize, k: usize) -> Vec<usize> {
    (n.abs_diff(k)..=n + k).collect()
}

/// Finitely supported element of `(+)_k B(H_k)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DualElement {
    blocks: BTreeMap<usize, DMatrix<f64>>,
}

impl DualElement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_block(k: usize, x: DMatrix<f64>) -> Self {
        let mut e = Self::new();
        e.insert(k, x);
        e
    }

    /// Sets block `k`; blocks must be square.
    pub fn insert(&mut self, k: usize, x: DMatrix<f64>) -> Option<DMatrix<f64>> {
        assert!(x.is_square(), "dual blocks are square");
        self.blocks.insert(k, x)
    }

    pub fn block(&self, k: usize) -> Option<&DMatrix<f64>> {
        self.blocks.get(&k)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.keys().copied()
    }

    pub fn blocks(&self) -> impl Iterator<Item = (usize, &DMatrix<f64>)> {
        self.blocks.iter().map(|(&k, x)| (k, x))
    }

    /// `P_k x`.
    pub fn restrict(&self, k: usize) -> DualElement {
        self.blocks.get(&k).map_or_else(DualElement::new, |x| DualElement::from_block(k, x.clone()))
    }

    /// `(sum_k d_k ||x_k||_HS^2)^1/2`, reading `d_k` off the block size.
    pub fn l2_norm(&self) -> f64 {
        self.blocks.values().map(|x| x.nrows() as f64 * x.norm_squared()).sum::<f64>().sqrt()
    }

    /// Largest entry of `self - other`, absent blocks read as zero.
    pub fn max_abs_diff(&self, other: &DualElement) -> f64 {
        let keys: BTreeSet<usize> = self.support().chain(other.support()).collect();
        keys.into_iter()
            .map(|k| match (self.block(k), other.block(k)) {
                (Some(a), Some(b)) if a.shape() == b.shape() => (a - b).amax(),
                (Some(_), Some(_)) => f64::INFINITY,
                (Some(a), None) | (None, Some(a)) => a.amax(),
                (None, None) => 0.0,
            })
            .fold(0.0, f64::max)
    }

    fn add_block(&mut self, k: usize, x: DMatrix<f64>) {
        match self.blocks.get_mut(&k) {
            Some(acc) => *acc += x,
            None => {
                self.blocks.insert(k, x);
            }
        }
    }
}

/// Gaussian `rows x cols` matrix.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::<f64>::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// Stream `trial` of the generator seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Relative deviations in the norm identity `||P_l(x*y)||_l2 = (d_n d_k / d_l)^1/2 ||P w P||_l2`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct L2IdentityReport {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub trials: usize,
    pub max_relative_deviation: f64,
    /// Deviation for `w = P_n (x) P_k`.
    pub projection_deviation: f64,
}

/// One row of the Hilbert-Schmidt inequality scan.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HsScanRow {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub r: usize,
    /// `max ||P (x (x) y) P||_HS (d_n d_k / d_l)^1/2 / (||x||_HS ||y||_HS)`.
    pub max_ratio: f64,
    /// `[2][3] D_0^-1 ([r+1]^2 d_l / (d_n d_k))^-1/2`, the final HS estimate in ratio form.
    pub bound: f64,
    pub margin: f64,
    /// `max ||rho* (x (x) y) rho||_HS / (||x||_HS ||y||_HS)`.
    pub branch_ratio: f64,
    /// `[2s+1]^-1` for `r = 2s`, `[2][3][2s+2]^-1` for `r = 2s+1`.
    pub branch_bound: f64,
}

/// Measured decay for one frequency `n` against `D` and `D (2n+1)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RdEstimate {
    pub n: usize,
    pub kmax: usize,
    /// `max ||P_l(a * P_k y)||_l2 / (||a||_l2 ||P_k y||_l2)` over `l` and `k <= kmax`.
    pub block_sup: f64,
    /// `max ||a * y||_l2 / (||a||_l2 ||y||_l2)` with `y` spread over blocks `0..=kmax`.
    pub full_ratio: f64,
    pub constant: f64,
    /// `constant (2n + 1)`.
    pub bound: f64,
}

/// `[2][3] D_0^-1 (1 - q^2)^-1`. The window `[r+1]^2 d_l / (d_n d_k)` is bounded
/// below by `(1 - q^2)^2`, so every per-triple HS estimate is at most this.
pub fn rd_constant(q: f64, d0: f64) -> f64 {
    q_integer_value(2, q) * q_integer_value(3, q) / (d0 * (1.0 - q * q))
}

/// Maps, tower and a cache of `rho` coordinates for one algebra.
#[derive(Debug)]
pub struct RdHarness {
    maps: StructureMaps,
    tower: ProjectorTower,
    rho: FxHashMap<(usize, usize, usize), DMatrix<f64>>,
    d0: f64,
}

impl RdHarness {
    pub fn new(spec: &AlgebraSpec) -> Result<Self> {
        Self::with_maps(StructureMaps::new(spec))
    }

    pub fn with_maps(maps: StructureMaps) -> Result<Self> {
        let tower = ProjectorTower::build(&maps, 1)?;
        let d0 = empirical_d0(maps.q(), D0_SCAN_MAX);
        Ok(RdHarness { maps, tower, rho: FxHashMap::default(), d0 })
    }

    pub fn maps(&self) -> &StructureMaps {
        &self.maps
    }

    pub fn tower(&self) -> &ProjectorTower {
        &self.tower
    }

    /// The coupling-constant minimum standing in for `D_0`.
    pub fn d0(&self) -> f64 {
        self.d0
    }

    pub fn dim(&mut self, k: usize) -> Result<usize> {
        self.ensure_level(k)?;
        Ok(self.tower.dim(k))
    }

    pub fn ensure_level(&mut self, k: usize) -> Result<()> {
        if k > self.tower.kmax() {
            self.tower.extend(&self.maps, k)?;
        }
        Ok(())
    }

    /// `rho_l^{n (x) k}` as a `d_n d_k x d_l` matrix.
    pub fn rho_coordinates(&mut self, n: usize, k: usize, l: usize) -> Result<&DMatrix<f64>> {
        if !self.rho.contains_key(&(n, k, l)) {
            let rho = Rho::new(n, k, l)?;
            self.maps.tensor_dim(n + k)?;
            self.ensure_level(n.max(k).max(l))?;
            let r = self.tower.rho_coordinates(&self.maps, &rho)?;
            self.rho.insert((n, k, l), r);
        }
        Ok(&self.rho[&(n, k, l)])
    }

    /// `P_0` with the scalar `1`, the convolution unit.
    pub fn unit(&self) -> DualElement {
        DualElement::from_block(0, DMatrix::from_element(1, 1, 1.0))
    }

    /// `P_k`, the identity on `H_k`.
    pub fn block_projection(&mut self, k: usize) -> Result<DualElement> {
        let d = self.dim(k)?;
        Ok(DualElement::from_block(k, DMatrix::identity(d, d)))
    }

    /// Gaussian element supported on `blocks`.
    pub fn random_element(&mut self, blocks: &[usize], rng: &mut ChaCha8Rng) -> Result<DualElement> {
        let mut e = DualElement::new();
        for &k in blocks {
            let d = self.dim(k)?;
            e.insert(k, gaussian_matrix(d, d, rng));
        }
        Ok(e)
    }

    fn check_dims(&mut self, x: &DualElement) -> Result<()> {
        for (k, b) in x.blocks.iter() {
            let d = self.dim(*k)?;
            if b.nrows() != d {
                return Err(Error::Grading(format!("block {k} is {0}x{0}, d_{k} = {d}", b.nrows())));
            }
        }
        Ok(())
    }

    /// `x * y`.
    pub fn convolve(&mut self, x: &DualElement, y: &DualElement) -> Result<DualElement> {
        self.check_dims(x)?;
        self.check_dims(y)?;
        let q = self.maps.q();
        let mut out = DualElement::new();
        for (n, xn) in x.blocks() {
            for (k, yk) in y.blocks() {
                let w = kron_dense(xn, yk);
                for l in fusion_products(n, k) {
                    let c = coupling_constant_value(n, k, l, q)?;
                    let (dn, dk, dl) = (self.dim(n)?, self.dim(k)?, self.dim(l)?);
                    let r = self.rho_coordinates(n, k, l)?;
                    let scale = (dn * dk) as f64 / (dl as f64 * c);
                    out.add_block(l, r.transpose() * (&w * r) * scale);
                }
            }
        }
        Ok(out)
    }

    /// `P = C^-1 rho rho*`, the projection onto the copy of `H_l` in `H_n (x) H_k`.
    pub fn fusion_projection(&mut self, n: usize, k: usize, l: usize) -> Result<DMatrix<f64>> {
        let c = coupling_constant_value(n, k, l, self.maps.q())?;
        let r = self.rho_coordinates(n, k, l)?;
        Ok(r * r.transpose() / c)
    }

    /// Checks the norm identity on `trials` Gaussian pairs and on `P_n (x) P_k`.
    pub fn l2_identity(&mut self, n: usize, k: usize, l: usize, trials: usize, seed: u64) -> Result<L2IdentityReport> {
        let p = self.fusion_projection(n, k, l)?;
        let (dn, dk, dl) = (self.dim(n)? as f64, self.dim(k)? as f64, self.dim(l)? as f64);
        let deviation = |x: DMatrix<f64>, y: DMatrix<f64>, h: &mut Self| -> Result<f64> {
            let w = kron_dense(&x, &y);
            let conv = h.convolve(&DualElement::from_block(n, x), &DualElement::from_block(k, y))?;
            let lhs = conv.restrict(l).l2_norm();
            let rhs = (dn * dk / dl).sqrt() * (dn * dk).sqrt() * (&p * w * &p).norm();
            Ok((lhs - rhs).abs() / rhs.max(f64::MIN_POSITIVE))
        };
        let mut max_dev: f64 = 0.0;
        for t in 0..trials {
            let mut rng = trial_rng(seed, t as u64);
            let x = gaussian_matrix(dn as usize, dn as usize, &mut rng);
            let y = gaussian_matrix(dk as usize, dk as usize, &mut rng);
            max_dev = max_dev.max(deviation(x, y, self)?);
        }
        let projection_deviation = deviation(
            DMatrix::identity(dn as usize, dn as usize),
            DMatrix::identity(dk as usize, dk as usize),
            self,
        )?;
        Ok(L2IdentityReport { n, k, l, trials, max_relative_deviation: max_dev, projection_deviation })
    }

    /// Largest normalized HS ratios over Gaussian `x, y` against the proven bounds.
    pub fn hs_scan(&mut self, n: usize, k: usize, l: usize, trials: usize, seed: u64) -> Result<HsScanRow> {
        let r_def = fusion_defect(n, k, l).ok_or(Error::Fusion { n, k, l })?;
        let q = self.maps.q();
        let c = coupling_constant_value(n, k, l, q)?;
        let (dn, dk, dl) = (self.dim(n)?, self.dim(k)?, self.dim(l)?);
        let rho = self.rho_coordinates(n, k, l)?.clone();
        let weight = ((dn * dk) as f64 / dl as f64).sqrt();
        let (mut max_ratio, mut branch_ratio): (f64, f64) = (0.0, 0.0);
        for t in 0..trials {
            let mut rng = trial_rng(seed, t as u64);
            let x = gaussian_matrix(dn, dn, &mut rng);
            let y = gaussian_matrix(dk, dk, &mut rng);
            let norms = x.norm() * y.norm();
            let inner = rho.transpose() * (kron_dense(&x, &y) * &rho);
            // ||P w P||_HS = C^-1 ||rho* w rho||_HS since C^-1/2 rho is an isometry.
            let compressed = inner.norm();
            branch_ratio = branch_ratio.max(compressed / norms);
            max_ratio = max_ratio.max(compressed / c * weight / norms);
        }
        let qi = |a: usize| q_integer_value(a as u32, q);
        let branch_bound = if r_def % 2 == 0 { 1.0 / qi(r_def + 1) } else { qi(2) * qi(3) / qi(r_def + 1) };
        let window = qi(r_def + 1).powi(2) * dl as f64 / (dn * dk) as f64;
        let bound = qi(2) * qi(3) / self.d0 / window.sqrt();
        Ok(HsScanRow { n, k, l, r: r_def, max_ratio, bound, margin: bound - max_ratio, branch_ratio, branch_bound })
    }

    /// [`Self::hs_scan`] over all admissible `n, k <= nk_max`, `l <= l_max`.
    pub fn hs_scan_all(&mut self, nk_max: usize, l_max: usize, trials: usize, seed: u64) -> Result<Vec<HsScanRow>> {
        let mut rows = Vec::new();
        for n in 0..=nk_max {
            for k in 0..=nk_max {
                for l in fusion_products(n, k).into_iter().filter(|&l| l <= l_max) {
                    rows.push(self.hs_scan(n, k, l, trials, seed)?);
                }
            }
        }
        Ok(rows)
    }

    /// Convolves Gaussian `a` on block `n` with Gaussian `y` on blocks `0..=kmax`.
    pub fn rd_estimate(&mut self, n: usize, kmax: usize, trials: usize, seed: u64) -> Result<RdEstimate> {
        let constant = rd_constant(self.maps.q(), self.d0);
        let (mut block_sup, mut full_ratio): (f64, f64) = (0.0, 0.0);
        let blocks: Vec<usize> = (0..=kmax).collect();
        for t in 0..trials {
            let mut rng = trial_rng(seed, t as u64);
            let a = self.random_element(&[n], &mut rng)?;
            let y = self.random_element(&blocks, &mut rng)?;
            let na = a.l2_norm();
            let full = self.convolve(&a, &y)?;
            full_ratio = full_ratio.max(full.l2_norm() / (na * y.l2_norm()));
            for &k in &blocks {
                let yk = y.restrict(k);
                let conv = self.convolve(&a, &yk)?;
                let nk = yk.l2_norm();
                for (l, _) in conv.blocks() {
                    block_sup = block_sup.max(conv.restrict(l).l2_norm() / (na * nk));
                }
            }
        }
        Ok(RdEstimate { n, kmax, block_sup, full_ratio, constant, bound: constant * (2 * n + 1) as f64 })
    }
}

/// `sup_{t in [0,4]} |Pi_n(t)|` by a grid and golden-section refinement.
pub fn character_sup_norm(n: usize) -> f64 {
    const GRID: usize = 4000;
    let f = |x: f64| pi_value(n, x).abs();
    let step = 4.0 / GRID as f64;
    let (mut best_i, mut best) = (0, f(0.0));
    for i in 1..=GRID {
        let v = f(i as f64 * step);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let (mut a, mut b) = ((best_i as f64 - 1.0) * step, (best_i as f64 + 1.0) * step);
    a = a.max(0.0);
    b = b.min(4.0);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    for _ in 0..100 {
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    [best, f(a), f(b), f(0.5 * (a + b))].into_iter().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_point() -> RdHarness {
        RdHarness::new(&AlgebraSpec::parse("1,1,1,1,1").unwrap()).unwrap()
    }

    #[test]
    fn neighbor_sets() {
        assert_eq!(fusion_neighbors(1, 1), BTreeSet::from([0, 1, 2]));
        for l in 0..6 {
            assert_eq!(fusion_neighbors(0, l), BTreeSet::from([l]));
        }
        assert_eq!(fusion_neighbors(2, 5), BTreeSet::from([3, 4, 5, 6, 7]));
        assert_eq!(fusion_neighbors(3, 0), BTreeSet::from([3]));
        for n in 0..=20 {
            for l in 0..=20 {
                let s = fusion_neighbors(n, l);
                assert!(s.len() <= 2 * n + 1);
                for k in 0..=45 {
                    assert_eq!(s.contains(&k), fusion_products(n, k).contains(&l), "({n},{k},{l})");
                }
            }
        }
    }

    #[test]
    fn l2_norm_uses_dimension_weights() {
        let mut x = DualElement::from_block(1, DMatrix::identity(4, 4));
        x.insert(0, DMatrix::from_element(1, 1, 2.0));
        // 4 * 4 + 1 * 4
        assert!((x.l2_norm() - 20f64.sqrt()).abs() < 1e-15);
        assert_eq!(x.support().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(x.max_abs_diff(&x.restrict(1)), 2.0);
    }

    #[test]
    fn unit_and_projection_products() {
        let mut h = five_point();
        let mut rng = trial_rng(11, 0);
        let y = h.random_element(&[0, 1, 2], &mut rng).unwrap();
        let u = h.unit();
        assert!(h.convolve(&u, &y).unwrap().max_abs_diff(&y) < 1e-12);
        assert!(h.convolve(&y, &u).unwrap().max_abs_diff(&y) < 1e-12);
        for (n, k) in [(1, 1), (1, 2), (2, 2)] {
            let pn = h.block_projection(n).unwrap();
            let pk = h.block_projection(k).unwrap();
            let prod = h.convolve(&pn, &pk).unwrap();
            let (dn, dk) = (h.dim(n).unwrap() as f64, h.dim(k).unwrap() as f64);
            for l in fusion_products(n, k) {
                let dl = h.dim(l).unwrap();
                let want = DMatrix::<f64>::identity(dl, dl) * (dn * dk / dl as f64);
                assert!((prod.block(l).unwrap() - want).amax() < 1e-10, "({n},{k},{l})");
            }
            assert_eq!(prod.support().collect::<Vec<_>>(), fusion_products(n, k));
        }
    }

    #[test]
    fn convolution_is_associative() {
        let mut h = five_point();
        for t in 0..3 {
            let mut rng = trial_rng(5, t);
            let x = h.random_element(&[1, 2], &mut rng).unwrap();
            let y = h.random_element(&[1], &mut rng).unwrap();
            let z = h.random_element(&[0, 1], &mut rng).unwrap();
            let xy = h.convolve(&x, &y).unwrap();
            let yz = h.convolve(&y, &z).unwrap();
            let left = h.convolve(&xy, &z).unwrap();
            let right = h.convolve(&x, &yz).unwrap();
            let scale = left.blocks().map(|(_, b)| b.amax()).fold(1.0, f64::max);
            assert!(left.max_abs_diff(&right) < 1e-9 * scale, "trial {t}");
        }
    }

    #[test]
    fn dimension_mismatch_is_refused() {
        let mut h = five_point();
        let bad = DualElement::from_block(1, DMatrix::identity(3, 3));
        assert!(matches!(h.convolve(&bad, &h.unit()), Err(Error::Grading(_))));
        assert!(matches!(h.hs_scan(1, 1, 3, 1, 0), Err(Error::Fusion { .. })));
    }

    #[test]
    fn norm_identity_on_small_triples() {
        let mut h = five_point();
        for (n, k, l) in [(1, 1, 1), (1, 1, 0), (1, 1, 2), (2, 1, 2)] {
            let rep = h.l2_identity(n, k, l, 10, 3).unwrap();
            assert!(rep.max_relative_deviation < 1e-8, "{rep:?}");
            assert!(rep.projection_deviation < 1e-8, "{rep:?}");
        }
    }

    #[test]
    fn hs_ratios_respect_both_branches() {
        let mut h = five_point();
        for (n, k, l) in [(1, 1, 1), (1, 2, 3), (1, 2, 2), (2, 2, 2), (2, 2, 0)] {
            let row = h.hs_scan(n, k, l, 10, 9).unwrap();
            assert!(row.margin >= 0.0, "{row:?}");
            assert!(row.branch_ratio <= row.branch_bound * (1.0 + 1e-12), "{row:?}");
        }
        assert_eq!(h.hs_scan(1, 2, 3, 1, 0).unwrap().r, 0);
        assert_eq!(h.hs_scan(1, 2, 2, 1, 0).unwrap().r, 1);
    }

    #[test]
    fn character_norms_grow_linearly() {
        assert!((character_sup_norm(0) - 1.0).abs() < 1e-12);
        assert!((character_sup_norm(1) - 3.0).abs() < 1e-12);
        for n in 0..=8 {
            assert!((character_sup_norm(n) - (2 * n + 1) as f64).abs() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn rd_estimate_for_low_frequency() {
        let mut h = five_point();
        let est = h.rd_estimate(1, 2, 3, 17).unwrap();
        assert!(est.block_sup <= est.constant, "{est:?}");
        assert!(est.full_ratio <= est.bound, "{est:?}");
    }
}
