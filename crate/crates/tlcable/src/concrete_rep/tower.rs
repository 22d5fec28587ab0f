//! Orthonormal bases `V_k` of the ranges `H_k` of `represent(p_{2k})`.
//!
//! `p_{2k} = M_k (p_{2k-2} (x) 1_2)` with `M_k = F_{2k} (F_{2k-1} (x) 1)` two
//! Frenkel-Khovanov steps, and `H_k` lies inside `H_{k-1} (x) H_1`. So with
//! `W = V_{k-1} (x) V_1` the compression `W^T M_k W` is the projection onto
//! `H_k` in `W` coordinates, and its unit eigenvectors give `V_k`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{AlgebraSpec, KronBasis, StructureMaps};
use crate::error::{Error, Result};
use crate::tl_elements::{fk_operator, Rho, TLElement};

/// Eigenvalues of a compressed projection further than this from 0 and 1 fail the build.
const PROJECTION_DEFECT_TOL: f64 = 1e-8;

/// Bases `V_0 = [1], V_1, ..., V_K`, each `(dim B)^k x d_k` with orthonormal columns.
#[derive(Clone, Debug)]
pub struct ProjectorTower {
    levels: Vec<DMatrix<f64>>,
    stats: Vec<LevelStats>,
}

/// Spectrum summary of one compressed projection.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LevelStats {
    pub k: usize,
    /// Eigenvalues above `1e-8`, the numeric rank.
    pub rank: usize,
    /// Largest distance of an eigenvalue from `{0, 1}`.
    pub defect: f64,
}

fn step_operator(k: usize) -> Result<TLElement> {
    if k == 1 {
        return fk_operator(2);
    }
    fk_operator(2 * k)?.mul(&fk_operator(2 * k - 1)?.tensor(&TLElement::identity(1))?)
}

impl ProjectorTower {
    /// Builds `V_0, ..., V_kmax`.
    pub fn build(maps: &StructureMaps, kmax: usize) -> Result<Self> {
        let mut tower = ProjectorTower { levels: vec![DMatrix::from_element(1, 1, 1.0)], stats: Vec::new() };
        tower.extend(maps, kmax)?;
        Ok(tower)
    }

    /// Adds levels up to `kmax`.
    pub fn extend(&mut self, maps: &StructureMaps, kmax: usize) -> Result<()> {
        while self.levels.len() <= kmax {
            let k = self.levels.len();
            maps.tensor_dim(k)?;
            let identity;
            let w = if k == 1 {
                identity = DMatrix::<f64>::identity(maps.dim_b(), maps.dim_b());
                identity.clone()
            } else {
                KronBasis::new(vec![&self.levels[k - 1], &self.levels[1]]).dense()
            };
            let y = maps.apply(&step_operator(k)?, &w)?;
            let g = w.transpose() * y;
            let g = (&g + g.transpose()) * 0.5;
            let eig = SymmetricEigen::new(g);
            let mut keep = Vec::new();
            let mut defect: f64 = 0.0;
            let mut rank = 0;
            for (i, &l) in eig.eigenvalues.iter().enumerate() {
                defect = defect.max(l.abs().min((l - 1.0).abs()));
                if l > 1e-8 {
                    rank += 1;
                }
                if l > 0.5 {
                    keep.push(i);
                }
            }
            if defect > PROJECTION_DEFECT_TOL {
                return Err(Error::Domain(format!("compressed p_{} has eigenvalue defect {defect:e}", 2 * k)));
            }
            let u = eig.eigenvectors.select_columns(&keep);
            self.levels.push(w * u);
            self.stats.push(LevelStats { k, rank, defect });
        }
        Ok(())
    }

    pub fn kmax(&self) -> usize {
        self.levels.len() - 1
    }

    /// `V_k`.
    pub fn basis(&self, k: usize) -> &DMatrix<f64> {
        &self.levels[k]
    }

    /// `d_k = dim H_k`.
    pub fn dim(&self, k: usize) -> usize {
        self.levels[k].ncols()
    }

    /// Build statistics for levels `1..=kmax`.
    pub fn stats(&self) -> &[LevelStats] {
        &self.stats
    }

    /// `(V_{a_1} (x) ... (x) V_{a_r})`.
    pub fn kron(&self, levels: &[usize]) -> KronBasis<'_> {
        KronBasis::new(levels.iter().map(|&k| &self.levels[k]).collect())
    }

    /// `(V_out)^T represent(x) (V_in)` with `V_out`, `V_in` Kronecker products of levels.
    pub fn compress(
        &self,
        maps: &StructureMaps,
        x: &TLElement,
        out_levels: &[usize],
        in_levels: &[usize],
    ) -> Result<DMatrix<f64>> {
        let (sum_out, sum_in) = (out_levels.iter().sum::<usize>(), in_levels.iter().sum::<usize>());
        if (x.top(), x.bottom()) != (2 * sum_out, 2 * sum_in) {
            return Err(Error::Grading(format!(
                "element {}->{} strands cannot map levels {in_levels:?} to {out_levels:?}",
                x.bottom(),
                x.top()
            )));
        }
        if let Some(&k) = out_levels.iter().chain(in_levels).find(|&&k| k > self.kmax()) {
            return Err(Error::Domain(format!("level {k} not built (have {})", self.kmax())));
        }
        let v_in = self.kron(in_levels).dense();
        let y = maps.apply(x, &v_in)?;
        Ok(self.kron(out_levels).transpose_apply(&y))
    }

    /// Coordinates `H_l -> H_n (x) H_k` of `rho_l^{n (x) k}`. The projections in `rho`
    /// act as the identity on these coordinates, so only the skeleton is represented.
    pub fn rho_coordinates(&self, maps: &StructureMaps, rho: &Rho) -> Result<DMatrix<f64>> {
        self.compress(maps, &rho.skeleton, &[rho.n, rho.k], &[rho.l])
    }

    /// Coordinates of `represent(t_2)` in `H_1 (x) H_1`, a `d_1 x d_1` matrix
    /// indexed (first factor, second factor).
    pub fn t2_coordinates(&self, maps: &StructureMaps) -> Result<DMatrix<f64>> {
        let c = self.rho_coordinates(maps, &Rho::new(1, 1, 0)?)?;
        let d1 = self.dim(1);
        Ok(DMatrix::from_fn(d1, d1, |i, a| c[(i * d1 + a, 0)]))
    }

    /// `F_1` with `t_2 = d_1^-1/2 sum_i e_i (x) F_1 e_i`.
    pub fn f1(&self, maps: &StructureMaps) -> Result<DMatrix<f64>> {
        let tau = self.t2_coordinates(maps)?;
        Ok(tau.transpose() * (self.dim(1) as f64).sqrt())
    }
}

/// Numeric rank of `represent(p_{2k})` for `spec` under the default budget.
pub fn irrep_dimension(spec: &AlgebraSpec, k: usize) -> Result<usize> {
    let maps = StructureMaps::new(spec);
    irrep_dimension_with(&maps, k)
}

/// Numeric rank of `represent(p_{2k})` under the budget of `maps`.
pub fn irrep_dimension_with(maps: &StructureMaps, k: usize) -> Result<usize> {
    maps.tensor_dim(k)?;
    if k == 0 {
        return Ok(1);
    }
    let tower = ProjectorTower::build(maps, k)?;
    Ok(tower.stats()[k - 1].rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concrete_rep::dimension_recursion;
    use crate::tl_elements::jones_wenzl;

    fn maps(spec: &str) -> StructureMaps {
        StructureMaps::new(&AlgebraSpec::parse(spec).unwrap())
    }

    #[test]
    fn bases_span_the_projection_ranges() {
        for spec in ["1,1,1,1,1", "2,1"] {
            let s = maps(spec);
            let tower = ProjectorTower::build(&s, 3).unwrap();
            for k in 1..=3 {
                let v = tower.basis(k);
                let d = v.ncols();
                assert!((v.transpose() * v - DMatrix::<f64>::identity(d, d)).amax() < 1e-10);
                let p = s.represent(&jones_wenzl(2 * k).unwrap()).unwrap();
                assert!((v * v.transpose() - p).amax() < 1e-9, "{spec}, k = {k}");
            }
        }
    }

    #[test]
    fn dimensions_of_the_five_point_algebra() {
        let s = maps("1,1,1,1,1");
        let tower = ProjectorTower::build(&s, 4).unwrap();
        let dims: Vec<usize> = (0..=4).map(|k| tower.dim(k)).collect();
        assert_eq!(dims, vec![1, 4, 11, 29, 76]);
        for st in tower.stats() {
            assert_eq!(st.rank, tower.dim(st.k));
            assert!(st.defect < 1e-9);
        }
        assert_eq!(irrep_dimension(s.spec(), 1).unwrap(), 4);
        assert_eq!(irrep_dimension(s.spec(), 2).unwrap(), 11);
    }

    #[test]
    fn dimensions_match_the_recursion() {
        for (spec, kmax) in [("2,1", 3), ("2,2", 3), ("1,1,1,1,1,1", 3)] {
            let s = maps(spec);
            let tower = ProjectorTower::build(&s, kmax).unwrap();
            let rec = dimension_recursion(s.dim_b() as u64, kmax);
            for k in 0..=kmax {
                assert_eq!(tower.dim(k) as u128, rec[k], "{spec}, k = {k}");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = maps("2,2").with_budget(4096);
        assert!(matches!(ProjectorTower::build(&s, 5), Err(Error::Resource { .. })));
        assert!(matches!(irrep_dimension(&AlgebraSpec::parse("3,3").unwrap(), 4), Err(Error::Resource { .. })));
    }

    #[test]
    fn rho_coordinates_match_dense_compression() {
        let s = maps("2,1");
        let tower = ProjectorTower::build(&s, 3).unwrap();
        for (n, k, l) in [(1, 1, 1), (1, 2, 2), (2, 1, 3), (2, 2, 1), (1, 1, 0)] {
            let rho = Rho::new(n, k, l).unwrap();
            let full = s.represent(&rho.morphism().unwrap()).unwrap();
            let vout = tower.kron(&[n, k]).dense();
            let dense = vout.transpose() * full * tower.basis(l);
            let r = tower.rho_coordinates(&s, &rho).unwrap();
            assert!((&r - &dense).amax() < 1e-10, "({n},{k},{l})");
            // rho* rho = C p_{2l}
            let c = crate::qarith::coupling_constant_value(n, k, l, s.q()).unwrap();
            let d = r.ncols();
            assert!((r.transpose() * &r - DMatrix::<f64>::identity(d, d) * c).amax() < 1e-10);
        }
        assert!(matches!(tower.compress(&s, &TLElement::identity(4), &[1], &[2]), Err(Error::Grading(_))));
        assert!(matches!(tower.compress(&s, &TLElement::identity(8), &[4], &[4]), Err(Error::Domain(_))));
    }

    #[test]
    fn f1_is_a_symmetric_unitary() {
        for spec in ["1,1,1,1,1", "2,1", "2,2"] {
            let s = maps(spec);
            let tower = ProjectorTower::build(&s, 1).unwrap();
            let f = tower.f1(&s).unwrap();
            let d = f.nrows();
            let id = DMatrix::<f64>::identity(d, d);
            assert!((f.transpose() * &f - &id).amax() < 1e-10, "{spec}");
            // Real entries: conj(F_1) F_1 = F_1 F_1.
            assert!((&f * &f - &id).amax() < 1e-10, "{spec}");
            assert!((&f - f.transpose()).amax() < 1e-10, "{spec}");
        }
    }
}
