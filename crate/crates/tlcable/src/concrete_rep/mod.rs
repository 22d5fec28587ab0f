//! Matrix realization of the cabled category on `B = (+) M_{n_i}` with its delta-trace.
//!
//! The basis of `B` is the scaled matrix units `b_{beta,i,j} = (dim B / n_beta)^1/2 e^beta_ij`,
//! orthonormal for `psi = (+) (n_beta / dim B) Tr`. Basis index is
//! `offset_beta + i n_beta + j`; on `B^(x)k` the first factor is most significant.

mod eval;
mod kron;
mod norms;
mod tower;

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use nalgebra::{DMatrix, DVector};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::diagrams::TLDiagram;
use crate::error::{Error, Result};
use crate::qarith::q_from_delta;

pub use eval::DiagramImage;
pub use kron::{kron_dense, KronBasis};
pub use norms::{hs_norm, operator_norm, symmetric_extremes, DEFAULT_NORM_TOL};
pub use tower::{irrep_dimension, irrep_dimension_with, LevelStats, ProjectorTower};

/// Largest tensor dimension `(dim B)^k` built by default.
pub const DEFAULT_BUDGET: usize = 20_000;

/// Block sizes `n_i` of `B = (+) M_{n_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSpec {
    blocks: Vec<usize>,
}

impl AlgebraSpec {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::Domain("block sizes must be positive and nonempty".into()));
        }
        let spec = AlgebraSpec { blocks };
        if spec.dim_b() < 4 {
            return Err(Error::Domain(format!("dim B = {} is below 4", spec.dim_b())));
        }
        Ok(spec)
    }

    /// Parses a comma-separated block list such as `"1,1,1,1,1"` or `"2,1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let blocks = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("block {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(blocks)
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn dim_b(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    pub fn delta(&self) -> f64 {
        (self.dim_b() as f64).sqrt()
    }

    pub fn q(&self) -> f64 {
        q_from_delta(self.delta()).expect("dim B >= 4 gives delta >= 2").q
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|n| n.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for AlgebraSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// `m : B (x) B -> B` and `nu : C -> B` in the scaled matrix-unit basis, plus the
/// diagram evaluator. Immutable after construction apart from a memo of diagram images.
#[derive(Debug)]
pub struct StructureMaps {
    spec: AlgebraSpec,
    dim_b: usize,
    delta: f64,
    q: f64,
    budget: usize,
    offsets: Vec<usize>,
    m: DMatrix<f64>,
    nu: DVector<f64>,
    images: Mutex<FxHashMap<TLDiagram, Arc<DiagramImage>>>,
}

/// Builds the structure maps of `spec` with the default budget.
pub fn build_structure_maps(spec: &AlgebraSpec) -> StructureMaps {
    StructureMaps::new(spec)
}

impl StructureMaps {
    pub fn new(spec: &AlgebraSpec) -> Self {
        let dim_b = spec.dim_b();
        let mut offsets = Vec::with_capacity(spec.blocks.len());
        let mut off = 0;
        for &n in &spec.blocks {
            offsets.push(off);
            off += n * n;
        }
        let mut m = DMatrix::zeros(dim_b, dim_b * dim_b);
        let mut nu = DVector::zeros(dim_b);
        for (beta, &n) in spec.blocks.iter().enumerate() {
            let o = offsets[beta];
            let scale = (dim_b as f64 / n as f64).sqrt();
            for i in 0..n {
                nu[o + i * n + i] = (n as f64 / dim_b as f64).sqrt();
                for j in 0..n {
                    for l in 0..n {
                        let col = (o + i * n + j) * dim_b + (o + j * n + l);
                        m[(o + i * n + l, col)] = scale;
                    }
                }
            }
        }
        StructureMaps {
            spec: spec.clone(),
            dim_b,
            delta: spec.delta(),
            q: spec.q(),
            budget: DEFAULT_BUDGET,
            offsets,
            m,
            nu,
            images: Mutex::new(FxHashMap::default()),
        }
    }

    /// Same maps with a different tensor-dimension budget.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn m(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn nu(&self) -> &DVector<f64> {
        &self.nu
    }

    /// `(beta, i, j)` of a basis index of `B`.
    pub fn basis_label(&self, idx: usize) -> (usize, usize, usize) {
        let beta = self.offsets.iter().rposition(|&o| o <= idx).expect("offset 0 exists");
        let n = self.spec.blocks[beta];
        let r = idx - self.offsets[beta];
        (beta, r / n, r % n)
    }

    /// `(dim B)^factors`, or a resource error past the budget.
    pub fn tensor_dim(&self, factors: usize) -> Result<usize> {
        let mut d: usize = 1;
        for _ in 0..factors {
            d = d.saturating_mul(self.dim_b);
        }
        if d > self.budget {
            return Err(Error::Resource { needed: d, budget: self.budget });
        }
        Ok(d)
    }

    /// Largest deviation in `m m* = delta^2`, `nu* nu = 1`, associativity, both unit
    /// laws and the Frobenius relation `m* m = (m (x) 1)(1 (x) m*)`.
    pub fn invariant_residuals(&self) -> StructureResiduals {
        let d = self.dim_b;
        let id = DMatrix::<f64>::identity(d, d);
        let m = &self.m;
        let nu = DMatrix::from_column_slice(d, 1, self.nu.as_slice());
        let mm = m * m.transpose() - &id * (self.delta * self.delta);
        let nn = (nu.transpose() * &nu)[(0, 0)] - 1.0;
        let assoc = m * kron_dense(m, &id) - m * kron_dense(&id, m);
        let unit_r = m * kron_dense(&id, &nu) - &id;
        let unit_l = m * kron_dense(&nu, &id) - &id;
        let frob = m.transpose() * m - kron_dense(m, &id) * kron_dense(&id, &m.transpose());
        let max = |a: &DMatrix<f64>| a.amax();
        StructureResiduals {
            mm_star: max(&mm),
            nu_norm: nn.abs(),
            associativity: max(&assoc),
            unit: max(&unit_r).max(max(&unit_l)),
            frobenius: max(&frob),
        }
    }
}

/// Max-entry deviations of the structure-map identities.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StructureResiduals {
    pub mm_star: f64,
    pub nu_norm: f64,
    pub associativity: f64,
    pub unit: f64,
    pub frobenius: f64,
}

impl StructureResiduals {
    pub fn max(&self) -> f64 {
        [self.mm_star, self.nu_norm, self.associativity, self.unit, self.frobenius]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// `d_k` from `d_0 = 1`, `d_1 = dim B - 1`, `d_1 d_k = d_{k+1} + d_k + d_{k-1}`.
pub fn dimension_recursion(dim_b: u64, kmax: usize) -> Vec<u128> {
    let mut d: Vec<u128> = vec![1];
    if kmax >= 1 {
        d.push(dim_b as u128 - 1);
    }
    for k in 1..kmax {
        d.push(d[1] * d[k] - d[k] - d[k - 1]);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let s = AlgebraSpec::parse("1,1,1,1,1").unwrap();
        assert_eq!(s.dim_b(), 5);
        assert_eq!(s.to_string(), "1,1,1,1,1");
        assert_eq!("2,1".parse::<AlgebraSpec>().unwrap().dim_b(), 5);
        assert_eq!(AlgebraSpec::parse(" 2, 2 ").unwrap().dim_b(), 8);
        assert!(matches!(AlgebraSpec::parse("1,1,1"), Err(Error::Domain(_))));
        assert!(matches!(AlgebraSpec::parse("2,x"), Err(Error::Parse(_))));
        assert!(AlgebraSpec::parse("").is_err());
        assert!(AlgebraSpec::parse("0,2").is_err());
    }

    #[test]
    fn commutative_five_point_multiplication() {
        let s = StructureMaps::new(&AlgebraSpec::parse("1,1,1,1,1").unwrap());
        let r5 = 5f64.sqrt();
        for i in 0..5 {
            for j in 0..5 {
                for out in 0..5 {
                    let want = if i == j && out == i { r5 } else { 0.0 };
                    assert!((s.m()[(out, i * 5 + j)] - want).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn matrix_block_parameters() {
        let s = StructureMaps::new(&AlgebraSpec::parse("2").unwrap());
        assert_eq!(s.delta(), 2.0);
        assert_eq!(s.q(), 1.0);
        // psi(1) = 1 means nu has unit norm; psi = Tr(Q .) with Q = I/2.
        assert!((s.nu().norm() - 1.0).abs() < 1e-15);
        assert_eq!(s.basis_label(3), (0, 1, 1));
    }

    #[test]
    fn structure_identities_for_several_algebras() {
        for spec in ["1,1,1,1", "1,1,1,1,1", "2", "2,1", "2,2", "1,1,1,1,1,1", "3,1", "2,1,1"] {
            let s = StructureMaps::new(&AlgebraSpec::parse(spec).unwrap());
            let r = s.invariant_residuals();
            assert!(r.max() < 1e-10, "{spec}: {r:?}");
        }
    }

    #[test]
    fn budget_refusal() {
        let s = StructureMaps::new(&AlgebraSpec::parse("2,2").unwrap());
        assert_eq!(s.tensor_dim(4).unwrap(), 4096);
        assert!(matches!(s.tensor_dim(5), Err(Error::Resource { needed: 32768, budget: 20000 })));
        let s = s.with_budget(64);
        assert!(s.tensor_dim(2).is_ok() && s.tensor_dim(3).is_err());
    }

    #[test]
    fn fusion_dimension_identity() {
        for dim_b in [4u64, 5, 6, 8, 9] {
            let d = dimension_recursion(dim_b, 12);
            for n in 0..=6usize {
                for k in 0..=6usize {
                    let rhs: u128 = (0..=2 * n.min(k)).map(|r| d[n + k - r]).sum();
                    assert_eq!(d[n] * d[k], rhs, "dim B = {dim_b}, n = {n}, k = {k}");
                }
            }
        }
        assert_eq!(dimension_recursion(5, 6), vec![1, 4, 11, 29, 76, 199, 521]);
        assert_eq!(dimension_recursion(4, 5), vec![1, 3, 5, 7, 9, 11]);
    }
}
