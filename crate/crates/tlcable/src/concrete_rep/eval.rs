//! Diagram evaluation as a shaded planar-algebra state sum.
//!
//! Boundary points are ordered circularly: bottom left to right, then top right to
//! left. Segment `g_c` joins points `c` and `c+1`; even segments are the shaded
//! interiors of tensor factors, labelled by a block `beta`, odd ones are unshaded.
//! Every strand carries a matrix index of its shaded side. A cap or cup weighs
//! `(n_beta / delta)^1/2` when its inside is shaded and `(delta / n_beta)^1/2`
//! otherwise; through strands weigh 1. This reproduces `delta^1/2 nu*` for a cap
//! inside a factor and `delta^-1/2 m` for a cap between factors, and is
//! isotopy invariant, so composition picks up `delta` per closed loop.

use std::sync::Arc;

use nalgebra::DMatrix;

use super::StructureMaps;
use crate::diagrams::TLDiagram;
use crate::error::{Error, Result};
use crate::tl_elements::{NumElement, TLElement};

/// Sparse image of one diagram: `(row, column, weight)` triples.
#[derive(Clone, Debug)]
pub struct DiagramImage {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(u32, u32, f64)>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra] = rb;
    }
}

#[derive(Clone, Copy)]
enum ArcKind {
    ShadedInside,
    ShadedOutside,
    Through,
}

impl StructureMaps {
    fn check_even(d: &TLDiagram) -> Result<()> {
        for g in [d.bottom(), d.top()] {
            if g % 2 == 1 {
                return Err(Error::NotRepresentable(g));
            }
        }
        Ok(())
    }

    /// Sparse image of `d`, memoized per diagram.
    pub fn diagram_image(&self, d: &TLDiagram) -> Result<Arc<DiagramImage>> {
        Self::check_even(d)?;
        if let Some(img) = self.images.lock().expect("image cache").get(d) {
            return Ok(img.clone());
        }
        let img = Arc::new(self.build_image(d)?);
        self.images.lock().expect("image cache").insert(d.clone(), img.clone());
        Ok(img)
    }

    fn build_image(&self, d: &TLDiagram) -> Result<DiagramImage> {
        let (b, t) = (d.bottom(), d.top());
        let rows = self.tensor_dim(t / 2)?;
        let cols = self.tensor_dim(b / 2)?;
        let n = b + t;
        if n == 0 {
            return Ok(DiagramImage { rows, cols, entries: vec![(0, 0, 1.0)] });
        }
        let circ = |p: usize| if p < b { p } else { b + (t - 1 - (p - b)) };
        let mut parent: Vec<usize> = (0..n).collect();
        // (endpoint, endpoint, shaded segment, kind)
        let mut arcs: Vec<(usize, usize, usize, ArcKind)> = Vec::new();
        for p in 0..n {
            let q = d.partner(p);
            if q < p {
                continue;
            }
            let (c1, c2) = (circ(p).min(circ(q)), circ(p).max(circ(q)));
            union(&mut parent, c1, c2 - 1);
            union(&mut parent, (c1 + n - 1) % n, c2);
            let same_side = (p < b) == (q < b);
            let (seg, kind) = match (same_side, c1 % 2 == 0) {
                (true, true) => (c1, ArcKind::ShadedInside),
                (true, false) => (c1 - 1, ArcKind::ShadedOutside),
                (false, even) => (if even { c1 } else { c1 - 1 }, ArcKind::Through),
            };
            arcs.push((p, q, seg, kind));
        }
        // Shaded regions and the region of every arc.
        let mut region_of_root = vec![usize::MAX; n];
        let mut n_regions = 0;
        for s in (0..n).step_by(2) {
            let r = find(&mut parent, s);
            if region_of_root[r] == usize::MAX {
                region_of_root[r] = n_regions;
                n_regions += 1;
            }
        }
        let mut seg_region = |s: usize| region_of_root[find(&mut parent, s)];
        let arc_region: Vec<usize> = arcs.iter().map(|a| seg_region(a.2)).collect();
        let bottom_factor_region: Vec<usize> = (0..b / 2).map(|j| seg_region(2 * j)).collect();
        let top_factor_region: Vec<usize> = (0..t / 2).map(|j| seg_region(b + t - 2 - 2 * j)).collect();
        let mut arc_at = vec![0usize; n];
        for (i, a) in arcs.iter().enumerate() {
            arc_at[a.0] = i;
            arc_at[a.1] = i;
        }

        let blocks = self.spec.blocks();
        let dim_b = self.dim_b;
        let place = |factors: usize, j: usize| dim_b.pow((factors - 1 - j) as u32);
        let mut entries = Vec::new();
        let mut labels = vec![0usize; n_regions];
        'labels: loop {
            let size = |a: usize| blocks[labels[arc_region[a]]];
            let mut weight = 1.0;
            for (a, arc) in arcs.iter().enumerate() {
                let nb = size(a) as f64;
                weight *= match arc.3 {
                    ArcKind::ShadedInside => (nb / self.delta).sqrt(),
                    ArcKind::ShadedOutside => (self.delta / nb).sqrt(),
                    ArcKind::Through => 1.0,
                };
            }
            // Row and column are affine in the arc indices.
            let mut base_row = 0;
            let mut base_col = 0;
            let mut step_row = vec![0usize; arcs.len()];
            let mut step_col = vec![0usize; arcs.len()];
            for j in 0..b / 2 {
                let beta = labels[bottom_factor_region[j]];
                let w = place(b / 2, j);
                base_col += self.offsets[beta] * w;
                step_col[arc_at[2 * j]] += blocks[beta] * w;
                step_col[arc_at[2 * j + 1]] += w;
            }
            for j in 0..t / 2 {
                let beta = labels[top_factor_region[j]];
                let w = place(t / 2, j);
                base_row += self.offsets[beta] * w;
                step_row[arc_at[b + 2 * j]] += blocks[beta] * w;
                step_row[arc_at[b + 2 * j + 1]] += w;
            }
            let mut idx = vec![0usize; arcs.len()];
            let (mut row, mut col) = (base_row, base_col);
            'indices: loop {
                entries.push((row as u32, col as u32, weight));
                for a in 0..arcs.len() {
                    idx[a] += 1;
                    row += step_row[a];
                    col += step_col[a];
                    if idx[a] < size(a) {
                        continue 'indices;
                    }
                    row -= step_row[a] * idx[a];
                    col -= step_col[a] * idx[a];
                    idx[a] = 0;
                }
                break;
            }
            for l in labels.iter_mut() {
                *l += 1;
                if *l < blocks.len() {
                    continue 'labels;
                }
                *l = 0;
            }
            break;
        }
        Ok(DiagramImage { rows, cols, entries })
    }

    /// Dense matrix of a single diagram.
    pub fn evaluate_diagram(&self, d: &TLDiagram) -> Result<DMatrix<f64>> {
        let img = self.diagram_image(d)?;
        let mut out = DMatrix::zeros(img.rows, img.cols);
        for &(r, c, w) in &img.entries {
            out[(r as usize, c as usize)] += w;
        }
        Ok(out)
    }

    /// Dense matrix of a numeric element.
    pub fn represent_numeric(&self, x: &NumElement) -> Result<DMatrix<f64>> {
        Self::check_grading(x.bottom(), x.top())?;
        let mut out = DMatrix::zeros(self.tensor_dim(x.top() / 2)?, self.tensor_dim(x.bottom() / 2)?);
        for (d, c) in x.terms() {
            for &(r, col, w) in &self.diagram_image(d)?.entries {
                out[(r as usize, col as usize)] += c * w;
            }
        }
        Ok(out)
    }

    /// Dense matrix of an exact element, coefficients evaluated at this `q`.
    pub fn represent(&self, x: &TLElement) -> Result<DMatrix<f64>> {
        Self::check_grading(x.bottom(), x.top())?;
        self.represent_numeric(&x.evaluate(self.q))
    }

    /// `represent(x) * input` without forming `represent(x)`.
    pub fn apply_numeric(&self, x: &NumElement, input: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        Self::check_grading(x.bottom(), x.top())?;
        let cols_in = self.tensor_dim(x.bottom() / 2)?;
        let rows_out = self.tensor_dim(x.top() / 2)?;
        if input.nrows() != cols_in {
            return Err(Error::Grading(format!("input has {} rows, expected {cols_in}", input.nrows())));
        }
        let k = input.ncols();
        // Work on transposed storage so each row of the operand is contiguous.
        let inp = input.transpose();
        let src = inp.as_slice();
        let mut out = vec![0.0; k * rows_out];
        for (d, c) in x.terms() {
            for &(r, col, w) in &self.diagram_image(d)?.entries {
                let s = c * w;
                let (r, col) = (r as usize, col as usize);
                let dst = &mut out[r * k..(r + 1) * k];
                for (o, i) in dst.iter_mut().zip(&src[col * k..(col + 1) * k]) {
                    *o += s * i;
                }
            }
        }
        Ok(DMatrix::from_vec(k, rows_out, out).transpose())
    }

    /// `represent(x) * input` for an exact element.
    pub fn apply(&self, x: &TLElement, input: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        Self::check_grading(x.bottom(), x.top())?;
        self.apply_numeric(&x.evaluate(self.q), input)
    }

    fn check_grading(bottom: usize, top: usize) -> Result<()> {
        for g in [bottom, top] {
            if g % 2 == 1 {
                return Err(Error::NotRepresentable(g));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{hs_norm, operator_norm, AlgebraSpec, DEFAULT_NORM_TOL};
    use super::*;
    use crate::diagrams::{adjoint, compose, enumerate_diagrams, tensor};
    use crate::tl_elements::{generator_t, jones_wenzl, multiplication_m, unit_nu, Rho};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn maps(spec: &str) -> StructureMaps {
        StructureMaps::new(&AlgebraSpec::parse(spec).unwrap())
    }

    #[test]
    fn elementary_images() {
        for spec in ["1,1,1,1,1", "2,1", "2,2"] {
            let s = maps(spec);
            let db = s.dim_b();
            let delta = s.delta();
            let id = s.evaluate_diagram(&TLDiagram::identity(2)).unwrap();
            assert!((id - DMatrix::<f64>::identity(db, db)).amax() < 1e-15);
            let nu = DMatrix::from_column_slice(db, 1, s.nu().as_slice());
            let cap_cup = tensor(&TLDiagram::empty(), &TLDiagram::hook(2, 0));
            let e = s.evaluate_diagram(&cap_cup).unwrap();
            assert!((e - &nu * nu.transpose() * delta).amax() < 1e-14, "{spec}");
            let bar_cap =
                tensor(&tensor(&TLDiagram::identity(1), &TLDiagram::cap()), &TLDiagram::identity(1));
            let m = s.evaluate_diagram(&bar_cap).unwrap();
            assert!((m - s.m() / delta.sqrt()).amax() < 1e-14, "{spec}");
            let cup = s.evaluate_diagram(&TLDiagram::cup()).unwrap();
            assert!((cup - &nu * delta.sqrt()).amax() < 1e-14);
        }
    }

    #[test]
    fn odd_gradings_are_refused() {
        let s = maps("1,1,1,1,1");
        assert!(matches!(s.evaluate_diagram(&TLDiagram::identity(3)), Err(Error::NotRepresentable(3))));
        let x = TLElement::identity(1);
        assert!(matches!(s.represent(&x), Err(Error::NotRepresentable(1))));
    }

    #[test]
    fn generator_images() {
        let s = maps("2,1");
        let m = s.represent(&multiplication_m()).unwrap();
        assert!((&m - s.m()).amax() < 1e-13);
        assert!((operator_norm(&m, DEFAULT_NORM_TOL) - s.delta()).abs() < 1e-8);
        let nu = s.represent(&unit_nu()).unwrap();
        assert!((nu.column(0) - s.nu()).amax() < 1e-14);
        let t = s.represent(&generator_t(1, 1)).unwrap();
        assert!((t * s.delta() - m.transpose()).amax() < 1e-13);
    }

    #[test]
    fn functoriality_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let lists: Vec<Vec<Vec<TLDiagram>>> = (0..=4)
            .map(|a| (0..=4).map(|b| enumerate_diagrams(2 * a, 2 * b)).collect())
            .collect();
        for spec in ["1,1,1,1,1", "2,1"] {
            let s = maps(spec);
            for _ in 0..100 {
                let (a, b, c) = (rng.gen_range(0..=4), rng.gen_range(0..=4), rng.gen_range(0..=4));
                let x = &lists[b][c][rng.gen_range(0..lists[b][c].len())];
                let y = &lists[a][b][rng.gen_range(0..lists[a][b].len())];
                let (loops, xy) = compose(x, y).unwrap();
                let lhs = s.evaluate_diagram(&xy).unwrap() * s.delta().powi(loops as i32);
                let rhs = s.evaluate_diagram(x).unwrap() * s.evaluate_diagram(y).unwrap();
                assert!((lhs - rhs).amax() < 1e-9, "{spec}: {x:?} . {y:?}");
                let adj = s.evaluate_diagram(&adjoint(x)).unwrap();
                assert!((adj - s.evaluate_diagram(x).unwrap().transpose()).amax() < 1e-12);
            }
            for _ in 0..20 {
                let (a, b, c, e) = (rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2));
                let x = &lists[a][b][rng.gen_range(0..lists[a][b].len())];
                let y = &lists[c][e][rng.gen_range(0..lists[c][e].len())];
                let lhs = s.evaluate_diagram(&tensor(x, y)).unwrap();
                let rhs = s.evaluate_diagram(x).unwrap().kronecker(&s.evaluate_diagram(y).unwrap());
                assert!((lhs - rhs).amax() < 1e-12);
            }
        }
    }

    #[test]
    fn projections_are_orthogonal_projections() {
        let s = maps("1,1,1,1,1");
        for k in 1..=3 {
            let p = s.represent(&jones_wenzl(2 * k).unwrap()).unwrap();
            assert!((&p * &p - &p).amax() < 1e-9, "k = {k}");
            assert!((&p - p.transpose()).amax() < 1e-12);
            let rank = [1.0, 4.0, 11.0, 29.0][k];
            assert!((p.trace() - rank).abs() < 1e-9);
            assert!((hs_norm(&p) - (rank as f64).sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn t2_is_an_isometry() {
        for spec in ["1,1,1,1,1", "2,2", "3"] {
            let s = maps(spec);
            let t2 = Rho::new(1, 1, 0).unwrap().morphism().unwrap();
            let t = s.represent(&t2).unwrap();
            assert_eq!(t.shape(), (s.dim_b().pow(2), 1));
            assert!(((t.transpose() * &t)[(0, 0)] - 1.0).abs() < 1e-12, "{spec}");
        }
    }

    #[test]
    fn sparse_apply_matches_dense() {
        let s = maps("2,1");
        let p = jones_wenzl(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = DMatrix::from_fn(25, 3, |_, _| rng.gen_range(-1.0..1.0));
        let dense = s.represent(&p).unwrap() * &x;
        assert!((s.apply(&p, &x).unwrap() - dense).amax() < 1e-12);
        assert!(matches!(s.apply(&p, &DMatrix::zeros(5, 1)), Err(Error::Grading(_))));
    }
}
