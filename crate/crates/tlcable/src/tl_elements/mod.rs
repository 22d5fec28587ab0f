//! The graded algebra `TL_{k,l}(delta)` and its named morphisms.
//!
//! The cabled object `k` is `2k` strands. Structure maps in bare-diagram form:
//! `nu = delta^-1/2 cup`, `m = delta^1/2 |cap|`, `m* = delta^1/2 |cup|`.
//! Jones-Wenzl projections come from the one-step Frenkel-Khovanov recursion;
//! Wenzl's recursion is kept as an independent oracle.

pub mod exact;
pub mod numeric;

use std::sync::{Arc, Mutex, OnceLock};

pub use exact::TLElement;
pub use numeric::NumElement;

use crate::diagrams::{tensor, TLDiagram};
use crate::error::{Error, Result};
use crate::qarith::{coupling_constant_cyclo, fusion_defect, CycloMonomial, Surd};

fn qint(n: usize) -> CycloMonomial {
    CycloMonomial::q_integer(n as u32)
}

/// Strand gradings `(2a, 2b)` of a morphism from object `a` to object `b`.
pub fn cabled_grading(source: usize, target: usize) -> (usize, usize) {
    (2 * source, 2 * target)
}

/// Object indices `(a, b)` of an element between cabled objects; `None` for odd gradings.
pub fn object_grading(x: &TLElement) -> Option<(usize, usize)> {
    (x.bottom() % 2 == 0 && x.top() % 2 == 0).then(|| (x.bottom() / 2, x.top() / 2))
}

/// `delta^(e/2)` for `e = +-1`.
pub fn delta_half_power(e: i32) -> Surd {
    Surd::sqrt(&qint(2).pow(e))
}

fn diagram_chain(parts: &[TLDiagram]) -> TLDiagram {
    parts.iter().skip(1).fold(parts[0].clone(), |acc, d| tensor(&acc, d))
}

/// `t(k,l) = delta^-1/2 (1_k (x) cup (x) 1_l)` in `TL_{k+l, k+l+2}`.
pub fn generator_t(k: usize, l: usize) -> TLElement {
    let d = diagram_chain(&[TLDiagram::identity(k), TLDiagram::cup(), TLDiagram::identity(l)]);
    TLElement::from_diagram(d).scale(&delta_half_power(-1)).expect("scaling a single diagram")
}

/// Unit `nu : C -> B`, an element of `TL_{0,2}`.
pub fn unit_nu() -> TLElement {
    generator_t(0, 0)
}

/// Multiplication `m : B (x) B -> B`, `delta t(1,1)* = delta^1/2 |cap|` in `TL_{4,2}`.
pub fn multiplication_m() -> TLElement {
    let d = diagram_chain(&[TLDiagram::identity(1), TLDiagram::cap(), TLDiagram::identity(1)]);
    TLElement::from_diagram(d).scale(&delta_half_power(1)).expect("scaling a single diagram")
}

/// `m* : B -> B (x) B` in `TL_{2,4}`.
pub fn comultiplication_m_star() -> TLElement {
    multiplication_m().adjoint()
}

/// The bare diagram `1_(r-1) (x) cup (x) 1_(y-r-1) (x) cap` in `TL_y`, `1 <= r <= y-1`.
fn fk_hook(y: usize, r: usize) -> TLDiagram {
    diagram_chain(&[
        TLDiagram::identity(r - 1),
        TLDiagram::cup(),
        TLDiagram::identity(y - r - 1),
        TLDiagram::cap(),
    ])
}

fn jw_cache() -> &'static Mutex<Vec<Arc<TLElement>>> {
    static CACHE: OnceLock<Mutex<Vec<Arc<TLElement>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// One Frenkel-Khovanov step `F_y = 1 - sum_{r=1}^{y-1} (-1)^(y-r-1) [r]/[y] H_{y,r}`,
/// so that `p_y = F_y (p_{y-1} (x) 1)`. `H_{y,r}` is the bare diagram with a top
/// cup at strands `r, r+1` and a bottom cap at strands `y-1, y`; the two `t_1`
/// normalizations cancel the `[2]`. Requires `y >= 2`.
pub fn fk_operator(y: usize) -> Result<TLElement> {
    if y < 2 {
        return Err(Error::Domain(format!("FK step needs y >= 2, got {y}")));
    }
    let mut acc = TLElement::identity(y);
    for r in 1..y {
        let mut coef = Surd::from_monomial(qint(r).div(&qint(y)));
        if (y - r - 1) % 2 == 1 {
            coef = coef.neg();
        }
        acc = acc.sub(&TLElement::from_diagram(fk_hook(y, r)).scale(&coef)?)?;
    }
    Ok(acc)
}

/// Jones-Wenzl projection `p_y` (memoized), built by [`fk_operator`] steps.
pub fn jones_wenzl(y: usize) -> Result<Arc<TLElement>> {
    if let Some(p) = jw_cache().lock().expect("cache lock").get(y) {
        return Ok(p.clone());
    }
    let p = if y <= 1 {
        TLElement::identity(y)
    } else {
        let base = jones_wenzl(y - 1)?.tensor(&TLElement::identity(1))?;
        fk_operator(y)?.mul(&base)?
    };
    let mut cache = jw_cache().lock().expect("cache lock");
    while cache.len() < y {
        // Filled by the recursive call above; only reachable under a race.
        drop(cache);
        jones_wenzl(y - 1)?;
        cache = jw_cache().lock().expect("cache lock");
    }
    if cache.len() == y {
        cache.push(Arc::new(p));
    }
    Ok(cache[y].clone())
}

/// Wenzl's recursion `p_y = p' - [y-1]/[y] p' E p'`, `p' = p_{y-1} (x) 1`,
/// `E` the bare hook on the last two strands. Not memoized; used as an oracle.
pub fn jones_wenzl_wenzl(y: usize) -> Result<TLElement> {
    let mut p = TLElement::identity(y.min(1));
    for n in 2..=y {
        let pp = p.tensor(&TLElement::identity(1))?;
        let e = TLElement::from_diagram(TLDiagram::hook(n, n - 2));
        let sandwich = pp.mul(&e)?.mul(&pp)?;
        let c = Surd::from_monomial(qint(n - 1).div(&qint(n)));
        p = pp.sub(&sandwich.scale(&c)?)?;
    }
    Ok(p)
}

/// `r` nested cups in `TL_{0,2r}`.
pub fn nested_cups(r: usize) -> TLDiagram {
    let p: Vec<usize> = (0..2 * r).map(|i| 2 * r - 1 - i).collect();
    TLDiagram::new(0, 2 * r, &p).expect("nested cups are planar")
}

fn t_cache() -> &'static Mutex<Vec<Option<Arc<TLElement>>>> {
    static CACHE: OnceLock<Mutex<Vec<Option<Arc<TLElement>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// `t_r = [r+1]^-1/2 (p_r (x) p_r) cup^(r)` in `TL_{0,2r}` (memoized).
pub fn nested_cup_morphism(r: usize) -> Result<Arc<TLElement>> {
    if let Some(Some(t)) = t_cache().lock().expect("cache lock").get(r) {
        return Ok(t.clone());
    }
    let p = jones_wenzl(r)?;
    let cups = TLElement::from_diagram(nested_cups(r));
    let right = TLElement::identity(r).tensor(&p)?.mul(&cups)?;
    let both = p.tensor(&TLElement::identity(r))?.mul(&right)?;
    let t = Arc::new(both.scale(&Surd::sqrt(&qint(r + 1).inv()))?);
    let mut cache = t_cache().lock().expect("cache lock");
    if cache.len() <= r {
        cache.resize(r + 1, None);
    }
    cache[r] = Some(t.clone());
    Ok(t)
}

/// `1_a (x) x (x) 1_b`.
pub fn pad(a: usize, x: &TLElement, b: usize) -> Result<TLElement> {
    TLElement::identity(a).tensor(x)?.tensor(&TLElement::identity(b))
}

/// The remark forms of `t_{2k}` built from `t_{2k-2}` and `t_2`; index 0 puts the
/// projection on the right factor, index 1 on the left.
pub fn t2k_remark_forms(k: usize) -> Result<[TLElement; 2]> {
    assert!(k >= 1);
    let t2 = nested_cup_morphism(2)?;
    let prev = nested_cup_morphism(2 * k - 2)?;
    let mid = pad(2 * k - 2, &t2, 2 * k - 2)?.mul(&prev)?;
    let p = jones_wenzl(2 * k)?;
    let c = Surd::sqrt(&qint(2 * k - 1).mul(&qint(3)).div(&qint(2 * k + 1)));
    let right = TLElement::identity(2 * k).tensor(&p)?.mul(&mid)?.scale(&c)?;
    let left = p.tensor(&TLElement::identity(2 * k))?.mul(&mid)?.scale(&c)?;
    Ok([right, left])
}

/// `t_{2(a+b)}` from the two-factor recursion with `t_{2a}` inside `t_{2b}`... in
/// the order `(p (x) p)(1_{2a} (x) t_{2b} (x) 1_{2a}) t_{2a}`.
pub fn t2k_split(a: usize, b: usize) -> Result<TLElement> {
    let n = 2 * (a + b);
    let p = jones_wenzl(n)?;
    let inner = pad(2 * a, &*nested_cup_morphism(2 * b)?, 2 * a)?.mul(&*nested_cup_morphism(2 * a)?)?;
    let right = TLElement::identity(n).tensor(&p)?.mul(&inner)?;
    let both = p.tensor(&TLElement::identity(n))?.mul(&right)?;
    let c = Surd::sqrt(&qint(2 * a + 1).mul(&qint(2 * b + 1)).div(&qint(2 * a + 2 * b + 1)));
    both.scale(&c)
}

/// True iff the nested-cup definition of `t_{2k}`, every split of the two-factor
/// recursion, and both remark forms agree exactly.
pub fn t2k_recursion_check(k: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let t = nested_cup_morphism(2 * k)?;
    for a in 0..=k {
        if t2k_split(a, k - a)? != *t {
            return Ok(false);
        }
    }
    let [r, l] = t2k_remark_forms(k)?;
    Ok(r == *t && l == *t)
}

/// `1_{2n-r} (x) t_r (x) 1_{2k-r}` for odd `r = 2s+1` rebuilt from `t_{2s}` and `m*`.
pub fn odd_t_expansion(n: usize, k: usize, r: usize) -> Result<TLElement> {
    assert!(r % 2 == 1 && r <= 2 * n.min(k));
    let s = (r - 1) / 2;
    let p = jones_wenzl(r)?;
    let proj = pad(2 * n - r, &p.tensor(&p)?, 2 * k - r)?;
    let core = pad(2, &*nested_cup_morphism(2 * s)?, 2)?.mul(&comultiplication_m_star())?;
    let inner = pad(2 * n - 2 * s - 2, &core, 2 * k - 2 * s - 2)?;
    let c = Surd::sqrt(&qint(2 * s + 1).div(&qint(2 * s + 2).mul(&qint(2))));
    proj.mul(&inner)?.scale(&c)
}

/// The canonical intertwiner of `U^l` into `U^n (x) U^k`, kept in factored form
/// `rho = factor . p_{2l}` with `factor = (p_{2n} (x) p_{2k}) skeleton` and
/// `skeleton = 1_{2n-r} (x) t_r (x) 1_{2k-r}`.
#[derive(Clone, Debug)]
pub struct Rho {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub r: usize,
    pub skeleton: TLElement,
    pub factor: TLElement,
}

impl Rho {
    pub fn new(n: usize, k: usize, l: usize) -> Result<Self> {
        let r = fusion_defect(n, k, l).ok_or(Error::Fusion { n, k, l })?;
        let skeleton = pad(2 * n - r, &*nested_cup_morphism(r)?, 2 * k - r)?;
        let right = TLElement::identity(2 * n).tensor(&*jones_wenzl(2 * k)?)?.mul(&skeleton)?;
        let factor = jones_wenzl(2 * n)?.tensor(&TLElement::identity(2 * k))?.mul(&right)?;
        Ok(Rho { n, k, l, r, skeleton, factor })
    }

    /// The full morphism `factor . p_{2l}`.
    pub fn morphism(&self) -> Result<TLElement> {
        self.factor.mul(&*jones_wenzl(2 * self.l)?)
    }

    /// `skeleton* . factor`, equal to `factor* . factor` since the projection part
    /// is idempotent and self-adjoint. `rho* rho = p_{2l} inner p_{2l}`.
    pub fn gram_inner(&self) -> Result<TLElement> {
        self.skeleton.adjoint().mul(&self.factor)
    }

    /// Identity coefficient of [`Rho::gram_inner`]. Every other diagram of `TL_{2l}`
    /// has a cap that `p_{2l}` kills, so `rho* rho` is this value times `p_{2l}`.
    pub fn gram_scalar(&self) -> Result<crate::qarith::QRationalFunction> {
        self.skeleton.adjoint().product_identity_coefficient(&self.factor)
    }

    /// `rho* rho` computed literally.
    pub fn gram_literal(&self) -> Result<TLElement> {
        let p = jones_wenzl(2 * self.l)?;
        p.mul(&self.gram_inner()?)?.mul(&p)
    }
}

/// Full intertwiner `rho_l^{n (x) k}` as a single element.
pub fn rho_morphism(n: usize, k: usize, l: usize) -> Result<TLElement> {
    Rho::new(n, k, l)?.morphism()
}

/// Index of a member of the isometry family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

/// Fusion triple `(n, k, l)` behind `phi^{(alpha)}_{k,side}`: the left members
/// embed `U^k` into `U^1 (x) U^{k+alpha}`, the right ones into `U^{k+alpha} (x) U^1`.
pub fn phi_triple(k: usize, alpha: i32, side: Side) -> (usize, usize, usize) {
    let other = (k as i64 + alpha as i64) as usize;
    match side {
        Side::L => (1, other, k),
        Side::R => (other, 1, k),
    }
}

/// `C^-1/2 rho` for the triple of `phi^{(alpha)}_{k,side}`, factored like [`Rho`].
#[derive(Clone, Debug)]
pub struct Phi {
    pub k: usize,
    pub alpha: i32,
    pub side: Side,
    pub rho: Rho,
    /// `C^-1/2` applied to the factor.
    pub scaled_factor: TLElement,
}

impl Phi {
    pub fn new(k: usize, alpha: i32, side: Side) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("the isometry family starts at k = 1".into()));
        }
        if !(-1..=1).contains(&alpha) {
            return Err(Error::Domain(format!("alpha = {alpha} must be -1, 0 or 1")));
        }
        let (n, kk, l) = phi_triple(k, alpha, side);
        let rho = Rho::new(n, kk, l)?;
        let c = coupling_constant_cyclo(n, kk, l)?;
        let scaled_factor = rho.factor.scale(&Surd::sqrt(&c.inv()))?;
        Ok(Phi { k, alpha, side, rho, scaled_factor })
    }

    /// The full element `C^-1/2 rho` including the trailing `p_{2k}`.
    pub fn element(&self) -> Result<TLElement> {
        self.scaled_factor.mul(&*jones_wenzl(2 * self.k)?)
    }
}

/// All six members `phi^{(alpha)}_{k,side}` for `alpha = +1, 0, -1`, left then right.
pub fn phi_family(k: usize) -> Result<Vec<Phi>> {
    let mut out = Vec::with_capacity(6);
    for alpha in [1, 0, -1] {
        for side in [Side::L, Side::R] {
            out.push(Phi::new(k, alpha, side)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::enumerate_diagrams;
    use crate::qarith::{coupling_constant, q_integer};

    fn sq(c: CycloMonomial) -> Surd {
        Surd::sqrt(&c)
    }

    #[test]
    fn generator_relations() {
        for n in 0..=4usize {
            for k in 0..=n {
                let l = n - k;
                let t = generator_t(k, l);
                assert_eq!(t.adjoint().mul(&t).unwrap(), TLElement::identity(k + l));
            }
        }
        for n in 0..=3usize {
            for k in 0..=n {
                let l = n - k;
                let lhs = generator_t(k, l + 1).adjoint().mul(&generator_t(k + 1, l)).unwrap();
                let rhs = TLElement::identity(k + l + 1).scale_monomial(&qint(2).inv()).unwrap();
                assert_eq!(lhs, rhs, "({k},{l})");
            }
        }
    }

    #[test]
    fn structure_maps_in_diagram_form() {
        // m = delta t(1,1)*
        let m = multiplication_m();
        let alt = generator_t(1, 1).adjoint().scale_monomial(&qint(2)).unwrap();
        assert_eq!(m, alt);
        // m* = [2] (1 (x) t_1 (x) 1)
        let t1 = nested_cup_morphism(1).unwrap();
        let rhs = pad(1, &t1, 1).unwrap().scale_monomial(&qint(2)).unwrap();
        assert_eq!(comultiplication_m_star(), rhs);
        // p_2 = 1 - nu nu*
        let nu = unit_nu();
        let p2 = TLElement::identity(2).sub(&nu.mul(&nu.adjoint()).unwrap()).unwrap();
        assert_eq!(*jones_wenzl(2).unwrap(), p2);
    }

    #[test]
    fn small_projections() {
        assert_eq!(*jones_wenzl(0).unwrap(), TLElement::identity(0));
        assert_eq!(*jones_wenzl(1).unwrap(), TLElement::identity(1));
        let p2 = jones_wenzl(2).unwrap();
        let e = TLElement::from_diagram(TLDiagram::hook(2, 0)).scale_monomial(&qint(2).inv()).unwrap();
        assert_eq!(*p2, TLElement::identity(2).sub(&e).unwrap());
    }

    #[test]
    fn fk_matches_wenzl_through_six() {
        for y in 0..=6 {
            assert_eq!(*jones_wenzl(y).unwrap(), jones_wenzl_wenzl(y).unwrap(), "y = {y}");
        }
    }

    #[test]
    fn projection_properties_through_six() {
        for y in 0..=6 {
            let p = jones_wenzl(y).unwrap();
            assert_eq!(p.mul(&p).unwrap(), *p);
            assert_eq!(p.adjoint(), *p);
            assert!(p.identity_coefficient().unwrap().is_one());
            for r in 0..y.saturating_sub(1) {
                let e = TLElement::from_diagram(TLDiagram::hook(y, r));
                assert!(p.mul(&e).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn absorption_through_six() {
        for total in 0..=6usize {
            let p = jones_wenzl(total).unwrap();
            for x in 0..=total {
                let pp = jones_wenzl(x).unwrap().tensor(&jones_wenzl(total - x).unwrap()).unwrap();
                assert_eq!(pp.mul(&p).unwrap(), *p);
                assert_eq!(p.mul(&pp).unwrap(), *p);
            }
        }
    }

    #[test]
    fn cabled_gradings() {
        assert_eq!(cabled_grading(1, 3), (2, 6));
        assert_eq!(object_grading(&multiplication_m()), Some((2, 1)));
        assert_eq!(object_grading(&generator_t(1, 0)), None);
    }

    #[test]
    fn nested_cup_isometries() {
        assert_eq!(*nested_cup_morphism(0).unwrap(), TLElement::identity(0));
        for r in 0..=5 {
            let t = nested_cup_morphism(r).unwrap();
            assert_eq!(t.adjoint().mul(&t).unwrap(), TLElement::identity(0), "r = {r}");
        }
    }

    #[test]
    fn t2_from_structure_maps() {
        let nu = unit_nu();
        let ms = comultiplication_m_star();
        let base = ms.mul(&nu).unwrap();
        let p2 = jones_wenzl(2).unwrap();
        let t2 = nested_cup_morphism(2).unwrap();
        let c = sq(qint(3).inv());
        let both = p2.tensor(&p2).unwrap().mul(&base).unwrap().scale(&c).unwrap();
        assert_eq!(both, *t2);
        let right = pad(2, &p2, 0).unwrap().mul(&base).unwrap().scale(&c).unwrap();
        let left = pad(0, &p2, 2).unwrap().mul(&base).unwrap().scale(&c).unwrap();
        assert_eq!(right, *t2);
        assert_eq!(left, *t2);
        // the square-root power +1/2 on [3] does not give an isometry
        let wrong = pad(2, &p2, 0).unwrap().mul(&base).unwrap().scale(&sq(qint(3))).unwrap();
        assert_ne!(wrong, *t2);
    }

    #[test]
    fn t2k_recursions_agree() {
        for k in 1..=2 {
            assert!(t2k_recursion_check(k).unwrap(), "k = {k}");
        }
        assert!(t2k_recursion_check(0).is_err());
    }

    #[test]
    fn odd_t_matches_expansion() {
        for (n, k, r) in [(1, 1, 1), (1, 2, 1), (2, 2, 3), (2, 3, 3)] {
            let direct = pad(2 * n - r, &nested_cup_morphism(r).unwrap(), 2 * k - r).unwrap();
            assert_eq!(direct, odd_t_expansion(n, k, r).unwrap(), "({n},{k},{r})");
        }
    }

    #[test]
    fn auxiliary_contractions() {
        let t2 = nested_cup_morphism(2).unwrap();
        let p2 = jones_wenzl(2).unwrap().scale_monomial(&qint(3).inv()).unwrap();
        let a = pad(2, &t2.adjoint(), 0).unwrap().mul(&pad(0, &t2, 2).unwrap()).unwrap();
        let b = pad(0, &t2.adjoint(), 2).unwrap().mul(&pad(2, &t2, 0).unwrap()).unwrap();
        assert_eq!(a, p2);
        assert_eq!(b, p2);
    }

    #[test]
    fn cap_contraction_of_cups() {
        for k in 1..=3usize {
            let t = nested_cup_morphism(2 * k).unwrap();
            let lhs = pad(2 * k - 2, &multiplication_m(), 2 * k - 2).unwrap().mul(&t).unwrap();
            let c = sq(qint(2).mul(&qint(2 * k + 1)).div(&qint(2 * k)));
            let rhs = nested_cup_morphism(2 * k - 1).unwrap().scale(&c).unwrap();
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }

    #[test]
    fn rho_examples() {
        // r = 2k gives t_{2k}; r = 0 gives the projection
        for k in 1..=2 {
            assert_eq!(rho_morphism(k, k, 0).unwrap(), *nested_cup_morphism(2 * k).unwrap());
            assert_eq!(rho_morphism(1, k, k + 1).unwrap(), *jones_wenzl(2 * k + 2).unwrap());
        }
        let rho = Rho::new(1, 1, 1).unwrap();
        let c = coupling_constant(1, 1, 1).unwrap();
        assert_eq!(rho.gram_scalar().unwrap(), c);
        let expect = jones_wenzl(2).unwrap().scale_monomial(&coupling_constant_cyclo(1, 1, 1).unwrap()).unwrap();
        assert_eq!(rho.gram_literal().unwrap(), expect);
        assert!(matches!(Rho::new(1, 1, 3), Err(Error::Fusion { .. })));
    }

    #[test]
    fn gram_scalar_agrees_with_literal_product() {
        for (n, k, l) in [(1, 2, 1), (2, 1, 2), (2, 2, 2), (1, 2, 3), (2, 2, 1)] {
            let rho = Rho::new(n, k, l).unwrap();
            let c = coupling_constant_cyclo(n, k, l).unwrap();
            let lit = rho.gram_literal().unwrap();
            assert_eq!(lit, jones_wenzl(2 * l).unwrap().scale_monomial(&c).unwrap(), "({n},{k},{l})");
            assert_eq!(rho.gram_scalar().unwrap(), c.to_ratfun());
        }
    }

    #[test]
    fn phi_family_shapes_and_isometry() {
        for k in 1..=2usize {
            for phi in phi_family(k).unwrap() {
                let e = phi.element().unwrap();
                assert_eq!(e.bottom(), 2 * k);
                assert_eq!(e.top() as i64, 2 * k as i64 + 2 * phi.alpha as i64 + 2);
                assert_eq!(e.adjoint().mul(&e).unwrap(), *jones_wenzl(2 * k).unwrap());
            }
        }
        assert!(phi_family(0).is_err());
    }

    #[test]
    fn phi_displayed_forms() {
        let k = 2usize;
        let p = |y: usize| jones_wenzl(y).unwrap();
        let t2 = nested_cup_morphism(2).unwrap();
        // plus-one left
        let c = sq(qint(3).mul(&qint(2 * k + 1)).div(&qint(2 * k + 3)));
        let disp = p(2)
            .tensor(&p(2 * k + 2))
            .unwrap()
            .mul(&t2.tensor(&TLElement::identity(2 * k)).unwrap())
            .unwrap()
            .mul(&p(2 * k))
            .unwrap()
            .scale(&c)
            .unwrap();
        assert_eq!(Phi::new(k, 1, Side::L).unwrap().element().unwrap(), disp);
        // zero right, through m*
        let c0 = sq(qint(2 * k).div(&qint(2 * k + 2)));
        let disp0 = p(2 * k)
            .tensor(&p(2))
            .unwrap()
            .mul(&pad(2 * k - 2, &comultiplication_m_star(), 0).unwrap())
            .unwrap()
            .mul(&p(2 * k))
            .unwrap()
            .scale(&c0)
            .unwrap();
        assert_eq!(Phi::new(k, 0, Side::R).unwrap().element().unwrap(), disp0);
        // minus-one members carry no scalar
        let dispm = p(2 * k - 2).tensor(&p(2)).unwrap().mul(&p(2 * k)).unwrap();
        assert_eq!(Phi::new(k, -1, Side::R).unwrap().element().unwrap(), dispm);
        assert_eq!(Phi::new(1, -1, Side::L).unwrap().element().unwrap(), *p(2));
    }

    #[test]
    fn numeric_evaluation_matches_exact() {
        let q = 0.35;
        let p4 = jones_wenzl(4).unwrap();
        let num = p4.evaluate(q);
        let delta = q + 1.0 / q;
        let sq = num.mul(&num, delta).unwrap();
        assert!(sq.max_abs_diff(&num) < 1e-12);
        for d in enumerate_diagrams(4, 4) {
            let exact = p4.coefficient(&d).eval(q).unwrap();
            assert!((exact - num.coefficient(&d)).abs() < 1e-12);
        }
        let _ = q_integer(2);
    }
}
