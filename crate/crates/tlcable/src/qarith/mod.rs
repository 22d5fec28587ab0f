//! q-numbers, coupling constants and the `delta <-> q` parametrization.
//!
//! Exact values live in [`QRationalFunction`]; products of q-integers are kept
//! factored as [`CycloMonomial`]s so that the diagram layer can cancel them
//! cheaply. Numeric values are computed directly at a real `q`.

pub mod cyclo;
pub mod ratfun;

pub use cyclo::{cyclotomic, radical_product, CycloMonomial, IntLaurent, Surd};
pub use ratfun::QRationalFunction;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `delta = q + 1/q` with `0 < q <= 1`, optionally tied to `delta^2 = dim B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaParameter {
    pub delta: f64,
    pub q: f64,
    pub dim_b: Option<u32>,
}

impl DeltaParameter {
    pub fn from_dim_b(dim_b: u32) -> Result<Self> {
        let mut p = q_from_delta((dim_b as f64).sqrt())?;
        p.dim_b = Some(dim_b);
        Ok(p)
    }
}

/// Solves `q + 1/q = delta` for the root in `(0, 1]`.
pub fn q_from_delta(delta: f64) -> Result<DeltaParameter> {
    if !(delta >= 2.0) {
        return Err(Error::Domain(format!("delta = {delta} must be at least 2")));
    }
    let disc = (delta * delta - 4.0).max(0.0).sqrt();
    // Rationalized form of (delta - disc)/2 avoids cancellation for large delta.
    let q = 2.0 / (delta + disc);
    let resid = (q + 1.0 / q - delta).abs();
    if resid > 1e-14 * delta.max(1.0) {
        return Err(Error::Domain(format!("q recovery residual {resid:e} for delta = {delta}")));
    }
    Ok(DeltaParameter { delta, q, dim_b: None })
}

/// `[a]_q = sum_{i<a} q^(a-1-2i)`; regular at `q = 1`.
pub fn q_integer(a: u32) -> QRationalFunction {
    if a == 0 {
        return QRationalFunction::zero();
    }
    let coeffs: Vec<i128> = (0..2 * a - 1).map(|i| (i % 2 == 0) as i128).collect();
    QRationalFunction::from_int_laurent(1 - a as i64, &coeffs)
}

/// `[a]_q!`, with the empty product `[0]_q! = 1`.
pub fn q_factorial(a: u32) -> QRationalFunction {
    CycloMonomial::q_factorial(a).to_ratfun()
}

/// `m_k = [2k+1]_q`.
pub fn quantum_dimension(k: u32) -> QRationalFunction {
    q_integer(2 * k + 1)
}

/// `[a]_q` at a real `q`.
pub fn q_integer_value(a: u32, q: f64) -> f64 {
    (0..a).map(|i| q.powi(a as i32 - 1 - 2 * i as i32)).sum()
}

/// The `r` with `l = n + k - r`, if `0 <= r <= 2 min(n, k)`.
pub fn fusion_defect(n: usize, k: usize, l: usize) -> Option<usize> {
    let s = n + k;
    if l > s {
        return None;
    }
    let r = s - l;
    (r <= 2 * n.min(k)).then_some(r)
}

fn admissible(n: usize, k: usize, l: usize) -> Result<usize> {
    fusion_defect(n, k, l).ok_or(Error::Fusion { n, k, l })
}

/// Factored `C_(n,k,l) = [2n+2k-r+1]! [2n-r]! [r]! [2k-r]! / ([r+1] [2l+1] [2n]! [2k]! [2l]!)`.
pub fn coupling_constant_cyclo(n: usize, k: usize, l: usize) -> Result<CycloMonomial> {
    let r = admissible(n, k, l)?;
    let f = |x: usize| CycloMonomial::q_factorial(x as u32);
    let i = |x: usize| CycloMonomial::q_integer(x as u32);
    let num = f(2 * n + 2 * k - r + 1).mul(&f(2 * n - r)).mul(&f(r)).mul(&f(2 * k - r));
    let den = i(r + 1).mul(&i(2 * l + 1)).mul(&f(2 * n)).mul(&f(2 * k)).mul(&f(2 * l));
    Ok(num.div(&den))
}

/// Exact coupling constant, the squared norm of the canonical intertwiner.
pub fn coupling_constant(n: usize, k: usize, l: usize) -> Result<QRationalFunction> {
    Ok(coupling_constant_cyclo(n, k, l)?.to_ratfun())
}

/// Numeric coupling constant as a running product of q-integer ratios,
/// stable for `n, k` well beyond where the factorials overflow.
pub fn coupling_constant_value(n: usize, k: usize, l: usize, q: f64) -> Result<f64> {
    let r = admissible(n, k, l)?;
    let mut num: Vec<usize> = Vec::new();
    let mut den: Vec<usize> = Vec::new();
    for top in [2 * n + 2 * k - r + 1, 2 * n - r, r, 2 * k - r] {
        num.extend(1..=top);
    }
    den.push(r + 1);
    den.push(2 * l + 1);
    for top in [2 * n, 2 * k, 2 * l] {
        den.extend(1..=top);
    }
    num.sort_unstable();
    den.sort_unstable();
    let mut acc = 1.0;
    let len = num.len().max(den.len());
    for idx in 0..len {
        let a = num.get(idx).map_or(1.0, |&x| q_integer_value(x as u32, q));
        let b = den.get(idx).map_or(1.0, |&x| q_integer_value(x as u32, q));
        acc *= a / b;
    }
    Ok(acc)
}

/// Smallest coupling constant over `n, k <= max_nk` and all admissible `l`, at one `q`.
pub fn empirical_d0(q: f64, max_nk: usize) -> f64 {
    let mut best = f64::INFINITY;
    for n in 0..=max_nk {
        for k in 0..=max_nk {
            for r in 0..=2 * n.min(k) {
                let v = coupling_constant_value(n, k, n + k - r, q).expect("admissible by construction");
                best = best.min(v);
            }
        }
    }
    best
}

/// The q values `0.1, 0.2, ..., 0.9` of the coupling-constant scan.
pub fn d0_scan_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

/// Minimum of [`empirical_d0`] over [`d0_scan_grid`] with `n, k <= 6`.
pub fn empirical_d0_grid() -> f64 {
    d0_scan_grid().into_iter().map(|q| empirical_d0(q, 6)).fold(f64::INFINITY, f64::min)
}

/// `alpha_l = (sum_{n+k=l} m_n m_k / m_l)^(-1/2)` for `0 < q < 1`.
pub fn ao_alpha(l: u32, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!("q = {q} must lie in (0,1)")));
    }
    let m = |k: u32| q_integer_value(2 * k + 1, q);
    let s: f64 = (0..=l).map(|n| m(n) * m(l - n) / m(l)).sum();
    Ok(s.powf(-0.5))
}
