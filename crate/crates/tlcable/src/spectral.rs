//! Character polynomials of the quantum automorphism group and the free Poisson law.
//!
//! `S_k` are the dilated Chebyshev polynomials of the second kind and
//! `Pi_k(x) = S_k(x-2) + S_{k-1}(x-2) = S_{2k}(sqrt x)`, the monic orthogonal
//! polynomials of the free Poisson law on `[0,4]`. `d_k = Pi_k(dim B)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial with arbitrary-precision integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x + c`.
    pub fn linear(c: i64) -> Self {
        Self::from_i64(&[c, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `p(q(x))` by Horner's rule.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Self::new(vec![c.clone()]));
        }
        acc
    }

    /// `Some(r)` with `r(x^2) = p(x)` when only even powers occur.
    pub fn even_part_in_square(&self) -> Option<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// `S_0 = 1, S_1 = x, x S_k = S_{k+1} + S_{k-1}`.
pub fn chebyshev_s(k: usize) -> IntPolynomial {
    let x = IntPolynomial::linear(0);
    let (mut prev, mut cur) = (IntPolynomial::one(), x.clone());
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = x.mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// `Pi_0 = 1`, `Pi_k(x) = S_k(x-2) + S_{k-1}(x-2)`.
pub fn pi_poly(k: usize) -> IntPolynomial {
    if k == 0 {
        return IntPolynomial::one();
    }
    let shift = IntPolynomial::linear(-2);
    chebyshev_s(k).compose(&shift).add(&chebyshev_s(k - 1).compose(&shift))
}

/// `Pi_k(x)` in floating point via `Pi_{k+1} = (x-2) Pi_k - Pi_{k-1}`.
pub fn pi_value(k: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x - 1.0);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = (x - 2.0) * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln Pi_k(x)` for `x > 4`, where every `Pi_k(x)` is positive; rescales to avoid overflow.
fn pi_log(k: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0f64, x - 1.0);
    if k == 0 {
        return 0.0;
    }
    let mut log_scale = 0.0;
    for _ in 1..k {
        let next = (x - 2.0) * cur - prev;
        prev = cur;
        cur = next;
        if cur > 1e100 {
            prev /= cur;
            log_scale += cur.ln();
            cur = 1.0;
        }
    }
    log_scale + cur.ln()
}

/// `mu_j = int x^j dmu` of the free Poisson law: the Catalan number `C_j`.
pub fn free_poisson_moment(j: usize) -> BigInt {
    binomial(BigInt::from(2 * j), BigInt::from(j)) / BigInt::from(j + 1)
}

/// The same moment by adaptive quadrature of `x^j sqrt(4x - x^2) / (2 pi x)` on `[0,4]`.
/// With `x = 2 - 2 cos(theta)` the measure becomes `(2/pi) cos^2(theta/2) dtheta`,
/// which is smooth, so Simpson refinement converges quickly.
pub fn free_poisson_moment_quadrature(j: usize, tol: f64) -> f64 {
    let f = |th: f64| {
        let x = 2.0 - 2.0 * th.cos();
        let c = (th / 2.0).cos();
        std::f64::consts::FRAC_2_PI * x.powi(j as i32) * c * c
    };
    // Equal panels first: a single coarse Simpson pair can agree by symmetry alone.
    const PANELS: usize = 16;
    let h = std::f64::consts::PI / PANELS as f64;
    (0..PANELS)
        .map(|i| {
            let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
            let m = 0.5 * (a + b);
            let (fa, fm, fb) = (f(a), f(m), f(b));
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            adaptive_simpson(&f, a, b, fa, fm, fb, whole, tol / PANELS as f64, 50)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Exact free Poisson moments `mu_0..mu_{len-1}`, each confirmed by quadrature.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    moments: Vec<BigInt>,
    /// Largest relative quadrature deviation seen while building.
    pub max_oracle_deviation: f64,
}

/// Relative agreement required between the exact and quadrature moments.
pub const MOMENT_ORACLE_TOL: f64 = 1e-9;

impl MomentSequence {
    pub fn new(len: usize) -> Result<Self> {
        let mut moments = Vec::with_capacity(len);
        let mut worst: f64 = 0.0;
        for j in 0..len {
            let exact = free_poisson_moment(j);
            let e = exact.to_f64().expect("Catalan numbers fit f64 at these lengths");
            let quad = free_poisson_moment_quadrature(j, 1e-13 * e);
            let dev = (quad - e).abs() / e;
            if dev > MOMENT_ORACLE_TOL {
                return Err(Error::Domain(format!("moment {j}: quadrature {quad} vs exact {exact}")));
            }
            worst = worst.max(dev);
            moments.push(exact);
        }
        Ok(MomentSequence { moments, max_oracle_deviation: worst })
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    pub fn moments(&self) -> &[BigInt] {
        &self.moments
    }

    /// `int p q dmu`, exact.
    pub fn pairing(&self, p: &IntPolynomial, q: &IntPolynomial) -> Result<BigInt> {
        let prod = p.mul(q);
        if let Some(d) = prod.degree() {
            if d >= self.moments.len() {
                return Err(Error::Domain(format!("pairing needs moment {d}, have {}", self.moments.len())));
            }
        }
        Ok(prod.coeffs().iter().zip(&self.moments).map(|(c, m)| c * m).sum())
    }

    /// Leading principal minors of the Hankel matrix `[mu_{i+j}]`, by fraction-free elimination.
    pub fn hankel_minors(&self) -> Vec<BigInt> {
        // mu_{2(n-1)} is the last moment read, so n = ceil(len / 2).
        let n = self.moments.len().div_ceil(2);
        let mut a: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| self.moments[i + j].clone()).collect()).collect();
        let mut minors = Vec::with_capacity(n);
        let mut prev = BigInt::one();
        for k in 0..n {
            minors.push(a[k][k].clone());
            if a[k][k].is_zero() {
                break;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        minors
    }
}

/// `int Pi_k Pi_l dmu == delta_{kl}`, computed exactly.
pub fn orthonormality_check(k: usize, l: usize) -> Result<bool> {
    let m = MomentSequence::new(k + l + 1)?;
    let v = m.pairing(&pi_poly(k), &pi_poly(l))?;
    Ok(v == BigInt::from((k == l) as i32))
}

/// `d_k = Pi_k(dim B)`.
pub fn rep_dimension(dim_b: u64, k: usize) -> BigInt {
    pi_poly(k).eval(&BigInt::from(dim_b))
}

/// `d_k` from `d_1 d_k = d_{k+1} + d_k + d_{k-1}`.
pub fn rep_dimension_recursion(dim_b: u64, k: usize) -> BigInt {
    let d1 = BigInt::from(dim_b) - BigInt::one();
    let (mut prev, mut cur) = (BigInt::one(), d1.clone());
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = &d1 * &cur - &cur - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Left end of the multiplier window; the window is `t0 <= t < dim B` with `4 < t0 < 5`.
pub const DEFAULT_T0: f64 = 4.5;

fn check_window(t: f64, dim_b: u64) -> Result<()> {
    if dim_b < 5 {
        return Err(Error::Domain(format!("dim B = {dim_b} must be at least 5")));
    }
    if !(t > 4.0 && t < dim_b as f64) {
        return Err(Error::Domain(format!("t = {t} outside (4, {dim_b})")));
    }
    Ok(())
}

/// `Pi_k(t) / Pi_k(dim B)`, the eigenvalue of the multiplier on the `k`-th block.
pub fn multiplier_eigenvalue(t: f64, dim_b: u64, k: usize) -> Result<f64> {
    check_window(t, dim_b)?;
    Ok((pi_log(k, t) - pi_log(k, dim_b as f64)).exp())
}

/// `sum_{k > n} (2k+1) x^k` with `x = t / dim B`, in closed form:
/// `2 x^N (N - (N-1) x) / (1-x)^2 + x^N / (1-x)` for `N = n+1`.
pub fn tail_bound(t: f64, dim_b: u64, n: usize) -> Result<f64> {
    check_window(t, dim_b)?;
    let x = t / dim_b as f64;
    let big_n = (n + 1) as f64;
    let xn = x.powf(big_n);
    Ok(2.0 * xn * (big_n - (big_n - 1.0) * x) / ((1.0 - x) * (1.0 - x)) + xn / (1.0 - x))
}

/// Decay exponent of the schedule: `t(n) = dim B (1 - (n+1)^-SCHEDULE_EXPONENT)`.
pub const SCHEDULE_EXPONENT: f64 = 1.0 / 3.0;

/// `t(n) = dim B (1 - (n+1)^(-1/3))` clipped to `[DEFAULT_T0, dim B)`. Both limit
/// conditions hold: `t(n) -> dim B` and the tail bound at `t(n)` tends to 0.
pub fn schedule_t(n: usize, dim_b: u64) -> Result<f64> {
    if dim_b < 5 {
        return Err(Error::Domain(format!("dim B = {dim_b} must be at least 5")));
    }
    let d = dim_b as f64;
    let t = d * (1.0 - ((n + 1) as f64).powf(-SCHEDULE_EXPONENT));
    Ok(t.max(DEFAULT_T0))
}

/// `sup_{k <= kmax, t in grid} ratio_k(t) / (t / dim B)^k` over `grid` points of `[t0, dim B)`.
pub fn empirical_decay_constant(t0: f64, dim_b: u64, kmax: usize, grid: usize) -> Result<f64> {
    let d = dim_b as f64;
    let mut best: f64 = 0.0;
    for g in 0..grid {
        let t = t0 + (d - t0) * g as f64 / grid as f64;
        for k in 0..=kmax {
            let r = multiplier_eigenvalue(t, dim_b, k)?;
            best = best.max(r / (t / d).powi(k as i32));
        }
    }
    Ok(best)
}

/// One row of the dimension table: `k`, `d_k`, and the coefficients of `Pi_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionRow {
    pub k: usize,
    pub dimension: String,
    pub coefficients: Vec<String>,
}

pub fn dimension_table(dim_b: u64, kmax: usize) -> Vec<DimensionRow> {
    (0..=kmax)
        .map(|k| DimensionRow {
            k,
            dimension: rep_dimension(dim_b, k).to_string(),
            coefficients: pi_poly(k).coeffs().iter().map(|c| c.to_string()).collect(),
        })
        .collect()
}
