//! Integer Laurent polynomials, cyclotomic factors and square-root scalars.
//!
//! Every q-integer factors as `[n] = q^(1-n) * prod_{d | 2n, d >= 3} Phi_d(q)`,
//! so products and quotients of q-integers are monomials in the cyclotomic
//! polynomials. The exact diagram layer keeps denominators in that form and
//! numerators as integer Laurent polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::qarith::ratfun::QRationalFunction;

/// Laurent polynomial `sum_i c[i] q^(low + i)` with `i128` coefficients.
///
/// Normalized: no zero coefficient at either end; the zero polynomial has
/// empty `c` and `low = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntLaurent {
    pub low: i32,
    pub c: Vec<i128>,
}

impl IntLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(v: i128) -> Self {
        Self::new(0, vec![v])
    }

    pub fn monomial(v: i128, e: i32) -> Self {
        Self::new(e, vec![v])
    }

    pub fn new(low: i32, c: Vec<i128>) -> Self {
        let mut p = IntLaurent { low, c };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        let lead = self.c.iter().position(|&x| x != 0).unwrap_or(self.c.len());
        if lead == self.c.len() {
            self.c.clear();
            self.low = 0;
            return;
        }
        if lead > 0 {
            self.c.drain(..lead);
            self.low += lead as i32;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn high(&self) -> i32 {
        self.low + self.c.len() as i32 - 1
    }

    pub fn shifted(&self, e: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        IntLaurent { low: self.low + e, c: self.c.clone() }
    }

    pub fn neg(&self) -> Self {
        IntLaurent { low: self.low, c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn checked_scale(&self, s: i128) -> Result<Self> {
        let c = self
            .c
            .iter()
            .map(|x| x.checked_mul(s).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(self.low, c))
    }

    /// `self += other * q^shift`.
    pub fn add_assign_shifted(&mut self, other: &IntLaurent, shift: i32) -> Result<()> {
        if other.is_zero() {
            return Ok(());
        }
        let olow = other.low + shift;
        if self.is_zero() {
            self.low = olow;
            self.c = other.c.clone();
            return Ok(());
        }
        let low = self.low.min(olow);
        let high = self.high().max(olow + other.c.len() as i32 - 1);
        if low < self.low || high > self.high() {
            let mut c = vec![0i128; (high - low + 1) as usize];
            let off = (self.low - low) as usize;
            c[off..off + self.c.len()].copy_from_slice(&self.c);
            self.c = c;
            self.low = low;
        }
        let off = (olow - self.low) as usize;
        for (dst, src) in self.c[off..].iter_mut().zip(other.c.iter()) {
            *dst = dst.checked_add(*src).ok_or(Error::Overflow)?;
        }
        self.normalize();
        Ok(())
    }

    pub fn checked_add(&self, other: &IntLaurent) -> Result<Self> {
        let mut out = self.clone();
        out.add_assign_shifted(other, 0)?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &IntLaurent) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &IntLaurent) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut c = vec![0i128; self.c.len() + other.c.len() - 1];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.c.iter().enumerate() {
                let t = x.checked_mul(y).ok_or(Error::Overflow)?;
                c[i + j] = c[i + j].checked_add(t).ok_or(Error::Overflow)?;
            }
        }
        Ok(Self::new(self.low + other.low, c))
    }

    /// Exact division by an ordinary monic polynomial with unit constant term.
    /// Returns `None` if the division leaves a remainder.
    pub fn div_exact(&self, d: &[i128]) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dl = d.len();
        if self.c.len() < dl {
            return None;
        }
        let mut r = self.c.clone();
        let mut quot = vec![0i128; r.len() - dl + 1];
        for top in (dl - 1..r.len()).rev() {
            let coef = r[top];
            if coef == 0 {
                continue;
            }
            let s = top + 1 - dl;
            quot[s] = coef;
            for (i, &y) in d.iter().enumerate() {
                r[s + i] -= coef.checked_mul(y)?;
            }
        }
        if r.iter().any(|&x| x != 0) {
            return None;
        }
        Some(Self::new(self.low, quot))
    }

    pub fn eval(&self, q: f64) -> f64 {
        let h = self.c.iter().rev().fold(0.0, |acc, &x| acc * q + x as f64);
        h * q.powi(self.low)
    }

    pub fn max_abs(&self) -> u128 {
        self.c.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn to_ratfun(&self) -> QRationalFunction {
        QRationalFunction::from_int_laurent(self.low as i64, &self.c)
    }
}

const CACHE_LIMIT: usize = 400;

fn compute_cyclotomic(d: usize, known: &[Vec<i128>]) -> Vec<i128> {
    // q^d - 1 divided by Phi_e for every proper divisor e of d.
    let mut p = vec![0i128; d + 1];
    p[0] = -1;
    p[d] = 1;
    let mut poly = IntLaurent::new(0, p);
    for e in 1..d {
        if d % e == 0 {
            let f = if e < known.len() && !known[e].is_empty() {
                known[e].clone()
            } else {
                cyclotomic(e).to_vec()
            };
            poly = poly.div_exact(&f).expect("cyclotomic division is exact");
        }
    }
    poly.c
}

fn table() -> &'static Vec<Vec<i128>> {
    static TABLE: OnceLock<Vec<Vec<i128>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t: Vec<Vec<i128>> = vec![Vec::new(); CACHE_LIMIT + 1];
        for d in 1..=CACHE_LIMIT {
            t[d] = compute_cyclotomic(d, &t);
        }
        t
    })
}

/// Coefficients of the cyclotomic polynomial `Phi_d`, constant term first.
pub fn cyclotomic(d: usize) -> std::borrow::Cow<'static, [i128]> {
    assert!(d >= 1, "cyclotomic index starts at 1");
    if d <= CACHE_LIMIT {
        std::borrow::Cow::Borrowed(&table()[d])
    } else {
        std::borrow::Cow::Owned(compute_cyclotomic(d, table()))
    }
}

/// `q^qpow * prod_d Phi_d(q)^exps[d]` with integer exponents, indices `d >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct CycloMonomial {
    pub qpow: i32,
    pub exps: BTreeMap<u32, i32>,
}

impl CycloMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn q_power(e: i32) -> Self {
        CycloMonomial { qpow: e, exps: BTreeMap::new() }
    }

    pub fn phi(d: u32) -> Self {
        assert!(d >= 2, "Phi_1 vanishes at q = 1 and never occurs");
        let mut exps = BTreeMap::new();
        exps.insert(d, 1);
        CycloMonomial { qpow: 0, exps }
    }

    /// `[n]_q` for `n >= 1`.
    pub fn q_integer(n: u32) -> Self {
        assert!(n >= 1, "[0]_q = 0 is not a unit");
        let mut exps = BTreeMap::new();
        for d in 3..=2 * n {
            if (2 * n) % d == 0 {
                exps.insert(d, 1);
            }
        }
        CycloMonomial { qpow: 1 - n as i32, exps }
    }

    /// `[n]_q!`, with `[0]_q! = 1`.
    pub fn q_factorial(n: u32) -> Self {
        (1..=n).fold(Self::one(), |acc, i| acc.mul(&Self::q_integer(i)))
    }

    pub fn is_one(&self) -> bool {
        self.qpow == 0 && self.exps.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.qpow += other.qpow;
        for (&d, &e) in &other.exps {
            let slot = out.exps.entry(d).or_insert(0);
            *slot += e;
            if *slot == 0 {
                out.exps.remove(&d);
            }
        }
        out
    }

    pub fn inv(&self) -> Self {
        CycloMonomial {
            qpow: -self.qpow,
            exps: self.exps.iter().map(|(&d, &e)| (d, -e)).collect(),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i32) -> Self {
        CycloMonomial {
            qpow: self.qpow * k,
            exps: if k == 0 {
                BTreeMap::new()
            } else {
                self.exps.iter().map(|(&d, &e)| (d, e * k)).collect()
            },
        }
    }

    /// Part with positive exponents, and the inverse of the part with negative ones.
    pub fn split(&self) -> (Self, Self) {
        let mut num = CycloMonomial::default();
        let mut den = CycloMonomial::default();
        for (&d, &e) in &self.exps {
            if e > 0 {
                num.exps.insert(d, e);
            } else {
                den.exps.insert(d, -e);
            }
        }
        num.qpow = self.qpow;
        (num, den)
    }

    /// Expands the cyclotomic product (the q-power included) as a Laurent polynomial.
    /// Requires all cyclotomic exponents to be nonnegative.
    pub fn to_laurent(&self) -> Result<IntLaurent> {
        let mut acc = IntLaurent::monomial(1, self.qpow);
        for (&d, &e) in &self.exps {
            if e < 0 {
                return Err(Error::Domain("negative exponent in polynomial expansion".into()));
            }
            let f = IntLaurent::new(0, cyclotomic(d as usize).to_vec());
            for _ in 0..e {
                acc = acc.checked_mul(&f)?;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, q: f64) -> f64 {
        let mut v = q.powi(self.qpow);
        for (&d, &e) in &self.exps {
            let c = cyclotomic(d as usize);
            let p = c.iter().rev().fold(0.0, |acc, &x| acc * q + x as f64);
            v *= p.powi(e);
        }
        v
    }

    pub fn to_ratfun(&self) -> QRationalFunction {
        let (num, den) = self.split();
        let n = num.to_laurent().expect("nonnegative exponents").to_ratfun();
        let d = den.to_laurent().expect("nonnegative exponents").to_ratfun();
        (&n / &d).expect("cyclotomic factors are nonzero")
    }
}

impl fmt::Display for CycloMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        if self.qpow != 0 {
            parts.push(format!("q^{}", self.qpow));
        }
        for (d, e) in &self.exps {
            if *e == 1 {
                parts.push(format!("Phi{d}"));
            } else {
                parts.push(format!("Phi{d}^{e}"));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for CycloMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloMonomial({self})")
    }
}

/// Multiplies two squarefree radicands: `sqrt(a) sqrt(b) = common * sqrt(rad)`.
/// Returns `(common, rad)`.
pub fn radical_product(a: &CycloMonomial, b: &CycloMonomial) -> (CycloMonomial, CycloMonomial) {
    let mut common = CycloMonomial::one();
    let mut rad = CycloMonomial::one();
    if a.qpow == 1 && b.qpow == 1 {
        common.qpow = 1;
    } else {
        rad.qpow = a.qpow + b.qpow;
    }
    for &d in a.exps.keys() {
        if b.exps.contains_key(&d) {
            common.exps.insert(d, 1);
        } else {
            rad.exps.insert(d, 1);
        }
    }
    for &d in b.exps.keys() {
        if !a.exps.contains_key(&d) {
            rad.exps.insert(d, 1);
        }
    }
    (common, rad)
}

/// Exact scalar `sign * rat * sqrt(rad)` where `rad` is squarefree: q-power 0 or 1,
/// every cyclotomic exponent 1. The square root is the positive one on `0 < q <= 1`,
/// where every `Phi_d` with `d >= 2` is positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Surd {
    pub negative: bool,
    pub rat: CycloMonomial,
    pub rad: CycloMonomial,
}

impl Surd {
    pub fn one() -> Self {
        Surd { negative: false, rat: CycloMonomial::one(), rad: CycloMonomial::one() }
    }

    pub fn from_monomial(c: CycloMonomial) -> Self {
        Surd { negative: false, rat: c, rad: CycloMonomial::one() }
    }

    /// Positive square root of a cyclotomic monomial.
    pub fn sqrt(c: &CycloMonomial) -> Self {
        let mut rat = CycloMonomial::q_power(c.qpow.div_euclid(2));
        let mut rad = CycloMonomial::q_power(c.qpow.rem_euclid(2));
        for (&d, &e) in &c.exps {
            let h = e.div_euclid(2);
            if h != 0 {
                rat.exps.insert(d, h);
            }
            if e.rem_euclid(2) == 1 {
                rad.exps.insert(d, 1);
            }
        }
        Surd { negative: false, rat, rad }
    }

    pub fn neg(&self) -> Self {
        Surd { negative: !self.negative, ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (common, rad) = radical_product(&self.rad, &other.rad);
        let rat = self.rat.mul(&other.rat).mul(&common);
        Surd { negative: self.negative ^ other.negative, rat, rad }
    }

    pub fn inv(&self) -> Self {
        // 1/(r sqrt(s)) = r^-1 s^-1 sqrt(s)
        Surd { negative: self.negative, rat: self.rat.inv().mul(&self.rad.inv()), rad: self.rad.clone() }
    }

    pub fn square(&self) -> CycloMonomial {
        self.rat.pow(2).mul(&self.rad)
    }

    pub fn is_rational(&self) -> bool {
        self.rad.is_one()
    }

    pub fn eval(&self, q: f64) -> f64 {
        let v = self.rat.eval(q) * self.rad.eval(q).sqrt();
        if self.negative {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        write!(f, "{}", self.rat)?;
        if !self.rad.is_one() {
            write!(f, "*sqrt({})", self.rad)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1).to_vec(), vec![-1, 1]);
        assert_eq!(cyclotomic(2).to_vec(), vec![1, 1]);
        assert_eq!(cyclotomic(3).to_vec(), vec![1, 1, 1]);
        assert_eq!(cyclotomic(4).to_vec(), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6).to_vec(), vec![1, -1, 1]);
        // first cyclotomic polynomial with a coefficient of absolute value 2
        assert!(cyclotomic(105).iter().any(|&c| c == -2));
    }

    #[test]
    fn q_integer_factorization_matches_geometric_sum() {
        for n in 1..=30u32 {
            let expanded = CycloMonomial::q_integer(n).to_laurent().unwrap();
            let direct = IntLaurent::new(1 - n as i32, (0..2 * n - 1).map(|i| (i % 2 == 0) as i128).collect());
            assert_eq!(expanded, direct, "n = {n}");
        }
    }

    #[test]
    fn exact_division_detects_remainder() {
        let p = IntLaurent::new(-2, vec![1, 2, 2, 1]); // q^-2 (1+q)(1+q+q^2)
        assert_eq!(p.div_exact(&cyclotomic(3)), Some(IntLaurent::new(-2, vec![1, 1])));
        assert_eq!(p.div_exact(&cyclotomic(4)), None);
    }

    #[test]
    fn surd_product_extracts_shared_atoms() {
        let a = Surd::sqrt(&CycloMonomial::q_integer(3));
        let b = a.mul(&a);
        assert!(b.is_rational());
        assert_eq!(b.rat, CycloMonomial::q_integer(3));
        let inv = a.inv();
        let one = a.mul(&inv);
        assert!(one.rat.is_one() && one.rad.is_one());
        let q = 0.37;
        assert!((a.eval(q) - CycloMonomial::q_integer(3).eval(q).sqrt()).abs() < 1e-14);
    }
}
