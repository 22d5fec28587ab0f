//! The field of rational functions in `q` with rational coefficients.
//!
//! Values are stored as `q^shift * num(q) / den(q)` where `num` and `den` are
//! ordinary polynomials with nonzero constant terms, `den` is monic and
//! `gcd(num, den) = 1`. That form is unique, so derived equality is equality
//! of functions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense polynomial, coefficient `i` multiplies `q^i`. Trailing zeros trimmed.
type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_add_shifted(a: &[BigRational], sa: usize, b: &[BigRational], sb: usize) -> Poly {
    let len = (a.len() + sa).max(b.len() + sb);
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        out[i + sa] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i + sb] += y;
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().expect("nonzero divisor");
    let mut quot = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / lead;
        for (i, y) in b.iter().enumerate() {
            r[i + shift] -= &c * y;
        }
        quot[shift] = c;
        // The leading term cancels exactly; drop it even if rounding is moot.
        r.pop();
        trim(&mut r);
    }
    trim(&mut quot);
    (quot, r)
}

fn make_monic(p: &mut Poly) -> BigRational {
    let lead = p.last().cloned().unwrap_or_else(BigRational::one);
    for c in p.iter_mut() {
        *c /= &lead;
    }
    lead
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = r;
        make_monic(&mut y);
        trim(&mut y);
    }
    if !x.is_empty() {
        make_monic(&mut x);
    }
    x
}

/// Number of leading zero coefficients (the power of `q` dividing `p`).
fn low_order(p: &[BigRational]) -> usize {
    p.iter().position(|c| !c.is_zero()).unwrap_or(0)
}

/// An element of Q(q).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QRationalFunction {
    shift: i64,
    num: Poly,
    den: Poly,
}

impl QRationalFunction {
    pub fn zero() -> Self {
        QRationalFunction { shift: 0, num: Vec::new(), den: vec![BigRational::one()] }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QRationalFunction { shift: 0, num: vec![c], den: vec![BigRational::one()] }
    }

    /// `q^e`.
    pub fn q_power(e: i64) -> Self {
        QRationalFunction { shift: e, num: vec![BigRational::one()], den: vec![BigRational::one()] }
    }

    /// Builds `sum_i coeffs[i] q^(low + i)`.
    pub fn from_laurent(low: i64, coeffs: &[BigRational]) -> Self {
        Self::from_parts(low, coeffs.to_vec(), vec![BigRational::one()])
    }

    /// Laurent polynomial with integer coefficients.
    pub fn from_int_laurent(low: i64, coeffs: &[i128]) -> Self {
        let c: Poly = coeffs
            .iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect();
        Self::from_laurent(low, &c)
    }

    fn from_parts(shift: i64, mut num: Poly, mut den: Poly) -> Self {
        trim(&mut num);
        trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return Self::zero();
        }
        let zn = low_order(&num);
        let zd = low_order(&den);
        num.drain(..zn);
        den.drain(..zd);
        let shift = shift + zn as i64 - zd as i64;
        let g = poly_gcd(&num, &den);
        if g.len() > 1 {
            num = poly_divrem(&num, &g).0;
            den = poly_divrem(&den, &g).0;
        }
        let lead = make_monic(&mut den);
        for c in num.iter_mut() {
            *c /= &lead;
        }
        QRationalFunction { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_parts(-self.shift, self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Substitution `q -> 1/q`.
    pub fn invert_variable(&self) -> Self {
        // p(1/q) = q^(-deg p) * reversed(p)(q)
        let dn = self.num.len() as i64 - 1;
        let dd = self.den.len() as i64 - 1;
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        num.reverse();
        den.reverse();
        Self::from_parts(-self.shift - dn + dd, num, den)
    }

    /// Evaluates at a real `q`; errors where the denominator vanishes.
    pub fn eval(&self, q: f64) -> Result<f64> {
        let horner = |p: &[BigRational]| {
            p.iter()
                .rev()
                .fold(0.0f64, |acc, c| acc * q + c.to_f64().unwrap_or(f64::NAN))
        };
        let d = horner(&self.den);
        if d == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(q.powi(self.shift as i32) * horner(&self.num) / d)
    }

    /// Value of a function that is regular at the given point, otherwise an error.
    pub fn eval_at_one(&self) -> Result<BigRational> {
        let sum = |p: &[BigRational]| p.iter().fold(BigRational::zero(), |a, c| a + c);
        let d = sum(&self.den);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(sum(&self.num) / d)
    }

    /// Numerator as a Laurent polynomial `(low, coeffs)` when the denominator is 1.
    pub fn as_laurent(&self) -> Option<(i64, &[BigRational])> {
        (self.den.len() == 1).then_some((self.shift, self.num.as_slice()))
    }

    pub fn numerator(&self) -> (i64, &[BigRational]) {
        (self.shift, &self.num)
    }

    pub fn denominator(&self) -> &[BigRational] {
        &self.den
    }

    /// True if every coefficient of numerator and denominator is an integer.
    pub fn is_integral_form(&self) -> bool {
        self.num.iter().chain(self.den.iter()).all(|c| c.is_integer())
    }
}

impl Default for QRationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &QRationalFunction {
    type Output = QRationalFunction;
    fn add(self, rhs: &QRationalFunction) -> QRationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // a/b + c/d with q-shifts: align both shifts to the smaller one.
        let s = self.shift.min(rhs.shift);
        let ad = poly_mul(&self.num, &rhs.den);
        let cb = poly_mul(&rhs.num, &self.den);
        let num = poly_add_shifted(&ad, (self.shift - s) as usize, &cb, (rhs.shift - s) as usize);
        QRationalFunction::from_parts(s, num, poly_mul(&self.den, &rhs.den))
    }
}

impl Neg for &QRationalFunction {
    type Output = QRationalFunction;
    fn neg(self) -> QRationalFunction {
        QRationalFunction {
            shift: self.shift,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Sub for &QRationalFunction {
    type Output = QRationalFunction;
    fn sub(self, rhs: &QRationalFunction) -> QRationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &QRationalFunction {
    type Output = QRationalFunction;
    fn mul(self, rhs: &QRationalFunction) -> QRationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return QRationalFunction::zero();
        }
        QRationalFunction::from_parts(
            self.shift + rhs.shift,
            poly_mul(&self.num, &rhs.num),
            poly_mul(&self.den, &rhs.den),
        )
    }
}

impl Div for &QRationalFunction {
    type Output = Result<QRationalFunction>;
    fn div(self, rhs: &QRationalFunction) -> Result<QRationalFunction> {
        Ok(self * &rhs.inv()?)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $out:ty) => {
        impl $tr for QRationalFunction {
            type Output = $out;
            fn $m(self, rhs: QRationalFunction) -> $out {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add, QRationalFunction);
forward_owned!(Sub, sub, QRationalFunction);
forward_owned!(Mul, mul, QRationalFunction);
forward_owned!(Div, div, Result<QRationalFunction>);

impl Neg for QRationalFunction {
    type Output = QRationalFunction;
    fn neg(self) -> QRationalFunction {
        -&self
    }
}

fn fmt_poly(p: &[BigRational], shift: i64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let e = shift + i as i64;
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let unit = a.is_one();
        if !unit || e == 0 {
            write!(f, "{a}")?;
        }
        if e != 0 {
            if !unit {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "q")?;
            } else {
                write!(f, "q^{e}")?;
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for QRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.len() == 1 {
            return fmt_poly(&self.num, self.shift, f);
        }
        write!(f, "(")?;
        fmt_poly(&self.num, self.shift, f)?;
        write!(f, ")/(")?;
        fmt_poly(&self.den, 0, f)?;
        write!(f, ")")
    }
}

impl fmt::Debug for QRationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRationalFunction({self})")
    }
}
