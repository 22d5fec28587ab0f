//! Exact elements of `TL_{k,l}(delta)`.
//!
//! An element is `sqrt(radical) / den * sum_D N_D(q) D` with `den` a product of
//! cyclotomic polynomials, `radical` squarefree and `N_D` integer Laurent
//! polynomials. After every operation common cyclotomic factors of the
//! numerators are cancelled against `den`, which makes the representation
//! unique, so equality is structural.

use std::fmt;

use rustc_hash::FxHashMap;

use crate::diagrams::{adjoint, compose, compose_unchecked, tensor, TLDiagram};
use crate::error::{Error, Result};
use crate::qarith::{cyclotomic, radical_product, CycloMonomial, IntLaurent, QRationalFunction, Surd};
use crate::tl_elements::numeric::NumElement;

#[derive(Clone)]
pub struct TLElement {
    bottom: usize,
    top: usize,
    radical: CycloMonomial,
    den: CycloMonomial,
    terms: FxHashMap<TLDiagram, IntLaurent>,
}

/// `[2]^c = q^-c (1 + q^2)^c`.
fn delta_power(c: usize) -> IntLaurent {
    let mut acc = IntLaurent::monomial(1, -(c as i32));
    let d = IntLaurent::new(0, vec![1, 0, 1]);
    for _ in 0..c {
        acc = acc.checked_mul(&d).expect("small powers of delta fit");
    }
    acc
}

fn delta_powers(max: usize) -> Vec<IntLaurent> {
    (0..=max).map(delta_power).collect()
}

impl TLElement {
    pub fn zero(bottom: usize, top: usize) -> Self {
        TLElement {
            bottom,
            top,
            radical: CycloMonomial::one(),
            den: CycloMonomial::one(),
            terms: FxHashMap::default(),
        }
    }

    pub fn from_diagram(d: TLDiagram) -> Self {
        let mut e = Self::zero(d.bottom(), d.top());
        e.terms.insert(d, IntLaurent::constant(1));
        e
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagram(TLDiagram::identity(n))
    }

    /// Identity on the cabled object `k`, i.e. on `2k` strands.
    pub fn identity_object(k: usize) -> Self {
        Self::identity(2 * k)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn radical(&self) -> &CycloMonomial {
        &self.radical
    }

    pub fn denominator(&self) -> &CycloMonomial {
        &self.den
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TLDiagram, &IntLaurent)> {
        self.terms.iter()
    }

    /// Terms sorted by diagram, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(&TLDiagram, &IntLaurent)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Rational part `N_D / den` of the coefficient of `d`; the full coefficient
    /// is this times `sqrt(radical)`.
    pub fn coefficient(&self, d: &TLDiagram) -> QRationalFunction {
        match self.terms.get(d) {
            None => QRationalFunction::zero(),
            Some(n) => {
                let den = self.den.to_ratfun();
                (&n.to_ratfun() / &den).expect("cyclotomic denominators are nonzero")
            }
        }
    }

    /// Coefficient of the identity diagram as an exact rational function.
    /// Errors if the element carries a nontrivial square root.
    pub fn identity_coefficient(&self) -> Result<QRationalFunction> {
        if self.bottom != self.top {
            return Err(Error::Grading("identity coefficient needs a square grading".into()));
        }
        let c = self.coefficient(&TLDiagram::identity(self.bottom));
        if !c.is_zero() && !self.radical.is_one() {
            return Err(Error::RadicalMismatch(self.radical.to_string(), "1".into()));
        }
        Ok(c)
    }

    /// Coefficient of `d` evaluated at `q`.
    pub fn coefficient_value(&self, d: &TLDiagram, q: f64) -> f64 {
        self.terms.get(d).map_or(0.0, |n| n.eval(q) * self.scalar_value(q))
    }

    fn scalar_value(&self, q: f64) -> f64 {
        self.radical.eval(q).sqrt() / self.den.eval(q)
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, v| !v.is_zero());
        if self.terms.is_empty() {
            self.den = CycloMonomial::one();
            self.radical = CycloMonomial::one();
            return;
        }
        debug_assert_eq!(self.den.qpow, 0);
        let factors: Vec<(u32, i32)> = self.den.exps.iter().map(|(&d, &e)| (d, e)).collect();
        for (d, e) in factors {
            let phi = cyclotomic(d as usize);
            let mut removed = 0;
            while removed < e {
                let mut divided = Vec::with_capacity(self.terms.len());
                let mut ok = true;
                for v in self.terms.values() {
                    match v.div_exact(&phi) {
                        Some(w) => divided.push(w),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    break;
                }
                for (v, w) in self.terms.values_mut().zip(divided) {
                    *v = w;
                }
                removed += 1;
            }
            if removed > 0 {
                let left = e - removed;
                if left == 0 {
                    self.den.exps.remove(&d);
                } else {
                    self.den.exps.insert(d, left);
                }
            }
        }
    }

    fn map_numerators(&mut self, f: impl Fn(&IntLaurent) -> Result<IntLaurent>) -> Result<()> {
        for v in self.terms.values_mut() {
            *v = f(v)?;
        }
        Ok(())
    }

    /// Multiplies every numerator by a cyclotomic monomial with nonnegative exponents.
    fn multiply_numerators(&mut self, m: &CycloMonomial) -> Result<()> {
        if m.is_one() {
            return Ok(());
        }
        let p = m.to_laurent()?;
        self.map_numerators(|v| v.checked_mul(&p))
    }

    pub fn scale(&self, s: &Surd) -> Result<TLElement> {
        let mut out = self.clone();
        if out.is_zero() {
            return Ok(out);
        }
        let (common, rad) = radical_product(&self.radical, &s.rad);
        out.radical = rad;
        let (num, den) = s.rat.mul(&common).split();
        out.multiply_numerators(&num)?;
        out.den = out.den.mul(&den);
        if s.negative {
            out.map_numerators(|v| Ok(v.neg()))?;
        }
        out.normalize();
        Ok(out)
    }

    pub fn scale_monomial(&self, c: &CycloMonomial) -> Result<TLElement> {
        self.scale(&Surd::from_monomial(c.clone()))
    }

    pub fn scale_integer(&self, n: i128) -> Result<TLElement> {
        let mut out = self.clone();
        out.map_numerators(|v| v.checked_scale(n))?;
        out.normalize();
        Ok(out)
    }

    pub fn neg(&self) -> TLElement {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.neg();
        }
        out
    }

    /// Rewrites both elements over the least common denominator.
    fn align(&self, other: &TLElement) -> Result<(CycloMonomial, TLElement, TLElement)> {
        let mut lcm = self.den.clone();
        for (&d, &e) in &other.den.exps {
            let slot = lcm.exps.entry(d).or_insert(0);
            *slot = (*slot).max(e);
        }
        let lift = |x: &TLElement| -> Result<TLElement> {
            let mut y = x.clone();
            let missing = lcm.div(&x.den);
            y.multiply_numerators(&missing)?;
            y.den = lcm.clone();
            Ok(y)
        };
        Ok((lcm.clone(), lift(self)?, lift(other)?))
    }

    pub fn add(&self, other: &TLElement) -> Result<TLElement> {
        if (self.bottom, self.top) != (other.bottom, other.top) {
            return Err(Error::Grading(format!(
                "cannot add TL_{{{},{}}} and TL_{{{},{}}}",
                self.bottom, self.top, other.bottom, other.top
            )));
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.radical != other.radical {
            return Err(Error::RadicalMismatch(self.radical.to_string(), other.radical.to_string()));
        }
        let (_, mut a, b) = self.align(other)?;
        for (d, v) in b.terms {
            match a.terms.get_mut(&d) {
                Some(slot) => slot.add_assign_shifted(&v, 0)?,
                None => {
                    a.terms.insert(d, v);
                }
            }
        }
        a.normalize();
        Ok(a)
    }

    pub fn sub(&self, other: &TLElement) -> Result<TLElement> {
        self.add(&other.neg())
    }

    /// Composition `self . rhs` (`rhs` applied first); each closed loop gives a factor `[2]`.
    pub fn mul(&self, rhs: &TLElement) -> Result<TLElement> {
        if self.bottom != rhs.top {
            return Err(Error::Grading(format!(
                "cannot compose TL_{{{},{}}} after TL_{{{},{}}}",
                self.bottom, self.top, rhs.bottom, rhs.top
            )));
        }
        let mut out = TLElement::zero(rhs.bottom, self.top);
        if self.is_zero() || rhs.is_zero() {
            return Ok(out);
        }
        let (common, radical) = radical_product(&self.radical, &rhs.radical);
        let powers = delta_powers(self.bottom / 2 + 1);
        let right: Vec<(&TLDiagram, &IntLaurent)> = rhs.terms.iter().collect();
        let mut groups: FxHashMap<TLDiagram, Vec<IntLaurent>> = FxHashMap::default();
        for (d, nd) in &self.terms {
            groups.clear();
            for (e, ne) in &right {
                let (c, f) = compose_unchecked(d, e);
                let slot = groups.entry(f).or_default();
                if slot.len() <= c {
                    slot.resize(c + 1, IntLaurent::zero());
                }
                slot[c].add_assign_shifted(ne, 0)?;
            }
            for (f, by_loops) in groups.drain() {
                let mut s = IntLaurent::zero();
                for (c, part) in by_loops.iter().enumerate() {
                    if part.is_zero() {
                        continue;
                    }
                    if c == 0 {
                        s.add_assign_shifted(part, 0)?;
                    } else {
                        s.add_assign_shifted(&part.checked_mul(&powers[c])?, 0)?;
                    }
                }
                if s.is_zero() {
                    continue;
                }
                let prod = nd.checked_mul(&s)?;
                out.terms.entry(f).or_default().add_assign_shifted(&prod, 0)?;
            }
        }
        out.radical = radical;
        out.den = self.den.mul(&rhs.den);
        out.multiply_numerators(&common)?;
        out.normalize();
        Ok(out)
    }

    /// Horizontal juxtaposition, `self` on the left.
    pub fn tensor(&self, rhs: &TLElement) -> Result<TLElement> {
        let mut out = TLElement::zero(self.bottom + rhs.bottom, self.top + rhs.top);
        if self.is_zero() || rhs.is_zero() {
            return Ok(out);
        }
        let (common, radical) = radical_product(&self.radical, &rhs.radical);
        for (a, na) in &self.terms {
            for (b, nb) in &rhs.terms {
                out.terms.insert(tensor(a, b), na.checked_mul(nb)?);
            }
        }
        out.radical = radical;
        out.den = self.den.mul(&rhs.den);
        out.multiply_numerators(&common)?;
        out.normalize();
        Ok(out)
    }

    /// Upside-down reflection; coefficients are real so nothing is conjugated.
    pub fn adjoint(&self) -> TLElement {
        TLElement {
            bottom: self.top,
            top: self.bottom,
            radical: self.radical.clone(),
            den: self.den.clone(),
            terms: self.terms.iter().map(|(d, v)| (adjoint(d), v.clone())).collect(),
        }
    }

    /// Coefficient of the identity diagram in `self . rhs`, computed without
    /// forming the full product. Errors on a nontrivial square root.
    pub fn product_identity_coefficient(&self, rhs: &TLElement) -> Result<QRationalFunction> {
        if self.bottom != rhs.top || self.top != rhs.bottom {
            return Err(Error::Grading("product is not square".into()));
        }
        let (common, radical) = radical_product(&self.radical, &rhs.radical);
        let powers = delta_powers(self.bottom / 2 + 1);
        let mut acc = IntLaurent::zero();
        for (d, nd) in &self.terms {
            for (e, ne) in &rhs.terms {
                let (c, f) = compose(d, e)?;
                if f.is_identity() {
                    acc.add_assign_shifted(&nd.checked_mul(ne)?.checked_mul(&powers[c])?, 0)?;
                }
            }
        }
        if acc.is_zero() {
            return Ok(QRationalFunction::zero());
        }
        if !radical.is_one() {
            return Err(Error::RadicalMismatch(radical.to_string(), "1".into()));
        }
        let num = &acc.to_ratfun() * &common.to_ratfun();
        Ok((&num / &self.den.mul(&rhs.den).to_ratfun())?)
    }

    /// Numeric element at the given `q`.
    pub fn evaluate(&self, q: f64) -> NumElement {
        let s = self.scalar_value(q);
        let mut out = NumElement::zero(self.bottom, self.top);
        for (d, v) in &self.terms {
            out.insert(d.clone(), v.eval(q) * s);
        }
        out.prune(0.0);
        out
    }

    /// Largest absolute numerator coefficient, a measure of coefficient growth.
    pub fn max_numerator_coefficient(&self) -> u128 {
        self.terms.values().map(|v| v.max_abs()).max().unwrap_or(0)
    }

    /// JSON form: gradings, square-root factor and `(partner array, coefficient)` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        let den = self.den.to_ratfun();
        let terms: Vec<serde_json::Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(d, n)| {
                let c = (&n.to_ratfun() / &den).expect("nonzero denominator");
                serde_json::json!([d.partner_array(), c.to_string()])
            })
            .collect();
        serde_json::json!({
            "bottom": self.bottom,
            "top": self.top,
            "sqrt": self.radical.to_ratfun().to_string(),
            "terms": terms,
        })
    }
}

impl PartialEq for TLElement {
    fn eq(&self, other: &Self) -> bool {
        if (self.bottom, self.top) != (other.bottom, other.top) {
            return false;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.radical == other.radical && self.den == other.den && self.terms == other.terms
    }
}

impl Eq for TLElement {}

impl fmt::Debug for TLElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TLElement(TL_{{{},{}}}, {} terms, sqrt({}) / ({}))",
            self.bottom,
            self.top,
            self.terms.len(),
            self.radical,
            self.den
        )
    }
}
