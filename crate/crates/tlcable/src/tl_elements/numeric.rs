//! Elements of `TL_{k,l}(delta)` with `f64` coefficients at a fixed `delta`.

use rustc_hash::FxHashMap;

use crate::diagrams::{adjoint, compose_unchecked, tensor, TLDiagram};
use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped after each operation.
pub const PRUNE_TOL: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct NumElement {
    bottom: usize,
    top: usize,
    terms: FxHashMap<TLDiagram, f64>,
}

impl NumElement {
    pub fn zero(bottom: usize, top: usize) -> Self {
        NumElement { bottom, top, terms: FxHashMap::default() }
    }

    pub fn from_diagram(d: TLDiagram, c: f64) -> Self {
        let mut e = Self::zero(d.bottom(), d.top());
        e.terms.insert(d, c);
        e
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagram(TLDiagram::identity(n), 1.0)
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

    pub fn terms(&self) -> impl Iterator<Item = (&TLDiagram, &f64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, d: &TLDiagram) -> f64 {
        self.terms.get(d).copied().unwrap_or(0.0)
    }

    pub(crate) fn insert(&mut self, d: TLDiagram, c: f64) {
        *self.terms.entry(d).or_insert(0.0) += c;
    }

    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, v| v.abs() > tol);
    }

    pub fn scale(&self, s: f64) -> NumElement {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= s;
        }
        out.prune(PRUNE_TOL);
        out
    }

    pub fn add(&self, other: &NumElement) -> Result<NumElement> {
        if (self.bottom, self.top) != (other.bottom, other.top) {
            return Err(Error::Grading("cannot add elements of different gradings".into()));
        }
        let mut out = self.clone();
        for (d, v) in &other.terms {
            out.insert(d.clone(), *v);
        }
        out.prune(PRUNE_TOL);
        Ok(out)
    }

    pub fn sub(&self, other: &NumElement) -> Result<NumElement> {
        self.add(&other.scale(-1.0))
    }

    /// Composition `self . rhs` with loop value `delta`.
    pub fn mul(&self, rhs: &NumElement, delta: f64) -> Result<NumElement> {
        if self.bottom != rhs.top {
            return Err(Error::Grading("inner gradings differ".into()));
        }
        let mut out = NumElement::zero(rhs.bottom, self.top);
        for (d, a) in &self.terms {
            for (e, b) in &rhs.terms {
                let (c, f) = compose_unchecked(d, e);
                out.insert(f, a * b * delta.powi(c as i32));
            }
        }
        out.prune(PRUNE_TOL);
        Ok(out)
    }

    pub fn tensor(&self, rhs: &NumElement) -> NumElement {
        let mut out = NumElement::zero(self.bottom + rhs.bottom, self.top + rhs.top);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.insert(tensor(a, b), x * y);
            }
        }
        out.prune(PRUNE_TOL);
        out
    }

    pub fn adjoint(&self) -> NumElement {
        NumElement {
            bottom: self.top,
            top: self.bottom,
            terms: self.terms.iter().map(|(d, v)| (adjoint(d), *v)).collect(),
        }
    }

    /// Largest coefficient difference over the union of supports.
    pub fn max_abs_diff(&self, other: &NumElement) -> f64 {
        let mut m: f64 = 0.0;
        for (d, v) in &self.terms {
            m = m.max((v - other.coefficient(d)).abs());
        }
        for (d, v) in &other.terms {
            if !self.terms.contains_key(d) {
                m = m.max(v.abs());
            }
        }
        m
    }
}
