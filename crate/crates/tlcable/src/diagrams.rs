//! Temperley-Lieb diagrams as noncrossing perfect matchings of boundary points.
//!
//! Bottom points are `0..k` left to right, top points `k..k+l` left to right.
//! Planarity is tested in the circular order that runs along the bottom left
//! to right and back along the top right to left.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TLDiagram {
    bottom: u8,
    top: u8,
    partner: Box<[u8]>,
}

fn circular_position(p: usize, k: usize, l: usize) -> usize {
    if p < k {
        p
    } else {
        k + (l - 1 - (p - k))
    }
}

fn point_at_circular(c: usize, k: usize, l: usize) -> usize {
    if c < k {
        c
    } else {
        k + (l - 1 - (c - k))
    }
}

/// Noncrossing test for a matching given in circular positions.
fn is_noncrossing_circular(circ: &[usize]) -> bool {
    let mut stack: Vec<usize> = Vec::with_capacity(circ.len() / 2);
    for (i, &j) in circ.iter().enumerate() {
        if j > i {
            stack.push(i);
        } else if stack.pop() != Some(j) {
            return false;
        }
    }
    stack.is_empty()
}

impl TLDiagram {
    /// Validates a partner array: fixed-point-free involution, noncrossing.
    pub fn new(bottom: usize, top: usize, partner: &[usize]) -> Result<Self> {
        let n = bottom + top;
        if partner.len() != n {
            return Err(Error::Grading(format!("partner array of length {} for {n} points", partner.len())));
        }
        if n > 255 {
            return Err(Error::Domain("at most 255 boundary points".into()));
        }
        for (i, &j) in partner.iter().enumerate() {
            if j >= n || j == i || partner[j] != i {
                return Err(Error::Domain(format!("point {i} has invalid partner {j}")));
            }
        }
        let mut circ = vec![0; n];
        for (i, &j) in partner.iter().enumerate() {
            circ[circular_position(i, bottom, top)] = circular_position(j, bottom, top);
        }
        if !is_noncrossing_circular(&circ) {
            return Err(Error::Domain("pairing is not planar".into()));
        }
        Ok(Self::from_raw(bottom, top, partner.iter().map(|&x| x as u8).collect()))
    }

    fn from_raw(bottom: usize, top: usize, partner: Box<[u8]>) -> Self {
        TLDiagram { bottom: bottom as u8, top: top as u8, partner }
    }

    pub fn identity(n: usize) -> Self {
        let p: Vec<u8> = (0..2 * n).map(|i| if i < n { (i + n) as u8 } else { (i - n) as u8 }).collect();
        Self::from_raw(n, n, p.into())
    }

    /// The single cup in `TL_{0,2}`.
    pub fn cup() -> Self {
        Self::from_raw(0, 2, vec![1, 0].into())
    }

    /// The single cap in `TL_{2,0}`.
    pub fn cap() -> Self {
        Self::from_raw(2, 0, vec![1, 0].into())
    }

    pub fn empty() -> Self {
        Self::from_raw(0, 0, Vec::new().into())
    }

    /// `1_i (x) (cup . cap) (x) 1_(n-i-2)` in `TL_n`.
    pub fn hook(n: usize, i: usize) -> Self {
        assert!(i + 2 <= n, "hook position out of range");
        let e = compose(&Self::cup(), &Self::cap()).expect("sizes match").1;
        tensor(&tensor(&Self::identity(i), &e), &Self::identity(n - i - 2))
    }

    pub fn bottom(&self) -> usize {
        self.bottom as usize
    }

    pub fn top(&self) -> usize {
        self.top as usize
    }

    pub fn points(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i] as usize
    }

    pub fn partner_array(&self) -> Vec<usize> {
        self.partner.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        let k = self.bottom();
        k == self.top() && (0..k).all(|i| self.partner(i) == i + k)
    }

    /// Number of strands joining bottom to top.
    pub fn through_strands(&self) -> usize {
        (0..self.bottom()).filter(|&i| self.partner(i) >= self.bottom()).count()
    }

    /// Bottom caps as pairs `(i, j)` with `i < j`, both bottom indices.
    pub fn caps(&self) -> Vec<(usize, usize)> {
        let k = self.bottom();
        (0..k).filter_map(|i| {
            let j = self.partner(i);
            (j < k && i < j).then_some((i, j))
        })
        .collect()
    }

    /// Top cups as pairs `(i, j)` of top positions `0..l`, `i < j`.
    pub fn cups(&self) -> Vec<(usize, usize)> {
        let k = self.bottom();
        (0..self.top())
            .filter_map(|i| {
                let j = self.partner(k + i);
                (j >= k && i < j - k).then_some((i, j - k))
            })
            .collect()
    }

    /// Partner array as a JSON list of integers.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(self.partner_array())
    }

    pub fn from_json(bottom: usize, top: usize, v: &serde_json::Value) -> Result<Self> {
        let arr: Vec<usize> = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(bottom, top, &arr)
    }

    /// Two-row ASCII picture; each pair gets a letter, lowercase for cups and caps,
    /// uppercase for through strands.
    pub fn render_ascii(&self) -> String {
        let k = self.bottom();
        let mut label = vec![' '; self.points()];
        let mut next = 0u8;
        for i in 0..self.points() {
            let j = self.partner(i);
            if j > i {
                let through = (i < k) != (j < k);
                let base = if through { b'A' } else { b'a' };
                let c = (base + next % 26) as char;
                label[i] = c;
                label[j] = c;
                next += 1;
            }
        }
        let row = |pts: std::ops::Range<usize>| {
            if pts.is_empty() {
                "-".to_string()
            } else {
                pts.map(|p| label[p].to_string()).collect::<Vec<_>>().join(" ")
            }
        };
        format!("top    {}\nbottom {}", row(k..self.points()), row(0..k))
    }
}

impl fmt::Debug for TLDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TLDiagram({}->{} {:?})", self.bottom, self.top, self.partner)
    }
}

/// All diagrams in `TL_{k,l}` in canonical (lexicographic partner array) order.
/// Empty when `k + l` is odd.
pub fn enumerate_diagrams(k: usize, l: usize) -> Vec<TLDiagram> {
    let n = k + l;
    if n % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut circ = vec![usize::MAX; n];
    fill_matchings(&mut circ, &mut out, k, l);
    out.sort();
    out
}

fn fill_matchings(circ: &mut [usize], out: &mut Vec<TLDiagram>, k: usize, l: usize) {
    let Some(first) = circ.iter().position(|&x| x == usize::MAX) else {
        let mut partner = vec![0u8; circ.len()];
        for (c, &d) in circ.iter().enumerate() {
            partner[point_at_circular(c, k, l)] = point_at_circular(d, k, l) as u8;
        }
        out.push(TLDiagram::from_raw(k, l, partner.into()));
        return;
    };
    // Pair `first` with a later free point such that the enclosed free run is even
    // and contains no already-paired point (pairs are placed outermost first).
    let mut j = first + 1;
    while j < circ.len() && circ[j] == usize::MAX {
        if (j - first) % 2 == 1 {
            circ[first] = j;
            circ[j] = first;
            fill_matchings(circ, out, k, l);
            circ[first] = usize::MAX;
            circ[j] = usize::MAX;
        }
        j += 1;
    }
}

/// Stacks `upper` on top of `lower`. Returns the number of closed loops and the
/// resulting diagram in `TL_{lower.bottom, upper.top}`.
pub fn compose(upper: &TLDiagram, lower: &TLDiagram) -> Result<(usize, TLDiagram)> {
    let s = upper.bottom();
    if lower.top() != s {
        return Err(Error::Grading(format!(
            "cannot stack a diagram with {s} bottom points on one with {} top points",
            lower.top()
        )));
    }
    Ok(compose_unchecked(upper, lower))
}

pub(crate) fn compose_unchecked(upper: &TLDiagram, lower: &TLDiagram) -> (usize, TLDiagram) {
    let k = lower.bottom();
    let s = upper.bottom();
    let l = upper.top();
    let mut partner = vec![0u8; k + l];
    let mut seen = vec![false; s];
    // Walk from a result boundary point; `in_lower` tells which diagram we are in
    // and `p` is the local index there.
    let trace = |start_lower: bool, start: usize, seen: &mut [bool]| -> usize {
        let (mut in_lower, mut p) = (start_lower, start);
        loop {
            if in_lower {
                let q = lower.partner(p);
                if q < k {
                    return q;
                }
                let g = q - k;
                seen[g] = true;
                in_lower = false;
                p = g;
            } else {
                let q = upper.partner(p);
                if q >= s {
                    return k + (q - s);
                }
                seen[q] = true;
                in_lower = true;
                p = k + q;
            }
        }
    };
    for i in 0..k {
        partner[i] = trace(true, i, &mut seen) as u8;
    }
    for j in 0..l {
        partner[k + j] = trace(false, s + j, &mut seen) as u8;
    }
    let mut loops = 0;
    for g in 0..s {
        if seen[g] {
            continue;
        }
        loops += 1;
        let mut cur = g;
        loop {
            seen[cur] = true;
            let a = lower.partner(k + cur) - k;
            seen[a] = true;
            let b = upper.partner(a);
            if b == g {
                break;
            }
            cur = b;
        }
    }
    (loops, TLDiagram::from_raw(k, l, partner.into()))
}

/// Horizontal juxtaposition, `a` on the left.
pub fn tensor(a: &TLDiagram, b: &TLDiagram) -> TLDiagram {
    let (k1, l1, k2, l2) = (a.bottom(), a.top(), b.bottom(), b.top());
    let k = k1 + k2;
    let map_a = |p: usize| if p < k1 { p } else { k + (p - k1) };
    let map_b = |p: usize| if p < k2 { k1 + p } else { k + l1 + (p - k2) };
    let mut partner = vec![0u8; k + l1 + l2];
    for p in 0..a.points() {
        partner[map_a(p)] = map_a(a.partner(p)) as u8;
    }
    for p in 0..b.points() {
        partner[map_b(p)] = map_b(b.partner(p)) as u8;
    }
    TLDiagram::from_raw(k, l1 + l2, partner.into())
}

/// Upside-down reflection.
pub fn adjoint(d: &TLDiagram) -> TLDiagram {
    let (k, l) = (d.bottom(), d.top());
    let map = |p: usize| if p < k { l + p } else { p - k };
    let mut partner = vec![0u8; k + l];
    for p in 0..k + l {
        partner[map(p)] = map(d.partner(p)) as u8;
    }
    TLDiagram::from_raw(l, k, partner.into())
}

pub fn catalan(n: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(k: usize, l: usize, p: &[usize]) -> TLDiagram {
        TLDiagram::new(k, l, p).unwrap()
    }

    /// Independent oracle: all fixed-point-free involutions, filtered by pairwise
    /// interleaving on the circle.
    fn brute_force_count(k: usize, l: usize) -> usize {
        let n = k + l;
        if n % 2 == 1 {
            return 0;
        }
        fn rec(p: &mut Vec<Option<usize>>, k: usize, l: usize, count: &mut usize) {
            let Some(i) = p.iter().position(|x| x.is_none()) else {
                let n = p.len();
                let pos = |x: usize| if x < k { x } else { k + (l - 1 - (x - k)) };
                let pairs: Vec<(usize, usize)> = (0..n)
                    .filter(|&x| p[x].unwrap() > x)
                    .map(|x| {
                        let (a, b) = (pos(x), pos(p[x].unwrap()));
                        (a.min(b), a.max(b))
                    })
                    .collect();
                let crossing = pairs.iter().any(|&(a, b)| {
                    pairs.iter().any(|&(c, e)| a < c && c < b && b < e)
                });
                if !crossing {
                    *count += 1;
                }
                return;
            };
            for j in i + 1..p.len() {
                if p[j].is_none() {
                    p[i] = Some(j);
                    p[j] = Some(i);
                    rec(p, k, l, count);
                    p[i] = None;
                    p[j] = None;
                }
            }
        }
        let mut count = 0;
        rec(&mut vec![None; n], k, l, &mut count);
        count
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_diagrams(0, 2), vec![TLDiagram::cup()]);
        let e22 = enumerate_diagrams(2, 2);
        assert_eq!(e22.len(), 2);
        assert!(e22.contains(&TLDiagram::identity(2)));
        assert!(e22.contains(&TLDiagram::hook(2, 0)));
        assert_eq!(enumerate_diagrams(4, 2).len(), 5);
        assert!(enumerate_diagrams(3, 2).is_empty());
    }

    #[test]
    fn enumeration_matches_brute_force_and_catalan() {
        for n in 0..=12usize {
            for k in 0..=n {
                let l = n - k;
                let list = enumerate_diagrams(k, l);
                assert_eq!(list.len(), brute_force_count(k, l), "({k},{l})");
                if n % 2 == 0 {
                    assert_eq!(list.len() as u128, catalan(n / 2));
                }
                let mut sorted = list.clone();
                sorted.dedup();
                assert_eq!(sorted.len(), list.len());
            }
        }
        for (k, l) in [(8, 8), (6, 10), (14, 2), (0, 16)] {
            assert_eq!(enumerate_diagrams(k, l).len() as u128, catalan(8));
        }
    }

    #[test]
    fn enumeration_counts_up_to_sixteen_points_against_oracle() {
        // The involution oracle is exponential; cover the largest sizes on a few gradings.
        for (k, l) in [(8, 6), (7, 7), (10, 6), (16, 0)] {
            assert_eq!(enumerate_diagrams(k, l).len(), brute_force_count(k, l), "({k},{l})");
        }
    }

    #[test]
    fn composition_examples() {
        let x = d(2, 4, &[1, 0, 3, 2, 5, 4]);
        assert_eq!(compose(&TLDiagram::identity(4), &x).unwrap(), (0, x.clone()));
        assert_eq!(compose(&TLDiagram::cap(), &TLDiagram::cup()).unwrap(), (1, TLDiagram::empty()));
        let e = TLDiagram::hook(2, 0);
        assert_eq!(compose(&e, &e).unwrap(), (1, e));
        assert!(matches!(compose(&TLDiagram::cap(), &TLDiagram::identity(3)), Err(Error::Grading(_))));
    }

    #[test]
    fn composition_with_several_loops() {
        let nested_cap = d(4, 0, &[3, 2, 1, 0]);
        let nested_cup = d(0, 4, &[3, 2, 1, 0]);
        assert_eq!(compose(&nested_cap, &nested_cup).unwrap().0, 2);
        let two_caps = d(4, 0, &[1, 0, 3, 2]);
        assert_eq!(compose(&two_caps, &nested_cup).unwrap().0, 1);
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor(&TLDiagram::identity(2), &TLDiagram::identity(3)), TLDiagram::identity(5));
        assert_eq!(tensor(&TLDiagram::cup(), &TLDiagram::cup()), d(0, 4, &[1, 0, 3, 2]));
        // |cap in TL_{3,1}: bottom 1,2 capped, bottom 0 runs to the top point
        assert_eq!(tensor(&TLDiagram::identity(1), &TLDiagram::cap()), d(3, 1, &[3, 2, 1, 0]));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(adjoint(&TLDiagram::identity(3)), TLDiagram::identity(3));
        assert_eq!(adjoint(&TLDiagram::cup()), TLDiagram::cap());
        for x in enumerate_diagrams(4, 2) {
            assert_eq!(adjoint(&adjoint(&x)), x);
        }
    }

    #[test]
    fn composition_is_associative_exhaustively() {
        for a in 0..=6usize {
            for b in (0..=6).filter(|b| (a + b) % 2 == 0) {
                for c in (0..=6).filter(|c| (b + c) % 2 == 0) {
                    for e in (0..=6).filter(|e| (c + e) % 2 == 0) {
                        for x in enumerate_diagrams(c, e) {
                            for y in enumerate_diagrams(b, c) {
                                for z in enumerate_diagrams(a, b) {
                                    let (l1, xy) = compose(&x, &y).unwrap();
                                    let (l2, left) = compose(&xy, &z).unwrap();
                                    let (l3, yz) = compose(&y, &z).unwrap();
                                    let (l4, right) = compose(&x, &yz).unwrap();
                                    assert_eq!(left, right);
                                    assert_eq!(l1 + l2, l3 + l4);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn adjoint_reverses_composition() {
        for x in enumerate_diagrams(4, 4) {
            for y in enumerate_diagrams(2, 4) {
                let (c, xy) = compose(&x, &y).unwrap();
                let (c2, yx) = compose(&adjoint(&y), &adjoint(&x)).unwrap();
                assert_eq!(adjoint(&xy), yx);
                assert_eq!(c, c2);
            }
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let x = d(2, 4, &[2, 3, 0, 1, 5, 4]);
        let v = x.to_json();
        assert_eq!(v, serde_json::json!([2, 3, 0, 1, 5, 4]));
        assert_eq!(TLDiagram::from_json(2, 4, &v).unwrap(), x);
        // crossing pairs are rejected
        assert!(TLDiagram::new(0, 4, &[2, 3, 0, 1]).is_err());
        assert!(TLDiagram::new(0, 2, &[0, 1]).is_err());
    }

    #[test]
    fn ascii_render_marks_through_strands() {
        let s = tensor(&TLDiagram::identity(1), &TLDiagram::cap()).render_ascii();
        assert_eq!(s, "top    A\nbottom A b b");
    }
}
