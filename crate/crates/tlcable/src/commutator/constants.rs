//! Closed-form constants of the lower bound for the commutator operator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qarith::{q_from_delta, q_integer_value};

/// `C(q)`, `f(delta)` and the rewritten form `g(q)`. `f` and `g` are `None` when
/// `C(q) < 0`, where the square root is not real.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundConstants {
    pub delta: f64,
    pub q: f64,
    pub c_q: f64,
    pub f: Option<f64>,
    pub g: Option<f64>,
}

impl LowerBoundConstants {
    /// `[3]_q^1/2 f`, the lower bound for `T` on the vacuum complement.
    pub fn t_lower_bound(&self) -> Option<f64> {
        self.f.map(|f| q_integer_value(3, self.q).sqrt() * f)
    }
}

/// `C(q) = 2 (q^-2 - q^2 - [2]^4 (1+q^2)^2 / ([3][5]) - [2]^2 / ([4]^2 [3][5])
/// - 2 [2]^2 (1+q^2) / [5] - 2 [2] / ([4][5]) - 2 [2]^3 (1+q^2) / ([4][3][5]))`.
pub fn c_of_q(q: f64) -> f64 {
    let n = |a: u32| q_integer_value(a, q);
    let s = 1.0 + q * q;
    2.0 * (q.powi(-2) - q * q - n(2).powi(4) * s * s / (n(3) * n(5)) - n(2).powi(2) / (n(4).powi(2) * n(3) * n(5))
        - 2.0 * n(2).powi(2) * s / n(5)
        - 2.0 * n(2) / (n(4) * n(5))
        - 2.0 * n(2).powi(3) * s / (n(4) * n(3) * n(5)))
}

/// `g(q) = 2^1/2 [q^-2/[3] - q^2/[3] - [2]^4 (1+q^2)^2 / ([3]^2 [5]) - [2]^2 / ([4]^2 [3]^2 [5])
/// - 2 [2]^2 (1+q^2) / ([3][5]) - 2 [2] / ([3][4][5]) - 2 [2]^3 (1+q^2) / ([4][3]^2 [5])]^1/2
/// - 2 (1+q) / [3]^1/2`, term by term as printed.
pub fn g_of_q(q: f64) -> Option<f64> {
    let n = |a: u32| q_integer_value(a, q);
    let s = 1.0 + q * q;
    let inner = q.powi(-2) / n(3) - q * q / n(3) - n(2).powi(4) * s * s / (n(3).powi(2) * n(5))
        - n(2).powi(2) / (n(4).powi(2) * n(3).powi(2) * n(5))
        - 2.0 * n(2).powi(2) * s / (n(3) * n(5))
        - 2.0 * n(2) / (n(3) * n(4) * n(5))
        - 2.0 * n(2).powi(3) * s / (n(4) * n(3).powi(2) * n(5));
    (inner >= 0.0).then(|| 2f64.sqrt() * inner.sqrt() - 2.0 * (1.0 + q) / n(3).sqrt())
}

/// Evaluates the constants at `delta >= 2`.
pub fn lower_bound_constants(delta: f64) -> Result<LowerBoundConstants> {
    if !(delta >= 2.0) {
        return Err(Error::Domain(format!("delta = {delta} is below 2")));
    }
    let q = q_from_delta(delta)?.q;
    let c_q = c_of_q(q);
    let f = (c_q >= 0.0).then(|| (c_q.sqrt() - 2.0 * (1.0 + q)) / q_integer_value(3, q).sqrt());
    Ok(LowerBoundConstants { delta, q, c_q, f, g: g_of_q(q) })
}

/// `f` at `delta^2 = lo, lo+1, ..., hi`.
pub fn f_grid(lo: u32, hi: u32) -> Result<Vec<LowerBoundConstants>> {
    (lo..=hi).map(|d2| lower_bound_constants((d2 as f64).sqrt())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_the_threshold() {
        let c = lower_bound_constants(8f64.sqrt()).unwrap();
        assert!((c.q - (2f64.sqrt() - 1.0)).abs() < 1e-14);
        assert!((c.f.unwrap() - 0.1111).abs() < 5e-4, "{c:?}");
        assert!((c.f.unwrap() - c.g.unwrap()).abs() < 1e-12);
    }

    /// Independent oracle: `[n]_q` as the symmetric sum `q^{n-1} + q^{n-3} + ... + q^{1-n}`.
    fn oracle_lower_bound(d2: f64) -> Option<f64> {
        let delta = d2.sqrt();
        let q = (delta - (d2 - 4.0).sqrt()) / 2.0;
        let n = |a: i32| (0..a).map(|j| q.powi(a - 1 - 2 * j)).sum::<f64>();
        let s = 1.0 + q * q;
        let terms = [
            n(2).powi(4) * s * s / (n(3) * n(5)),
            n(2).powi(2) / (n(4).powi(2) * n(3) * n(5)),
            2.0 * n(2).powi(2) * s / n(5),
            2.0 * n(2) / (n(4) * n(5)),
            2.0 * n(2).powi(3) * s / (n(4) * n(3) * n(5)),
        ];
        let c = 2.0 * (1.0 / (q * q) - q * q - terms.iter().sum::<f64>());
        (c >= 0.0).then(|| c.sqrt() - 2.0 * (1.0 + q))
    }

    #[test]
    fn bound_below_eight() {
        // Frozen from the oracle: no real root at dim B = 5, negative at 6 and 7.
        let frozen = [(5.0, None), (6.0, Some(-1.041_763_920)), (7.0, Some(-0.247_557_550))];
        for (d2, want) in frozen {
            let c = lower_bound_constants(f64::sqrt(d2)).unwrap();
            let got = c.t_lower_bound();
            let oracle = oracle_lower_bound(d2);
            assert_eq!(got.is_some(), want.is_some(), "dim B = {d2}");
            assert_eq!(oracle.is_some(), want.is_some(), "dim B = {d2}");
            if let (Some(g), Some(o), Some(w)) = (got, oracle, want) {
                assert!((g - o).abs() < 1e-12 && (g - w).abs() < 1e-8, "dim B = {d2}: {g}");
                assert!(g < 0.0);
            }
        }
        assert!(oracle_lower_bound(8.0).unwrap() > 0.0);
    }

    #[test]
    fn increasing_from_eight() {
        let grid = f_grid(8, 100).unwrap();
        for w in grid.windows(2) {
            assert!(w[1].f.unwrap() > w[0].f.unwrap());
        }
    }

    #[test]
    fn small_delta_is_flagged_not_thrown() {
        let c = lower_bound_constants(2.0).unwrap();
        assert!(c.c_q < 0.0 && c.f.is_none() && c.g.is_none());
        assert!(lower_bound_constants(1.5).is_err());
    }
}
