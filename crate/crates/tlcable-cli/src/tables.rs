//! Data tables: rows of strings with a header, printed aligned or as CSV.

use std::io::Write;

use anyhow::{bail, Context, Result};
use tlcable::commutator::f_grid;
use tlcable::spectral::{dimension_table, rep_dimension_recursion, schedule_t, tail_bound};

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner().context("flushing csv")?)?)
    }

    pub fn to_text(&self) -> String {
        let mut width: Vec<usize> = self.header.iter().map(String::len).collect();
        for r in &self.rows {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        for r in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = r.iter().zip(&width).map(|(c, w)| format!("{c:>w$}")).collect();
            out.push_str(&cells.join("  "));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, csv: bool, out: &mut impl Write) -> Result<()> {
        let s = if csv { self.to_csv()? } else { self.to_text() };
        out.write_all(s.as_bytes())?;
        Ok(())
    }
}

/// `k`, `d_k = Pi_k(dim B)`, the recursion value, and the coefficients of `Pi_k`.
pub fn dims(dim_b: u64, kmax: usize) -> Table {
    let mut t = Table::new(&["k", "d_k", "recursion", "Pi_k coefficients"]);
    for row in dimension_table(dim_b, kmax) {
        t.rows.push(vec![
            row.k.to_string(),
            row.dimension,
            rep_dimension_recursion(dim_b, row.k).to_string(),
            row.coefficients.join(" "),
        ]);
    }
    t
}

/// `a:b` with `a <= b`.
pub fn parse_grid(s: &str) -> Result<(u32, u32)> {
    let Some((a, b)) = s.split_once(':') else { bail!("grid {s:?} is not of the form lo:hi") };
    let (a, b): (u32, u32) = (a.trim().parse()?, b.trim().parse()?);
    if a > b || a < 2 {
        bail!("grid {s:?} needs 2 <= lo <= hi");
    }
    Ok((a, b))
}

/// `delta^2`, `q`, `C(q)`, `f`, `g` and `[3]^1/2 f`; empty cells where `C(q) < 0`.
pub fn lower_bound(lo: u32, hi: u32) -> Result<Table> {
    let mut t = Table::new(&["delta^2", "q", "C(q)", "f", "g", "[3]^1/2 f"]);
    let fmt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.10}"));
    for (d2, c) in (lo..).zip(f_grid(lo, hi)?) {
        t.rows.push(vec![
            d2.to_string(),
            format!("{:.10}", c.q),
            format!("{:.10}", c.c_q),
            fmt(c.f),
            fmt(c.g),
            fmt(c.t_lower_bound()),
        ]);
    }
    Ok(t)
}

/// `n`, `t(n)` and the multiplier tail beyond `n`.
pub fn schedule(dim_b: u64, nmax: usize, step: usize) -> Result<Table> {
    let mut t = Table::new(&["n", "t(n)", "tail"]);
    for n in (0..=nmax).step_by(step.max(1)) {
        let tn = schedule_t(n, dim_b)?;
        t.rows.push(vec![n.to_string(), format!("{tn:.10}"), format!("{:.6e}", tail_bound(tn, dim_b, n)?)]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_of_five() {
        let t = dims(5, 6);
        let col: Vec<&str> = t.rows.iter().map(|r| r[1].as_str()).collect();
        assert_eq!(col, ["1", "4", "11", "29", "76", "199", "521"]);
        assert!(t.rows.iter().all(|r| r[1] == r[2]));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let csv = dims(5, 2).to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("k,d_k,recursion,Pi_k coefficients"));
        assert_eq!(lines.count(), 3);
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("8:100").unwrap(), (8, 100));
        assert!(parse_grid("9:8").is_err());
        assert!(parse_grid("8-100").is_err());
    }

    #[test]
    fn f_column_increases() {
        let t = lower_bound(8, 100).unwrap();
        let f: Vec<f64> = t.rows.iter().map(|r| r[3].parse().unwrap()).collect();
        assert!((f[0] - 0.1111).abs() < 5e-4);
        assert!(f.windows(2).all(|w| w[1] > w[0]));
    }
}
