//! Plain-text tables: CSV with a header row, or two-column whitespace `.dat`.
//!
//! Reals are written in the shortest form that parses back to the same `f64`,
//! always with a dot decimal separator.

use std::io::{self, Read, Write};

use crate::error::{Error, Result};
use crate::landscape::{CostDistribution, CostRange, NeighbourKernel, NeighbourhoodSize};
use crate::rate::RatePoint;
use crate::scalar::Scalar;
use crate::simulate::TraceRow;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Panics if the row width differs from the header.
    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns).map_err(io::Error::from)?;
        for row in &self.rows {
            out.write_record(row).map_err(io::Error::from)?;
        }
        out.flush()?;
        Ok(())
    }

    /// First column against column `value`; rows with an empty value are skipped.
    pub fn write_dat<W: Write>(&self, mut w: W, value: usize) -> Result<()> {
        writeln!(w, "# {} {}", self.columns[0], self.columns[value])?;
        for row in self.rows.iter().filter(|r| !r[value].is_empty()) {
            writeln!(w, "{} {}", row[0], row[value])?;
        }
        Ok(())
    }
}

pub fn real(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn scalar<T: Scalar>(x: &T) -> String {
    real(x.as_f64())
}

/// Empty cell for a missing value.
pub fn opt_scalar<T: Scalar>(x: Option<&T>) -> String {
    x.map(scalar).unwrap_or_default()
}

/// `k,p`
pub fn distribution_table<T: Scalar>(dist: &CostDistribution<T>) -> Table {
    let mut t = Table::new(&["k", "p"]);
    for (k, p) in dist.range().costs().zip(dist.probabilities()) {
        t.push(vec![k.to_string(), scalar(p)]);
    }
    t
}

/// `k1,k2,pn` over the nonzero entries of the present rows.
pub fn kernel_table<T: Scalar>(kernel: &NeighbourKernel<T>) -> Table {
    let mut t = Table::new(&["k1", "k2", "pn"]);
    let range = kernel.range();
    for k1 in kernel.present_rows() {
        let row = kernel.row(k1).expect("present row");
        for (k2, v) in range.costs().zip(row).filter(|(_, v)| !v.is_zero()) {
            t.push(vec![k1.to_string(), k2.to_string(), scalar(v)]);
        }
    }
    t
}

/// `k,e_imp,en_imp`
pub fn rates_table<T: Scalar>(points: &[RatePoint<T>]) -> Table {
    let mut t = Table::new(&["k", "e_imp", "en_imp"]);
    for pt in points {
        t.push(vec![pt.k.to_string(), scalar(&pt.e_imp), opt_scalar(pt.en_imp.as_ref())]);
    }
    t
}

/// `run,phase,step,cost`
pub fn trace_table(rows: &[TraceRow]) -> Table {
    let mut t = Table::new(&["run", "phase", "step", "cost"]);
    for r in rows {
        t.push(vec![
            r.run.to_string(),
            r.phase.as_str().to_string(),
            r.step.to_string(),
            r.cost.to_string(),
        ]);
    }
    t
}

fn records<R: Read>(r: R, want: &[&str]) -> Result<Vec<(usize, Vec<String>)>> {
    let mut rd = csv::Reader::from_reader(r);
    let header = rd.headers().map_err(|e| parse_error(1, e))?.clone();
    if header.iter().ne(want.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header {}", want.join(",")),
        });
    }
    rd.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(|e| parse_error(i + 2, e))?;
            Ok((i + 2, rec.iter().map(str::to_string).collect()))
        })
        .collect()
}

fn parse_error(line: usize, e: impl std::fmt::Display) -> Error {
    Error::Parse {
        line,
        msg: e.to_string(),
    }
}

fn field<F: std::str::FromStr>(line: usize, s: &str) -> Result<F>
where
    F::Err: std::fmt::Display,
{
    s.trim().parse().map_err(|e| parse_error(line, format!("{s:?}: {e}")))
}

/// Reads a `k,p` table; costs must be contiguous and ascending.
pub fn read_distribution<R: Read>(r: R) -> Result<CostDistribution<f64>> {
    let recs = records(r, &["k", "p"])?;
    let (first, _) = recs.first().ok_or_else(|| parse_error(2, "no rows"))?;
    let k_opt: i64 = field(*first, &recs[0].1[0])?;
    let mut p = Vec::with_capacity(recs.len());
    for (i, (line, rec)) in recs.iter().enumerate() {
        let k: i64 = field(*line, &rec[0])?;
        if k != k_opt + i as i64 {
            return Err(parse_error(*line, format!("cost {k} out of sequence")));
        }
        p.push(field(*line, &rec[1])?);
    }
    let range = CostRange::new(k_opt, k_opt + p.len() as i64 - 1)?;
    CostDistribution::new(range, p)
}

/// Reads a `k1,k2,pn` table into a kernel over `range`; unlisted rows are absent.
pub fn read_kernel<R: Read>(r: R, range: CostRange, size: NeighbourhoodSize) -> Result<NeighbourKernel<f64>> {
    let n = range.len();
    let mut rows: Vec<Option<Vec<f64>>> = vec![None; n];
    for (line, rec) in records(r, &["k1", "k2", "pn"])? {
        let k1: i64 = field(line, &rec[0])?;
        let k2: i64 = field(line, &rec[1])?;
        let (Some(i), Some(j)) = (range.index(k1), range.index(k2)) else {
            return Err(parse_error(line, format!("({k1},{k2}) outside {}..={}", range.k_opt(), range.k_max())));
        };
        rows[i].get_or_insert_with(|| vec![0.0; n])[j] = field(line, &rec[2])?;
    }
    NeighbourKernel::new(range, size, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{lipschitz_space, LipschitzSpaceSpec};

    #[test]
    fn reals_round_trip() {
        for x in [0.0, 0.1, 1.0 / 3.0, 178000.25, 3.5e-9, 2.0f64.powi(-60), 1e300] {
            assert_eq!(real(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(real(0.5), "0.5");
        assert_eq!(real(1.5e-7), "1.5e-7");
    }

    #[test]
    fn kernel_round_trip() {
        let (d, k) = lipschitz_space(&LipschitzSpaceSpec::<f64>::uniform(40, 3).unwrap()).unwrap();
        let mut buf = Vec::new();
        kernel_table(&k).write_csv(&mut buf).unwrap();
        assert!(buf.starts_with(b"k1,k2,pn\n"));
        let back = read_kernel(&buf[..], k.range(), k.size()).unwrap();
        assert_eq!(back, k);

        buf.clear();
        distribution_table(&d).write_csv(&mut buf).unwrap();
        assert_eq!(read_distribution(&buf[..]).unwrap(), d);
    }

    #[test]
    fn dat_skips_missing() {
        let mut t = Table::new(&["k", "a", "b"]);
        t.push(vec!["1".into(), "0.5".into(), String::new()]);
        t.push(vec!["2".into(), "0.25".into(), "3".into()]);
        let mut buf = Vec::new();
        t.write_dat(&mut buf, 2).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# k b\n2 3\n");
    }

    #[test]
    fn bad_header_is_rejected() {
        let err = read_distribution(&b"cost,p\n0,1\n"[..]).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
