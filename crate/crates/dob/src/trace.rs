//! Uniformly sampled simulation traces with named columns and CSV export.

use crate::error::{Error, Result};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    t: Vec<f64>,
    columns: Vec<(String, Vec<f64>)>,
}

impl SimulationTrace {
    pub fn new(t: Vec<f64>) -> Self {
        SimulationTrace {
            t,
            columns: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.t
    }

    pub fn dt(&self) -> f64 {
        if self.t.len() >= 2 {
            self.t[1] - self.t[0]
        } else {
            0.0
        }
    }

    pub fn push_column(&mut self, name: impl Into<String>, data: Vec<f64>) -> Result<()> {
        let name = name.into();
        if data.len() != self.t.len() {
            return Err(Error::GridMismatch {
                reason: format!(
                    "column {} has {} samples, time axis has {}",
                    name,
                    data.len(),
                    self.t.len()
                ),
            });
        }
        if self.columns.iter().any(|(existing, _)| *existing == name) {
            return Err(Error::GridMismatch {
                reason: format!("duplicate column {name}"),
            });
        }
        self.columns.push((name, data));
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d.as_slice())
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    /// Maximum of |column| over samples with t > t_min.
    pub fn sup_abs_after(&self, name: &str, t_min: f64) -> Option<f64> {
        let data = self.column(name)?;
        Some(
            self.t
                .iter()
                .zip(data)
                .filter(|(&t, _)| t > t_min)
                .map(|(_, v)| v.abs())
                .fold(0.0, f64::max),
        )
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "t")?;
        for (name, _) in &self.columns {
            write!(w, ",{name}")?;
        }
        writeln!(w)?;
        for i in 0..self.t.len() {
            write!(w, "{}", self.t[i])?;
            for (_, data) in &self.columns {
                write!(w, ",{}", data[i])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn write_csv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut buf = std::io::BufWriter::new(file);
        self.write_csv(&mut buf)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_length_enforced() {
        let mut trace = SimulationTrace::new(vec![0.0, 0.1, 0.2]);
        assert!(trace.push_column("y", vec![1.0, 2.0]).is_err());
        trace.push_column("y", vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(trace.column("y"), Some(&[1.0, 2.0, 3.0][..]));
        assert!(trace.column("u").is_none());
    }

    #[test]
    fn csv_layout() {
        let mut trace = SimulationTrace::new(vec![0.0, 0.5]);
        trace.push_column("y", vec![1.0, -2.5]).unwrap();
        let mut out = Vec::new();
        trace.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "t,y\n0,1\n0.5,-2.5\n");
    }
}
