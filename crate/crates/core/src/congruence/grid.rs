//! Sampled congruences on a rectangular `(nu1, nu2)` grid, interpolated
//! bicubically (Catmull-Rom) so they can be differentiated.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

pub const GRID_COLUMNS: [&str; 6] = ["nu1", "nu2", "xi1", "xi2", "eta1", "eta2"];

/// Uniform grid of `(xi1, xi2, eta1, eta2)` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvGrid {
    pub nu1: Vec<f64>,
    pub nu2: Vec<f64>,
    /// `values[i * nu2.len() + j]` is the sample at `(nu1[i], nu2[j])`.
    pub values: Vec<[f64; 4]>,
}

fn uniform(axis: &[f64], name: &str) -> Result<()> {
    let h = axis[1] - axis[0];
    let span = (axis[axis.len() - 1] - axis[0]).abs();
    if axis.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * span) {
        return Err(Error::Parse(format!("grid axis {name} is not uniformly spaced")));
    }
    Ok(())
}

impl CsvGrid {
    pub fn from_samples(rows: &[[f64; 6]]) -> Result<Self> {
        let axis = |k: usize| {
            let mut v: Vec<f64> = rows.iter().map(|r| r[k]).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        };
        let (nu1, nu2) = (axis(0), axis(1));
        if nu1.len() < 4 || nu2.len() < 4 {
            return Err(Error::Parse(format!("grid must be at least 4x4, got {}x{}", nu1.len(), nu2.len())));
        }
        if nu1.len() * nu2.len() != rows.len() {
            return Err(Error::Parse(format!(
                "{} rows do not form a rectangular {}x{} grid",
                rows.len(),
                nu1.len(),
                nu2.len()
            )));
        }
        uniform(&nu1, "nu1")?;
        uniform(&nu2, "nu2")?;
        let mut values = vec![[f64::NAN; 4]; rows.len()];
        for r in rows {
            let i = nu1.binary_search_by(|v| v.total_cmp(&r[0])).expect("value is on its own axis");
            let j = nu2.binary_search_by(|v| v.total_cmp(&r[1])).expect("value is on its own axis");
            values[i * nu2.len() + j] = [r[2], r[3], r[4], r[5]];
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Parse("grid has missing or non-finite samples".into()));
        }
        Ok(Self { nu1, nu2, values })
    }

    /// Reads CSV with (at least) the columns `nu1,nu2,xi1,xi2,eta1,eta2`.
    pub fn read(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        let idx: Vec<usize> = GRID_COLUMNS
            .iter()
            .map(|c| headers.iter().position(|h| h == *c).ok_or_else(|| Error::Parse(format!("missing column '{c}'"))))
            .collect::<Result<_>>()?;
        let mut rows = Vec::new();
        for (n, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let mut row = [0.0; 6];
            for (k, &i) in idx.iter().enumerate() {
                let field = rec.get(i).unwrap_or("");
                row[k] = field
                    .parse()
                    .map_err(|_| Error::Parse(format!("row {}: column {} is not a number: '{field}'", n + 2, GRID_COLUMNS[k])))?;
            }
            rows.push(row);
        }
        Self::from_samples(&rows)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::read(f)
    }

    pub fn domain(&self) -> [[f64; 2]; 2] {
        [[self.nu1[0], *self.nu1.last().unwrap()], [self.nu2[0], *self.nu2.last().unwrap()]]
    }

    /// Sample with quadratic extrapolation one node beyond each edge.
    fn at(&self, i: isize, j: isize, k: usize) -> f64 {
        let (n1, n2) = (self.nu1.len() as isize, self.nu2.len() as isize);
        let ghost = |i: isize, n: isize| -> Option<[isize; 3]> {
            if i < 0 {
                Some([0, 1, 2])
            } else if i >= n {
                Some([n - 1, n - 2, n - 3])
            } else {
                None
            }
        };
        if let Some([a, b, c]) = ghost(i, n1) {
            return 3.0 * self.at(a, j, k) - 3.0 * self.at(b, j, k) + self.at(c, j, k);
        }
        if let Some([a, b, c]) = ghost(j, n2) {
            return 3.0 * self.at(i, a, k) - 3.0 * self.at(i, b, k) + self.at(i, c, k);
        }
        self.values[(i * n2 + j) as usize][k]
    }

    /// Bicubic Catmull-Rom interpolation at `(u, v)`.
    pub fn interpolate(&self, u: f64, v: f64) -> [f64; 4] {
        let locate = |axis: &[f64], x: f64| {
            let h = axis[1] - axis[0];
            let t = (x - axis[0]) / h;
            let i = t.floor().clamp(0.0, (axis.len() - 2) as f64);
            (i as isize, t - i)
        };
        let (i, s) = locate(&self.nu1, u);
        let (j, t) = locate(&self.nu2, v);
        let w = |x: f64| {
            [
                0.5 * (-x * x * x + 2.0 * x * x - x),
                0.5 * (3.0 * x * x * x - 5.0 * x * x + 2.0),
                0.5 * (-3.0 * x * x * x + 4.0 * x * x + x),
                0.5 * (x * x * x - x * x),
            ]
        };
        let (ws, wt) = (w(s), w(t));
        let mut out = [0.0; 4];
        for (k, o) in out.iter_mut().enumerate() {
            for (a, wa) in ws.iter().enumerate() {
                for (b, wb) in wt.iter().enumerate() {
                    *o += wa * wb * self.at(i + a as isize - 1, j + b as isize - 1, k);
                }
            }
        }
        out
    }
}
