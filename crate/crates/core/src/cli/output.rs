//! CSV tables and OBJ meshes with a fixed, reproducible text layout.

use std::path::Path;

use crate::error::{Error, Result};
use crate::geodesics::RuledSurfaceMesh;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Real(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_string())
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Self::Real(x) => fmt_real(*x),
            Self::Int(n) => n.to_string(),
            Self::Text(s) => s.clone(),
        }
    }
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

pub fn csv_string(header: &[&str], rows: &[Vec<Cell>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).map_err(io)?;
    for (k, row) in rows.iter().enumerate() {
        if row.len() != header.len() {
            return Err(Error::InvalidArgument(format!("row {k} has {} cells, header has {}", row.len(), header.len())));
        }
        w.write_record(row.iter().map(Cell::render)).map_err(io)?;
    }
    String::from_utf8(w.into_inner().map_err(io)?).map_err(io)
}

pub fn emit_csv(header: &[&str], rows: &[Vec<Cell>], path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(header, rows)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// `v` lines then 1-based quad `f` lines.
pub fn obj_string(mesh: &RuledSurfaceMesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        out.push_str(&format!("v {} {} {}\n", fmt_real(v.x), fmt_real(v.y), fmt_real(v.z)));
    }
    for q in &mesh.quads {
        out.push_str(&format!("f {} {} {} {}\n", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1));
    }
    out
}

pub fn emit_obj(mesh: &RuledSurfaceMesh, path: &Path) -> Result<()> {
    std::fs::write(path, obj_string(mesh)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::CsvGrid;
    use crate::geodesics::{ruled_surface, GeodesicParams};

    #[test]
    fn header_only_and_format() {
        assert_eq!(csv_string(&["a", "b"], &[]).unwrap(), "a,b\n");
        let s = csv_string(&["x", "n", "s"], &[vec![0.1.into(), Cell::Int(3), "Lorentzian".into()]]).unwrap();
        assert_eq!(s, "x,n,s\n1.0000000000000001e-1,3,Lorentzian\n");
        assert_eq!("1.0000000000000001e-1".parse::<f64>().unwrap(), 0.1);
        assert!(csv_string(&["a"], &[vec![]]).is_err());
    }

    #[test]
    fn reals_round_trip_exactly() {
        for x in [std::f64::consts::PI, -1e-300, 123456789.123456789, 2.0f64.sqrt() * 1e17] {
            assert_eq!(fmt_real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn grid_rows_load_back() {
        let header = crate::congruence::grid::GRID_COLUMNS;
        let mut rows = Vec::new();
        for i in 0..4 {
            for j in 0..5 {
                let (u, v) = (i as f64 / 3.0, 0.1 * j as f64);
                rows.push(vec![u.into(), v.into(), (u * v).into(), (1.0 / 3.0).into(), u.into(), v.into()]);
            }
        }
        let text = csv_string(&header, &rows).unwrap();
        let g = CsvGrid::read(text.as_bytes()).unwrap();
        assert_eq!(g.nu1.len(), 4);
        assert_eq!(g.values[7], [1.0 / 3.0 * 0.2, 1.0 / 3.0, 1.0 / 3.0, 0.2]);
    }

    #[test]
    fn obj_layout() {
        let p = GeodesicParams::new(1.0, 0.5, 0.0, 0.0);
        let m = ruled_surface(&p, (0.0, 1.0), (-1.0, 1.0), 2, 2).unwrap();
        let s = obj_string(&m);
        assert_eq!(s.lines().filter(|l| l.starts_with("v ")).count(), 4);
        let faces: Vec<_> = s.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(faces.len(), 1);
        for idx in faces[0].split_whitespace().skip(1) {
            let k: usize = idx.parse().unwrap();
            assert!((1..=4).contains(&k));
        }
        let m = ruled_surface(&p, (0.0, 1.0), (-1.0, 1.0), 7, 5).unwrap();
        assert_eq!(obj_string(&m).lines().filter(|l| l.starts_with("v ")).count(), 35);
    }
}
