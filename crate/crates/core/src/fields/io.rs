//! CSV field dumps: one row per node in storage order, coordinates first.

use std::path::Path;

use super::field::{ComplexField, ScalarField, VectorField};
use super::grid::Grid;
use crate::error::Result;

const COORDS: [&str; 3] = ["x", "y", "z"];

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_rows(
    path: &Path,
    grid: &Grid,
    value_names: &[&str],
    row: impl Fn(usize) -> Vec<f64>,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let header: Vec<&str> = COORDS[..grid.dim()]
        .iter()
        .copied()
        .chain(value_names.iter().copied())
        .collect();
    w.write_record(&header)?;
    for idx in 0..grid.len() {
        let p = grid.position(idx);
        let rec: Vec<String> = p[..grid.dim()]
            .iter()
            .copied()
            .chain(row(idx))
            .map(fmt)
            .collect();
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Header `x[,y,z],re`.
pub fn write_scalar_csv(path: &Path, s: &ScalarField) -> Result<()> {
    write_rows(path, s.grid(), &["re"], |i| vec![s.data()[i]])
}

/// Header `x[,y,z],re,im`.
pub fn write_complex_csv(path: &Path, z: &ComplexField) -> Result<()> {
    write_rows(path, z.grid(), &["re", "im"], |i| {
        vec![z.data()[i].re, z.data()[i].im]
    })
}

/// Header `x[,y,z],vx[,vy,vz]`.
pub fn write_vector_csv(path: &Path, v: &VectorField) -> Result<()> {
    let names = &["vx", "vy", "vz"][..v.dim()];
    write_rows(path, v.grid(), names, |i| v.at(i)[..v.dim()].to_vec())
}

/// Reads a dump back as `(header, rows)`.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| crate::error::Error::Config(format!("bad number {s:?}: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Boundary;
    use num_complex::Complex64;

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::cube(-1.0, 1.0, 3, Boundary::Decaying).unwrap();
        let s = ScalarField::from_fn(&g, |p| (p[0] + 0.1).exp() / 3.0);
        let path = dir.path().join("s.csv");
        write_scalar_csv(&path, &s).unwrap();
        let (header, rows) = read_csv(&path).unwrap();
        assert_eq!(header, ["x", "y", "z", "re"]);
        for (row, v) in rows.iter().zip(s.data()) {
            assert_eq!(row[3], *v);
        }

        let z = ComplexField::from_fn(&g, |p| Complex64::new(p[1], 1.0 / 3.0));
        write_complex_csv(&path, &z).unwrap();
        let (header, rows) = read_csv(&path).unwrap();
        assert_eq!(header, ["x", "y", "z", "re", "im"]);
        assert_eq!(rows[5][4], 1.0 / 3.0);

        let line = Grid::line(0.0, 1.0, 4, Boundary::Decaying).unwrap();
        let v = VectorField::from_fn(&line, |p| [p[0] * 2.0, 0.0, 0.0]);
        write_vector_csv(&path, &v).unwrap();
        let (header, rows) = read_csv(&path).unwrap();
        assert_eq!(header, ["x", "vx"]);
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[3][1], 1.5);
    }
}
