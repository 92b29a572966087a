//! CSV and JSON artifacts.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::damping::DampingProfile;
use crate::error::{invalid, Error, Result};
use crate::evolution::Trajectory;
use crate::operator::{RadialGrid, ReducedField};

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub const TRAJECTORY_HEADER: [&str; 7] = ["t", "mass", "quadform", "potential", "energy", "action_I", "A_t"];

pub fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(TRAJECTORY_HEADER)?;
    for o in &traj.samples {
        w.write_record([o.t, o.mass, o.quadform, o.potential, o.energy, o.action_i, o.gauge].map(fmt_f64))?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `r, Re u, Im u, |u|²`.
pub fn write_field_csv(path: &Path, f: &ReducedField) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["r", "re", "im", "abs2"])?;
    for (r, u) in f.grid.nodes().zip(f.u_values()) {
        w.write_record([r, u.re, u.im, u.norm_sqr()].map(fmt_f64))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a field written by [`write_field_csv`]; nodes must match `grid`.
pub fn read_field_csv(path: &Path, grid: RadialGrid, dim: usize) -> Result<ReducedField> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut u = Vec::with_capacity(grid.cells);
    for (j, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let num = |k: usize| -> Result<f64> {
            rec.get(k)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| invalid("initial.path", format!("row {}: column {k} is not a number", j + 1)))
        };
        let r = num(0)?;
        if j >= grid.cells || (r - grid.node(j)).abs() > 1e-9 * grid.radius {
            return Err(invalid(
                "initial.path",
                format!("row {}: node r = {r} does not match the configured grid", j + 1),
            ));
        }
        u.push(Complex64::new(num(1)?, num(2)?));
    }
    if u.len() != grid.cells {
        return Err(Error::GridMismatch {
            expected: grid.cells,
            found: u.len(),
        });
    }
    Ok(ReducedField::from_u_values(grid, dim, &u))
}

/// Two-column CSV `t,a` with a header row.
pub fn read_damping_table(path: &Path) -> Result<DampingProfile> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut knots = Vec::new();
    for (j, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let num = |k: usize| -> Result<f64> {
            rec.get(k)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| invalid("damping.path", format!("row {}: column {k} is not a number", j + 1)))
        };
        knots.push((num(0)?, num(1)?));
    }
    DampingProfile::table(knots)
}

/// Generic table: header plus rows of preformatted cells.
pub fn write_table_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
