//! Run configuration, initial data and the text file formats.
//!
//! Snapshots are a `key: value` header, a blank line and one value per
//! line printed with 17 significant digits. Diagnostics are CSV with the
//! columns of [`DIAGNOSTICS_HEADER`].

mod config;
mod datum;

pub use config::{parse_pairs, Mode, RunConfig};
pub use datum::{Datum, TRUNCATION};

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::diagnostics::{DiagnosticsRecord, DiagnosticsSeries};
use crate::error::{Error, Result};
use crate::grid::{Field, FieldKind, Grid};

pub const SNAPSHOT_FORMAT: &str = "1";

pub const DIAGNOSTICS_HEADER: [&str; 11] = [
    "time",
    "mass",
    "linf",
    "l2",
    "l4",
    "moment2",
    "energy1",
    "entropy",
    "boltzmann",
    "dissipation",
    "support_radius",
];

/// A field with the metadata stored alongside it.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub field: Field,
    pub s: f64,
    pub time: f64,
    pub mode: String,
}

pub fn write_snapshot(path: &Path, snap: &Snapshot) -> Result<()> {
    let g = snap.field.grid();
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "format: {SNAPSHOT_FORMAT}")?;
    writeln!(w, "n: {}", g.dim())?;
    writeln!(w, "s: {:e}", snap.s)?;
    writeln!(w, "L: {:e}", g.half_width())?;
    writeln!(w, "N: {}", g.points_per_axis())?;
    writeln!(w, "time: {:e}", snap.time)?;
    writeln!(w, "mode: {}", snap.mode)?;
    writeln!(w, "kind: {}", snap.field.kind().as_str())?;
    writeln!(w)?;
    for v in snap.field.values() {
        writeln!(w, "{v:.16e}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let text = fs::read_to_string(path)?;
    let fail = |reason: String| Error::Format { path: path.display().to_string(), reason };
    let (head, body) = text.split_once("\n\n").ok_or_else(|| fail("missing blank line after header".into()))?;
    let mut header = BTreeMap::new();
    for line in head.lines() {
        let (k, v) = line.split_once(':').ok_or_else(|| fail(format!("bad header line `{line}`")))?;
        header.insert(k.trim().to_string(), v.trim().to_string());
    }
    let get = |k: &str| header.get(k).ok_or_else(|| fail(format!("missing header key `{k}`")));
    if get("format")? != SNAPSHOT_FORMAT {
        return Err(fail(format!("unsupported format `{}`", get("format")?)));
    }
    let num = |k: &str| -> Result<f64> { get(k)?.parse().map_err(|_| fail(format!("bad value for `{k}`"))) };
    let int = |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| fail(format!("bad value for `{k}`"))) };
    let grid = Grid::new(int("n")?, num("L")?, int("N")?).map_err(|e| fail(e.to_string()))?;
    let kind = match header.get("kind") {
        Some(k) => FieldKind::parse(k).ok_or_else(|| fail(format!("unknown kind `{k}`")))?,
        None => FieldKind::Generic,
    };
    let values: Vec<f64> = body
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| fail(format!("bad value `{t}`"))))
        .collect::<Result<_>>()?;
    if values.len() != grid.len() {
        return Err(fail(format!("expected {} values, found {}", grid.len(), values.len())));
    }
    let field = Field::new(grid, values, kind).map_err(|e| fail(e.to_string()))?;
    Ok(Snapshot { field, s: num("s")?, time: num("time")?, mode: get("mode")?.clone() })
}

fn row(r: &DiagnosticsRecord) -> [f64; 11] {
    [
        r.time,
        r.mass,
        r.linf,
        r.l2,
        r.l4,
        r.moment2,
        r.energy1,
        r.entropy,
        r.boltzmann,
        r.dissipation,
        r.support_radius,
    ]
}

pub fn write_diagnostics(path: &Path, series: &DiagnosticsSeries) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(DIAGNOSTICS_HEADER)?;
    for r in &series.records {
        w.write_record(row(r).iter().map(|x| format!("{x:e}")))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the columns written by [`write_diagnostics`]; the other fields of
/// each record stay at their defaults.
pub fn read_diagnostics(path: &Path) -> Result<Vec<DiagnosticsRecord>> {
    let fail = |reason: String| Error::Format { path: path.display().to_string(), reason };
    let mut rd = csv::Reader::from_path(path)?;
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != DIAGNOSTICS_HEADER {
        return Err(fail(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let x: Vec<f64> = rec
            .iter()
            .map(|t| t.parse().map_err(|_| fail(format!("bad value `{t}`"))))
            .collect::<Result<_>>()?;
        out.push(DiagnosticsRecord {
            time: x[0],
            mass: x[1],
            linf: x[2],
            l2: x[3],
            l4: x[4],
            moment2: x[5],
            energy1: x[6],
            entropy: x[7],
            boltzmann: x[8],
            dissipation: x[9],
            support_radius: x[10],
            ..Default::default()
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(2, 1.5, 8).unwrap();
        let f = Field::from_fn(g, FieldKind::Density, |x| (x[0] * 3.1).sin().abs() / 7.0 + x[1] * x[1]).unwrap();
        let snap = Snapshot { field: f, s: 0.3, time: 1.0 / 3.0, mode: "rescaled".into() };
        let p = dir.path().join("a.txt");
        write_snapshot(&p, &snap).unwrap();
        assert_eq!(read_snapshot(&p).unwrap(), snap);
    }

    #[test]
    fn snapshot_count_checked() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("b.txt");
        fs::write(&p, "format: 1\nn: 1\ns: 0.25\nL: 1\nN: 8\ntime: 0\nmode: physical\n\n1 2 3\n").unwrap();
        assert!(matches!(read_snapshot(&p), Err(Error::Format { .. })));
        fs::write(&p, "format: 1\nn: 1\nL: 1\nN: 8\ntime: 0\nmode: physical\n\n1 2 3 4 5 6 7 8\n").unwrap();
        assert!(read_snapshot(&p).unwrap_err().to_string().contains("`s`"));
    }

    #[test]
    fn diagnostics_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.csv");
        let rec = DiagnosticsRecord { time: 0.5, mass: 2.0, entropy: 0.1 + 0.2, ..Default::default() };
        let series = DiagnosticsSeries { records: vec![rec], ..Default::default() };
        write_diagnostics(&p, &series).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("time,mass,linf,l2,l4,moment2,energy1,entropy,boltzmann,dissipation,support_radius\n"));
        assert_eq!(read_diagnostics(&p).unwrap(), vec![rec]);
    }
}
