//! CSV and JSON writers for grid data, spectra and martingale dumps.

use serde::Serialize;
use std::io::Write;

use crate::fourier::FourierCoeffs;
use crate::grid::GridFunction;
use crate::martingale::{AssociationTable, ExtendedProcess};
use crate::Result;

/// Writes `records` as CSV with a header taken from the field names.
pub fn write_csv<W: Write, S: Serialize>(w: W, records: impl IntoIterator<Item = S>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

/// Pretty JSON followed by a newline.
pub fn write_json<W: Write, S: Serialize + ?Sized>(mut w: W, value: &S) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct GridRow {
    j: usize,
    x_j: f64,
    re: f64,
    im: f64,
}

/// Columns `j, x_j, re, im`.
pub fn write_grid_function_csv<W: Write>(w: W, f: &GridFunction) -> Result<()> {
    let grid = f.grid();
    write_csv(
        w,
        f.values().iter().enumerate().map(|(j, v)| GridRow {
            j,
            x_j: grid.point(j),
            re: v.re,
            im: v.im,
        }),
    )
}

#[derive(Debug, Serialize)]
struct CoeffRow {
    m: i64,
    re: f64,
    im: f64,
    abs: f64,
}

/// Columns `m, re, im, abs`.
pub fn write_coeffs_csv<W: Write>(w: W, c: &FourierCoeffs) -> Result<()> {
    write_csv(
        w,
        c.iter().map(|(m, v)| CoeffRow {
            m,
            re: v.re,
            im: v.im,
            abs: v.norm(),
        }),
    )
}

#[derive(Debug, Serialize)]
struct SnapshotRow {
    t: f64,
    j: usize,
    x_j: f64,
    re: f64,
    im: f64,
}

/// Columns `t, j, x_j, re, im` for rows `(k, F_k)` taken at `t = k/ν`.
pub fn write_snapshots_csv<W: Write>(
    w: W,
    nu: usize,
    snapshots: &[(usize, GridFunction)],
) -> Result<()> {
    let rows = snapshots.iter().flat_map(|(k, f)| {
        let t = *k as f64 / nu as f64;
        let grid = f.grid();
        f.values()
            .iter()
            .enumerate()
            .map(move |(j, v)| SnapshotRow {
                t,
                j,
                x_j: grid.point(j),
                re: v.re,
                im: v.im,
            })
    });
    write_csv(w, rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DumpCell {
    pub k: usize,
    pub value_num: String,
    pub value_den: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DumpRow {
    pub t_index: usize,
    pub cells: Vec<DumpCell>,
}

/// Exact extended process; numerators and denominators as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MartingaleDump {
    pub eta: usize,
    pub nu: usize,
    pub rows: Vec<DumpRow>,
}

impl From<&ExtendedProcess> for MartingaleDump {
    fn from(e: &ExtendedProcess) -> Self {
        let rows = (0..=e.nu())
            .map(|t_index| DumpRow {
                t_index,
                cells: e
                    .at_time(t_index)
                    .iter()
                    .enumerate()
                    .map(|(k, v)| DumpCell {
                        k,
                        value_num: v.numer().to_string(),
                        value_den: v.denom().to_string(),
                    })
                    .collect(),
            })
            .collect();
        Self {
            eta: e.eta(),
            nu: e.nu(),
            rows,
        }
    }
}

#[derive(Debug, Serialize)]
struct AssociationRow {
    level: usize,
    k: usize,
    kind: &'static str,
    state: usize,
}

/// Columns `level, k, kind, state`; `level` is the filtration level, so the
/// finest row has level 0.
pub fn write_association_csv<W: Write>(w: W, a: &AssociationTable) -> Result<()> {
    let nu = a.nu();
    let rows = a.rows().iter().enumerate().flat_map(|(r, pts)| {
        pts.iter().enumerate().map(move |(k, p)| AssociationRow {
            level: nu - r,
            k,
            kind: p.kind.as_str(),
            state: p.state,
        })
    });
    write_csv(w, rows)
}
