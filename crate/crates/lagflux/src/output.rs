//! CSV emission and parsing for snapshots and convergence tables.
//!
//! Numeric fields are written as `{:.16e}` — 17 significant digits — so a
//! parsed file recovers every f64 bit-exactly, and identical runs produce
//! byte-identical files (no timestamps, no locale, fixed column order).

use crate::euler::{primitive_from_conservative, ConservativeState, EulerError, GasModel, PrimitiveState};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    /// A snapshot held a state the thermodynamics reject; indicates a bug in
    /// the caller, since the solver validates every state it produces.
    #[error("snapshot holds a non-physical state: {0}")]
    InvalidSnapshot(#[from] EulerError),
}

fn io_err(path: &Path, source: std::io::Error) -> OutputError {
    OutputError::Io { path: path.to_path_buf(), source }
}

/// Writes one solution snapshot. Columns: `x,rho,u,p,e,eta,Pi`, plus
/// `rho_ref,u_ref,p_ref` when a reference profile is supplied. Rows follow
/// the order of `centers` (ascending x on our grids).
pub fn write_snapshot_csv(
    path: &Path,
    centers: &[f64],
    cells: &[ConservativeState],
    pi: &[f64],
    gas: &GasModel,
    reference: Option<&[PrimitiveState]>,
) -> Result<(), OutputError> {
    assert_eq!(centers.len(), cells.len(), "one cell per center");
    assert_eq!(centers.len(), pi.len(), "one residual per cell");
    if let Some(r) = reference {
        assert_eq!(centers.len(), r.len(), "one reference sample per cell");
    }

    let mut text = String::new();
    text.push_str("x,rho,u,p,e,eta,Pi");
    if reference.is_some() {
        text.push_str(",rho_ref,u_ref,p_ref");
    }
    text.push('\n');

    let gamma = gas.gamma();
    for j in 0..centers.len() {
        let w = primitive_from_conservative(&cells[j], gas)?;
        let e = w.p / ((gamma - 1.0) * w.rho);
        let eta = -w.rho * (w.p.ln() - gamma * w.rho.ln());
        write!(
            text,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            centers[j], w.rho, w.u, w.p, e, eta, pi[j]
        )
        .expect("writing to a String cannot fail");
        if let Some(r) = reference {
            write!(text, ",{:.16e},{:.16e},{:.16e}", r[j].rho, r[j].u, r[j].p)
                .expect("writing to a String cannot fail");
        }
        text.push('\n');
    }

    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

/// One line of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_cells: usize,
    pub h: f64,
    pub err_rho_l1: f64,
    pub err_u_l1: f64,
    pub err_p_l1: f64,
    /// L1 density order against the previous (coarser) row; `None` (an empty
    /// CSV field) for the first row or when an error vanishes.
    pub observed_order: Option<f64>,
}

/// Observed order log(err_c/err_f)/log(h_c/h_f); `None` when undefined
/// (non-positive error, or equal spacings).
pub fn observed_order(err_coarse: f64, h_coarse: f64, err_fine: f64, h_fine: f64) -> Option<f64> {
    if !(err_coarse > 0.0 && err_fine > 0.0 && h_coarse > 0.0 && h_fine > 0.0) {
        return None;
    }
    if h_coarse == h_fine {
        return None;
    }
    Some((err_coarse / err_fine).ln() / (h_coarse / h_fine).ln())
}

/// Writes a convergence study. Header:
/// `n_cells,h,err_rho_l1,err_u_l1,err_p_l1,observed_order`.
pub fn write_convergence_csv(path: &Path, rows: &[ConvergenceRow]) -> Result<(), OutputError> {
    let mut text = String::from("n_cells,h,err_rho_l1,err_u_l1,err_p_l1,observed_order\n");
    for row in rows {
        write!(
            text,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},",
            row.n_cells, row.h, row.err_rho_l1, row.err_u_l1, row.err_p_l1
        )
        .expect("writing to a String cannot fail");
        if let Some(order) = row.observed_order {
            write!(text, "{order:.16e}").expect("writing to a String cannot fail");
        }
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

/// A parsed all-numeric CSV file with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    /// One vector per header entry, row-aligned.
    pub columns: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.header
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }
}

/// Reads a CSV produced by this module. Empty fields parse as NaN so that
/// optional columns (`observed_order`) stay row-aligned.
pub fn read_numeric_csv(path: &Path) -> Result<CsvTable, OutputError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut lines = text.lines().enumerate();
    let (_, header_line) = lines.next().ok_or_else(|| OutputError::Parse {
        path: path.to_path_buf(),
        line: 1,
        message: "empty file".into(),
    })?;
    let header: Vec<String> = header_line.split(',').map(str::to_string).collect();
    let mut columns = vec![Vec::new(); header.len()];
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(OutputError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: format!("expected {} fields, found {}", header.len(), fields.len()),
            });
        }
        for (col, field) in columns.iter_mut().zip(&fields) {
            let value = if field.is_empty() {
                f64::NAN
            } else {
                field.parse::<f64>().map_err(|_| OutputError::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    message: format!("not a number: '{field}'"),
                })?
            };
            col.push(value);
        }
    }
    Ok(CsvTable { header, columns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::conservative_from_primitive;

    fn gas() -> GasModel {
        GasModel::new(1.4).unwrap()
    }

    fn sample_cells() -> (Vec<f64>, Vec<ConservativeState>, Vec<f64>) {
        let ws = [
            PrimitiveState { rho: 1.0, u: 0.0, p: 1.0 },
            PrimitiveState { rho: 0.7, u: 0.3, p: 0.9 },
            PrimitiveState { rho: 0.125, u: -0.1, p: 0.1 },
        ];
        let cells = ws
            .iter()
            .map(|w| conservative_from_primitive(w, &gas()).unwrap())
            .collect();
        (vec![0.25, 0.5, 0.75], cells, vec![0.0, -1e-9, 2e-8])
    }

    #[test]
    fn snapshot_csv_round_trips_bit_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.csv");
        let (x, cells, pi) = sample_cells();
        write_snapshot_csv(&path, &x, &cells, &pi, &gas(), None).unwrap();

        let table = read_numeric_csv(&path).unwrap();
        assert_eq!(table.header, ["x", "rho", "u", "p", "e", "eta", "Pi"]);
        assert_eq!(table.n_rows(), 3);
        for (j, cell) in cells.iter().enumerate() {
            let w = primitive_from_conservative(cell, &gas()).unwrap();
            assert_eq!(table.column("x").unwrap()[j], x[j]);
            assert_eq!(table.column("rho").unwrap()[j], w.rho);
            assert_eq!(table.column("u").unwrap()[j], w.u);
            assert_eq!(table.column("p").unwrap()[j], w.p);
            assert_eq!(table.column("Pi").unwrap()[j], pi[j]);
        }
    }

    #[test]
    fn snapshot_csv_appends_reference_columns() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap_ref.csv");
        let (x, cells, pi) = sample_cells();
        let reference = vec![PrimitiveState { rho: 0.9, u: 0.1, p: 0.8 }; 3];
        write_snapshot_csv(&path, &x, &cells, &pi, &gas(), Some(&reference)).unwrap();

        let table = read_numeric_csv(&path).unwrap();
        assert_eq!(
            table.header,
            ["x", "rho", "u", "p", "e", "eta", "Pi", "rho_ref", "u_ref", "p_ref"]
        );
        assert_eq!(table.column("rho_ref").unwrap(), [0.9, 0.9, 0.9]);
    }

    #[test]
    fn identical_snapshots_produce_identical_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let (x, cells, pi) = sample_cells();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_snapshot_csv(&a, &x, &cells, &pi, &gas(), None).unwrap();
        write_snapshot_csv(&b, &x, &cells, &pi, &gas(), None).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }

    #[test]
    fn convergence_csv_leaves_undefined_orders_empty() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("conv.csv");
        let rows = [
            ConvergenceRow {
                n_cells: 100,
                h: 0.01,
                err_rho_l1: 2e-2,
                err_u_l1: 1e-2,
                err_p_l1: 5e-3,
                observed_order: None,
            },
            ConvergenceRow {
                n_cells: 400,
                h: 0.0025,
                err_rho_l1: 8e-3,
                err_u_l1: 4e-3,
                err_p_l1: 2e-3,
                observed_order: Some(0.66),
            },
        ];
        write_convergence_csv(&path, &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n_cells,h,err_rho_l1,err_u_l1,err_p_l1,observed_order");
        assert!(lines[1].ends_with(','), "first row order field must be empty");
        assert!(lines[2].ends_with("6.6000000000000003e-1"));

        let table = read_numeric_csv(&path).unwrap();
        assert!(table.column("observed_order").unwrap()[0].is_nan());
        assert_eq!(table.column("n_cells").unwrap()[1], 400.0);
    }

    #[test]
    fn observed_order_handles_degenerate_inputs() {
        let order = observed_order(2e-2, 0.01, 8e-3, 0.0025).unwrap();
        assert!((order - (2e-2f64 / 8e-3).ln() / 4.0f64.ln()).abs() < 1e-15);
        assert_eq!(observed_order(0.0, 0.01, 1e-3, 0.0025), None);
        assert_eq!(observed_order(1e-2, 0.01, 0.0, 0.0025), None);
        assert_eq!(observed_order(1e-2, 0.01, 1e-3, 0.01), None);
    }

    #[test]
    fn malformed_rows_are_parse_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "a,b\n1.0\n").unwrap();
        assert!(matches!(read_numeric_csv(&path), Err(OutputError::Parse { line: 2, .. })));
        std::fs::write(&path, "a,b\n1.0,zebra\n").unwrap();
        assert!(matches!(read_numeric_csv(&path), Err(OutputError::Parse { .. })));
    }

    #[test]
    fn unwritable_path_is_an_io_error() {
        let (x, cells, pi) = sample_cells();
        let err = write_snapshot_csv(
            Path::new("/nonexistent-dir/snap.csv"),
            &x,
            &cells,
            &pi,
            &gas(),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, OutputError::Io { .. }));
    }
}
