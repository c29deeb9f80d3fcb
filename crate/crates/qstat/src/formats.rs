//! File formats: quasiprobability tables as CSV, POVMs as JSON.

use std::io::{Read, Write};

use qstat_core::measurement::{Povm, PovmOutcome};
use qstat_core::statistics::{DiracDistribution, WeakTable};
use qstat_core::{c64, Basis, Complex64, Tolerances};
use serde::{Deserialize, Serialize};

use crate::num::Matrix;
use crate::scenario::base_vars;
use crate::value::Cell;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Numerical(#[from] qstat_core::Error),
}

pub const TABLE_HEADER: [&str; 4] = ["a_index", "b_index", "re", "im"];

fn pair_rows(dim: usize, value: impl Fn(usize, usize) -> Complex64) -> Vec<Vec<Cell>> {
    let mut rows = Vec::with_capacity(dim * dim);
    for a in 0..dim {
        for b in 0..dim {
            let z = value(a, b);
            rows.push(vec![Cell::Int(a), Cell::Int(b), Cell::Real(z.re), Cell::Real(z.im)]);
        }
    }
    rows
}

pub(crate) fn dirac_rows(d: &DiracDistribution) -> Vec<Vec<Cell>> {
    pair_rows(d.dim(), |a, b| d.get(a, b))
}

/// Rows are keyed by `(a, b)` even though the table is stored `[b][a]`.
pub(crate) fn weak_rows(w: &WeakTable) -> Vec<Vec<Cell>> {
    pair_rows(w.dim(), |a, b| w.get(b, a))
}

fn write_rows(out: impl Write, rows: Vec<Vec<Cell>>) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TABLE_HEADER)?;
    for row in rows {
        w.write_record(row.iter().map(Cell::csv))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_dirac_csv(out: impl Write, dist: &DiracDistribution) -> Result<(), FormatError> {
    write_rows(out, dirac_rows(dist))
}

pub fn write_weak_csv(out: impl Write, table: &WeakTable) -> Result<(), FormatError> {
    write_rows(out, weak_rows(table))
}

#[derive(Deserialize)]
struct PairRecord {
    a_index: usize,
    b_index: usize,
    re: f64,
    im: f64,
}

/// Reads a `dim x dim` table indexed `[a][b]`; every cell must appear once.
fn read_pairs(input: impl Read, dim: usize) -> Result<Vec<Complex64>, FormatError> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != TABLE_HEADER {
        return Err(FormatError::Invalid(format!("expected header {}", TABLE_HEADER.join(","))));
    }
    let mut cells: Vec<Option<Complex64>> = vec![None; dim * dim];
    for record in reader.deserialize() {
        let r: PairRecord = record?;
        if r.a_index >= dim || r.b_index >= dim {
            return Err(FormatError::Invalid(format!("index ({}, {}) out of range", r.a_index, r.b_index)));
        }
        let slot = &mut cells[r.a_index * dim + r.b_index];
        if slot.replace(c64(r.re, r.im)).is_some() {
            return Err(FormatError::Invalid(format!("duplicate entry ({}, {})", r.a_index, r.b_index)));
        }
    }
    cells
        .into_iter()
        .enumerate()
        .map(|(k, z)| z.ok_or_else(|| FormatError::Invalid(format!("missing entry ({}, {})", k / dim, k % dim))))
        .collect()
}

pub fn read_dirac_csv(input: impl Read, basis_a: Basis, basis_b: Basis) -> Result<DiracDistribution, FormatError> {
    let table = read_pairs(input, basis_a.dim())?;
    Ok(DiracDistribution::from_table(basis_a, basis_b, table)?)
}

pub fn read_weak_csv(input: impl Read, basis_a: Basis, basis_b: Basis) -> Result<WeakTable, FormatError> {
    let d = basis_a.dim();
    let by_a = read_pairs(input, d)?;
    let by_b = (0..d * d).map(|k| by_a[(k % d) * d + k / d]).collect();
    Ok(WeakTable::from_values(basis_a, basis_b, by_b)?)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PovmDocument {
    dim: usize,
    outcomes: Vec<crate::scenario::OutcomeSpec>,
}

/// Loads and validates a POVM document.
pub fn read_povm_json(input: impl Read, tol: &Tolerances) -> Result<Povm, FormatError> {
    let doc: PovmDocument = serde_json::from_reader(input)?;
    let outcomes = doc
        .outcomes
        .iter()
        .map(|o| {
            let element = o.matrix.to_operator(&base_vars()).map_err(FormatError::Invalid)?;
            if element.dim() != doc.dim {
                return Err(FormatError::Invalid(format!(
                    "outcome {:?} has dimension {}, expected {}",
                    o.label,
                    element.dim(),
                    doc.dim
                )));
            }
            Ok(PovmOutcome::new(o.label.clone(), element))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Povm::new(outcomes, tol)?)
}

pub fn write_povm_json(out: impl Write, povm: &Povm) -> Result<(), FormatError> {
    let doc = PovmDocument {
        dim: povm.dim(),
        outcomes: povm
            .outcomes()
            .iter()
            .map(|o| crate::scenario::OutcomeSpec {
                label: o.label.clone(),
                matrix: Matrix::from_operator(&o.element),
            })
            .collect(),
    };
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use qstat_core::statistics::{dirac_distribution, weak_table};

    const TOL: Tolerances = Tolerances::DEFAULT;

    #[test]
    fn dirac_csv_round_trip() {
        let mut rng = random::rng(3, 0);
        let rho = random::density(&mut rng, 3);
        let (ba, bb) = random::unbiased_pair(&mut rng, 3);
        let dist = dirac_distribution(&rho, &ba, &bb).unwrap();
        let mut buf = Vec::new();
        write_dirac_csv(&mut buf, &dist).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("a_index,b_index,re,im\n0,0,"));
        assert_eq!(read_dirac_csv(&buf[..], ba, bb).unwrap(), dist);
    }

    #[test]
    fn weak_csv_round_trip() {
        let mut rng = random::rng(4, 0);
        let m = random::ginibre(&mut rng, 3);
        let (ba, bb) = random::unbiased_pair(&mut rng, 3);
        let table = weak_table(&m, &ba, &bb, &TOL).unwrap();
        let mut buf = Vec::new();
        write_weak_csv(&mut buf, &table).unwrap();
        assert_eq!(read_weak_csv(&buf[..], ba, bb).unwrap(), table);
    }

    #[test]
    fn incomplete_csv_rejected() {
        let b = Basis::computational(2).unwrap();
        let text = "a_index,b_index,re,im\n0,0,1,0\n";
        assert!(matches!(read_dirac_csv(text.as_bytes(), b.clone(), b), Err(FormatError::Invalid(_))));
    }

    #[test]
    fn povm_json_round_trip() {
        let doc = r#"{"dim": 2, "outcomes": [
            {"label": "up", "matrix": [[1,0],[0,0],[0,0],[0,0]]},
            {"label": "down", "matrix": [[0,0],[0,0],[0,0],[1,0]]}]}"#;
        let povm = read_povm_json(doc.as_bytes(), &TOL).unwrap();
        assert_eq!(povm.outcomes()[1].label, "down");
        let mut buf = Vec::new();
        write_povm_json(&mut buf, &povm).unwrap();
        assert_eq!(read_povm_json(&buf[..], &TOL).unwrap(), povm);

        let incomplete = r#"{"dim": 2, "outcomes": [
            {"label": "0", "matrix": [[1,0],[0,0],[0,0],[0,0]]},
            {"label": "1", "matrix": [[0,0],[0,0],[0,0],[0.5,0]]}]}"#;
        assert!(matches!(
            read_povm_json(incomplete.as_bytes(), &TOL),
            Err(FormatError::Numerical(qstat_core::Error::InvalidPovm(_)))
        ));
    }
}
