//! Task results and their tabular renderings.

use qstat_core::dynamics::{ActionProfile, PeakScan};
use qstat_core::measurement::{EstimateAssignment, Povm, PovmReport};
use qstat_core::statistics::{DiracDistribution, EhrenfestCheck, EnergyBin, RecoveredProbabilities, WeakTable, WeakValueRecord};
use qstat_core::{c64, Basis, Complex64, DensityOperator, Operator, Spectrum, StateVector, ValidityReport};

use crate::ops::Kind;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Operator(Operator),
    State(StateVector),
    Density(DensityOperator),
    Basis(Basis),
    Spectrum(Spectrum),
    Povm(Povm),
    Estimates(EstimateAssignment),
    Scalar(f64),
    Complex(Complex64),
    Reals(Vec<f64>),
    Complexes(Vec<Complex64>),
    Dirac(DiracDistribution),
    WeakTable(WeakTable),
    WeakValue(WeakValueRecord),
    Profile(ActionProfile),
    Bins(Vec<EnergyBin>),
    Peak(PeakScan),
    Curve(Vec<(f64, f64)>),
    Ehrenfest(EhrenfestCheck),
    Validity(ValidityReport),
    PovmReport(PovmReport),
    Recovered(RecoveredProbabilities),
}

/// One cell of a rendered table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(usize),
    Real(f64),
    Text(String),
    Empty,
}

impl Cell {
    /// Full precision: 17 significant digits, locale independent.
    pub fn csv(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Real(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    pub fn display(&self) -> String {
        match self {
            Cell::Real(x) => format!("{x:.10e}"),
            other => other.csv(),
        }
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

fn reim(z: Complex64) -> [Cell; 2] {
    [Cell::Real(z.re), Cell::Real(z.im)]
}

fn operator_rows(op: &Operator) -> Vec<Vec<Cell>> {
    let d = op.dim();
    (0..d * d)
        .map(|k| {
            let [re, im] = reim(op.entries()[k]);
            vec![Cell::Int(k / d), Cell::Int(k % d), re, im]
        })
        .collect()
}

fn indexed_complex(values: &[Complex64]) -> Vec<Vec<Cell>> {
    values
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let [re, im] = reim(z);
            vec![Cell::Int(i), re, im]
        })
        .collect()
}

fn as_complex(xs: impl IntoIterator<Item = f64>) -> Vec<Complex64> {
    xs.into_iter().map(|x| c64(x, 0.0)).collect()
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Operator(_) => Kind::Operator,
            Value::State(_) => Kind::State,
            Value::Density(_) => Kind::Density,
            Value::Basis(_) => Kind::Basis,
            Value::Spectrum(_) => Kind::Spectrum,
            Value::Povm(_) => Kind::Povm,
            Value::Estimates(_) => Kind::Estimates,
            Value::Scalar(_) => Kind::Scalar,
            Value::Complex(_) => Kind::Complex,
            Value::Reals(_) => Kind::Reals,
            Value::Complexes(_) => Kind::Complexes,
            Value::Dirac(_) => Kind::Dirac,
            Value::WeakTable(_) => Kind::WeakTable,
            Value::WeakValue(_) => Kind::WeakValue,
            Value::Profile(_) => Kind::Profile,
            Value::Bins(_) => Kind::Bins,
            Value::Peak(_) => Kind::Peak,
            Value::Curve(_) => Kind::Curve,
            Value::Ehrenfest(_) => Kind::Ehrenfest,
            Value::Validity(_) => Kind::Validity,
            Value::PovmReport(_) => Kind::PovmReport,
            Value::Recovered(_) => Kind::Recovered,
        }
    }

    /// Pass/fail flag of validity reports.
    pub fn passed(&self) -> Option<bool> {
        match self {
            Value::Validity(r) => Some(r.passed),
            Value::PovmReport(r) => Some(r.passed),
            _ => None,
        }
    }

    /// Numbers an expectation inspects. `re` and `im` select the parts of
    /// the default view.
    pub fn numbers(&self, field: Option<&str>) -> Result<Vec<Complex64>, String> {
        match field {
            Some("re") => return Ok(as_complex(self.numbers(None)?.into_iter().map(|z| z.re))),
            Some("im") => return Ok(as_complex(self.numbers(None)?.into_iter().map(|z| z.im))),
            _ => {}
        }
        let field = field.unwrap_or("value");
        let missing = || Err(format!("a {} has no field {field:?}", self.kind().name()));
        Ok(match (self, field) {
            (Value::Scalar(x), "value") => vec![c64(*x, 0.0)],
            (Value::Complex(z), "value") => vec![*z],
            (Value::Reals(xs), "value") => as_complex(xs.iter().copied()),
            (Value::Complexes(zs), "value") => zs.clone(),
            (Value::Operator(op), "value") => op.entries().to_vec(),
            (Value::Density(rho), "value") => rho.as_operator().entries().to_vec(),
            (Value::State(s), "value") => s.amplitudes().to_vec(),
            (Value::Spectrum(s), "value") => as_complex(s.eigenvalues().iter().copied()),
            (Value::Dirac(d), "value") => d.table().to_vec(),
            (Value::WeakTable(w), "value") => w.values().to_vec(),
            (Value::WeakValue(w), "value") => vec![w.value],
            (Value::WeakValue(w), "overlap") => vec![c64(w.overlap_mag, 0.0)],
            (Value::Profile(p), "value") => as_complex(p.levels().iter().filter_map(|l| l.action)),
            (Value::Estimates(e), "value") => e.values().map(|(_, z)| z).collect(),
            (Value::Bins(bins), "value") => bins.iter().map(|b| b.mass).collect(),
            (Value::Peak(p), "value" | "time") => vec![c64(p.time, 0.0)],
            (Value::Peak(p), "probability") => vec![c64(p.probability, 0.0)],
            (Value::Curve(c), "value" | "probability") => as_complex(c.iter().map(|p| p.1)),
            (Value::Curve(c), "time") => as_complex(c.iter().map(|p| p.0)),
            (Value::Ehrenfest(e), "value" | "deviation") => vec![c64(e.deviation, 0.0)],
            (Value::Ehrenfest(e), "lhs") => vec![c64(e.lhs, 0.0)],
            (Value::Ehrenfest(e), "rhs") => vec![c64(e.rhs, 0.0)],
            (Value::Validity(r), "value" | "deviation") => vec![c64(r.deviation, 0.0)],
            (Value::Validity(r), "passed") => vec![c64(flag(r.passed), 0.0)],
            (Value::PovmReport(r), "value" | "completeness_deviation") => vec![c64(r.completeness_deviation, 0.0)],
            (Value::PovmReport(r), "positivity_deviation") => vec![c64(r.positivity_deviation, 0.0)],
            (Value::PovmReport(r), "hermiticity_deviation") => vec![c64(r.hermiticity_deviation, 0.0)],
            (Value::PovmReport(r), "passed") => vec![c64(flag(r.passed), 0.0)],
            (Value::Recovered(r), "value" | "probability") => as_complex(r.probabilities.iter().copied()),
            (Value::Recovered(r), "imaginary_residue") => vec![c64(r.imaginary_residue, 0.0)],
            _ => return missing(),
        })
    }

    pub fn table(&self) -> Table {
        let (header, rows): (Vec<&'static str>, Vec<Vec<Cell>>) = match self {
            Value::Operator(op) => (vec!["row", "col", "re", "im"], operator_rows(op)),
            Value::Density(rho) => (vec!["row", "col", "re", "im"], operator_rows(rho.as_operator())),
            Value::State(s) => (vec!["index", "re", "im"], indexed_complex(s.amplitudes())),
            Value::Basis(b) => (
                vec!["vector", "index", "re", "im"],
                b.vectors()
                    .iter()
                    .enumerate()
                    .flat_map(|(v, s)| {
                        s.amplitudes().iter().enumerate().map(move |(i, &z)| {
                            let [re, im] = reim(z);
                            vec![Cell::Int(v), Cell::Int(i), re, im]
                        })
                    })
                    .collect(),
            ),
            Value::Spectrum(s) => (
                vec!["index", "eigenvalue", "group"],
                s.eigenvalues()
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| vec![Cell::Int(i), Cell::Real(e), Cell::Int(s.group_of(i).unwrap_or(0))])
                    .collect(),
            ),
            Value::Povm(p) => (
                vec!["label", "row", "col", "re", "im"],
                p.outcomes()
                    .iter()
                    .flat_map(|o| {
                        operator_rows(&o.element).into_iter().map(move |mut row| {
                            row.insert(0, Cell::Text(o.label.clone()));
                            row
                        })
                    })
                    .collect(),
            ),
            Value::Estimates(e) => (
                vec!["label", "re", "im"],
                e.values()
                    .map(|(l, z)| {
                        let [re, im] = reim(z);
                        vec![Cell::Text(l.to_owned()), re, im]
                    })
                    .collect(),
            ),
            Value::Scalar(x) => (vec!["value"], vec![vec![Cell::Real(*x)]]),
            Value::Complex(z) => (vec!["re", "im"], vec![reim(*z).to_vec()]),
            Value::Reals(xs) => (
                vec!["index", "value"],
                xs.iter().enumerate().map(|(i, &x)| vec![Cell::Int(i), Cell::Real(x)]).collect(),
            ),
            Value::Complexes(zs) => (vec!["index", "re", "im"], indexed_complex(zs)),
            Value::Dirac(d) => (vec!["a_index", "b_index", "re", "im"], crate::formats::dirac_rows(d)),
            Value::WeakTable(w) => (vec!["a_index", "b_index", "re", "im"], crate::formats::weak_rows(w)),
            Value::WeakValue(w) => {
                let [re, im] = reim(w.value);
                (vec!["re", "im", "overlap"], vec![vec![re, im, Cell::Real(w.overlap_mag)]])
            }
            Value::Profile(p) => (
                vec!["index", "energy", "action", "weight"],
                p.levels()
                    .iter()
                    .map(|l| {
                        vec![
                            Cell::Int(l.index),
                            Cell::Real(l.energy),
                            l.action.map_or(Cell::Empty, Cell::Real),
                            Cell::Real(l.weight),
                        ]
                    })
                    .collect(),
            ),
            Value::Bins(bins) => (
                vec!["lower", "upper", "center", "mass_re", "mass_im", "levels"],
                bins.iter()
                    .map(|b| {
                        let [re, im] = reim(b.mass);
                        vec![Cell::Real(b.lower), Cell::Real(b.upper), Cell::Real(b.center), re, im, Cell::Int(b.levels)]
                    })
                    .collect(),
            ),
            Value::Peak(p) => (vec!["time", "probability"], vec![vec![Cell::Real(p.time), Cell::Real(p.probability)]]),
            Value::Curve(c) => (
                vec!["time", "probability"],
                c.iter().map(|&(t, p)| vec![Cell::Real(t), Cell::Real(p)]).collect(),
            ),
            Value::Ehrenfest(e) => (
                vec!["lhs", "rhs", "deviation", "coarse_step"],
                vec![vec![
                    Cell::Real(e.lhs),
                    Cell::Real(e.rhs),
                    Cell::Real(e.deviation),
                    Cell::Text(e.coarse_step.to_string()),
                ]],
            ),
            Value::Validity(r) => (
                vec!["kind", "passed", "deviation"],
                vec![vec![
                    Cell::Text(format!("{:?}", r.kind).to_lowercase()),
                    Cell::Text(r.passed.to_string()),
                    Cell::Real(r.deviation),
                ]],
            ),
            Value::PovmReport(r) => (
                vec!["passed", "completeness_deviation", "positivity_deviation", "hermiticity_deviation"],
                vec![vec![
                    Cell::Text(r.passed.to_string()),
                    Cell::Real(r.completeness_deviation),
                    Cell::Real(r.positivity_deviation),
                    Cell::Real(r.hermiticity_deviation),
                ]],
            ),
            Value::Recovered(r) => (
                vec!["index", "probability", "imaginary_residue"],
                r.probabilities
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| vec![Cell::Int(i), Cell::Real(p), Cell::Real(r.imaginary_residue)])
                    .collect(),
            ),
        };
        Table { header, rows }
    }
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
    }

    /// Right-aligned plain-text columns.
    pub fn render(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::display).collect()).collect();
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| cells.iter().map(|r| r[c].len()).chain([self.header[c].len()]).max().unwrap_or(0))
            .collect();
        let line = |items: Vec<&str>| {
            let mut s = items
                .iter()
                .zip(&widths)
                .map(|(x, w)| format!("{x:>w$}"))
                .collect::<Vec<_>>()
                .join("  ");
            s.push('\n');
            s
        };
        let mut out = line(self.header.clone());
        for row in &cells {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digit_cells() {
        assert_eq!(Cell::Real(0.1).csv(), "1.0000000000000001e-1");
        assert_eq!(Cell::Real(-1.0).csv(), "-1.0000000000000000e0");
        let x: f64 = Cell::Real(std::f64::consts::PI).csv().parse().unwrap();
        assert_eq!(x, std::f64::consts::PI);
    }

    #[test]
    fn csv_and_table() {
        let v = Value::Complexes(vec![c64(1.0, 0.0), c64(-1.0, 0.5)]);
        let csv = v.table().to_csv();
        assert_eq!(csv.lines().next(), Some("index,re,im"));
        assert_eq!(csv.lines().count(), 3);
        let table = v.table().render();
        assert!(table.starts_with("index"));
    }

    #[test]
    fn numeric_views() {
        let v = Value::Complex(c64(2.0, -1.0));
        assert_eq!(v.numbers(Some("im")).unwrap(), vec![c64(-1.0, 0.0)]);
        assert!(v.numbers(Some("time")).is_err());
        let p = Value::Peak(PeakScan { time: 1.5, probability: 0.9 });
        assert_eq!(p.numbers(None).unwrap(), vec![c64(1.5, 0.0)]);
    }
}
