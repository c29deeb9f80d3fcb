//! Numeric literals that may be written as arithmetic expressions.

use std::collections::BTreeMap;

use qstat_core::{c64, Complex64, Operator};
use serde::{Deserialize, Serialize};

/// A real number, either literal or an expression such as `"2*pi/3"`.
/// The source text is kept so scenarios serialize back unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Value(f64),
    Expr(String),
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Self::Value(x)
    }
}

impl From<&str> for Num {
    fn from(s: &str) -> Self {
        Self::Expr(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("undefined name {0:?}")]
    Undefined(String),
    #[error("invalid expression {expr:?}: {message}")]
    Invalid { expr: String, message: String },
}

/// Variables visible to expressions.
pub type Vars = BTreeMap<String, f64>;

pub fn eval_expr(expr: &str, vars: &Vars) -> Result<f64, ExprError> {
    let mut ns = |name: &str, args: Vec<f64>| if args.is_empty() { vars.get(name).copied() } else { None };
    fasteval::ez_eval(expr, &mut ns).map_err(|e| match e {
        fasteval::Error::Undefined(name) => ExprError::Undefined(name),
        other => ExprError::Invalid {
            expr: expr.to_owned(),
            message: format!("{other:?}"),
        },
    })
}

/// Free variable names of `expr`.
pub fn identifiers(expr: &str) -> Result<Vec<String>, ExprError> {
    let mut seen = Vec::new();
    let mut ns = |name: &str, args: Vec<f64>| {
        if args.is_empty() && !seen.iter().any(|s| s == name) {
            seen.push(name.to_owned());
        }
        Some(1.0)
    };
    match fasteval::ez_eval(expr, &mut ns) {
        Ok(_) | Err(fasteval::Error::Undefined(_)) => Ok(seen),
        Err(other) => Err(ExprError::Invalid {
            expr: expr.to_owned(),
            message: format!("{other:?}"),
        }),
    }
}

impl Num {
    pub fn eval(&self, vars: &Vars) -> Result<f64, ExprError> {
        let x = match self {
            Self::Value(x) => *x,
            Self::Expr(s) => eval_expr(s, vars)?,
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(ExprError::Invalid {
                expr: self.to_string(),
                message: "not finite".into(),
            })
        }
    }

    pub fn identifiers(&self) -> Result<Vec<String>, ExprError> {
        match self {
            Self::Value(_) => Ok(Vec::new()),
            Self::Expr(s) => identifiers(s),
        }
    }
}

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Value(x) => write!(f, "{x}"),
            Self::Expr(s) => f.write_str(s),
        }
    }
}

/// A complex number: a bare real or an `[re, im]` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CNum {
    Real(Num),
    Pair([Num; 2]),
}

impl CNum {
    pub fn eval(&self, vars: &Vars) -> Result<Complex64, ExprError> {
        match self {
            Self::Real(x) => Ok(c64(x.eval(vars)?, 0.0)),
            Self::Pair([re, im]) => Ok(c64(re.eval(vars)?, im.eval(vars)?)),
        }
    }

    pub fn nums(&self) -> Vec<&Num> {
        match self {
            Self::Real(x) => vec![x],
            Self::Pair([re, im]) => vec![re, im],
        }
    }
}

/// Square matrix of `[re, im]` pairs: either flat row-major or nested rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Matrix {
    Rows(Vec<Vec<[Num; 2]>>),
    Flat(Vec<[Num; 2]>),
}

impl Matrix {
    pub fn from_operator(op: &Operator) -> Self {
        Self::Flat(op.entries().iter().map(|z| [Num::Value(z.re), Num::Value(z.im)]).collect())
    }

    /// Side length implied by the entries, if square.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Rows(rows) => {
                let d = rows.len();
                rows.iter().all(|r| r.len() == d).then_some(d)
            }
            Self::Flat(entries) => {
                let d = (entries.len() as f64).sqrt().round() as usize;
                (d * d == entries.len()).then_some(d)
            }
        }
    }

    pub fn nums(&self) -> Vec<&Num> {
        let pairs: Vec<&[Num; 2]> = match self {
            Self::Rows(rows) => rows.iter().flatten().collect(),
            Self::Flat(entries) => entries.iter().collect(),
        };
        pairs.into_iter().flat_map(|p| p.iter()).collect()
    }

    pub fn to_operator(&self, vars: &Vars) -> Result<Operator, String> {
        let d = self.dim().filter(|&d| d > 0).ok_or("matrix is not square")?;
        let entries = self
            .nums()
            .chunks(2)
            .map(|p| Ok(c64(p[0].eval(vars)?, p[1].eval(vars)?)))
            .collect::<Result<Vec<_>, ExprError>>()
            .map_err(|e| e.to_string())?;
        Operator::new(d, entries).map_err(|e| e.to_string())
    }
}
