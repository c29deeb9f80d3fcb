//! Builds the named operators a system specification provides.

use std::collections::BTreeMap;

use qstat_core::systems::{oscillator, pauli, spin};
use qstat_core::Operator;

use crate::error::{Result, ScenarioError};
use crate::num::Vars;
use crate::random;
use crate::scenario::{base_vars, SystemSpec};

/// Operators of a built system plus the constants expressions may use.
#[derive(Debug, Clone, PartialEq)]
pub struct System {
    pub dim: usize,
    pub operators: BTreeMap<String, Operator>,
    pub constants: Vars,
    /// `2j` for spin systems.
    pub two_j: Option<u32>,
}

fn eval(num: &crate::num::Num, what: &str) -> Result<f64> {
    num.eval(&base_vars())
        .map_err(|e| ScenarioError::InvalidSpec(format!("{what}: {e}")))
}

/// `seed` is used by random systems that do not carry their own.
pub fn build_system(spec: &SystemSpec, hbar: f64, seed: u64) -> Result<System> {
    let mut constants = base_vars();
    constants.insert("hbar".into(), hbar);
    let mut two_j = None;
    let mut operators: BTreeMap<String, Operator> = match spec {
        SystemSpec::Pauli => {
            let p = pauli();
            BTreeMap::from([("sx".into(), p.sx), ("sy".into(), p.sy), ("sz".into(), p.sz)])
        }
        SystemSpec::Spin { j } => {
            let j = eval(j, "j")?;
            let twice = (2.0 * j).round();
            if !(twice >= 1.0 && (2.0 * j - twice).abs() < 1e-9) {
                return Err(ScenarioError::InvalidSpec(format!("j = {j} is not a positive half-integer")));
            }
            constants.insert("j".into(), j);
            two_j = Some(twice as u32);
            let s = spin(twice as u32, hbar)?;
            BTreeMap::from([("jx".into(), s.jx), ("jy".into(), s.jy), ("jz".into(), s.jz)])
        }
        SystemSpec::Oscillator { dim, omega } => {
            let omega = eval(omega, "omega")?;
            constants.insert("omega".into(), omega);
            let osc = oscillator(*dim, omega, hbar)?;
            BTreeMap::from([
                ("n".into(), osc.number),
                ("a_dag".into(), osc.annihilation.adjoint()),
                ("a".into(), osc.annihilation),
                ("H".into(), osc.hamiltonian),
            ])
        }
        SystemSpec::Random { dim, seed: own } => {
            if *dim == 0 {
                return Err(ScenarioError::InvalidSpec("dimension must be positive".into()));
            }
            let h = random::hermitian(&mut random::rng(own.unwrap_or(seed), 0), *dim);
            BTreeMap::from([("H".into(), h)])
        }
        SystemSpec::Explicit { operators, .. } => operators
            .iter()
            .map(|(name, m)| {
                m.to_operator(&base_vars())
                    .map(|op| (name.clone(), op))
                    .map_err(|e| ScenarioError::InvalidSpec(format!("{name}: {e}")))
            })
            .collect::<Result<_>>()?,
    };
    let dim = match spec {
        SystemSpec::Pauli => 2,
        SystemSpec::Spin { .. } => two_j.map_or(1, |t| t as usize + 1),
        SystemSpec::Oscillator { dim, .. } | SystemSpec::Random { dim, .. } | SystemSpec::Explicit { dim, .. } => *dim,
    };
    if let Some((name, op)) = operators.iter().find(|(_, op)| op.dim() != dim) {
        return Err(ScenarioError::InvalidSpec(format!(
            "{name} has dimension {}, expected {dim}",
            op.dim()
        )));
    }
    operators.insert("id".into(), Operator::identity(dim)?);
    constants.insert("dim".into(), dim as f64);
    Ok(System {
        dim,
        operators,
        constants,
        two_j,
    })
}
