//! Scenario execution.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::rc::Rc;
use std::time::{Duration, Instant};

use qstat_core::dynamics::{
    action_slope, bohr_period, classical_intersection_energy, dephase, peak_time_scan, propagation_time,
    thermal_state, transformation_action, transition_probability, unitary_evolution, ActionProfile, Hamiltonian,
    Temperature,
};
use qstat_core::measurement::{
    deterministic_value, error_contribution, expectation_from_deterministic, joint_quasiprobability,
    operator_sum_value, optimal_assignment, optimal_estimate, ozawa_error, povm_probability, validate_povm,
    EstimateAssignment, EstimateMode, Povm, PovmOutcome,
};
use qstat_core::statistics::{
    born_probability, coarse_grain, complex_conditional_probability, conditional_action, dirac_distribution,
    ehrenfest_check, imaginary_correlation, near_stationary_fraction, operator_from_weak_values,
    reconstruct_probability, reconstruct_state, weak_table, weak_value, DiracDistribution, EnergyBin, WeakTable,
};
use qstat_core::systems::{oscillator_coherent, spin_coherent_state};
use qstat_core::units::Units;
use qstat_core::{
    c64, commutator, eigendecompose, expectation, overlap, projector, validate_operator, Basis, Complex64,
    DensityOperator, Operator, OperatorKind, StateVector, Tolerances,
};
use rand_chacha::ChaCha8Rng;
use serde_json::Value as Json;
use sha2::{Digest, Sha256};

use crate::error::{Result, ScenarioError};
use crate::formats::{read_povm_json, FormatError};
use crate::num::{CNum, ExprError, Matrix, Num, Vars};
use crate::random;
use crate::scenario::{task_references, typed, validate, Expectation, OutcomeSpec, OutputFormat, Scenario, Task};
use crate::system::{build_system, System};
use crate::value::Value;

/// Overrides applied on top of a scenario.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub hbar: Option<f64>,
    /// Use SI constants regardless of the scenario's unit system.
    pub si: bool,
    /// Used when the scenario has no seed of its own.
    pub seed: Option<u64>,
    /// Where declared outputs are written; nothing is written when unset.
    pub out_dir: Option<PathBuf>,
    /// Base for relative input paths such as POVM files.
    pub base_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TaskStatus {
    /// Ran without a declared expectation.
    Ok,
    /// Ran and met its expectation.
    Passed,
    ExpectationFailed(String),
    Error(String),
    Skipped(String),
}

#[derive(Debug, Clone)]
pub struct TaskReport {
    pub index: usize,
    pub op: String,
    pub name: Option<String>,
    pub status: TaskStatus,
    pub wall_time: Duration,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub task: usize,
    pub path: String,
    pub format: OutputFormat,
    pub content: String,
    /// Hex SHA-256 of `content`.
    pub sha256: String,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: String,
    pub seed: u64,
    pub tasks: Vec<TaskReport>,
    /// Result of each task, `None` where it errored or was skipped.
    pub results: Vec<Option<Value>>,
    pub outputs: Vec<OutputRecord>,
    pub output_errors: Vec<String>,
}

impl RunReport {
    /// 0 on success, 1 if an expectation failed, 2 if an output could not be
    /// written, 3 if a task errored. Higher codes take precedence.
    pub fn exit_code(&self) -> i32 {
        if self
            .tasks
            .iter()
            .any(|t| matches!(t.status, TaskStatus::Error(_) | TaskStatus::Skipped(_)))
        {
            3
        } else if !self.output_errors.is_empty() {
            2
        } else if self.tasks.iter().any(|t| matches!(t.status, TaskStatus::ExpectationFailed(_))) {
            1
        } else {
            0
        }
    }

    /// Result of the task stored under `name`.
    pub fn named(&self, name: &str) -> Option<&Value> {
        let index = self.tasks.iter().position(|t| t.name.as_deref() == Some(name))?;
        self.results[index].as_ref()
    }

    pub fn passed(&self) -> bool {
        self.exit_code() == 0
    }

    pub fn render(&self) -> String {
        let mut out = format!("scenario {} (seed {})\n", self.scenario, self.seed);
        for t in &self.tasks {
            let (tag, detail) = match &t.status {
                TaskStatus::Ok => ("ok", String::new()),
                TaskStatus::Passed => ("pass", String::new()),
                TaskStatus::ExpectationFailed(m) => ("FAIL", format!(": {m}")),
                TaskStatus::Error(m) => ("ERROR", format!(": {m}")),
                TaskStatus::Skipped(m) => ("skip", format!(": {m}")),
            };
            let name = t.name.as_deref().map(|n| format!(" -> {n}")).unwrap_or_default();
            let summary = if t.summary.is_empty() { String::new() } else { format!(" = {}", t.summary) };
            let _ = writeln!(
                out,
                "[{tag:>5}] {:>3} {}{name}{summary}{detail} ({:.3} ms)",
                t.index,
                t.op,
                t.wall_time.as_secs_f64() * 1e3
            );
        }
        for o in &self.outputs {
            let _ = writeln!(out, "output task {} -> {} sha256 {}", o.task, o.path, o.sha256);
        }
        for e in &self.output_errors {
            let _ = writeln!(out, "output error: {e}");
        }
        let failed = self.tasks.iter().filter(|t| !matches!(t.status, TaskStatus::Ok | TaskStatus::Passed)).count();
        let _ = writeln!(
            out,
            "{} tasks, {} not passed, exit code {}",
            self.tasks.len(),
            failed,
            self.exit_code()
        );
        out
    }
}

#[derive(Debug, thiserror::Error)]
enum TaskError {
    #[error(transparent)]
    Numerical(#[from] qstat_core::Error),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Invalid(String),
}

impl From<ExprError> for TaskError {
    fn from(e: ExprError) -> Self {
        Self::Invalid(e.to_string())
    }
}

impl From<ScenarioError> for TaskError {
    fn from(e: ScenarioError) -> Self {
        Self::Invalid(e.to_string())
    }
}

type TaskResult<T> = std::result::Result<T, TaskError>;

struct Context {
    system: System,
    objects: BTreeMap<String, Value>,
    hamiltonians: BTreeMap<String, Rc<Hamiltonian>>,
    vars: Vars,
    rng: ChaCha8Rng,
    hbar: f64,
    units: Units,
    tol: Tolerances,
    base_dir: Option<PathBuf>,
}

/// Argument accessors for one task.
struct Args<'a> {
    ctx: &'a Context,
    task: &'a Task,
}

impl<'a> Args<'a> {
    fn raw(&self, name: &str) -> TaskResult<&'a Json> {
        self.task
            .args
            .get(name)
            .ok_or_else(|| TaskError::Invalid(format!("missing argument {name:?}")))
    }

    fn has(&self, name: &str) -> bool {
        self.task.args.contains_key(name)
    }

    fn typed<T: serde::de::DeserializeOwned>(&self, name: &str) -> TaskResult<T> {
        Ok(typed(&format!("args/{name}"), self.raw(name)?)?)
    }

    fn object_named(&self, name: &str) -> TaskResult<&'a Value> {
        self.ctx
            .objects
            .get(name)
            .ok_or_else(|| TaskError::Invalid(format!("undefined object {name:?}")))
    }

    fn object(&self, arg: &str) -> TaskResult<&'a Value> {
        let name = self
            .raw(arg)?
            .as_str()
            .ok_or_else(|| TaskError::Invalid(format!("argument {arg:?} must name an object")))?;
        self.object_named(name)
    }

    fn mismatch<T>(&self, arg: &str, wanted: &str) -> TaskResult<T> {
        Err(TaskError::Invalid(format!("argument {arg:?} must be a {wanted}")))
    }

    fn operator(&self, arg: &str) -> TaskResult<&'a Operator> {
        match self.object(arg)? {
            Value::Operator(op) => Ok(op),
            _ => self.mismatch(arg, "operator"),
        }
    }

    fn state(&self, arg: &str) -> TaskResult<&'a StateVector> {
        match self.object(arg)? {
            Value::State(s) => Ok(s),
            _ => self.mismatch(arg, "state"),
        }
    }

    fn density(&self, arg: &str) -> TaskResult<Cow<'a, DensityOperator>> {
        match self.object(arg)? {
            Value::Density(rho) => Ok(Cow::Borrowed(rho)),
            Value::State(s) => Ok(Cow::Owned(DensityOperator::pure(s))),
            _ => self.mismatch(arg, "density operator"),
        }
    }

    fn basis(&self, arg: &str) -> TaskResult<&'a Basis> {
        match self.object(arg)? {
            Value::Basis(b) => Ok(b),
            _ => self.mismatch(arg, "basis"),
        }
    }

    fn povm(&self, arg: &str) -> TaskResult<&'a Povm> {
        match self.object(arg)? {
            Value::Povm(p) => Ok(p),
            _ => self.mismatch(arg, "POVM"),
        }
    }

    fn reals(&self, arg: &str) -> TaskResult<&'a [f64]> {
        match self.object(arg)? {
            Value::Reals(xs) => Ok(xs),
            _ => self.mismatch(arg, "real list"),
        }
    }

    fn profile(&self, arg: &str) -> TaskResult<&'a ActionProfile> {
        match self.object(arg)? {
            Value::Profile(p) => Ok(p),
            _ => self.mismatch(arg, "action profile"),
        }
    }

    fn dirac(&self, arg: &str) -> TaskResult<&'a DiracDistribution> {
        match self.object(arg)? {
            Value::Dirac(d) => Ok(d),
            _ => self.mismatch(arg, "Dirac distribution"),
        }
    }

    fn weak(&self, arg: &str) -> TaskResult<&'a WeakTable> {
        match self.object(arg)? {
            Value::WeakTable(w) => Ok(w),
            _ => self.mismatch(arg, "weak-value table"),
        }
    }

    fn bins(&self, arg: &str) -> TaskResult<&'a [EnergyBin]> {
        match self.object(arg)? {
            Value::Bins(b) => Ok(b),
            _ => self.mismatch(arg, "energy-bin list"),
        }
    }

    fn estimates(&self, arg: &str) -> TaskResult<&'a EstimateAssignment> {
        match self.object(arg)? {
            Value::Estimates(e) => Ok(e),
            _ => self.mismatch(arg, "estimate assignment"),
        }
    }

    fn num(&self, arg: &str) -> TaskResult<f64> {
        Ok(self.typed::<Num>(arg)?.eval(&self.ctx.vars)?)
    }

    fn cnum(&self, arg: &str) -> TaskResult<Complex64> {
        Ok(self.typed::<CNum>(arg)?.eval(&self.ctx.vars)?)
    }

    fn index(&self, arg: &str) -> TaskResult<usize> {
        Ok(self.typed::<u64>(arg)? as usize)
    }

    fn flag(&self, arg: &str, default: bool) -> TaskResult<bool> {
        if self.has(arg) {
            self.typed(arg)
        } else {
            Ok(default)
        }
    }

    fn text(&self, arg: &str) -> TaskResult<String> {
        self.typed(arg)
    }

    fn mode(&self) -> TaskResult<EstimateMode> {
        Ok(match self.text("mode")?.as_str() {
            "complex" => EstimateMode::Complex,
            _ => EstimateMode::RealRestricted,
        })
    }

    fn matrix(&self, arg: &str) -> TaskResult<Operator> {
        self.typed::<Matrix>(arg)?
            .to_operator(&self.ctx.vars)
            .map_err(TaskError::Invalid)
    }

    fn labels(&self, dim: usize) -> TaskResult<Vec<String>> {
        if self.has("labels") {
            let labels: Vec<String> = self.typed("labels")?;
            if labels.len() != dim {
                return Err(TaskError::Invalid(format!("expected {dim} labels, found {}", labels.len())));
            }
            Ok(labels)
        } else {
            Ok((0..dim).map(|k| k.to_string()).collect())
        }
    }
}

impl Context {
    fn hamiltonian(&mut self, task: &Task, arg: &str) -> TaskResult<Rc<Hamiltonian>> {
        let name = task
            .args
            .get(arg)
            .and_then(Json::as_str)
            .ok_or_else(|| TaskError::Invalid(format!("argument {arg:?} must name an operator")))?;
        if let Some(h) = self.hamiltonians.get(name) {
            return Ok(Rc::clone(h));
        }
        let op = match self.objects.get(name) {
            Some(Value::Operator(op)) => op.clone(),
            _ => return Err(TaskError::Invalid(format!("argument {arg:?} must be an operator"))),
        };
        let h = Rc::new(Hamiltonian::new(op, self.hbar, &self.tol)?);
        self.hamiltonians.insert(name.to_owned(), Rc::clone(&h));
        Ok(h)
    }

    fn task_rng(&self, task: &Task) -> TaskResult<Option<ChaCha8Rng>> {
        match task.args.get("seed") {
            Some(v) => Ok(Some(random::rng(typed::<u64>("args/seed", v)?, 1))),
            None => Ok(None),
        }
    }

    fn execute(&mut self, task: &Task) -> TaskResult<Value> {
        let dim = self.system.dim;
        let tol = self.tol;
        // operations that draw random numbers or need a Hamiltonian borrow
        // the context mutably, so they resolve those first
        match task.op.as_str() {
            "random_hermitian" | "random_state" | "random_density" | "random_basis" => {
                let mut own = self.task_rng(task)?;
                let rng = own.as_mut().unwrap_or(&mut self.rng);
                return Ok(match task.op.as_str() {
                    "random_hermitian" => Value::Operator(random::hermitian(rng, dim)),
                    "random_state" => Value::State(random::state(rng, dim)),
                    "random_density" => Value::Density(random::density(rng, dim)),
                    _ => Value::Basis(random::basis(rng, dim)),
                });
            }
            _ => {}
        }
        let h = if task.args.contains_key("h") {
            Some(self.hamiltonian(task, "h")?)
        } else {
            None
        };
        let h = || h.as_deref().ok_or_else(|| TaskError::Invalid("missing argument \"h\"".into()));
        let args = Args { ctx: self, task };

        let value = match task.op.as_str() {
            "operator" => Value::Operator(args.matrix("matrix")?),
            "state" => {
                let amps = args
                    .typed::<Vec<CNum>>("amplitudes")?
                    .iter()
                    .map(|z| z.eval(&self.vars))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                if args.flag("normalize", false)? {
                    Value::State(StateVector::normalized(amps)?)
                } else {
                    Value::State(StateVector::new(amps, &tol)?)
                }
            }
            "basis_state" => Value::State(StateVector::basis(dim, args.index("index")?)?),
            "spin_coherent" => {
                let two_j = self
                    .system
                    .two_j
                    .ok_or_else(|| TaskError::Invalid("spin_coherent needs a spin system".into()))?;
                let phi = if args.has("phi") { args.num("phi")? } else { 0.0 };
                Value::State(spin_coherent_state(two_j, args.num("theta")?, phi)?)
            }
            "oscillator_coherent" => Value::State(oscillator_coherent(dim, args.cnum("alpha")?)?),
            "combine" => {
                let terms: Vec<(CNum, String)> = args.typed("terms")?;
                let mut op_sum: Option<Operator> = None;
                let mut amps: Option<Vec<Complex64>> = None;
                for (coef, name) in &terms {
                    let c = coef.eval(&self.vars)?;
                    match args.object_named(name)? {
                        Value::Operator(op) if amps.is_none() => {
                            let term = op.scale(c);
                            op_sum = Some(match op_sum {
                                Some(acc) => acc.try_add(&term)?,
                                None => term,
                            });
                        }
                        Value::State(s) if op_sum.is_none() => {
                            let acc = amps.get_or_insert_with(|| vec![c64(0.0, 0.0); s.dim()]);
                            for (x, &y) in acc.iter_mut().zip(s.amplitudes()) {
                                *x += c * y;
                            }
                        }
                        _ => return Err(TaskError::Invalid("terms must all be operators or all be states".into())),
                    }
                }
                match (op_sum, amps) {
                    (Some(op), _) => Value::Operator(op),
                    (None, Some(a)) => Value::State(StateVector::normalized(a)?),
                    _ => return Err(TaskError::Invalid("expected at least one term".into())),
                }
            }
            "product" => {
                let names: Vec<String> = args.typed("factors")?;
                let mut acc: Option<Operator> = None;
                for name in &names {
                    let op = match args.object_named(name)? {
                        Value::Operator(op) => op,
                        _ => return Err(TaskError::Invalid(format!("{name:?} is not an operator"))),
                    };
                    acc = Some(match acc {
                        Some(a) => a.try_mul(op)?,
                        None => op.clone(),
                    });
                }
                Value::Operator(acc.ok_or_else(|| TaskError::Invalid("no factors".into()))?)
            }
            "adjoint" => Value::Operator(args.operator("op")?.adjoint()),
            "evolve" => Value::State(args.state("state")?.evolve(args.operator("unitary")?)?),
            "density" => Value::Density(DensityOperator::new(args.matrix("matrix")?, &tol)?),
            "pure" => Value::Density(DensityOperator::pure(args.state("state")?)),
            "basis" => {
                let names: Vec<String> = args.typed("vectors")?;
                let vectors = names
                    .iter()
                    .map(|n| match args.object_named(n)? {
                        Value::State(s) => Ok(s.clone()),
                        _ => Err(TaskError::Invalid(format!("{n:?} is not a state"))),
                    })
                    .collect::<TaskResult<Vec<_>>>()?;
                Value::Basis(Basis::new(vectors, &tol)?)
            }
            "computational_basis" => Value::Basis(Basis::computational(dim)?),
            "fourier_basis" => Value::Basis(Basis::fourier(dim)?),
            "eigenbasis" => Value::Basis(Basis::from_spectrum(&eigendecompose(args.operator("op")?, &tol)?)),
            "transform_basis" => Value::Basis(args.basis("basis")?.transformed(args.operator("unitary")?, &tol)?),
            "povm" => {
                let specs: Vec<OutcomeSpec> = args.typed("outcomes")?;
                let outcomes = specs
                    .iter()
                    .map(|o| {
                        let element = o.matrix.to_operator(&self.vars).map_err(TaskError::Invalid)?;
                        Ok(PovmOutcome::new(o.label.clone(), element))
                    })
                    .collect::<TaskResult<Vec<_>>>()?;
                Value::Povm(Povm::new(outcomes, &tol)?)
            }
            "projective_povm" => {
                let basis = args.basis("basis")?;
                let labels = args.labels(basis.dim())?;
                Value::Povm(Povm::projective(basis, Some(&labels), &tol)?)
            }
            "load_povm" => {
                let path = PathBuf::from(args.text("path")?);
                let path = match &self.base_dir {
                    Some(base) if path.is_relative() => base.join(path),
                    _ => path,
                };
                let file = std::fs::File::open(&path)
                    .map_err(|e| TaskError::Invalid(format!("{}: {e}", path.display())))?;
                let povm = read_povm_json(std::io::BufReader::new(file), &tol)?;
                if povm.dim() != dim {
                    return Err(TaskError::Invalid(format!("POVM has dimension {}, system has {dim}", povm.dim())));
                }
                Value::Povm(povm)
            }
            "grid" => Value::Reals(qstat_core::dynamics::uniform_grid(
                args.num("start")?,
                args.num("stop")?,
                args.num("step")?,
            )?),
            "estimates" => {
                let values: BTreeMap<String, CNum> = args.typed("values")?;
                let all_real = values.values().all(|v| matches!(v, CNum::Real(_)));
                let mut evaluated = Vec::with_capacity(values.len());
                for (label, v) in &values {
                    evaluated.push((label.clone(), v.eval(&self.vars)?));
                }
                Value::Estimates(if all_real {
                    EstimateAssignment::real(evaluated.into_iter().map(|(l, z)| (l, z.re)))
                } else {
                    EstimateAssignment::complex(evaluated)
                })
            }
            "optimal_estimates" => {
                let basis = args.basis("basis")?;
                let labels = args.labels(basis.dim())?;
                Value::Estimates(optimal_assignment(
                    args.operator("a")?,
                    basis,
                    &labels,
                    args.state("psi")?,
                    args.mode()?,
                    &tol,
                )?)
            }
            "select" => {
                let field = args.text("field")?;
                let numbers = args.object("from")?.numbers(Some(&field)).map_err(TaskError::Invalid)?;
                match numbers.as_slice() {
                    [z] if z.im.abs() <= 1e-12 * z.re.abs().max(1.0) => Value::Scalar(z.re),
                    [_] => return Err(TaskError::Invalid(format!("field {field:?} is complex; select \"re\" or \"im\""))),
                    _ => return Err(TaskError::Invalid(format!("field {field:?} holds {} numbers", numbers.len()))),
                }
            }
            "validate_operator" => {
                let kind = match args.text("kind")?.as_str() {
                    "hermitian" => OperatorKind::Hermitian,
                    "unitary" => OperatorKind::Unitary,
                    "density" => OperatorKind::Density,
                    _ => OperatorKind::PovmElement,
                };
                Value::Validity(validate_operator(args.operator("op")?, kind, &tol))
            }
            "eigendecompose" => Value::Spectrum(eigendecompose(args.operator("op")?, &tol)?),
            "commutator" => Value::Operator(commutator(args.operator("a")?, args.operator("b")?)?),
            "expectation" => Value::Complex(expectation(args.operator("op")?, args.density("rho")?.as_ref())?),
            "projector" => Value::Operator(projector(args.state("state")?, &tol)?),
            "overlap" => Value::Complex(overlap(args.state("a")?, args.state("b")?)?),
            "thermal_state" => {
                let temperature = if args.flag("zero_limit", false)? {
                    Temperature::ZeroLimit
                } else if args.has("temperature") {
                    Temperature::Finite(args.num("temperature")?)
                } else {
                    return Err(TaskError::Invalid("give a temperature or set zero_limit".into()));
                };
                Value::Density(thermal_state(h()?, temperature, self.units.k_b)?)
            }
            "unitary_evolution" => Value::Operator(unitary_evolution(h()?, args.num("t")?)?),
            "dephase" => Value::Density(dephase(args.density("rho")?.as_ref(), args.operator("observable")?, &tol)?),
            "bohr_period" => Value::Scalar(bohr_period(h()?, args.index("n")?, args.index("m")?)?),
            "transition_probability" => Value::Scalar(transition_probability(
                args.state("a")?,
                args.state("b")?,
                h()?,
                args.num("t")?,
            )?),
            "transition_curve" => {
                let (a, b, h) = (args.state("a")?, args.state("b")?, h()?);
                let curve = args
                    .reals("grid")?
                    .iter()
                    .map(|&t| Ok((t, transition_probability(a, b, h, t)?)))
                    .collect::<TaskResult<Vec<_>>>()?;
                Value::Curve(curve)
            }
            "transformation_action" => Value::Profile(transformation_action(
                args.state("a")?,
                args.state("b")?,
                h()?,
                args.flag("unwrap", true)?,
                &tol,
            )?),
            "propagation_time" => Value::Scalar(propagation_time(args.profile("profile")?, args.index("n")?)?),
            "action_slope" => Value::Scalar(action_slope(
                args.profile("profile")?,
                args.index("i")?,
                args.index("j")?,
            )?),
            "classical_intersection_energy" => Value::Scalar(classical_intersection_energy(args.profile("profile")?)?),
            "peak_time_scan" => Value::Peak(peak_time_scan(
                args.state("a")?,
                args.state("b")?,
                h()?,
                args.reals("grid")?,
                &tol,
            )?),
            "born_probability" => Value::Scalar(born_probability(args.state("a")?, args.state("b")?)?),
            "dirac_distribution" => Value::Dirac(dirac_distribution(
                args.density("rho")?.as_ref(),
                args.basis("basis_a")?,
                args.basis("basis_b")?,
            )?),
            "reconstruct_state" => Value::Density(reconstruct_state(args.dirac("dist")?, &tol)?),
            "weak_value" => Value::WeakValue(weak_value(args.operator("m")?, args.state("pre")?, args.state("post")?, &tol)?),
            "weak_table" => Value::WeakTable(weak_table(
                args.operator("m")?,
                args.basis("basis_a")?,
                args.basis("basis_b")?,
                &tol,
            )?),
            "operator_from_weak_values" => Value::Operator(operator_from_weak_values(args.weak("table")?, &tol)?),
            "complex_conditional_probability" => Value::Complex(complex_conditional_probability(
                args.state("mid")?,
                args.state("a")?,
                args.state("b")?,
                &tol,
            )?),
            "conditional_probabilities" => {
                let (a, b) = (args.state("a")?, args.state("b")?);
                let values = args
                    .basis("mid_basis")?
                    .vectors()
                    .iter()
                    .map(|m| Ok(complex_conditional_probability(m, a, b, &tol)?))
                    .collect::<TaskResult<Vec<_>>>()?;
                Value::Complexes(values)
            }
            "reconstruct_probability" => Value::Recovered(reconstruct_probability(
                args.basis("mid_basis")?,
                args.dirac("dist")?,
                &tol,
            )?),
            "conditional_action" => Value::Scalar(conditional_action(
                h()?,
                args.state("a")?,
                args.state("b")?,
                args.index("n")?,
                &tol,
            )?),
            "coarse_grain" => Value::Bins(coarse_grain(h()?, args.state("a")?, args.state("b")?, args.num("window")?, &tol)?),
            "near_stationary_fraction" => Value::Scalar(near_stationary_fraction(args.bins("bins")?, args.num("energy")?)),
            "concentration_profile" => {
                let (a, b, h) = (args.state("a")?, args.state("b")?, h()?);
                let energy = args.num("energy")?;
                let windows: Vec<Num> = args.typed("windows")?;
                let mut fractions = Vec::with_capacity(windows.len());
                for w in &windows {
                    let bins = coarse_grain(h, a, b, w.eval(&self.vars)?, &tol)?;
                    fractions.push(near_stationary_fraction(&bins, energy));
                }
                Value::Reals(fractions)
            }
            "imaginary_correlation" => Value::Scalar(imaginary_correlation(
                args.operator("a")?,
                args.operator("b")?,
                args.density("rho")?.as_ref(),
                &tol,
            )?),
            "ehrenfest_check" => Value::Ehrenfest(ehrenfest_check(
                args.operator("a")?,
                h()?,
                args.density("rho")?.as_ref(),
                args.num("dt")?,
                &tol,
            )?),
            "ehrenfest_convergence" => {
                let (a, h, rho, dt) = (args.operator("a")?, h()?, args.density("rho")?, args.num("dt")?);
                let coarse = ehrenfest_check(a, h, &rho, dt, &tol)?;
                let fine = ehrenfest_check(a, h, &rho, dt / 2.0, &tol)?;
                Value::Scalar(coarse.deviation / fine.deviation)
            }
            "validate_povm" => Value::PovmReport(validate_povm(args.povm("povm")?.outcomes(), &tol)?),
            "povm_probability" => Value::Scalar(povm_probability(args.operator("element")?, args.state("psi")?, &tol)?),
            "povm_probabilities" => {
                let psi = args.state("psi")?;
                let probabilities = args
                    .povm("povm")?
                    .outcomes()
                    .iter()
                    .map(|o| Ok(povm_probability(&o.element, psi, &tol)?))
                    .collect::<TaskResult<Vec<_>>>()?;
                Value::Reals(probabilities)
            }
            "ozawa_error" => Value::Scalar(ozawa_error(
                args.operator("a")?,
                args.povm("povm")?,
                args.estimates("estimates")?,
                args.state("psi")?,
            )?),
            "error_contribution" => Value::Complex(error_contribution(
                args.operator("a")?,
                args.state("m")?,
                args.cnum("estimate")?,
                args.state("psi")?,
            )?),
            "joint_quasiprobability" => Value::Scalar(joint_quasiprobability(
                args.operator("element")?,
                args.state("a")?,
                args.state("psi")?,
            )?),
            "optimal_estimate" => Value::Complex(optimal_estimate(
                args.operator("a")?,
                args.state("m")?,
                args.state("psi")?,
                args.mode()?,
                &tol,
            )?),
            "deterministic_value" => Value::Complex(deterministic_value(
                args.operator("a")?,
                args.state("psi")?,
                args.state("m")?,
                &tol,
            )?),
            "operator_sum_value" => Value::Complex(operator_sum_value(
                args.operator("m_op")?,
                args.operator("b_op")?,
                args.state("m")?,
                args.state("psi")?,
                &tol,
            )?),
            "expectation_from_deterministic" => Value::Complex(expectation_from_deterministic(
                args.operator("a")?,
                args.density("rho")?.as_ref(),
                args.basis("basis_psi")?,
                args.basis("basis_m")?,
                &tol,
            )?),
            "position_energy_bound" => Value::Scalar(
                Units {
                    hbar: self.hbar,
                    ..self.units
                }
                .position_energy_bound(),
            ),
            other => return Err(TaskError::Invalid(format!("unknown operation {other:?}"))),
        };
        Ok(value)
    }
}

fn summary(value: &Value) -> String {
    match value {
        Value::Scalar(x) => format!("{x:.12e}"),
        Value::Complex(z) => format!("{:.12e} {:+.12e}i", z.re, z.im),
        Value::Peak(p) => format!("t {:.12e}, p {:.12e}", p.time, p.probability),
        Value::Validity(r) => format!("passed {}, deviation {:.3e}", r.passed, r.deviation),
        Value::PovmReport(r) => format!("passed {}, completeness {:.3e}", r.passed, r.completeness_deviation),
        Value::Ehrenfest(e) => format!("lhs {:.12e}, rhs {:.12e}, deviation {:.3e}", e.lhs, e.rhs, e.deviation),
        Value::Reals(xs) if xs.len() <= 8 => {
            format!("[{}]", xs.iter().map(|x| format!("{x:.6e}")).collect::<Vec<_>>().join(", "))
        }
        Value::Complexes(zs) if zs.len() <= 8 => format!(
            "[{}]",
            zs.iter()
                .map(|z| format!("{:.6e}{:+.6e}i", z.re, z.im))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        other => other.kind().name().to_owned(),
    }
}

/// Checks `value` against `expect`; the error names the offending element.
pub fn check_expectation(expect: &Expectation, value: &Value, vars: &Vars) -> std::result::Result<(), String> {
    if let Some(wanted) = expect.passed {
        match value.passed() {
            Some(got) if got == wanted => {}
            Some(got) => return Err(format!("passed is {got}, expected {wanted}")),
            None => return Err(format!("a {} has no pass flag", value.kind().name())),
        }
    }
    let needs_numbers =
        expect.value.is_some() || expect.im.is_some() || expect.min.is_some() || expect.max.is_some() || expect.increasing.is_some();
    if !needs_numbers {
        return Ok(());
    }
    let numbers = value.numbers(expect.field.as_deref())?;
    let eval = |items: Vec<&Num>| -> std::result::Result<Vec<f64>, String> {
        items.into_iter().map(|n| n.eval(vars).map_err(|e| e.to_string())).collect()
    };
    let broadcast = |xs: Vec<f64>| -> std::result::Result<Vec<f64>, String> {
        match xs.len() {
            1 => Ok(vec![xs[0]; numbers.len()]),
            n if n == numbers.len() => Ok(xs),
            n => Err(format!("expected {n} values, result has {}", numbers.len())),
        }
    };
    let optional = |n: &Option<Num>| -> std::result::Result<Option<f64>, String> {
        n.as_ref().map(|n| eval(vec![n]).map(|v| v[0])).transpose()
    };
    let rel_tol = optional(&expect.rel_tol)?;
    let abs_tol = optional(&expect.tol)?.unwrap_or(if rel_tol.is_some() { 0.0 } else { 1e-9 });
    let rel_tol = rel_tol.unwrap_or(0.0);
    let within = |got: f64, want: f64| (got - want).abs() <= abs_tol + rel_tol * want.abs();
    if let Some(v) = &expect.value {
        let re = broadcast(eval(v.items())?)?;
        let im = match &expect.im {
            Some(im) => broadcast(eval(im.items())?)?,
            None => vec![0.0; numbers.len()],
        };
        for (k, z) in numbers.iter().enumerate() {
            if !within(z.re, re[k]) || !within(z.im, im[k]) {
                let shown = if z.im == 0.0 && im[k] == 0.0 {
                    format!("got {:e}, expected {:e}", z.re, re[k])
                } else {
                    format!("got {:e}{:+e}i, expected {:e}{:+e}i", z.re, z.im, re[k], im[k])
                };
                return Err(format!("element {k}: {shown} (tol {abs_tol:e}, rel_tol {rel_tol:e})"));
            }
        }
    }
    if let Some(min) = &expect.min {
        let min = eval(vec![min])?[0];
        if let Some((k, z)) = numbers.iter().enumerate().find(|(_, z)| z.re < min) {
            return Err(format!("element {k}: {:e} is below {min:e}", z.re));
        }
    }
    if let Some(max) = &expect.max {
        let max = eval(vec![max])?[0];
        if let Some((k, z)) = numbers.iter().enumerate().find(|(_, z)| z.re > max) {
            return Err(format!("element {k}: {:e} exceeds {max:e}", z.re));
        }
    }
    if let Some(increasing) = expect.increasing {
        let is_increasing = numbers.windows(2).all(|w| w[1].re > w[0].re);
        if is_increasing != increasing {
            return Err(format!(
                "values {} strictly increasing",
                if increasing { "are not" } else { "are" }
            ));
        }
    }
    Ok(())
}

fn digest(content: &str) -> String {
    Sha256::digest(content.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Resolved seed: the scenario's own, else the option, else zero.
pub fn resolve_seed(scenario: &Scenario, opts: &RunOptions) -> u64 {
    scenario.seed.or(opts.seed).unwrap_or(0)
}

/// Executes every task in order, checks expectations and renders outputs.
///
/// Errors are returned only when the scenario itself is unusable; failures of
/// individual tasks are recorded in the report and their dependents skipped.
pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<RunReport> {
    validate(scenario)?;
    let units = if opts.si { Units::SI } else { scenario.units.constants() };
    let hbar = match (opts.hbar, &scenario.hbar) {
        (Some(h), _) => h,
        (None, Some(h)) => h
            .eval(&crate::scenario::base_vars())
            .map_err(|e| ScenarioError::schema("/hbar", e.to_string()))?,
        (None, None) => units.hbar,
    };
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(ScenarioError::schema("/hbar", "must be positive"));
    }
    let seed = resolve_seed(scenario, opts);
    let system = build_system(&scenario.system, hbar, seed)?;
    let mut vars = system.constants.clone();
    vars.insert("k_b".into(), units.k_b);
    vars.insert("c".into(), units.c);
    let objects = system
        .operators
        .iter()
        .map(|(k, v)| (k.clone(), Value::Operator(v.clone())))
        .collect();
    let mut ctx = Context {
        system,
        objects,
        hamiltonians: BTreeMap::new(),
        vars,
        rng: random::rng(seed, 1),
        hbar,
        units,
        tol: Tolerances::DEFAULT,
        base_dir: opts.base_dir.clone(),
    };

    let mut failed: BTreeSet<String> = BTreeSet::new();
    let mut results: Vec<Option<Value>> = Vec::with_capacity(scenario.tasks.len());
    let mut tasks = Vec::with_capacity(scenario.tasks.len());
    for (index, task) in scenario.tasks.iter().enumerate() {
        let start = Instant::now();
        let blocked = task_references(task).into_iter().find(|n| failed.contains(n));
        let (status, value) = match blocked {
            Some(name) => (TaskStatus::Skipped(format!("depends on failed {name:?}")), None),
            None => match ctx.execute(task) {
                Ok(value) => {
                    let status = match &task.expect {
                        None => TaskStatus::Ok,
                        Some(e) => match check_expectation(e, &value, &ctx.vars) {
                            Ok(()) => TaskStatus::Passed,
                            Err(m) => TaskStatus::ExpectationFailed(format!("task {index} ({}): {m}", task.op)),
                        },
                    };
                    (status, Some(value))
                }
                Err(e) => (TaskStatus::Error(format!("task {index} ({}): {e}", task.op)), None),
            },
        };
        if let Some(name) = &task.name {
            match &value {
                Some(v) => {
                    if let Value::Scalar(x) = v {
                        ctx.vars.insert(name.clone(), *x);
                    }
                    ctx.objects.insert(name.clone(), v.clone());
                }
                None => {
                    failed.insert(name.clone());
                }
            }
        }
        tasks.push(TaskReport {
            index,
            op: task.op.clone(),
            name: task.name.clone(),
            summary: value.as_ref().map(summary).unwrap_or_default(),
            status,
            wall_time: start.elapsed(),
        });
        results.push(value);
    }

    let mut outputs = Vec::new();
    let mut output_errors = Vec::new();
    for spec in &scenario.outputs {
        // a missing result is already reported as a task failure
        let Some(value) = &results[spec.task] else {
            continue;
        };
        let table = value.table();
        let content = match spec.format {
            OutputFormat::Csv => table.to_csv(),
            OutputFormat::Table => table.render(),
        };
        if let (Some(dir), false) = (&opts.out_dir, spec.path == "-") {
            if let Err(e) = write_output(dir, &spec.path, &content) {
                output_errors.push(e.to_string());
                continue;
            }
        }
        outputs.push(OutputRecord {
            task: spec.task,
            path: spec.path.clone(),
            format: spec.format,
            sha256: digest(&content),
            content,
        });
    }
    Ok(RunReport {
        scenario: scenario.name.clone(),
        seed,
        tasks,
        results,
        outputs,
        output_errors,
    })
}

fn write_output(dir: &Path, relative: &str, content: &str) -> Result<()> {
    let path = dir.join(relative);
    let io = |source| ScenarioError::Io {
        path: path.clone(),
        source,
    };
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(&path, content).map_err(io)
}
