//! Scenario documents: types, parsing and static validation.

use std::collections::{BTreeMap, BTreeSet};

use qstat_core::units::Units;
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::error::{Result, ScenarioError};
use crate::num::{CNum, ExprError, Matrix, Num, Vars};
use crate::ops::{signature, Kind, Param};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    /// Defaults to the value of the chosen unit system.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<Num>,
    #[serde(default)]
    pub units: UnitSystem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub system: SystemSpec,
    #[serde(default)]
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub outputs: Vec<OutputSpec>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    #[default]
    Natural,
    Si,
}

impl UnitSystem {
    pub fn constants(self) -> Units {
        match self {
            Self::Natural => Units::NATURAL,
            Self::Si => Units::SI,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SystemSpec {
    Pauli,
    Spin {
        j: Num,
    },
    Oscillator {
        dim: usize,
        #[serde(default = "unit_frequency")]
        omega: Num,
    },
    Random {
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Explicit {
        dim: usize,
        operators: BTreeMap<String, Matrix>,
    },
}

fn unit_frequency() -> Num {
    Num::Value(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Task {
    pub op: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub args: BTreeMap<String, Json>,
    #[serde(rename = "as", default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectation>,
}

/// Checks applied to a task result.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    /// Which part of a structured result to check; each kind has a default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<OneOrMany>,
    /// Expected imaginary parts; zero when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<OneOrMany>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub increasing: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(Num),
    Many(Vec<Num>),
}

impl OneOrMany {
    pub fn items(&self) -> Vec<&Num> {
        match self {
            Self::One(x) => vec![x],
            Self::Many(xs) => xs.iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub task: usize,
    /// Relative to the output directory; `-` writes to standard output.
    pub path: String,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct OutcomeSpec {
    pub label: String,
    pub matrix: Matrix,
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|err| {
        let pointer = pointer_of(err.path());
        let inner = err.into_inner();
        match inner.classify() {
            serde_json::error::Category::Data => ScenarioError::schema(pointer, strip_position(&inner)),
            _ => ScenarioError::Syntax {
                line: inner.line(),
                column: inner.column(),
                message: strip_position(&inner),
            },
        }
    })?;
    validate(&scenario)?;
    Ok(scenario)
}

pub fn to_json(scenario: &Scenario) -> String {
    serde_json::to_string_pretty(scenario).expect("scenario serializes")
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { .. } | Segment::Unknown => {}
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn strip_position(err: &serde_json::Error) -> String {
    let msg = err.to_string();
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_owned(),
        None => msg,
    }
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Scenario {
    /// Hilbert-space dimension of the system.
    pub fn dim(&self) -> usize {
        match &self.system {
            SystemSpec::Pauli => 2,
            SystemSpec::Spin { j } => {
                let j = j.eval(&base_vars()).unwrap_or(0.0);
                (2.0 * j).round() as usize + 1
            }
            SystemSpec::Oscillator { dim, .. } | SystemSpec::Random { dim, .. } | SystemSpec::Explicit { dim, .. } => {
                *dim
            }
        }
    }
}

/// Mathematical constants available in every expression.
pub(crate) fn base_vars() -> Vars {
    Vars::from([
        ("pi".to_owned(), std::f64::consts::PI),
        ("e".to_owned(), std::f64::consts::E),
    ])
}

/// Names of the objects provided by a system specification.
pub(crate) fn system_objects(system: &SystemSpec) -> Vec<String> {
    let names: Vec<&str> = match system {
        SystemSpec::Pauli => vec!["sx", "sy", "sz"],
        SystemSpec::Spin { .. } => vec!["jx", "jy", "jz"],
        SystemSpec::Oscillator { .. } => vec!["n", "a", "a_dag", "H"],
        SystemSpec::Random { .. } => vec!["H"],
        SystemSpec::Explicit { operators, .. } => operators.keys().map(String::as_str).collect(),
    };
    names.into_iter().chain(["id"]).map(str::to_owned).collect()
}

/// Constant names (besides `pi` and `e`) that expressions may use.
pub(crate) fn system_constants(system: &SystemSpec) -> Vec<&'static str> {
    let mut names = vec!["hbar", "k_b", "c", "dim"];
    match system {
        SystemSpec::Spin { .. } => names.push("j"),
        SystemSpec::Oscillator { .. } => names.push("omega"),
        _ => {}
    }
    names
}

struct Checker {
    kinds: BTreeMap<String, Kind>,
    scalars: BTreeSet<String>,
    dim: usize,
}

impl Checker {
    fn num(&self, pointer: &str, num: &Num) -> Result<()> {
        let names = num.identifiers().map_err(|e| ScenarioError::schema(pointer, e.to_string()))?;
        for name in names {
            if !self.scalars.contains(&name) {
                return Err(ScenarioError::UnknownReference {
                    pointer: pointer.to_owned(),
                    name,
                });
            }
        }
        Ok(())
    }

    fn nums<'a>(&self, pointer: &str, nums: impl IntoIterator<Item = &'a Num>) -> Result<()> {
        nums.into_iter().try_for_each(|n| self.num(pointer, n))
    }

    fn reference(&self, pointer: &str, value: &Json, wanted: Kind) -> Result<Kind> {
        let name = value
            .as_str()
            .ok_or_else(|| ScenarioError::schema(pointer, "expected the name of an object"))?;
        let kind = *self.kinds.get(name).ok_or_else(|| ScenarioError::UnknownReference {
            pointer: pointer.to_owned(),
            name: name.to_owned(),
        })?;
        if !kind.fits(wanted) {
            return Err(ScenarioError::schema(
                pointer,
                format!("expected a {}, but {name:?} is a {}", wanted.name(), kind.name()),
            ));
        }
        Ok(kind)
    }

    fn matrix(&self, pointer: &str, value: &Json) -> Result<()> {
        let m: Matrix = typed(pointer, value)?;
        match m.dim() {
            Some(d) if d == self.dim => self.nums(pointer, m.nums()),
            Some(d) => Err(ScenarioError::schema(
                pointer,
                format!("matrix has dimension {d}, system has dimension {}", self.dim),
            )),
            None => Err(ScenarioError::schema(pointer, "matrix is not square")),
        }
    }

    /// Checks one argument; returns the kind of `combine` terms when relevant.
    fn arg(&self, pointer: &str, param: Param, value: &Json) -> Result<Option<Kind>> {
        match param {
            Param::Ref(kind) => {
                self.reference(pointer, value, kind)?;
            }
            Param::Refs(kind) => {
                let items = value
                    .as_array()
                    .filter(|a| !a.is_empty())
                    .ok_or_else(|| ScenarioError::schema(pointer, "expected a non-empty list of names"))?;
                for (i, item) in items.iter().enumerate() {
                    self.reference(&format!("{pointer}/{i}"), item, kind)?;
                }
            }
            Param::Num => self.num(pointer, &typed::<Num>(pointer, value)?)?,
            Param::Nums => self.nums(pointer, &typed::<Vec<Num>>(pointer, value)?)?,
            Param::CNum => self.nums(pointer, typed::<CNum>(pointer, value)?.nums())?,
            Param::Int => {
                typed::<u64>(pointer, value)?;
            }
            Param::Bool => {
                typed::<bool>(pointer, value)?;
            }
            Param::Choice(options) => {
                let s: String = typed(pointer, value)?;
                if !options.contains(&s.as_str()) {
                    return Err(ScenarioError::schema(pointer, format!("expected one of {options:?}")));
                }
            }
            Param::Matrix => self.matrix(pointer, value)?,
            Param::Amps => {
                let amps: Vec<CNum> = typed(pointer, value)?;
                if amps.len() != self.dim {
                    return Err(ScenarioError::schema(
                        pointer,
                        format!("expected {} amplitudes, found {}", self.dim, amps.len()),
                    ));
                }
                self.nums(pointer, amps.iter().flat_map(CNum::nums))?;
            }
            Param::Terms => {
                let terms: Vec<(CNum, String)> = typed(pointer, value)?;
                let mut kind = None;
                for (i, (coef, name)) in terms.iter().enumerate() {
                    let at = format!("{pointer}/{i}");
                    self.nums(&at, coef.nums())?;
                    let k = self.reference(&format!("{at}/1"), &Json::String(name.clone()), Kind::Same)?;
                    if !matches!(k, Kind::Operator | Kind::State) {
                        return Err(ScenarioError::schema(at, "terms must be operators or states"));
                    }
                    if kind.is_some_and(|prev| prev != k) {
                        return Err(ScenarioError::schema(at, "cannot mix operators and states"));
                    }
                    kind = Some(k);
                }
                return kind
                    .map(Some)
                    .ok_or_else(|| ScenarioError::schema(pointer, "expected at least one term"));
            }
            Param::Labels => {
                typed::<Vec<String>>(pointer, value)?;
            }
            Param::Values => {
                let values: BTreeMap<String, CNum> = typed(pointer, value)?;
                self.nums(pointer, values.values().flat_map(CNum::nums))?;
            }
            Param::Outcomes => {
                let outcomes: Vec<Json> = typed(pointer, value)?;
                for (i, o) in outcomes.iter().enumerate() {
                    let at = format!("{pointer}/{i}");
                    typed::<OutcomeSpec>(&at, o)?;
                    self.matrix(&format!("{at}/matrix"), &o["matrix"])?;
                }
            }
            Param::Path => {
                typed::<String>(pointer, value)?;
            }
        }
        Ok(None)
    }
}

pub(crate) fn typed<T: serde::de::DeserializeOwned>(pointer: &str, value: &Json) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|err| {
        let at = pointer_of(err.path());
        let at = if at == "/" { pointer.to_owned() } else { format!("{pointer}{at}") };
        ScenarioError::schema(at, err.into_inner().to_string())
    })
}

fn validate_system(system: &SystemSpec) -> Result<()> {
    let vars = base_vars();
    let positive = |pointer: &str, num: &Num| -> Result<f64> {
        let x = num.eval(&vars).map_err(|e| match e {
            ExprError::Undefined(name) => ScenarioError::UnknownReference {
                pointer: pointer.to_owned(),
                name,
            },
            other => ScenarioError::schema(pointer, other.to_string()),
        })?;
        if x > 0.0 {
            Ok(x)
        } else {
            Err(ScenarioError::schema(pointer, "must be positive"))
        }
    };
    match system {
        SystemSpec::Pauli => {}
        SystemSpec::Spin { j } => {
            let j = positive("/system/j", j)?;
            if ((2.0 * j) - (2.0 * j).round()).abs() > 1e-9 {
                return Err(ScenarioError::schema("/system/j", "j must be a positive half-integer"));
            }
        }
        SystemSpec::Oscillator { dim, omega } => {
            if *dim < 2 {
                return Err(ScenarioError::schema("/system/dim", "oscillator needs at least 2 levels"));
            }
            positive("/system/omega", omega)?;
        }
        SystemSpec::Random { dim, .. } => {
            if *dim == 0 {
                return Err(ScenarioError::schema("/system/dim", "dimension must be positive"));
            }
        }
        SystemSpec::Explicit { dim, operators } => {
            if *dim == 0 {
                return Err(ScenarioError::schema("/system/dim", "dimension must be positive"));
            }
            for (name, m) in operators {
                let pointer = format!("/system/operators/{name}");
                if !is_identifier(name) || name == "id" {
                    return Err(ScenarioError::schema(pointer, "operator names must be identifiers other than \"id\""));
                }
                if m.dim() != Some(*dim) {
                    return Err(ScenarioError::schema(pointer, format!("expected a {dim}x{dim} matrix")));
                }
                for x in m.nums() {
                    x.eval(&vars).map_err(|e| ScenarioError::schema(&pointer, e.to_string()))?;
                }
            }
        }
    }
    Ok(())
}

/// Static checks: system parameters, operation names, argument shapes and
/// references, expectation expressions and output targets.
pub fn validate(scenario: &Scenario) -> Result<()> {
    validate_system(&scenario.system)?;
    if let Some(hbar) = &scenario.hbar {
        let x = hbar
            .eval(&base_vars())
            .map_err(|e| ScenarioError::schema("/hbar", e.to_string()))?;
        if x <= 0.0 {
            return Err(ScenarioError::schema("/hbar", "must be positive"));
        }
    }
    let mut checker = Checker {
        kinds: system_objects(&scenario.system)
            .into_iter()
            .map(|n| (n, Kind::Operator))
            .collect(),
        scalars: base_vars()
            .into_keys()
            .chain(system_constants(&scenario.system).into_iter().map(str::to_owned))
            .collect(),
        dim: scenario.dim(),
    };
    for (i, task) in scenario.tasks.iter().enumerate() {
        let base = format!("/tasks/{i}");
        let sig = signature(&task.op).ok_or_else(|| ScenarioError::UnknownOperation {
            pointer: format!("{base}/op"),
            op: task.op.clone(),
        })?;
        for key in task.args.keys() {
            if !sig.args.iter().any(|a| a.name == key) {
                return Err(ScenarioError::schema(
                    format!("{base}/args/{key}"),
                    format!("{} takes no argument {key:?}", sig.name),
                ));
            }
        }
        let mut output = sig.output;
        for arg in sig.args {
            let pointer = format!("{base}/args/{}", arg.name);
            match task.args.get(arg.name) {
                Some(value) => {
                    if let Some(kind) = checker.arg(&pointer, arg.param, value)? {
                        output = kind;
                    }
                }
                None if arg.required => {
                    return Err(ScenarioError::schema(pointer, format!("missing argument for {}", sig.name)))
                }
                None => {}
            }
        }
        if let Some(expect) = &task.expect {
            let pointer = format!("{base}/expect");
            let nums = [&expect.value, &expect.im]
                .into_iter()
                .flatten()
                .flat_map(OneOrMany::items)
                .chain(expect.min.iter())
                .chain(expect.max.iter())
                .chain(expect.tol.iter())
                .chain(expect.rel_tol.iter());
            checker.nums(&pointer, nums)?;
        }
        if let Some(name) = &task.name {
            let pointer = format!("{base}/as");
            if !is_identifier(name) {
                return Err(ScenarioError::schema(pointer, "names must be identifiers"));
            }
            if checker.kinds.contains_key(name) || checker.scalars.contains(name) {
                return Err(ScenarioError::schema(pointer, format!("{name:?} is already defined")));
            }
            if output == Kind::Scalar {
                checker.scalars.insert(name.clone());
            }
            checker.kinds.insert(name.clone(), output);
        }
    }
    for (i, out) in scenario.outputs.iter().enumerate() {
        if out.task >= scenario.tasks.len() {
            return Err(ScenarioError::schema(
                format!("/outputs/{i}/task"),
                format!("no task with index {}", out.task),
            ));
        }
        if out.path.is_empty() {
            return Err(ScenarioError::schema(format!("/outputs/{i}/path"), "empty path"));
        }
    }
    Ok(())
}

/// Identifiers inside every string leaf of `value`.
fn expression_names(value: &Json, names: &mut Vec<String>) {
    match value {
        Json::String(s) => names.extend(crate::num::identifiers(s).unwrap_or_default()),
        Json::Array(items) => items.iter().for_each(|v| expression_names(v, names)),
        Json::Object(map) => map
            .iter()
            .filter(|(k, _)| k.as_str() != "label")
            .for_each(|(_, v)| expression_names(v, names)),
        _ => {}
    }
}

/// Names referenced by a task, either as object arguments or inside expressions.
pub(crate) fn task_references(task: &Task) -> Vec<String> {
    let mut names = Vec::new();
    let Some(sig) = signature(&task.op) else {
        return names;
    };
    let add_nums = |nums: Vec<&Num>, names: &mut Vec<String>| {
        for n in nums {
            names.extend(n.identifiers().unwrap_or_default());
        }
    };
    for arg in sig.args {
        let Some(value) = task.args.get(arg.name) else {
            continue;
        };
        match arg.param {
            Param::Ref(_) => names.extend(value.as_str().map(str::to_owned)),
            Param::Refs(_) => {
                names.extend(value.as_array().into_iter().flatten().filter_map(|v| v.as_str().map(str::to_owned)))
            }
            Param::Terms => {
                if let Ok(terms) = serde_json::from_value::<Vec<(CNum, String)>>(value.clone()) {
                    for (c, n) in &terms {
                        add_nums(c.nums(), &mut names);
                        names.push(n.clone());
                    }
                }
            }
            Param::Num | Param::CNum | Param::Nums | Param::Amps | Param::Values | Param::Matrix | Param::Outcomes => {
                expression_names(value, &mut names)
            }
            _ => {}
        }
    }
    if let Some(expect) = &task.expect {
        let nums: Vec<&Num> = [&expect.value, &expect.im]
            .into_iter()
            .flatten()
            .flat_map(OneOrMany::items)
            .chain(expect.min.iter())
            .chain(expect.max.iter())
            .chain(expect.tol.iter())
            .chain(expect.rel_tol.iter())
            .collect();
        add_nums(nums, &mut names);
    }
    names
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "name": "minimal",
        "system": {"kind": "pauli"},
        "tasks": [
            {"op": "basis_state", "args": {"index": 0}, "as": "up"},
            {"op": "state", "args": {"amplitudes": ["sqrt(1/2)", "sqrt(1/2)"]}, "as": "plus"},
            {"op": "born_probability", "args": {"a": "up", "b": "plus"}, "expect": {"value": 0.5, "tol": 1e-12}}
        ]
    }"#;

    #[test]
    fn minimal_document() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.tasks.len(), 3);
        assert_eq!(s.dim(), 2);
        let one = r#"{"name": "one", "system": {"kind": "pauli"},
            "tasks": [{"op": "born_probability", "args": {"a": "x", "b": "x"}}]}"#;
        assert!(matches!(parse_scenario(one), Err(ScenarioError::UnknownReference { name, .. }) if name == "x"));
    }

    #[test]
    fn round_trip() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(parse_scenario(&to_json(&s)).unwrap(), s);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_scenario("{\n  \"name\": \"x\",\n  \"system\": {\"kind\": \"pauli\"\n}").unwrap_err();
        match err {
            ScenarioError::Syntax { line, .. } => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let err = parse_scenario(r#"{"name": "x", "system": {"kind": "pauli"}, "tasks": [{"op": "grid", "args": {"start": 0, "stop": 1, "step": true}}]}"#)
            .unwrap_err();
        match err {
            ScenarioError::Schema { pointer, .. } => assert_eq!(pointer, "/tasks/0/args/step"),
            other => panic!("{other:?}"),
        }
        let err = parse_scenario(r#"{"name": "x", "system": {"kind": "pauli"}, "tasks": [{"op": "grid", "arg": {}}]}"#).unwrap_err();
        assert!(matches!(err, ScenarioError::Schema { pointer, .. } if pointer.starts_with("/tasks/0")));
    }

    #[test]
    fn spin_must_be_half_integer() {
        let err = parse_scenario(r#"{"name": "x", "system": {"kind": "spin", "j": 0.4}}"#).unwrap_err();
        assert!(matches!(err, ScenarioError::Schema { pointer, .. } if pointer == "/system/j"));
        assert!(parse_scenario(r#"{"name": "x", "system": {"kind": "spin", "j": "3/2"}}"#).is_ok());
    }

    #[test]
    fn unknown_operation_and_reference() {
        let doc = r#"{"name": "x", "system": {"kind": "pauli"}, "tasks": [{"op": "teleport"}]}"#;
        assert!(matches!(parse_scenario(doc), Err(ScenarioError::UnknownOperation { op, .. }) if op == "teleport"));
        let doc = r#"{"name": "x", "system": {"kind": "pauli"}, "tasks": [
            {"op": "random_density", "as": "rho"},
            {"op": "expectation", "args": {"op": "sz", "rho": "rho2"}}]}"#;
        assert!(matches!(parse_scenario(doc), Err(ScenarioError::UnknownReference { name, .. }) if name == "rho2"));
        let doc = r#"{"name": "x", "system": {"kind": "pauli"}, "tasks": [
            {"op": "grid", "args": {"start": 0, "stop": "tmax", "step": 0.1}}]}"#;
        assert!(matches!(parse_scenario(doc), Err(ScenarioError::UnknownReference { name, .. }) if name == "tmax"));
    }

    #[test]
    fn inline_arrays_match_system_dimension() {
        let doc = r#"{"name": "x", "system": {"kind": "pauli"}, "tasks": [
            {"op": "state", "args": {"amplitudes": [1, 0, 0]}}]}"#;
        assert!(matches!(parse_scenario(doc), Err(ScenarioError::Schema { pointer, .. }) if pointer == "/tasks/0/args/amplitudes"));
        let doc = r#"{"name": "x", "system": {"kind": "pauli"}, "tasks": [
            {"op": "operator", "args": {"matrix": [[1,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[0,0],[1,0]]}}]}"#;
        assert!(matches!(parse_scenario(doc), Err(ScenarioError::Schema { .. })));
    }

    #[test]
    fn kinds_are_checked() {
        let doc = r#"{"name": "x", "system": {"kind": "pauli"}, "tasks": [
            {"op": "overlap", "args": {"a": "sx", "b": "sz"}}]}"#;
        assert!(matches!(parse_scenario(doc), Err(ScenarioError::Schema { pointer, .. }) if pointer == "/tasks/0/args/a"));
        let doc = r#"{"name": "x", "system": {"kind": "pauli"}, "tasks": [
            {"op": "combine", "args": {"terms": [[0.5, "sz"]]}, "as": "h"},
            {"op": "eigendecompose", "args": {"op": "h"}}]}"#;
        assert!(parse_scenario(doc).is_ok());
    }

    #[test]
    fn duplicate_names_rejected() {
        let doc = r#"{"name": "x", "system": {"kind": "pauli"}, "tasks": [
            {"op": "random_state", "as": "sx"}]}"#;
        assert!(matches!(parse_scenario(doc), Err(ScenarioError::Schema { pointer, .. }) if pointer == "/tasks/0/as"));
    }
}
