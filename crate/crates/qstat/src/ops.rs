//! Signatures of every task operation.

/// Static type of a named object.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Operator,
    State,
    Density,
    Basis,
    Spectrum,
    Povm,
    Estimates,
    Scalar,
    Complex,
    Reals,
    Complexes,
    Dirac,
    WeakTable,
    WeakValue,
    Profile,
    Bins,
    Peak,
    Curve,
    Ehrenfest,
    Validity,
    PovmReport,
    Recovered,
    /// Output kind follows the referenced inputs (`combine`).
    Same,
}

impl Kind {
    /// Whether an object of kind `self` can be passed where `wanted` is expected.
    pub fn fits(self, wanted: Kind) -> bool {
        wanted == Kind::Same || self == wanted || (wanted == Kind::Density && self == Kind::State)
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Operator => "operator",
            Kind::State => "state",
            Kind::Density => "density operator",
            Kind::Basis => "basis",
            Kind::Spectrum => "spectrum",
            Kind::Povm => "POVM",
            Kind::Estimates => "estimate assignment",
            Kind::Scalar => "scalar",
            Kind::Complex => "complex number",
            Kind::Reals => "real list",
            Kind::Complexes => "complex list",
            Kind::Dirac => "Dirac distribution",
            Kind::WeakTable => "weak-value table",
            Kind::WeakValue => "weak value",
            Kind::Profile => "action profile",
            Kind::Bins => "energy bins",
            Kind::Peak => "peak scan",
            Kind::Curve => "probability curve",
            Kind::Ehrenfest => "Ehrenfest check",
            Kind::Validity => "validity report",
            Kind::PovmReport => "POVM report",
            Kind::Recovered => "recovered probabilities",
            Kind::Same => "operator or state",
        }
    }
}

/// Shape of one task argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Ref(Kind),
    Refs(Kind),
    Num,
    Nums,
    CNum,
    /// Non-negative integer.
    Int,
    Bool,
    Choice(&'static [&'static str]),
    Matrix,
    /// List of complex amplitudes.
    Amps,
    /// `[[coefficient, "name"], ...]`.
    Terms,
    Labels,
    /// `{label: value}` with real or `[re, im]` values.
    Values,
    /// `[{"label": .., "matrix": ..}, ...]`.
    Outcomes,
    Path,
}

#[derive(Debug, Clone, Copy)]
pub struct Arg {
    pub name: &'static str,
    pub param: Param,
    pub required: bool,
}

const fn req(name: &'static str, param: Param) -> Arg {
    Arg {
        name,
        param,
        required: true,
    }
}

const fn opt(name: &'static str, param: Param) -> Arg {
    Arg {
        name,
        param,
        required: false,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Signature {
    pub name: &'static str,
    pub args: &'static [Arg],
    pub output: Kind,
}

const fn sig(name: &'static str, args: &'static [Arg], output: Kind) -> Signature {
    Signature { name, args, output }
}

use Kind as K;
use Param as P;

const OP: P = P::Ref(K::Operator);
const ST: P = P::Ref(K::State);
const RHO: P = P::Ref(K::Density);
const BASIS: P = P::Ref(K::Basis);
const MODES: &[&str] = &["real", "complex"];
const OPERATOR_KINDS: &[&str] = &["hermitian", "unitary", "density", "povm_element"];
const FIELDS: &[&str] = &[
    "value", "re", "im", "time", "probability", "lhs", "rhs", "deviation", "overlap", "passed",
    "completeness_deviation", "positivity_deviation", "hermiticity_deviation", "imaginary_residue",
];

pub const SIGNATURES: &[Signature] = &[
    // constructors
    sig("operator", &[req("matrix", P::Matrix)], K::Operator),
    sig("state", &[req("amplitudes", P::Amps), opt("normalize", P::Bool)], K::State),
    sig("basis_state", &[req("index", P::Int)], K::State),
    sig("spin_coherent", &[req("theta", P::Num), opt("phi", P::Num)], K::State),
    sig("oscillator_coherent", &[req("alpha", P::CNum)], K::State),
    sig("combine", &[req("terms", P::Terms)], K::Same),
    sig("product", &[req("factors", P::Refs(K::Operator))], K::Operator),
    sig("adjoint", &[req("op", OP)], K::Operator),
    sig("evolve", &[req("state", ST), req("unitary", OP)], K::State),
    sig("density", &[req("matrix", P::Matrix)], K::Density),
    sig("pure", &[req("state", ST)], K::Density),
    sig("basis", &[req("vectors", P::Refs(K::State))], K::Basis),
    sig("computational_basis", &[], K::Basis),
    sig("fourier_basis", &[], K::Basis),
    sig("eigenbasis", &[req("op", OP)], K::Basis),
    sig("transform_basis", &[req("basis", BASIS), req("unitary", OP)], K::Basis),
    sig("povm", &[req("outcomes", P::Outcomes)], K::Povm),
    sig("projective_povm", &[req("basis", BASIS), opt("labels", P::Labels)], K::Povm),
    sig("load_povm", &[req("path", P::Path)], K::Povm),
    sig("grid", &[req("start", P::Num), req("stop", P::Num), req("step", P::Num)], K::Reals),
    sig("random_hermitian", &[opt("seed", P::Int)], K::Operator),
    sig("random_state", &[opt("seed", P::Int)], K::State),
    sig("random_density", &[opt("seed", P::Int)], K::Density),
    sig("random_basis", &[opt("seed", P::Int)], K::Basis),
    sig("estimates", &[req("values", P::Values)], K::Estimates),
    sig(
        "optimal_estimates",
        &[req("a", OP), req("basis", BASIS), req("psi", ST), req("mode", P::Choice(MODES)), opt("labels", P::Labels)],
        K::Estimates,
    ),
    sig("select", &[req("from", P::Ref(K::Same)), req("field", P::Choice(FIELDS))], K::Scalar),
    // hilbert
    sig("validate_operator", &[req("op", OP), req("kind", P::Choice(OPERATOR_KINDS))], K::Validity),
    sig("eigendecompose", &[req("op", OP)], K::Spectrum),
    sig("commutator", &[req("a", OP), req("b", OP)], K::Operator),
    sig("expectation", &[req("op", OP), req("rho", RHO)], K::Complex),
    sig("projector", &[req("state", ST)], K::Operator),
    sig("overlap", &[req("a", ST), req("b", ST)], K::Complex),
    // dynamics
    sig(
        "thermal_state",
        &[req("h", OP), opt("temperature", P::Num), opt("zero_limit", P::Bool)],
        K::Density,
    ),
    sig("unitary_evolution", &[req("h", OP), req("t", P::Num)], K::Operator),
    sig("dephase", &[req("rho", RHO), req("observable", OP)], K::Density),
    sig("bohr_period", &[req("h", OP), req("n", P::Int), req("m", P::Int)], K::Scalar),
    sig("transition_probability", &[req("a", ST), req("b", ST), req("h", OP), req("t", P::Num)], K::Scalar),
    sig(
        "transition_curve",
        &[req("a", ST), req("b", ST), req("h", OP), req("grid", P::Ref(K::Reals))],
        K::Curve,
    ),
    sig(
        "transformation_action",
        &[req("a", ST), req("b", ST), req("h", OP), opt("unwrap", P::Bool)],
        K::Profile,
    ),
    sig("propagation_time", &[req("profile", P::Ref(K::Profile)), req("n", P::Int)], K::Scalar),
    sig(
        "action_slope",
        &[req("profile", P::Ref(K::Profile)), req("i", P::Int), req("j", P::Int)],
        K::Scalar,
    ),
    sig("classical_intersection_energy", &[req("profile", P::Ref(K::Profile))], K::Scalar),
    sig(
        "peak_time_scan",
        &[req("a", ST), req("b", ST), req("h", OP), req("grid", P::Ref(K::Reals))],
        K::Peak,
    ),
    // statistics
    sig("born_probability", &[req("a", ST), req("b", ST)], K::Scalar),
    sig("dirac_distribution", &[req("rho", RHO), req("basis_a", BASIS), req("basis_b", BASIS)], K::Dirac),
    sig("reconstruct_state", &[req("dist", P::Ref(K::Dirac))], K::Density),
    sig("weak_value", &[req("m", OP), req("pre", ST), req("post", ST)], K::WeakValue),
    sig("weak_table", &[req("m", OP), req("basis_a", BASIS), req("basis_b", BASIS)], K::WeakTable),
    sig("operator_from_weak_values", &[req("table", P::Ref(K::WeakTable))], K::Operator),
    sig("complex_conditional_probability", &[req("mid", ST), req("a", ST), req("b", ST)], K::Complex),
    sig("conditional_probabilities", &[req("mid_basis", BASIS), req("a", ST), req("b", ST)], K::Complexes),
    sig(
        "reconstruct_probability",
        &[req("mid_basis", BASIS), req("dist", P::Ref(K::Dirac))],
        K::Recovered,
    ),
    sig("conditional_action", &[req("h", OP), req("a", ST), req("b", ST), req("n", P::Int)], K::Scalar),
    sig("coarse_grain", &[req("h", OP), req("a", ST), req("b", ST), req("window", P::Num)], K::Bins),
    sig(
        "near_stationary_fraction",
        &[req("bins", P::Ref(K::Bins)), req("energy", P::Num)],
        K::Scalar,
    ),
    sig(
        "concentration_profile",
        &[req("h", OP), req("a", ST), req("b", ST), req("windows", P::Nums), req("energy", P::Num)],
        K::Reals,
    ),
    sig("imaginary_correlation", &[req("a", OP), req("b", OP), req("rho", RHO)], K::Scalar),
    sig("ehrenfest_check", &[req("a", OP), req("h", OP), req("rho", RHO), req("dt", P::Num)], K::Ehrenfest),
    sig(
        "ehrenfest_convergence",
        &[req("a", OP), req("h", OP), req("rho", RHO), req("dt", P::Num)],
        K::Scalar,
    ),
    // measurement
    sig("validate_povm", &[req("povm", P::Ref(K::Povm))], K::PovmReport),
    sig("povm_probability", &[req("element", OP), req("psi", ST)], K::Scalar),
    sig("povm_probabilities", &[req("povm", P::Ref(K::Povm)), req("psi", ST)], K::Reals),
    sig(
        "ozawa_error",
        &[req("a", OP), req("povm", P::Ref(K::Povm)), req("estimates", P::Ref(K::Estimates)), req("psi", ST)],
        K::Scalar,
    ),
    sig(
        "error_contribution",
        &[req("a", OP), req("m", ST), req("estimate", P::CNum), req("psi", ST)],
        K::Complex,
    ),
    sig("joint_quasiprobability", &[req("element", OP), req("a", ST), req("psi", ST)], K::Scalar),
    sig(
        "optimal_estimate",
        &[req("a", OP), req("m", ST), req("psi", ST), req("mode", P::Choice(MODES))],
        K::Complex,
    ),
    sig("deterministic_value", &[req("a", OP), req("psi", ST), req("m", ST)], K::Complex),
    sig(
        "operator_sum_value",
        &[req("m_op", OP), req("b_op", OP), req("m", ST), req("psi", ST)],
        K::Complex,
    ),
    sig(
        "expectation_from_deterministic",
        &[req("a", OP), req("rho", RHO), req("basis_psi", BASIS), req("basis_m", BASIS)],
        K::Complex,
    ),
    // units
    sig("position_energy_bound", &[], K::Scalar),
];

pub fn signature(op: &str) -> Option<&'static Signature> {
    SIGNATURES.iter().find(|s| s.name == op)
}
