//! Built-in demo scenarios.

use crate::error::{Result, ScenarioError};
use crate::runner::{run_scenario, RunOptions, RunReport};
use crate::scenario::{parse_scenario, Scenario};

/// `(name, summary, document)` for every demo, in suite order.
pub const DEMOS: &[(&str, &str, &str)] = &[
    (
        "three-box",
        "negative complex conditional probabilities for the three-box states",
        include_str!("../demos/three-box.json"),
    ),
    (
        "qubit-rotation",
        "peak transition time of a precessing qubit against the action slope",
        include_str!("../demos/qubit-rotation.json"),
    ),
    (
        "ozawa-zero-error",
        "zero measurement error for sigma_z estimated from a sigma_x measurement",
        include_str!("../demos/ozawa-zero-error.json"),
    ),
    (
        "ehrenfest",
        "imaginary correlation with the Hamiltonian against the rate of change",
        include_str!("../demos/ehrenfest.json"),
    ),
    (
        "coarse-grain-spin",
        "stationary-action concentration for a spin-20 twist",
        include_str!("../demos/coarse-grain-spin.json"),
    ),
    (
        "constants",
        "position-energy correlation bound at light speed in SI units",
        include_str!("../demos/constants.json"),
    ),
    (
        "oscillator-propagation",
        "propagation time of a truncated-oscillator coherent state",
        include_str!("../demos/oscillator-propagation.json"),
    ),
];

pub fn demo_names() -> impl Iterator<Item = &'static str> {
    DEMOS.iter().map(|d| d.0)
}

pub fn demo_scenario(name: &str) -> Result<Scenario> {
    let (_, _, doc) = DEMOS
        .iter()
        .find(|d| d.0 == name)
        .ok_or_else(|| ScenarioError::UnknownDemo(name.to_owned()))?;
    parse_scenario(doc)
}

pub fn run_demo(name: &str, opts: &RunOptions) -> Result<RunReport> {
    run_scenario(&demo_scenario(name)?, opts)
}
