//! Named protocol constructions, selectable at run time.

use crate::error::{contract, Result};
use crate::generic_sim::baseline_simulation;
use crate::numerics::CMatrix;
use crate::protocol::{invert_optimal, invert_universal, synthesize, SimulationProtocol};

pub trait SimulationStrategy {
    fn name(&self) -> &'static str;
    fn simulate(&self, h: &CMatrix, hp: &CMatrix) -> Result<SimulationProtocol>;
}

pub trait InversionStrategy {
    fn name(&self) -> &'static str;
    fn invert(&self, h: &CMatrix) -> Result<SimulationProtocol>;
}

/// Time-optimal synthesis from the polyhedron decomposition.
pub struct Optimal;

/// Two-stage Clifford construction; always valid, rarely optimal.
pub struct Baseline;

/// `σ_x`, `σ_y`, `σ_z` average; `s = 1/3` for every source.
pub struct Universal;

impl SimulationStrategy for Optimal {
    fn name(&self) -> &'static str {
        "optimal"
    }

    fn simulate(&self, h: &CMatrix, hp: &CMatrix) -> Result<SimulationProtocol> {
        synthesize(h, hp)
    }
}

impl SimulationStrategy for Baseline {
    fn name(&self) -> &'static str {
        "baseline"
    }

    fn simulate(&self, h: &CMatrix, hp: &CMatrix) -> Result<SimulationProtocol> {
        baseline_simulation(h, hp)
    }
}

impl InversionStrategy for Optimal {
    fn name(&self) -> &'static str {
        "optimal"
    }

    fn invert(&self, h: &CMatrix) -> Result<SimulationProtocol> {
        invert_optimal(h)
    }
}

impl InversionStrategy for Universal {
    fn name(&self) -> &'static str {
        "universal"
    }

    fn invert(&self, h: &CMatrix) -> Result<SimulationProtocol> {
        invert_universal().instantiate(h)
    }
}

pub fn simulation_strategies() -> Vec<Box<dyn SimulationStrategy>> {
    vec![Box::new(Optimal), Box::new(Baseline)]
}

pub fn inversion_strategies() -> Vec<Box<dyn InversionStrategy>> {
    vec![Box::new(Optimal), Box::new(Universal)]
}

fn unknown(kind: &str, name: &str, known: Vec<&str>) -> crate::Error {
    contract(format!("unknown {kind} strategy {name:?}; expected one of {}", known.join(", ")))
}

pub fn simulation_strategy(name: &str) -> Result<Box<dyn SimulationStrategy>> {
    let all = simulation_strategies();
    let known = all.iter().map(|s| s.name()).collect::<Vec<_>>();
    all.into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| unknown("simulation", name, known))
}

pub fn inversion_strategy(name: &str) -> Result<Box<dyn InversionStrategy>> {
    let all = inversion_strategies();
    let known = all.iter().map(|s| s.name()).collect::<Vec<_>>();
    all.into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| unknown("inversion", name, known))
}
