// Copyright 2026 The su2trotter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


use su2trotter::synth::{Gate, GateCircuit};

use crate::density::{compose, dephasing_superop, depolarizing_superop, unitary_superop, Super1};
use crate::{DensityMatrix, SimError, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NoiseMode {
    #[default]
    None,
    /// `p1` after every one-qubit gate, `p2` after every CNOT.
    Depolarizing,
    /// `pz` after every non-Clifford RZ.
    Dephasing,
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct NoiseSpec {
    pub p1: f64,
    pub p2: f64,
    pub pz: f64,
    pub mode: NoiseMode,
}

impl NoiseSpec {
    pub fn none() -> Self {
        NoiseSpec::default()
    }

    /// Two-qubit probability `p2` with `p1 = p2 / 10`.
    pub fn depolarizing(p2: f64) -> Self {
        NoiseSpec { p1: p2 / 10.0, p2, pz: 0.0, mode: NoiseMode::Depolarizing }
    }

    pub fn dephasing(pz: f64) -> Self {
        NoiseSpec { p1: 0.0, p2: 0.0, pz, mode: NoiseMode::Dephasing }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for p in [self.p1, self.p2, self.pz] {
            if !(0.0..=1.0).contains(&p) {
                return Err(SimError::Probability(p));
            }
        }
        Ok(())
    }

    pub fn is_noisy(&self) -> bool {
        self.mode != NoiseMode::None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SimState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl SimState {
    pub fn n_qubits(&self) -> usize {
        match self {
            SimState::Pure(s) => s.n_qubits(),
            SimState::Mixed(r) => r.n_qubits(),
        }
    }
}

pub fn apply_circuit(state: &mut SimState, c: &GateCircuit, noise: &NoiseSpec) -> Result<(), SimError> {
    noise.validate()?;
    if state.n_qubits() != c.n_qubits() {
        return Err(SimError::QubitMismatch(state.n_qubits(), c.n_qubits()));
    }
    match state {
        SimState::Pure(psi) => {
            if noise.is_noisy() {
                return Err(SimError::NoiseOnPure);
            }
            psi.apply_circuit(c)
        }
        SimState::Mixed(rho) => {
            apply_noisy(rho, c, noise);
            Ok(())
        }
    }
}

/// One-qubit gates and their channels accumulate per qubit and are flushed
/// into the next CNOT touching that qubit.
fn apply_noisy(rho: &mut DensityMatrix, c: &GateCircuit, noise: &NoiseSpec) {
    let n = rho.n_qubits();
    let mut pending: Vec<Option<Super1>> = vec![None; n];
    let p2 = if noise.mode == NoiseMode::Depolarizing { noise.p2 } else { 0.0 };
    for g in c.gates() {
        match g {
            Gate::Cnot { control, target } => {
                let sc = pending[*control].take();
                let st = pending[*target].take();
                rho.cnot_block(*control, *target, sc.as_ref(), st.as_ref(), p2);
            }
            other => {
                let q = other.qubits()[0];
                let mut s = unitary_superop(&other.single_qubit_matrix().expect("one-qubit gate"));
                match noise.mode {
                    NoiseMode::Depolarizing if noise.p1 > 0.0 => s = compose(&depolarizing_superop(noise.p1), &s),
                    NoiseMode::Dephasing if other.is_clifford_rz() == Some(false) && noise.pz > 0.0 => {
                        s = compose(&dephasing_superop(noise.pz), &s)
                    }
                    _ => {}
                }
                pending[q] = Some(match &pending[q] {
                    Some(prev) => compose(&s, prev),
                    None => s,
                });
            }
        }
    }
    for (q, s) in pending.iter().enumerate() {
        if let Some(s) = s {
            rho.apply_superop(q, s);
        }
    }
}
