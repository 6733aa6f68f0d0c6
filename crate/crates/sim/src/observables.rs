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


use std::f64::consts::PI;

use num_complex::Complex64;
use su2trotter::models::{conservation_generators, LatticeModel};
use su2trotter::pauli::{chirality, PauliSum};
use su2trotter::synth::{Gate, GateCircuit};

use crate::evolve::SparseHamiltonian;
use crate::{SimError, SimState, StateVector};

/// `Tr(ρ O)` or `⟨ψ|O|ψ⟩` for a numeric Hermitian `O`.
pub fn expectation(state: &SimState, o: &PauliSum) -> Result<f64, SimError> {
    if o.n_sites() != state.n_qubits() {
        return Err(SimError::QubitMismatch(state.n_qubits(), o.n_sites()));
    }
    let op = SparseHamiltonian::new(o)?;
    let value = match state {
        SimState::Pure(psi) => {
            let mut out = vec![Complex64::new(0.0, 0.0); psi.amplitudes().len()];
            op.apply(psi.amplitudes(), &mut out);
            psi.amplitudes().iter().zip(&out).map(|(a, b)| a.conj() * b).sum::<Complex64>()
        }
        SimState::Mixed(rho) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, d) in op.groups() {
                acc += d.iter().enumerate().map(|(b, v)| rho.element(b, b ^ x) * v).sum::<Complex64>();
            }
            acc
        }
    };
    Ok(value.re)
}

/// `⟨ψ|ρ|ψ⟩`, clamped to `[0, 1]`.
pub fn fidelity(state: &SimState, psi: &StateVector) -> Result<f64, SimError> {
    if state.n_qubits() != psi.n_qubits() {
        return Err(SimError::QubitMismatch(state.n_qubits(), psi.n_qubits()));
    }
    let f = match state {
        SimState::Pure(phi) => phi.inner(psi).norm_sqr(),
        SimState::Mixed(rho) => rho.overlap(psi).re,
    };
    Ok(f.clamp(0.0, 1.0))
}

/// Average chirality over the model's chirality triangles.
pub fn chirality_observable(model: &LatticeModel) -> PauliSum {
    let n = model.n_sites;
    let mut o = PauliSum::zero(n);
    let w = 1.0 / model.triangles.len().max(1) as f64;
    for t in &model.triangles {
        let [i, j, k] = t.sites;
        o.add_sum(&chirality(n, i, j, k, &w.into()).expect("triangle in range")).expect("same size");
    }
    o
}

/// `Σ_i X_i`, `Σ_i Y_i`, `Σ_i Z_i`.
pub fn total_spin(n: usize) -> [PauliSum; 3] {
    conservation_generators(n)
}

/// `⊗_k (|0⟩ + e^{2πik/3}|1⟩)/√2` with `k` counted from zero.
pub fn initial_state_kagome(n: usize) -> Result<StateVector, SimError> {
    let s = 1.0 / 2f64.sqrt();
    let factors: Vec<[Complex64; 2]> = (0..n).map(|k| [Complex64::new(s, 0.0), Complex64::from_polar(s, 2.0 * PI * (k % 3) as f64 / 3.0)]).collect();
    StateVector::product(&factors)
}

/// Hadamard then `RZ(2πk/3)` on every qubit; prepares the state above up to
/// a global phase.
pub fn preparation_circuit(n: usize) -> GateCircuit {
    let mut c = GateCircuit::new(n);
    for q in 0..n {
        c.push(Gate::H(q)).expect("qubit in range");
        let angle = 2.0 * PI * (q % 3) as f64 / 3.0;
        if angle != 0.0 {
            c.push(Gate::Rz { qubit: q, angle }).expect("qubit in range");
        }
    }
    c
}
