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


//! Statevector and density-matrix simulation of gate circuits, Krylov
//! reference propagation and observables.

mod density;
mod evolve;
mod noise;
mod observables;
mod state;

pub use density::DensityMatrix;
pub use evolve::{exact_evolve, exact_evolve_with, KrylovOptions};
pub use noise::{apply_circuit, NoiseMode, NoiseSpec, SimState};
pub use observables::{chirality_observable, expectation, fidelity, initial_state_kagome, preparation_circuit, total_spin};
pub use state::StateVector;

use thiserror::Error;

use su2trotter::pauli::PauliError;

/// Largest register either backend accepts.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{0} qubits exceeds the limit of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),
    #[error("noise requires a density matrix")]
    NoiseOnPure,
    #[error("probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("operator is not Hermitian")]
    NonHermitian,
    #[error("state is not normalised")]
    NotNormalised,
    #[error("Krylov propagation did not converge")]
    NoConvergence,
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

fn check_qubits(n: usize) -> Result<(), SimError> {
    if n > MAX_QUBITS {
        return Err(SimError::TooManyQubits(n));
    }
    Ok(())
}
