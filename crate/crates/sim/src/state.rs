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


use num_complex::Complex64;
use su2trotter::synth::{Gate, GateCircuit, Mat2};

use crate::{check_qubits, SimError};

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self, SimError> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self, SimError> {
        check_qubits(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self, SimError> {
        check_qubits(n)?;
        if amps.len() != 1 << n {
            return Err(SimError::QubitMismatch(n, amps.len().trailing_zeros() as usize));
        }
        let s = StateVector { n, amps };
        if (s.norm() - 1.0).abs() > 1e-12 {
            return Err(SimError::NotNormalised);
        }
        Ok(s)
    }

    /// Product state `⊗_q (a_q|0⟩ + b_q|1⟩)` from per-qubit amplitudes.
    pub fn product(factors: &[[Complex64; 2]]) -> Result<Self, SimError> {
        let n = factors.len();
        check_qubits(n)?;
        let amps = (0..1usize << n).map(|b| factors.iter().enumerate().map(|(q, f)| f[b >> q & 1]).product()).collect();
        Self::from_amplitudes(n, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn from_raw(n: usize, amps: Vec<Complex64>) -> Self {
        StateVector { n, amps }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply_single(&mut self, q: usize, m: &Mat2) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[(0, 0)] * a + m[(0, 1)] * b;
                self.amps[i | bit] = m[(1, 0)] * a + m[(1, 1)] * b;
            }
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<(), SimError> {
        for q in g.qubits() {
            if q >= self.n {
                return Err(SimError::QubitMismatch(self.n, q + 1));
            }
        }
        match g {
            Gate::Cnot { control, target } => self.apply_cnot(*control, *target),
            other => {
                let m = other.single_qubit_matrix().expect("one-qubit gate");
                self.apply_single(other.qubits()[0], &m);
            }
        }
        Ok(())
    }

    /// Exact action of the circuit including its global phase.
    pub fn apply_circuit(&mut self, c: &GateCircuit) -> Result<(), SimError> {
        if c.n_qubits() != self.n {
            return Err(SimError::QubitMismatch(self.n, c.n_qubits()));
        }
        for g in c.gates() {
            self.apply_gate(g)?;
        }
        let phase = Complex64::from_polar(1.0, c.global_phase());
        for a in &mut self.amps {
            *a *= phase;
        }
        Ok(())
    }
}
