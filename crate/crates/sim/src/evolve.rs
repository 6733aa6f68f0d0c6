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


use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use su2trotter::pauli::{Couplings, PauliSum};

use crate::{check_qubits, SimError, StateVector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrylovOptions {
    pub subspace: usize,
    pub tolerance: f64,
    pub max_refinements: usize,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        KrylovOptions { subspace: 30, tolerance: 1e-11, max_refinements: 12 }
    }
}

/// `H` grouped by X-mask: `H|b⟩ = Σ_x d_x[b] |b ⊕ x⟩`.
pub(crate) struct SparseHamiltonian {
    groups: Vec<(usize, Vec<Complex64>)>,
    pub(crate) norm_bound: f64,
}

const PHASES: [Complex64; 4] = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)];

impl SparseHamiltonian {
    pub(crate) fn new(h: &PauliSum) -> Result<Self, SimError> {
        check_qubits(h.n_sites())?;
        let dim = 1usize << h.n_sites();
        let mut groups: BTreeMap<usize, Vec<Complex64>> = BTreeMap::new();
        let mut norm_bound = 0.0;
        for (p, v) in h.evaluate(&Couplings::new())? {
            if !v.is_finite() {
                return Err(SimError::NonHermitian);
            }
            norm_bound += v.abs();
            let d = groups.entry(p.x_mask() as usize).or_insert_with(|| vec![Complex64::new(0.0, 0.0); dim]);
            for (b, x) in d.iter_mut().enumerate() {
                *x += PHASES[p.action_phase(b as u64) as usize] * v;
            }
        }
        Ok(SparseHamiltonian { groups: groups.into_iter().collect(), norm_bound })
    }

    pub(crate) fn groups(&self) -> impl Iterator<Item = (usize, &[Complex64])> {
        self.groups.iter().map(|(x, d)| (*x, d.as_slice()))
    }

    pub(crate) fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        for (x, d) in &self.groups {
            for (b, a) in psi.iter().enumerate() {
                out[b ^ x] += d[b] * a;
            }
        }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// One Lanczos step `exp(−iHh)φ`.
fn lanczos_step(h: &SparseHamiltonian, phi: &[Complex64], dt: f64, m: usize) -> Vec<Complex64> {
    let beta0 = norm(phi);
    if beta0 == 0.0 {
        return phi.to_vec();
    }
    let dim = phi.len();
    let mut basis: Vec<Vec<Complex64>> = vec![phi.iter().map(|x| x / beta0).collect()];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..m.min(dim) {
        h.apply(&basis[j], &mut w);
        alpha.push(dot(&basis[j], &w).re);
        for v in &basis {
            let c = dot(v, &w);
            w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
        }
        let b = norm(&w);
        if j + 1 == m.min(dim) || b < 1e-13 * beta0.max(1.0) {
            break;
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let coeffs: Vec<Complex64> = (0..k)
        .map(|i| {
            (0..k)
                .map(|l| {
                    let q = eig.eigenvectors[(i, l)] * eig.eigenvectors[(0, l)];
                    Complex64::from_polar(q, -eig.eigenvalues[l] * dt)
                })
                .sum::<Complex64>()
                * beta0
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (c, v) in coeffs.iter().zip(&basis) {
        out.iter_mut().zip(v).for_each(|(x, y)| *x += c * y);
    }
    out
}

fn propagate(h: &SparseHamiltonian, psi: &[Complex64], t: f64, steps: usize, m: usize) -> Vec<Complex64> {
    let dt = t / steps as f64;
    let mut cur = psi.to_vec();
    for _ in 0..steps {
        cur = lanczos_step(h, &cur, dt, m);
    }
    cur
}

/// `exp(−iHt)|ψ⟩` for a numeric `H`.
pub fn exact_evolve(h: &PauliSum, t: f64, psi: &StateVector) -> Result<StateVector, SimError> {
    exact_evolve_with(h, t, psi, KrylovOptions::default())
}

/// Doubles the number of Lanczos substeps until two successive runs agree.
pub fn exact_evolve_with(h: &PauliSum, t: f64, psi: &StateVector, opts: KrylovOptions) -> Result<StateVector, SimError> {
    if h.n_sites() != psi.n_qubits() {
        return Err(SimError::QubitMismatch(psi.n_qubits(), h.n_sites()));
    }
    let op = SparseHamiltonian::new(h)?;
    if t == 0.0 || op.norm_bound == 0.0 {
        return Ok(psi.clone());
    }
    let mut steps = ((op.norm_bound * t.abs()) / 8.0).ceil().max(1.0) as usize;
    let mut prev = propagate(&op, psi.amplitudes(), t, steps, opts.subspace);
    for _ in 0..opts.max_refinements {
        steps *= 2;
        let next = propagate(&op, psi.amplitudes(), t, steps, opts.subspace);
        let diff = next.iter().zip(&prev).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        prev = next;
        if diff <= opts.tolerance {
            return Ok(StateVector::from_raw(psi.n_qubits(), prev));
        }
    }
    Err(SimError::NoConvergence)
}
