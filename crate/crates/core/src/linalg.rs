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

//! Small dense complex helpers shared by synthesis and tests.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Kronecker product `a ⊗ b`; with the little-endian qubit order used
/// throughout, `b` acts on the lower-index qubits.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

/// `exp(-i h t)` for Hermitian `h` via its eigendecomposition.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let d = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l * t)));
    v * d * v.adjoint()
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Entrywise distance after removing the best global phase of `b` relative to `a`.
pub fn phase_insensitive_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    let overlap: Complex64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c(1.0, 0.0) };
    max_abs_diff(a, &(b * phase))
}

/// Embeds a `k`-qubit operator acting on `qubits` (little-endian) into `n` qubits.
pub fn embed(op: &CMatrix, qubits: &[usize], n: usize) -> CMatrix {
    let dim = 1usize << n;
    let k = qubits.len();
    let mut out = CMatrix::zeros(dim, dim);
    let rest_mask: usize = (0..n).filter(|q| !qubits.contains(q)).map(|q| 1 << q).sum();
    for col in 0..dim {
        let mut local_col = 0usize;
        for (j, &q) in qubits.iter().enumerate() {
            local_col |= (col >> q & 1) << j;
        }
        let base = col & rest_mask;
        for local_row in 0..(1usize << k) {
            let v = op[(local_row, local_col)];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut row = base;
            for (j, &q) in qubits.iter().enumerate() {
                row |= (local_row >> j & 1) << q;
            }
            out[(row, col)] += v;
        }
    }
    out
}

pub fn is_unitary(u: &CMatrix, tol: f64) -> bool {
    u.is_square() && max_abs_diff(&(u.adjoint() * u), &identity(u.nrows())) <= tol
}
