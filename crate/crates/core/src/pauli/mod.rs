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

//! Exact Pauli-string algebra with polynomial coupling coefficients.

mod coefficient;
mod string;
mod sum;

pub use coefficient::{Coefficient, Couplings, Monomial, Symbol};
pub use string::{Pauli, PauliString, MAX_SITES};
pub use sum::{PauliSum, MAX_DENSE_SITES};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PauliError {
    #[error("invalid site count {0}")]
    SiteCount(usize),
    #[error("mask bits beyond {n_sites} sites")]
    MaskOutOfRange { n_sites: usize },
    #[error("site {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("site {0} listed twice")]
    RepeatedSite(usize),
    #[error("invalid pauli character `{0}`")]
    BadChar(char),
    #[error("site count mismatch: {0} vs {1}")]
    SiteMismatch(usize, usize),
    #[error("coupling `{0}` has no value")]
    Unbound(&'static str),
    #[error("string is not Hermitian")]
    NonHermitian,
    #[error("{0} sites is too many for a dense matrix")]
    TooManySites(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Sum over the Heisenberg exchange `σ_a·σ_b` with coefficient `c`.
pub fn heisenberg_pair(n: usize, a: usize, b: usize, c: &Coefficient) -> Result<PauliSum, PauliError> {
    let mut s = PauliSum::zero(n);
    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
        s.add_term(PauliString::from_ops(n, &[(a, p), (b, p)])?, c)?;
    }
    Ok(s)
}

/// Scalar spin chirality `σ_i·(σ_j×σ_k)` with coefficient `c`.
pub fn chirality(n: usize, i: usize, j: usize, k: usize, c: &Coefficient) -> Result<PauliSum, PauliError> {
    use Pauli::{X, Y, Z};
    let mut s = PauliSum::zero(n);
    for (a, b, d) in [(X, Y, Z), (Y, Z, X), (Z, X, Y)] {
        s.add_term(PauliString::from_ops(n, &[(i, a), (j, b), (k, d)])?, c)?;
        s.add_term(PauliString::from_ops(n, &[(i, a), (j, d), (k, b)])?, &c.scale(-1.0))?;
    }
    Ok(s)
}

/// The X-component `χ_ijk = X_i (Y_j Z_k − Z_j Y_k)` of the chirality.
pub fn chirality_component(n: usize, i: usize, j: usize, k: usize, c: &Coefficient) -> Result<PauliSum, PauliError> {
    use Pauli::{X, Y, Z};
    let mut s = PauliSum::zero(n);
    s.add_term(PauliString::from_ops(n, &[(i, X), (j, Y), (k, Z)])?, c)?;
    s.add_term(PauliString::from_ops(n, &[(i, X), (j, Z), (k, Y)])?, &c.scale(-1.0))?;
    Ok(s)
}
