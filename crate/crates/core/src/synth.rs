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


//! Gate-level synthesis: Pauli rotations, two-qubit KAK, encoded triangle
//! blocks, transpilation to {RZ, √X, CNOT} and gate counting.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use thiserror::Error;

use crate::encoder::{extract_effective_on, CliffordCircuit, CliffordGate, EncoderError};
use crate::linalg::{self, c, CMatrix};
use crate::pauli::{Couplings, Pauli, PauliError, PauliString, PauliSum};
use crate::symmetry::{classify, GeneratorSpace, SymmetryError};

pub type Mat2 = Matrix2<Complex64>;
type Mat4 = Matrix4<Complex64>;

const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("qubit {0} out of range")]
    QubitOutOfRange(usize),
    #[error("CNOT control and target coincide on qubit {0}")]
    RepeatedQubit(usize),
    #[error("matrix is not a {0}x{0} unitary")]
    NotUnitary(usize),
    #[error("rotation about the identity string")]
    Identity,
    #[error("operator is not confined to a single symmetry class")]
    NotConfined,
    #[error("effective register has {0} sites, expected at most 2")]
    EffectiveTooLarge(usize),
    #[error("circuit size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("synthesis failed: {0}")]
    Internal(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Encoder(#[from] EncoderError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    /// `diag(e^{-iθ/2}, e^{iθ/2})`.
    Rz { qubit: usize, angle: f64 },
    /// `(1/2)[[1+i, 1-i], [1-i, 1+i]]`.
    SqrtX(usize),
    H(usize),
    Cnot { control: usize, target: usize },
    /// Arbitrary single-qubit unitary; removed by [`transpile`].
    U1q { qubit: usize, matrix: Mat2 },
}

pub fn rz_matrix(angle: f64) -> Mat2 {
    Mat2::new(Complex64::from_polar(1.0, -angle / 2.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, angle / 2.0))
}

pub fn sx_matrix() -> Mat2 {
    Mat2::new(c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5))
}

pub fn h_matrix() -> Mat2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Mat2::new(c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0))
}

pub fn rx_matrix(angle: f64) -> Mat2 {
    let (co, si) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    Mat2::new(c(co, 0.0), c(0.0, -si), c(0.0, -si), c(co, 0.0))
}

pub fn ry_matrix(angle: f64) -> Mat2 {
    let (co, si) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    Mat2::new(c(co, 0.0), c(-si, 0.0), c(si, 0.0), c(co, 0.0))
}

fn to_dyn2(m: &Mat2) -> CMatrix {
    CMatrix::from_fn(2, 2, |r, k| m[(r, k)])
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Rz { qubit, .. } | Gate::U1q { qubit, .. } | Gate::SqrtX(qubit) | Gate::H(qubit) => vec![qubit],
        }
    }

    pub fn single_qubit_matrix(&self) -> Option<Mat2> {
        match *self {
            Gate::Rz { angle, .. } => Some(rz_matrix(angle)),
            Gate::SqrtX(_) => Some(sx_matrix()),
            Gate::H(_) => Some(h_matrix()),
            Gate::U1q { matrix, .. } => Some(matrix),
            Gate::Cnot { .. } => None,
        }
    }

    /// Matrix on `qubits()`, little-endian.
    pub fn matrix(&self) -> CMatrix {
        match self.single_qubit_matrix() {
            Some(m) => to_dyn2(&m),
            None => CliffordGate::Cnot(0, 1).matrix(),
        }
    }

    pub fn adjoint(&self) -> Gate {
        match *self {
            Gate::Rz { qubit, angle } => Gate::Rz { qubit, angle: -angle },
            Gate::SqrtX(q) => Gate::U1q { qubit: q, matrix: sx_matrix().adjoint() },
            Gate::U1q { qubit, matrix } => Gate::U1q { qubit, matrix: matrix.adjoint() },
            g => g,
        }
    }

    pub fn is_clifford_rz(&self) -> Option<bool> {
        match *self {
            Gate::Rz { angle, .. } => Some(is_clifford_angle(angle)),
            _ => None,
        }
    }

    fn remapped(&self, map: &[usize]) -> Gate {
        match *self {
            Gate::Rz { qubit, angle } => Gate::Rz { qubit: map[qubit], angle },
            Gate::SqrtX(q) => Gate::SqrtX(map[q]),
            Gate::H(q) => Gate::H(map[q]),
            Gate::Cnot { control, target } => Gate::Cnot { control: map[control], target: map[target] },
            Gate::U1q { qubit, matrix } => Gate::U1q { qubit: map[qubit], matrix },
        }
    }
}

/// True when `angle` is a multiple of π/2 within 1e-12.
pub fn is_clifford_angle(angle: f64) -> bool {
    let r = angle.rem_euclid(FRAC_PI_2);
    r.min(FRAC_PI_2 - r) <= ZERO_TOL
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Rz { qubit, angle } => write!(f, "RZ {} {:?}", qubit, angle),
            Gate::SqrtX(q) => write!(f, "SQRT_X {}", q),
            Gate::H(q) => write!(f, "H {}", q),
            Gate::Cnot { control, target } => write!(f, "CNOT {} {}", control, target),
            Gate::U1q { qubit, matrix } => {
                write!(f, "U1Q {}", qubit)?;
                for r in 0..2 {
                    for k in 0..2 {
                        write!(f, " {:?} {:?}", matrix[(r, k)].re, matrix[(r, k)].im)?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Gates in time order plus a tracked global phase.
#[derive(Clone, Debug, PartialEq)]
pub struct GateCircuit {
    n: usize,
    gates: Vec<Gate>,
    global_phase: f64,
}

impl GateCircuit {
    pub fn new(n_qubits: usize) -> Self {
        GateCircuit { n: n_qubits, gates: Vec::new(), global_phase: 0.0 }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self, SynthError> {
        let mut c = GateCircuit::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, g: Gate) -> Result<(), SynthError> {
        let qs = g.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.n) {
            return Err(SynthError::QubitOutOfRange(q));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(SynthError::RepeatedQubit(qs[0]));
        }
        self.gates.push(g);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn add_phase(&mut self, phase: f64) {
        self.global_phase = (self.global_phase + phase).rem_euclid(2.0 * PI);
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cnot { .. })).count()
    }

    /// Appends `other` after `self`.
    pub fn append(&mut self, other: &GateCircuit) -> Result<(), SynthError> {
        if other.n != self.n {
            return Err(SynthError::SizeMismatch(self.n, other.n));
        }
        self.gates.extend_from_slice(&other.gates);
        self.add_phase(other.global_phase);
        Ok(())
    }

    /// Appends `other` with its qubit `k` placed on `map[k]`.
    pub fn append_mapped(&mut self, other: &GateCircuit, map: &[usize]) -> Result<(), SynthError> {
        if map.len() < other.n {
            return Err(SynthError::SizeMismatch(other.n, map.len()));
        }
        for g in &other.gates {
            self.push(g.remapped(map))?;
        }
        self.add_phase(other.global_phase);
        Ok(())
    }

    pub fn inverse(&self) -> GateCircuit {
        GateCircuit {
            n: self.n,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
            global_phase: (-self.global_phase).rem_euclid(2.0 * PI),
        }
    }

    pub fn to_dense(&self) -> Result<CMatrix, SynthError> {
        if self.n > 10 {
            return Err(PauliError::TooManySites(self.n).into());
        }
        let mut u = linalg::identity(1 << self.n);
        for g in &self.gates {
            u = linalg::embed(&g.matrix(), &g.qubits(), self.n) * u;
        }
        Ok(u * Complex64::from_polar(1.0, self.global_phase))
    }

    /// Parses the dump format; the global phase is not stored in text.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self, SynthError> {
        let mut out = GateCircuit::new(n_qubits);
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| SynthError::Parse { line: idx + 1, msg };
            let parts: Vec<&str> = line.split_whitespace().collect();
            let q = |k: usize| -> Result<usize, SynthError> {
                parts.get(k).and_then(|s| s.parse().ok()).ok_or_else(|| err(format!("bad qubit in `{}`", line)))
            };
            let f = |k: usize| -> Result<f64, SynthError> {
                parts.get(k).and_then(|s| s.parse().ok()).ok_or_else(|| err(format!("bad number in `{}`", line)))
            };
            let g = match (parts[0], parts.len()) {
                ("RZ", 3) => Gate::Rz { qubit: q(1)?, angle: f(2)? },
                ("SQRT_X", 2) => Gate::SqrtX(q(1)?),
                ("H", 2) => Gate::H(q(1)?),
                ("CNOT", 3) => Gate::Cnot { control: q(1)?, target: q(2)? },
                ("U1Q", 10) => {
                    let mut m = Mat2::zeros();
                    for k in 0..4 {
                        m[(k / 2, k % 2)] = c(f(2 + 2 * k)?, f(3 + 2 * k)?);
                    }
                    Gate::U1q { qubit: q(1)?, matrix: m }
                }
                _ => return Err(err(format!("unknown gate `{}`", line))),
            };
            out.push(g).map_err(|e| err(e.to_string()))?;
        }
        Ok(out)
    }
}

impl fmt::Display for GateCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{}", g)?;
        }
        Ok(())
    }
}

/// Gate-level form of a Clifford circuit with the exact global phase.
pub fn from_clifford(cc: &CliffordCircuit) -> GateCircuit {
    let mut out = GateCircuit::new(cc.n_sites());
    for g in cc.gates() {
        match *g {
            CliffordGate::Cnot(a, b) => out.gates.push(Gate::Cnot { control: a, target: b }),
            CliffordGate::SqrtX(q) => {
                out.gates.push(Gate::SqrtX(q));
                out.add_phase(-FRAC_PI_4);
            }
            CliffordGate::SqrtY(q) => {
                let m = g.matrix();
                out.gates.push(Gate::U1q { qubit: q, matrix: Mat2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]) });
            }
            CliffordGate::SqrtZ(q) => out.gates.push(Gate::Rz { qubit: q, angle: FRAC_PI_2 }),
            CliffordGate::H(q) => out.gates.push(Gate::H(q)),
            CliffordGate::Swap(a, b) => {
                out.gates.push(Gate::Cnot { control: a, target: b });
                out.gates.push(Gate::Cnot { control: b, target: a });
                out.gates.push(Gate::Cnot { control: a, target: b });
            }
        }
    }
    out
}

/// `exp(-iθp)` by basis change and a CNOT parity ladder.
pub fn pauli_rotation(p: &PauliString, theta: f64) -> Result<GateCircuit, SynthError> {
    if p.is_identity() {
        return Err(SynthError::Identity);
    }
    let sign = p.sign().ok_or(PauliError::NonHermitian)?;
    let n = p.n_sites();
    let sites: Vec<usize> = (0..n).filter(|s| p.support() >> s & 1 == 1).collect();
    let mut pre = Vec::new();
    let mut post = Vec::new();
    for &s in &sites {
        match p.pauli_at(s) {
            Pauli::X => {
                pre.push(Gate::H(s));
                post.push(Gate::H(s));
            }
            Pauli::Y => {
                pre.push(Gate::SqrtX(s));
                post.push(Gate::SqrtX(s).adjoint());
            }
            _ => {}
        }
    }
    let ladder: Vec<Gate> = sites.windows(2).map(|w| Gate::Cnot { control: w[0], target: w[1] }).collect();
    let last = *sites.last().expect("non-identity string");
    let mut gates = pre;
    gates.extend(ladder.iter().copied());
    gates.push(Gate::Rz { qubit: last, angle: 2.0 * sign * theta });
    gates.extend(ladder.iter().rev().copied());
    gates.extend(post);
    GateCircuit::from_gates(n, gates)
}

fn to_mat4(u: &CMatrix) -> Mat4 {
    Mat4::from_fn(|r, k| u[(r, k)])
}

fn magic() -> Mat4 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (o, z, i) = (c(s, 0.0), c(0.0, 0.0), c(0.0, s));
    Mat4::new(o, i, z, z, z, z, i, o, z, z, i, -o, o, -i, z, z)
}

/// Cyclic Jacobi eigen-decomposition of a real symmetric 4×4 matrix; the
/// returned columns are the eigenvectors.
fn jacobi(mut a: Matrix4<f64>) -> Matrix4<f64> {
    let mut v = Matrix4::<f64>::identity();
    let scale = a.norm().max(1.0);
    for _ in 0..100 {
        let mut off = 0.0;
        for p in 0..4 {
            for q in p + 1..4 {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..4 {
            for q in p + 1..4 {
                if a[(p, q)].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let sg = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sg / (theta.abs() + (theta * theta + 1.0).sqrt());
                let co = 1.0 / (t * t + 1.0).sqrt();
                let si = t * co;
                for k in 0..4 {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = co * akp - si * akq;
                    a[(k, q)] = si * akp + co * akq;
                }
                for k in 0..4 {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = co * apk - si * aqk;
                    a[(q, k)] = si * apk + co * aqk;
                }
                for k in 0..4 {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = co * vkp - si * vkq;
                    v[(k, q)] = si * vkp + co * vkq;
                }
            }
        }
    }
    v
}

fn complexify(m: &Matrix4<f64>) -> Mat4 {
    m.map(|x| c(x, 0.0))
}

struct MagicSplit {
    ub: Mat4,
    p: Matrix4<f64>,
    lambda: [Complex64; 4],
}

/// Diagonalises `M = U_Bᵀ U_B` by a real orthogonal `P` with `det P = 1`.
fn magic_split(u: &Mat4) -> Result<MagicSplit, SynthError> {
    let b = magic();
    let ub = b.adjoint() * u * b;
    let m = ub.transpose() * ub;
    let re = m.map(|z| z.re);
    let im = m.map(|z| z.im);
    for mix in [0.577_215_664_901_532_9, 1.324_717_957_244_746, 0.318_309_886_183_790_7, 2.718_281_828_459_045] {
        let mut p = jacobi(re + im * mix);
        if p.determinant() < 0.0 {
            for k in 0..4 {
                p[(k, 0)] = -p[(k, 0)];
            }
        }
        let pc = complexify(&p);
        let d = pc.transpose() * m * pc;
        let mut off = 0.0f64;
        for r in 0..4 {
            for k in 0..4 {
                if r != k {
                    off = off.max(d[(r, k)].norm());
                }
            }
        }
        if off <= 1e-11 {
            return Ok(MagicSplit { ub, p, lambda: [d[(0, 0)], d[(1, 1)], d[(2, 2)], d[(3, 3)]] });
        }
    }
    Err(SynthError::Internal("magic-basis diagonalisation did not converge".into()))
}

/// Index map `perm` with `a[i] ≈ b[perm[i]]`.
fn match_spectra(a: &[Complex64; 4], b: &[Complex64; 4], tol: f64) -> Option<[usize; 4]> {
    let mut used = [false; 4];
    let mut perm = [0usize; 4];
    for (i, x) in a.iter().enumerate() {
        let j = (0..4).filter(|&j| !used[j]).min_by(|&j, &k| (x - b[j]).norm().total_cmp(&(x - b[k]).norm()))?;
        if (x - b[j]).norm() > tol {
            return None;
        }
        used[j] = true;
        perm[i] = j;
    }
    Some(perm)
}

const SPECTRUM_TOL: f64 = 1e-9;

/// A reference circuit with the same nonlocal content as the given spectrum,
/// using the fewest CNOTs that can produce it.
fn template(lambda: &[Complex64; 4]) -> GateCircuit {
    let mut t = GateCircuit::new(2);
    let one = c(1.0, 0.0);
    for s in [1.0, -1.0] {
        let sl = lambda.map(|z| z * s);
        if sl.iter().all(|z| (z - one).norm() <= SPECTRUM_TOL) {
            return t;
        }
    }
    let cnot_spec = [c(0.0, 1.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, -1.0)];
    for s in [1.0, -1.0] {
        let sl = lambda.map(|z| z * s);
        if match_spectra(&sl, &cnot_spec, SPECTRUM_TOL).is_some() {
            t.gates.push(Gate::Cnot { control: 0, target: 1 });
            return t;
        }
    }
    for s in [1.0, -1.0] {
        let sl = lambda.map(|z| z * s);
        if match_spectra(&sl, &sl.map(|z| z.conj()), SPECTRUM_TOL).is_some() {
            let mu1 = sl[0];
            let partner = (1..4).min_by(|&j, &k| (sl[j] - mu1.conj()).norm().total_cmp(&(sl[k] - mu1.conj()).norm())).unwrap_or(1);
            let mu2 = (1..4).find(|&j| j != partner).map(|j| sl[j]).unwrap_or(one);
            let (f1, f2) = (mu1.arg(), mu2.arg());
            let a = (f1 + f2) / 4.0;
            let cc = (f1 - f2) / 4.0;
            t.gates.extend_from_slice(&[
                Gate::Cnot { control: 0, target: 1 },
                Gate::U1q { qubit: 0, matrix: rx_matrix(-2.0 * a) },
                Gate::Rz { qubit: 1, angle: -2.0 * cc },
                Gate::Cnot { control: 0, target: 1 },
            ]);
            return t;
        }
    }
    let mut th = lambda.map(|z| z.arg() / 2.0);
    let sum: f64 = th.iter().sum();
    th[3] -= sum;
    let a = (th[0] + th[2]) / 2.0;
    let b = (th[1] + th[2]) / 2.0;
    let cc = (th[0] + th[1]) / 2.0;
    t.gates.extend_from_slice(&[
        Gate::Rz { qubit: 1, angle: -FRAC_PI_2 },
        Gate::Cnot { control: 1, target: 0 },
        Gate::Rz { qubit: 0, angle: FRAC_PI_2 - 2.0 * cc },
        Gate::U1q { qubit: 1, matrix: ry_matrix(2.0 * a - FRAC_PI_2) },
        Gate::Cnot { control: 0, target: 1 },
        Gate::U1q { qubit: 1, matrix: ry_matrix(FRAC_PI_2 - 2.0 * b) },
        Gate::Cnot { control: 1, target: 0 },
        Gate::Rz { qubit: 0, angle: FRAC_PI_2 },
    ]);
    t
}

/// Splits `k ≈ g · (a1 ⊗ a0)` with `a0` on qubit 0.
fn kron_factor(k: &Mat4) -> (Mat2, Mat2) {
    let (mut best, mut br, mut bc) = (-1.0, 0, 0);
    for r in 0..4 {
        for col in 0..4 {
            if k[(r, col)].norm() > best {
                best = k[(r, col)].norm();
                br = r;
                bc = col;
            }
        }
    }
    let (r0, r1, c0, c1) = (br & 1, br >> 1, bc & 1, bc >> 1);
    let a0 = Mat2::from_fn(|i, j| k[(i + 2 * r1, j + 2 * c1)]);
    let a1 = Mat2::from_fn(|i, j| k[(r0 + 2 * i, c0 + 2 * j)]);
    let norm = |m: Mat2| m / m.determinant().sqrt();
    (norm(a1), norm(a0))
}

fn dense4(c: &GateCircuit) -> Mat4 {
    to_mat4(&c.to_dense().expect("two-qubit circuit"))
}

/// Sets the global phase of `circ` so that it equals `target` and checks the residual.
fn fix_phase(circ: &mut GateCircuit, target: &CMatrix, tol: f64) -> Result<(), SynthError> {
    circ.global_phase = 0.0;
    let m = circ.to_dense()?;
    let overlap: Complex64 = m.iter().zip(target.iter()).map(|(x, y)| x.conj() * y).sum();
    circ.global_phase = overlap.arg().rem_euclid(2.0 * PI);
    let err = linalg::max_abs_diff(&(m * Complex64::from_polar(1.0, circ.global_phase)), target);
    if err > tol {
        return Err(SynthError::Internal(format!("reconstruction error {:e}", err)));
    }
    Ok(())
}

/// Two-qubit synthesis with at most three CNOTs; qubit 0 is the low bit of
/// the matrix index.
pub fn kak_su4(u: &CMatrix) -> Result<GateCircuit, SynthError> {
    if u.nrows() != 4 || !linalg::is_unitary(u, 1e-10) {
        return Err(SynthError::NotUnitary(4));
    }
    let u4 = to_mat4(u);
    let un = u4 / u4.determinant().powf(0.25);
    let us = magic_split(&un)?;
    let tc = template(&us.lambda);
    let t = dense4(&tc);
    let t = t / t.determinant().powf(0.25);
    let ts0 = magic_split(&t)?;

    let mut found = None;
    for s in [c(1.0, 0.0), c(0.0, 1.0)] {
        let lt = ts0.lambda.map(|z| z * s * s);
        if let Some(perm) = match_spectra(&us.lambda, &lt, SPECTRUM_TOL) {
            found = Some((s, perm, lt));
            break;
        }
    }
    let (s, perm, lt) = found.ok_or_else(|| SynthError::Internal("template spectrum mismatch".into()))?;
    let tb = ts0.ub * s;
    let dt = lt.map(|z| z.sqrt());
    let o1t = tb * complexify(&ts0.p) * Mat4::from_diagonal(&dt.map(|z| z.inv()).into());
    let mut pi = Matrix4::<f64>::zeros();
    for (i, &j) in perm.iter().enumerate() {
        pi[(j, i)] = 1.0;
    }
    let d: [Complex64; 4] = std::array::from_fn(|i| dt[perm[i]]);
    let mut p = us.p;
    let mut rb = ts0.p * pi * p.transpose();
    if rb.determinant() < 0.0 {
        for k in 0..4 {
            p[(k, 0)] = -p[(k, 0)];
        }
        rb = ts0.p * pi * p.transpose();
    }
    let o1 = us.ub * complexify(&p) * Mat4::from_diagonal(&d.map(|z| z.inv()).into());
    let lb = o1 * complexify(&pi.transpose()) * o1t.transpose();
    let b = magic();
    let left = b * lb * b.adjoint();
    let right = b * complexify(&rb) * b.adjoint();
    let (l1, l0) = kron_factor(&left);
    let (r1, r0) = kron_factor(&right);

    let mut out = GateCircuit::new(2);
    out.gates.push(Gate::U1q { qubit: 0, matrix: r0 });
    out.gates.push(Gate::U1q { qubit: 1, matrix: r1 });
    out.gates.extend_from_slice(&tc.gates);
    out.gates.push(Gate::U1q { qubit: 0, matrix: l0 });
    out.gates.push(Gate::U1q { qubit: 1, matrix: l1 });
    fix_phase(&mut out, u, 1e-8)?;
    Ok(out)
}

fn bound_dense(h: &PauliSum) -> Result<CMatrix, SynthError> {
    Ok(h.to_dense(&Couplings::new())?)
}

/// Propagator of a confined operator through a given encoder: encoder, a
/// rotation on the symmetry wire, a KAK block on the two effective sites,
/// decoder. `h` must have constant coefficients.
pub fn encoded_block(
    h: &PauliSum,
    encoder: &CliffordCircuit,
    symmetry_wire: usize,
    effective_sites: [usize; 2],
    tau: f64,
) -> Result<GateCircuit, SynthError> {
    let n = h.n_sites();
    let split = extract_effective_on(h, encoder, symmetry_wire, &effective_sites)?;
    let enc = from_clifford(encoder);
    let mut out = GateCircuit::new(n);
    out.append(&enc)?;
    if !split.symmetry.is_empty() {
        let g = linalg::expm_hermitian(&bound_dense(&split.symmetry)?, tau);
        out.push(Gate::U1q { qubit: symmetry_wire, matrix: Mat2::new(g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]) })?;
    }
    if !split.effective.is_empty() {
        let e = linalg::expm_hermitian(&bound_dense(&split.effective)?, tau);
        out.append_mapped(&kak_su4(&e)?, &effective_sites)?;
    }
    out.append(&enc.inverse())?;
    Ok(out)
}

/// Exact propagator `exp(-iτh)` of a three-site operator confined to a
/// canonical symmetry class of the ordered triple; the first site of the
/// triple is the symmetry wire.
pub fn triangle_block(h: &PauliSum, sites: [usize; 3], tau: f64) -> Result<GateCircuit, SynthError> {
    let classes = classify(h, sites)?;
    let l = *classes.iter().next().ok_or(SynthError::NotConfined)?;
    let u = crate::encoder::canonical_encoder(l, sites, h.n_sites())?;
    encoded_block(h, &u, sites[0], [sites[1], sites[2]], tau)
}

/// As [`triangle_block`] for a custom symmetry space, using a synthesized encoder.
pub fn symmetric_block(h: &PauliSum, space: &GeneratorSpace, symmetry_wire: usize, tau: f64) -> Result<GateCircuit, SynthError> {
    let u = crate::encoder::synthesize_encoder(space, symmetry_wire)?;
    let mut mask = h.support() | space.basis().iter().fold(0, |m, b| m | b.support());
    for g in u.gates() {
        for q in g.qubits() {
            mask |= 1 << q;
        }
    }
    mask &= !(1u64 << symmetry_wire);
    let others: Vec<usize> = (0..h.n_sites()).filter(|s| mask >> s & 1 == 1).collect();
    let eff = match others.as_slice() {
        [a, b] => [*a, *b],
        [a] => {
            let spare = (0..h.n_sites()).find(|s| s != a && *s != symmetry_wire).ok_or(SynthError::EffectiveTooLarge(1))?;
            [(*a).min(spare), (*a).max(spare)]
        }
        other => return Err(SynthError::EffectiveTooLarge(other.len())),
    };
    encoded_block(h, &u, symmetry_wire, eff, tau)
}

/// `exp(-iφ(XX+YY+ZZ))` on qubits `a`, `b` with three CNOTs.
pub fn heisenberg_edge_block(a: usize, b: usize, n: usize, phi: f64) -> Result<GateCircuit, SynthError> {
    let h = crate::pauli::heisenberg_pair(2, 0, 1, &1.0.into())?;
    let u = linalg::expm_hermitian(&bound_dense(&h)?, phi);
    let mut out = GateCircuit::new(n);
    out.append_mapped(&kak_su4(&u)?, &[a, b])?;
    Ok(out)
}

/// `exp(-iφ Z_i(X_jY_k − Y_jX_k))`: both strings are made diagonal by one
/// CNOT and a √X, then share a parity ladder.
pub fn chirality_gadget(i: usize, j: usize, k: usize, n: usize, phi: f64) -> Result<GateCircuit, SynthError> {
    let sx_dg = Gate::SqrtX(j).adjoint();
    GateCircuit::from_gates(
        n,
        vec![
            Gate::Cnot { control: j, target: k },
            Gate::SqrtX(j),
            Gate::Cnot { control: i, target: j },
            Gate::Rz { qubit: j, angle: -2.0 * phi },
            Gate::Cnot { control: j, target: k },
            Gate::Rz { qubit: k, angle: 2.0 * phi },
            Gate::Cnot { control: j, target: k },
            Gate::Cnot { control: i, target: j },
            sx_dg,
            Gate::Cnot { control: j, target: k },
        ],
    )
}

/// `exp(-iφ X_i(Y_jZ_k − Z_jY_k))`, the gadget conjugated by the cyclic
/// Clifford X→Z, Y→X, Z→Y on all three sites.
pub fn chirality_component_block(i: usize, j: usize, k: usize, n: usize, phi: f64) -> Result<GateCircuit, SynthError> {
    let w = Mat2::new(c(0.5, 0.5), c(0.5, 0.5), c(-0.5, 0.5), c(0.5, -0.5));
    let mut out = GateCircuit::new(n);
    for q in [i, j, k] {
        out.push(Gate::U1q { qubit: q, matrix: w })?;
    }
    out.append(&chirality_gadget(i, j, k, n, phi)?)?;
    for q in [i, j, k] {
        out.push(Gate::U1q { qubit: q, matrix: w.adjoint() })?;
    }
    Ok(out)
}

/// Counts of basis gates; other gate kinds are not counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub cnot: usize,
    pub rz_nonclifford: usize,
    pub rz_clifford: usize,
    pub sqrtx: usize,
}

impl GateCounts {
    pub const CSV_HEADER: &'static str = "cnot,rz_nc,rz_c,sqrtx";

    pub fn csv(&self) -> String {
        format!("{},{},{},{}", self.cnot, self.rz_nonclifford, self.rz_clifford, self.sqrtx)
    }
}

impl std::ops::Add for GateCounts {
    type Output = GateCounts;
    fn add(self, o: GateCounts) -> GateCounts {
        GateCounts {
            cnot: self.cnot + o.cnot,
            rz_nonclifford: self.rz_nonclifford + o.rz_nonclifford,
            rz_clifford: self.rz_clifford + o.rz_clifford,
            sqrtx: self.sqrtx + o.sqrtx,
        }
    }
}

pub fn count_gates(c: &GateCircuit) -> GateCounts {
    let mut out = GateCounts::default();
    for g in &c.gates {
        match g {
            Gate::Cnot { .. } => out.cnot += 1,
            Gate::SqrtX(_) => out.sqrtx += 1,
            Gate::Rz { angle, .. } => {
                if is_clifford_angle(*angle) {
                    out.rz_clifford += 1;
                } else {
                    out.rz_nonclifford += 1;
                }
            }
            _ => {}
        }
    }
    out
}

fn near_identity(m: &Mat2) -> Option<f64> {
    if m[(0, 1)].norm() <= ZERO_TOL && m[(1, 0)].norm() <= ZERO_TOL && (m[(0, 0)] - m[(1, 1)]).norm() <= ZERO_TOL {
        Some(m[(0, 0)].arg())
    } else {
        None
    }
}

fn wrap_angle(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI + ZERO_TOL {
        PI
    } else {
        r
    }
}

/// ZXZXZ Euler form `RZ·√X·RZ·√X·RZ` with the one-√X and diagonal
/// special cases; returns the gates in time order and the phase of `m`
/// relative to their product.
pub fn euler_zxzxz(qubit: usize, m: &Mat2) -> (Vec<Gate>, f64) {
    let det = m.determinant();
    let v = m * Complex64::from_polar(1.0, -det.arg() / 2.0);
    let mut gates = Vec::new();
    let rz = |angle: f64, gates: &mut Vec<Gate>| {
        let a = wrap_angle(angle);
        if a.abs() > ZERO_TOL {
            gates.push(Gate::Rz { qubit, angle: a });
        }
    };
    if v[(1, 0)].norm() <= ZERO_TOL {
        rz(v[(1, 1)].arg() - v[(0, 0)].arg(), &mut gates);
    } else {
        let theta = 2.0 * v[(1, 0)].norm().atan2(v[(0, 0)].norm());
        let (phi, lam) = if v[(0, 0)].norm() <= ZERO_TOL {
            (2.0 * v[(1, 0)].arg(), 0.0)
        } else {
            (v[(1, 1)].arg() + v[(1, 0)].arg(), v[(1, 1)].arg() - v[(1, 0)].arg())
        };
        if (theta - FRAC_PI_2).abs() <= ZERO_TOL {
            rz(lam - FRAC_PI_2, &mut gates);
            gates.push(Gate::SqrtX(qubit));
            rz(phi + FRAC_PI_2, &mut gates);
        } else {
            rz(lam, &mut gates);
            gates.push(Gate::SqrtX(qubit));
            rz(theta + PI, &mut gates);
            gates.push(Gate::SqrtX(qubit));
            rz(phi + PI, &mut gates);
        }
    }
    let mut prod = Mat2::identity();
    for g in &gates {
        prod = g.single_qubit_matrix().expect("single-qubit gate") * prod;
    }
    let overlap: Complex64 = prod.iter().zip(m.iter()).map(|(x, y)| x.conj() * y).sum();
    (gates, overlap.arg())
}

#[derive(Clone, Copy)]
enum Slot {
    One(usize, Mat2),
    Cnot(usize, usize),
}

impl Slot {
    fn touches(&self, q: usize) -> bool {
        match *self {
            Slot::One(a, _) => a == q,
            Slot::Cnot(a, b) => a == q || b == q,
        }
    }
}

struct Fuser {
    out: Vec<Option<Slot>>,
    last: Vec<Option<usize>>,
    pending: Vec<Option<Mat2>>,
    phase: f64,
}

impl Fuser {
    fn rescan(&mut self, q: usize, from: usize) {
        self.last[q] = (0..from).rev().find(|&i| self.out[i].map_or(false, |s| s.touches(q)));
    }

    /// Drops a pending matrix that is a pure phase; returns whether the
    /// qubit is clear.
    fn settle(&mut self, q: usize) -> bool {
        match self.pending[q] {
            None => true,
            Some(m) => match near_identity(&m) {
                Some(ph) => {
                    self.phase += ph;
                    self.pending[q] = None;
                    true
                }
                None => false,
            },
        }
    }

    fn flush(&mut self, q: usize) {
        if !self.settle(q) {
            let m = self.pending[q].take().expect("pending matrix");
            self.out.push(Some(Slot::One(q, m)));
            self.last[q] = Some(self.out.len() - 1);
        }
    }

    fn reopen(&mut self, q: usize) {
        if let Some(i) = self.last[q] {
            if let Some(Slot::One(_, m)) = self.out[i] {
                self.out[i] = None;
                self.pending[q] = Some(match self.pending[q] {
                    Some(p) => p * m,
                    None => m,
                });
                self.rescan(q, i);
            }
        }
    }

    fn cnot(&mut self, ctl: usize, tgt: usize) {
        let clear = self.settle(ctl) & self.settle(tgt);
        if clear {
            if let (Some(i), Some(j)) = (self.last[ctl], self.last[tgt]) {
                if i == j && matches!(self.out[i], Some(Slot::Cnot(a, b)) if a == ctl && b == tgt) {
                    self.out[i] = None;
                    self.rescan(ctl, i);
                    self.rescan(tgt, i);
                    self.reopen(ctl);
                    self.reopen(tgt);
                    return;
                }
            }
        }
        self.flush(ctl);
        self.flush(tgt);
        self.out.push(Some(Slot::Cnot(ctl, tgt)));
        self.last[ctl] = Some(self.out.len() - 1);
        self.last[tgt] = Some(self.out.len() - 1);
    }
}

/// Rewrites a circuit into {RZ, √X, CNOT}: single-qubit runs are fused and
/// re-expressed in ZXZXZ form, adjacent identical CNOTs cancel, and trivial
/// rotations are dropped. The action, including global phase, is preserved.
pub fn transpile(circ: &GateCircuit) -> GateCircuit {
    let n = circ.n;
    let mut f = Fuser {
        out: Vec::with_capacity(circ.gates.len()),
        last: vec![None; n],
        pending: vec![None; n],
        phase: 0.0,
    };
    for g in &circ.gates {
        match *g {
            Gate::Cnot { control, target } => f.cnot(control, target),
            _ => {
                let q = g.qubits()[0];
                let m = g.single_qubit_matrix().expect("single-qubit gate");
                f.pending[q] = Some(match f.pending[q] {
                    Some(p) => m * p,
                    None => m,
                });
            }
        }
    }
    for q in 0..n {
        f.flush(q);
    }
    let mut out = GateCircuit::new(n);
    out.global_phase = circ.global_phase;
    out.add_phase(f.phase);
    for slot in f.out.into_iter().flatten() {
        match slot {
            Slot::Cnot(a, b) => out.gates.push(Gate::Cnot { control: a, target: b }),
            Slot::One(q, m) => {
                let (gates, ph) = euler_zxzxz(q, &m);
                out.gates.extend(gates);
                out.add_phase(ph);
            }
        }
    }
    out
}
