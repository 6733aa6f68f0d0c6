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

//! Clifford encoders that concentrate a symmetry space on a single wire.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::linalg::{self, c, CMatrix};
use crate::pauli::{Pauli, PauliError, PauliString, PauliSum};
use crate::symmetry::{algebra_type, AlgebraType, GeneratorSpace, SymmetryError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncoderError {
    #[error("qubit {0} out of range")]
    QubitOutOfRange(usize),
    #[error("class index {0} not in 1..=4")]
    BadClass(u8),
    #[error("generator space is not su(2)")]
    NotSu2,
    #[error("generator space basis is not made of single Pauli strings")]
    NotPauliBasis,
    #[error("encoder synthesis failed: {0}")]
    Synthesis(String),
    #[error("conjugated operator does not split across the symmetry wire: {0}")]
    SplitFailed(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Clifford gates; the square roots are `exp(-iπP/4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CliffordGate {
    Cnot(usize, usize),
    SqrtX(usize),
    SqrtY(usize),
    SqrtZ(usize),
    Swap(usize, usize),
    H(usize),
}

impl CliffordGate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CliffordGate::Cnot(a, b) | CliffordGate::Swap(a, b) => vec![a, b],
            CliffordGate::SqrtX(q) | CliffordGate::SqrtY(q) | CliffordGate::SqrtZ(q) | CliffordGate::H(q) => vec![q],
        }
    }

    /// 2×2 or 4×4 matrix on `qubits()` (little-endian).
    pub fn matrix(&self) -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            CliffordGate::SqrtX(_) => CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(0.0, -s), c(0.0, -s), c(s, 0.0)]),
            CliffordGate::SqrtY(_) => CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(-s, 0.0), c(s, 0.0), c(s, 0.0)]),
            CliffordGate::SqrtZ(_) => CMatrix::from_row_slice(2, 2, &[c(s, -s), c(0.0, 0.0), c(0.0, 0.0), c(s, s)]),
            CliffordGate::H(_) => CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]),
            CliffordGate::Cnot(..) => {
                // qubit 0 of the pair is the control.
                let mut m = CMatrix::zeros(4, 4);
                for b in 0..4usize {
                    let out = if b & 1 == 1 { b ^ 2 } else { b };
                    m[(out, b)] = c(1.0, 0.0);
                }
                m
            }
            CliffordGate::Swap(..) => {
                let mut m = CMatrix::zeros(4, 4);
                for b in 0..4usize {
                    let out = (b & 1) << 1 | (b >> 1);
                    m[(out, b)] = c(1.0, 0.0);
                }
                m
            }
        }
    }

    fn image(&self, n: usize, site: usize, p: Pauli) -> Result<PauliString, PauliError> {
        use Pauli::{I, X, Y, Z};
        let single = |q: usize, p: Pauli, neg: bool| -> Result<PauliString, PauliError> {
            let s = PauliString::single(n, q, p)?;
            Ok(if neg { s.with_phase(2) } else { s })
        };
        let pair = |a: (usize, Pauli), b: (usize, Pauli)| PauliString::from_ops(n, &[a, b]);
        match *self {
            CliffordGate::H(_) => match p {
                X => single(site, Z, false),
                Z => single(site, X, false),
                Y => single(site, Y, true),
                I => Ok(PauliString::identity(n)),
            },
            CliffordGate::SqrtX(_) => match p {
                X => single(site, X, false),
                Y => single(site, Z, false),
                Z => single(site, Y, true),
                I => Ok(PauliString::identity(n)),
            },
            CliffordGate::SqrtY(_) => match p {
                Y => single(site, Y, false),
                Z => single(site, X, false),
                X => single(site, Z, true),
                I => Ok(PauliString::identity(n)),
            },
            CliffordGate::SqrtZ(_) => match p {
                Z => single(site, Z, false),
                X => single(site, Y, false),
                Y => single(site, X, true),
                I => Ok(PauliString::identity(n)),
            },
            CliffordGate::Cnot(ctl, tgt) => {
                if site == ctl {
                    match p {
                        X => pair((ctl, X), (tgt, X)),
                        Y => pair((ctl, Y), (tgt, X)),
                        Z => single(ctl, Z, false),
                        I => Ok(PauliString::identity(n)),
                    }
                } else {
                    match p {
                        X => single(tgt, X, false),
                        Y => pair((ctl, Z), (tgt, Y)),
                        Z => pair((ctl, Z), (tgt, Z)),
                        I => Ok(PauliString::identity(n)),
                    }
                }
            }
            CliffordGate::Swap(a, b) => {
                let other = if site == a { b } else { a };
                single(other, p, false)
            }
        }
    }

    /// `g p g†`.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString, PauliError> {
        let n = p.n_sites();
        let touched = self.qubits();
        let mut rest = *p;
        let mut images = Vec::with_capacity(2);
        for &q in &touched {
            let f = p.pauli_at(q);
            if f != Pauli::I {
                let clear = PauliString::single(n, q, f)?;
                // Removing a Hermitian factor on a disjoint site leaves the phase intact.
                rest = PauliString::new(n, rest.x_mask() & !clear.x_mask(), rest.z_mask() & !clear.z_mask(), rest.phase_exp())?;
                images.push(self.image(n, q, f)?);
            }
        }
        let mut out = rest;
        for im in images {
            out = out.multiply(&im)?;
        }
        Ok(out)
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliffordGate::Cnot(a, b) => write!(f, "CNOT {} {}", a, b),
            CliffordGate::SqrtX(q) => write!(f, "SQRT_X {}", q),
            CliffordGate::SqrtY(q) => write!(f, "SQRT_Y {}", q),
            CliffordGate::SqrtZ(q) => write!(f, "SQRT_Z {}", q),
            CliffordGate::Swap(a, b) => write!(f, "SWAP {} {}", a, b),
            CliffordGate::H(q) => write!(f, "H {}", q),
        }
    }
}

/// Gates in time order; the circuit operator is `g_k ⋯ g_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordCircuit {
    n: usize,
    gates: Vec<CliffordGate>,
}

impl CliffordCircuit {
    pub fn new(n_sites: usize) -> Self {
        CliffordCircuit { n: n_sites, gates: Vec::new() }
    }

    pub fn from_gates(n_sites: usize, gates: Vec<CliffordGate>) -> Result<Self, EncoderError> {
        let mut c = CliffordCircuit::new(n_sites);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, g: CliffordGate) -> Result<(), EncoderError> {
        let qs = g.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.n) {
            return Err(EncoderError::QubitOutOfRange(q));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(EncoderError::Synthesis(format!("two-qubit gate on repeated qubit {}", qs[0])));
        }
        self.gates.push(g);
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[CliffordGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, CliffordGate::Cnot(..))).count()
    }

    /// Runs `self` then `other`.
    pub fn then(&self, other: &CliffordCircuit) -> CliffordCircuit {
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        CliffordCircuit { n: self.n, gates }
    }

    /// The inverse circuit; square roots are inverted as their cubes.
    pub fn inverse(&self) -> CliffordCircuit {
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in self.gates.iter().rev() {
            match g {
                CliffordGate::SqrtX(_) | CliffordGate::SqrtY(_) | CliffordGate::SqrtZ(_) => {
                    gates.extend_from_slice(&[*g, *g, *g]);
                }
                _ => gates.push(*g),
            }
        }
        CliffordCircuit { n: self.n, gates }
    }

    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString, EncoderError> {
        if p.n_sites() != self.n {
            return Err(PauliError::SiteMismatch(self.n, p.n_sites()).into());
        }
        let mut out = *p;
        for g in &self.gates {
            out = g.conjugate(&out)?;
        }
        Ok(out)
    }

    pub fn conjugate_sum(&self, h: &PauliSum) -> Result<PauliSum, EncoderError> {
        let mut out = PauliSum::zero(self.n);
        for (p, c) in h.iter() {
            out.add_term(self.conjugate(p)?, c)?;
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Result<CMatrix, EncoderError> {
        if self.n > 10 {
            return Err(PauliError::TooManySites(self.n).into());
        }
        let mut u = linalg::identity(1 << self.n);
        for g in &self.gates {
            u = linalg::embed(&g.matrix(), &g.qubits(), self.n) * u;
        }
        Ok(u)
    }
}

impl fmt::Display for CliffordCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{}", g)?;
        }
        Ok(())
    }
}

pub(crate) fn parse_gate_line(line: &str) -> Result<(String, Vec<String>), String> {
    let mut it = line.split_whitespace();
    let name = it.next().ok_or("empty line")?.to_string();
    Ok((name, it.map(str::to_string).collect()))
}

impl CliffordCircuit {
    /// Parses the one-gate-per-line dump format for an `n_sites` register.
    pub fn parse(text: &str, n_sites: usize) -> Result<Self, EncoderError> {
        let mut c = CliffordCircuit::new(n_sites);
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| EncoderError::Parse { line: idx + 1, msg };
            let (name, args) = parse_gate_line(line).map_err(|m| err(m.to_string()))?;
            let nums: Result<Vec<usize>, _> = args.iter().map(|a| a.parse::<usize>()).collect();
            let nums = nums.map_err(|_| err(format!("bad qubit index in `{}`", line)))?;
            let g = match (name.as_str(), nums.as_slice()) {
                ("CNOT", [a, b]) => CliffordGate::Cnot(*a, *b),
                ("SWAP", [a, b]) => CliffordGate::Swap(*a, *b),
                ("SQRT_X", [q]) => CliffordGate::SqrtX(*q),
                ("SQRT_Y", [q]) => CliffordGate::SqrtY(*q),
                ("SQRT_Z", [q]) => CliffordGate::SqrtZ(*q),
                ("H", [q]) => CliffordGate::H(*q),
                _ => return Err(err(format!("unknown gate `{}`", line))),
            };
            c.push(g).map_err(|e| err(e.to_string()))?;
        }
        Ok(c)
    }
}

impl FromStr for CliffordGate {
    type Err = EncoderError;
    fn from_str(s: &str) -> Result<Self, EncoderError> {
        let c = CliffordCircuit::parse(s, crate::pauli::MAX_SITES)?;
        c.gates.first().copied().ok_or(EncoderError::Parse { line: 1, msg: "no gate".into() })
    }
}

/// The encoder U_l for the canonical class `l` on the ordered triple; the
/// first site of the triple is the symmetry wire.
pub fn canonical_encoder(l: u8, sites: [usize; 3], n: usize) -> Result<CliffordCircuit, EncoderError> {
    let [s1, s2, s3] = sites;
    let u2 = [CliffordGate::Cnot(s2, s3), CliffordGate::Cnot(s1, s2), CliffordGate::Cnot(s3, s1)];
    let gates: Vec<CliffordGate> = match l {
        1 => vec![],
        2 => u2.to_vec(),
        3 => [CliffordGate::SqrtZ(s1), CliffordGate::SqrtY(s1)].into_iter().chain(u2).collect(),
        4 => [CliffordGate::SqrtY(s1), CliffordGate::SqrtZ(s1)].into_iter().chain(u2).collect(),
        _ => return Err(EncoderError::BadClass(l)),
    };
    CliffordCircuit::from_gates(n, gates)
}

struct Builder {
    circuit: CliffordCircuit,
    tracked: Vec<PauliString>,
}

impl Builder {
    fn apply(&mut self, g: CliffordGate) -> Result<(), EncoderError> {
        self.circuit.push(g)?;
        for p in self.tracked.iter_mut() {
            *p = g.conjugate(p)?;
        }
        Ok(())
    }

    fn sites(mask: u64) -> Vec<usize> {
        (0..64).filter(|s| mask >> s & 1 == 1).collect()
    }
}

/// Finds a Clifford circuit mapping the first basis element to `±X_t` and the
/// third to `±Z_t`; the second then lands on `±Y_t`.
pub fn synthesize_encoder(g: &GeneratorSpace, target_wire: usize) -> Result<CliffordCircuit, EncoderError> {
    if algebra_type(g)? != AlgebraType::Su2 {
        return Err(EncoderError::NotSu2);
    }
    let strings = g.strings().ok_or(EncoderError::NotPauliBasis)?;
    let n = g.n_sites();
    if target_wire >= n {
        return Err(EncoderError::QubitOutOfRange(target_wire));
    }
    let t = target_wire;
    let mut b = Builder {
        circuit: CliffordCircuit::new(n),
        tracked: strings.to_vec(),
    };

    let a = b.tracked[0];
    if a.support() >> t & 1 == 0 {
        let q = Builder::sites(a.support())[0];
        b.apply(CliffordGate::Swap(q, t))?;
    }
    for s in Builder::sites(b.tracked[0].support()) {
        match b.tracked[0].pauli_at(s) {
            Pauli::Z => b.apply(CliffordGate::H(s))?,
            Pauli::Y => b.apply(CliffordGate::SqrtZ(s))?,
            _ => {}
        }
    }
    for s in Builder::sites(b.tracked[0].support()) {
        if s != t {
            b.apply(CliffordGate::Cnot(t, s))?;
        }
    }

    if b.tracked[2].pauli_at(t) == Pauli::Y {
        b.apply(CliffordGate::SqrtX(t))?;
    }
    for s in Builder::sites(b.tracked[2].support()) {
        if s == t {
            continue;
        }
        match b.tracked[2].pauli_at(s) {
            Pauli::X => b.apply(CliffordGate::H(s))?,
            Pauli::Y => b.apply(CliffordGate::SqrtX(s))?,
            _ => {}
        }
    }
    for s in Builder::sites(b.tracked[2].support()) {
        if s != t {
            b.apply(CliffordGate::Cnot(s, t))?;
        }
    }

    let expect = [Pauli::X, Pauli::Y, Pauli::Z];
    for (p, want) in b.tracked.iter().zip(expect) {
        if p.support() != 1 << t || p.pauli_at(t) != want {
            return Err(EncoderError::Synthesis(format!("generator ended as {}", p)));
        }
    }
    Ok(b.circuit)
}

/// Result of conjugating a confined Hamiltonian with its encoder.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveSplit {
    /// Part acting on the symmetry wire only, as a one-site operator.
    pub symmetry: PauliSum,
    /// Part acting on the remaining sites, relabelled to `0..effective_sites.len()`.
    pub effective: PauliSum,
    pub symmetry_wire: usize,
    pub effective_sites: Vec<usize>,
}

/// Splits `u h u†` into a symmetry-wire part and an effective part; the
/// effective register is the ascending list of the other sites touched by
/// `h` or `u`.
pub fn extract_effective(h: &PauliSum, u: &CliffordCircuit, symmetry_wire: usize) -> Result<EffectiveSplit, EncoderError> {
    let mut support = h.support();
    for g in u.gates() {
        for q in g.qubits() {
            support |= 1 << q;
        }
    }
    let others: Vec<usize> = (0..h.n_sites()).filter(|&s| s != symmetry_wire && support >> s & 1 == 1).collect();
    extract_effective_on(h, u, symmetry_wire, &others)
}

/// As [`extract_effective`] with an explicit ordering of the effective sites.
pub fn extract_effective_on(
    h: &PauliSum,
    u: &CliffordCircuit,
    symmetry_wire: usize,
    effective_sites: &[usize],
) -> Result<EffectiveSplit, EncoderError> {
    let n = h.n_sites();
    if symmetry_wire >= n {
        return Err(EncoderError::QubitOutOfRange(symmetry_wire));
    }
    let conj = u.conjugate_sum(h)?;
    let wire_mask = 1u64 << symmetry_wire;
    let eff_mask: u64 = effective_sites.iter().fold(0, |m, s| m | 1 << s);
    let mut wire_map = vec![usize::MAX; n];
    wire_map[symmetry_wire] = 0;
    let mut eff_map = vec![usize::MAX; n];
    for (k, &s) in effective_sites.iter().enumerate() {
        eff_map[s] = k;
    }
    let mut symmetry = PauliSum::zero(1);
    let mut effective = PauliSum::zero(effective_sites.len().max(1));
    for (p, c) in conj.iter() {
        let sup = p.support();
        if sup & !wire_mask == 0 {
            symmetry.add_term(p.relabel(&wire_map, 1)?, c)?;
        } else if sup & wire_mask == 0 && sup & !eff_mask == 0 {
            effective.add_term(p.relabel(&eff_map, effective_sites.len())?, c)?;
        } else {
            return Err(EncoderError::SplitFailed(p.label()));
        }
    }
    Ok(EffectiveSplit {
        symmetry,
        effective,
        symmetry_wire,
        effective_sites: effective_sites.to_vec(),
    })
}
