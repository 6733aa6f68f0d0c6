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


//! First- and second-order product-formula schedules and their circuits.

use std::collections::HashMap;

use thiserror::Error;

use crate::models::{Block, BlockKind, Cluster, Clustering, ModelError};
use crate::pauli::{Couplings, Pauli, PauliError, PauliString, PauliSum};
use crate::synth::{chirality_component_block, heisenberg_edge_block, pauli_rotation, symmetric_block, triangle_block, GateCircuit, SynthError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrotterError {
    #[error("unsupported order {0}")]
    Order(u8),
    #[error("at least one step is required")]
    NoSteps,
    #[error("{n_steps} steps is not a multiple of the schedule period {period}")]
    Period { n_steps: usize, period: usize },
    #[error("block on {0:?} cannot be synthesised in triangle mode")]
    NotConfined(Vec<usize>),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

impl From<TrotterError> for ModelError {
    fn from(e: TrotterError) -> Self {
        ModelError::Invalid(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SynthMode {
    /// Edge, field and chirality gadgets; triangle blocks are split into their terms.
    Conventional,
    /// Triangle blocks become exact encoded propagators.
    Triangle,
}

#[derive(Clone, Debug)]
pub struct TrotterSchedule<'a> {
    pub clustering: &'a Clustering,
    pub order: u8,
    pub n_steps: usize,
    pub total_time: f64,
    pub merged: bool,
    pub couplings: Couplings,
}

impl<'a> TrotterSchedule<'a> {
    pub fn new(clustering: &'a Clustering, order: u8, n_steps: usize, total_time: f64, couplings: Couplings) -> Result<Self, TrotterError> {
        if order != 1 && order != 2 {
            return Err(TrotterError::Order(order));
        }
        if n_steps == 0 {
            return Err(TrotterError::NoSteps);
        }
        let period = clustering.schedule_period;
        if n_steps % period != 0 {
            return Err(TrotterError::Period { n_steps, period });
        }
        Ok(TrotterSchedule { clustering, order, n_steps, total_time, merged: order == 2, couplings })
    }

    pub fn merged(mut self, merged: bool) -> Self {
        self.merged = merged;
        self
    }

    pub fn dt(&self) -> f64 {
        self.total_time / self.n_steps as f64
    }

    /// `(cluster index, duration)` pairs in time order.
    pub fn layers(&self) -> Vec<(usize, f64)> {
        let m = self.clustering.clusters.len();
        let dt = self.dt();
        let reps = self.n_steps / self.clustering.schedule_period;
        let mut out: Vec<(usize, f64)> = Vec::new();
        for _ in 0..reps {
            if self.order == 1 || m == 1 {
                out.extend((0..m).map(|c| (c, dt)));
            } else {
                out.extend((0..m - 1).map(|c| (c, dt / 2.0)));
                out.push((m - 1, dt));
                out.extend((0..m - 1).rev().map(|c| (c, dt / 2.0)));
            }
        }
        if self.merged {
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(out.len());
            for (c, t) in out {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += t,
                    _ => merged.push((c, t)),
                }
            }
            out = merged;
        }
        out
    }
}

/// Circuit for `exp(−i H_block τ)` with couplings bound.
pub fn block_circuit(b: &Block, n: usize, tau: f64, couplings: &Couplings, mode: SynthMode) -> Result<GateCircuit, TrotterError> {
    let h = b.hamiltonian.bind(couplings)?;
    let mut out = GateCircuit::new(n);
    if h.is_empty() {
        return Ok(out);
    }
    match b.kind {
        BlockKind::Field => out.append(&terms_circuit(&h, tau)?)?,
        BlockKind::Edge => out.append(&pair_circuit(&h, b.sites[0], b.sites[1], tau)?)?,
        BlockKind::Chirality => {
            let [i, j, k] = [b.sites[0], b.sites[1], b.sites[2]];
            let lead = PauliString::from_ops(n, &[(i, Pauli::X), (j, Pauli::Y), (k, Pauli::Z)])?;
            let phi = h.coefficient(&lead).evaluate(&Couplings::new())?;
            out.append(&chirality_component_block(i, j, k, n, phi * tau)?)?;
        }
        BlockKind::Triangle => match mode {
            SynthMode::Triangle => {
                let circ = match &b.symmetry {
                    Some(cs) => symmetric_block(&h, &cs.space, cs.wire, tau),
                    None => triangle_block(&h, [b.sites[0], b.sites[1], b.sites[2]], tau),
                };
                out.append(&circ.map_err(|e| match e {
                    SynthError::NotConfined => TrotterError::NotConfined(b.sites.clone()),
                    other => other.into(),
                })?)?;
            }
            SynthMode::Conventional => out.append(&split_triangle(&h, &b.sites, tau)?)?,
        },
    }
    Ok(out)
}

fn terms_circuit(h: &PauliSum, tau: f64) -> Result<GateCircuit, TrotterError> {
    let mut out = GateCircuit::new(h.n_sites());
    for (p, v) in h.evaluate(&Couplings::new())? {
        out.append(&pauli_rotation(&p, v * tau)?)?;
    }
    Ok(out)
}

/// Heisenberg exchange gets the three-CNOT edge block; anything else is a rotation per term.
fn pair_circuit(h: &PauliSum, a: usize, b: usize, tau: f64) -> Result<GateCircuit, TrotterError> {
    let n = h.n_sites();
    let terms = h.evaluate(&Couplings::new())?;
    let exchange: Vec<PauliString> = [Pauli::X, Pauli::Y, Pauli::Z].iter().map(|&p| PauliString::from_ops(n, &[(a, p), (b, p)])).collect::<Result<_, _>>()?;
    if terms.len() == 3 && exchange.iter().all(|p| terms.iter().any(|(q, v)| q == p && *v == terms[0].1)) {
        return Ok(heisenberg_edge_block(a, b, n, terms[0].1 * tau)?);
    }
    terms_circuit(h, tau)
}

/// Splits a triangle operator into exchange edges, chirality components and
/// leftover single rotations, applied in that order.
fn split_triangle(h: &PauliSum, sites: &[usize], tau: f64) -> Result<GateCircuit, TrotterError> {
    let n = h.n_sites();
    let mut rest = h.clone();
    let mut out = GateCircuit::new(n);
    for (x, y) in [(0, 1), (1, 2), (0, 2)] {
        let (a, b) = (sites[x], sites[y]);
        let xx = PauliString::from_ops(n, &[(a, Pauli::X), (b, Pauli::X)])?;
        let v = rest.coefficient(&xx);
        if v.is_zero() {
            continue;
        }
        let pair = crate::pauli::heisenberg_pair(n, a, b, &v)?;
        if pair.iter().all(|(p, c)| rest.coefficient(p) == *c) {
            out.append(&pair_circuit(&pair, a, b, tau)?)?;
            rest = &rest - &pair;
        }
    }
    if let [i, j, k] = *sites {
        for [a, b, c] in [[i, j, k], [k, i, j], [j, k, i]] {
            let lead = PauliString::from_ops(n, &[(a, Pauli::X), (b, Pauli::Y), (c, Pauli::Z)])?;
            let v = rest.coefficient(&lead);
            if v.is_zero() {
                continue;
            }
            let comp = crate::pauli::chirality_component(n, a, b, c, &v)?;
            if comp.iter().all(|(p, q)| rest.coefficient(p) == *q) {
                let phi = v.evaluate(&Couplings::new())?;
                out.append(&chirality_component_block(a, b, c, n, phi * tau)?)?;
                rest = &rest - &comp;
            }
        }
    }
    out.append(&terms_circuit(&rest, tau)?)?;
    Ok(out)
}

pub fn cluster_circuit(c: &Cluster, n: usize, tau: f64, couplings: &Couplings, mode: SynthMode) -> Result<GateCircuit, TrotterError> {
    let mut out = GateCircuit::new(n);
    for b in &c.blocks {
        out.append(&block_circuit(b, n, tau, couplings, mode)?)?;
    }
    Ok(out)
}

pub fn build_circuit(s: &TrotterSchedule, mode: SynthMode) -> Result<GateCircuit, TrotterError> {
    let n = s.clustering.n_sites;
    let mut cache: HashMap<(usize, u64), GateCircuit> = HashMap::new();
    let mut out = GateCircuit::new(n);
    for (c, tau) in s.layers() {
        let key = (c, tau.to_bits());
        if !cache.contains_key(&key) {
            let circ = cluster_circuit(&s.clustering.clusters[c], n, tau, &s.couplings, mode)?;
            cache.insert(key, circ);
        }
        out.append(&cache[&key])?;
    }
    Ok(out)
}

/// `(1/s) Σ_{a<b} [H_a, H_b]/(2i)` over the listed clusters.
pub fn step_error_generator(c: &Clustering) -> Result<PauliSum, TrotterError> {
    let hs = c.hamiltonians();
    let mut r = PauliSum::zero(c.n_sites);
    for (a, ha) in hs.iter().enumerate() {
        for hb in &hs[a + 1..] {
            r.add_sum(&PauliSum::commutator(ha, hb)?)?;
        }
    }
    Ok(r.scale(1.0 / c.schedule_period as f64))
}
