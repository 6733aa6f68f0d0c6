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

//! Sweeps, gate counts, the residual table and classification reports.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use su2trotter::encoder::{canonical_encoder, extract_effective};
use su2trotter::models::{build_model, conventional_clustering, proposed_clustering, residual_count, Clustering, LatticeModel, ModelName};
use su2trotter::pauli::{Couplings, PauliSum};
use su2trotter::symmetry::classify;
use su2trotter::synth::{count_gates, transpile, GateCircuit, GateCounts};
use su2trotter::trotter::{build_circuit, SynthMode, TrotterError, TrotterSchedule};
use su2trotter_sim::{
    apply_circuit, chirality_observable, exact_evolve, expectation, fidelity, initial_state_kagome, preparation_circuit, DensityMatrix, NoiseSpec,
    SimState, StateVector, MAX_QUBITS,
};

use crate::config::{ExperimentConfig, Method};
use crate::CliError;

/// A model with both clusterings and bound couplings.
pub struct Workload {
    pub model: LatticeModel,
    pub conventional: Clustering,
    pub proposed: Clustering,
    pub couplings: Couplings,
    hamiltonian: PauliSum,
}

impl Workload {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let model = build_model(cfg.model_name()?, cfg.size).map_err(|e| CliError::Config(e.to_string()))?;
        let conventional = conventional_clustering(&model)?;
        let proposed = proposed_clustering(&model)?;
        let couplings = cfg.couplings.couplings();
        let hamiltonian = model.hamiltonian().bind(&couplings)?;
        Ok(Workload { model, conventional, proposed, couplings, hamiltonian })
    }

    pub fn hamiltonian(&self) -> &PauliSum {
        &self.hamiltonian
    }

    pub fn clustering(&self, m: Method) -> &Clustering {
        match m {
            Method::Conventional => &self.conventional,
            _ => &self.proposed,
        }
    }

    pub fn schedule(&self, m: Method, n_steps: usize, t: f64) -> Result<TrotterSchedule<'_>, CliError> {
        TrotterSchedule::new(self.clustering(m), m.order(), n_steps, t, self.couplings.clone()).map_err(|e| match e {
            TrotterError::Period { .. } | TrotterError::NoSteps => CliError::Config(format!("{}: {}", m, e)),
            other => other.into(),
        })
    }

    /// Transpiled circuit for `n_steps` steps of total time `t`.
    pub fn circuit(&self, m: Method, n_steps: usize, t: f64) -> Result<GateCircuit, CliError> {
        self.circuit_for(&self.schedule(m, n_steps, t)?, m)
    }

    fn circuit_for(&self, s: &TrotterSchedule, m: Method) -> Result<GateCircuit, CliError> {
        let mode = match m {
            Method::Conventional => SynthMode::Conventional,
            _ => SynthMode::Triangle,
        };
        Ok(transpile(&build_circuit(s, mode)?))
    }

    /// Gate counts of a single isolated step, without boundary merging;
    /// period-2 schedules are halved.
    pub fn single_step_counts(&self, m: Method, dt: f64) -> Result<(f64, f64), CliError> {
        let period = self.clustering(m).schedule_period;
        let s = self.schedule(m, period, dt * period as f64)?.merged(false);
        let g = count_gates(&self.circuit_for(&s, m)?);
        Ok((g.cnot as f64 / period as f64, g.rz_nonclifford as f64 / period as f64))
    }

    fn check_simulable(&self) -> Result<(), CliError> {
        if self.model.n_sites > MAX_QUBITS {
            return Err(CliError::Config(format!("{} has {} sites; simulation supports at most {}", self.model.name, self.model.n_sites, MAX_QUBITS)));
        }
        Ok(())
    }

    /// Runs `circuit` on the 120-degree product state.
    pub fn run(&self, circuit: &GateCircuit, noise: &NoiseSpec, noisy_preparation: bool) -> Result<SimState, CliError> {
        let n = self.model.n_sites;
        let psi0 = initial_state_kagome(n)?;
        let state = if !noise.is_noisy() {
            let mut st = SimState::Pure(psi0);
            apply_circuit(&mut st, circuit, noise)?;
            st
        } else if noisy_preparation {
            let mut full = preparation_circuit(n);
            full.append(circuit)?;
            let mut st = SimState::Mixed(DensityMatrix::from_pure(&StateVector::zero(n)?));
            apply_circuit(&mut st, &full, noise)?;
            st
        } else {
            let mut st = SimState::Mixed(DensityMatrix::from_pure(&psi0));
            apply_circuit(&mut st, circuit, noise)?;
            st
        };
        Ok(state)
    }

    /// Exact state at time `t`.
    pub fn reference(&self, t: f64) -> Result<StateVector, CliError> {
        let psi0 = initial_state_kagome(self.model.n_sites)?;
        if t == 0.0 {
            return Ok(psi0);
        }
        Ok(exact_evolve(&self.hamiltonian, t, &psi0)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FidelityRow {
    pub method: Method,
    pub n_steps: usize,
    pub counts: GateCounts,
    pub infidelity: f64,
}

impl FidelityRow {
    pub const CSV_HEADER: &'static str = "method,n_steps,cnot,rz_nc,infidelity";

    pub fn csv(&self) -> String {
        format!("{},{},{},{},{:e}", self.method, self.n_steps, self.counts.cnot, self.counts.rz_nonclifford, self.infidelity)
    }
}

fn grid(cfg: &ExperimentConfig) -> Vec<(Method, usize)> {
    let methods: BTreeSet<Method> = cfg.methods.iter().copied().collect();
    let steps: BTreeSet<usize> = cfg.n_steps.iter().copied().collect();
    methods.iter().flat_map(|&m| steps.iter().map(move |&n| (m, n))).collect()
}

/// Infidelity at `t_final` for every `(method, n_steps)` pair.
pub fn run_fidelity_sweep(cfg: &ExperimentConfig) -> Result<Vec<FidelityRow>, CliError> {
    cfg.validate()?;
    let w = Workload::new(cfg)?;
    w.check_simulable()?;
    let noise = cfg.noise.spec();
    let exact = w.reference(cfg.t_final)?;
    grid(cfg)
        .into_par_iter()
        .map(|(method, n_steps)| {
            let c = w.circuit(method, n_steps, cfg.t_final)?;
            let st = w.run(&c, &noise, cfg.noisy_preparation)?;
            Ok(FidelityRow { method, n_steps, counts: count_gates(&c), infidelity: 1.0 - fidelity(&st, &exact)? })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiralityRow {
    pub method: Method,
    pub n_steps: usize,
    pub t: f64,
    pub chi_est: f64,
    pub chi_exact: f64,
    pub bias: f64,
}

impl ChiralityRow {
    pub const CSV_HEADER: &'static str = "method,n_steps,t,chi_est,chi_exact,bias";

    pub fn csv(&self) -> String {
        format!("{},{},{:e},{:e},{:e},{:e}", self.method, self.n_steps, self.t, self.chi_est, self.chi_exact, self.bias)
    }
}

/// Average chirality along `t_final · k / t_points`, `k = 0..=t_points`.
pub fn run_chirality_sweep(cfg: &ExperimentConfig) -> Result<Vec<ChiralityRow>, CliError> {
    cfg.validate()?;
    if cfg.model_name()? != ModelName::KagomeRing12 {
        return Err(CliError::Config("the chirality sweep needs kagome-ring-12".into()));
    }
    let w = Workload::new(cfg)?;
    let noise = cfg.noise.spec();
    let obs = chirality_observable(&w.model);
    let times: Vec<f64> = (0..=cfg.t_points).map(|k| cfg.t_final * k as f64 / cfg.t_points as f64).collect();
    let exact: Vec<f64> = times
        .par_iter()
        .map(|&t| Ok(expectation(&SimState::Pure(w.reference(t)?), &obs)?))
        .collect::<Result<_, CliError>>()?;
    let points: Vec<(Method, usize, usize)> = grid(cfg).into_iter().flat_map(|(m, n)| (0..times.len()).map(move |k| (m, n, k))).collect();
    points
        .into_par_iter()
        .map(|(method, n_steps, k)| {
            let c = w.circuit(method, n_steps, times[k])?;
            let st = w.run(&c, &noise, cfg.noisy_preparation)?;
            let chi_est = expectation(&st, &obs)?;
            Ok(ChiralityRow { method, n_steps, t: times[k], chi_est, chi_exact: exact[k], bias: chi_est - exact[k] })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateRow {
    pub method: Method,
    pub n_steps: usize,
    pub total: GateCounts,
    /// Totals divided by `n_steps`, so merged boundary blocks are amortised.
    pub cnot_per_step: f64,
    pub rz_nc_per_step: f64,
    /// One isolated step, unmerged.
    pub cnot_single_step: f64,
    pub rz_nc_single_step: f64,
}

impl GateRow {
    pub const CSV_HEADER: &'static str = "method,n_steps,cnot,rz_nc,rz_c,sqrtx,cnot_per_step,rz_nc_per_step,cnot_single_step,rz_nc_single_step";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.method,
            self.n_steps,
            self.total.csv(),
            self.cnot_per_step,
            self.rz_nc_per_step,
            self.cnot_single_step,
            self.rz_nc_single_step
        )
    }
}

pub fn run_count_gates(cfg: &ExperimentConfig) -> Result<Vec<GateRow>, CliError> {
    cfg.validate()?;
    let w = Workload::new(cfg)?;
    grid(cfg)
        .into_par_iter()
        .map(|(method, n_steps)| {
            let total = count_gates(&w.circuit(method, n_steps, cfg.t_final)?);
            let (cnot_single_step, rz_nc_single_step) = w.single_step_counts(method, cfg.t_final / n_steps as f64)?;
            Ok(GateRow {
                method,
                n_steps,
                total,
                cnot_per_step: total.cnot as f64 / n_steps as f64,
                rz_nc_per_step: total.rz_nonclifford as f64 / n_steps as f64,
                cnot_single_step,
                rz_nc_single_step,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub model: ModelName,
    pub clusters_conv: usize,
    pub clusters_prop: usize,
    pub residual_conv: String,
    pub residual_prop: String,
}

impl TableRow {
    pub const CSV_HEADER: &'static str = "model,clusters_conv,clusters_prop,residual_conv,residual_prop";

    pub fn csv(&self) -> String {
        format!("{},{},{},{},{}", self.model, self.clusters_conv, self.clusters_prop, self.residual_conv, self.residual_prop)
    }
}

/// Cluster counts and residual weights of the nine benchmark lattices.
pub fn run_table1() -> Result<Vec<TableRow>, CliError> {
    ModelName::TABLE
        .par_iter()
        .map(|&name| {
            let m = build_model(name, None)?;
            let conv = conventional_clustering(&m)?;
            let prop = proposed_clustering(&m)?;
            Ok(TableRow {
                model: name,
                clusters_conv: conv.cluster_count(),
                clusters_prop: prop.cluster_count(),
                residual_conv: residual_count(&conv)?.to_string(),
                residual_prop: residual_count(&prop)?.to_string(),
            })
        })
        .collect()
}

pub fn table1_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(TableRow::CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

/// Sites of a three-site operator: its support, padded with the lowest free sites.
fn triple_of(h: &PauliSum) -> Result<[usize; 3], CliError> {
    let n = h.n_sites();
    let mut sites: Vec<usize> = (0..n).filter(|&s| h.support() >> s & 1 == 1).collect();
    if sites.len() > 3 {
        return Err(CliError::Input(format!("operator acts on {} sites; classification needs at most 3", sites.len())));
    }
    if n < 3 {
        return Err(CliError::Input(format!("operator has {} sites; classification needs 3", n)));
    }
    for s in 0..n {
        if sites.len() == 3 {
            break;
        }
        if !sites.contains(&s) {
            sites.push(s);
        }
    }
    sites.sort_unstable();
    Ok([sites[0], sites[1], sites[2]])
}

fn operator_text(h: &PauliSum) -> String {
    if h.is_empty() {
        "0\n".into()
    } else {
        h.to_string()
    }
}

/// Class report for a Hamiltonian file; single-class operators also get
/// their symmetry-wire and effective two-qubit parts.
pub fn run_classify(text: &str, dump_encoder: bool) -> Result<String, CliError> {
    let h: PauliSum = text.parse().map_err(|e: su2trotter::pauli::PauliError| CliError::Input(e.to_string()))?;
    let sites = triple_of(&h)?;
    let classes = classify(&h, sites)?;
    let mut out = String::new();
    let list: Vec<String> = classes.iter().map(|l| l.to_string()).collect();
    writeln!(out, "sites: {:?}", sites).expect("write to string");
    writeln!(out, "classes: {{{}}}", list.join(", ")).expect("write to string");
    if classes.len() == 1 {
        let l = *classes.iter().next().expect("one class");
        let u = canonical_encoder(l, sites, h.n_sites())?;
        let split = extract_effective(&h, &u, sites[0])?;
        writeln!(out, "symmetry wire {}:", sites[0]).expect("write to string");
        out.push_str(&operator_text(&split.symmetry));
        writeln!(out, "effective on {:?}:", split.effective_sites).expect("write to string");
        out.push_str(&operator_text(&split.effective));
        if dump_encoder {
            out.push_str("encoder:\n");
            out.push_str(&u.to_string());
        }
    }
    Ok(out)
}
