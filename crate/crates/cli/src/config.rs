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

//! JSON experiment configuration.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use su2trotter::models::ModelName;
use su2trotter::pauli::{Couplings, Symbol};
use su2trotter_sim::{NoiseMode, NoiseSpec};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Edge and chirality-component clusters, first order.
    Conventional,
    /// Exact triangle blocks, first order.
    Triangle1,
    /// Exact triangle blocks, merged second order.
    Triangle2,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Conventional, Method::Triangle1, Method::Triangle2];

    pub fn id(self) -> &'static str {
        match self {
            Method::Conventional => "conventional",
            Method::Triangle1 => "triangle1",
            Method::Triangle2 => "triangle2",
        }
    }

    pub fn order(self) -> u8 {
        match self {
            Method::Triangle2 => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    #[serde(rename = "J", default = "one")]
    pub j: f64,
    #[serde(rename = "K", default = "default_k")]
    pub k: f64,
    #[serde(default = "one")]
    pub h: f64,
    #[serde(rename = "J1", default = "one")]
    pub j1: f64,
    #[serde(rename = "J2", default = "default_j2")]
    pub j2: f64,
}

fn one() -> f64 {
    1.0
}

fn default_k() -> f64 {
    0.1
}

fn default_j2() -> f64 {
    0.5
}

impl Default for CouplingConfig {
    fn default() -> Self {
        CouplingConfig { j: 1.0, k: 0.1, h: 1.0, j1: 1.0, j2: 0.5 }
    }
}

impl CouplingConfig {
    pub fn couplings(&self) -> Couplings {
        Couplings::new()
            .with(Symbol::J, self.j)
            .with(Symbol::K, self.k)
            .with(Symbol::H, self.h)
            .with(Symbol::J1, self.j1)
            .with(Symbol::J2, self.j2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    #[default]
    None,
    Depolarizing,
    Dephasing,
}

/// `p1` defaults to `p2 / 10` when absent.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    #[serde(default)]
    pub mode: NoiseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1: Option<f64>,
    #[serde(default)]
    pub p2: f64,
    #[serde(default)]
    pub pz: f64,
}

impl NoiseConfig {
    pub fn spec(&self) -> NoiseSpec {
        let mode = match self.mode {
            NoiseKind::None => NoiseMode::None,
            NoiseKind::Depolarizing => NoiseMode::Depolarizing,
            NoiseKind::Dephasing => NoiseMode::Dephasing,
        };
        NoiseSpec { p1: self.p1.unwrap_or(self.p2 / 10.0), p2: self.p2, pz: self.pz, mode }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_model")]
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default)]
    pub couplings: CouplingConfig,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    #[serde(default = "default_steps")]
    pub n_steps: Vec<usize>,
    /// Chirality sweep evaluates `t_final · k / t_points` for `k = 0..=t_points`.
    #[serde(default = "default_t_points")]
    pub t_points: usize,
    #[serde(default)]
    pub noise: NoiseConfig,
    /// Whether the state-preparation gates are noisy.
    #[serde(default = "default_true")]
    pub noisy_preparation: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn default_model() -> String {
    ModelName::KagomeRing12.id().to_string()
}

fn default_methods() -> Vec<Method> {
    Method::ALL.to_vec()
}

fn default_t_final() -> f64 {
    PI
}

fn default_steps() -> Vec<usize> {
    (1..=10).map(|k| 10 * k).collect()
}

fn default_t_points() -> usize {
    20
}

fn default_true() -> bool {
    true
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults deserialize")
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {}", path.display(), e)))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn model_name(&self) -> Result<ModelName, CliError> {
        ModelName::parse(&self.model).ok_or_else(|| CliError::Config(format!("unknown model `{}`", self.model)))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        self.model_name()?;
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return bad(format!("t_final must be positive, got {}", self.t_final));
        }
        if self.n_steps.is_empty() {
            return bad("n_steps must not be empty".into());
        }
        if self.n_steps.contains(&0) {
            return bad("n_steps entries must be positive".into());
        }
        if self.methods.is_empty() {
            return bad("methods must not be empty".into());
        }
        if self.t_points == 0 {
            return bad("t_points must be positive".into());
        }
        let c = &self.couplings;
        for (name, v) in [("J", c.j), ("K", c.k), ("h", c.h), ("J1", c.j1), ("J2", c.j2)] {
            if !v.is_finite() {
                return bad(format!("coupling {} must be finite", name));
            }
        }
        let spec = self.noise.spec();
        spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }
}
