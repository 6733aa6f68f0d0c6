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

//! Experiment driver behind the `su2trotter` binary.

pub mod config;
pub mod experiment;
pub mod output;

use su2trotter::encoder::EncoderError;
use su2trotter::models::ModelError;
use su2trotter::pauli::PauliError;
use su2trotter::symmetry::SymmetryError;
use su2trotter::synth::SynthError;
use su2trotter::trotter::TrotterError;
use su2trotter_sim::SimError;
use thiserror::Error;

pub use config::{ExperimentConfig, Method};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("input: {0}")]
    Input(String),
    #[error("check failed: {0}")]
    Assertion(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Trotter(#[from] TrotterError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Encoder(#[from] EncoderError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl CliError {
    /// 2 for bad configuration or input, 3 for failed numerical checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input(_) => 2,
            CliError::Assertion(_) => 3,
            _ => 1,
        }
    }
}
