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

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use su2trotter_cli::config::NoiseKind;
use su2trotter_cli::experiment::{self, Workload};
use su2trotter_cli::{output, CliError, ExperimentConfig};

#[derive(Parser, Debug)]
#[command(name = "su2trotter", version, about = "Symmetry-aware Trotter circuits for three-site clusters")]
struct Cli {
    /// JSON experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the encoder circuit when classifying.
    #[arg(long, global = true)]
    dump_encoder: bool,
    #[arg(long, global = true, value_enum)]
    noise: Option<NoiseArg>,
    #[arg(long, global = true)]
    p1: Option<f64>,
    #[arg(long, global = true)]
    p2: Option<f64>,
    #[arg(long, global = true)]
    pz: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NoiseArg {
    None,
    Depolarizing,
    Dephasing,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symmetry classes of a three-site Hamiltonian file.
    Classify { file: PathBuf },
    /// Cluster counts and residual weights of the benchmark lattices.
    Table1 {
        /// Fail with exit code 3 unless the table equals this CSV.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Gate counts per method and step count.
    CountGates,
    /// Infidelity at the final time per method and step count.
    SweepFidelity,
    /// Average chirality along the time grid.
    SweepChirality,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.output = out.clone();
    }
    if let Some(n) = cli.noise {
        cfg.noise.mode = match n {
            NoiseArg::None => NoiseKind::None,
            NoiseArg::Depolarizing => NoiseKind::Depolarizing,
            NoiseArg::Dephasing => NoiseKind::Dephasing,
        };
    }
    if cli.p1.is_some() {
        cfg.noise.p1 = cli.p1;
    }
    if let Some(p) = cli.p2 {
        cfg.noise.p2 = p;
    }
    if let Some(p) = cli.pz {
        cfg.noise.pz = p;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Classify { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| CliError::Input(format!("{}: {}", file.display(), e)))?;
            print!("{}", experiment::run_classify(&text, cli.dump_encoder)?);
        }
        Command::Table1 { check } => {
            let text = experiment::table1_csv(&experiment::run_table1()?);
            print!("{}", text);
            if let Some(dir) = &cli.out {
                output::write(dir, "table1.csv", &text)?;
            }
            if let Some(golden) = check {
                let expected = std::fs::read_to_string(golden).map_err(|e| CliError::Input(format!("{}: {}", golden.display(), e)))?;
                if expected != text {
                    return Err(CliError::Assertion(format!("table differs from {}", golden.display())));
                }
            }
        }
        Command::CountGates => {
            let cfg = load_config(cli)?;
            let w = Workload::new(&cfg)?;
            let text = output::gates_csv(&cfg, &w, &experiment::run_count_gates(&cfg)?);
            print!("{}", text);
            output::write(&cfg.output, "gates.csv", &text)?;
        }
        Command::SweepFidelity => {
            let cfg = load_config(cli)?;
            let w = Workload::new(&cfg)?;
            let text = output::fidelity_csv(&cfg, &w, &experiment::run_fidelity_sweep(&cfg)?);
            let path = output::write(&cfg.output, "fidelity.csv", &text)?;
            output::write(&cfg.output, "fidelity.gp", &output::fidelity_plot(&cfg, "fidelity.csv"))?;
            eprintln!("wrote {}", path.display());
        }
        Command::SweepChirality => {
            let cfg = load_config(cli)?;
            let w = Workload::new(&cfg)?;
            let text = output::chirality_csv(&cfg, &w, &experiment::run_chirality_sweep(&cfg)?);
            let path = output::write(&cfg.output, "chirality.csv", &text)?;
            output::write(&cfg.output, "chirality.gp", &output::chirality_plot(&cfg, "chirality.csv"))?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
