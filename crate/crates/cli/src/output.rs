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

//! CSV files with provenance headers and gnuplot scripts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use su2trotter::models::Clustering;

use crate::config::{ExperimentConfig, Method};
use crate::experiment::{ChiralityRow, FidelityRow, GateRow, Workload};
use crate::CliError;

fn cluster_order(c: &Clustering) -> String {
    let kinds: Vec<String> = c.clusters.iter().map(|k| format!("{:?}", k.kind)).collect();
    kinds.join(" ")
}

/// Comment lines embedding the config and the cluster order of each clustering.
pub fn header(cfg: &ExperimentConfig, w: Option<&Workload>) -> String {
    let mut out = format!("# config: {}\n", cfg.to_json());
    if let Some(w) = w {
        writeln!(out, "# conventional order: {}", cluster_order(&w.conventional)).expect("write to string");
        writeln!(out, "# proposed order: {}", cluster_order(&w.proposed)).expect("write to string");
    }
    out
}

pub fn csv_text<'a>(head: &str, columns: &str, rows: impl IntoIterator<Item = String> + 'a) -> String {
    let mut out = String::from(head);
    out.push_str(columns);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

pub fn fidelity_csv(cfg: &ExperimentConfig, w: &Workload, rows: &[FidelityRow]) -> String {
    let mut sorted = rows.to_vec();
    sorted.sort_by_key(|r| (r.method, r.n_steps));
    csv_text(&header(cfg, Some(w)), FidelityRow::CSV_HEADER, sorted.iter().map(FidelityRow::csv))
}

pub fn chirality_csv(cfg: &ExperimentConfig, w: &Workload, rows: &[ChiralityRow]) -> String {
    let mut sorted = rows.to_vec();
    sorted.sort_by(|a, b| (a.method, a.n_steps).cmp(&(b.method, b.n_steps)).then(a.t.total_cmp(&b.t)));
    csv_text(&header(cfg, Some(w)), ChiralityRow::CSV_HEADER, sorted.iter().map(ChiralityRow::csv))
}

pub fn gates_csv(cfg: &ExperimentConfig, w: &Workload, rows: &[GateRow]) -> String {
    let mut sorted = rows.to_vec();
    sorted.sort_by_key(|r| (r.method, r.n_steps));
    csv_text(&header(cfg, Some(w)), GateRow::CSV_HEADER, sorted.iter().map(GateRow::csv))
}

fn methods_in(cfg: &ExperimentConfig) -> Vec<Method> {
    let mut m = cfg.methods.clone();
    m.sort();
    m.dedup();
    m
}

/// Log-log infidelity against total CNOT count, one curve per method.
pub fn fidelity_plot(cfg: &ExperimentConfig, csv_name: &str) -> String {
    let mut out = String::from("set datafile separator ','\nset logscale xy\nset xlabel 'CNOT gates'\nset ylabel 'infidelity'\nset key top right\n");
    out.push_str("set terminal pngcairo size 800,600\nset output 'fidelity.png'\n");
    let curves: Vec<String> = methods_in(cfg)
        .iter()
        .map(|m| format!("'{}' using (strcol(1) eq '{}' ? $3 : NaN):5 with linespoints title '{}'", csv_name, m, m))
        .collect();
    writeln!(out, "plot {}", curves.join(", \\\n     ")).expect("write to string");
    out
}

/// Chirality bias against time, one curve per method and step count.
pub fn chirality_plot(cfg: &ExperimentConfig, csv_name: &str) -> String {
    let mut out = String::from("set datafile separator ','\nset xlabel 't'\nset ylabel 'chirality bias'\nset key outside\n");
    out.push_str("set terminal pngcairo size 900,600\nset output 'chirality.png'\n");
    let mut steps = cfg.n_steps.clone();
    steps.sort_unstable();
    steps.dedup();
    let mut curves = Vec::new();
    for m in methods_in(cfg) {
        for n in &steps {
            curves.push(format!(
                "'{}' using (strcol(1) eq '{}' && $2 == {} ? $3 : NaN):6 with linespoints title '{} n={}'",
                csv_name, m, n, m, n
            ));
        }
    }
    writeln!(out, "plot {}", curves.join(", \\\n     ")).expect("write to string");
    out
}

/// Writes `name` under `dir`, creating the directory.
pub fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, text)?;
    Ok(path)
}
