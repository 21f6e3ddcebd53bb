//! Machine-readable run reports.
//!
//! Every CLI command produces one [`Report`] envelope: a schema version, the
//! command name, an echo of the resolved inputs and a command-specific result
//! payload. The JSON layout is described by `report.schema.json` at the crate
//! root. Timing is opt-in so that fixed-seed reports stay byte-identical
//! across runs and worker counts.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cluster::{grow_chain, ClusterSpec, ExpansionResult};
use crate::error::{Error, Result};
use crate::flux::{bell_time, continuous_run, theta_from_physics, FluxParams, FEASIBILITY_NOTE};
use crate::qstate::{fidelity, StateVector};
use crate::robustness::{
    ps_random, robustness_table, PsEstimate, RobustnessConfig, RobustnessTable, DEFAULT_EPS,
    DEFAULT_KS,
};
use crate::subspace::{
    build_w, intelligent_evolution, matrix_power, protocol_theta, success_probability,
    SubspaceState,
};
use crate::trajectory::{estimate_success, RngSeed, Schedule, TrajectoryStatus};

/// Version stamped into every report and pinned by `report.schema.json`.
pub const SCHEMA_VERSION: &str = "1.0.0";

/// Envelope shared by all commands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_seconds: Option<f64>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            inputs,
            results,
            timing_seconds: None,
        }
    }

    pub fn with_timing(mut self, seconds: f64) -> Self {
        self.timing_seconds = Some(seconds);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Resolves a `--theta` argument: `auto` ties the angle to the step count.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum ThetaArg {
    Auto,
    Value(f64),
}

impl ThetaArg {
    pub fn resolve(&self, k: usize) -> Result<f64> {
        match self {
            ThetaArg::Auto => {
                if k == 0 {
                    return Err(Error::InvalidArgument(
                        "theta auto requires a positive step count".into(),
                    ));
                }
                Ok(protocol_theta(k))
            }
            ThetaArg::Value(v) => {
                if !v.is_finite() {
                    return Err(Error::InvalidArgument("theta must be finite".into()));
                }
                Ok(*v)
            }
        }
    }
}

impl std::str::FromStr for ThetaArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(ThetaArg::Auto);
        }
        s.parse::<f64>()
            .map(ThetaArg::Value)
            .map_err(|_| format!("expected a number or 'auto', got '{s}'"))
    }
}

/// Initial states accepted on the command line.
pub fn parse_initial(token: &str) -> Result<(StateVector, SubspaceState)> {
    match token {
        "00" => Ok((StateVector::zero_state(2), SubspaceState::ket_00())),
        "01" => Ok((
            StateVector::basis_state(&[0, 1]).expect("valid bits"),
            SubspaceState::ket_01(),
        )),
        "10" => Ok((
            StateVector::basis_state(&[1, 0]).expect("valid bits"),
            SubspaceState::ket_10(),
        )),
        "psi+" => Ok((StateVector::bell_psi_plus(), SubspaceState::psi_plus())),
        "psi-" => Ok((StateVector::bell_psi_minus(), SubspaceState::psi_minus())),
        other => Err(Error::InvalidArgument(format!(
            "unknown initial state '{other}' (accepted: 00, 01, 10, psi+, psi-)"
        ))),
    }
}

fn matrix_to_json(entries: &[[f64; 3]; 3]) -> Value {
    json!(entries
        .iter()
        .map(|row| row.to_vec())
        .collect::<Vec<Vec<f64>>>())
}

/// Step-operator powers, optionally with the mid-protocol phase flip.
pub fn matrix_report(k: usize, theta: ThetaArg, intelligent: bool) -> Result<Report> {
    let theta = theta.resolve(k.max(1))?;
    let operator = if intelligent {
        intelligent_evolution(k, theta)?
    } else {
        matrix_power(&build_w(theta), k)
    };
    let inputs = json!({
        "k": k,
        "theta": theta,
        "intelligent": intelligent,
    });
    let results = json!({
        "basis": ["00", "10", "01"],
        "matrix": matrix_to_json(operator.entries()),
        "success_from_00": success_probability(&operator, &SubspaceState::ket_00()),
        "success_from_10": success_probability(&operator, &SubspaceState::ket_10()),
    });
    Ok(Report::new("matrix", inputs, results))
}

/// Monte Carlo survival estimate for `k` measured steps, with the operator
/// prediction alongside.
pub fn trajectory_report(
    k: usize,
    theta: ThetaArg,
    trials: usize,
    seed: u64,
    initial: &str,
) -> Result<Report> {
    let theta = theta.resolve(k)?;
    let (state, subspace_state) = parse_initial(initial)?;
    let schedule = Schedule::repeated(k, theta)?;
    let (mean, stderr) = estimate_success(&schedule, &state, trials, RngSeed::from_master(seed))?;
    let analytic = success_probability(&matrix_power(&build_w(theta), k), &subspace_state);
    let inputs = json!({
        "k": k,
        "theta": theta,
        "trials": trials,
        "seed": seed,
        "initial": initial,
    });
    let results = json!({
        "mean": mean,
        "stderr": stderr,
        "analytic_success": analytic,
    });
    Ok(Report::new("trajectory", inputs, results))
}

fn estimate_to_json(e: &PsEstimate) -> Value {
    serde_json::to_value(e).expect("estimate serializes")
}

/// One robustness cell.
pub fn robustness_cell_report(k: usize, eps_max: f64, trials: usize, seed: u64) -> Result<Report> {
    let cfg = RobustnessConfig::new(k, eps_max, trials, RngSeed::from_master(seed))?;
    let estimate = ps_random(&cfg)?;
    let inputs = json!({
        "k": k,
        "eps_max": eps_max,
        "theta": cfg.theta(),
        "trials": trials,
        "seed": seed,
    });
    Ok(Report::new(
        "robustness",
        inputs,
        json!({ "cells": [estimate_to_json(&estimate)] }),
    ))
}

/// The default step-count x error-bound grid.
pub fn robustness_table_report(trials: usize, seed: u64) -> Result<Report> {
    let table = robustness_table(
        &DEFAULT_KS,
        &DEFAULT_EPS,
        trials,
        RngSeed::from_master(seed),
    )?;
    let inputs = json!({
        "ks": table.ks,
        "eps_list": table.eps_list,
        "trials": trials,
        "seed": seed,
    });
    let cells: Vec<Value> = table.cells.iter().map(estimate_to_json).collect();
    Ok(Report::new("robustness", inputs, json!({ "cells": cells })))
}

/// Fixed CSV header for robustness output.
pub const ROBUSTNESS_CSV_HEADER: &str = "k,eps_max,theta,trials,mean,stderr";

/// Renders robustness cells as CSV under [`ROBUSTNESS_CSV_HEADER`].
pub fn robustness_csv(table: &RobustnessTable) -> String {
    let mut out = String::from(ROBUSTNESS_CSV_HEADER);
    out.push('\n');
    for c in &table.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.k, c.eps_max, c.theta, c.trials, c.mean, c.stderr
        ));
    }
    out
}

fn corrections_compact(step: &ExpansionResult) -> String {
    step.corrections
        .iter()
        .map(|c| {
            let gates = if c.gates.is_empty() {
                "I".to_string()
            } else {
                c.gates
                    .iter()
                    .map(|g| g.to_string())
                    .collect::<Vec<_>>()
                    .join("+")
            };
            format!("q{}:{}", c.qubit, gates)
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Fixed CSV header for cluster-growth output.
pub const CLUSTER_CSV_HEADER: &str = "target_len,k,theta,success_prob,oracle_fidelity,corrections";

/// Chain growth from a single qubit to length `n`, one report row per
/// expansion.
pub fn cluster_report(n: usize, k: usize, seed: u64) -> Result<Report> {
    let spec = ClusterSpec::with_auto_theta(n, k)?;
    let steps = grow_chain(&spec)?;
    let inputs = json!({
        "n": n,
        "k": k,
        "theta": spec.theta(),
        "seed": seed,
    });
    let mut total_success = 1.0;
    let rows: Vec<Value> = steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            total_success *= s.success_prob;
            json!({
                "target_len": i + 2,
                "success_prob": s.success_prob,
                "oracle_fidelity": s.oracle_fidelity,
                "corrections": s
                    .corrections
                    .iter()
                    .map(|c| json!({
                        "qubit": c.qubit,
                        "gates": c.gates.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    let results = json!({
        "steps": rows,
        "total_success_prob": total_success,
        "final_oracle_fidelity": steps.last().map(|s| s.oracle_fidelity),
    });
    Ok(Report::new("cluster", inputs, results))
}

/// CSV rendering of a cluster growth run (recomputes nothing; formats the
/// same results the JSON report carries).
pub fn cluster_csv(n: usize, k: usize) -> Result<String> {
    let spec = ClusterSpec::with_auto_theta(n, k)?;
    let steps = grow_chain(&spec)?;
    let mut out = String::from(CLUSTER_CSV_HEADER);
    out.push('\n');
    for (i, s) in steps.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            i + 2,
            k,
            spec.theta(),
            s.success_prob,
            s.oracle_fidelity,
            corrections_compact(s)
        ));
    }
    Ok(out)
}

/// One continuously-monitored tunneling trajectory from `|00>`.
pub fn phys_report(delta: f64, tau: f64, total_time: f64, seed: u64) -> Result<Report> {
    let params = FluxParams::new(delta, tau, total_time)?;
    let theta = theta_from_physics(&params);
    let outcome = continuous_run(
        &params,
        &StateVector::zero_state(2),
        RngSeed::from_master(seed),
    )?;
    let target = StateVector::bell_psi_plus();
    let (status, clicked_step, fid) = match outcome.status {
        TrajectoryStatus::Survived => {
            let state = outcome.final_state.as_ref().expect("survivor has a state");
            ("survived", None, Some(fidelity(state, &target)?))
        }
        TrajectoryStatus::ClickedAt(step) => ("clicked", Some(step), None),
    };
    let inputs = json!({
        "delta": delta,
        "tau": tau,
        "total_time": total_time,
        "seed": seed,
    });
    let results = json!({
        "theta": theta,
        "steps": params.step_count(),
        "bell_time": if delta > 0.0 { Some(bell_time(delta)?) } else { None },
        "status": status,
        "clicked_step": clicked_step,
        "success_prob": outcome.cumulative_prob,
        "fidelity_to_psi_plus": fid,
        "feasibility": FEASIBILITY_NOTE,
    });
    Ok(Report::new("phys", inputs, results))
}
