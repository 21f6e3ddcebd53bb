//! Monte Carlo study of how rotation-angle errors propagate through the
//! protocol.
//!
//! The figure of merit `P_s` is the probability of a perfect outcome: the
//! squared overlap of the steered evolution's output with its ideal target,
//! averaged over the two canonical initial states, with the no-click
//! probability folded in. Errors enter as an independent random offset of the
//! rotation angle at every step, uniform on `[-eps_max * theta, eps_max * theta]`.

use rayon::prelude::*;
use serde::Serialize;

use rand::Rng;

use crate::error::{Error, Result};
use crate::subspace::{
    build_w, intelligent_evolution, SubspaceMatrix, SubspaceState, STEERING_ANGLE,
};
use crate::trajectory::RngSeed;

/// Configuration of one Monte Carlo cell.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RobustnessConfig {
    k: usize,
    eps_max: f64,
    trials: usize,
    seed: RngSeed,
    theta: f64,
}

impl RobustnessConfig {
    /// `theta` defaults to `pi / (2 sqrt(2) k)`, the steering angle split
    /// over `k` steps.
    pub fn new(k: usize, eps_max: f64, trials: usize, seed: RngSeed) -> Result<Self> {
        if k == 0 || !k.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "step count must be a positive even integer, got {k}"
            )));
        }
        if !(eps_max >= 0.0 && eps_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "error bound must be a nonnegative fraction, got {eps_max}"
            )));
        }
        if trials == 0 {
            return Err(Error::InvalidArgument("trials must be positive".into()));
        }
        Ok(RobustnessConfig {
            k,
            eps_max,
            trials,
            seed,
            theta: STEERING_ANGLE / k as f64,
        })
    }

    pub fn with_theta(mut self, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidArgument("theta must be finite".into()));
        }
        self.theta = theta;
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eps_max(&self) -> f64 {
        self.eps_max
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn seed(&self) -> RngSeed {
        self.seed
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// A Monte Carlo estimate of `P_s` with its configuration echoed back.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
    pub k: usize,
    pub eps_max: f64,
    pub theta: f64,
}

fn ps_of_operator(g: &SubspaceMatrix) -> f64 {
    let psi_minus = SubspaceState::psi_minus().coords();
    let psi_plus = SubspaceState::psi_plus().coords();
    let from_00 = g.apply([1.0, 0.0, 0.0]);
    let from_10 = g.apply([0.0, 1.0, 0.0]);
    let o1: f64 = (0..3).map(|i| psi_minus[i] * from_00[i]).sum();
    let o2: f64 = (0..3).map(|i| psi_plus[i] * from_10[i]).sum();
    0.5 * (o1 * o1 + o2 * o2)
}

/// `P_s` of the error-free steered evolution at the given angle.
pub fn ps_exact(k: usize, theta: f64) -> Result<f64> {
    Ok(ps_of_operator(&intelligent_evolution(k, theta)?))
}

/// One trial: every one of the `3k/2` steps gets an independent uniform angle
/// offset (same offset for both qubits within a step), the phase flip sits
/// after step `k`, and the perturbed operator is scored like [`ps_exact`].
fn ps_one_trial(cfg: &RobustnessConfig, trial: u64) -> f64 {
    let mut rng = cfg.seed.for_trial(trial).rng();
    let bound = cfg.eps_max * cfg.theta;
    let n_steps = cfg.k + cfg.k / 2;
    let mut v0 = [1.0, 0.0, 0.0];
    let mut v1 = [0.0, 1.0, 0.0];
    for step in 0..n_steps {
        if step == cfg.k {
            v0[1] = -v0[1];
            v1[1] = -v1[1];
        }
        let eps: f64 = rng.gen_range(-bound..=bound);
        let m = build_w(cfg.theta + eps);
        v0 = m.apply(v0);
        v1 = m.apply(v1);
    }
    let psi_minus = SubspaceState::psi_minus().coords();
    let psi_plus = SubspaceState::psi_plus().coords();
    let o1: f64 = (0..3).map(|i| psi_minus[i] * v0[i]).sum();
    let o2: f64 = (0..3).map(|i| psi_plus[i] * v1[i]).sum();
    0.5 * (o1 * o1 + o2 * o2)
}

/// Monte Carlo estimate of `P_s` under random per-step angle errors.
///
/// `eps_max = 0` short-circuits to the exact value with zero standard error.
/// Trials run in parallel; trial `i` uses stream `i` of the master seed and
/// the reduction is performed in trial order, so the estimate is
/// bit-reproducible for any worker count.
pub fn ps_random(cfg: &RobustnessConfig) -> Result<PsEstimate> {
    if cfg.eps_max == 0.0 {
        return Ok(PsEstimate {
            mean: ps_exact(cfg.k, cfg.theta)?,
            stderr: 0.0,
            trials: cfg.trials,
            k: cfg.k,
            eps_max: cfg.eps_max,
            theta: cfg.theta,
        });
    }
    let values: Vec<f64> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| ps_one_trial(cfg, t))
        .collect();
    let mean = values.iter().sum::<f64>() / cfg.trials as f64;
    let stderr = if cfg.trials > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (cfg.trials - 1) as f64;
        (var / cfg.trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(PsEstimate {
        mean,
        stderr,
        trials: cfg.trials,
        k: cfg.k,
        eps_max: cfg.eps_max,
        theta: cfg.theta,
    })
}

/// The full `k x eps_max` grid of estimates, row-major over `ks`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobustnessTable {
    pub ks: Vec<usize>,
    pub eps_list: Vec<f64>,
    pub cells: Vec<PsEstimate>,
}

impl RobustnessTable {
    pub fn cell(&self, k_index: usize, eps_index: usize) -> &PsEstimate {
        &self.cells[k_index * self.eps_list.len() + eps_index]
    }
}

/// Canonical grid used throughout: step counts 50/100/1000 against error
/// bounds 0%..50%.
pub const DEFAULT_KS: [usize; 3] = [50, 100, 1000];
pub const DEFAULT_EPS: [f64; 5] = [0.0, 0.05, 0.10, 0.20, 0.50];

/// Computes every grid cell with a shared master seed.
pub fn robustness_table(
    ks: &[usize],
    eps_list: &[f64],
    trials: usize,
    seed: RngSeed,
) -> Result<RobustnessTable> {
    if ks.is_empty() || eps_list.is_empty() {
        return Err(Error::InvalidArgument("empty table axes".into()));
    }
    let mut cells = Vec::with_capacity(ks.len() * eps_list.len());
    for &k in ks {
        for &eps in eps_list {
            let cfg = RobustnessConfig::new(k, eps, trials, seed)?;
            cells.push(ps_random(&cfg)?);
        }
    }
    Ok(RobustnessTable {
        ks: ks.to_vec(),
        eps_list: eps_list.to_vec(),
        cells,
    })
}
