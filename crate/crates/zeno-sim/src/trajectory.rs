//! Stochastic simulation of the protocol as an experiment would run it: each
//! threshold measurement draws a click/no-click outcome and a click ends the
//! trajectory.
//!
//! Randomness is counter-based: trial `i` of an estimate always uses stream
//! `i` of the master seed, so aggregates are bit-reproducible under any
//! parallel work division.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qstate::{SingleQubitGate, StateVector};
use crate::subspace::rotation;

/// Seed of one deterministic random stream.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct RngSeed {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngSeed {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        RngSeed {
            master_seed,
            stream_id,
        }
    }

    /// Stream 0 of a master seed.
    pub fn from_master(master_seed: u64) -> Self {
        RngSeed {
            master_seed,
            stream_id: 0,
        }
    }

    /// The seed used by trial `trial` of a Monte Carlo estimate.
    pub fn for_trial(&self, trial: u64) -> Self {
        RngSeed {
            master_seed: self.master_seed,
            stream_id: trial,
        }
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Which single-qubit rotation implements a step.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RotationAxis {
    /// Real in-plane rotation `[[c, -s], [s, c]]`.
    InPlane,
    /// Tunneling propagator `exp(-i theta sigma_x)`.
    XAxis,
}

/// One protocol step: optional phase flip of the pair's first qubit, a
/// rotation of both qubits by `theta`, then (optionally) a threshold
/// measurement.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ScheduleStep {
    pub theta: f64,
    pub pre_phase_flip: bool,
    pub measure: bool,
}

impl ScheduleStep {
    pub fn measured(theta: f64) -> Self {
        ScheduleStep {
            theta,
            pre_phase_flip: false,
            measure: true,
        }
    }
}

/// An ordered protocol program acting on one qubit pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    steps: Vec<ScheduleStep>,
    target_pair: (usize, usize),
    axis: RotationAxis,
}

impl Schedule {
    pub fn new(steps: Vec<ScheduleStep>, target_pair: (usize, usize)) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidArgument("schedule has no steps".into()));
        }
        if steps.iter().any(|s| !s.theta.is_finite()) {
            return Err(Error::InvalidArgument("non-finite step angle".into()));
        }
        if target_pair.0 == target_pair.1 {
            return Err(Error::DuplicateQubit {
                index: target_pair.0,
            });
        }
        Ok(Schedule {
            steps,
            target_pair,
            axis: RotationAxis::InPlane,
        })
    }

    /// `k` identical measured steps on qubits (0, 1).
    pub fn repeated(k: usize, theta: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("schedule has no steps".into()));
        }
        Schedule::new(vec![ScheduleStep::measured(theta); k], (0, 1))
    }

    pub fn with_axis(mut self, axis: RotationAxis) -> Self {
        self.axis = axis;
        self
    }

    /// Rebinds the schedule to a different qubit pair.
    pub fn retarget(mut self, q1: usize, q2: usize) -> Result<Self> {
        if q1 == q2 {
            return Err(Error::DuplicateQubit { index: q1 });
        }
        self.target_pair = (q1, q2);
        Ok(self)
    }

    pub fn steps(&self) -> &[ScheduleStep] {
        &self.steps
    }

    pub fn target_pair(&self) -> (usize, usize) {
        self.target_pair
    }

    pub fn axis(&self) -> RotationAxis {
        self.axis
    }

    fn validate_against(&self, state: &StateVector) -> Result<()> {
        let n = state.n_qubits();
        for q in [self.target_pair.0, self.target_pair.1] {
            if q >= n {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: n,
                });
            }
        }
        if !state.is_normalized() {
            return Err(Error::NormContract {
                norm2: state.norm2(),
            });
        }
        Ok(())
    }

    fn gate_for(&self, theta: f64) -> SingleQubitGate {
        match self.axis {
            RotationAxis::InPlane => rotation(theta),
            RotationAxis::XAxis => SingleQubitGate::x_rotation(theta),
        }
    }
}

/// The steered composite program: `k` measured steps, a phase flip of the
/// pair's first qubit, then `k/2` more measured steps. Requires even `k`;
/// targets qubits (0, 1) until retargeted.
pub fn steered_schedule(k: usize, theta: f64) -> Result<Schedule> {
    if k == 0 || !k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "step count must be a positive even integer, got {k}"
        )));
    }
    let mut steps = vec![ScheduleStep::measured(theta); k + k / 2];
    steps[k].pre_phase_flip = true;
    Schedule::new(steps, (0, 1))
}

/// How a trajectory ended.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TrajectoryStatus {
    /// No detector click; the conditional state survived to the end.
    Survived,
    /// The detector clicked at this step index and the run stopped.
    ClickedAt(usize),
}

/// Result of one stochastic run.
///
/// `survival_log` holds the no-click probability of every measurement that
/// was performed (including the one that clicked, if any), and
/// `cumulative_prob` is their product: the Born probability of the all-no-click
/// record up to the point the run stopped.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryOutcome {
    pub status: TrajectoryStatus,
    pub final_state: Option<StateVector>,
    pub survival_log: Vec<f64>,
    pub cumulative_prob: f64,
}

impl TrajectoryOutcome {
    pub fn survived(&self) -> bool {
        self.status == TrajectoryStatus::Survived
    }
}

/// Runs one trajectory: per step, optional phase flip and rotation of both
/// target qubits, then a sampled threshold measurement. Deterministic given
/// the seed.
pub fn run_trajectory(
    schedule: &Schedule,
    initial: &StateVector,
    seed: RngSeed,
) -> Result<TrajectoryOutcome> {
    schedule.validate_against(initial)?;
    let mut rng = seed.rng();
    let (q1, q2) = schedule.target_pair();
    let flip = SingleQubitGate::phase_flip();
    let mut state = initial.clone();
    let mut survival_log = Vec::new();
    let mut cumulative = 1.0;

    for (idx, step) in schedule.steps().iter().enumerate() {
        if step.pre_phase_flip {
            state.apply_single_in_place(&flip, q1);
        }
        let gate = schedule.gate_for(step.theta);
        state.apply_single_in_place(&gate, q1);
        state.apply_single_in_place(&gate, q2);
        if step.measure {
            let click_prob = state.j_project_in_place(q1, q2);
            let survival = 1.0 - click_prob;
            survival_log.push(survival);
            cumulative *= survival;
            let u: f64 = rng.gen();
            if u < click_prob {
                return Ok(TrajectoryOutcome {
                    status: TrajectoryStatus::ClickedAt(idx),
                    final_state: None,
                    survival_log,
                    cumulative_prob: cumulative,
                });
            }
            state.normalize_in_place()?;
        }
    }
    Ok(TrajectoryOutcome {
        status: TrajectoryStatus::Survived,
        final_state: Some(state),
        survival_log,
        cumulative_prob: cumulative,
    })
}

/// The deterministic no-click branch of a schedule: every measurement is
/// forced silent and its survival probability recorded.
///
/// Returns the normalized conditional state, the overall success probability
/// (product of the survival log) and the log itself. Fails if the no-click
/// branch has zero probability.
pub fn run_deterministic(
    schedule: &Schedule,
    initial: &StateVector,
) -> Result<(StateVector, f64, Vec<f64>)> {
    schedule.validate_against(initial)?;
    let (q1, q2) = schedule.target_pair();
    let flip = SingleQubitGate::phase_flip();
    let mut state = initial.clone();
    let mut survival_log = Vec::new();
    let mut cumulative = 1.0;

    for step in schedule.steps() {
        if step.pre_phase_flip {
            state.apply_single_in_place(&flip, q1);
        }
        let gate = schedule.gate_for(step.theta);
        state.apply_single_in_place(&gate, q1);
        state.apply_single_in_place(&gate, q2);
        if step.measure {
            let click_prob = state.j_project_in_place(q1, q2);
            let survival = 1.0 - click_prob;
            survival_log.push(survival);
            cumulative *= survival;
            state.normalize_in_place().map_err(|_| {
                Error::ContractViolation("no-click branch has zero probability".into())
            })?;
        }
    }
    Ok((state, cumulative, survival_log))
}

/// Monte Carlo estimate of the probability that a trajectory survives the
/// whole schedule.
///
/// Returns `(mean, stderr)` with `stderr = sqrt(mean (1 - mean) / trials)`.
/// Trial `i` uses stream `i` of the master seed; trials run in parallel and
/// the result is identical for any worker count.
pub fn estimate_success(
    schedule: &Schedule,
    initial: &StateVector,
    trials: usize,
    seed: RngSeed,
) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    schedule.validate_against(initial)?;
    let survived: u64 = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let outcome = run_trajectory(schedule, initial, seed.for_trial(t))
                .expect("schedule already validated");
            outcome.survived() as u64
        })
        .sum();
    let mean = survived as f64 / trials as f64;
    let stderr = (mean * (1.0 - mean) / trials as f64).sqrt();
    Ok((mean, stderr))
}
