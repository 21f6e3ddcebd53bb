//! Linear cluster-state growth by repeated measurement, checked against an
//! independent controlled-phase construction.
//!
//! The growth step appends a fresh `|0>` qubit and runs the steered schedule
//! on the last pair; no two-qubit gate is ever applied on that path. The
//! C-Phase chain built by [`build_cluster_oracle`] serves purely as the
//! verification target, and the small local-correction search in
//! [`fidelity_up_to_local_frame`] pins down the frame in which the two
//! constructions agree.

use std::fmt;

use crate::error::{Error, Result};
use crate::qstate::{fidelity, SingleQubitGate, StateVector};
use crate::subspace::STEERING_ANGLE;
use crate::trajectory::{run_deterministic, steered_schedule};

/// Largest chain length the dense representation supports.
pub const MAX_QUBITS: usize = 12;

/// Single-qubit corrections the frame search may apply.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CorrectionGate {
    I,
    Z,
    X,
    H,
}

impl CorrectionGate {
    fn gate(&self) -> SingleQubitGate {
        match self {
            CorrectionGate::I => SingleQubitGate::identity(),
            CorrectionGate::Z => SingleQubitGate::phase_flip(),
            CorrectionGate::X => SingleQubitGate::bit_flip(),
            CorrectionGate::H => SingleQubitGate::hadamard(),
        }
    }
}

impl fmt::Display for CorrectionGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CorrectionGate::I => "I",
            CorrectionGate::Z => "Z",
            CorrectionGate::X => "X",
            CorrectionGate::H => "H",
        };
        write!(f, "{s}")
    }
}

/// A correction word applied to one qubit, first gate first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppliedCorrection {
    pub qubit: usize,
    pub gates: Vec<CorrectionGate>,
}

impl fmt::Display for AppliedCorrection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}: ", self.qubit)?;
        if self.gates.is_empty() {
            return write!(f, "I");
        }
        for (i, g) in self.gates.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Configuration of a chain-growth job: final length `n`, step count `k` per
/// expansion, and the per-step angle tied to `k` by the steering constraint.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ClusterSpec {
    n: usize,
    k: usize,
    theta: f64,
}

impl ClusterSpec {
    pub fn new(n: usize, k: usize, theta: f64) -> Result<Self> {
        if !(2..=MAX_QUBITS).contains(&n) {
            return Err(Error::InvalidArgument(format!(
                "chain length must be in 2..={MAX_QUBITS}, got {n}"
            )));
        }
        if k == 0 || !k.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "step count must be a positive even integer, got {k}"
            )));
        }
        if !theta.is_finite() || (k as f64 * theta - STEERING_ANGLE).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "k * theta must equal pi/(2 sqrt(2)) within 1e-9 (k={k}, theta={theta})"
            )));
        }
        Ok(ClusterSpec { n, k, theta })
    }

    /// Picks `theta = pi / (2 sqrt(2) k)` for the given step count.
    pub fn with_auto_theta(n: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("step count must be positive".into()));
        }
        ClusterSpec::new(n, k, STEERING_ANGLE / k as f64)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// One expansion step's output: the corrected `(n+1)`-qubit state, the
/// no-click probability of the whole schedule, the fidelity against the
/// C-Phase construction and the corrections that aligned the frames.
#[derive(Clone, Debug)]
pub struct ExpansionResult {
    pub state: StateVector,
    pub success_prob: f64,
    pub oracle_fidelity: f64,
    pub corrections: Vec<AppliedCorrection>,
}

fn cphase_in_place(state: &mut StateVector, q1: usize, q2: usize) {
    let n = state.n_qubits();
    let m1 = 1usize << (n - 1 - q1);
    let m2 = 1usize << (n - 1 - q2);
    for (i, a) in state.amps_mut().iter_mut().enumerate() {
        if i & m1 != 0 && i & m2 != 0 {
            *a = -*a;
        }
    }
}

/// The reference linear cluster state: `|+>^n` with a controlled-phase gate
/// on every nearest-neighbor pair, left to right.
pub fn build_cluster_oracle(n: usize) -> Result<StateVector> {
    if n < 1 {
        return Err(Error::InvalidArgument("chain length must be >= 1".into()));
    }
    if n > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "chain length must be <= {MAX_QUBITS}, got {n}"
        )));
    }
    let mut state = StateVector::plus_state(n);
    for i in 0..n.saturating_sub(1) {
        cphase_in_place(&mut state, i, i + 1);
    }
    Ok(state)
}

fn correction_words(allowed: &[CorrectionGate]) -> Vec<Vec<CorrectionGate>> {
    let mut words = vec![vec![]];
    for &g in allowed {
        words.push(vec![g]);
    }
    for &g1 in allowed {
        for &g2 in allowed {
            words.push(vec![g1, g2]);
        }
    }
    words
}

fn apply_word(state: &StateVector, qubit: usize, word: &[CorrectionGate]) -> Result<StateVector> {
    let mut out = state.clone();
    for g in word {
        out = out.apply_single(&g.gate(), qubit)?;
    }
    Ok(out)
}

/// Best fidelity between `s` and `oracle` over products of up to two gates
/// from `allowed` on each of the listed qubits.
///
/// Candidates are tried in a fixed order (shorter words first, then the order
/// of `allowed`), and only a strict improvement replaces the incumbent, so
/// ties resolve deterministically to the earliest word combination.
pub fn fidelity_up_to_local_frame(
    s: &StateVector,
    oracle: &StateVector,
    qubits: &[usize],
    allowed: &[CorrectionGate],
) -> Result<(f64, Vec<AppliedCorrection>)> {
    if allowed.is_empty() {
        return Err(Error::InvalidArgument("empty correction set".into()));
    }
    if qubits.len() > 3 {
        return Err(Error::InvalidArgument(
            "frame search supports at most 3 qubits".into(),
        ));
    }
    let words = correction_words(allowed);
    let mut best_fid = -1.0;
    let mut best: Vec<&[CorrectionGate]> = Vec::new();
    let mut choice = vec![0usize; qubits.len()];
    loop {
        let mut candidate = s.clone();
        for (qi, &wi) in choice.iter().enumerate() {
            candidate = apply_word(&candidate, qubits[qi], &words[wi])?;
        }
        let fid = fidelity(&candidate, oracle)?;
        if fid > best_fid + 1e-15 {
            best_fid = fid;
            best = choice.iter().map(|&wi| words[wi].as_slice()).collect();
        }
        // advance the mixed-radix counter over word choices
        let mut pos = choice.len();
        loop {
            if pos == 0 {
                return Ok((
                    best_fid,
                    qubits
                        .iter()
                        .zip(&best)
                        .map(|(&qubit, gates)| AppliedCorrection {
                            qubit,
                            gates: gates.to_vec(),
                        })
                        .collect(),
                ));
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < words.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Grows an `n`-qubit linear cluster state by one qubit.
///
/// The input must sit within 1e-6 infidelity of the reference chain of its
/// length (states returned by this function do). The step: Hadamard on the
/// last qubit, append `|0>`, run the no-click branch of the steered schedule
/// on the last pair, then apply the local corrections that best align the
/// result with the reference `(n+1)`-chain.
pub fn zeno_expand(c: &StateVector, spec: &ClusterSpec) -> Result<ExpansionResult> {
    let n = c.n_qubits();
    if n + 1 > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "expansion to {} qubits exceeds the {MAX_QUBITS}-qubit cap",
            n + 1
        )));
    }
    if !c.is_normalized() {
        return Err(Error::NormContract { norm2: c.norm2() });
    }
    let reference = build_cluster_oracle(n)?;
    let input_fid = fidelity(c, &reference)?;
    if input_fid < 1.0 - 1e-6 {
        return Err(Error::ContractViolation(format!(
            "input is not a linear cluster state: fidelity {input_fid} < 1 - 1e-6"
        )));
    }

    let extended = c
        .apply_single(&SingleQubitGate::hadamard(), n - 1)?
        .append_qubit(0);
    let schedule = steered_schedule(spec.k, spec.theta)?.retarget(n - 1, n)?;
    let (evolved, success_prob, _) = run_deterministic(&schedule, &extended)?;

    let oracle = build_cluster_oracle(n + 1)?;
    let allowed = [
        CorrectionGate::I,
        CorrectionGate::Z,
        CorrectionGate::X,
        CorrectionGate::H,
    ];
    let (oracle_fidelity, corrections) =
        fidelity_up_to_local_frame(&evolved, &oracle, &[n - 1, n], &allowed)?;
    let mut state = evolved;
    for c in &corrections {
        state = apply_word(&state, c.qubit, &c.gates)?;
    }
    Ok(ExpansionResult {
        state,
        success_prob,
        oracle_fidelity,
        corrections,
    })
}

/// Grows a chain from a single `|+>` qubit to `spec.n()` qubits, one
/// expansion at a time.
pub fn grow_chain(spec: &ClusterSpec) -> Result<Vec<ExpansionResult>> {
    let mut state = StateVector::plus_state(1);
    let mut results = Vec::with_capacity(spec.n() - 1);
    for _ in 2..=spec.n() {
        let step = zeno_expand(&state, spec)?;
        state = step.state.clone();
        results.push(step);
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::inner;
    use crate::subspace::protocol_theta;

    #[test]
    fn oracle_base_cases() {
        let c1 = build_cluster_oracle(1).unwrap();
        assert!(fidelity(&c1, &StateVector::plus_state(1)).unwrap() > 1.0 - 1e-14);

        // (|0+> + |1->)/sqrt(2) = (|00> + |01> + |10> - |11>)/2
        let c2 = build_cluster_oracle(2).unwrap();
        let expect = [0.5, 0.5, 0.5, -0.5];
        for (i, e) in expect.iter().enumerate() {
            assert!((c2.amp(i).re - e).abs() < 1e-14);
            assert!(c2.amp(i).im.abs() < 1e-15);
        }

        assert!(build_cluster_oracle(0).is_err());
        assert!(build_cluster_oracle(MAX_QUBITS + 1).is_err());
    }

    #[test]
    fn oracle_amplitudes_stay_uniform() {
        for n in 1..=6 {
            let c = build_cluster_oracle(n).unwrap();
            let mag = (2f64).powf(-(n as f64) / 2.0);
            for a in c.amplitudes() {
                assert!((a.norm() - mag).abs() < 1e-13, "n={n}");
            }
            assert!((c.norm2() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_qubit_chain_is_a_flip_away_from_a_bell_state() {
        let c2 = build_cluster_oracle(2).unwrap();
        let target = StateVector::bell_psi_plus();
        let allowed = [
            CorrectionGate::I,
            CorrectionGate::Z,
            CorrectionGate::X,
            CorrectionGate::H,
        ];
        let (fid, _) = fidelity_up_to_local_frame(&c2, &target, &[0, 1], &allowed).unwrap();
        assert!(fid > 1.0 - 1e-12);
    }

    #[test]
    fn frame_search_base_cases() {
        let c3 = build_cluster_oracle(3).unwrap();
        let (fid, corr) = fidelity_up_to_local_frame(&c3, &c3, &[0], &[CorrectionGate::I]).unwrap();
        assert!(fid > 1.0 - 1e-14);
        assert!(corr[0].gates.is_empty());

        let flipped = c3.apply_single(&SingleQubitGate::phase_flip(), 1).unwrap();
        let (fid, corr) = fidelity_up_to_local_frame(
            &flipped,
            &c3,
            &[1],
            &[CorrectionGate::I, CorrectionGate::Z],
        )
        .unwrap();
        assert!(fid > 1.0 - 1e-14);
        assert_eq!(corr[0].gates, vec![CorrectionGate::Z]);
    }

    /// The post-measurement state of an expansion, built symbolically from the
    /// bipartite split of the reference chain, aligns exactly with the longer
    /// chain after the searched corrections.
    #[test]
    fn symbolic_expansion_needs_only_the_expected_corrections() {
        let c2 = build_cluster_oracle(2).unwrap();
        // split |C2> = |E>|0> + |E'>|1> over the last qubit
        let dim = c2.amplitudes().len();
        let e: Vec<_> = (0..dim).step_by(2).map(|i| c2.amp(i)).collect();
        let ep: Vec<_> = (1..dim).step_by(2).map(|i| c2.amp(i)).collect();
        // assemble -|E>|10> + |E'>|01> on three qubits
        let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); dim * 2];
        for (i, (a, b)) in e.iter().zip(&ep).enumerate() {
            amps[i * 4 + 0b10] = -a;
            amps[i * 4 + 0b01] = *b;
        }
        let state = StateVector::from_amplitudes(amps).unwrap();
        let oracle = build_cluster_oracle(3).unwrap();
        let allowed = [
            CorrectionGate::I,
            CorrectionGate::Z,
            CorrectionGate::X,
            CorrectionGate::H,
        ];
        let (fid, corr) = fidelity_up_to_local_frame(&state, &oracle, &[1, 2], &allowed).unwrap();
        assert!(fid > 1.0 - 1e-12);
        assert_eq!(corr[0].gates, vec![CorrectionGate::X]);
        assert_eq!(corr[1].gates, vec![CorrectionGate::Z, CorrectionGate::H]);
    }

    #[test]
    fn bell_bootstrap_from_one_qubit() {
        let spec = ClusterSpec::with_auto_theta(2, 100).unwrap();
        let steps = grow_chain(&spec).unwrap();
        assert_eq!(steps.len(), 1);
        assert!(steps[0].oracle_fidelity >= 0.999);
        assert!((steps[0].success_prob - 0.988).abs() < 2e-3);
    }

    #[test]
    fn expansion_to_three_qubits_is_nearly_perfect() {
        let spec = ClusterSpec::with_auto_theta(3, 1000).unwrap();
        let c2 = build_cluster_oracle(2).unwrap();
        let step = zeno_expand(&c2, &spec).unwrap();
        assert!(step.oracle_fidelity >= 0.9999);
        assert!(step.success_prob >= 0.998);
        assert_eq!(step.state.n_qubits(), 3);
    }

    #[test]
    fn the_active_pair_is_barely_populated_in_the_danger_zone() {
        // per-step click probability stays O(sin^2 theta) along an expansion
        let theta = protocol_theta(1000);
        let c2 = build_cluster_oracle(2).unwrap();
        let extended = c2
            .apply_single(&SingleQubitGate::hadamard(), 1)
            .unwrap()
            .append_qubit(0);
        let schedule = steered_schedule(1000, theta)
            .unwrap()
            .retarget(1, 2)
            .unwrap();
        let (_, _, log) = run_deterministic(&schedule, &extended).unwrap();
        let worst_click = log.iter().map(|s| 1.0 - s).fold(0.0, f64::max);
        assert!(worst_click <= 4.0 * theta.sin().powi(2));
    }

    #[test]
    fn expansion_rejects_non_cluster_input() {
        let spec = ClusterSpec::with_auto_theta(3, 1000).unwrap();
        let zz = StateVector::zero_state(2);
        assert!(matches!(
            zeno_expand(&zz, &spec),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(ClusterSpec::new(3, 100, protocol_theta(100)).is_ok());
        assert!(ClusterSpec::new(3, 99, protocol_theta(99)).is_err());
        assert!(ClusterSpec::new(1, 100, protocol_theta(100)).is_err());
        assert!(ClusterSpec::new(13, 100, protocol_theta(100)).is_err());
        assert!(ClusterSpec::new(3, 100, 0.01).is_err());
    }

    #[test]
    fn corrected_states_keep_global_phase_freedom_only() {
        // the corrected state differs from the oracle by at most a sign
        let spec = ClusterSpec::with_auto_theta(3, 1000).unwrap();
        let c2 = build_cluster_oracle(2).unwrap();
        let step = zeno_expand(&c2, &spec).unwrap();
        let oracle = build_cluster_oracle(3).unwrap();
        let ov = inner(&oracle, &step.state).unwrap();
        assert!(ov.im.abs() < 1e-9);
        assert!((ov.re.abs() - step.oracle_fidelity.sqrt()).abs() < 1e-9);
    }
}
