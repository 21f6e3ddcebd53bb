//! Running the protocol the way a detector sees it: every measurement flips
//! a Born-rule coin, a click aborts the run, and the survivors' statistics
//! reproduce the operator prediction.
//!
//! ```bash
//! cargo run --release --example stochastic_trajectories
//! ```

use zeno_sim::qstate::{fidelity, StateVector};
use zeno_sim::subspace::{
    build_w, matrix_power, protocol_theta, success_probability, SubspaceState,
};
use zeno_sim::trajectory::{estimate_success, run_trajectory, RngSeed, Schedule, TrajectoryStatus};

fn main() {
    let k = 100;
    let theta = protocol_theta(k);
    let schedule = Schedule::repeated(k, theta).unwrap();
    let initial = StateVector::zero_state(2);

    println!("single trajectories, k = {k}:");
    for seed in 0..5 {
        let out = run_trajectory(&schedule, &initial, RngSeed::from_master(seed)).unwrap();
        match out.status {
            TrajectoryStatus::Survived => {
                let state = out.final_state.unwrap();
                let fid = fidelity(&state, &StateVector::bell_psi_plus()).unwrap();
                println!("  seed {seed}: survived, fidelity to the Bell target {fid:.6}");
            }
            TrajectoryStatus::ClickedAt(step) => {
                println!("  seed {seed}: detector clicked at step {step}");
            }
        }
    }

    let trials = 100_000;
    let (mean, stderr) =
        estimate_success(&schedule, &initial, trials, RngSeed::from_master(7)).unwrap();
    let predicted =
        success_probability(&matrix_power(&build_w(theta), k), &SubspaceState::ket_00());
    println!("\n{trials} trajectories:");
    println!("  empirical survival  {mean:.5} +/- {stderr:.5}");
    println!("  operator prediction {predicted:.5}");
    println!(
        "  deviation           {:.2} sigma",
        (mean - predicted).abs() / stderr
    );
}
