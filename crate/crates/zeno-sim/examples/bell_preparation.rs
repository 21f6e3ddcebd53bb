//! Steering `|00>` into the Bell state `(|01> + |10>)/sqrt(2)` with nothing
//! but small rotations and threshold measurements.
//!
//! ```bash
//! cargo run --example bell_preparation
//! ```

use zeno_sim::subspace::{
    build_w, matrix_power, protocol_theta, success_probability, SubspaceState,
};

fn main() {
    println!("per-step angle theta = pi/(2 sqrt(2) k); more steps = gentler steering\n");
    println!(
        "{:>6}  {:>12}  {:>14}  {:>12}",
        "k", "theta", "success prob", "infidelity"
    );
    for k in [10, 50, 100, 500, 1000] {
        let theta = protocol_theta(k);
        let evolution = matrix_power(&build_w(theta), k);
        let success = success_probability(&evolution, &SubspaceState::ket_00());

        let v = evolution.apply([1.0, 0.0, 0.0]);
        let final_state = SubspaceState::new(v[0], v[1], v[2]);
        let fidelity = final_state.fidelity(&SubspaceState::psi_plus());

        println!(
            "{k:>6}  {theta:>12.6}  {success:>14.6}  {:>12.3e}",
            1.0 - fidelity
        );
    }
    println!("\nthe no-click probability and the Bell fidelity both approach 1 as k grows");
}
