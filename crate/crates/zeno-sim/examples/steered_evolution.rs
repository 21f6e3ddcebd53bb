//! The composite that steers different initial states to different Bell
//! targets: k steps, a phase flip of the first qubit, then k/2 more steps.
//!
//! ```bash
//! cargo run --example steered_evolution
//! ```

use zeno_sim::robustness::ps_exact;
use zeno_sim::subspace::{intelligent_evolution, protocol_theta, SubspaceState};

fn main() {
    for k in [50usize, 100, 1000] {
        let theta = protocol_theta(k);
        let g = intelligent_evolution(k, theta).unwrap();

        let v = g.apply([1.0, 0.0, 0.0]);
        let from_00 = SubspaceState::new(v[0], v[1], v[2]);
        let v = g.apply([0.0, 1.0, 0.0]);
        let from_10 = SubspaceState::new(v[0], v[1], v[2]);

        println!("k = {k}, theta = {theta:.8}");
        println!(
            "  |00> -> psi-   fidelity {:.8}",
            from_00.fidelity(&SubspaceState::psi_minus())
        );
        println!(
            "  |10> -> -psi+  fidelity {:.8}",
            from_10.fidelity(&SubspaceState::psi_plus())
        );
        println!(
            "  perfect-result probability P_s = {:.6}\n",
            ps_exact(k, theta).unwrap()
        );
    }
    println!("one program, two orthogonal Bell outputs: the ingredient that lets a");
    println!("cluster chain grow without any two-qubit gate");
}
