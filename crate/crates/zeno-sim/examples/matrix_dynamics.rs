//! The 3x3 no-click operator, its powers, and the small-angle closed form
//! for its decaying corner entry.
//!
//! ```bash
//! cargo run --example matrix_dynamics
//! ```

use zeno_sim::subspace::{analytic_m11, build_w, matrix_power, protocol_theta, SubspaceMatrix};

fn print_matrix(label: &str, m: &SubspaceMatrix) {
    println!("{label} (basis |00>, |10>, |01>):");
    for row in m.entries() {
        println!("  [{:>10.6} {:>10.6} {:>10.6}]", row[0], row[1], row[2]);
    }
}

fn main() {
    let theta = protocol_theta(100);
    println!("one step at theta = {theta:.8}\n");
    print_matrix("W", &build_w(theta));

    println!();
    print_matrix("W^100", &matrix_power(&build_w(theta), 100));

    println!("\ncorner entry vs. its small-angle closed form cos(sqrt(2) k sin(theta)):");
    println!(
        "{:>6}  {:>12}  {:>12}  {:>10}",
        "k", "exact", "closed form", "|diff|"
    );
    for k in [25, 50, 75, 100, 200] {
        let exact = matrix_power(&build_w(theta), k).entry(0, 0);
        let approx = analytic_m11(k, theta);
        println!(
            "{k:>6}  {exact:>12.8}  {approx:>12.8}  {:>10.2e}",
            (exact - approx).abs()
        );
    }
    println!("\nthe closed form hits zero exactly at k*theta = pi/(2 sqrt(2)), i.e. k = 100 here");
}
