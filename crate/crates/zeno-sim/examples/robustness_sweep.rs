//! How per-step rotation errors affect the outcome, and why more
//! measurements make the protocol *less* sensitive to them, not more.
//!
//! ```bash
//! cargo run --release --example robustness_sweep
//! ```

use zeno_sim::robustness::{robustness_table, DEFAULT_EPS, DEFAULT_KS};
use zeno_sim::trajectory::RngSeed;

fn main() {
    let trials = 20_000;
    let table = robustness_table(&DEFAULT_KS, &DEFAULT_EPS, trials, RngSeed::from_master(1))
        .expect("valid grid");

    print!("{:>6}", "k\\eps");
    for eps in DEFAULT_EPS {
        print!("  {:>8.0}%", eps * 100.0);
    }
    println!();
    for (i, k) in DEFAULT_KS.iter().enumerate() {
        print!("{k:>6}");
        for j in 0..DEFAULT_EPS.len() {
            print!("  {:>9.4}", table.cell(i, j).mean);
        }
        println!();
    }

    println!(
        "\nper-step angles are drawn uniformly from [theta(1-eps), theta(1+eps)], \
         {trials} trials per cell"
    );
    println!("reading down any column: more steps, better means; errors do not accumulate");
}
