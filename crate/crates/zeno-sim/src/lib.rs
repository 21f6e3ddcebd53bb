//! Two-qubit entanglement from repeated threshold measurements.
//!
//! This crate simulates a protocol that entangles a qubit pair using nothing
//! but small identical single-qubit rotations and a collective *threshold*
//! measurement: a detector that fires exactly when both qubits sit in `|1>`.
//! Measuring frequently pins the pair inside the no-click subspace while the
//! rotations steer it, so `|00>` drifts into the Bell state
//! `(|01> + |10>)/sqrt(2)` almost deterministically. The same mechanism,
//! applied to the last link of a chain, grows linear cluster states without
//! any two-qubit gate.
//!
//! # What's here
//!
//! - [`qstate`]: dense state vectors, single-qubit gates, the threshold
//!   projector and fidelity helpers.
//! - [`subspace`]: exact 3x3 dynamics of one protocol step on the no-click
//!   subspace: step operators, powers, the steered composite with a
//!   mid-protocol phase flip, and closed-form approximations.
//! - [`trajectory`]: stochastic runs with sampled click/no-click outcomes and
//!   seeded, counter-based Monte Carlo estimates.
//! - [`cluster`]: chain growth by repeated measurement, verified against an
//!   independent controlled-phase construction.
//! - [`robustness`]: Monte Carlo sweeps of rotation-angle errors and the
//!   `P_s` figure of merit.
//! - [`flux`]: the flux-qubit parameter mapping and the gauge argument that
//!   connects hardware tunneling to the idealized rotations.
//! - [`report`]: the JSON/CSV report envelope behind the `zeno` binary.
//!
//! # Example
//!
//! ```
//! use zeno_sim::subspace::{build_w, matrix_power, protocol_theta,
//!     success_probability, SubspaceState};
//!
//! // 100 steps at the matched angle steer |00> to the Bell target
//! let theta = protocol_theta(100);
//! let evolution = matrix_power(&build_w(theta), 100);
//! let success = success_probability(&evolution, &SubspaceState::ket_00());
//! assert!((success - 0.988).abs() < 1e-3);
//!
//! let image = evolution.apply([1.0, 0.0, 0.0]);
//! let final_state = SubspaceState::new(image[0], image[1], image[2]);
//! assert!(final_state.fidelity(&SubspaceState::psi_plus()) > 0.9999);
//! ```
//!
//! Runnable walkthroughs for every capability live in `examples/`; the thin
//! `zeno` binary exposes the same operations as subcommands that emit
//! versioned JSON reports.

pub mod cluster;
pub mod error;
pub mod flux;
pub mod qstate;
pub mod report;
pub mod robustness;
pub mod subspace;
pub mod trajectory;

pub use error::{Error, Result};
