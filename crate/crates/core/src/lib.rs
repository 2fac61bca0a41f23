//! Quantum-search user scheduling for massive-MIMO downlinks.
//!
//! The crate simulates a base station choosing, slot by slot, which subset
//! of users to serve. Candidate schedules are binary vectors over `T` users;
//! a Grover-style search over the `2^T`-state register marks high-reward
//! schedules with a phase oracle, amplifies them by inversion about the
//! mean, and measures one to act on. Rewards come from a correlated Rician
//! channel model with DFT codebook beamforming and a proportional-fairness
//! objective over exponentially averaged rates.
//!
//! Modules:
//! - [`chanmod`]: channel generation and beam selection
//! - [`ratemod`]: SINR, rates, and the PF objective/state
//! - [`qsim`]: dense statevector simulator for the circuit's gate set
//! - [`grover`]: iteration composition and closed-form success analytics
//! - [`qrl`]: the training loop marking/amplifying/measuring schedules
//! - [`baselines`]: exhaustive, greedy, and random reference schedulers
//! - [`harness`]: experiment configs, sweeps, and CSV/JSON results
//!
//! The `msched` binary drives convergence runs and parameter sweeps from
//! key=value config files.

pub mod baselines;
pub mod chanmod;
pub mod error;
pub mod grover;
pub mod harness;
pub mod qrl;
pub mod qsim;
pub mod ratemod;
mod rng;

pub use error::{Error, Result};
