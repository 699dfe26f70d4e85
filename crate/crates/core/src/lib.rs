//! Quantum imaginary time evolution (QITE) for polynomial unconstrained
//! binary optimization, simulated classically.
//!
//! Two engines share one step loop:
//!
//! * [`linear`]: product states, one Bloch angle per qubit, with generators
//!   `sum_j a_j Y_j`. Scales to hundreds of qubits.
//! * [`quad`]: exact statevectors with generators over all `Y_j` and
//!   `Y_i Y_j`, up to 20 qubits.
//!
//! Problems are diagonal Z-string Hamiltonians ([`hamiltonian`]) built by
//! [`problems`] for weighted MaxCut and LABS. [`baselines`] holds the
//! classical references and [`experiments`] the seeded sweep drivers.

pub mod baselines;
pub mod error;
pub mod experiments;

pub mod graphs;
pub mod hamiltonian;
pub mod linear;
pub mod problems;
pub mod quad;
pub mod restarts;
pub mod rng;
pub mod schedule;
pub mod solve;
pub mod trace;

pub use error::{Error, Result};
