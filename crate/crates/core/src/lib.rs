//! Dense statevector simulation and scalable Grover search circuits.
//!
//! Two all-ones oracle constructions are provided: an ancilla-free
//! multi-controlled Z built from a controlled-phase ladder
//! ([`grover::build_cnz`]) and the Toffoli-ladder "V-Oracle"
//! ([`grover::build_v_oracle`]) using `n - 2` ancillas. Either one is
//! retargeted to any bit pattern by X conjugation, wrapped into the
//! inversion-about-the-mean diffusion, and repeated into a full search
//! circuit. [`analytic`] carries the two-amplitude recurrence used to
//! cross-check the simulator.
//!
//! Bit strings print qubit 0 first; see [`bits`].

pub mod analytic;
pub mod bits;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod gates;
pub mod grover;
pub mod statevector;

pub use circuit::{Circuit, CircuitStats, GateOp};
pub use error::{Error, Result};
pub use gates::{gate_matrix, GateKind, GateMatrix};
pub use grover::{OracleStyle, Pattern};
pub use statevector::{circuit_unitary, Histogram, StateVector};
