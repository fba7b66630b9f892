//! Construction, simulation and verification of quasi-delay-insensitive
//! dual-rail adders.
//!
//! The crate is organised as a pipeline:
//!
//! * [`netlist`] -- gate-level netlists over a fixed complex-gate library
//!   (AND/OR up to 4 inputs, AO/OA complex gates, the Muller C-element and
//!   an environment-only inverter), with structural validation and a
//!   De Morgan dual transform.
//! * [`sim`] -- a deterministic discrete-event simulator with transport
//!   delays and per-gate delay overrides.
//! * [`protocol`] / [`handshake`] -- return-to-zero and return-to-one
//!   dual-rail encodings, completion detection and a self-checking
//!   handshake fixture that cycles data/spacer transactions and measures
//!   forward latency, reverse latency and cycle time.
//! * [`adders`] -- generators for ripple-carry, block carry-lookahead
//!   (BCLA), redundant-carry lookahead (BCLARC) and hybrid RCA/BCLARC
//!   adders, built from early-output full adders, XOR3 blocks and 4-bit
//!   lookahead carry generators.
//! * [`latency`] -- closed-form latency models for the lookahead adders.
//! * [`metrics`] -- worst-case vector sets, measurement sweeps and static
//!   path analysis.
//! * [`checks`] -- phase monotonicity, acknowledgement (orphan) detection,
//!   input-completeness classification and randomized delay robustness.
//!
//! The crate is `no_std` (alloc required); file formats and the command
//! line front end live in the companion `qdi-tools` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod adders;
pub mod checks;
pub mod handshake;
pub mod latency;
pub mod metrics;
pub mod netlist;
pub mod protocol;
pub mod sim;

pub use adders::{build_adder, oracle, Adder, AdderArch, AdderIo, Census};
pub use checks::{
    check_acknowledgement, check_monotonic, classify_indication, delay_robustness,
    dual_transform, randomized_acknowledgement, AckViolation, IndicationClass,
    IndicationReport, MonotonicViolation, QdiReport, RobustnessReport, StaggerScenario,
};
pub use latency::{analytic_latency, LatencyBreakdown, Term};
pub use handshake::{Fixture, Session, TransactionTrace};
pub use metrics::{
    longest_input_to_output_path, measure_metrics, transition_power_proxy,
    worst_case_vectors, Aggregate, PathAnalysis, VectorResult,
};
pub use netlist::{DualRailPort, Gate, GateId, GateKind, Net, NetId, Netlist, PortDir, RailPair};
pub use protocol::{decode, encode, DualRailValue, Protocol};
pub use sim::{DelayModel, SimState, SimTime, Transition};
