//! QDI property checkers: phase monotonicity, acknowledgement of internal
//! signals, indication classification, protocol-duality transforms, and
//! randomized delay sweeps.
//!
//! These run against raw datapath netlists (driving port rails directly)
//! or against measured transaction traces. They are the part of the suite
//! that distinguishes "computes the right sums" from "is actually
//! delay-insensitive": a circuit can pass every functional sweep and still
//! hide an unacknowledged transition that only a pathological delay
//! assignment exposes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adders::{oracle, AdderError, AdderIo};
use crate::handshake::{Fixture, HandshakeError, TransactionTrace};
use crate::netlist::{NetId, Netlist};
use crate::protocol::{decode, encode, DualRailValue, Protocol};
use crate::sim::{DelayModel, SimError, SimState, SimTime, DEFAULT_EVENT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckError {
    Sim(SimError),
    Handshake(HandshakeError),
    Shape(AdderError),
    /// The netlist failed structural validation.
    InvalidNetlist { violations: usize },
    BadScenario(String),
    /// Trial or delay-range parameters out of range.
    BadParameters(String),
}

impl From<SimError> for CheckError {
    fn from(e: SimError) -> Self {
        CheckError::Sim(e)
    }
}

impl From<HandshakeError> for CheckError {
    fn from(e: HandshakeError) -> Self {
        CheckError::Handshake(e)
    }
}

impl From<AdderError> for CheckError {
    fn from(e: AdderError) -> Self {
        CheckError::Shape(e)
    }
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckError::Sim(e) => write!(f, "{e}"),
            CheckError::Handshake(e) => write!(f, "{e}"),
            CheckError::Shape(e) => write!(f, "{e}"),
            CheckError::InvalidNetlist { violations } => {
                write!(f, "netlist has {violations} structural violations")
            }
            CheckError::BadScenario(why) => write!(f, "bad scenario: {why}"),
            CheckError::BadParameters(why) => write!(f, "bad parameters: {why}"),
        }
    }
}

impl core::error::Error for CheckError {}

/// A net that moved the wrong way, or more than once, within a phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicViolation {
    pub net: NetId,
    pub name: String,
    pub time: SimTime,
    pub data_phase: bool,
    pub detail: &'static str,
}

impl fmt::Display for MonotonicViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phase = if self.data_phase { "data" } else { "spacer" };
        write!(
            f,
            "net {} at t={} ({phase} phase): {}",
            self.name, self.time, self.detail
        )
    }
}

/// Verify that every net moves monotonically within each handshake phase:
/// rising-only while data spreads and falling-only while the spacer does
/// (mirrored for return-to-one), at most one move per net per phase.
/// Environment nets recorded in the trace (the inverted acknowledge) are
/// exempt, since they switch against the datapath by design.
pub fn check_monotonic(
    nl: &Netlist,
    trace: &TransactionTrace,
    protocol: Protocol,
) -> Vec<MonotonicViolation> {
    let mut violations = Vec::new();
    // moves[net] = (data-phase count, spacer-phase count)
    let mut moves = alloc::vec![(0u32, 0u32); nl.net_count()];
    let data_rising = match protocol {
        Protocol::Rtz => true,
        Protocol::Rto => false,
    };
    for t in &trace.log {
        if trace.env_nets.contains(&t.net) {
            continue;
        }
        let data_phase = t.time < trace.spacer_at;
        let counts = &mut moves[t.net.index()];
        let count = if data_phase {
            counts.0 += 1;
            counts.0
        } else {
            counts.1 += 1;
            counts.1
        };
        let want_rising = if data_phase { data_rising } else { !data_rising };
        let mut push = |detail| {
            violations.push(MonotonicViolation {
                net: t.net,
                name: nl.net_name(t.net),
                time: t.time,
                data_phase,
                detail,
            })
        };
        if t.level != want_rising {
            push(if want_rising {
                "fell in a rising phase"
            } else {
                "rose in a falling phase"
            });
        } else if count > 1 {
            push("moved more than once in a phase");
        }
    }
    violations
}

/// Stimulus for the acknowledgement check: one data vector and the input
/// ports whose return to spacer is deliberately delayed.
#[derive(Debug, Clone)]
pub struct StaggerScenario {
    /// Logical bits for the input ports, in declaration order.
    pub values: Vec<bool>,
    /// Indices of input ports held at data while the rest get the spacer.
    pub hold: Vec<usize>,
}

/// An internal net left at its data-phase level although every primary
/// output already reads as spacer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AckViolation {
    pub net: NetId,
    pub name: String,
    pub level: bool,
}

impl fmt::Display for AckViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "net {} stuck at {} after outputs completed",
            self.name, self.level as u8
        )
    }
}

fn settle_idle(nl: &Netlist, sim: &mut SimState<'_>, protocol: Protocol) -> Result<(), CheckError> {
    sim.schedule_all_gates();
    sim.run_until_quiescent(DEFAULT_EVENT_BUDGET)?;
    if protocol == Protocol::Rto {
        let t = sim.time();
        for p in nl.inputs() {
            sim.set_level(p.rails.rail1, true, t)?;
            sim.set_level(p.rails.rail0, true, t)?;
        }
        sim.run_until_quiescent(DEFAULT_EVENT_BUDGET)?;
    }
    Ok(())
}

fn drive_port(
    sim: &mut SimState<'_>,
    nl: &Netlist,
    port: usize,
    value: DualRailValue,
    protocol: Protocol,
) -> Result<(), CheckError> {
    let rails = nl.inputs()[port].rails;
    let (r1, r0) = encode(value, protocol);
    let t = sim.time();
    sim.set_level(rails.rail1, r1, t)?;
    sim.set_level(rails.rail0, r0, t)?;
    Ok(())
}

fn read_port(sim: &SimState<'_>, nl: &Netlist, port: usize, protocol: Protocol) -> DualRailValue {
    let rails = nl.outputs()[port].rails;
    decode(sim.level(rails.rail1), sim.level(rails.rail0), protocol)
}

fn outputs_all(
    sim: &SimState<'_>,
    nl: &Netlist,
    protocol: Protocol,
    data: bool,
) -> bool {
    (0..nl.outputs().len()).all(|i| {
        let v = read_port(sim, nl, i, protocol);
        if data {
            v.is_data()
        } else {
            v == DualRailValue::Spacer
        }
    })
}

/// Drive a data vector, then return only part of the inputs to spacer.
/// If every primary output nevertheless reads as spacer, each gate-output
/// net still away from its idle level is an unacknowledged signal: the
/// completion detector downstream would hand the environment a finished
/// handshake while the circuit still holds state from the last datum.
pub fn check_acknowledgement(
    nl: &Netlist,
    protocol: Protocol,
    scenario: &StaggerScenario,
    delays: &DelayModel,
) -> Result<Vec<AckViolation>, CheckError> {
    if scenario.values.len() != nl.inputs().len() {
        return Err(CheckError::BadScenario(format!(
            "{} values for {} input ports",
            scenario.values.len(),
            nl.inputs().len()
        )));
    }
    if let Some(&bad) = scenario.hold.iter().find(|&&i| i >= nl.inputs().len()) {
        return Err(CheckError::BadScenario(format!("held port {bad} out of range")));
    }
    let mut sim = SimState::new(nl, delays)?;
    settle_idle(nl, &mut sim, protocol)?;
    let idle: Vec<bool> = sim.levels().to_vec();

    for (i, &bit) in scenario.values.iter().enumerate() {
        drive_port(&mut sim, nl, i, DualRailValue::from_bit(bit), protocol)?;
    }
    sim.run_until_quiescent(DEFAULT_EVENT_BUDGET)?;
    if !outputs_all(&sim, nl, protocol, true) {
        return Err(CheckError::BadScenario(String::from(
            "data vector does not complete all outputs",
        )));
    }

    for i in 0..nl.inputs().len() {
        if !scenario.hold.contains(&i) {
            drive_port(&mut sim, nl, i, DualRailValue::Spacer, protocol)?;
        }
    }
    sim.run_until_quiescent(DEFAULT_EVENT_BUDGET)?;

    let mut violations = Vec::new();
    if outputs_all(&sim, nl, protocol, false) {
        // Outputs claim the spacer arrived everywhere. Every gate output
        // still off idle is unacknowledged: nothing downstream will wait
        // for its return.
        for g in nl.gates() {
            let net = g.output;
            if sim.level(net) != idle[net.index()] {
                violations.push(AckViolation {
                    net,
                    name: nl.net_name(net),
                    level: sim.level(net),
                });
            }
        }
    }
    Ok(violations)
}

/// How a block's outputs relate to the arrival of its inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndicationClass {
    /// No output moves before the last input, for any value, either phase.
    Strong,
    /// Some outputs move early, but completing all of them always takes
    /// the full input set.
    Weak,
    /// For some value, a proper input subset completes (or resets) every
    /// output.
    EarlyOutput { early_set: bool, early_reset: bool },
    /// Budget ran out before the classification was decidable.
    Unknown,
}

impl fmt::Display for IndicationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndicationClass::Strong => write!(f, "strong"),
            IndicationClass::Weak => write!(f, "weak"),
            IndicationClass::EarlyOutput {
                early_set,
                early_reset,
            } => {
                write!(f, "early-output (")?;
                match (early_set, early_reset) {
                    (true, true) => write!(f, "set and reset")?,
                    (true, false) => write!(f, "set")?,
                    (false, true) => write!(f, "reset")?,
                    (false, false) => write!(f, "neither phase??")?,
                }
                write!(f, ")")
            }
            IndicationClass::Unknown => write!(f, "unknown"),
        }
    }
}

/// One observed completion on a proper input subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicationWitness {
    /// The data vector in force.
    pub values: Vec<bool>,
    /// Port whose transition the outputs failed to wait for.
    pub withheld_port: usize,
    /// True when observed while setting data, false while resetting.
    pub data_phase: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicationReport {
    pub class: IndicationClass,
    pub witnesses: Vec<IndicationWitness>,
    /// Simulated subset experiments.
    pub experiments: u64,
    /// True when every value (and every all-but-one subset) was tried.
    pub exhaustive: bool,
    /// Values whose full application never completes all outputs; they are
    /// excluded from the classification.
    pub degenerate_values: u64,
}

const WITNESS_CAP: usize = 8;

/// Classify a block's indication by withholding one input at a time.
///
/// Because every gate in the library is positive-unate per phase, a
/// subset that completes the outputs stays completed under any superset,
/// so testing all `n` all-but-one subsets per value decides the class
/// exactly. Values are enumerated exhaustively up to 2^14 and sampled with
/// a seeded generator beyond that; `budget` caps the total number of
/// subset experiments, and running out of it before any early completion
/// was seen yields `Unknown`.
pub fn classify_indication(
    nl: &Netlist,
    protocol: Protocol,
    budget: u64,
    seed: u64,
) -> Result<IndicationReport, CheckError> {
    let violations = nl.validate();
    if !violations.is_empty() {
        return Err(CheckError::InvalidNetlist {
            violations: violations.len(),
        });
    }
    let ports = nl.inputs().len();
    if ports == 0 || nl.outputs().is_empty() {
        return Err(CheckError::BadScenario(String::from("block has no ports")));
    }

    let delays = DelayModel::unit();
    let mut sim = SimState::new(nl, &delays)?;
    settle_idle(nl, &mut sim, protocol)?;
    let idle: Vec<bool> = sim.levels().to_vec();

    let exhaustive = ports <= 14;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let value_count: u64 = if exhaustive {
        1u64 << ports
    } else {
        // Sampling bound; the experiment loop stops at the budget anyway.
        budget / (2 * ports as u64) + 1
    };

    let mut experiments = 0u64;
    let mut degenerate = 0u64;
    let mut early_set = false;
    let mut early_reset = false;
    let mut any_early_single = false;
    let mut witnesses = Vec::new();
    let mut out_of_budget = false;

    'values: for vi in 0..value_count {
        let values: Vec<bool> = if exhaustive {
            (0..ports).map(|p| vi >> p & 1 == 1).collect()
        } else {
            (0..ports).map(|_| rng.gen()).collect()
        };

        // Does the full vector complete at all?
        for (p, &bit) in values.iter().enumerate() {
            drive_port(&mut sim, nl, p, DualRailValue::from_bit(bit), protocol)?;
        }
        sim.run_until_quiescent(DEFAULT_EVENT_BUDGET)?;
        let completes = outputs_all(&sim, nl, protocol, true);
        for p in 0..ports {
            drive_port(&mut sim, nl, p, DualRailValue::Spacer, protocol)?;
        }
        sim.run_until_quiescent(DEFAULT_EVENT_BUDGET)?;
        if sim.levels() != &idle[..] {
            // A held element kept state across the retraction; start clean.
            sim = SimState::new(nl, &delays)?;
            settle_idle(nl, &mut sim, protocol)?;
        }
        if !completes {
            degenerate += 1;
            continue;
        }

        for withheld in 0..ports {
            if experiments >= budget {
                out_of_budget = true;
                break 'values;
            }
            experiments += 2;

            // Set phase: everything but `withheld` gets the data value.
            for (p, &bit) in values.iter().enumerate() {
                if p != withheld {
                    drive_port(&mut sim, nl, p, DualRailValue::from_bit(bit), protocol)?;
                }
            }
            sim.run_until_quiescent(DEFAULT_EVENT_BUDGET)?;
            let all_data = outputs_all(&sim, nl, protocol, true);
            let some_moved = !sim.levels()[..]
                .iter()
                .zip(&idle)
                .all(|(a, b)| a == b);
            if all_data {
                early_set = true;
                if witnesses.len() < WITNESS_CAP {
                    witnesses.push(IndicationWitness {
                        values: values.clone(),
                        withheld_port: withheld,
                        data_phase: true,
                    });
                }
            }
            if some_moved {
                // Any output pair partially or fully at data counts as
                // early movement for the weak/strong distinction.
                let output_moved = (0..nl.outputs().len()).any(|i| {
                    read_port(&sim, nl, i, protocol) != DualRailValue::Spacer
                });
                any_early_single |= output_moved;
            }

            // Finish the application so the reset experiment starts from a
            // completed handshake.
            drive_port(
                &mut sim,
                nl,
                withheld,
                DualRailValue::from_bit(values[withheld]),
                protocol,
            )?;
            sim.run_until_quiescent(DEFAULT_EVENT_BUDGET)?;

            // Reset phase: spacer everywhere but `withheld`.
            for p in 0..ports {
                if p != withheld {
                    drive_port(&mut sim, nl, p, DualRailValue::Spacer, protocol)?;
                }
            }
            sim.run_until_quiescent(DEFAULT_EVENT_BUDGET)?;
            if outputs_all(&sim, nl, protocol, false) {
                early_reset = true;
                if witnesses.len() < WITNESS_CAP {
                    witnesses.push(IndicationWitness {
                        values: values.clone(),
                        withheld_port: withheld,
                        data_phase: false,
                    });
                }
            }

            // Back to idle for the next experiment.
            drive_port(&mut sim, nl, withheld, DualRailValue::Spacer, protocol)?;
            sim.run_until_quiescent(DEFAULT_EVENT_BUDGET)?;
            if sim.levels() != &idle[..] {
                sim = SimState::new(nl, &delays)?;
                settle_idle(nl, &mut sim, protocol)?;
            }
        }
    }

    let class = if early_set || early_reset {
        IndicationClass::EarlyOutput {
            early_set,
            early_reset,
        }
    } else if out_of_budget {
        IndicationClass::Unknown
    } else if any_early_single {
        IndicationClass::Weak
    } else {
        IndicationClass::Strong
    };
    Ok(IndicationReport {
        class,
        witnesses,
        experiments,
        exhaustive: exhaustive && !out_of_budget,
        degenerate_values: degenerate,
    })
}

/// Swap every gate for its De Morgan dual, keeping the C-elements and all
/// connectivity, and flip the protocol tag. Involutive.
pub fn dual_transform(nl: &Netlist) -> Result<Netlist, CheckError> {
    let violations = nl.validate();
    if !violations.is_empty() {
        return Err(CheckError::InvalidNetlist {
            violations: violations.len(),
        });
    }
    Ok(nl.dual())
}

/// One failed transaction under a randomized delay assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustnessFailure {
    pub trial: u64,
    pub trial_seed: u64,
    pub x: u64,
    pub y: u64,
    pub cin: bool,
    pub reason: String,
}

impl fmt::Display for RobustnessFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trial {} (seed {:#x}) x={:#x} y={:#x} cin={}: {}",
            self.trial, self.trial_seed, self.x, self.y, self.cin as u8, self.reason
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustnessReport {
    pub trials: u64,
    pub transactions: u64,
    pub delay_range: (u32, u32),
    pub base_seed: u64,
    pub failures: Vec<RobustnessFailure>,
}

impl RobustnessReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

fn trial_seed(base: u64, trial: u64) -> u64 {
    base ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Exercise an adder-shaped netlist under independently randomized
/// per-gate delays. Each trial assigns every fixture gate a uniform delay
/// from `delay_range`, then runs a batch of random vectors; a failure is
/// any transaction error, oracle mismatch, or phase-monotonicity
/// violation. Delay insensitivity predicts zero failures at any range.
pub fn delay_robustness(
    nl: &Netlist,
    protocol: Protocol,
    trials: u64,
    delay_range: (u32, u32),
    vectors_per_trial: usize,
    seed: u64,
) -> Result<RobustnessReport, CheckError> {
    let (lo, hi) = delay_range;
    if trials == 0 || vectors_per_trial == 0 {
        return Err(CheckError::BadParameters(String::from(
            "trials and vectors per trial must be positive",
        )));
    }
    if lo == 0 || lo > hi {
        return Err(CheckError::BadParameters(format!(
            "delay range [{lo}, {hi}] must satisfy 1 <= lo <= hi"
        )));
    }
    let io = AdderIo::from_netlist(nl)?;
    let width = io.width();
    let mask = if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    let fixture = Fixture::build(nl, protocol)?;

    let mut transactions = 0u64;
    let mut failures = Vec::new();
    for trial in 0..trials {
        let ts = trial_seed(seed, trial);
        let mut rng = ChaCha8Rng::seed_from_u64(ts);
        let mut delays = DelayModel::unit();
        for g in fixture.netlist().gate_ids() {
            delays.set_override(g, rng.gen_range(lo..=hi))?;
        }
        let mut session = fixture.session(&delays)?;
        let fail = |x, y, cin, reason: String, failures: &mut Vec<RobustnessFailure>| {
            failures.push(RobustnessFailure {
                trial,
                trial_seed: ts,
                x,
                y,
                cin,
                reason,
            })
        };
        for _ in 0..vectors_per_trial {
            let x = rng.gen::<u64>() & mask;
            let y = rng.gen::<u64>() & mask;
            let cin = rng.gen::<bool>();
            transactions += 1;
            match session.run_transaction(&io.input_vector(x, y, cin)) {
                Err(e) => {
                    fail(x, y, cin, format!("{e}"), &mut failures);
                    // The session may be wedged; restart it for the rest
                    // of the trial.
                    session = fixture.session(&delays)?;
                }
                Ok(trace) => {
                    match io.decode_outputs(&trace.outputs) {
                        Err(e) => fail(x, y, cin, format!("{e}"), &mut failures),
                        Ok(got) => {
                            let want = oracle(x, y, cin, width);
                            if got != want {
                                fail(
                                    x,
                                    y,
                                    cin,
                                    format!(
                                        "decoded {:#x}/{} want {:#x}/{}",
                                        got.0, got.1 as u8, want.0, want.1 as u8
                                    ),
                                    &mut failures,
                                );
                            }
                        }
                    }
                    let mono = check_monotonic(fixture.netlist(), &trace, protocol);
                    if let Some(v) = mono.first() {
                        fail(x, y, cin, format!("{v}"), &mut failures);
                    }
                }
            }
        }
    }
    Ok(RobustnessReport {
        trials,
        transactions,
        delay_range,
        base_seed: seed,
        failures,
    })
}

/// Acknowledgement sweep: the staggered-spacer check repeated under
/// randomized per-gate delays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AckSweep {
    pub trials: u64,
    pub trials_with_violations: u64,
    /// Violations from the first offending trial.
    pub sample: Vec<AckViolation>,
}

pub fn randomized_acknowledgement(
    nl: &Netlist,
    protocol: Protocol,
    scenario: &StaggerScenario,
    trials: u64,
    delay_range: (u32, u32),
    seed: u64,
) -> Result<AckSweep, CheckError> {
    let (lo, hi) = delay_range;
    if trials == 0 || lo == 0 || lo > hi {
        return Err(CheckError::BadParameters(format!(
            "trials {trials}, delay range [{lo}, {hi}]"
        )));
    }
    let mut bad = 0u64;
    let mut sample = Vec::new();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, trial));
        let mut delays = DelayModel::unit();
        for g in nl.gate_ids() {
            delays.set_override(g, rng.gen_range(lo..=hi))?;
        }
        let violations = check_acknowledgement(nl, protocol, scenario, &delays)?;
        if !violations.is_empty() {
            if sample.is_empty() {
                sample = violations;
            }
            bad += 1;
        }
    }
    Ok(AckSweep {
        trials,
        trials_with_violations: bad,
        sample,
    })
}

/// Combined result of the standard checker battery over one netlist.
#[derive(Debug, Clone)]
pub struct QdiReport {
    pub monotonic: Vec<MonotonicViolation>,
    pub acknowledgement: Vec<AckViolation>,
    pub indication: Option<IndicationReport>,
    pub robustness: Option<RobustnessReport>,
}

impl QdiReport {
    pub fn is_clean(&self) -> bool {
        self.monotonic.is_empty()
            && self.acknowledgement.is_empty()
            && self.robustness.as_ref().map_or(true, |r| r.is_clean())
    }
}

impl fmt::Display for QdiReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "monotonicity violations: {}", self.monotonic.len())?;
        for v in self.monotonic.iter().take(8) {
            writeln!(f, "  {v}")?;
        }
        writeln!(f, "acknowledgement violations: {}", self.acknowledgement.len())?;
        for v in self.acknowledgement.iter().take(8) {
            writeln!(f, "  {v}")?;
        }
        if let Some(ind) = &self.indication {
            writeln!(
                f,
                "indication: {} ({} experiments{}, {} degenerate values)",
                ind.class,
                ind.experiments,
                if ind.exhaustive { ", exhaustive" } else { "" },
                ind.degenerate_values
            )?;
        }
        if let Some(r) = &self.robustness {
            writeln!(
                f,
                "delay robustness: {} failures in {} transactions over {} trials, delays [{}, {}]",
                r.failures.len(),
                r.transactions,
                r.trials,
                r.delay_range.0,
                r.delay_range.1
            )?;
            for v in r.failures.iter().take(4) {
                writeln!(f, "  {v}")?;
            }
        }
        write!(
            f,
            "verdict: {}",
            if self.is_clean() { "clean" } else { "VIOLATIONS" }
        )
    }
}
