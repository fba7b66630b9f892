//! Four-phase handshake environment: completion detection, input
//! registration and transaction measurement.
//!
//! [`Fixture::build`] wraps a dual-rail datapath the way a pipeline stage
//! would see it: a C-element register on every input rail (gated by the
//! inverted acknowledge), a completion detector over all primary outputs,
//! and an inverter closing the acknowledge loop. The environment model is
//! maximally patient: a [`Session`] applies data, waits for full
//! quiescence, applies the spacer, and waits again, so measured latencies
//! are pure datapath properties.
//!
//! Latency conventions: forward latency is the time from data application
//! until the last primary-output rail reaches its data value; reverse
//! latency is measured the same way for the spacer phase; cycle time is
//! their sum. Acknowledge timing is recorded separately in the trace and
//! never folded into those figures.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::netlist::{DualRailPort, GateId, GateKind, NetId, Netlist, PortDir};
use crate::protocol::{decode, encode, DualRailValue, Protocol};
use crate::sim::{DelayModel, SimError, SimState, SimTime, Transition, DEFAULT_EVENT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HandshakeError {
    ProtocolMismatch {
        datapath: Protocol,
        requested: Protocol,
    },
    /// The datapath failed structural validation.
    InvalidDatapath { violations: usize },
    /// A fixture needs at least one input and one output port.
    NoPorts,
    InputCountMismatch { got: usize, want: usize },
    /// An output pair had both rails active.
    IllegalOutput { port: String },
    /// An output never reached its data value in the data phase.
    IncompleteData { port: String },
    /// An output never returned to the spacer in the spacer phase.
    IncompleteSpacer { port: String },
    /// The acknowledge failed to switch in the given phase.
    AckStuck { data_phase: bool },
    /// At idle, an output does not decode to the spacer.
    NotIdle { port: String },
    /// The fixture did not return to its idle levels after a transaction.
    NotRestored,
    Sim(SimError),
}

impl From<SimError> for HandshakeError {
    fn from(e: SimError) -> Self {
        HandshakeError::Sim(e)
    }
}

impl fmt::Display for HandshakeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HandshakeError::ProtocolMismatch {
                datapath,
                requested,
            } => write!(f, "datapath is tagged {datapath}, fixture requested {requested}"),
            HandshakeError::InvalidDatapath { violations } => {
                write!(f, "datapath has {violations} structural violations")
            }
            HandshakeError::NoPorts => write!(f, "datapath has no input or no output ports"),
            HandshakeError::InputCountMismatch { got, want } => {
                write!(f, "transaction supplied {got} values for {want} input ports")
            }
            HandshakeError::IllegalOutput { port } => {
                write!(f, "output {port} decoded illegal (both rails active)")
            }
            HandshakeError::IncompleteData { port } => {
                write!(f, "output {port} stuck at spacer in the data phase")
            }
            HandshakeError::IncompleteSpacer { port } => {
                write!(f, "output {port} stuck at data in the spacer phase")
            }
            HandshakeError::AckStuck { data_phase } => write!(
                f,
                "acknowledge did not switch after the {} phase",
                if *data_phase { "data" } else { "spacer" }
            ),
            HandshakeError::NotIdle { port } => {
                write!(f, "output {port} not at spacer in the idle state")
            }
            HandshakeError::NotRestored => {
                write!(f, "fixture did not return to idle levels after the transaction")
            }
            HandshakeError::Sim(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for HandshakeError {}

/// Add a completion detector over the given rail pairs.
///
/// Each pair feeds an OR2 (RTZ) or AND2 (RTO), and the per-pair outputs are
/// merged by a balanced tree of C-elements of depth `ceil(log2(pairs))`;
/// a single pair's gate output is the detector output directly. The result
/// goes high on RTZ (low on RTO) once every pair holds data, returns once
/// every pair holds the spacer, and holds its value in between.
pub fn build_completion_detector(
    nl: &mut Netlist,
    pairs: &[(NetId, NetId)],
    protocol: Protocol,
    tag: &str,
) -> Result<NetId, HandshakeError> {
    if pairs.is_empty() {
        return Err(HandshakeError::NoPorts);
    }
    let pair_kind = match protocol {
        Protocol::Rtz => GateKind::Or2,
        Protocol::Rto => GateKind::And2,
    };
    let mut nodes = Vec::with_capacity(pairs.len());
    for (i, &(r1, r0)) in pairs.iter().enumerate() {
        let (_, out) = nl
            .add_gate(pair_kind, &[r1, r0], Some(&format!("{tag}p{i}")))
            .expect("pair gate");
        nodes.push(out);
    }
    let mut counter = 0usize;
    Ok(merge_tree(nl, &nodes, tag, &mut counter))
}

fn merge_tree(nl: &mut Netlist, nodes: &[NetId], tag: &str, counter: &mut usize) -> NetId {
    if nodes.len() == 1 {
        return nodes[0];
    }
    let mid = nodes.len().div_ceil(2);
    let left = merge_tree(nl, &nodes[..mid], tag, counter);
    let right = merge_tree(nl, &nodes[mid..], tag, counter);
    let label = format!("{tag}t{}", *counter);
    *counter += 1;
    let (_, out) = nl
        .add_gate(GateKind::C2, &[left, right], Some(&label))
        .expect("tree node");
    out
}

/// A datapath wrapped in its handshake environment.
pub struct Fixture {
    pub protocol: Protocol,
    netlist: Netlist,
    ackout: NetId,
    ackin: NetId,
    registers: Vec<GateId>,
}

impl Fixture {
    /// Embed `datapath` in a fresh netlist behind input registers, build
    /// the output completion detector and close the acknowledge loop.
    pub fn build(datapath: &Netlist, protocol: Protocol) -> Result<Fixture, HandshakeError> {
        if let Some(p) = datapath.protocol {
            if p != protocol {
                return Err(HandshakeError::ProtocolMismatch {
                    datapath: p,
                    requested: protocol,
                });
            }
        }
        let violations = datapath.validate();
        if !violations.is_empty() {
            return Err(HandshakeError::InvalidDatapath {
                violations: violations.len(),
            });
        }
        if datapath.inputs().is_empty() || datapath.outputs().is_empty() {
            return Err(HandshakeError::NoPorts);
        }

        let mut nl = Netlist::new(Some(protocol));

        // External ports mirror the datapath's input ports by name.
        let mut ext = Vec::with_capacity(datapath.inputs().len());
        for p in datapath.inputs() {
            ext.push(nl.declare_port(&p.name, PortDir::Input).expect("fresh port"));
        }

        // Embed the datapath. Its input rails become register outputs, so
        // their labels move under a reg. prefix to keep names unique.
        let offset = nl.net_count();
        let is_input_rail: Vec<bool> = {
            let mut v = alloc::vec![false; datapath.net_count()];
            for p in datapath.inputs() {
                v[p.rails.rail1.index()] = true;
                v[p.rails.rail0.index()] = true;
            }
            v
        };
        for (i, net) in datapath.nets().iter().enumerate() {
            let label = match (&net.name, is_input_rail[i]) {
                (Some(n), true) => Some(format!("reg.{n}")),
                (Some(n), false) => Some(n.clone()),
                (None, _) => None,
            };
            nl.add_net(label.as_deref());
        }
        let xlat = |n: NetId| NetId::from_index(offset + n.index());
        for g in datapath.gates() {
            let inputs: Vec<NetId> = g.inputs.iter().map(|&n| xlat(n)).collect();
            nl.add_gate_driving(g.kind, &inputs, xlat(g.output))
                .expect("embedded gate");
        }

        // Registers: one C-element per rail, gated by the inverted ack.
        let ackin = nl.add_net(Some("ACKIN"));
        let mut registers = Vec::with_capacity(ext.len() * 2);
        for (e, p) in ext.iter().zip(datapath.inputs()) {
            for (ext_rail, dp_rail) in [
                (e.rail1, p.rails.rail1),
                (e.rail0, p.rails.rail0),
            ] {
                let g = nl
                    .add_gate_driving(GateKind::C2, &[ext_rail, ackin], xlat(dp_rail))
                    .expect("register");
                registers.push(g);
            }
        }

        // Output ports carry over, then the completion detector reads them.
        let mut out_pairs = Vec::with_capacity(datapath.outputs().len());
        for p in datapath.outputs() {
            let rails = crate::netlist::RailPair {
                rail1: xlat(p.rails.rail1),
                rail0: xlat(p.rails.rail0),
            };
            nl.adopt_port(&p.name, rails, PortDir::Output)
                .expect("output port");
            out_pairs.push((rails.rail1, rails.rail0));
        }
        let ackout = build_completion_detector(&mut nl, &out_pairs, protocol, "CD.")?;
        nl.set_net_name(ackout, "ACKOUT");
        nl.mark_env_net(ackin);
        nl.add_gate_driving(GateKind::Not, &[ackout], ackin)
            .expect("ack inverter");

        Ok(Fixture {
            protocol,
            netlist: nl,
            ackout,
            ackin,
            registers,
        })
    }

    pub fn netlist(&self) -> &Netlist {
        &self.netlist
    }

    /// External input ports, in the datapath's declaration order.
    pub fn inputs(&self) -> &[DualRailPort] {
        self.netlist.inputs()
    }

    pub fn outputs(&self) -> &[DualRailPort] {
        self.netlist.outputs()
    }

    pub fn ackout(&self) -> NetId {
        self.ackout
    }

    pub fn ackin(&self) -> NetId {
        self.ackin
    }

    pub fn registers(&self) -> &[GateId] {
        &self.registers
    }

    /// Start a measurement session: settle the reset state and, for RTO,
    /// run the unmeasured priming half-cycle that drives every input to
    /// the all-ones spacer.
    pub fn session<'f>(&'f self, delays: &DelayModel) -> Result<Session<'f>, HandshakeError> {
        let mut sim = SimState::new(&self.netlist, delays)?;
        sim.schedule_all_gates();
        sim.run_until_quiescent(DEFAULT_EVENT_BUDGET)?;
        if self.protocol == Protocol::Rto {
            let t = sim.time();
            for p in self.inputs() {
                sim.set_level(p.rails.rail1, true, t)?;
                sim.set_level(p.rails.rail0, true, t)?;
            }
            sim.run_until_quiescent(DEFAULT_EVENT_BUDGET)?;
        }
        for p in self.outputs() {
            let v = decode(
                sim.level(p.rails.rail1),
                sim.level(p.rails.rail0),
                self.protocol,
            );
            if v != DualRailValue::Spacer {
                return Err(HandshakeError::NotIdle {
                    port: p.name.clone(),
                });
            }
        }
        let idle = sim.levels().to_vec();
        let mut is_output_rail = alloc::vec![false; self.netlist.net_count()];
        for p in self.outputs() {
            is_output_rail[p.rails.rail1.index()] = true;
            is_output_rail[p.rails.rail0.index()] = true;
        }
        sim.log.clear();
        Ok(Session {
            fixture: self,
            sim,
            idle,
            is_output_rail,
            event_budget: DEFAULT_EVENT_BUDGET,
            keep_log: true,
        })
    }
}

/// Everything measured for one data/spacer cycle.
#[derive(Debug, Clone)]
pub struct TransactionTrace {
    pub forward_latency: SimTime,
    pub reverse_latency: SimTime,
    pub cycle_time: SimTime,
    /// All level changes in the transaction window, environment included.
    pub transitions: u64,
    /// Decoded output values at the end of the data phase, in port order.
    pub outputs: Vec<DualRailValue>,
    /// Acknowledge switch times, relative to the respective phase start.
    pub ack_data_latency: SimTime,
    pub ack_spacer_latency: SimTime,
    pub data_at: SimTime,
    pub spacer_at: SimTime,
    pub end_at: SimTime,
    /// Full transition log (empty when the session disables log capture).
    pub log: Vec<Transition>,
    /// Nets exempt from phase-monotonicity (the inverted acknowledge).
    pub env_nets: Vec<NetId>,
}

/// A live simulation of a fixture, cycling transactions from idle to idle.
pub struct Session<'f> {
    fixture: &'f Fixture,
    sim: SimState<'f>,
    idle: Vec<bool>,
    is_output_rail: Vec<bool>,
    pub event_budget: u64,
    /// When false, traces come back without the per-net transition log.
    pub keep_log: bool,
}

impl<'f> Session<'f> {
    pub fn fixture(&self) -> &'f Fixture {
        self.fixture
    }

    pub fn time(&self) -> SimTime {
        self.sim.time()
    }

    fn latest_output_change(&self, window: &[Transition], since: SimTime) -> SimTime {
        window
            .iter()
            .filter(|t| self.is_output_rail[t.net.index()])
            .map(|t| t.time)
            .max()
            .map_or(0, |t| t - since)
    }

    fn ack_change(&self, window: &[Transition], since: SimTime) -> SimTime {
        window
            .iter()
            .filter(|t| t.net == self.fixture.ackout)
            .map(|t| t.time)
            .max()
            .map_or(0, |t| t - since)
    }

    /// Drive one complete data/spacer cycle and measure it.
    ///
    /// `values` are logical bits for the input ports in declaration order.
    /// The spacer follows only after the whole fixture has quiesced, so the
    /// measured latencies are upper bounds independent of environment speed.
    pub fn run_transaction(&mut self, values: &[bool]) -> Result<TransactionTrace, HandshakeError> {
        let protocol = self.fixture.protocol;
        let inputs = self.fixture.inputs();
        if values.len() != inputs.len() {
            return Err(HandshakeError::InputCountMismatch {
                got: values.len(),
                want: inputs.len(),
            });
        }

        self.sim.log.clear();
        self.sim.log_enabled = true;
        let t0 = self.sim.time();
        let tr0 = self.sim.transition_count();
        for (p, &bit) in inputs.iter().zip(values) {
            let (r1, r0) = encode(DualRailValue::from_bit(bit), protocol);
            self.sim.set_level(p.rails.rail1, r1, t0)?;
            self.sim.set_level(p.rails.rail0, r0, t0)?;
        }
        self.sim.run_until_quiescent(self.event_budget)?;

        let mut outputs = Vec::with_capacity(self.fixture.outputs().len());
        for p in self.fixture.outputs() {
            let v = decode(
                self.sim.level(p.rails.rail1),
                self.sim.level(p.rails.rail0),
                protocol,
            );
            match v {
                DualRailValue::Illegal => {
                    return Err(HandshakeError::IllegalOutput {
                        port: p.name.clone(),
                    })
                }
                DualRailValue::Spacer => {
                    return Err(HandshakeError::IncompleteData {
                        port: p.name.clone(),
                    })
                }
                _ => outputs.push(v),
            }
        }
        if self.sim.level(self.fixture.ackout) == protocol.spacer_level() {
            return Err(HandshakeError::AckStuck { data_phase: true });
        }
        let data_log_end = self.sim.log.len();
        let forward_latency = self.latest_output_change(&self.sim.log[..data_log_end], t0);
        let ack_data_latency = self.ack_change(&self.sim.log[..data_log_end], t0);

        let t1 = self.sim.time();
        let spacer = protocol.spacer_level();
        for p in inputs {
            self.sim.set_level(p.rails.rail1, spacer, t1)?;
            self.sim.set_level(p.rails.rail0, spacer, t1)?;
        }
        self.sim.run_until_quiescent(self.event_budget)?;

        for p in self.fixture.outputs() {
            let v = decode(
                self.sim.level(p.rails.rail1),
                self.sim.level(p.rails.rail0),
                protocol,
            );
            if v != DualRailValue::Spacer {
                return Err(HandshakeError::IncompleteSpacer {
                    port: p.name.clone(),
                });
            }
        }
        if self.sim.level(self.fixture.ackout) != protocol.spacer_level() {
            return Err(HandshakeError::AckStuck { data_phase: false });
        }
        let reverse_latency = self.latest_output_change(&self.sim.log[data_log_end..], t1);
        let ack_spacer_latency = self.ack_change(&self.sim.log[data_log_end..], t1);

        if self.sim.levels() != &self.idle[..] {
            return Err(HandshakeError::NotRestored);
        }

        let transitions = self.sim.transition_count() - tr0;
        let log = if self.keep_log {
            core::mem::take(&mut self.sim.log)
        } else {
            Vec::new()
        };
        Ok(TransactionTrace {
            forward_latency,
            reverse_latency,
            cycle_time: forward_latency + reverse_latency,
            transitions,
            outputs,
            ack_data_latency,
            ack_spacer_latency,
            data_at: t0,
            spacer_at: t1,
            end_at: self.sim.time(),
            log,
            env_nets: alloc::vec![self.fixture.ackin],
        })
    }
}
