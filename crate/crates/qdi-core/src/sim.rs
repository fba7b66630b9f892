//! Deterministic discrete-event simulation with transport delays.
//!
//! Time is a bare integer. Every scheduled event carries a monotonically
//! increasing sequence number, and the queue pops in `(time, seq)` order,
//! so identical runs produce identical transition logs. Gates use
//! transport-delay semantics: an output event reflects the gate's inputs
//! as of the moment it was evaluated, and pulses propagate rather than
//! being swallowed.
//!
//! The C-element keeps its held value per gate instance, updated whenever
//! its inputs agree at evaluation time. This matters under transport
//! delays: the output wire may still be in flight while the element has
//! already captured a new state.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use crate::netlist::{GateId, GateKind, NetId, Netlist};

pub type SimTime = u64;

/// Default event budget for a quiescence run.
pub const DEFAULT_EVENT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimError {
    /// A gate kind appears in the netlist but has no delay assigned.
    MissingDelay(GateKind),
    /// Delays must be at least one time unit. Carries the gate kind for
    /// per-kind defaults; instance overrides have no kind to name.
    ZeroDelay(Option<GateKind>),
    /// Only environment-controlled (undriven) nets can be forced.
    DriveConflict { net: NetId },
    /// Event cannot be scheduled in the past.
    TimeTravel { at: SimTime, now: SimTime },
    /// The run did not quiesce within its event budget; names the net with
    /// the most transitions as the likely oscillator.
    BudgetExhausted { budget: u64, hottest: NetId },
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::MissingDelay(k) => write!(f, "no delay assigned for gate kind {k}"),
            SimError::ZeroDelay(Some(k)) => write!(f, "delay for {k} must be positive"),
            SimError::ZeroDelay(None) => write!(f, "delay overrides must be positive"),
            SimError::DriveConflict { net } => {
                write!(f, "net {net} is gate-driven and cannot be forced")
            }
            SimError::TimeTravel { at, now } => {
                write!(f, "cannot schedule at {at}, simulation time is {now}")
            }
            SimError::BudgetExhausted { budget, hottest } => {
                write!(
                    f,
                    "no quiescence within {budget} events; hottest net {hottest}"
                )
            }
        }
    }
}

impl core::error::Error for SimError {}

/// Per-kind default delays plus per-gate-instance overrides.
#[derive(Debug, Clone)]
pub struct DelayModel {
    defaults: [u32; GateKind::ALL.len()],
    overrides: BTreeMap<GateId, u32>,
}

impl DelayModel {
    /// No defaults assigned; every kind must be set before use.
    pub fn empty() -> DelayModel {
        DelayModel {
            defaults: [0; GateKind::ALL.len()],
            overrides: BTreeMap::new(),
        }
    }

    /// Every gate kind takes one time unit. The canonical model for
    /// architecture comparisons.
    pub fn unit() -> DelayModel {
        let mut m = DelayModel::empty();
        for k in GateKind::ALL {
            m.defaults[Self::slot(k)] = 1;
        }
        m
    }

    fn slot(kind: GateKind) -> usize {
        GateKind::ALL.iter().position(|&k| k == kind).unwrap()
    }

    pub fn set_default(&mut self, kind: GateKind, delay: u32) -> Result<(), SimError> {
        if delay == 0 {
            return Err(SimError::ZeroDelay(Some(kind)));
        }
        self.defaults[Self::slot(kind)] = delay;
        Ok(())
    }

    pub fn set_override(&mut self, gate: GateId, delay: u32) -> Result<(), SimError> {
        if delay == 0 {
            return Err(SimError::ZeroDelay(None));
        }
        self.overrides.insert(gate, delay);
        Ok(())
    }

    /// Drop all per-instance overrides, keeping the kind defaults.
    pub fn clear_overrides(&mut self) {
        self.overrides.clear();
    }

    /// Default delay for a kind, if assigned.
    pub fn default_for(&self, kind: GateKind) -> Option<u32> {
        let d = self.defaults[Self::slot(kind)];
        (d > 0).then_some(d)
    }

    /// Instance override if present, else the kind default.
    pub fn delay_of(&self, gate: GateId, kind: GateKind) -> Result<u32, SimError> {
        if let Some(&d) = self.overrides.get(&gate) {
            return Ok(d);
        }
        self.default_for(kind).ok_or(SimError::MissingDelay(kind))
    }
}

/// One logged level change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub time: SimTime,
    pub net: NetId,
    pub level: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Event {
    time: SimTime,
    seq: u64,
    net: NetId,
    level: bool,
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.time, self.seq).cmp(&(other.time, other.seq))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub struct SimState<'a> {
    netlist: &'a Netlist,
    levels: Vec<bool>,
    /// Last value scheduled per net; suppresses duplicate events.
    next_level: Vec<bool>,
    /// Held state per gate; only meaningful for C-elements.
    held: Vec<bool>,
    delays: Vec<u32>,
    fanout: Vec<Vec<u32>>,
    queue: BinaryHeap<Reverse<Event>>,
    seq: u64,
    time: SimTime,
    transitions: u64,
    per_net_transitions: Vec<u32>,
    /// Transition log; cleared by callers between measurement windows.
    pub log: Vec<Transition>,
    pub log_enabled: bool,
}

impl<'a> SimState<'a> {
    /// Resolve delays for every gate up front; all levels and C-element
    /// states start low.
    pub fn new(netlist: &'a Netlist, delays: &DelayModel) -> Result<SimState<'a>, SimError> {
        let mut resolved = Vec::with_capacity(netlist.gate_count());
        for id in netlist.gate_ids() {
            resolved.push(delays.delay_of(id, netlist.gate(id).kind)?);
        }
        let mut fanout: Vec<Vec<u32>> = vec![Vec::new(); netlist.net_count()];
        for (gi, g) in netlist.gates().iter().enumerate() {
            for &n in &g.inputs {
                fanout[n.index()].push(gi as u32);
            }
        }
        Ok(SimState {
            netlist,
            levels: vec![false; netlist.net_count()],
            next_level: vec![false; netlist.net_count()],
            held: vec![false; netlist.gate_count()],
            delays: resolved,
            fanout,
            queue: BinaryHeap::new(),
            seq: 0,
            time: 0,
            transitions: 0,
            per_net_transitions: vec![0; netlist.net_count()],
            log: Vec::new(),
            log_enabled: true,
        })
    }

    pub fn netlist(&self) -> &'a Netlist {
        self.netlist
    }

    pub fn time(&self) -> SimTime {
        self.time
    }

    /// Total applied level changes since construction.
    pub fn transition_count(&self) -> u64 {
        self.transitions
    }

    pub fn level(&self, net: NetId) -> bool {
        self.levels[net.index()]
    }

    pub fn levels(&self) -> &[bool] {
        &self.levels
    }

    fn schedule(&mut self, time: SimTime, net: NetId, level: bool) {
        if self.next_level[net.index()] == level {
            return;
        }
        self.next_level[net.index()] = level;
        self.queue.push(Reverse(Event {
            time,
            seq: self.seq,
            net,
            level,
        }));
        self.seq += 1;
    }

    /// Force an environment-controlled net. Scheduling a net to its
    /// already-pending level is a no-op.
    pub fn set_level(&mut self, net: NetId, level: bool, at: SimTime) -> Result<(), SimError> {
        if self.netlist.net(net).driver.is_some() {
            return Err(SimError::DriveConflict { net });
        }
        if at < self.time {
            return Err(SimError::TimeTravel { at, now: self.time });
        }
        self.schedule(at, net, level);
        Ok(())
    }

    /// Evaluate every gate once and schedule any resulting output changes.
    /// Used to settle a freshly constructed state (e.g. let inverters find
    /// their levels from the all-low reset).
    pub fn schedule_all_gates(&mut self) {
        for gi in 0..self.netlist.gate_count() as u32 {
            self.eval_and_schedule(gi);
        }
    }

    fn eval_and_schedule(&mut self, gate: u32) {
        let g = &self.netlist.gates()[gate as usize];
        let mut vals = [false; 6];
        for (i, &n) in g.inputs.iter().enumerate() {
            vals[i] = self.levels[n.index()];
        }
        let v = &vals[..g.inputs.len()];
        let out = g.kind.eval_unchecked(v, self.held[gate as usize]);
        if g.kind == GateKind::C2 && v[0] == v[1] {
            self.held[gate as usize] = out;
        }
        let t = self.time + self.delays[gate as usize] as SimTime;
        self.schedule(t, g.output, out);
    }

    /// Run until the event queue drains. Returns the time of the last level
    /// change (0 if none). Fails once `budget` events have been processed.
    pub fn run_until_quiescent(&mut self, budget: u64) -> Result<SimTime, SimError> {
        let mut remaining = budget;
        let mut last_change: SimTime = 0;
        while let Some(Reverse(ev)) = self.queue.pop() {
            if remaining == 0 {
                let hottest = self
                    .per_net_transitions
                    .iter()
                    .enumerate()
                    .max_by_key(|&(_, &c)| c)
                    .map(|(i, _)| NetId::from_index(i))
                    .unwrap_or(ev.net);
                return Err(SimError::BudgetExhausted { budget, hottest });
            }
            remaining -= 1;
            self.time = ev.time;
            if self.levels[ev.net.index()] == ev.level {
                continue;
            }
            self.levels[ev.net.index()] = ev.level;
            self.transitions += 1;
            self.per_net_transitions[ev.net.index()] += 1;
            last_change = ev.time;
            if self.log_enabled {
                self.log.push(Transition {
                    time: ev.time,
                    net: ev.net,
                    level: ev.level,
                });
            }
            for i in 0..self.fanout[ev.net.index()].len() {
                let g = self.fanout[ev.net.index()][i];
                self.eval_and_schedule(g);
            }
        }
        Ok(last_change)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::PortDir;
    use crate::protocol::Protocol;
    use alloc::vec;

    fn and_pair() -> (Netlist, NetId, NetId, NetId) {
        let mut nl = Netlist::new(None);
        let a = nl.add_net(Some("a"));
        let b = nl.add_net(Some("b"));
        let (_, o) = nl.add_gate(GateKind::And2, &[a, b], Some("o")).unwrap();
        (nl, a, b, o)
    }

    #[test]
    fn transport_delay_and_causality() {
        let (nl, a, b, o) = and_pair();
        let mut delays = DelayModel::unit();
        delays.set_default(GateKind::And2, 3).unwrap();
        let mut sim = SimState::new(&nl, &delays).unwrap();
        sim.set_level(a, true, 0).unwrap();
        sim.set_level(b, true, 5).unwrap();
        let last = sim.run_until_quiescent(1000).unwrap();
        // Output follows the later input change after exactly one gate delay.
        assert_eq!(last, 8);
        assert!(sim.level(o));
        let out_tr: Vec<_> = sim.log.iter().filter(|t| t.net == o).collect();
        assert_eq!(out_tr.len(), 1);
        assert_eq!(out_tr[0].time, 8);
    }

    #[test]
    fn no_change_schedules_nothing() {
        let (nl, a, _, _) = and_pair();
        let mut sim = SimState::new(&nl, &DelayModel::unit()).unwrap();
        sim.set_level(a, false, 0).unwrap();
        sim.run_until_quiescent(1000).unwrap();
        assert_eq!(sim.transition_count(), 0);
        assert!(sim.log.is_empty());
    }

    #[test]
    fn forcing_a_driven_net_fails() {
        let (nl, _, _, o) = and_pair();
        let mut sim = SimState::new(&nl, &DelayModel::unit()).unwrap();
        assert!(matches!(
            sim.set_level(o, true, 0),
            Err(SimError::DriveConflict { .. })
        ));
    }

    #[test]
    fn missing_delay_is_a_setup_error() {
        let (nl, _, _, _) = and_pair();
        let mut delays = DelayModel::empty();
        delays.set_default(GateKind::Or2, 1).unwrap();
        assert!(matches!(
            SimState::new(&nl, &delays),
            Err(SimError::MissingDelay(GateKind::And2))
        ));
    }

    #[test]
    fn override_beats_default() {
        let mut nl = Netlist::new(None);
        let a = nl.add_net(Some("a"));
        let (g1, o1) = nl.add_gate(GateKind::Not, &[a], Some("o1")).unwrap();
        nl.mark_env_net(o1);
        let mut delays = DelayModel::unit();
        delays.set_override(g1, 7).unwrap();
        let mut sim = SimState::new(&nl, &delays).unwrap();
        sim.schedule_all_gates();
        sim.run_until_quiescent(100).unwrap();
        let t = sim.log.iter().find(|t| t.net == o1).unwrap();
        assert_eq!(t.time, 7);
    }

    #[test]
    fn deterministic_logs() {
        let mut nl = Netlist::new(Some(Protocol::Rtz));
        let a = nl.declare_port("A", PortDir::Input).unwrap();
        let b = nl.declare_port("B", PortDir::Input).unwrap();
        let (_, x) = nl
            .add_gate(GateKind::Or2, &[a.rail1, b.rail1], Some("x"))
            .unwrap();
        let (_, y) = nl
            .add_gate(GateKind::And2, &[a.rail1, b.rail1], Some("y"))
            .unwrap();
        nl.add_gate(GateKind::C2, &[x, y], Some("z")).unwrap();
        let run = || {
            let mut sim = SimState::new(&nl, &DelayModel::unit()).unwrap();
            sim.set_level(a.rail1, true, 0).unwrap();
            sim.set_level(b.rail1, true, 0).unwrap();
            sim.run_until_quiescent(1000).unwrap();
            sim.log.clone()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn budget_exhausted_on_oscillator() {
        // A self-looped inverter never settles. (Two cross-coupled OR2s
        // merely latch: every gate in the library is positive-unate, so an
        // inverting loop is the smallest oscillator expressible.)
        let mut nl = Netlist::new(None);
        let x = nl.add_net(Some("x"));
        nl.push_gate_raw(GateKind::Not, vec![x], x);
        let mut sim = SimState::new(&nl, &DelayModel::unit()).unwrap();
        sim.schedule_all_gates();
        let err = sim.run_until_quiescent(500).unwrap_err();
        match err {
            SimError::BudgetExhausted { budget, hottest } => {
                assert_eq!(budget, 500);
                assert_eq!(hottest, x);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn c2_holds_captured_state_while_output_in_flight() {
        // Inputs agree at t=0 (both high), diverge again at t=1, before the
        // slow C-element output event lands at t=5. The element must keep
        // the captured high state, not re-latch the stale output level.
        let mut nl = Netlist::new(None);
        let a = nl.add_net(Some("a"));
        let b = nl.add_net(Some("b"));
        let (g, o) = nl.add_gate(GateKind::C2, &[a, b], Some("o")).unwrap();
        let mut delays = DelayModel::unit();
        delays.set_override(g, 5).unwrap();
        let mut sim = SimState::new(&nl, &delays).unwrap();
        sim.set_level(a, true, 0).unwrap();
        sim.set_level(b, true, 0).unwrap();
        sim.set_level(b, false, 1).unwrap();
        sim.run_until_quiescent(1000).unwrap();
        assert!(sim.level(o));
        let out_tr: Vec<_> = sim.log.iter().filter(|t| t.net == o).collect();
        assert_eq!(out_tr.len(), 1);
    }
}
