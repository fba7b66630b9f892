//! Gate-level netlists over a fixed library of speed-independent gates.
//!
//! The library deliberately contains only positive-unate gates: AND/OR with
//! two to four inputs, AND-OR / OR-AND complex gates (`AO21` etc. compute
//! their product terms inside a single gate, so partial products never
//! appear on wires), and the 2-input Muller C-element whose output follows
//! its inputs when they agree and holds otherwise. A plain inverter exists
//! for environment wiring (acknowledge inversion) only; validation rejects
//! it anywhere in the datapath.
//!
//! Every gate kind except the C-element has a De Morgan dual of the same
//! arity (AND2<->OR2, AO22<->OA22, ...); the C-element is self-dual. This
//! is what makes a return-to-one circuit the mirror image of its
//! return-to-zero counterpart.
//!
//! A [`Netlist`] is a flat bag of nets and gates plus dual-rail port
//! declarations. Construction is checked (single driver per net, known
//! arities); [`Netlist::push_gate_raw`] bypasses the checks so that parsers
//! and tests can build malformed netlists for [`Netlist::validate`] to
//! report on.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::protocol::Protocol;

/// One gate from the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    And2,
    And3,
    And4,
    Or2,
    Or3,
    Or4,
    /// `(in0 & in1) | in2`
    Ao21,
    /// `(in0 & in1) | (in2 & in3)`
    Ao22,
    /// `(in0 & in1) | (in2 & in3) | (in4 & in5)`
    Ao222,
    /// `(in0 | in1) & in2`
    Oa21,
    /// `(in0 | in1) & (in2 | in3)`
    Oa22,
    /// `(in0 | in1) & (in2 | in3) & (in4 | in5)`
    Oa222,
    /// Muller C-element: follows when the inputs agree, holds otherwise.
    C2,
    /// Inverter; environment wiring only.
    Not,
}

impl GateKind {
    pub const ALL: [GateKind; 14] = [
        GateKind::And2,
        GateKind::And3,
        GateKind::And4,
        GateKind::Or2,
        GateKind::Or3,
        GateKind::Or4,
        GateKind::Ao21,
        GateKind::Ao22,
        GateKind::Ao222,
        GateKind::Oa21,
        GateKind::Oa22,
        GateKind::Oa222,
        GateKind::C2,
        GateKind::Not,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Not => 1,
            GateKind::And2 | GateKind::Or2 | GateKind::C2 => 2,
            GateKind::And3 | GateKind::Or3 | GateKind::Ao21 | GateKind::Oa21 => 3,
            GateKind::And4 | GateKind::Or4 | GateKind::Ao22 | GateKind::Oa22 => 4,
            GateKind::Ao222 | GateKind::Oa222 => 6,
        }
    }

    /// De Morgan dual of the same arity. The C-element and the inverter map
    /// to themselves; only the C-element satisfies the eval duality law
    /// among the self-mapped kinds.
    pub fn dual(self) -> GateKind {
        match self {
            GateKind::And2 => GateKind::Or2,
            GateKind::And3 => GateKind::Or3,
            GateKind::And4 => GateKind::Or4,
            GateKind::Or2 => GateKind::And2,
            GateKind::Or3 => GateKind::And3,
            GateKind::Or4 => GateKind::And4,
            GateKind::Ao21 => GateKind::Oa21,
            GateKind::Ao22 => GateKind::Oa22,
            GateKind::Ao222 => GateKind::Oa222,
            GateKind::Oa21 => GateKind::Ao21,
            GateKind::Oa22 => GateKind::Ao22,
            GateKind::Oa222 => GateKind::Ao222,
            GateKind::C2 => GateKind::C2,
            GateKind::Not => GateKind::Not,
        }
    }

    /// True for the C-element, the only gate with internal state.
    pub fn is_stateful(self) -> bool {
        matches!(self, GateKind::C2)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And2 => "AND2",
            GateKind::And3 => "AND3",
            GateKind::And4 => "AND4",
            GateKind::Or2 => "OR2",
            GateKind::Or3 => "OR3",
            GateKind::Or4 => "OR4",
            GateKind::Ao21 => "AO21",
            GateKind::Ao22 => "AO22",
            GateKind::Ao222 => "AO222",
            GateKind::Oa21 => "OA21",
            GateKind::Oa22 => "OA22",
            GateKind::Oa222 => "OA222",
            GateKind::C2 => "C2",
            GateKind::Not => "NOT",
        }
    }

    pub fn parse(s: &str) -> Option<GateKind> {
        GateKind::ALL.iter().copied().find(|k| k.name() == s)
    }

    /// Evaluate without arity checking; `prev` is the current output level
    /// and only matters for the C-element.
    #[inline]
    pub(crate) fn eval_unchecked(self, v: &[bool], prev: bool) -> bool {
        debug_assert_eq!(v.len(), self.arity());
        match self {
            GateKind::And2 => v[0] && v[1],
            GateKind::And3 => v[0] && v[1] && v[2],
            GateKind::And4 => v[0] && v[1] && v[2] && v[3],
            GateKind::Or2 => v[0] || v[1],
            GateKind::Or3 => v[0] || v[1] || v[2],
            GateKind::Or4 => v[0] || v[1] || v[2] || v[3],
            GateKind::Ao21 => (v[0] && v[1]) || v[2],
            GateKind::Ao22 => (v[0] && v[1]) || (v[2] && v[3]),
            GateKind::Ao222 => (v[0] && v[1]) || (v[2] && v[3]) || (v[4] && v[5]),
            GateKind::Oa21 => (v[0] || v[1]) && v[2],
            GateKind::Oa22 => (v[0] || v[1]) && (v[2] || v[3]),
            GateKind::Oa222 => (v[0] || v[1]) && (v[2] || v[3]) && (v[4] || v[5]),
            GateKind::C2 => {
                if v[0] == v[1] {
                    v[0]
                } else {
                    prev
                }
            }
            GateKind::Not => !v[0],
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Pure combinational/stateful evaluation of one gate.
pub fn eval_gate(kind: GateKind, inputs: &[bool], prev: bool) -> Result<bool, NetlistError> {
    if inputs.len() != kind.arity() {
        return Err(NetlistError::ArityMismatch {
            kind,
            got: inputs.len(),
        });
    }
    Ok(kind.eval_unchecked(inputs, prev))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NetId(u32);

impl NetId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> NetId {
        NetId(i as u32)
    }
}

impl fmt::Display for NetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GateId(u32);

impl GateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}", self.0)
    }
}

#[derive(Debug, Clone)]
pub struct Net {
    pub name: Option<String>,
    /// Gate driving this net; `None` for primary inputs and undriven nets.
    pub driver: Option<GateId>,
}

#[derive(Debug, Clone)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub output: NetId,
}

/// The two wires of one dual-rail signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RailPair {
    pub rail1: NetId,
    pub rail0: NetId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortDir {
    Input,
    Output,
}

#[derive(Debug, Clone)]
pub struct DualRailPort {
    pub name: String,
    pub rails: RailPair,
    pub dir: PortDir,
}

#[derive(Debug, Clone)]
pub struct Netlist {
    nets: Vec<Net>,
    gates: Vec<Gate>,
    inputs: Vec<DualRailPort>,
    outputs: Vec<DualRailPort>,
    env_nets: Vec<NetId>,
    /// `None` marks a protocol-agnostic netlist (hand-built structures).
    pub protocol: Option<Protocol>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetlistError {
    ArityMismatch { kind: GateKind, got: usize },
    UnknownNet(NetId),
    AlreadyDriven { net: NetId, name: String },
    DuplicatePort(String),
}

impl fmt::Display for NetlistError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetlistError::ArityMismatch { kind, got } => {
                write!(f, "{kind} takes {} inputs, got {got}", kind.arity())
            }
            NetlistError::UnknownNet(n) => write!(f, "net {n} does not exist"),
            NetlistError::AlreadyDriven { net, name } => {
                write!(f, "net {name} ({net}) already has a driver")
            }
            NetlistError::DuplicatePort(name) => write!(f, "port {name} declared twice"),
        }
    }
}

impl core::error::Error for NetlistError {}

/// A defect found by [`Netlist::validate`]. Carries resolved names so the
/// report is readable without the netlist at hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MultipleDrivers { net: NetId, name: String },
    FloatingInput { gate: GateId, net: NetId, name: String },
    BadArity { gate: GateId, kind: GateKind, got: usize },
    DatapathCycle { net: NetId, name: String },
    InverterInDatapath { gate: GateId, name: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MultipleDrivers { name, .. } => {
                write!(f, "net {name} has more than one driver")
            }
            Violation::FloatingInput { gate, name, .. } => {
                write!(f, "gate {gate} reads undriven non-input net {name}")
            }
            Violation::BadArity { gate, kind, got } => {
                write!(f, "gate {gate} ({kind}) has {got} inputs, expected {}", kind.arity())
            }
            Violation::DatapathCycle { name, .. } => {
                write!(f, "combinational cycle through net {name}")
            }
            Violation::InverterInDatapath { gate, name } => {
                write!(f, "inverter {gate} drives datapath net {name}")
            }
        }
    }
}

impl Netlist {
    pub fn new(protocol: Option<Protocol>) -> Netlist {
        Netlist {
            nets: Vec::new(),
            gates: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            env_nets: Vec::new(),
            protocol,
        }
    }

    pub fn nets(&self) -> &[Net] {
        &self.nets
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn net_count(&self) -> usize {
        self.nets.len()
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn net(&self, id: NetId) -> &Net {
        &self.nets[id.index()]
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id.index()]
    }

    pub fn inputs(&self) -> &[DualRailPort] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[DualRailPort] {
        &self.outputs
    }

    pub fn env_nets(&self) -> &[NetId] {
        &self.env_nets
    }

    pub fn net_ids(&self) -> impl Iterator<Item = NetId> {
        (0..self.nets.len() as u32).map(NetId)
    }

    pub fn gate_ids(&self) -> impl Iterator<Item = GateId> {
        (0..self.gates.len() as u32).map(GateId)
    }

    /// Printable name of a net: its label, or `n<id>` when unlabeled.
    pub fn net_name(&self, id: NetId) -> String {
        match &self.nets[id.index()].name {
            Some(n) => n.clone(),
            None => id.to_string(),
        }
    }

    /// Linear search by label; intended for tests and small lookups.
    pub fn find_net(&self, name: &str) -> Option<NetId> {
        self.nets
            .iter()
            .position(|n| n.name.as_deref() == Some(name))
            .map(|i| NetId(i as u32))
    }

    pub fn find_port(&self, name: &str) -> Option<&DualRailPort> {
        self.inputs
            .iter()
            .chain(self.outputs.iter())
            .find(|p| p.name == name)
    }

    pub fn add_net(&mut self, name: Option<&str>) -> NetId {
        let id = NetId(self.nets.len() as u32);
        self.nets.push(Net {
            name: name.map(|s| s.to_string()),
            driver: None,
        });
        id
    }

    pub fn add_rail_pair(&mut self, label: &str) -> RailPair {
        let rail1 = self.add_net(Some(&format!("{label}.t")));
        let rail0 = self.add_net(Some(&format!("{label}.f")));
        RailPair { rail1, rail0 }
    }

    /// Declare a dual-rail port. Creates the two rail nets `<name>.t` and
    /// `<name>.f`; input rails stay undriven (the environment owns them).
    pub fn declare_port(&mut self, name: &str, dir: PortDir) -> Result<RailPair, NetlistError> {
        if self.find_port(name).is_some() {
            return Err(NetlistError::DuplicatePort(name.to_string()));
        }
        let rails = self.add_rail_pair(name);
        let port = DualRailPort {
            name: name.to_string(),
            rails,
            dir,
        };
        match dir {
            PortDir::Input => self.inputs.push(port),
            PortDir::Output => self.outputs.push(port),
        }
        Ok(rails)
    }

    /// Register a port over existing rail nets, for wrappers that re-expose
    /// nets of an embedded block under their original port names.
    pub fn adopt_port(
        &mut self,
        name: &str,
        rails: RailPair,
        dir: PortDir,
    ) -> Result<(), NetlistError> {
        if self.find_port(name).is_some() {
            return Err(NetlistError::DuplicatePort(name.to_string()));
        }
        for r in [rails.rail1, rails.rail0] {
            if r.index() >= self.nets.len() {
                return Err(NetlistError::UnknownNet(r));
            }
        }
        let port = DualRailPort {
            name: name.to_string(),
            rails,
            dir,
        };
        match dir {
            PortDir::Input => self.inputs.push(port),
            PortDir::Output => self.outputs.push(port),
        }
        Ok(())
    }

    /// Rename a net. Uniqueness is the caller's business.
    pub fn set_net_name(&mut self, id: NetId, name: &str) {
        self.nets[id.index()].name = Some(name.to_string());
    }

    fn check_inputs(&self, kind: GateKind, inputs: &[NetId]) -> Result<(), NetlistError> {
        if inputs.len() != kind.arity() {
            return Err(NetlistError::ArityMismatch {
                kind,
                got: inputs.len(),
            });
        }
        for &n in inputs {
            if n.index() >= self.nets.len() {
                return Err(NetlistError::UnknownNet(n));
            }
        }
        Ok(())
    }

    /// Add a gate driving a fresh net (labeled `label` if given).
    pub fn add_gate(
        &mut self,
        kind: GateKind,
        inputs: &[NetId],
        label: Option<&str>,
    ) -> Result<(GateId, NetId), NetlistError> {
        self.check_inputs(kind, inputs)?;
        let out = self.add_net(label);
        let gate = self.push(kind, inputs.to_vec(), out);
        Ok((gate, out))
    }

    /// Add a gate driving an existing undriven net (a declared output rail
    /// or a pre-allocated internal net).
    pub fn add_gate_driving(
        &mut self,
        kind: GateKind,
        inputs: &[NetId],
        output: NetId,
    ) -> Result<GateId, NetlistError> {
        self.check_inputs(kind, inputs)?;
        if output.index() >= self.nets.len() {
            return Err(NetlistError::UnknownNet(output));
        }
        if self.nets[output.index()].driver.is_some() {
            return Err(NetlistError::AlreadyDriven {
                net: output,
                name: self.net_name(output),
            });
        }
        Ok(self.push(kind, inputs.to_vec(), output))
    }

    /// Append a gate with no checking at all. Parsers and tests use this to
    /// build netlists that [`Netlist::validate`] is expected to reject.
    pub fn push_gate_raw(&mut self, kind: GateKind, inputs: Vec<NetId>, output: NetId) -> GateId {
        self.push(kind, inputs, output)
    }

    fn push(&mut self, kind: GateKind, inputs: Vec<NetId>, output: NetId) -> GateId {
        let id = GateId(self.gates.len() as u32);
        if output.index() < self.nets.len() {
            let slot = &mut self.nets[output.index()].driver;
            if slot.is_none() {
                *slot = Some(id);
            }
        }
        self.gates.push(Gate {
            kind,
            inputs,
            output,
        });
        id
    }

    /// Mark a net as environment wiring (e.g. the inverted acknowledge).
    /// Environment nets are treated as sources when checking the datapath
    /// for cycles, and inverters may only drive environment nets.
    pub fn mark_env_net(&mut self, net: NetId) {
        if !self.env_nets.contains(&net) {
            self.env_nets.push(net);
        }
    }

    fn is_primary_input_rail(&self, net: NetId) -> bool {
        self.inputs
            .iter()
            .any(|p| p.rails.rail1 == net || p.rails.rail0 == net)
    }

    /// Structural validation. Returns all defects found (empty when clean);
    /// read-only and idempotent.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();

        // Single driver per net, independent of the cached driver field.
        let mut driver_count = vec![0u32; self.nets.len()];
        for g in &self.gates {
            if g.output.index() < self.nets.len() {
                driver_count[g.output.index()] += 1;
            }
        }
        for (i, &c) in driver_count.iter().enumerate() {
            if c > 1 {
                let net = NetId(i as u32);
                out.push(Violation::MultipleDrivers {
                    net,
                    name: self.net_name(net),
                });
            }
        }

        for (gi, g) in self.gates.iter().enumerate() {
            let gate = GateId(gi as u32);
            if g.inputs.len() != g.kind.arity() {
                out.push(Violation::BadArity {
                    gate,
                    kind: g.kind,
                    got: g.inputs.len(),
                });
            }
            for &n in &g.inputs {
                let driven = n.index() < self.nets.len() && driver_count[n.index()] > 0;
                if !driven && !self.is_primary_input_rail(n) && !self.env_nets.contains(&n) {
                    out.push(Violation::FloatingInput {
                        gate,
                        net: n,
                        name: self.net_name(n),
                    });
                }
            }
            if g.kind == GateKind::Not && !self.env_nets.contains(&g.output) {
                out.push(Violation::InverterInDatapath {
                    gate,
                    name: self.net_name(g.output),
                });
            }
        }

        self.check_cycles(&mut out);
        out
    }

    /// Kahn's algorithm over the datapath: inverters are environment gates
    /// and environment nets count as sources, which cuts the acknowledge
    /// feedback loop of a handshake fixture while still catching genuine
    /// combinational cycles.
    fn check_cycles(&self, out: &mut Vec<Violation>) {
        let nets = self.nets.len();
        let mut indegree = vec![0u32; self.gates.len()];
        let mut fanout: Vec<Vec<u32>> = vec![Vec::new(); nets];
        for (gi, g) in self.gates.iter().enumerate() {
            if g.kind == GateKind::Not {
                continue;
            }
            for &n in &g.inputs {
                if n.index() >= nets || self.env_nets.contains(&n) {
                    continue;
                }
                if let Some(d) = self.nets[n.index()].driver {
                    if self.gates[d.index()].kind != GateKind::Not {
                        indegree[gi] += 1;
                        fanout[n.index()].push(gi as u32);
                    }
                }
            }
        }
        let mut ready: Vec<u32> = (0..self.gates.len() as u32)
            .filter(|&g| indegree[g as usize] == 0 && self.gates[g as usize].kind != GateKind::Not)
            .collect();
        let mut done = 0usize;
        let total = self
            .gates
            .iter()
            .filter(|g| g.kind != GateKind::Not)
            .count();
        while let Some(g) = ready.pop() {
            done += 1;
            let outnet = self.gates[g as usize].output;
            if outnet.index() >= nets {
                continue;
            }
            for &succ in &fanout[outnet.index()] {
                indegree[succ as usize] -= 1;
                if indegree[succ as usize] == 0 {
                    ready.push(succ);
                }
            }
        }
        if done < total {
            // Any gate left with nonzero indegree sits on or behind a cycle;
            // report the first one's output as the witness.
            if let Some((gi, _)) = indegree
                .iter()
                .enumerate()
                .find(|&(gi, &d)| d > 0 && self.gates[gi].kind != GateKind::Not)
            {
                let net = self.gates[gi].output;
                out.push(Violation::DatapathCycle {
                    net,
                    name: self.net_name(net),
                });
            }
        }
    }

    /// De Morgan dual: every gate kind replaced by its dual, connectivity
    /// and labels untouched, protocol tag flipped. An involution.
    pub fn dual(&self) -> Netlist {
        let mut out = self.clone();
        for g in &mut out.gates {
            g.kind = g.kind.dual();
        }
        out.protocol = self.protocol.map(Protocol::opposite);
        out
    }

    /// Exact structural equality: same nets (names), gates (kind and
    /// connectivity), ports, environment marks and protocol tag.
    pub fn structurally_equal(&self, other: &Netlist) -> bool {
        if self.protocol != other.protocol
            || self.nets.len() != other.nets.len()
            || self.gates.len() != other.gates.len()
            || self.inputs.len() != other.inputs.len()
            || self.outputs.len() != other.outputs.len()
            || self.env_nets != other.env_nets
        {
            return false;
        }
        if !self
            .nets
            .iter()
            .zip(&other.nets)
            .all(|(a, b)| a.name == b.name)
        {
            return false;
        }
        if !self.gates.iter().zip(&other.gates).all(|(a, b)| {
            a.kind == b.kind && a.inputs == b.inputs && a.output == b.output
        }) {
            return false;
        }
        let ports_eq = |a: &[DualRailPort], b: &[DualRailPort]| {
            a.iter()
                .zip(b)
                .all(|(x, y)| x.name == y.name && x.rails == y.rails && x.dir == y.dir)
        };
        ports_eq(&self.inputs, &other.inputs) && ports_eq(&self.outputs, &other.outputs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arities() {
        let expect = [
            (GateKind::And2, 2),
            (GateKind::And3, 3),
            (GateKind::And4, 4),
            (GateKind::Or2, 2),
            (GateKind::Or3, 3),
            (GateKind::Or4, 4),
            (GateKind::Ao21, 3),
            (GateKind::Ao22, 4),
            (GateKind::Ao222, 6),
            (GateKind::Oa21, 3),
            (GateKind::Oa22, 4),
            (GateKind::Oa222, 6),
            (GateKind::C2, 2),
            (GateKind::Not, 1),
        ];
        for (k, a) in expect {
            assert_eq!(k.arity(), a, "{k}");
        }
    }

    #[test]
    fn dual_is_involution_and_preserves_arity() {
        for k in GateKind::ALL {
            assert_eq!(k.dual().dual(), k);
            assert_eq!(k.dual().arity(), k.arity());
        }
        assert_eq!(GateKind::C2.dual(), GateKind::C2);
        assert_eq!(GateKind::And2.dual(), GateKind::Or2);
        assert_eq!(GateKind::Ao222.dual(), GateKind::Oa222);
    }

    /// dual(k)(!x...) == !k(x...) over every input vector, for every kind
    /// with a genuine dual (the inverter is excluded; the C-element passes
    /// because complementing both inputs and the held state commutes).
    #[test]
    fn de_morgan_eval_duality() {
        for k in GateKind::ALL {
            if k == GateKind::Not {
                continue;
            }
            let n = k.arity();
            for bits in 0..(1u32 << n) {
                let v: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
                let nv: Vec<bool> = v.iter().map(|&b| !b).collect();
                for prev in [false, true] {
                    let lhs = k.dual().eval_unchecked(&nv, !prev);
                    let rhs = !k.eval_unchecked(&v, prev);
                    assert_eq!(lhs, rhs, "{k} v={v:?} prev={prev}");
                }
            }
        }
    }

    #[test]
    fn c2_truth_table() {
        // (a, b, prev) -> out: follow on agreement, hold on disagreement.
        let table = [
            ((false, false, false), false),
            ((false, false, true), false),
            ((true, true, false), true),
            ((true, true, true), true),
            ((true, false, false), false),
            ((true, false, true), true),
            ((false, true, false), false),
            ((false, true, true), true),
        ];
        for ((a, b, prev), want) in table {
            assert_eq!(eval_gate(GateKind::C2, &[a, b], prev).unwrap(), want);
        }
    }

    #[test]
    fn eval_complex_gates() {
        assert!(eval_gate(GateKind::Ao21, &[true, true, false], false).unwrap());
        assert!(eval_gate(GateKind::Ao21, &[false, true, true], false).unwrap());
        assert!(!eval_gate(GateKind::Ao21, &[true, false, false], false).unwrap());
        assert!(eval_gate(GateKind::Oa21, &[false, true, true], false).unwrap());
        assert!(!eval_gate(GateKind::Oa21, &[true, true, false], false).unwrap());
        assert!(eval_gate(GateKind::Ao222, &[false, false, true, true, false, false], false).unwrap());
        assert!(!eval_gate(GateKind::Oa222, &[false, false, true, true, false, true], false).unwrap());
    }

    #[test]
    fn eval_rejects_bad_arity() {
        let err = eval_gate(GateKind::And3, &[true, true], false).unwrap_err();
        assert!(matches!(err, NetlistError::ArityMismatch { got: 2, .. }));
    }

    #[test]
    fn build_checks() {
        let mut nl = Netlist::new(None);
        let a = nl.declare_port("A", PortDir::Input).unwrap();
        assert!(matches!(
            nl.declare_port("A", PortDir::Input),
            Err(NetlistError::DuplicatePort(_))
        ));
        let err = nl.add_gate(GateKind::And2, &[a.rail1], None).unwrap_err();
        assert!(matches!(err, NetlistError::ArityMismatch { .. }));

        let (_, out) = nl
            .add_gate(GateKind::And2, &[a.rail1, a.rail0], Some("x"))
            .unwrap();
        let err = nl
            .add_gate_driving(GateKind::Or2, &[a.rail1, a.rail0], out)
            .unwrap_err();
        assert!(matches!(err, NetlistError::AlreadyDriven { .. }));

        // Driving a pre-declared undriven net is fine.
        let o = nl.declare_port("O", PortDir::Output).unwrap();
        nl.add_gate_driving(GateKind::Or2, &[a.rail1, a.rail0], o.rail1)
            .unwrap();
    }

    #[test]
    fn validate_clean_netlist() {
        let mut nl = Netlist::new(Some(Protocol::Rtz));
        let a = nl.declare_port("A", PortDir::Input).unwrap();
        let b = nl.declare_port("B", PortDir::Input).unwrap();
        let o = nl.declare_port("O", PortDir::Output).unwrap();
        nl.add_gate_driving(GateKind::And2, &[a.rail1, b.rail1], o.rail1)
            .unwrap();
        nl.add_gate_driving(GateKind::Or2, &[a.rail0, b.rail0], o.rail0)
            .unwrap();
        assert!(nl.validate().is_empty());
    }

    #[test]
    fn validate_reports_multiple_drivers() {
        let mut nl = Netlist::new(None);
        let a = nl.declare_port("A", PortDir::Input).unwrap();
        let x = nl.add_net(Some("x"));
        nl.push_gate_raw(GateKind::Or2, vec![a.rail1, a.rail0], x);
        nl.push_gate_raw(GateKind::And2, vec![a.rail1, a.rail0], x);
        let v = nl.validate();
        assert!(v
            .iter()
            .any(|v| matches!(v, Violation::MultipleDrivers { .. })));
    }

    #[test]
    fn validate_reports_floating_input() {
        let mut nl = Netlist::new(None);
        let a = nl.declare_port("A", PortDir::Input).unwrap();
        let ghost = nl.add_net(Some("ghost"));
        nl.add_gate(GateKind::And2, &[a.rail1, ghost], None).unwrap();
        let v = nl.validate();
        assert!(v.iter().any(
            |v| matches!(v, Violation::FloatingInput { name, .. } if name == "ghost")
        ));
    }

    #[test]
    fn validate_reports_cycle() {
        let mut nl = Netlist::new(None);
        let a = nl.declare_port("A", PortDir::Input).unwrap();
        let x = nl.add_net(Some("x"));
        let y = nl.add_net(Some("y"));
        nl.push_gate_raw(GateKind::Or2, vec![a.rail1, y], x);
        nl.push_gate_raw(GateKind::Or2, vec![a.rail0, x], y);
        let v = nl.validate();
        assert!(v.iter().any(|v| matches!(v, Violation::DatapathCycle { .. })));
    }

    #[test]
    fn env_net_cuts_cycle_check() {
        // Same loop as above, but one link goes through an inverter whose
        // output is marked as environment wiring: no cycle reported.
        let mut nl = Netlist::new(None);
        let a = nl.declare_port("A", PortDir::Input).unwrap();
        let x = nl.add_net(Some("x"));
        let ack = nl.add_net(Some("ack"));
        nl.push_gate_raw(GateKind::Or2, vec![a.rail1, ack], x);
        nl.push_gate_raw(GateKind::Not, vec![x], ack);
        nl.mark_env_net(ack);
        assert!(nl.validate().is_empty());
    }

    #[test]
    fn validate_rejects_datapath_inverter() {
        let mut nl = Netlist::new(None);
        let a = nl.declare_port("A", PortDir::Input).unwrap();
        nl.add_gate(GateKind::Not, &[a.rail1], Some("inv")).unwrap();
        let v = nl.validate();
        assert!(v
            .iter()
            .any(|v| matches!(v, Violation::InverterInDatapath { .. })));
    }

    #[test]
    fn dual_netlist_involution() {
        let mut nl = Netlist::new(Some(Protocol::Rtz));
        let a = nl.declare_port("A", PortDir::Input).unwrap();
        let b = nl.declare_port("B", PortDir::Input).unwrap();
        let o = nl.declare_port("O", PortDir::Output).unwrap();
        nl.add_gate_driving(GateKind::Ao22, &[a.rail1, b.rail1, a.rail0, b.rail0], o.rail1)
            .unwrap();
        nl.add_gate_driving(GateKind::C2, &[a.rail0, b.rail0], o.rail0)
            .unwrap();
        let d = nl.dual();
        assert_eq!(d.protocol, Some(Protocol::Rto));
        assert_eq!(d.gates()[0].kind, GateKind::Oa22);
        assert_eq!(d.gates()[1].kind, GateKind::C2);
        assert!(d.dual().structurally_equal(&nl));
    }
}
