//! Dual-rail adder netlist generators.
//!
//! Four architectures share the same port interface (`X0..`, `Y0..`, `C0`
//! in; `SUM0..`, `C<N>` out) and the same three building blocks:
//!
//! * a full adder cell made of six AO22 gates, used both for plain ripple
//!   chains and for the three low bits of every lookahead block;
//! * a three-input XOR for the top bit of a lookahead block, whose carry
//!   the block-level lookahead makes redundant;
//! * a four-bit block carry-lookahead generator (BCLG) that produces the
//!   block carry-out from generate/kill/propagate signals, synchronized
//!   by an internal completion detector so the carry also indicates that
//!   every bit pair of the block has arrived.
//!
//! The redundant-carry variant (BCLGRC) adds a second, faster carry-out
//! computed by a single AO21 per block. The redundant rail pair chains the
//! lookahead from block to block while the synchronized pair feeds the sum
//! logic, which shortens the critical carry path without giving up
//! completeness of the sum outputs.
//!
//! Everything is emitted in return-to-zero form and mapped gate by gate to
//! the De Morgan dual for return-to-one operation, so the two protocol
//! variants of an architecture are structural duals of each other.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::netlist::{GateKind, Netlist, PortDir, RailPair};
use crate::protocol::{DualRailValue, Protocol};

/// Widest adder the `u64` vector helpers can drive.
pub const MAX_WIDTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdderError {
    /// Width unusable for the architecture (lookahead needs 4n bits, n >= 2).
    BadWidth { arch: AdderArch, width: usize },
    /// Hybrid ripple section must leave at least one lookahead block.
    BadRippleNibbles { nibbles: usize, blocks: usize },
    UnknownArch(String),
    /// Port shape does not match the adder interface.
    ShapeMismatch(String),
    /// An output pair held a non-data value where data was expected.
    NonDataOutput { port: usize },
}

impl fmt::Display for AdderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdderError::BadWidth { arch, width } => {
                write!(f, "width {width} unusable for {arch}")
            }
            AdderError::BadRippleNibbles { nibbles, blocks } => write!(
                f,
                "hybrid with {nibbles} ripple nibbles leaves no lookahead blocks \
                 (adder has {blocks} nibbles)"
            ),
            AdderError::UnknownArch(s) => write!(f, "unknown architecture {s:?}"),
            AdderError::ShapeMismatch(why) => write!(f, "not an adder interface: {why}"),
            AdderError::NonDataOutput { port } => {
                write!(f, "output pair {port} held a non-data value")
            }
        }
    }
}

impl core::error::Error for AdderError {}

/// Adder architecture selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdderArch {
    /// Plain ripple-carry chain of full adders.
    Rca,
    /// Four-bit block carry-lookahead, blocks chained on the synchronized
    /// carry.
    Bcla,
    /// Lookahead with redundant carry: blocks chain on the fast AO21 carry,
    /// sums consume the synchronized one.
    Bclarc,
    /// `rca_nibbles` low nibbles ripple, the rest run as BCLARC blocks.
    Hybrid { rca_nibbles: usize },
}

impl AdderArch {
    pub fn parse(s: &str) -> Result<AdderArch, AdderError> {
        match s {
            "rca" => Ok(AdderArch::Rca),
            "bcla" => Ok(AdderArch::Bcla),
            "bclarc" => Ok(AdderArch::Bclarc),
            _ => match s.strip_prefix("hybrid:").and_then(|k| k.parse().ok()) {
                Some(rca_nibbles) => Ok(AdderArch::Hybrid { rca_nibbles }),
                None => Err(AdderError::UnknownArch(String::from(s))),
            },
        }
    }

    pub fn check_width(self, width: usize) -> Result<(), AdderError> {
        let bad = || AdderError::BadWidth { arch: self, width };
        if width == 0 || width > MAX_WIDTH {
            return Err(bad());
        }
        match self {
            AdderArch::Rca => Ok(()),
            AdderArch::Bcla | AdderArch::Bclarc => {
                if width % 4 != 0 || width < 8 {
                    return Err(bad());
                }
                Ok(())
            }
            AdderArch::Hybrid { rca_nibbles } => {
                if width % 4 != 0 || width < 8 {
                    return Err(bad());
                }
                let blocks = width / 4;
                if rca_nibbles == 0 || rca_nibbles >= blocks {
                    return Err(AdderError::BadRippleNibbles {
                        nibbles: rca_nibbles,
                        blocks,
                    });
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for AdderArch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdderArch::Rca => write!(f, "rca"),
            AdderArch::Bcla => write!(f, "bcla"),
            AdderArch::Bclarc => write!(f, "bclarc"),
            AdderArch::Hybrid { rca_nibbles } => write!(f, "hybrid:{rca_nibbles}"),
        }
    }
}

/// Block inventory of a generated adder.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Census {
    pub bclg: usize,
    pub bclgrc: usize,
    pub full_adders: usize,
    pub xor3: usize,
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut sep = "";
        for (label, n) in [
            ("BCLG", self.bclg),
            ("BCLGRC", self.bclgrc),
            ("FA", self.full_adders),
            ("XOR3", self.xor3),
        ] {
            if n > 0 {
                write!(f, "{sep}{label}:{n}")?;
                sep = " ";
            }
        }
        Ok(())
    }
}

/// A generated adder: netlist plus the facts needed to drive it.
pub struct Adder {
    pub arch: AdderArch,
    pub width: usize,
    pub protocol: Protocol,
    pub netlist: Netlist,
    pub census: Census,
}

impl Adder {
    pub fn io(&self) -> AdderIo {
        AdderIo { width: self.width }
    }
}

/// Reference result, computed on plain integers.
pub fn oracle(x: u64, y: u64, cin: bool, width: usize) -> (u64, bool) {
    debug_assert!(width >= 1 && width <= MAX_WIDTH);
    let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
    let total = (x & mask) as u128 + (y & mask) as u128 + cin as u128;
    ((total as u64) & mask, total >> width & 1 == 1)
}

/// Vector packing and unpacking for the adder port interface.
#[derive(Debug, Clone, Copy)]
pub struct AdderIo {
    width: usize,
}

impl AdderIo {
    pub fn new(width: usize) -> AdderIo {
        AdderIo { width }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Recover the interface from port names alone, for netlists that came
    /// in from a file rather than a generator.
    pub fn from_netlist(nl: &Netlist) -> Result<AdderIo, AdderError> {
        let ins = nl.inputs();
        let outs = nl.outputs();
        if ins.len() < 3 || ins.len() % 2 != 1 {
            return Err(AdderError::ShapeMismatch(format!(
                "{} input ports, want 2*width+1",
                ins.len()
            )));
        }
        let width = ins.len() / 2;
        if width > MAX_WIDTH {
            return Err(AdderError::ShapeMismatch(format!("width {width} too wide")));
        }
        if outs.len() != width + 1 {
            return Err(AdderError::ShapeMismatch(format!(
                "{} output ports for width {width}, want {}",
                outs.len(),
                width + 1
            )));
        }
        for (i, p) in ins.iter().enumerate() {
            let want = match i {
                _ if i < width => format!("X{i}"),
                _ if i < 2 * width => format!("Y{}", i - width),
                _ => String::from("C0"),
            };
            if p.name != want {
                return Err(AdderError::ShapeMismatch(format!(
                    "input port {i} named {:?}, want {want:?}",
                    p.name
                )));
            }
        }
        for (i, p) in outs.iter().enumerate() {
            let want = if i < width {
                format!("SUM{i}")
            } else {
                format!("C{width}")
            };
            if p.name != want {
                return Err(AdderError::ShapeMismatch(format!(
                    "output port {i} named {:?}, want {want:?}",
                    p.name
                )));
            }
        }
        Ok(AdderIo { width })
    }

    /// Logical bits for the input ports, in port order. Operands are
    /// masked to the adder width.
    pub fn input_vector(&self, x: u64, y: u64, cin: bool) -> Vec<bool> {
        let mut v = Vec::with_capacity(2 * self.width + 1);
        for i in 0..self.width {
            v.push(x >> i & 1 == 1);
        }
        for i in 0..self.width {
            v.push(y >> i & 1 == 1);
        }
        v.push(cin);
        v
    }

    /// Decode output port values (in port order) into sum and carry-out.
    pub fn decode_outputs(&self, outputs: &[DualRailValue]) -> Result<(u64, bool), AdderError> {
        if outputs.len() != self.width + 1 {
            return Err(AdderError::ShapeMismatch(format!(
                "{} output values for width {}",
                outputs.len(),
                self.width
            )));
        }
        let mut sum = 0u64;
        for (i, v) in outputs.iter().enumerate() {
            let bit = v.bit().ok_or(AdderError::NonDataOutput { port: i })?;
            if i < self.width {
                sum |= (bit as u64) << i;
            } else {
                return Ok((sum, bit));
            }
        }
        unreachable!("loop returns on the carry port")
    }
}

/// Protocol-correct gate kind: RTO netlists use the De Morgan dual of
/// every RTZ gate choice.
fn pk(p: Protocol, kind: GateKind) -> GateKind {
    match p {
        Protocol::Rtz => kind,
        Protocol::Rto => kind.dual(),
    }
}

/// Six-gate dual-rail full adder. `W` is the half sum of X and Y; both
/// carry rails can fire from X and Y alone (generate and kill), which is
/// what lets a ripple chain run ahead of a late carry-in.
fn emit_full_adder(
    nl: &mut Netlist,
    p: Protocol,
    tag: &str,
    x: RailPair,
    y: RailPair,
    cin: RailPair,
    sum: RailPair,
    cout: RailPair,
) {
    let ao22 = pk(p, GateKind::Ao22);
    let w = nl.add_rail_pair(&format!("{tag}W"));
    nl.add_gate_driving(ao22, &[x.rail1, y.rail0, x.rail0, y.rail1], w.rail1)
        .expect("fa w1");
    nl.add_gate_driving(ao22, &[x.rail1, y.rail1, x.rail0, y.rail0], w.rail0)
        .expect("fa w0");
    nl.add_gate_driving(ao22, &[w.rail1, cin.rail0, w.rail0, cin.rail1], sum.rail1)
        .expect("fa sum1");
    nl.add_gate_driving(ao22, &[w.rail1, cin.rail1, w.rail0, cin.rail0], sum.rail0)
        .expect("fa sum0");
    nl.add_gate_driving(ao22, &[x.rail1, y.rail1, w.rail1, cin.rail1], cout.rail1)
        .expect("fa cout1");
    nl.add_gate_driving(ao22, &[x.rail0, y.rail0, w.rail1, cin.rail0], cout.rail0)
        .expect("fa cout0");
}

/// Three-input XOR for the top bit of a lookahead block. The C-elements
/// make the sum wait for both the half sum and the carry, in both phases.
fn emit_xor3(
    nl: &mut Netlist,
    p: Protocol,
    tag: &str,
    x: RailPair,
    y: RailPair,
    cin: RailPair,
    sum: RailPair,
) {
    let ao22 = pk(p, GateKind::Ao22);
    let or2 = pk(p, GateKind::Or2);
    let w = nl.add_rail_pair(&format!("{tag}W"));
    nl.add_gate_driving(ao22, &[x.rail1, y.rail0, x.rail0, y.rail1], w.rail1)
        .expect("xor3 w1");
    nl.add_gate_driving(ao22, &[x.rail1, y.rail1, x.rail0, y.rail0], w.rail0)
        .expect("xor3 w0");
    let (_, u11) = nl
        .add_gate(GateKind::C2, &[w.rail1, cin.rail0], Some(&format!("{tag}U11")))
        .expect("xor3 u11");
    let (_, u10) = nl
        .add_gate(GateKind::C2, &[w.rail0, cin.rail1], Some(&format!("{tag}U10")))
        .expect("xor3 u10");
    nl.add_gate_driving(or2, &[u11, u10], sum.rail1).expect("xor3 sum1");
    let (_, u01) = nl
        .add_gate(GateKind::C2, &[w.rail1, cin.rail1], Some(&format!("{tag}U01")))
        .expect("xor3 u01");
    let (_, u00) = nl
        .add_gate(GateKind::C2, &[w.rail0, cin.rail0], Some(&format!("{tag}U00")))
        .expect("xor3 u00");
    nl.add_gate_driving(or2, &[u01, u00], sum.rail0).expect("xor3 sum0");
}

/// Four-bit block carry-lookahead generator.
///
/// Per bit, exactly one of generate/kill/propagate fires, so the OR3 of a
/// triple detects that bit's arrival and the C-element tree over the four
/// ORs (`ICD`) detects the whole block. The raw carry (`NC4*`) fires as
/// soon as the logic allows, possibly off a single bit pair; the exposed
/// carry `c4` is C-joined with `ICD` so it also acknowledges every input
/// of the block. With `rc4`, the same carry function is recomputed by one
/// AO21 per rail, unsynchronized, for fast block-to-block chaining.
/// `icd_sync: false` wires the raw carry straight to `c4` (deliberately
/// broken, for the checkers to catch).
#[allow(clippy::too_many_arguments)]
fn emit_bclg(
    nl: &mut Netlist,
    p: Protocol,
    tag: &str,
    x: &[RailPair],
    y: &[RailPair],
    cin: RailPair,
    c4: RailPair,
    rc4: Option<RailPair>,
    icd_sync: bool,
) {
    assert_eq!(x.len(), 4);
    assert_eq!(y.len(), 4);
    let and2 = pk(p, GateKind::And2);
    let and3 = pk(p, GateKind::And3);
    let and4 = pk(p, GateKind::And4);
    let or2 = pk(p, GateKind::Or2);
    let or3 = pk(p, GateKind::Or3);
    let or4 = pk(p, GateKind::Or4);
    let ao21 = pk(p, GateKind::Ao21);
    let ao22 = pk(p, GateKind::Ao22);

    // Bit-level generate, kill, propagate: a one-hot triple per bit.
    let mut g = [None; 4];
    let mut k = [None; 4];
    let mut pr = [None; 4];
    for i in 0..4 {
        let (_, gi) = nl
            .add_gate(and2, &[x[i].rail1, y[i].rail1], Some(&format!("{tag}G{i}")))
            .expect("bclg g");
        let (_, ki) = nl
            .add_gate(and2, &[x[i].rail0, y[i].rail0], Some(&format!("{tag}K{i}")))
            .expect("bclg k");
        let (_, pi) = nl
            .add_gate(
                ao22,
                &[x[i].rail1, y[i].rail0, x[i].rail0, y[i].rail1],
                Some(&format!("{tag}P{i}")),
            )
            .expect("bclg p");
        g[i] = Some(gi);
        k[i] = Some(ki);
        pr[i] = Some(pi);
    }
    let g = g.map(|n| n.unwrap());
    let k = k.map(|n| n.unwrap());
    let pr = pr.map(|n| n.unwrap());

    // Group generate: a generate with nothing but propagates above it.
    let (_, gt1) = nl
        .add_gate(and2, &[pr[3], g[2]], Some(&format!("{tag}GT1")))
        .expect("bclg gt1");
    let (_, gt2) = nl
        .add_gate(and3, &[pr[3], pr[2], g[1]], Some(&format!("{tag}GT2")))
        .expect("bclg gt2");
    let (_, gt3) = nl
        .add_gate(and4, &[pr[3], pr[2], pr[1], g[0]], Some(&format!("{tag}GT3")))
        .expect("bclg gt3");
    let (_, gg) = nl
        .add_gate(or4, &[g[3], gt1, gt2, gt3], Some(&format!("{tag}GG")))
        .expect("bclg gg");

    // Group kill, same shape.
    let (_, kt1) = nl
        .add_gate(and2, &[pr[3], k[2]], Some(&format!("{tag}KT1")))
        .expect("bclg kt1");
    let (_, kt2) = nl
        .add_gate(and3, &[pr[3], pr[2], k[1]], Some(&format!("{tag}KT2")))
        .expect("bclg kt2");
    let (_, kt3) = nl
        .add_gate(and4, &[pr[3], pr[2], pr[1], k[0]], Some(&format!("{tag}KT3")))
        .expect("bclg kt3");
    let (_, kk) = nl
        .add_gate(or4, &[k[3], kt1, kt2, kt3], Some(&format!("{tag}KK")))
        .expect("bclg kk");

    // Group propagate hands the block carry-in through.
    let (_, pall) = nl
        .add_gate(and4, &[pr[3], pr[2], pr[1], pr[0]], Some(&format!("{tag}PALL")))
        .expect("bclg pall");
    let (_, t1) = nl
        .add_gate(GateKind::C2, &[pall, cin.rail1], Some(&format!("{tag}T1")))
        .expect("bclg t1");
    let (_, t0) = nl
        .add_gate(GateKind::C2, &[pall, cin.rail0], Some(&format!("{tag}T0")))
        .expect("bclg t0");

    if icd_sync {
        // Per-bit arrival, then a C-element tree over the four bits.
        let mut r = [None; 4];
        for i in 0..4 {
            let (_, ri) = nl
                .add_gate(
                    or3,
                    &[g[3 - i], pr[3 - i], k[3 - i]],
                    Some(&format!("{tag}R{}", i + 1)),
                )
                .expect("bclg r");
            r[i] = Some(ri);
        }
        let r = r.map(|n| n.unwrap());
        let (_, c1) = nl
            .add_gate(GateKind::C2, &[r[0], r[1]], Some(&format!("{tag}C1")))
            .expect("bclg c1");
        let (_, c2) = nl
            .add_gate(GateKind::C2, &[r[2], r[3]], Some(&format!("{tag}C2")))
            .expect("bclg c2");
        let (_, icd) = nl
            .add_gate(GateKind::C2, &[c1, c2], Some(&format!("{tag}ICD")))
            .expect("bclg icd");

        let (_, nc41) = nl
            .add_gate(or2, &[gg, t1], Some(&format!("{tag}NC41")))
            .expect("bclg nc41");
        let (_, nc40) = nl
            .add_gate(or2, &[kk, t0], Some(&format!("{tag}NC40")))
            .expect("bclg nc40");
        nl.add_gate_driving(GateKind::C2, &[nc41, icd], c4.rail1)
            .expect("bclg c41");
        nl.add_gate_driving(GateKind::C2, &[nc40, icd], c4.rail0)
            .expect("bclg c40");
    } else {
        nl.add_gate_driving(or2, &[gg, t1], c4.rail1).expect("bclg nc41");
        nl.add_gate_driving(or2, &[kk, t0], c4.rail0).expect("bclg nc40");
    }

    if let Some(rc4) = rc4 {
        nl.add_gate_driving(ao21, &[pall, cin.rail1, gg], rc4.rail1)
            .expect("bclg rc41");
        nl.add_gate_driving(ao21, &[pall, cin.rail0, kk], rc4.rail0)
            .expect("bclg rc40");
    }
}

struct Ports {
    x: Vec<RailPair>,
    y: Vec<RailPair>,
    c0: RailPair,
    sum: Vec<RailPair>,
    cn: RailPair,
}

/// All architectures share one port interface, declared up front so ids
/// survive a print/parse round trip.
fn declare_adder_ports(nl: &mut Netlist, width: usize) -> Ports {
    let x = (0..width)
        .map(|i| nl.declare_port(&format!("X{i}"), PortDir::Input).expect("x port"))
        .collect();
    let y = (0..width)
        .map(|i| nl.declare_port(&format!("Y{i}"), PortDir::Input).expect("y port"))
        .collect();
    let c0 = nl.declare_port("C0", PortDir::Input).expect("c0 port");
    let sum = (0..width)
        .map(|i| {
            nl.declare_port(&format!("SUM{i}"), PortDir::Output)
                .expect("sum port")
        })
        .collect();
    let cn = nl
        .declare_port(&format!("C{width}"), PortDir::Output)
        .expect("cn port");
    Ports { x, y, c0, sum, cn }
}

/// Emit one lookahead block: BCLG over bits `4j..4j+4`, full adders on the
/// three low bits, XOR3 on the top bit. Returns (synchronized carry-out,
/// redundant carry-out when requested).
#[allow(clippy::too_many_arguments)]
fn emit_block(
    nl: &mut Netlist,
    p: Protocol,
    ports: &Ports,
    j: usize,
    la_cin: RailPair,
    fa_cin: RailPair,
    c4: RailPair,
    rc4: Option<RailPair>,
    census: &mut Census,
) {
    let lo = 4 * j;
    let tag = format!("B{j}.");
    emit_bclg(
        nl,
        p,
        &tag,
        &ports.x[lo..lo + 4],
        &ports.y[lo..lo + 4],
        la_cin,
        c4,
        rc4,
        true,
    );
    if rc4.is_some() {
        census.bclgrc += 1;
    } else {
        census.bclg += 1;
    }
    let mut carry = fa_cin;
    for b in 0..3 {
        let i = lo + b;
        let next = nl.add_rail_pair(&format!("C{}", i + 1));
        emit_full_adder(
            nl,
            p,
            &format!("FA{i}."),
            ports.x[i],
            ports.y[i],
            carry,
            ports.sum[i],
            next,
        );
        census.full_adders += 1;
        carry = next;
    }
    emit_xor3(
        nl,
        p,
        &format!("XOR{}.", lo + 3),
        ports.x[lo + 3],
        ports.y[lo + 3],
        carry,
        ports.sum[lo + 3],
    );
    census.xor3 += 1;
}

/// Generate an adder netlist.
pub fn build_adder(
    arch: AdderArch,
    width: usize,
    protocol: Protocol,
) -> Result<Adder, AdderError> {
    arch.check_width(width)?;
    let mut nl = Netlist::new(Some(protocol));
    let ports = declare_adder_ports(&mut nl, width);
    let mut census = Census::default();

    match arch {
        AdderArch::Rca => {
            let mut carry = ports.c0;
            for i in 0..width {
                let cout = if i + 1 == width {
                    ports.cn
                } else {
                    nl.add_rail_pair(&format!("C{}", i + 1))
                };
                emit_full_adder(
                    &mut nl,
                    protocol,
                    &format!("FA{i}."),
                    ports.x[i],
                    ports.y[i],
                    carry,
                    ports.sum[i],
                    cout,
                );
                census.full_adders += 1;
                carry = cout;
            }
        }
        AdderArch::Bcla => {
            let m = width / 4;
            let mut block_cin = ports.c0;
            for j in 0..m {
                let c4 = if j + 1 == m {
                    ports.cn
                } else {
                    nl.add_rail_pair(&format!("C{}", 4 * (j + 1)))
                };
                emit_block(
                    &mut nl,
                    protocol,
                    &ports,
                    j,
                    block_cin,
                    block_cin,
                    c4,
                    None,
                    &mut census,
                );
                block_cin = c4;
            }
        }
        AdderArch::Bclarc => {
            emit_bclarc_section(&mut nl, protocol, &ports, 0, ports.c0, ports.c0, &mut census);
        }
        AdderArch::Hybrid { rca_nibbles } => {
            let mut carry = ports.c0;
            for i in 0..4 * rca_nibbles {
                let cout = nl.add_rail_pair(&format!("C{}", i + 1));
                emit_full_adder(
                    &mut nl,
                    protocol,
                    &format!("FA{i}."),
                    ports.x[i],
                    ports.y[i],
                    carry,
                    ports.sum[i],
                    cout,
                );
                census.full_adders += 1;
                carry = cout;
            }
            emit_bclarc_section(&mut nl, protocol, &ports, rca_nibbles, carry, carry, &mut census);
        }
    }

    debug_assert!(nl.validate().is_empty());
    Ok(Adder {
        arch,
        width,
        protocol,
        netlist: nl,
        census,
    })
}

/// Blocks `first..` in redundant-carry style: every block but the last is
/// a BCLGRC whose fast carry chains the lookahead; the most significant
/// block is a plain BCLG, so the adder's carry-out is synchronized.
fn emit_bclarc_section(
    nl: &mut Netlist,
    p: Protocol,
    ports: &Ports,
    first: usize,
    la_cin: RailPair,
    fa_cin: RailPair,
    census: &mut Census,
) {
    let m = ports.x.len() / 4;
    let mut la_cin = la_cin;
    let mut fa_cin = fa_cin;
    for j in first..m {
        let last = j + 1 == m;
        let c4 = if last {
            ports.cn
        } else {
            nl.add_rail_pair(&format!("C{}", 4 * (j + 1)))
        };
        let rc4 = if last {
            None
        } else {
            Some(nl.add_rail_pair(&format!("RC{}", 4 * (j + 1))))
        };
        emit_block(nl, p, ports, j, la_cin, fa_cin, c4, rc4, census);
        la_cin = rc4.unwrap_or(c4);
        fa_cin = c4;
    }
}

/// Standalone three-input XOR block (ports `X0 Y0 C0` in, `SUM0` out).
pub fn build_xor3(protocol: Protocol) -> Netlist {
    let mut nl = Netlist::new(Some(protocol));
    let x = nl.declare_port("X0", PortDir::Input).expect("port");
    let y = nl.declare_port("Y0", PortDir::Input).expect("port");
    let c = nl.declare_port("C0", PortDir::Input).expect("port");
    let sum = nl.declare_port("SUM0", PortDir::Output).expect("port");
    emit_xor3(&mut nl, protocol, "", x, y, c, sum);
    nl
}

/// Standalone lookahead generator block (ports `X0..X3 Y0..Y3 C0` in,
/// `C4` and optionally `RC4` out).
pub fn build_bclg(protocol: Protocol, redundant: bool) -> Netlist {
    build_bclg_inner(protocol, redundant, true)
}

/// The same block with the completion-detector synchronization left out:
/// the raw lookahead carry drives `C4` directly. This is a deliberately
/// broken circuit for exercising the checkers; its carry no longer
/// acknowledges bits that the lookahead shortcut skips.
pub fn build_bclg_no_icd(protocol: Protocol, redundant: bool) -> Netlist {
    build_bclg_inner(protocol, redundant, false)
}

fn build_bclg_inner(protocol: Protocol, redundant: bool, icd_sync: bool) -> Netlist {
    let mut nl = Netlist::new(Some(protocol));
    let x: Vec<RailPair> = (0..4)
        .map(|i| nl.declare_port(&format!("X{i}"), PortDir::Input).expect("port"))
        .collect();
    let y: Vec<RailPair> = (0..4)
        .map(|i| nl.declare_port(&format!("Y{i}"), PortDir::Input).expect("port"))
        .collect();
    let c0 = nl.declare_port("C0", PortDir::Input).expect("port");
    let c4 = nl.declare_port("C4", PortDir::Output).expect("port");
    let rc4 = if redundant {
        Some(nl.declare_port("RC4", PortDir::Output).expect("port"))
    } else {
        None
    };
    emit_bclg(&mut nl, protocol, "", &x, &y, c0, c4, rc4, icd_sync);
    nl
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::handshake::Fixture;
    use crate::protocol::{decode, encode};
    use crate::sim::{DelayModel, SimState};

    fn sweep(adder: &Adder, vectors: &[(u64, u64, bool)]) {
        let fx = Fixture::build(&adder.netlist, adder.protocol).expect("fixture");
        let delays = DelayModel::unit();
        let mut session = fx.session(&delays).expect("session");
        session.keep_log = false;
        let io = adder.io();
        for &(x, y, cin) in vectors {
            let trace = session
                .run_transaction(&io.input_vector(x, y, cin))
                .unwrap_or_else(|e| panic!("{} x={x:#x} y={y:#x} cin={cin}: {e}", adder.arch));
            let got = io.decode_outputs(&trace.outputs).expect("data outputs");
            assert_eq!(
                got,
                oracle(x, y, cin, adder.width),
                "{} width {} x={x:#x} y={y:#x} cin={cin}",
                adder.arch,
                adder.width
            );
        }
    }

    fn corner_vectors(width: usize) -> Vec<(u64, u64, bool)> {
        let max = if width == 64 { u64::MAX } else { (1 << width) - 1 };
        let alt = 0xAAAA_AAAA_AAAA_AAAAu64 & max;
        let mut v = Vec::new();
        for cin in [false, true] {
            v.push((0, 0, cin));
            v.push((max, 0, cin));
            v.push((max, 1, cin));
            v.push((max, max, cin));
            v.push((alt, !alt & max, cin));
            v.push((alt >> 1, alt >> 1, cin));
            v.push((1 << (width - 1), 1 << (width - 1), cin));
        }
        v
    }

    fn pseudo_random_vectors(width: usize, n: usize) -> Vec<(u64, u64, bool)> {
        // Small multiplicative generator; good enough to scatter vectors.
        let max = if width == 64 { u64::MAX } else { (1 << width) - 1 };
        let mut s = 0x9E37_79B9_7F4A_7C15u64;
        let mut step = || {
            s = s.wrapping_mul(0xD129_0215_7C11_D52D).wrapping_add(0x9E37);
            s >> 8
        };
        (0..n)
            .map(|_| {
                let x = step() & max;
                let y = step() & max;
                let cin = step() & 1 == 1;
                (x, y, cin)
            })
            .collect()
    }

    #[test]
    fn full_adder_exhaustive_both_protocols() {
        for protocol in [Protocol::Rtz, Protocol::Rto] {
            let adder = build_adder(AdderArch::Rca, 1, protocol).unwrap();
            assert_eq!(adder.census.full_adders, 1);
            let mut vectors = Vec::new();
            for x in 0..2u64 {
                for y in 0..2u64 {
                    for cin in [false, true] {
                        vectors.push((x, y, cin));
                    }
                }
            }
            sweep(&adder, &vectors);
        }
    }

    #[test]
    fn xor3_exhaustive_both_protocols() {
        for protocol in [Protocol::Rtz, Protocol::Rto] {
            let nl = build_xor3(protocol);
            assert!(nl.validate().is_empty());
            let fx = Fixture::build(&nl, protocol).unwrap();
            let delays = DelayModel::unit();
            let mut session = fx.session(&delays).unwrap();
            for bits in 0..8u8 {
                let (x, y, c) = (bits & 1 == 1, bits & 2 != 0, bits & 4 != 0);
                let trace = session.run_transaction(&[x, y, c]).unwrap();
                assert_eq!(trace.outputs[0].bit(), Some(x ^ y ^ c), "{bits:03b}");
            }
        }
    }

    #[test]
    fn full_adder_carry_fires_before_late_carry_in() {
        // Kill at the inputs: the carry-out must not wait for the carry-in.
        let adder = build_adder(AdderArch::Rca, 1, Protocol::Rtz).unwrap();
        let nl = &adder.netlist;
        let mut sim = SimState::new(nl, &DelayModel::unit()).unwrap();
        for port in ["X0", "Y0"] {
            let rails = nl.find_port(port).unwrap().rails;
            let (r1, r0) = encode(DualRailValue::Zero, Protocol::Rtz);
            sim.set_level(rails.rail1, r1, 0).unwrap();
            sim.set_level(rails.rail0, r0, 0).unwrap();
        }
        sim.run_until_quiescent(10_000).unwrap();
        let read = |name: &str| {
            let r = nl.find_port(name).unwrap().rails;
            decode(sim.level(r.rail1), sim.level(r.rail0), Protocol::Rtz)
        };
        assert_eq!(read("C1"), DualRailValue::Zero, "carry killed without cin");
        assert_eq!(read("SUM0"), DualRailValue::Spacer, "sum must wait for cin");
    }

    #[test]
    fn bclg_matches_oracle_for_all_inputs() {
        for redundant in [false, true] {
            let nl = build_bclg(Protocol::Rtz, redundant);
            assert!(nl.validate().is_empty());
            let fx = Fixture::build(&nl, Protocol::Rtz).unwrap();
            let delays = DelayModel::unit();
            let mut session = fx.session(&delays).unwrap();
            session.keep_log = false;
            for x in 0..16u64 {
                for y in 0..16u64 {
                    for cin in [false, true] {
                        let mut values = Vec::new();
                        for i in 0..4 {
                            values.push(x >> i & 1 == 1);
                        }
                        for i in 0..4 {
                            values.push(y >> i & 1 == 1);
                        }
                        values.push(cin);
                        let trace = session.run_transaction(&values).unwrap();
                        let want = oracle(x, y, cin, 4).1;
                        assert_eq!(
                            trace.outputs[0].bit(),
                            Some(want),
                            "x={x} y={y} cin={cin}"
                        );
                        if redundant {
                            assert_eq!(
                                trace.outputs[1].bit(),
                                Some(want),
                                "redundant carry disagrees: x={x} y={y} cin={cin}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bclg_carry_fires_before_late_carry_in_on_generate() {
        let nl = build_bclg(Protocol::Rtz, true);
        let mut sim = SimState::new(&nl, &DelayModel::unit()).unwrap();
        // X = 8, Y = 8: generate at bit 3, kill below. C0 withheld.
        for (port, bit) in [("X3", true), ("Y3", true)] {
            let _ = bit;
            let rails = nl.find_port(port).unwrap().rails;
            sim.set_level(rails.rail1, true, 0).unwrap();
        }
        for port in ["X0", "X1", "X2", "Y0", "Y1", "Y2"] {
            let rails = nl.find_port(port).unwrap().rails;
            sim.set_level(rails.rail0, true, 0).unwrap();
        }
        sim.run_until_quiescent(10_000).unwrap();
        for port in ["C4", "RC4"] {
            let r = nl.find_port(port).unwrap().rails;
            assert_eq!(
                decode(sim.level(r.rail1), sim.level(r.rail0), Protocol::Rtz),
                DualRailValue::One,
                "{port} must fire from the generate alone"
            );
        }
    }

    #[test]
    fn gpk_is_one_hot_per_bit() {
        let nl = build_bclg(Protocol::Rtz, false);
        let fx = Fixture::build(&nl, Protocol::Rtz).unwrap();
        let delays = DelayModel::unit();
        let mut session = fx.session(&delays).unwrap();
        for (x, y) in [(0u64, 0u64), (15, 15), (9, 6), (5, 3), (12, 10)] {
            let mut values = Vec::new();
            for i in 0..4 {
                values.push(x >> i & 1 == 1);
            }
            for i in 0..4 {
                values.push(y >> i & 1 == 1);
            }
            values.push(false);
            let trace = session.run_transaction(&values).unwrap();
            // Inspect levels at the data-phase peak via the log.
            let fnl = fx.netlist();
            for i in 0..4 {
                let nets = [
                    fnl.find_net(&alloc::format!("G{i}")).unwrap(),
                    fnl.find_net(&alloc::format!("K{i}")).unwrap(),
                    fnl.find_net(&alloc::format!("P{i}")).unwrap(),
                ];
                let highs = nets
                    .iter()
                    .filter(|&&n| {
                        trace
                            .log
                            .iter()
                            .filter(|t| t.net == n && t.time < trace.spacer_at)
                            .last()
                            .map(|t| t.level)
                            .unwrap_or(false)
                    })
                    .count();
                assert_eq!(highs, 1, "bit {i} of x={x} y={y}");
            }
        }
    }

    #[test]
    fn ripple_adder_any_width() {
        for width in [1, 2, 3, 5, 8] {
            let adder = build_adder(AdderArch::Rca, width, Protocol::Rtz).unwrap();
            assert_eq!(adder.census.full_adders, width);
            let mut vectors = corner_vectors(width);
            vectors.extend(pseudo_random_vectors(width, 50));
            sweep(&adder, &vectors);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig {
            cases: 24,
            failure_persistence: None,
            ..Default::default()
        })]

        #[test]
        fn ripple_adder_property(
            width in 1usize..=10,
            x in proptest::prelude::any::<u64>(),
            y in proptest::prelude::any::<u64>(),
            cin in proptest::prelude::any::<bool>(),
        ) {
            let max = (1u64 << width) - 1;
            for protocol in [Protocol::Rtz, Protocol::Rto] {
                let adder = build_adder(AdderArch::Rca, width, protocol).unwrap();
                sweep(&adder, &[(x & max, y & max, cin)]);
            }
        }
    }

    #[test]
    fn lookahead_adders_match_oracle() {
        let cases = [
            (AdderArch::Bcla, 8),
            (AdderArch::Bcla, 16),
            (AdderArch::Bclarc, 8),
            (AdderArch::Bclarc, 16),
            (AdderArch::Hybrid { rca_nibbles: 1 }, 8),
            (AdderArch::Hybrid { rca_nibbles: 1 }, 16),
            (AdderArch::Hybrid { rca_nibbles: 2 }, 16),
            (AdderArch::Hybrid { rca_nibbles: 3 }, 16),
        ];
        for (arch, width) in cases {
            let adder = build_adder(arch, width, Protocol::Rtz).unwrap();
            let mut vectors = corner_vectors(width);
            vectors.extend(pseudo_random_vectors(width, 60));
            sweep(&adder, &vectors);
        }
    }

    #[test]
    fn rto_adders_match_oracle() {
        for arch in [AdderArch::Rca, AdderArch::Bclarc] {
            let adder = build_adder(arch, 8, Protocol::Rto).unwrap();
            let mut vectors = corner_vectors(8);
            vectors.extend(pseudo_random_vectors(8, 40));
            sweep(&adder, &vectors);
        }
    }

    #[test]
    fn census_at_32_bits() {
        let rca = build_adder(AdderArch::Rca, 32, Protocol::Rtz).unwrap();
        assert_eq!(
            rca.census,
            Census {
                full_adders: 32,
                ..Census::default()
            }
        );
        let bcla = build_adder(AdderArch::Bcla, 32, Protocol::Rtz).unwrap();
        assert_eq!(
            bcla.census,
            Census {
                bclg: 8,
                full_adders: 24,
                xor3: 8,
                ..Census::default()
            }
        );
        let bclarc = build_adder(AdderArch::Bclarc, 32, Protocol::Rtz).unwrap();
        assert_eq!(
            bclarc.census,
            Census {
                bclg: 1,
                bclgrc: 7,
                full_adders: 24,
                xor3: 8,
            }
        );
        assert_eq!(
            alloc::format!("{}", bclarc.census),
            "BCLG:1 BCLGRC:7 FA:24 XOR3:8"
        );
        let hybrid = build_adder(AdderArch::Hybrid { rca_nibbles: 2 }, 32, Protocol::Rtz).unwrap();
        assert_eq!(
            hybrid.census,
            Census {
                bclg: 1,
                bclgrc: 5,
                full_adders: 8 + 18,
                xor3: 6,
            }
        );
    }

    #[test]
    fn width_rules() {
        assert!(build_adder(AdderArch::Rca, 0, Protocol::Rtz).is_err());
        assert!(build_adder(AdderArch::Rca, 65, Protocol::Rtz).is_err());
        assert!(build_adder(AdderArch::Bcla, 12, Protocol::Rtz).is_ok());
        assert!(build_adder(AdderArch::Bcla, 4, Protocol::Rtz).is_err());
        assert!(build_adder(AdderArch::Bcla, 30, Protocol::Rtz).is_err());
        assert!(build_adder(AdderArch::Bclarc, 10, Protocol::Rtz).is_err());
        assert!(matches!(
            build_adder(AdderArch::Hybrid { rca_nibbles: 2 }, 8, Protocol::Rtz),
            Err(AdderError::BadRippleNibbles { .. })
        ));
        assert!(build_adder(AdderArch::Hybrid { rca_nibbles: 0 }, 16, Protocol::Rtz).is_err());
        assert!(build_adder(AdderArch::Hybrid { rca_nibbles: 4 }, 16, Protocol::Rtz).is_err());
        // Every ripple count that leaves at least one lookahead block works.
        assert!(build_adder(AdderArch::Hybrid { rca_nibbles: 3 }, 16, Protocol::Rtz).is_ok());
        assert!(build_adder(AdderArch::Hybrid { rca_nibbles: 2 }, 16, Protocol::Rtz).is_ok());
    }

    #[test]
    fn arch_names_round_trip() {
        for arch in [
            AdderArch::Rca,
            AdderArch::Bcla,
            AdderArch::Bclarc,
            AdderArch::Hybrid { rca_nibbles: 3 },
        ] {
            let s = alloc::format!("{arch}");
            assert_eq!(AdderArch::parse(&s).unwrap(), arch);
        }
        assert!(AdderArch::parse("csla").is_err());
        assert!(AdderArch::parse("hybrid:x").is_err());
    }

    #[test]
    fn io_shape_recovery() {
        let adder = build_adder(AdderArch::Bclarc, 16, Protocol::Rtz).unwrap();
        let io = AdderIo::from_netlist(&adder.netlist).unwrap();
        assert_eq!(io.width(), 16);
        let xor3 = build_xor3(Protocol::Rtz);
        assert!(AdderIo::from_netlist(&xor3).is_err());
    }

    #[test]
    fn generated_netlists_validate_clean() {
        for protocol in [Protocol::Rtz, Protocol::Rto] {
            for (arch, width) in [
                (AdderArch::Rca, 7),
                (AdderArch::Bcla, 16),
                (AdderArch::Bclarc, 32),
                (AdderArch::Hybrid { rca_nibbles: 1 }, 16),
            ] {
                let adder = build_adder(arch, width, protocol).unwrap();
                assert!(adder.netlist.validate().is_empty(), "{arch} {protocol}");
            }
            assert!(build_bclg(protocol, true).validate().is_empty());
            assert!(build_bclg_no_icd(protocol, true).validate().is_empty());
        }
    }

    #[test]
    fn rto_build_is_the_dual_of_rtz() {
        let rtz = build_adder(AdderArch::Bclarc, 8, Protocol::Rtz).unwrap();
        let rto = build_adder(AdderArch::Bclarc, 8, Protocol::Rto).unwrap();
        assert!(rtz.netlist.dual().structurally_equal(&rto.netlist));
        assert!(rto.netlist.dual().structurally_equal(&rtz.netlist));
    }
}
