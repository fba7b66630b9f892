//! Four-phase dual-rail handshake protocols and rail encodings.
//!
//! Two protocols are supported. Under return-to-zero (RTZ) signalling the
//! spacer is all-rails-low and a data value raises exactly one rail of each
//! pair. Return-to-one (RTO) is the complement: the spacer is all-rails-high
//! and a data value lowers exactly one rail. The rail assignments:
//!
//! | value  | RTZ (rail1, rail0) | RTO (rail1, rail0) |
//! |--------|--------------------|--------------------|
//! | spacer | (0, 0)             | (1, 1)             |
//! | 0      | (0, 1)             | (1, 0)             |
//! | 1      | (1, 0)             | (0, 1)             |
//! | illegal| (1, 1)             | (0, 0)             |
//!
//! An RTO circuit is the De Morgan dual of the RTZ circuit with identical
//! connectivity; every rail carries the complement of its RTZ level, which
//! is why the two tables mirror each other.

use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Protocol {
    Rtz,
    Rto,
}

impl Protocol {
    /// The protocol whose circuits are the De Morgan duals of this one's.
    pub fn opposite(self) -> Protocol {
        match self {
            Protocol::Rtz => Protocol::Rto,
            Protocol::Rto => Protocol::Rtz,
        }
    }

    /// Rail level representing "no data" on every rail.
    pub fn spacer_level(self) -> bool {
        match self {
            Protocol::Rtz => false,
            Protocol::Rto => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Rtz => "rtz",
            Protocol::Rto => "rto",
        }
    }

    pub fn parse(s: &str) -> Option<Protocol> {
        match s {
            "rtz" | "RTZ" => Some(Protocol::Rtz),
            "rto" | "RTO" => Some(Protocol::Rto),
            _ => None,
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Decoded state of one dual-rail signal pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DualRailValue {
    Spacer,
    Zero,
    One,
    /// Both rails active at once; never produced by a correct circuit.
    Illegal,
}

impl DualRailValue {
    pub fn is_data(self) -> bool {
        matches!(self, DualRailValue::Zero | DualRailValue::One)
    }

    pub fn bit(self) -> Option<bool> {
        match self {
            DualRailValue::Zero => Some(false),
            DualRailValue::One => Some(true),
            _ => None,
        }
    }

    pub fn from_bit(bit: bool) -> DualRailValue {
        if bit {
            DualRailValue::One
        } else {
            DualRailValue::Zero
        }
    }
}

impl fmt::Display for DualRailValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DualRailValue::Spacer => "spacer",
            DualRailValue::Zero => "0",
            DualRailValue::One => "1",
            DualRailValue::Illegal => "illegal",
        })
    }
}

/// Rail levels `(rail1, rail0)` for a value under the given protocol.
///
/// Total and invertible: `decode(encode(v, p), p) == v` for all four values.
pub fn encode(value: DualRailValue, protocol: Protocol) -> (bool, bool) {
    let (r1, r0) = match value {
        DualRailValue::Spacer => (false, false),
        DualRailValue::Zero => (false, true),
        DualRailValue::One => (true, false),
        DualRailValue::Illegal => (true, true),
    };
    match protocol {
        Protocol::Rtz => (r1, r0),
        Protocol::Rto => (!r1, !r0),
    }
}

/// Decode rail levels `(rail1, rail0)` under the given protocol.
pub fn decode(rail1: bool, rail0: bool, protocol: Protocol) -> DualRailValue {
    let (r1, r0) = match protocol {
        Protocol::Rtz => (rail1, rail0),
        Protocol::Rto => (!rail1, !rail0),
    };
    match (r1, r0) {
        (false, false) => DualRailValue::Spacer,
        (false, true) => DualRailValue::Zero,
        (true, false) => DualRailValue::One,
        (true, true) => DualRailValue::Illegal,
    }
}
