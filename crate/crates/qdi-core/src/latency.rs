//! Closed-form worst-case latency for the lookahead architectures.
//!
//! The forward path of a lookahead adder runs through the least
//! significant block's carry logic, hops across the intermediate blocks'
//! carry gates, ripples through the three full adders of the most
//! significant block and ends at its XOR3, after the input register.
//! The reverse path retraces the carry structure but not the ripple,
//! because a full adder's carry rails return as soon as their local
//! operand terms drop. This module writes those paths down as explicit
//! per-gate-kind term lists and evaluates them against a delay model,
//! generalized from the four-bit block to any block count `m = N/4`:
//! the intermediate-block contribution scales with `m - 2`, and a hybrid
//! with `k` ripple nibbles trades lookahead hops for ripple stages as
//! `(m - 1 - k)` carry hops plus `(4k + 1)` AO22 stages.
//!
//! Ripple-carry adders have no useful closed form here: their forward
//! latency is data-dependent, so they are measured, not predicted.
//!
//! Return-to-one variants substitute every gate with its De Morgan dual
//! and keep the C-elements, so under symmetric delay assignments the two
//! protocols cost the same.

use alloc::vec::Vec;
use core::fmt;

use crate::adders::{AdderArch, AdderError};
use crate::netlist::GateKind;
use crate::protocol::Protocol;
use crate::sim::DelayModel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatencyError {
    /// No closed form for this architecture.
    Unsupported(AdderArch),
    Adder(AdderError),
    /// The delay model has no default for a gate kind on the path.
    MissingDelay(GateKind),
}

impl From<AdderError> for LatencyError {
    fn from(e: AdderError) -> Self {
        LatencyError::Adder(e)
    }
}

impl fmt::Display for LatencyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatencyError::Unsupported(arch) => {
                write!(f, "no closed-form latency for {arch} (measure it instead)")
            }
            LatencyError::Adder(e) => write!(f, "{e}"),
            LatencyError::MissingDelay(kind) => {
                write!(f, "delay model has no default for {}", kind.name())
            }
        }
    }
}

impl core::error::Error for LatencyError {}

/// One group of identical gates on a worst-case path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    /// Which structural feature the gates belong to.
    pub group: &'static str,
    pub kind: GateKind,
    pub multiplicity: u32,
    /// Per-instance delay taken from the model.
    pub delay: u64,
}

impl Term {
    pub fn total(&self) -> u64 {
        self.multiplicity as u64 * self.delay
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} x {} @ {} = {}",
            self.group,
            self.multiplicity,
            self.kind.name(),
            self.delay,
            self.total()
        )
    }
}

/// Worst-case latencies with their per-term derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatencyBreakdown {
    pub forward_terms: Vec<Term>,
    pub reverse_terms: Vec<Term>,
    pub forward: u64,
    pub reverse: u64,
    pub cycle: u64,
}

/// Path descriptions in return-to-zero gate kinds; multiplicities may
/// depend on the block count and the hybrid ripple length.
type Group = (&'static str, GateKind, u32);

fn forward_groups(arch: AdderArch, m: u32) -> Vec<Group> {
    use GateKind::*;
    let mut g: Vec<Group> = Vec::new();
    // Most significant block: XOR3 then its three ripple full adders,
    // listed output-first the way the path is usually read.
    g.push(("xor3", C2, 1));
    g.push(("xor3", Or2, 1));
    g.push(("fa-ripple", Ao22, 3));
    match arch {
        AdderArch::Bcla => {
            g.push(("lookahead-intermediate", C2, 2 * (m - 2)));
            g.push(("lookahead-intermediate", Or2, m - 2));
            g.push(("lookahead-least-significant", Ao22, 1));
            g.push(("lookahead-least-significant", Or3, 1));
            g.push(("lookahead-least-significant", C2, 3));
        }
        AdderArch::Bclarc => {
            g.push(("lookahead-intermediate", Ao21, m - 2));
            g.push(("lookahead-least-significant", Ao22, 1));
            g.push(("lookahead-least-significant", And4, 1));
            g.push(("lookahead-least-significant", Or4, 1));
            g.push(("lookahead-least-significant", Ao21, 1));
        }
        AdderArch::Hybrid { rca_nibbles } => {
            let k = rca_nibbles as u32;
            g.push(("lookahead-intermediate", Ao21, m - 1 - k));
            g.push(("ripple-section", Ao22, 4 * k + 1));
        }
        AdderArch::Rca => unreachable!("rejected before path construction"),
    }
    g.push(("register", C2, 1));
    g
}

fn reverse_groups(arch: AdderArch, m: u32) -> Vec<Group> {
    use GateKind::*;
    let mut g: Vec<Group> = Vec::new();
    // The sum logic returns locally; only the carry structure is retraced.
    g.push(("sum-return", C2, 1));
    g.push(("sum-return", Or2, 1));
    match arch {
        AdderArch::Bcla => {
            g.push(("lookahead-intermediate", C2, 2 * (m - 2)));
            g.push(("lookahead-intermediate", Or2, m - 2));
            g.push(("lookahead-least-significant", Ao22, 1));
            g.push(("lookahead-least-significant", Or3, 1));
            g.push(("lookahead-least-significant", C2, 3));
        }
        // The redundant-carry reverse path crosses one synchronized block
        // and the least significant block, independent of m and of any
        // ripple prefix: spacers spread through the fast carries in
        // parallel.
        AdderArch::Bclarc | AdderArch::Hybrid { .. } => {
            g.push(("lookahead-intermediate", C2, 2));
            g.push(("lookahead-intermediate", Or2, 1));
            g.push(("lookahead-least-significant", Ao22, 1));
            g.push(("lookahead-least-significant", And4, 1));
            g.push(("lookahead-least-significant", Or4, 1));
            g.push(("lookahead-least-significant", Ao21, 1));
        }
        AdderArch::Rca => unreachable!("rejected before path construction"),
    }
    g.push(("register", C2, 1));
    g
}

fn resolve(
    groups: Vec<Group>,
    protocol: Protocol,
    delays: &DelayModel,
) -> Result<(Vec<Term>, u64), LatencyError> {
    let mut terms = Vec::with_capacity(groups.len());
    let mut sum = 0u64;
    for (group, rtz_kind, multiplicity) in groups {
        if multiplicity == 0 {
            continue;
        }
        let kind = match protocol {
            Protocol::Rtz => rtz_kind,
            Protocol::Rto => rtz_kind.dual(),
        };
        let delay = delays
            .default_for(kind)
            .ok_or(LatencyError::MissingDelay(kind))? as u64;
        let term = Term {
            group,
            kind,
            multiplicity,
            delay,
        };
        sum += term.total();
        terms.push(term);
    }
    Ok((terms, sum))
}

/// Evaluate the closed-form worst-case latency of a lookahead adder.
///
/// Uses the per-kind defaults of `delays`; instance overrides are a
/// simulation concern and are ignored here.
pub fn analytic_latency(
    arch: AdderArch,
    width: usize,
    protocol: Protocol,
    delays: &DelayModel,
) -> Result<LatencyBreakdown, LatencyError> {
    if arch == AdderArch::Rca {
        return Err(LatencyError::Unsupported(arch));
    }
    // Reuse the generator's width rules so analytics and netlists agree
    // on what exists.
    arch.check_width(width)?;
    let m = (width / 4) as u32;
    let (forward_terms, forward) = resolve(forward_groups(arch, m), protocol, delays)?;
    let (reverse_terms, reverse) = resolve(reverse_groups(arch, m), protocol, delays)?;
    Ok(LatencyBreakdown {
        forward_terms,
        reverse_terms,
        forward,
        reverse,
        cycle: forward + reverse,
    })
}
