//! Measured timing and switching-activity metrics, plus static path
//! analysis for cross-checking the closed-form model.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::adders::{oracle, Adder, AdderArch, AdderError};
use crate::handshake::{Fixture, HandshakeError};
use crate::netlist::{GateKind, NetId, Netlist};
use crate::sim::{DelayModel, SimTime};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricsError {
    EmptyVectors,
    Handshake(HandshakeError),
    Decode(AdderError),
    /// Decoded result disagrees with the integer oracle.
    WrongSum {
        x: u64,
        y: u64,
        cin: bool,
        got: (u64, bool),
        want: (u64, bool),
    },
}

impl From<HandshakeError> for MetricsError {
    fn from(e: HandshakeError) -> Self {
        MetricsError::Handshake(e)
    }
}

impl From<AdderError> for MetricsError {
    fn from(e: AdderError) -> Self {
        MetricsError::Decode(e)
    }
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::EmptyVectors => write!(f, "no vectors to measure"),
            MetricsError::Handshake(e) => write!(f, "{e}"),
            MetricsError::Decode(e) => write!(f, "{e}"),
            MetricsError::WrongSum {
                x,
                y,
                cin,
                got,
                want,
            } => write!(
                f,
                "x={x:#x} y={y:#x} cin={cin}: decoded {:#x}/{} want {:#x}/{}",
                got.0, got.1 as u8, want.0, want.1 as u8
            ),
        }
    }
}

impl core::error::Error for MetricsError {}

/// Timing and activity of one measured transaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VectorResult {
    pub x: u64,
    pub y: u64,
    pub cin: bool,
    pub forward_latency: SimTime,
    pub reverse_latency: SimTime,
    pub cycle_time: SimTime,
    pub transitions: u64,
    pub sum: u64,
    pub cout: bool,
}

/// Worst cases and switching totals over a vector set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub worst_forward: SimTime,
    pub worst_reverse: SimTime,
    pub worst_cycle: SimTime,
    pub total_transitions: u64,
    pub mean_transitions: f64,
}

/// Switching-activity proxy: raw transition counts stand in for power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionProxy {
    pub total: u64,
    pub mean: f64,
}

pub fn transition_power_proxy(results: &[VectorResult]) -> TransitionProxy {
    let total: u64 = results.iter().map(|r| r.transitions).sum();
    let mean = if results.is_empty() {
        0.0
    } else {
        total as f64 / results.len() as f64
    };
    TransitionProxy { total, mean }
}

/// Run every vector through a fresh fixture session and collect worst-case
/// figures. Results are also checked against the integer oracle, so a
/// metrics sweep doubles as a functional sweep.
pub fn measure_metrics(
    adder: &Adder,
    vectors: &[(u64, u64, bool)],
    delays: &DelayModel,
) -> Result<(Vec<VectorResult>, Aggregate), MetricsError> {
    if vectors.is_empty() {
        return Err(MetricsError::EmptyVectors);
    }
    let fixture = Fixture::build(&adder.netlist, adder.protocol)?;
    let mut session = fixture.session(delays)?;
    session.keep_log = false;
    let io = adder.io();
    let mut results = Vec::with_capacity(vectors.len());
    for &(x, y, cin) in vectors {
        let trace = session.run_transaction(&io.input_vector(x, y, cin))?;
        let (sum, cout) = io.decode_outputs(&trace.outputs)?;
        let want = oracle(x, y, cin, adder.width);
        if (sum, cout) != want {
            return Err(MetricsError::WrongSum {
                x,
                y,
                cin,
                got: (sum, cout),
                want,
            });
        }
        results.push(VectorResult {
            x,
            y,
            cin,
            forward_latency: trace.forward_latency,
            reverse_latency: trace.reverse_latency,
            cycle_time: trace.cycle_time,
            transitions: trace.transitions,
            sum,
            cout,
        });
    }
    let proxy = transition_power_proxy(&results);
    let agg = Aggregate {
        worst_forward: results.iter().map(|r| r.forward_latency).max().unwrap(),
        worst_reverse: results.iter().map(|r| r.reverse_latency).max().unwrap(),
        worst_cycle: results.iter().map(|r| r.cycle_time).max().unwrap(),
        total_transitions: proxy.total,
        mean_transitions: proxy.mean,
    };
    Ok((results, agg))
}

/// Directed vectors aimed at the worst structural paths: the full
/// propagate chain, propagate fed from the carry-in, solid generate and
/// kill, and a generate launched at every block boundary under a
/// propagate prefix above it.
pub fn worst_case_vectors(arch: AdderArch, width: usize) -> Vec<(u64, u64, bool)> {
    let mask = if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    let alt = 0xAAAA_AAAA_AAAA_AAAA & mask;
    let nibble_tops = 0x8888_8888_8888_8888 & mask;
    let mut v = alloc::vec![
        // Generate at bit 0, propagate everywhere above: the longest ripple.
        (mask, 1, false),
        // Carry-in rides the full propagate chain.
        (mask, 0, true),
        (alt, !alt & mask, true),
        // No carry movement at all, with and without carry-in.
        (mask, mask, false),
        (mask, mask, true),
        (0, 0, false),
        (0, 0, true),
        // Every block generates at its top bit and kills below.
        (nibble_tops, nibble_tops, false),
    ];
    // Launch a carry at every bit of every block boundary region and
    // propagate it to the top. Offsets below the block top matter: a
    // generate reached through a propagate prefix takes the longest way
    // through the group-generate logic, in both phases.
    let blocks = width / 4;
    for j in 0..blocks.max(1) {
        for offset in 0..4 {
            let bit = (4 * j + offset).min(width - 1);
            let x = mask & !((1u64 << bit) - 1);
            let y = 1u64 << bit;
            if !v.contains(&(x, y, false)) {
                v.push((x, y, false));
            }
        }
    }
    let _ = arch; // same directed set serves every architecture
    v
}

/// Longest register-to-output paths of a datapath, by gate count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathAnalysis {
    /// Gate stages on the longest input-to-output path.
    pub depth: usize,
    /// Sorted gate-kind multisets of all maximal paths (deduplicated,
    /// truncated at a small cap for pathological netlists).
    pub multisets: Vec<Vec<GateKind>>,
    pub truncated: bool,
}

const MULTISET_CAP: usize = 64;

/// Static longest-path enumeration under unit gate weights. Ignores
/// C-element state (treats every gate as a combinational stage), which is
/// exactly the abstraction the closed-form model uses.
pub fn longest_input_to_output_path(nl: &Netlist) -> PathAnalysis {
    // Longest distance from any undriven net to each net, in gate stages.
    // Kahn's ordering over gates; a gate fires once all driven inputs have
    // their final distance.
    let n = nl.net_count();
    let mut dist = alloc::vec![0usize; n];
    let mut indeg = alloc::vec![0usize; nl.gate_count()];
    let mut consumers: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    let mut ready: Vec<usize> = Vec::new();
    for (gi, g) in nl.gates().iter().enumerate() {
        for &i in &g.inputs {
            if nl.net(i).driver.is_some() {
                indeg[gi] += 1;
                consumers[i.index()].push(gi);
            }
        }
        if indeg[gi] == 0 {
            ready.push(gi);
        }
    }
    while let Some(gi) = ready.pop() {
        let g = &nl.gates()[gi];
        dist[g.output.index()] = 1 + g
            .inputs
            .iter()
            .map(|&i| dist[i.index()])
            .max()
            .unwrap_or(0);
        for &gj in &consumers[g.output.index()] {
            indeg[gj] -= 1;
            if indeg[gj] == 0 {
                ready.push(gj);
            }
        }
    }

    let depth = nl
        .outputs()
        .iter()
        .flat_map(|p| [p.rails.rail1, p.rails.rail0])
        .map(|r| dist[r.index()])
        .max()
        .unwrap_or(0);

    // Multisets of all maximal paths, memoized per net.
    let mut memo: BTreeMap<u32, BTreeSet<Vec<GateKind>>> = BTreeMap::new();
    let mut truncated = false;
    fn collect(
        nl: &Netlist,
        dist: &[usize],
        net: NetId,
        memo: &mut BTreeMap<u32, BTreeSet<Vec<GateKind>>>,
        truncated: &mut bool,
    ) -> BTreeSet<Vec<GateKind>> {
        if let Some(hit) = memo.get(&(net.index() as u32)) {
            return hit.clone();
        }
        let mut out = BTreeSet::new();
        match nl.net(net).driver {
            None => {
                out.insert(Vec::new());
            }
            Some(g) => {
                let gate = nl.gate(g);
                let want = dist[net.index()] - 1;
                let mut seen = BTreeSet::new();
                for &i in &gate.inputs {
                    if dist[i.index()] == want && seen.insert(i) {
                        for sub in collect(nl, dist, i, memo, truncated) {
                            let mut m = sub;
                            let pos = m
                                .binary_search(&gate.kind)
                                .unwrap_or_else(|p| p);
                            m.insert(pos, gate.kind);
                            out.insert(m);
                            if out.len() > MULTISET_CAP {
                                *truncated = true;
                                break;
                            }
                        }
                    }
                    if out.len() > MULTISET_CAP {
                        break;
                    }
                }
            }
        }
        memo.insert(net.index() as u32, out.clone());
        out
    }

    let mut multisets = BTreeSet::new();
    for p in nl.outputs() {
        for r in [p.rails.rail1, p.rails.rail0] {
            if dist[r.index()] == depth {
                multisets.extend(collect(nl, &dist, r, &mut memo, &mut truncated));
            }
        }
    }
    PathAnalysis {
        depth,
        multisets: multisets.into_iter().collect(),
        truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adders::build_adder;
    use crate::latency::analytic_latency;
    use crate::protocol::Protocol;

    #[test]
    fn directed_set_shape() {
        let v = worst_case_vectors(AdderArch::Bclarc, 8);
        assert!(v.contains(&(255, 1, false)));
        assert!(v.len() >= 4);
        for &(x, y, _) in &v {
            assert!(x <= 255 && y <= 255, "vectors must fit the width");
        }
        let w = worst_case_vectors(AdderArch::Rca, 64);
        assert!(w.contains(&(u64::MAX, 1, false)));
    }

    #[test]
    fn single_vector_aggregate_is_that_vector() {
        let adder = build_adder(AdderArch::Rca, 4, Protocol::Rtz).unwrap();
        let (results, agg) =
            measure_metrics(&adder, &[(5, 9, false)], &DelayModel::unit()).unwrap();
        assert_eq!(results.len(), 1);
        let r = results[0];
        assert_eq!(r.sum, 14);
        assert!(!r.cout);
        assert_eq!(agg.worst_forward, r.forward_latency);
        assert_eq!(agg.worst_reverse, r.reverse_latency);
        assert_eq!(agg.worst_cycle, r.cycle_time);
        assert_eq!(agg.total_transitions, r.transitions);
        assert_eq!(agg.mean_transitions, r.transitions as f64);
    }

    #[test]
    fn transition_proxy_arithmetic() {
        let base = VectorResult {
            x: 0,
            y: 0,
            cin: false,
            forward_latency: 0,
            reverse_latency: 0,
            cycle_time: 0,
            transitions: 40,
            sum: 0,
            cout: false,
        };
        let p = transition_power_proxy(&[base]);
        assert_eq!(p.total, 40);
        assert_eq!(p.mean, 40.0);
        let p2 = transition_power_proxy(&[base, VectorResult { transitions: 20, ..base }]);
        assert_eq!(p2.total, 60);
        assert_eq!(p2.mean, 30.0);
    }

    #[test]
    fn repeat_vectors_switch_identically() {
        let adder = build_adder(AdderArch::Bcla, 8, Protocol::Rtz).unwrap();
        let (results, _) = measure_metrics(
            &adder,
            &[(0x5A, 0x3C, true), (0x5A, 0x3C, true)],
            &DelayModel::unit(),
        )
        .unwrap();
        assert_eq!(results[0], results[1]);
    }

    #[test]
    fn worst_case_timing_at_32_bits() {
        // Hand-traced unit-delay figures for the generated netlists.
        let delays = DelayModel::unit();
        let vectors = worst_case_vectors(AdderArch::Bcla, 32);
        let bcla = build_adder(AdderArch::Bcla, 32, Protocol::Rtz).unwrap();
        let (_, agg_bcla) = measure_metrics(&bcla, &vectors, &delays).unwrap();
        assert_eq!(agg_bcla.worst_forward, 29);
        assert_eq!(agg_bcla.worst_reverse, 27);
        let bclarc = build_adder(AdderArch::Bclarc, 32, Protocol::Rtz).unwrap();
        let (_, agg_bclarc) = measure_metrics(&bclarc, &vectors, &delays).unwrap();
        assert_eq!(agg_bclarc.worst_forward, 18);
        assert_eq!(agg_bclarc.worst_reverse, 8);
        assert!(
            agg_bclarc.worst_cycle < agg_bcla.worst_cycle,
            "redundant carry must cut the cycle time"
        );
    }

    #[test]
    fn longest_path_matches_equation_terms_bcla() {
        let adder = build_adder(AdderArch::Bcla, 32, Protocol::Rtz).unwrap();
        let analysis = longest_input_to_output_path(&adder.netlist);
        assert!(!analysis.truncated);
        let breakdown =
            analytic_latency(AdderArch::Bcla, 32, Protocol::Rtz, &DelayModel::unit()).unwrap();
        // Datapath depth plus the input register equals the forward model.
        assert_eq!(analysis.depth as u64 + 1, breakdown.forward);
        // The equation's kind multiset (register term dropped) must appear
        // among the maximal structural paths.
        let mut want: Vec<GateKind> = Vec::new();
        for t in &breakdown.forward_terms {
            if t.group == "register" {
                continue;
            }
            for _ in 0..t.multiplicity {
                want.push(t.kind);
            }
        }
        want.sort();
        assert!(
            analysis.multisets.contains(&want),
            "equation path missing from structural maxima"
        );
    }

    #[test]
    fn longest_path_bclarc_crosses_the_sync_seam() {
        // The most significant block consumes the synchronized carry of its
        // neighbor rather than the fast redundant one, so the longest
        // structural path swaps one AO21 hop for the C2/OR2/C2 of the
        // synchronizing stage relative to the closed-form list.
        let adder = build_adder(AdderArch::Bclarc, 32, Protocol::Rtz).unwrap();
        let analysis = longest_input_to_output_path(&adder.netlist);
        assert!(!analysis.truncated);
        let breakdown =
            analytic_latency(AdderArch::Bclarc, 32, Protocol::Rtz, &DelayModel::unit()).unwrap();
        assert_eq!(analysis.depth as u64 + 1, breakdown.forward + 2);
        let mut want: Vec<GateKind> = Vec::new();
        for t in &breakdown.forward_terms {
            if t.group == "register" {
                continue;
            }
            for _ in 0..t.multiplicity {
                want.push(t.kind);
            }
        }
        // One AO21 hop out, one synchronized handoff in.
        let pos = want.iter().position(|&k| k == GateKind::Ao21).unwrap();
        want.remove(pos);
        want.extend([GateKind::C2, GateKind::C2, GateKind::Or2]);
        want.sort();
        assert!(
            analysis.multisets.contains(&want),
            "seam-adjusted equation path missing from structural maxima"
        );
    }

    #[test]
    fn empty_vector_set_is_an_error() {
        let adder = build_adder(AdderArch::Rca, 4, Protocol::Rtz).unwrap();
        assert!(matches!(
            measure_metrics(&adder, &[], &DelayModel::unit()),
            Err(MetricsError::EmptyVectors)
        ));
    }
}
