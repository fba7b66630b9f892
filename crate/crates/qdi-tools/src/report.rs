//! Artifact rendering. Every artifact carries the tool version and its
//! RunConfig: text formats as `#` comment lines, the JSON report as
//! fields. `extract_config` recovers the config from either, which is all
//! the rerun command needs.

use std::fmt::Write as _;

use anyhow::{anyhow, Context, Result};
use qdi_core::checks::QdiReport;
use qdi_core::metrics::VectorResult;
use qdi_core::{Netlist, Transition};
use serde_json::json;

use crate::cli::RunConfig;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn artifact_header(config: &RunConfig) -> Vec<String> {
    vec![
        format!("qdi-tools {TOOL_VERSION}"),
        format!(
            "config: {}",
            serde_json::to_string(config).expect("config serializes")
        ),
    ]
}

fn comment_header(config: &RunConfig) -> String {
    artifact_header(config)
        .iter()
        .fold(String::new(), |mut s, line| {
            let _ = writeln!(s, "# {line}");
            s
        })
}

/// Recover the embedded config from any artifact format.
pub fn extract_config(text: &str) -> Result<RunConfig> {
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(text).context("artifact is not valid JSON")?;
        let config = v
            .get("config")
            .ok_or_else(|| anyhow!("JSON artifact has no config field"))?;
        return Ok(serde_json::from_value(config.clone())?);
    }
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("# config: ") {
            return Ok(serde_json::from_str(rest)?);
        }
    }
    Err(anyhow!("artifact has no embedded config"))
}

pub fn trace_csv(config: &RunConfig, results: &[VectorResult]) -> String {
    let mut out = comment_header(config);
    out.push_str("vector,fl,rl,ct,transitions,sum,cout\n");
    for (i, r) in results.iter().enumerate() {
        let _ = writeln!(
            out,
            "{i},{},{},{},{},{:#x},{}",
            r.forward_latency, r.reverse_latency, r.cycle_time, r.transitions, r.sum, r.cout as u8
        );
    }
    out
}

/// One comparison row; analytic columns are empty when no closed form
/// exists for the architecture.
pub struct CompareRow {
    pub arch: String,
    pub protocol: String,
    pub width: usize,
    pub k: Option<usize>,
    pub forward: u64,
    pub reverse: u64,
    pub cycle: u64,
    pub mean_transitions: f64,
    pub analytic: Option<(u64, u64, u64)>,
}

pub fn comparison_csv(config: &RunConfig, rows: &[CompareRow]) -> String {
    let mut out = comment_header(config);
    out.push_str(
        "arch,protocol,n,k,fl,rl,ct,mean_transitions,analytic_fl,analytic_rl,analytic_ct,norm_ct,norm_transitions\n",
    );
    let max_ct = rows.iter().map(|r| r.cycle).max().unwrap_or(1).max(1);
    let max_tr = rows
        .iter()
        .map(|r| r.mean_transitions)
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for r in rows {
        let k = r.k.map(|k| k.to_string()).unwrap_or_default();
        let (afl, arl, act) = match r.analytic {
            Some((f, l, c)) => (f.to_string(), l.to_string(), c.to_string()),
            None => (String::new(), String::new(), String::new()),
        };
        let _ = writeln!(
            out,
            "{},{},{},{k},{},{},{},{:.3},{afl},{arl},{act},{:.6},{:.6}",
            r.arch,
            r.protocol,
            r.width,
            r.forward,
            r.reverse,
            r.cycle,
            r.mean_transitions,
            r.cycle as f64 / max_ct as f64,
            r.mean_transitions / max_tr,
        );
    }
    out
}

/// Transition dump: `<time> <net-name> <level>`, already sorted because
/// the log is appended in event order.
pub fn dump_text(config: &RunConfig, nl: &Netlist, log: &[Transition]) -> String {
    let mut out = comment_header(config);
    for t in log {
        let _ = writeln!(out, "{} {} {}", t.time, nl.net_name(t.net), t.level as u8);
    }
    out
}

/// The check report as JSON, config included.
pub fn check_report_json(
    config: &RunConfig,
    target: &str,
    report: &QdiReport,
    ack_sweep: Option<(u64, u64)>,
) -> String {
    let monotonic: Vec<_> = report
        .monotonic
        .iter()
        .map(|v| {
            json!({
                "net": v.name,
                "time": v.time,
                "phase": if v.data_phase { "data" } else { "spacer" },
                "detail": v.detail,
            })
        })
        .collect();
    let acknowledgement: Vec<_> = report
        .acknowledgement
        .iter()
        .map(|v| json!({ "net": v.name, "level": v.level as u8 }))
        .collect();
    let indication = report.indication.as_ref().map(|ind| {
        json!({
            "class": ind.class.to_string(),
            "experiments": ind.experiments,
            "exhaustive": ind.exhaustive,
            "degenerate_values": ind.degenerate_values,
            "witnesses": ind.witnesses.iter().map(|w| {
                json!({
                    "values": w.values.iter().map(|&b| b as u8).collect::<Vec<_>>(),
                    "withheld_port": w.withheld_port,
                    "phase": if w.data_phase { "data" } else { "spacer" },
                })
            }).collect::<Vec<_>>(),
        })
    });
    let robustness = report.robustness.as_ref().map(|r| {
        json!({
            "trials": r.trials,
            "transactions": r.transactions,
            "delay_range": [r.delay_range.0, r.delay_range.1],
            "base_seed": r.base_seed,
            "failures": r.failures.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        })
    });
    let doc = json!({
        "tool": "qdi-tools",
        "version": TOOL_VERSION,
        "config": serde_json::to_value(config).expect("config serializes"),
        "target": target,
        "monotonic_violations": monotonic,
        "acknowledgement_violations": acknowledgement,
        "acknowledgement_sweep": ack_sweep.map(|(trials, bad)| json!({
            "trials": trials,
            "trials_with_violations": bad,
        })),
        "indication": indication,
        "robustness": robustness,
        "clean": report.is_clean(),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    text
}
