//! Command line front end: netlist generation, fixture simulation,
//! architecture comparison, QDI property checking, and artifact reruns.
//!
//! Exit codes: 0 clean, 1 property or oracle failure, 2 usage and config
//! errors. Every artifact embeds the tool version and the run's config;
//! `rerun` re-executes that config and reproduces the artifact byte for
//! byte.

pub mod cli;
pub mod delays;
pub mod report;
pub mod stimulus;
pub mod textfmt;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdi_core::adders::{build_bclg, build_bclg_no_icd};
use qdi_core::checks::{
    check_acknowledgement, check_monotonic, classify_indication, delay_robustness, QdiReport,
    StaggerScenario,
};
use qdi_core::latency::LatencyError;
use qdi_core::metrics::VectorResult;
use qdi_core::{
    analytic_latency, build_adder, measure_metrics, oracle, worst_case_vectors, AdderArch,
    AdderIo, DelayModel, Fixture, Netlist, Protocol, Transition,
};

use cli::{BuildArgs, CheckArgs, CheckTarget, Cli, Command, CompareArgs, RerunArgs, RunConfig, SimulateArgs};

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Build(a) => {
            let config = build_config(&a)?;
            execute(&config, a.out.as_deref(), None)
        }
        Command::Simulate(a) => {
            let config = simulate_config(&a)?;
            execute(&config, a.out.as_deref(), a.dump.as_deref())
        }
        Command::Compare(a) => {
            let config = compare_config(&a)?;
            execute(&config, a.out.as_deref(), None)
        }
        Command::Check(a) => {
            let config = check_config(&a)?;
            execute(&config, a.out.as_deref(), None)
        }
        Command::Rerun(a) => cmd_rerun(&a),
    }
}

/// Execute a config. `out` overrides the default artifact path; `dump`
/// names the transition dump when the config asks for one.
pub fn execute(config: &RunConfig, out: Option<&str>, dump: Option<&str>) -> Result<i32> {
    match config {
        RunConfig::Build { .. } => cmd_build(config, out),
        RunConfig::Simulate { .. } => cmd_simulate(config, out, dump),
        RunConfig::Compare { .. } => cmd_compare(config, out),
        RunConfig::Check { .. } => cmd_check(config, out),
    }
}

fn canon_arch(arch: &str, k: Option<usize>) -> Result<String> {
    let canon = match (arch, k) {
        ("hybrid", Some(k)) => format!("hybrid:{k}"),
        ("hybrid", None) => bail!("--arch hybrid needs --k"),
        (other, Some(_)) if !other.starts_with("hybrid") => {
            bail!("--k only applies to --arch hybrid")
        }
        (other, Some(_)) => bail!("give the ripple count once, either {other} or --k"),
        (other, None) => other.to_string(),
    };
    AdderArch::parse(&canon).map_err(|e| anyhow!("{e}"))?;
    Ok(canon)
}

fn parse_protocol(s: &str) -> Result<Protocol> {
    Protocol::parse(s).ok_or_else(|| anyhow!("protocol must be rtz or rto, got {s:?}"))
}

fn build_config(a: &BuildArgs) -> Result<RunConfig> {
    parse_protocol(&a.protocol)?;
    Ok(RunConfig::Build {
        arch: canon_arch(&a.arch, a.k)?,
        width: a.width,
        protocol: a.protocol.clone(),
    })
}

fn simulate_config(a: &SimulateArgs) -> Result<RunConfig> {
    if let Some(p) = &a.protocol {
        parse_protocol(p)?;
    }
    stimulus::VectorSource::parse(&a.vectors).map_err(|e| anyhow!("{e}"))?;
    Ok(RunConfig::Simulate {
        netlist: a.netlist.clone(),
        protocol: a.protocol.clone(),
        vectors: a.vectors.clone(),
        seed: a.seed,
        delays: a.delays.clone(),
        default_delay: a.default_delay,
        dump: a.dump.is_some(),
    })
}

fn compare_config(a: &CompareArgs) -> Result<RunConfig> {
    parse_protocol(&a.protocol)?;
    let archs: Vec<String> = a.archs.split(',').map(str::to_string).collect();
    if archs.len() < 2 {
        bail!("compare needs at least two architectures");
    }
    for arch in &archs {
        AdderArch::parse(arch).map_err(|e| anyhow!("{e}"))?;
    }
    Ok(RunConfig::Compare {
        archs,
        width: a.width,
        protocol: a.protocol.clone(),
        delays: a.delays.clone(),
        default_delay: a.default_delay,
    })
}

fn check_config(a: &CheckArgs) -> Result<RunConfig> {
    parse_protocol(&a.protocol)?;
    let target = match (&a.netlist, &a.arch, &a.block) {
        (Some(path), None, None) => CheckTarget::Netlist { path: path.clone() },
        (None, Some(arch), None) => {
            let width = a.width.ok_or_else(|| anyhow!("--arch needs --width"))?;
            CheckTarget::Arch {
                arch: canon_arch(arch, a.k)?,
                width,
            }
        }
        (None, None, Some(block)) => {
            if block != "bclg" && block != "bclgrc" {
                bail!("--block must be bclg or bclgrc, got {block:?}");
            }
            CheckTarget::Block {
                block: block.clone(),
            }
        }
        _ => bail!("give exactly one of --netlist, --arch, --block"),
    };
    if a.mutant.is_some() && !matches!(target, CheckTarget::Block { .. }) {
        bail!("--mutant applies to --block targets");
    }
    if let Some(m) = &a.mutant {
        if m != "drop-icd" {
            bail!("unknown mutant {m:?}; available: drop-icd");
        }
    }
    Ok(RunConfig::Check {
        target,
        protocol: a.protocol.clone(),
        mutant: a.mutant.clone(),
        trials: a.trials,
        delay_min: a.delay_min,
        delay_max: a.delay_max,
        vectors_per_trial: a.vectors_per_trial,
        seed: a.seed,
        budget: a.budget,
    })
}

fn out_dir() -> PathBuf {
    std::env::var_os("QDI_OUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn resolve_out(out: Option<&str>, default_name: &str) -> PathBuf {
    let p = PathBuf::from(out.unwrap_or(default_name));
    if p.is_absolute() {
        p
    } else {
        out_dir().join(p)
    }
}

fn write_artifact(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn load_delays(spec: &str, default: Option<u32>) -> Result<DelayModel> {
    let text = if spec == "unit" {
        None
    } else {
        Some(fs::read_to_string(spec).with_context(|| format!("reading delay table {spec}"))?)
    };
    delays::load(spec, text.as_deref(), default).map_err(|e| anyhow!("{e}"))
}

fn cmd_build(config: &RunConfig, out: Option<&str>) -> Result<i32> {
    let RunConfig::Build {
        arch,
        width,
        protocol,
    } = config
    else {
        unreachable!()
    };
    let arch_v = AdderArch::parse(arch).map_err(|e| anyhow!("{e}"))?;
    let protocol_v = parse_protocol(protocol)?;
    let adder = build_adder(arch_v, *width, protocol_v).map_err(|e| anyhow!("{e}"))?;
    let text = textfmt::print_netlist(&adder.netlist, &report::artifact_header(config))
        .map_err(|e| anyhow!("{e}"))?;
    let default_name = format!("{}-{width}-{protocol}.net", arch.replace(':', "-"));
    let path = resolve_out(out, &default_name);
    println!("{}", adder.census);
    write_artifact(&path, &text)?;
    Ok(0)
}

/// Load a netlist file and reconcile its protocol statement with the flag.
fn load_netlist(path: &str, flag: Option<&str>) -> Result<(Netlist, Protocol)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading netlist {path}"))?;
    let nl = textfmt::parse_netlist(&text).map_err(|e| anyhow!("{path}: {e}"))?;
    let flag = flag.map(parse_protocol).transpose()?;
    let protocol = match (nl.protocol, flag) {
        (Some(p), Some(f)) if p != f => {
            bail!("netlist {path} is {} but --protocol says {}", p.name(), f.name())
        }
        (Some(p), _) => p,
        (None, Some(f)) => f,
        (None, None) => bail!("netlist {path} has no protocol statement; pass --protocol"),
    };
    Ok((nl, protocol))
}

fn cmd_simulate(config: &RunConfig, out: Option<&str>, dump: Option<&str>) -> Result<i32> {
    let RunConfig::Simulate {
        netlist,
        protocol,
        vectors: vector_spec,
        seed,
        delays: delay_spec,
        default_delay,
        dump: wants_dump,
    } = config
    else {
        unreachable!()
    };
    let (nl, protocol) = load_netlist(netlist, protocol.as_deref())?;
    let io = AdderIo::from_netlist(&nl).map_err(|e| anyhow!("{netlist}: {e}"))?;
    let delays = load_delays(delay_spec, *default_delay)?;
    let source = stimulus::VectorSource::parse(vector_spec).map_err(|e| anyhow!("{e}"))?;
    let file_text = match &source {
        stimulus::VectorSource::File { path } => Some(
            fs::read_to_string(path).with_context(|| format!("reading stimulus {path}"))?,
        ),
        _ => None,
    };
    let vectors = stimulus::vectors(&source, io.width(), *seed, file_text.as_deref())
        .map_err(|e| anyhow!("{e}"))?;

    let fixture = Fixture::build(&nl, protocol).map_err(|e| anyhow!("{e}"))?;
    let mut session = fixture.session(&delays).map_err(|e| anyhow!("{e}"))?;
    session.keep_log = *wants_dump;
    let mut rows: Vec<VectorResult> = Vec::with_capacity(vectors.len());
    let mut log: Vec<Transition> = Vec::new();
    let mut failure: Option<String> = None;
    for &(x, y, cin) in &vectors {
        let trace = match session.run_transaction(&io.input_vector(x, y, cin)) {
            Ok(t) => t,
            Err(e) => {
                failure = Some(format!("x={x:#x} y={y:#x} cin={}: {e}", cin as u8));
                break;
            }
        };
        if *wants_dump {
            log.extend_from_slice(&trace.log);
        }
        let (sum, cout) = match io.decode_outputs(&trace.outputs) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(format!("x={x:#x} y={y:#x} cin={}: {e}", cin as u8));
                break;
            }
        };
        let want = oracle(x, y, cin, io.width());
        if (sum, cout) != want {
            failure = Some(format!(
                "x={x:#x} y={y:#x} cin={}: decoded {sum:#x}/{} want {:#x}/{}",
                cin as u8, cout as u8, want.0, want.1 as u8
            ));
            break;
        }
        rows.push(VectorResult {
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

    let mut csv = report::trace_csv(config, &rows);
    if let Some(why) = &failure {
        csv.push_str(&format!("# aborted: {why}\n"));
    }
    let path = resolve_out(out, "trace.csv");
    write_artifact(&path, &csv)?;
    if *wants_dump {
        let dump_path = resolve_out(dump, "trace.dump");
        write_artifact(&dump_path, &report::dump_text(config, fixture.netlist(), &log))?;
    }
    if let Some(why) = failure {
        eprintln!("FAIL {why}");
        return Ok(1);
    }
    let worst_fl = rows.iter().map(|r| r.forward_latency).max().unwrap_or(0);
    let worst_rl = rows.iter().map(|r| r.reverse_latency).max().unwrap_or(0);
    let worst_ct = rows.iter().map(|r| r.cycle_time).max().unwrap_or(0);
    let mean: f64 = if rows.is_empty() {
        0.0
    } else {
        rows.iter().map(|r| r.transitions as f64).sum::<f64>() / rows.len() as f64
    };
    println!(
        "{} vectors, worst fl/rl/ct {worst_fl}/{worst_rl}/{worst_ct}, mean transitions {mean:.3}",
        rows.len()
    );
    Ok(0)
}

fn cmd_compare(config: &RunConfig, out: Option<&str>) -> Result<i32> {
    let RunConfig::Compare {
        archs,
        width,
        protocol,
        delays: delay_spec,
        default_delay,
    } = config
    else {
        unreachable!()
    };
    let protocol_v = parse_protocol(protocol)?;
    let delays = load_delays(delay_spec, *default_delay)?;
    let mut rows = Vec::new();
    for arch_name in archs {
        let arch = AdderArch::parse(arch_name).map_err(|e| anyhow!("{e}"))?;
        let adder = build_adder(arch, *width, protocol_v).map_err(|e| anyhow!("{e}"))?;
        let vectors = worst_case_vectors(arch, *width);
        let (_, agg) = match measure_metrics(&adder, &vectors, &delays) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("FAIL {arch_name}: {e}");
                return Ok(1);
            }
        };
        let analytic = match analytic_latency(arch, *width, protocol_v, &delays) {
            Ok(b) => Some((b.forward, b.reverse, b.cycle)),
            Err(LatencyError::Unsupported(_)) => None,
            Err(e) => return Err(anyhow!("{e}")),
        };
        rows.push(report::CompareRow {
            arch: arch_name.clone(),
            protocol: protocol.clone(),
            width: *width,
            k: match arch {
                AdderArch::Hybrid { rca_nibbles } => Some(rca_nibbles),
                _ => None,
            },
            forward: agg.worst_forward,
            reverse: agg.worst_reverse,
            cycle: agg.worst_cycle,
            mean_transitions: agg.mean_transitions,
            analytic,
        });
    }
    let path = resolve_out(out, "compare.csv");
    write_artifact(&path, &report::comparison_csv(config, &rows))?;
    Ok(0)
}

/// The staggered-spacer scenario for the 4-bit lookahead blocks: generate
/// at bit 0 under a propagate prefix, with bit 0's operands held at data
/// while everything else returns to spacer.
fn block_scenario() -> StaggerScenario {
    let mut values: Vec<bool> = Vec::new();
    values.extend((0..4).map(|i| 0xFu64 >> i & 1 == 1));
    values.extend((0..4).map(|i| 0x1u64 >> i & 1 == 1));
    values.push(false);
    StaggerScenario {
        values,
        hold: vec![0, 4],
    }
}

fn cmd_check(config: &RunConfig, out: Option<&str>) -> Result<i32> {
    let RunConfig::Check {
        target,
        protocol,
        mutant,
        trials,
        delay_min,
        delay_max,
        vectors_per_trial,
        seed,
        budget,
    } = config
    else {
        unreachable!()
    };
    let protocol_v = parse_protocol(protocol)?;
    if *trials == 0 {
        bail!("--trials must be positive");
    }
    if *delay_min == 0 || delay_min > delay_max {
        bail!("delay range [{delay_min}, {delay_max}] must satisfy 1 <= min <= max");
    }

    let (report, target_name, ack_sweep) = match target {
        CheckTarget::Block { block } => {
            let redundant = block == "bclgrc";
            let nl = match mutant.as_deref() {
                None => build_bclg(protocol_v, redundant),
                Some("drop-icd") => build_bclg_no_icd(protocol_v, redundant),
                Some(m) => bail!("unknown mutant {m:?}"),
            };
            let scenario = block_scenario();
            let unit = DelayModel::unit();
            let acknowledgement =
                check_acknowledgement(&nl, protocol_v, &scenario, &unit).map_err(|e| anyhow!("{e}"))?;
            let sweep = qdi_core::checks::randomized_acknowledgement(
                &nl,
                protocol_v,
                &scenario,
                *trials,
                (*delay_min, *delay_max),
                *seed,
            )
            .map_err(|e| anyhow!("{e}"))?;
            let monotonic = block_monotonic(&nl, protocol_v, *seed)?;
            let indication =
                classify_indication(&nl, protocol_v, *budget, *seed).map_err(|e| anyhow!("{e}"))?;
            let clean_sweep = sweep.trials_with_violations == 0;
            let mut report = QdiReport {
                monotonic,
                acknowledgement,
                indication: Some(indication),
                robustness: None,
            };
            // Fold sweep hits into the headline violations so the exit
            // code reflects them even when unit delays look clean.
            if report.acknowledgement.is_empty() && !clean_sweep {
                report.acknowledgement = sweep.sample.clone();
            }
            let name = match mutant {
                Some(m) => format!("{block} ({m})"),
                None => block.clone(),
            };
            (report, name, Some((sweep.trials, sweep.trials_with_violations)))
        }
        CheckTarget::Arch { arch, width } => {
            let arch_v = AdderArch::parse(arch).map_err(|e| anyhow!("{e}"))?;
            let adder = build_adder(arch_v, *width, protocol_v).map_err(|e| anyhow!("{e}"))?;
            let report = adder_report(
                &adder.netlist,
                protocol_v,
                Some(arch_v),
                (*trials, *delay_min, *delay_max, *vectors_per_trial),
                *seed,
                *budget,
            )?;
            (report, format!("{arch} width {width} {protocol}"), None)
        }
        CheckTarget::Netlist { path } => {
            let (nl, protocol_v) = load_netlist(path, Some(protocol))?;
            let report = adder_report(
                &nl,
                protocol_v,
                None,
                (*trials, *delay_min, *delay_max, *vectors_per_trial),
                *seed,
                *budget,
            )?;
            (report, format!("file {path}"), None)
        }
    };

    let json = report::check_report_json(config, &target_name, &report, ack_sweep);
    let path = resolve_out(out, "report.json");
    println!("{report}");
    write_artifact(&path, &json)?;
    Ok(if report.is_clean() { 0 } else { 1 })
}

/// Unit-delay monotonicity over a few seeded transactions of a block.
fn block_monotonic(
    nl: &Netlist,
    protocol: Protocol,
    seed: u64,
) -> Result<Vec<qdi_core::checks::MonotonicViolation>> {
    let fixture = Fixture::build(nl, protocol).map_err(|e| anyhow!("{e}"))?;
    let delays = DelayModel::unit();
    let mut session = fixture.session(&delays).map_err(|e| anyhow!("{e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ports = nl.inputs().len();
    let mut violations = Vec::new();
    for _ in 0..16 {
        let values: Vec<bool> = (0..ports).map(|_| rng.gen()).collect();
        let trace = session.run_transaction(&values).map_err(|e| anyhow!("{e}"))?;
        violations.extend(check_monotonic(fixture.netlist(), &trace, protocol));
    }
    Ok(violations)
}

/// Monotonicity, robustness and classification for an adder-shaped netlist.
fn adder_report(
    nl: &Netlist,
    protocol: Protocol,
    arch: Option<AdderArch>,
    (trials, delay_min, delay_max, vectors_per_trial): (u64, u32, u32, usize),
    seed: u64,
    budget: u64,
) -> Result<QdiReport> {
    let io = AdderIo::from_netlist(nl).map_err(|e| {
        anyhow!("{e}; the checkers need the X/Y/C0/SUM port shape to drive an oracle")
    })?;
    let width = io.width();
    let vectors = match arch {
        Some(a) => worst_case_vectors(a, width),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
            (0..16)
                .map(|_| (rng.gen::<u64>() & m, rng.gen::<u64>() & m, rng.gen()))
                .collect()
        }
    };
    let fixture = Fixture::build(nl, protocol).map_err(|e| anyhow!("{e}"))?;
    let delays = DelayModel::unit();
    let mut session = fixture.session(&delays).map_err(|e| anyhow!("{e}"))?;
    let mut monotonic = Vec::new();
    for &(x, y, cin) in &vectors {
        let trace = session
            .run_transaction(&io.input_vector(x, y, cin))
            .map_err(|e| anyhow!("x={x:#x} y={y:#x} cin={}: {e}", cin as u8))?;
        monotonic.extend(check_monotonic(fixture.netlist(), &trace, protocol));
    }
    let robustness = delay_robustness(
        nl,
        protocol,
        trials,
        (delay_min, delay_max),
        vectors_per_trial,
        seed,
    )
    .map_err(|e| anyhow!("{e}"))?;
    let indication = classify_indication(nl, protocol, budget, seed).map_err(|e| anyhow!("{e}"))?;
    Ok(QdiReport {
        monotonic,
        acknowledgement: Vec::new(),
        indication: Some(indication),
        robustness: Some(robustness),
    })
}

fn cmd_rerun(a: &RerunArgs) -> Result<i32> {
    let text = fs::read_to_string(&a.artifact)
        .with_context(|| format!("reading artifact {}", a.artifact))?;
    let config = report::extract_config(&text)?;
    let out = a.out.clone().unwrap_or_else(|| format!("{}.rerun", a.artifact));
    let dump = match &config {
        RunConfig::Simulate { dump: true, .. } => Some(format!("{out}.dump")),
        _ => None,
    };
    execute(&config, Some(&out), dump.as_deref())
}
