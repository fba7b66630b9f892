//! Line-oriented netlist text format.
//!
//! ```text
//! # comment
//! protocol rtz
//! port in X0
//! port out SUM0
//! net FA0.W.t
//! gate g0 AO22 FA0.W.t X0.t Y0.f X0.f Y0.t
//! ```
//!
//! `port` lines create the two rails `<name>.t` / `<name>.f`. Every other
//! net appears as a `net` line before any gate references it. Printing
//! emits ports, nets and gates in id order, so parse(print(nl)) rebuilds
//! the netlist with identical ids.

use std::collections::BTreeMap;
use std::fmt;

use qdi_core::{GateKind, NetId, Netlist, PortDir, Protocol};

#[derive(Debug)]
pub enum TextError {
    Syntax { line: usize, why: String },
    UnknownNet { line: usize, name: String },
    DuplicateNet { line: usize, name: String },
    DuplicateProtocol { line: usize },
    /// Printing requires every net to carry a label.
    UnnamedNet(NetId),
    /// The parsed netlist failed structural validation.
    Invalid { violations: usize },
}

impl fmt::Display for TextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TextError::Syntax { line, why } => write!(f, "line {line}: {why}"),
            TextError::UnknownNet { line, name } => {
                write!(f, "line {line}: unknown net {name}")
            }
            TextError::DuplicateNet { line, name } => {
                write!(f, "line {line}: duplicate net {name}")
            }
            TextError::DuplicateProtocol { line } => {
                write!(f, "line {line}: protocol stated twice")
            }
            TextError::UnnamedNet(id) => {
                write!(f, "net {id} has no label; the text format needs one")
            }
            TextError::Invalid { violations } => {
                write!(f, "parsed netlist has {violations} structural violations")
            }
        }
    }
}

impl std::error::Error for TextError {}

/// Render a netlist. `header` lines are emitted first as `#` comments.
pub fn print_netlist(nl: &Netlist, header: &[String]) -> Result<String, TextError> {
    let mut out = String::new();
    for h in header {
        out.push_str("# ");
        out.push_str(h);
        out.push('\n');
    }
    if let Some(p) = nl.protocol {
        out.push_str("protocol ");
        out.push_str(p.name());
        out.push('\n');
    }
    let mut rail_nets = std::collections::BTreeSet::new();
    for (dir, ports) in [("in", nl.inputs()), ("out", nl.outputs())] {
        for p in ports {
            out.push_str("port ");
            out.push_str(dir);
            out.push(' ');
            out.push_str(&p.name);
            out.push('\n');
            rail_nets.insert(p.rails.rail1);
            rail_nets.insert(p.rails.rail0);
        }
    }
    for (i, net) in nl.nets().iter().enumerate() {
        let id = NetId::from_index(i);
        if rail_nets.contains(&id) {
            continue;
        }
        match &net.name {
            Some(name) => {
                out.push_str("net ");
                out.push_str(name);
                out.push('\n');
            }
            None => return Err(TextError::UnnamedNet(id)),
        }
    }
    for (i, g) in nl.gates().iter().enumerate() {
        out.push_str(&format!("gate g{i} {} {}", g.kind.name(), name_of(nl, g.output)?));
        for &input in &g.inputs {
            out.push(' ');
            out.push_str(&name_of(nl, input)?);
        }
        out.push('\n');
    }
    Ok(out)
}

fn name_of(nl: &Netlist, id: NetId) -> Result<String, TextError> {
    match &nl.nets()[id.index()].name {
        Some(n) => Ok(n.clone()),
        None => Err(TextError::UnnamedNet(id)),
    }
}

pub fn parse_netlist(text: &str) -> Result<Netlist, TextError> {
    let mut nl = Netlist::new(None);
    let mut names: BTreeMap<String, NetId> = BTreeMap::new();
    let syntax = |line: usize, why: &str| TextError::Syntax {
        line,
        why: why.into(),
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stmt = raw.trim();
        if stmt.is_empty() || stmt.starts_with('#') {
            continue;
        }
        let mut tok = stmt.split_whitespace();
        match tok.next().unwrap() {
            "protocol" => {
                let name = tok.next().ok_or_else(|| syntax(line, "protocol needs a name"))?;
                let p = Protocol::parse(name)
                    .ok_or_else(|| syntax(line, "protocol must be rtz or rto"))?;
                if nl.protocol.is_some() {
                    return Err(TextError::DuplicateProtocol { line });
                }
                nl.protocol = Some(p);
            }
            "port" => {
                let dir = match tok.next() {
                    Some("in") => PortDir::Input,
                    Some("out") => PortDir::Output,
                    _ => return Err(syntax(line, "port needs a direction, in or out")),
                };
                let name = tok.next().ok_or_else(|| syntax(line, "port needs a name"))?;
                let rails = nl
                    .declare_port(name, dir)
                    .map_err(|e| syntax(line, &e.to_string()))?;
                for (suffix, id) in [(".t", rails.rail1), (".f", rails.rail0)] {
                    let rail_name = format!("{name}{suffix}");
                    if names.insert(rail_name.clone(), id).is_some() {
                        return Err(TextError::DuplicateNet {
                            line,
                            name: rail_name,
                        });
                    }
                }
            }
            "net" => {
                let name = tok.next().ok_or_else(|| syntax(line, "net needs a name"))?;
                if names.contains_key(name) {
                    return Err(TextError::DuplicateNet {
                        line,
                        name: name.into(),
                    });
                }
                let id = nl.add_net(Some(name));
                names.insert(name.into(), id);
            }
            "gate" => {
                let _id = tok.next().ok_or_else(|| syntax(line, "gate needs an id"))?;
                let kind = tok
                    .next()
                    .and_then(GateKind::parse)
                    .ok_or_else(|| syntax(line, "gate needs a known kind"))?;
                let out_name = tok.next().ok_or_else(|| syntax(line, "gate needs an output net"))?;
                let output = *names.get(out_name).ok_or_else(|| TextError::UnknownNet {
                    line,
                    name: out_name.into(),
                })?;
                let mut inputs = Vec::new();
                for name in tok {
                    inputs.push(*names.get(name).ok_or_else(|| TextError::UnknownNet {
                        line,
                        name: name.into(),
                    })?);
                }
                if inputs.is_empty() {
                    return Err(syntax(line, "gate needs at least one input"));
                }
                nl.push_gate_raw(kind, inputs, output);
            }
            other => return Err(syntax(line, &format!("unknown statement {other}"))),
        }
    }

    let violations = nl.validate();
    if !violations.is_empty() {
        return Err(TextError::Invalid {
            violations: violations.len(),
        });
    }
    Ok(nl)
}
