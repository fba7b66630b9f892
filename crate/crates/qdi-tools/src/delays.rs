//! Delay tables. `unit` gives every kind delay 1; a file assigns kinds
//! explicitly, one `<KIND> <positive integer>` per line. A kind the file
//! omits is an error unless a fallback was declared with `--default-delay`:
//! silence here would quietly turn a technology table back into unit
//! delays.

use std::fmt;

use qdi_core::{DelayModel, GateKind};

#[derive(Debug)]
pub enum DelayError {
    Syntax { line: usize, why: String },
    DuplicateKind { line: usize, kind: GateKind },
    MissingKind(GateKind),
    /// `--default-delay` only makes sense with a delay file.
    DefaultWithoutFile,
}

impl fmt::Display for DelayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelayError::Syntax { line, why } => write!(f, "delay file line {line}: {why}"),
            DelayError::DuplicateKind { line, kind } => {
                write!(f, "delay file line {line}: {} assigned twice", kind.name())
            }
            DelayError::MissingKind(kind) => write!(
                f,
                "no delay for {} and no --default-delay given",
                kind.name()
            ),
            DelayError::DefaultWithoutFile => {
                write!(f, "--default-delay needs a delay file, not unit delays")
            }
        }
    }
}

impl std::error::Error for DelayError {}

/// Build the model for `spec`, which is either the literal `unit` or a
/// path whose content is passed in `file_text`.
pub fn load(
    spec: &str,
    file_text: Option<&str>,
    default: Option<u32>,
) -> Result<DelayModel, DelayError> {
    if spec == "unit" {
        if default.is_some() {
            return Err(DelayError::DefaultWithoutFile);
        }
        return Ok(DelayModel::unit());
    }
    parse_table(file_text.unwrap_or(""), default)
}

fn parse_table(text: &str, default: Option<u32>) -> Result<DelayModel, DelayError> {
    let mut given: Vec<(usize, GateKind, u32)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stmt = raw.trim();
        if stmt.is_empty() || stmt.starts_with('#') {
            continue;
        }
        let mut tok = stmt.split_whitespace();
        let kind = tok
            .next()
            .and_then(GateKind::parse)
            .ok_or_else(|| DelayError::Syntax {
                line,
                why: format!("expected a gate kind, got {:?}", stmt.split_whitespace().next().unwrap()),
            })?;
        let delay: u32 = tok
            .next()
            .and_then(|d| d.parse().ok())
            .filter(|&d| d > 0)
            .ok_or_else(|| DelayError::Syntax {
                line,
                why: "expected a positive integer delay".into(),
            })?;
        if tok.next().is_some() {
            return Err(DelayError::Syntax {
                line,
                why: "trailing tokens".into(),
            });
        }
        if given.iter().any(|&(_, k, _)| k == kind) {
            return Err(DelayError::DuplicateKind { line, kind });
        }
        given.push((line, kind, delay));
    }

    let mut model = DelayModel::unit();
    for kind in GateKind::ALL {
        let delay = match given.iter().find(|&&(_, k, _)| k == kind) {
            Some(&(_, _, d)) => d,
            None => default.ok_or(DelayError::MissingKind(kind))?,
        };
        model.set_default(kind, delay).expect("positive by construction");
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_table() -> String {
        GateKind::ALL
            .iter()
            .enumerate()
            .map(|(i, k)| format!("{} {}\n", k.name(), i + 1))
            .collect()
    }

    #[test]
    fn unit_and_full_table() {
        let unit = load("unit", None, None).unwrap();
        assert_eq!(unit.default_for(GateKind::C2), Some(1));
        let table = full_table();
        let model = load("delays.txt", Some(&table), None).unwrap();
        for (i, k) in GateKind::ALL.iter().enumerate() {
            assert_eq!(model.default_for(*k), Some(i as u32 + 1));
        }
    }

    #[test]
    fn missing_kind_needs_default() {
        let partial = "C2 3\nAO22 2\n";
        assert!(matches!(
            load("f", Some(partial), None),
            Err(DelayError::MissingKind(_))
        ));
        let model = load("f", Some(partial), Some(7)).unwrap();
        assert_eq!(model.default_for(GateKind::C2), Some(3));
        assert_eq!(model.default_for(GateKind::And4), Some(7));
    }

    #[test]
    fn table_errors() {
        for (text, want) in [
            ("FROB 3", "gate kind"),
            ("C2 0", "positive"),
            ("C2 x", "positive"),
            ("C2 1 2", "trailing"),
            ("C2 1\nC2 2", "twice"),
        ] {
            let err = load("f", Some(text), Some(1)).unwrap_err().to_string();
            assert!(err.contains(want), "{text:?} -> {err}");
        }
        assert!(matches!(
            load("unit", None, Some(3)),
            Err(DelayError::DefaultWithoutFile)
        ));
    }
}
