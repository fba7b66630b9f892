//! Vector sources for the simulate command: seeded random batches,
//! exhaustive sweeps, and stimulus files with one transaction per line in
//! the form `X=<hex> Y=<hex> CIN=<0|1>`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VectorSource {
    Random { count: usize },
    Exhaustive,
    File { path: String },
}

#[derive(Debug)]
pub enum StimulusError {
    BadSource(String),
    /// Exhaustive sweeps above this width would not finish at desk scale.
    TooWide { width: usize, limit: usize },
    Syntax { line: usize, why: String },
    OutOfRange { line: usize, field: &'static str },
}

impl fmt::Display for StimulusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StimulusError::BadSource(s) => {
                write!(f, "vector source {s:?} is not random:<n>, exhaustive or file:<path>")
            }
            StimulusError::TooWide { width, limit } => write!(
                f,
                "exhaustive sweep at width {width} exceeds the {limit}-bit limit"
            ),
            StimulusError::Syntax { line, why } => write!(f, "stimulus line {line}: {why}"),
            StimulusError::OutOfRange { line, field } => {
                write!(f, "stimulus line {line}: {field} does not fit the adder width")
            }
        }
    }
}

impl std::error::Error for StimulusError {}

pub const EXHAUSTIVE_WIDTH_LIMIT: usize = 10;

impl VectorSource {
    pub fn parse(s: &str) -> Result<VectorSource, StimulusError> {
        if s == "exhaustive" {
            return Ok(VectorSource::Exhaustive);
        }
        if let Some(n) = s.strip_prefix("random:") {
            let count: usize = n
                .parse()
                .map_err(|_| StimulusError::BadSource(s.into()))?;
            if count == 0 {
                return Err(StimulusError::BadSource(s.into()));
            }
            return Ok(VectorSource::Random { count });
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(VectorSource::File { path: path.into() });
        }
        Err(StimulusError::BadSource(s.into()))
    }
}

fn width_mask(width: usize) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Materialize the vectors for an adder of the given width. File sources
/// must already be loaded into `file_text`.
pub fn vectors(
    source: &VectorSource,
    width: usize,
    seed: u64,
    file_text: Option<&str>,
) -> Result<Vec<(u64, u64, bool)>, StimulusError> {
    let mask = width_mask(width);
    match source {
        VectorSource::Random { count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..*count)
                .map(|_| (rng.gen::<u64>() & mask, rng.gen::<u64>() & mask, rng.gen()))
                .collect())
        }
        VectorSource::Exhaustive => {
            if width > EXHAUSTIVE_WIDTH_LIMIT {
                return Err(StimulusError::TooWide {
                    width,
                    limit: EXHAUSTIVE_WIDTH_LIMIT,
                });
            }
            let top = 1u64 << width;
            let mut v = Vec::with_capacity((top * top * 2) as usize);
            for x in 0..top {
                for y in 0..top {
                    for cin in [false, true] {
                        v.push((x, y, cin));
                    }
                }
            }
            Ok(v)
        }
        VectorSource::File { .. } => parse_stimulus(file_text.unwrap_or(""), mask),
    }
}

fn parse_stimulus(text: &str, mask: u64) -> Result<Vec<(u64, u64, bool)>, StimulusError> {
    let mut v = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stmt = raw.trim();
        if stmt.is_empty() || stmt.starts_with('#') {
            continue;
        }
        let mut x = None;
        let mut y = None;
        let mut cin = None;
        for field in stmt.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or(StimulusError::Syntax {
                line,
                why: format!("{field:?} is not key=value"),
            })?;
            match key {
                "X" | "Y" => {
                    let hex = value.strip_prefix("0x").unwrap_or(value);
                    let parsed =
                        u64::from_str_radix(hex, 16).map_err(|_| StimulusError::Syntax {
                            line,
                            why: format!("{value:?} is not hex"),
                        })?;
                    if key == "X" {
                        x = Some(parsed);
                    } else {
                        y = Some(parsed);
                    }
                }
                "CIN" => {
                    cin = Some(match value {
                        "0" => false,
                        "1" => true,
                        _ => {
                            return Err(StimulusError::Syntax {
                                line,
                                why: format!("CIN must be 0 or 1, got {value:?}"),
                            })
                        }
                    })
                }
                _ => {
                    return Err(StimulusError::Syntax {
                        line,
                        why: format!("unknown field {key:?}"),
                    })
                }
            }
        }
        let (x, y, cin) = match (x, y, cin) {
            (Some(x), Some(y), Some(cin)) => (x, y, cin),
            _ => {
                return Err(StimulusError::Syntax {
                    line,
                    why: "need X=, Y= and CIN=".into(),
                })
            }
        };
        if x & !mask != 0 {
            return Err(StimulusError::OutOfRange { line, field: "X" });
        }
        if y & !mask != 0 {
            return Err(StimulusError::OutOfRange { line, field: "Y" });
        }
        v.push((x, y, cin));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn source_parsing() {
        assert_eq!(
            VectorSource::parse("random:50").unwrap(),
            VectorSource::Random { count: 50 }
        );
        assert_eq!(VectorSource::parse("exhaustive").unwrap(), VectorSource::Exhaustive);
        assert_eq!(
            VectorSource::parse("file:v.txt").unwrap(),
            VectorSource::File { path: "v.txt".into() }
        );
        for bad in ["random:", "random:0", "randoms:3", "", "exhaustive:8"] {
            assert!(VectorSource::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn random_is_seed_deterministic_and_masked() {
        let a = vectors(&VectorSource::Random { count: 100 }, 8, 42, None).unwrap();
        let b = vectors(&VectorSource::Random { count: 100 }, 8, 42, None).unwrap();
        let c = vectors(&VectorSource::Random { count: 100 }, 8, 43, None).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|&(x, y, _)| x < 256 && y < 256));
    }

    #[test]
    fn exhaustive_counts_and_guards() {
        let v = vectors(&VectorSource::Exhaustive, 3, 0, None).unwrap();
        assert_eq!(v.len(), 8 * 8 * 2);
        assert!(matches!(
            vectors(&VectorSource::Exhaustive, 16, 0, None),
            Err(StimulusError::TooWide { .. })
        ));
    }

    #[test]
    fn stimulus_file_round_trip() {
        let text = "# header\nX=ff Y=0x01 CIN=0\n\nX=0 Y=0 CIN=1\n";
        let src = VectorSource::File { path: "x".into() };
        let v = vectors(&src, 8, 0, Some(text)).unwrap();
        assert_eq!(v, vec![(0xff, 1, false), (0, 0, true)]);
    }

    #[test]
    fn stimulus_file_errors() {
        let src = VectorSource::File { path: "x".into() };
        for (text, want) in [
            ("X=zz Y=0 CIN=0", "not hex"),
            ("X=1 Y=0 CIN=2", "CIN"),
            ("X=1 Y=0", "need"),
            ("X=1 Y=0 CIN=0 Q=3", "unknown field"),
            ("X=100 Y=0 CIN=0", "does not fit"),
        ] {
            let err = vectors(&src, 8, 0, Some(text)).unwrap_err().to_string();
            assert!(err.contains(want), "{text:?} -> {err}");
        }
    }
}
