//! Plain-text description of a state and two measurement bases.
//!
//! ```text
//! # lines starting with '#' are ignored
//! dim: 2
//! bloch: 0.5 0 0
//! basis Z:
//! 1 0
//! 0 1
//! basis X:
//! 0.7071067811865476 0.7071067811865476
//! 0.7071067811865476 -0.7071067811865476
//! ```
//!
//! Instead of `bloch:` a `matrix:` line may be followed by `dim` rows of
//! `dim` complex literals such as `0.5`, `-0.25+0.5i`, `1e-3i` or `-i`.
//! Each basis block lists one vector per row; rows are normalized.

use crate::numlin::{state_from_bloch, BlochVector, ComplexMatrix, DensityMatrix, OrthonormalBasis, PureState, C64};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct LabeledBasis {
    pub label: String,
    pub basis: OrthonormalBasis,
}

#[derive(Clone, Debug)]
pub struct StateFile {
    pub rho: DensityMatrix,
    pub bases: [LabeledBasis; 2],
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_real(text: &str, line: usize) -> Result<f64> {
    let v: f64 = text
        .parse()
        .map_err(|_| parse_error(line, format!("'{text}' is not a number")))?;
    if !v.is_finite() {
        return Err(parse_error(line, format!("'{text}' is not finite")));
    }
    Ok(v)
}

/// Parses `re`, `re+imi`, `re-imi`, `imi`, `i` or `-i`.
pub fn parse_complex(text: &str, line: usize) -> Result<C64> {
    let Some(body) = text.strip_suffix('i') else {
        return Ok(C64::new(parse_real(text, line)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k], line)?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other, line)?,
    };
    Ok(C64::new(re, im))
}

fn parse_row(text: &str, dim: usize, line: usize) -> Result<Vec<C64>> {
    let row: Vec<C64> = text
        .split_whitespace()
        .map(|t| parse_complex(t, line))
        .collect::<Result<_>>()?;
    if row.len() != dim {
        return Err(parse_error(line, format!("expected {dim} entries, found {}", row.len())));
    }
    Ok(row)
}

enum Representation {
    Bloch([f64; 3]),
    Matrix(Vec<Vec<C64>>),
}

/// Parses the text of a state file. Errors carry 1-based line numbers;
/// a matrix that is not a density matrix reports the failed invariant.
pub fn parse_state_file(text: &str) -> Result<StateFile> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();

    let mut dim: Option<usize> = None;
    let mut repr: Option<(usize, Representation)> = None;
    let mut bases: Vec<(usize, String, Vec<Vec<C64>>)> = Vec::new();
    let mut idx = 0;

    let need_dim = |dim: Option<usize>, line: usize| dim.ok_or_else(|| parse_error(line, "'dim:' must come first"));

    while idx < lines.len() {
        let (line, content) = lines[idx];
        idx += 1;
        if let Some(rest) = content.strip_prefix("dim:") {
            if dim.is_some() {
                return Err(parse_error(line, "duplicate 'dim:'"));
            }
            let d: usize = rest
                .trim()
                .parse()
                .map_err(|_| parse_error(line, format!("'{}' is not a dimension", rest.trim())))?;
            if !(2..=8).contains(&d) {
                return Err(parse_error(line, format!("dimension {d} outside [2, 8]")));
            }
            dim = Some(d);
        } else if let Some(rest) = content.strip_prefix("bloch:") {
            let d = need_dim(dim, line)?;
            if d != 2 {
                return Err(parse_error(line, "'bloch:' requires dim: 2"));
            }
            if repr.is_some() {
                return Err(parse_error(line, "state given twice"));
            }
            let parts: Vec<f64> = rest
                .split_whitespace()
                .map(|t| parse_real(t, line))
                .collect::<Result<_>>()?;
            let [x, y, z] = parts[..] else {
                return Err(parse_error(line, format!("expected 3 Bloch components, found {}", parts.len())));
            };
            repr = Some((line, Representation::Bloch([x, y, z])));
        } else if content == "matrix:" {
            let d = need_dim(dim, line)?;
            if repr.is_some() {
                return Err(parse_error(line, "state given twice"));
            }
            let rows = take_rows(&lines, &mut idx, d, line)?;
            repr = Some((line, Representation::Matrix(rows)));
        } else if let Some(label) = content.strip_prefix("basis").and_then(|r| r.strip_suffix(':')) {
            let d = need_dim(dim, line)?;
            let label = label.trim();
            if label.is_empty() {
                return Err(parse_error(line, "basis label missing"));
            }
            let rows = take_rows(&lines, &mut idx, d, line)?;
            bases.push((line, label.to_string(), rows));
        } else {
            return Err(parse_error(line, format!("unrecognized line '{content}'")));
        }
    }

    let last_line = lines.last().map_or(1, |(l, _)| *l);
    need_dim(dim, last_line)?;
    let (repr_line, repr) = repr.ok_or_else(|| parse_error(last_line, "missing 'bloch:' or 'matrix:'"))?;
    let rho = match repr {
        Representation::Bloch([x, y, z]) => {
            let r = BlochVector::new(x, y, z).map_err(|e| parse_error(repr_line, e.to_string()))?;
            state_from_bloch(&r)?
        }
        Representation::Matrix(rows) => DensityMatrix::new(ComplexMatrix::from_rows(&rows)?)?,
    };
    if bases.len() != 2 {
        return Err(parse_error(last_line, format!("expected 2 basis blocks, found {}", bases.len())));
    }
    let mut built = Vec::with_capacity(2);
    for (line, label, rows) in bases {
        let vectors = rows
            .into_iter()
            .map(PureState::normalized)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| parse_error(line, format!("basis {label}: {e}")))?;
        let basis = OrthonormalBasis::new(vectors).map_err(|e| parse_error(line, format!("basis {label}: {e}")))?;
        built.push(LabeledBasis { label, basis });
    }
    let second = built.pop().expect("two bases");
    let first = built.pop().expect("two bases");
    Ok(StateFile {
        rho,
        bases: [first, second],
    })
}

fn take_rows(lines: &[(usize, &str)], idx: &mut usize, dim: usize, header: usize) -> Result<Vec<Vec<C64>>> {
    let mut rows = Vec::with_capacity(dim);
    for k in 0..dim {
        let Some(&(line, content)) = lines.get(*idx) else {
            return Err(parse_error(header, format!("expected {dim} rows, found {k}")));
        };
        rows.push(parse_row(content, dim, line)?);
        *idx += 1;
    }
    Ok(rows)
}
