//! The family file format.
//!
//! A family file is plain text: a header line `n=<int>`, then one line per
//! set listing its elements as ascending comma-separated 1-based integers,
//! with the single character `-` standing for the empty set. Lines starting
//! with `#` are comments and blank lines are ignored. Duplicate set lines
//! are rejected.
//!
//! Serialization is canonical: sets ordered by (size, numeric mask), so
//! parsing a serialized family and serializing the parse are both
//! identities.

use crate::error::{Error, Result};
use crate::family::{GroundSet, SetFamily, SubsetMask};

pub fn serialize(family: &SetFamily) -> String {
    let mut out = String::new();
    out.push_str(&format!("n={}\n", family.n()));
    let mut members: Vec<SubsetMask> = family.members().to_vec();
    members.sort_by_key(|m| (m.size(), m.bits()));
    for m in members {
        out.push_str(&set_line(&m));
        out.push('\n');
    }
    out
}

fn set_line(m: &SubsetMask) -> String {
    if m.is_empty() {
        "-".to_string()
    } else {
        m.elements()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn parse(text: &str) -> Result<SetFamily> {
    let mut ground: Option<GroundSet> = None;
    let mut members: Vec<SubsetMask> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match ground {
            None => {
                let n = line
                    .strip_prefix("n=")
                    .ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: format!("expected header 'n=<int>', found '{line}'"),
                    })?
                    .trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse {
                        line: line_no,
                        message: format!("invalid ground-set size: {e}"),
                    })?;
                ground = Some(GroundSet::new(n).map_err(|e| Error::Parse {
                    line: line_no,
                    message: e.to_string(),
                })?);
            }
            Some(g) => {
                let mask = parse_set_line(line, g, line_no)?;
                if members.contains(&mask) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("duplicate set '{line}'"),
                    });
                }
                members.push(mask);
            }
        }
    }
    let ground = ground.ok_or_else(|| Error::Parse {
        line: text.lines().count().max(1),
        message: "missing 'n=<int>' header".into(),
    })?;
    SetFamily::new(ground, members)
}

fn parse_set_line(line: &str, ground: GroundSet, line_no: usize) -> Result<SubsetMask> {
    if line == "-" {
        return Ok(SubsetMask::EMPTY);
    }
    let mut elements = Vec::new();
    for part in line.split(',') {
        let e = part.trim().parse::<u32>().map_err(|err| Error::Parse {
            line: line_no,
            message: format!("invalid element '{part}': {err}"),
        })?;
        if e == 0 || e > ground.n() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("element {e} outside [{}]", ground.n()),
            });
        }
        if let Some(&prev) = elements.last() {
            if e <= prev {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("elements must be strictly ascending, {prev} before {e}"),
                });
            }
        }
        elements.push(e);
    }
    SubsetMask::from_elements(elements).map_err(|e| Error::Parse {
        line: line_no,
        message: e.to_string(),
    })
}

pub fn read_path(path: &std::path::Path) -> Result<SetFamily> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn write_path(path: &std::path::Path, family: &SetFamily) -> Result<()> {
    std::fs::write(path, serialize(family))?;
    Ok(())
}
