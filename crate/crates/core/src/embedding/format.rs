//! Text format for embeddings:
//!
//! ```text
//! surface: torus
//! rotation:
//! 0: 0 1 2 3
//! twins:
//! 0 5
//! crossings:
//! 9
//! origins:
//! 0 5 -> 0 1
//! new:
//! 12 13
//! ```
//!
//! `new:` lists augmentation segments and only appears in files written for
//! G*. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use super::{EmbeddingSpec, Surface};
use crate::error::{Error, Result};
use crate::graph::Edge;

pub struct EmbeddingFile;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Rotation,
    Twins,
    Crossings,
    Origins,
    New,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn ints(line_no: usize, s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("expected a nonnegative integer, found {t:?}")))
        })
        .collect()
}

impl EmbeddingFile {
    pub fn parse(text: &str) -> Result<EmbeddingSpec> {
        let mut spec = EmbeddingSpec::default();
        let mut section = Section::None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("surface:") {
                spec.surface = Some(rest.parse().map_err(|e: String| parse_err(line_no, e))?);
                section = Section::None;
                continue;
            }
            let header = match line {
                "rotation:" => Some(Section::Rotation),
                "twins:" => Some(Section::Twins),
                "crossings:" => Some(Section::Crossings),
                "origins:" => Some(Section::Origins),
                "new:" => Some(Section::New),
                _ => None,
            };
            if let Some(h) = header {
                section = h;
                continue;
            }
            match section {
                Section::None => {
                    return Err(parse_err(line_no, format!("line outside any section: {line:?}")))
                }
                Section::Rotation => {
                    let (v, darts) = line
                        .split_once(':')
                        .ok_or_else(|| parse_err(line_no, "rotation lines look like \"v: d1 d2 ...\""))?;
                    let v = ints(line_no, v)?;
                    if v.len() != 1 {
                        return Err(parse_err(line_no, "rotation line needs exactly one vertex id"));
                    }
                    if spec.rotation.insert(v[0], ints(line_no, darts)?).is_some() {
                        return Err(parse_err(line_no, format!("vertex {} listed twice", v[0])));
                    }
                }
                Section::Twins | Section::New => {
                    let p = ints(line_no, line)?;
                    if p.len() != 2 {
                        return Err(parse_err(line_no, "expected a dart pair \"d d'\""));
                    }
                    if section == Section::Twins {
                        spec.twins.push((p[0], p[1]));
                    } else {
                        spec.new_segments.push((p[0], p[1]));
                    }
                }
                Section::Crossings => {
                    for x in ints(line_no, line)? {
                        spec.crossings.insert(x);
                    }
                }
                Section::Origins => {
                    let (seg, edge) = line
                        .split_once("->")
                        .ok_or_else(|| parse_err(line_no, "origin lines look like \"d d' -> u v\""))?;
                    let (s, e) = (ints(line_no, seg)?, ints(line_no, edge)?);
                    if s.len() != 2 || e.len() != 2 {
                        return Err(parse_err(line_no, "origin lines look like \"d d' -> u v\""));
                    }
                    if e[0] == e[1] {
                        return Err(parse_err(line_no, "origin edge is a loop"));
                    }
                    spec.origins.push((s[0], s[1], Edge::new(e[0], e[1])));
                }
            }
        }
        if spec.surface.is_none() {
            return Err(parse_err(0, "missing \"surface:\" line"));
        }
        Ok(spec)
    }

    pub fn write(spec: &EmbeddingSpec) -> String {
        let mut out = String::new();
        let surface = spec.surface.unwrap_or(Surface::Plane);
        writeln!(out, "surface: {surface}").unwrap();
        out.push_str("rotation:\n");
        for (v, darts) in &spec.rotation {
            let ds: Vec<String> = darts.iter().map(usize::to_string).collect();
            writeln!(out, "{v}: {}", ds.join(" ")).unwrap();
        }
        out.push_str("twins:\n");
        for (a, b) in &spec.twins {
            writeln!(out, "{a} {b}").unwrap();
        }
        out.push_str("crossings:\n");
        for x in &spec.crossings {
            writeln!(out, "{x}").unwrap();
        }
        out.push_str("origins:\n");
        for (a, b, e) in &spec.origins {
            writeln!(out, "{a} {b} -> {} {}", e.0, e.1).unwrap();
        }
        if !spec.new_segments.is_empty() {
            out.push_str("new:\n");
            for (a, b) in &spec.new_segments {
                writeln!(out, "{a} {b}").unwrap();
            }
        }
        out
    }
}
