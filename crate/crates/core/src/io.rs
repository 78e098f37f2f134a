//! Plain-text world and query files.
//!
//! ```text
//! #!rectpass-world 1
//! # a room with a door
//! R 0 0 10 1
//! P 6 0 0 4 0 4 1 1 1 1 3 0 3
//! ```
//!
//! Query files hold `Q sx sy tx ty d` lines. The first line may be a
//! `#!rectpass-world N` or `#!rectpass-queries N` header; it is an ordinary
//! comment to older readers and files without one are read as version 1.

use std::fmt::Write as _;

use thiserror::Error;

use crate::decompose::RectilinearPolygon;
use crate::geometry::{Coord, Point, Rect, RawShape};
use crate::query::Query;

pub const WORLD_HEADER: &str = "#!rectpass-world";
pub const QUERY_HEADER: &str = "#!rectpass-queries";
pub const FILE_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn check_header(line: usize, text: &str, header: &str) -> Result<(), ParseError> {
    if let Some(rest) = text.strip_prefix("#!") {
        let mut parts = text.split_whitespace();
        let tag = parts.next().unwrap_or("");
        if tag != header {
            return Err(err(line, format!("unexpected header `#!{}`", rest.split_whitespace().next().unwrap_or(""))));
        }
        let version: u32 = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| err(line, "header without version"))?;
        if version != FILE_VERSION {
            return Err(err(line, format!("unsupported version {version}")));
        }
    }
    Ok(())
}

/// Meaningful lines with 1-based numbers; comments and blanks dropped.
fn records<'a>(text: &'a str, header: &'a str) -> impl Iterator<Item = Result<(usize, Vec<&'a str>), ParseError>> + 'a {
    text.lines().enumerate().filter_map(move |(k, raw)| {
        let line = k + 1;
        let trimmed = raw.trim();
        if k == 0 && trimmed.starts_with("#!") {
            return check_header(line, trimmed, header).err().map(Err);
        }
        let body = trimmed.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            None
        } else {
            Some(Ok((line, body.split_whitespace().collect())))
        }
    })
}

fn ints(line: usize, fields: &[&str]) -> Result<Vec<Coord>, ParseError> {
    fields
        .iter()
        .map(|f| f.parse::<Coord>().map_err(|_| err(line, format!("`{f}` is not an integer"))))
        .collect()
}

/// Limit keeping every internal quantity (doubled, aspect-scaled, expanded
/// by a robot of similar size) far from overflow.
const COORD_LIMIT: Coord = 1 << 40;

fn in_range(line: usize, vals: &[Coord]) -> Result<(), ParseError> {
    match vals.iter().find(|v| v.abs() > COORD_LIMIT) {
        Some(v) => Err(err(line, format!("coordinate {v} out of range"))),
        None => Ok(()),
    }
}

/// Parses a world file. Shapes are validated the same way ingestion does,
/// so errors point at the offending line.
pub fn parse_world(text: &str) -> Result<Vec<RawShape>, ParseError> {
    let mut out = Vec::new();
    for rec in records(text, WORLD_HEADER) {
        let (line, fields) = rec?;
        match fields[0] {
            "R" => {
                if fields.len() != 5 {
                    return Err(err(line, "expected `R x1 y1 x2 y2`"));
                }
                let v = ints(line, &fields[1..])?;
                in_range(line, &v)?;
                let r = Rect::new(v[0], v[1], v[2], v[3]);
                if !r.has_positive_extent() {
                    return Err(err(line, "degenerate rectangle (need x1 < x2 and y1 < y2)"));
                }
                out.push(RawShape::Rect(r));
            }
            "P" => {
                let k: usize = fields
                    .get(1)
                    .and_then(|f| f.parse().ok())
                    .ok_or_else(|| err(line, "expected `P k x1 y1 ... xk yk`"))?;
                if fields.len() != 2 + 2 * k {
                    return Err(err(line, format!("polygon declares {k} vertices but has {} numbers", fields.len() - 2)));
                }
                let v = ints(line, &fields[2..])?;
                in_range(line, &v)?;
                let poly = RectilinearPolygon::new(v.chunks(2).map(|c| Point::new(c[0], c[1])).collect());
                poly.validate().map_err(|e| err(line, e.to_string()))?;
                out.push(RawShape::Polygon(poly));
            }
            other => return Err(err(line, format!("unknown record `{other}`"))),
        }
    }
    Ok(out)
}

pub fn write_world(shapes: &[RawShape]) -> String {
    let mut s = format!("{WORLD_HEADER} {FILE_VERSION}\n");
    for shape in shapes {
        match shape {
            RawShape::Rect(r) => writeln!(s, "R {} {} {} {}", r.x1, r.y1, r.x2, r.y2).unwrap(),
            RawShape::Polygon(p) => {
                write!(s, "P {}", p.vertices.len()).unwrap();
                for v in &p.vertices {
                    write!(s, " {} {}", v.x, v.y).unwrap();
                }
                s.push('\n');
            }
        }
    }
    s
}

pub fn parse_queries(text: &str) -> Result<Vec<Query>, ParseError> {
    let mut out = Vec::new();
    for rec in records(text, QUERY_HEADER) {
        let (line, fields) = rec?;
        if fields[0] != "Q" || fields.len() != 6 {
            return Err(err(line, "expected `Q sx sy tx ty d`"));
        }
        let v = ints(line, &fields[1..])?;
        in_range(line, &v)?;
        if v[4] <= 0 {
            return Err(err(line, format!("robot side must be positive, got {}", v[4])));
        }
        out.push(Query { s: (v[0], v[1]), t: (v[2], v[3]), d: v[4] });
    }
    Ok(out)
}

pub fn write_queries(queries: &[Query]) -> String {
    let mut s = format!("{QUERY_HEADER} {FILE_VERSION}\n");
    for q in queries {
        writeln!(s, "Q {} {} {} {} {}", q.s.0, q.s.1, q.t.0, q.t.1, q.d).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn world_round_trip() {
        let text = "#!rectpass-world 1\n# room\nR 0 0 10 1  # floor\n\nP 4 0 0 2 0 2 2 0 2\n";
        let shapes = parse_world(text).unwrap();
        assert_eq!(shapes.len(), 2);
        assert_eq!(parse_world(&write_world(&shapes)).unwrap(), shapes);
        assert_eq!(parse_world("").unwrap(), vec![]);
    }

    #[test]
    fn world_errors_carry_lines() {
        assert_eq!(parse_world("R 0 0 1 1\nR 0 0 0 1\n").unwrap_err().line, 2);
        assert_eq!(parse_world("# x\nR 0 0 a 1\n").unwrap_err().line, 2);
        assert_eq!(parse_world("X 1\n").unwrap_err().line, 1);
        assert_eq!(parse_world("P 3 0 0 1 0 1 1\n").unwrap_err().line, 1);
        assert_eq!(parse_world("P 4 0 0 1 0 1 1\n").unwrap_err().line, 1);
        assert!(parse_world("#!rectpass-world 2\n").is_err());
        assert!(parse_world("#!rectpass-queries 1\n").is_err());
        assert!(parse_world("R 0 0 1 99999999999999999\n").is_err());
    }

    #[test]
    fn queries() {
        let q = parse_queries("Q 0 0 5 5 1\n").unwrap();
        assert_eq!(q, vec![Query { s: (0, 0), t: (5, 5), d: 1 }]);
        assert_eq!(parse_queries(&write_queries(&q)).unwrap(), q);
        assert_eq!(parse_queries("Q 0 0 5 5 1\nQ 0 0 5 5 0\n").unwrap_err().line, 2);
        assert_eq!(parse_queries("Q 0 0 5 5\n").unwrap_err().line, 1);
    }
}
