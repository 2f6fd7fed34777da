//! Point-set text format and order-type database records.
//!
//! Text: the first non-comment line holds `n`, followed by `n` lines `x y`
//! with integer coordinates. `#` starts a comment that runs to end of line.
//!
//! Database: consecutive records of `n` coordinate pairs, each coordinate an
//! unsigned byte for `n <= 8` and an unsigned little-endian 16-bit word for
//! `n >= 9`. Records are addressed from 1.

use std::fmt::Write as _;

use thiserror::Error;

use crate::generate::SplitMix64;
use crate::geometry::{orient, validate_general_position, GeometryError, Point, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_coordinate(token: &str, line: usize) -> Result<i32, ParseError> {
    token.parse::<i32>().map_err(|_| {
        if token.parse::<f64>().is_ok() {
            syntax(
                line,
                format!("coordinate `{token}` is not a 32-bit integer"),
            )
        } else {
            syntax(line, format!("cannot parse `{token}` as a coordinate"))
        }
    })
}

/// Parses and validates the text format. Line numbers in errors are 1-based.
pub fn parse_points_text(input: &str) -> Result<PointSet, ParseError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (count_line, count) = lines
        .next()
        .ok_or_else(|| syntax(1, "missing point count"))?;
    let n: usize = count.parse().map_err(|_| {
        syntax(
            count_line,
            format!("cannot parse `{count}` as a point count"),
        )
    })?;
    let mut points = Vec::with_capacity(n);
    for (line, text) in lines {
        if points.len() == n {
            return Err(syntax(line, format!("more than {n} points")));
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let [x, y] = tokens[..] else {
            return Err(syntax(line, "expected two coordinates"));
        };
        points.push(Point::new(
            parse_coordinate(x, line)?,
            parse_coordinate(y, line)?,
        ));
    }
    if points.len() < n {
        let last = input.lines().count().max(1);
        return Err(syntax(
            last,
            format!("expected {n} points, found {}", points.len()),
        ));
    }
    Ok(validate_general_position(points)?)
}

/// Text form accepted by [`parse_points_text`].
pub fn write_points_text(set: &PointSet) -> String {
    let mut out = format!("{}\n", set.len());
    for p in set.points() {
        writeln!(out, "{} {}", p.x, p.y).expect("writing to a String");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderTypeError {
    #[error("records need at least 3 points, got n = {0}")]
    InvalidSize(usize),
    #[error("record {index} requested but the file holds {records}")]
    IndexOutOfRange { index: usize, records: usize },
    #[error("file length {len} is not a multiple of the record size {record_size}")]
    TruncatedFile { len: usize, record_size: usize },
    #[error("record {0} could not be brought into general position")]
    ValidationFailed(usize),
}

/// One database record, possibly perturbed into general position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderTypeRecord {
    pub index: usize,
    /// Coordinates as stored in the file.
    pub raw: Vec<Point>,
    pub points: PointSet,
    /// Whether `points` differs from `raw` (scaled and offset).
    pub perturbed: bool,
}

pub fn order_type_record_size(n: usize) -> usize {
    if n <= 8 {
        2 * n
    } else {
        4 * n
    }
}

pub fn order_type_record_count(len: usize, n: usize) -> Result<usize, OrderTypeError> {
    if n < 3 {
        return Err(OrderTypeError::InvalidSize(n));
    }
    let record_size = order_type_record_size(n);
    if !len.is_multiple_of(record_size) {
        return Err(OrderTypeError::TruncatedFile { len, record_size });
    }
    Ok(len / record_size)
}

const PERTURB_SCALE: i32 = 1 << 10;
const PERTURB_RADIUS: u64 = 16;
const PERTURB_ATTEMPTS: u64 = 100;

fn orientation_signs(points: &[Point]) -> Vec<i32> {
    let n = points.len();
    let mut out = Vec::with_capacity(n * n * n / 6);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push(orient(points[i], points[j], points[k]));
            }
        }
    }
    out
}

/// Scales by `2^10` and adds offsets in `[-16, 16]` drawn from a generator
/// seeded by the record index, until the set is in general position with
/// every orientation sign unchanged.
fn perturb(raw: &[Point], index: usize) -> Option<PointSet> {
    let signs = orientation_signs(raw);
    if signs.contains(&0) {
        return None;
    }
    for attempt in 0..PERTURB_ATTEMPTS {
        let mut rng = SplitMix64::new((index as u64) << 8 | attempt);
        let mut offset =
            || (rng.next_u64() % (2 * PERTURB_RADIUS + 1)) as i32 - PERTURB_RADIUS as i32;
        let moved: Vec<Point> = raw
            .iter()
            .map(|p| {
                Point::new(
                    p.x * PERTURB_SCALE + offset(),
                    p.y * PERTURB_SCALE + offset(),
                )
            })
            .collect();
        if orientation_signs(&moved) != signs {
            continue;
        }
        if let Ok(set) = validate_general_position(moved) {
            return Some(set);
        }
    }
    None
}

/// Reads record `index` (1-based) of a database file for `n` points.
pub fn parse_order_type_db(
    bytes: &[u8],
    n: usize,
    index: usize,
) -> Result<OrderTypeRecord, OrderTypeError> {
    let records = order_type_record_count(bytes.len(), n)?;
    if index == 0 || index > records {
        return Err(OrderTypeError::IndexOutOfRange { index, records });
    }
    let size = order_type_record_size(n);
    let record = &bytes[(index - 1) * size..index * size];
    let values: Vec<i32> = if n <= 8 {
        record.iter().map(|&b| b as i32).collect()
    } else {
        record
            .chunks_exact(2)
            .map(|w| u16::from_le_bytes([w[0], w[1]]) as i32)
            .collect()
    };
    let raw: Vec<Point> = values
        .chunks_exact(2)
        .map(|c| Point::new(c[0], c[1]))
        .collect();
    if let Ok(points) = validate_general_position(raw.clone()) {
        return Ok(OrderTypeRecord {
            index,
            raw,
            points,
            perturbed: false,
        });
    }
    let points = perturb(&raw, index).ok_or(OrderTypeError::ValidationFailed(index))?;
    Ok(OrderTypeRecord {
        index,
        raw,
        points,
        perturbed: true,
    })
}
