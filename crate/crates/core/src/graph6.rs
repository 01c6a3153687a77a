//! The graph6 text encoding (one graph per line, printable ASCII 63..=126).
//!
//! Layout: `N(n)` followed by the upper triangle of the adjacency matrix in
//! column order (`x(0,1) x(0,2) x(1,2) x(0,3) ...`), packed six bits per
//! byte, most significant bit first, zero padded.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_ORDER};

const HEADER: &str = ">>graph6<<";

pub fn write_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(1 + (n * n) / 12 + 4);
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

/// Parses one graph6 line. A leading `>>graph6<<` header and surrounding
/// whitespace are accepted. Errors carry the byte offset within `line`.
pub fn parse_graph6(line: &str) -> Result<Graph> {
    let trimmed_start = line.len() - line.trim_start().len();
    let mut body = line.trim();
    let mut base = trimmed_start;
    if let Some(rest) = body.strip_prefix(HEADER) {
        body = rest;
        base += HEADER.len();
    }
    let bytes = body.as_bytes();
    let err = |pos: usize, message: String| Error::Parse {
        offset: base + pos,
        message,
    };
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(i, format!("byte {b:#04x} outside the graph6 range")));
        }
    }
    let (n, start) = match bytes.first() {
        None => return Err(err(0, "empty input".into())),
        Some(&126) => {
            if bytes.get(1) == Some(&126) {
                return Err(err(1, "orders above 258047 are not supported".into()));
            }
            if bytes.len() < 4 {
                return Err(err(bytes.len(), "truncated order field".into()));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, 4)
        }
        Some(&b) => ((b - 63) as usize, 1),
    };
    if n > MAX_ORDER {
        return Err(Error::Capacity {
            order: n,
            capacity: MAX_ORDER,
        });
    }
    let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if bytes.len() != start + needed {
        return Err(err(
            bytes.len().min(start + needed),
            format!(
                "expected {needed} adjacency bytes for order {n}, found {}",
                bytes.len() - start
            ),
        ));
    }
    let mut g = Graph::empty(n)?;
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = bytes[start + k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.insert_edge(i, j)?;
            }
            k += 1;
        }
    }
    let total = n * n.saturating_sub(1) / 2;
    if total % 6 != 0 {
        let last = bytes[start + needed - 1] - 63;
        let pad = 6 - total % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(err(start + needed - 1, "nonzero padding bits".into()));
        }
    }
    Ok(g)
}
