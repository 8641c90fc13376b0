//! graph6 reading and writing.
//!
//! Each byte carries six bits offset by 63. The size prefix is one byte for
//! `n <= 62`, `~` plus three bytes for `n <= 258047`, and `~~` plus six bytes
//! beyond that. The edge bits follow the upper triangle column by column:
//! `(0,1), (0,2), (1,2), (0,3), ...`, zero-padded to a multiple of six.

use super::Graph;
use crate::error::{Error, Result};

const OFFSET: u8 = 63;
const HEADER: &str = ">>graph6<<";
const MAX_NODES: usize = (1 << 36) - 1;

fn err(offset: usize, reason: impl Into<String>) -> Error {
    Error::Graph6 {
        offset,
        reason: reason.into(),
    }
}

fn sextet(bytes: &[u8], offset: usize) -> Result<u8> {
    let b = *bytes
        .get(offset)
        .ok_or_else(|| err(offset, "record ends inside the size header"))?;
    if !(OFFSET..=126).contains(&b) {
        return Err(err(
            offset,
            format!("byte 0x{b:02x} is outside the graph6 range"),
        ));
    }
    Ok(b - OFFSET)
}

fn read_size(bytes: &[u8]) -> Result<(usize, usize)> {
    let first = sextet(bytes, 0)?;
    if first < 63 {
        return Ok((first as usize, 1));
    }
    let (start, width) = if bytes.get(1) == Some(&b'~') {
        (2, 6)
    } else {
        (1, 3)
    };
    let mut n = 0usize;
    for i in 0..width {
        n = (n << 6) | sextet(bytes, start + i)? as usize;
    }
    Ok((n, start + width))
}

fn write_size(n: usize, out: &mut String) {
    let width = match n {
        0..=62 => {
            out.push((n as u8 + OFFSET) as char);
            return;
        }
        63..=258_047 => {
            out.push('~');
            3
        }
        _ => {
            out.push_str("~~");
            6
        }
    };
    for i in (0..width).rev() {
        out.push((((n >> (6 * i)) & 0x3f) as u8 + OFFSET) as char);
    }
}

/// Decodes one graph6 record. The record must not contain a line terminator.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(err(0, "empty record"));
    }
    let (n, header_len) = read_size(bytes)?;
    if n == 0 {
        return Err(err(0, "graph has no nodes"));
    }
    if n > MAX_NODES {
        return Err(err(0, format!("node count {n} is too large")));
    }
    let bits = n as u128 * (n as u128 - 1) / 2;
    let need = bits.div_ceil(6);
    let have = (bytes.len() - header_len) as u128;
    if have < need {
        return Err(err(
            bytes.len(),
            format!("edge data has {have} bytes, {need} needed for {n} nodes"),
        ));
    }
    if have > need {
        return Err(err(
            header_len + need as usize,
            format!("{} trailing bytes after the edge data", have - need),
        ));
    }
    let data = &bytes[header_len..];
    let mut edges = Vec::new();
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            let offset = header_len + k / 6;
            let word = sextet(bytes, offset)?;
            if word & (1 << (5 - k % 6)) != 0 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if !k.is_multiple_of(6) {
        let last = data.len() - 1;
        let word = sextet(data, last).map_err(|_| err(header_len + last, "bad padding byte"))?;
        if word & ((1 << (6 - k % 6)) - 1) != 0 {
            return Err(err(header_len + last, "padding bits are not zero"));
        }
    }
    Graph::new(n, edges)
}

/// Encodes `g` as a graph6 record without a trailing newline.
pub fn emit_graph6(g: &Graph) -> String {
    let n = g.node_count();
    let mut out = String::new();
    write_size(n, &mut out);
    let mut word = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            word = (word << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((word + OFFSET) as char);
                word = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((word << (6 - filled)) + OFFSET) as char);
    }
    out
}

/// Parses a file of graph6 records, one per line. Blank lines are ignored and
/// an optional `>>graph6<<` header is stripped. Errors carry the line number
/// in the reason.
pub fn parse_graph6_file(text: &str) -> Result<Vec<Graph>> {
    let mut graphs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let line = line.strip_prefix(HEADER).unwrap_or(line);
        if line.is_empty() {
            continue;
        }
        let g = parse_graph6(line).map_err(|e| match e {
            Error::Graph6 { offset, reason } => Error::Graph6 {
                offset,
                reason: format!("line {}: {reason}", idx + 1),
            },
            other => other,
        })?;
        graphs.push(g);
    }
    Ok(graphs)
}
