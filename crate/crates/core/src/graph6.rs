//! graph6 encoding: the printable adjacency format used by standard small-graph
//! generators.
//!
//! A record is the vertex count `N(n)` followed by the upper triangle of the
//! adjacency matrix in column-major order (`x(0,1), x(0,2), x(1,2), x(0,3), ..`),
//! packed six bits per byte, most significant first, each byte offset by 63.
//! Input may start with the optional `>>graph6<<` header; output never does.

use std::io::BufRead;

use thiserror::Error;

use crate::graph::{Graph, MAX_VERTICES};

pub const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph6 parse error at byte {offset}: {kind}")]
pub struct Graph6Error {
    pub offset: usize,
    pub kind: Graph6ErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6ErrorKind {
    #[error("empty input")]
    Empty,
    #[error("byte {0:#04x} outside the printable range 63..=126")]
    InvalidByte(u8),
    #[error("truncated size field")]
    TruncatedSize,
    #[error("vertex count {0} exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(u64),
    #[error("expected {expected} adjacency bytes, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("nonzero padding bits")]
    NonzeroPadding,
}

fn err(offset: usize, kind: Graph6ErrorKind) -> Graph6Error {
    Graph6Error { offset, kind }
}

/// Parses one graph6 record. Trailing `\r`/`\n` are ignored.
pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let bytes = text.as_bytes();
    let mut end = bytes.len();
    while end > 0 && matches!(bytes[end - 1], b'\n' | b'\r') {
        end -= 1;
    }
    let start = if bytes[..end].starts_with(HEADER.as_bytes()) {
        HEADER.len()
    } else {
        0
    };
    let body = &bytes[start..end];
    if body.is_empty() {
        return Err(err(start, Graph6ErrorKind::Empty));
    }
    if let Some(i) = body.iter().position(|&b| !(63..=126).contains(&b)) {
        return Err(err(start + i, Graph6ErrorKind::InvalidByte(body[i])));
    }

    let (n, header_len) = if body[0] != 126 {
        (u64::from(body[0] - 63), 1)
    } else if body.get(1) != Some(&126) {
        if body.len() < 4 {
            return Err(err(start + body.len(), Graph6ErrorKind::TruncatedSize));
        }
        (pack6(&body[1..4]), 4)
    } else {
        if body.len() < 8 {
            return Err(err(start + body.len(), Graph6ErrorKind::TruncatedSize));
        }
        (pack6(&body[2..8]), 8)
    };
    if n > MAX_VERTICES as u64 {
        return Err(err(start, Graph6ErrorKind::TooManyVertices(n)));
    }
    let n = n as usize;

    let data = &body[header_len..];
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if data.len() != expected {
        return Err(err(
            start + header_len + data.len().min(expected),
            Graph6ErrorKind::WrongLength {
                expected,
                found: data.len(),
            },
        ));
    }

    let mut adj = vec![0u64; n];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
            k += 1;
        }
    }
    if !bits.is_multiple_of(6) {
        let last = data[expected - 1] - 63;
        let pad = 6 - bits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(err(start + header_len + expected - 1, Graph6ErrorKind::NonzeroPadding));
        }
    }
    Ok(Graph::from_adjacency_unchecked(adj))
}

fn pack6(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0, |acc, &b| acc << 6 | u64::from(b - 63))
}

/// Encodes the labelled graph, without header or newline.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(4 + n * n / 12 + 1);
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let adj = g.adjacency();
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for row in &adj[..j] {
            acc = acc << 1 | (row >> j & 1) as u8;
            k += 1;
            if k == 6 {
                out.push(acc + 63);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        out.push((acc << (6 - k)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

/// One line of a graph6 stream: 1-based line number and the parse outcome.
pub type StreamItem = (usize, Result<Graph, Graph6Error>);

/// Reads a newline-separated graph6 stream, skipping blank lines.
pub fn read_graph6_stream<R: BufRead>(reader: R) -> impl Iterator<Item = std::io::Result<StreamItem>> {
    reader.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e)),
        Ok(l) if l.trim().is_empty() => None,
        Ok(l) => Some(Ok((i + 1, parse_graph6(l.trim())))),
    })
}
