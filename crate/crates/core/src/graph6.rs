//! graph6 reader and writer.
//!
//! A record is the size field N(n) followed by the upper-triangle adjacency
//! bits x(0,1), x(0,2), x(1,2), x(0,3), ... packed six to a character, each
//! character offset by 63. Streams hold one record per line and may start
//! with a `>>graph6<<` header.

use std::io::BufRead;

use thiserror::Error;

use crate::graph::{Graph, DEFAULT_MAX_ORDER};

const OFFSET: u8 = 63;
/// Largest order the 4-character size field can express.
pub const MAX_GRAPH6_ORDER: usize = 258_047;
pub const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty record")]
    Empty,
    #[error("byte {byte:#04x} at column {pos} is outside the graph6 range 63..=126")]
    InvalidChar { pos: usize, byte: u8 },
    #[error("record for n = {order} needs {expected} characters, found {actual}")]
    Length {
        order: usize,
        expected: usize,
        actual: usize,
    },
    #[error("nonzero padding bits in the final character (column {pos})")]
    NonzeroPadding { pos: usize },
    #[error("order {order} exceeds the cap of {cap}")]
    OrderTooLarge { order: usize, cap: usize },
    #[error("order {0} cannot be written as graph6 (max {MAX_GRAPH6_ORDER})")]
    Unwritable(usize),
    #[error("read error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Graph6Options {
    pub max_order: usize,
    /// Accept nonzero padding bits, reporting them in [`Decoded::padding_warning`].
    pub lenient_padding: bool,
}

impl Default for Graph6Options {
    fn default() -> Self {
        Graph6Options {
            max_order: DEFAULT_MAX_ORDER,
            lenient_padding: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub graph: Graph,
    /// Column of the final character when its padding bits were nonzero and
    /// the lenient flag let it through.
    pub padding_warning: Option<usize>,
}

fn sextet(bytes: &[u8], pos: usize) -> Result<u64, Graph6Error> {
    let byte = bytes[pos];
    if !(OFFSET..=126).contains(&byte) {
        return Err(Graph6Error::InvalidChar { pos, byte });
    }
    Ok(u64::from(byte - OFFSET))
}

/// Decodes N(n); returns the order and the number of characters consumed.
fn parse_order(bytes: &[u8]) -> Result<(usize, usize), Graph6Error> {
    let field = |start: usize, len: usize| -> Result<usize, Graph6Error> {
        if bytes.len() < start + len {
            return Err(Graph6Error::Length {
                order: 0,
                expected: start + len,
                actual: bytes.len(),
            });
        }
        let mut v = 0u64;
        for pos in start..start + len {
            v = v << 6 | sextet(bytes, pos)?;
        }
        Ok(v as usize)
    };
    match bytes.first() {
        None => Err(Graph6Error::Empty),
        Some(&126) if bytes.get(1) == Some(&126) => Ok((field(2, 6)?, 8)),
        Some(&126) => Ok((field(1, 3)?, 4)),
        Some(_) => Ok((field(0, 1)?, 1)),
    }
}

/// Strict parse with the default order cap.
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    parse_graph6_with(line, &Graph6Options::default()).map(|d| d.graph)
}

pub fn parse_graph6_with(line: &str, opts: &Graph6Options) -> Result<Decoded, Graph6Error> {
    let bytes = line.trim_end_matches(['\n', '\r']).as_bytes();
    let (n, head) = parse_order(bytes)?;
    if n > opts.max_order {
        return Err(Graph6Error::OrderTooLarge {
            order: n,
            cap: opts.max_order,
        });
    }
    let bits = n * n.saturating_sub(1) / 2;
    let body = bits.div_ceil(6);
    if bytes.len() != head + body {
        return Err(Graph6Error::Length {
            order: n,
            expected: head + body,
            actual: bytes.len(),
        });
    }
    let mut edges = Vec::new();
    let mut k = 0;
    let mut padding_warning = None;
    for pos in head..head + body {
        let x = sextet(bytes, pos)?;
        for shift in (0..6).rev() {
            let bit = x >> shift & 1 == 1;
            if k < bits {
                if bit {
                    edges.push(k);
                }
            } else if bit && padding_warning.is_none() {
                if !opts.lenient_padding {
                    return Err(Graph6Error::NonzeroPadding { pos });
                }
                padding_warning = Some(pos);
            }
            k += 1;
        }
    }
    let mut pairs = Vec::with_capacity(edges.len());
    let (mut v, mut col_start) = (1usize, 0usize);
    for k in edges {
        while k >= col_start + v {
            col_start += v;
            v += 1;
        }
        pairs.push((k - col_start, v));
    }
    let graph = crate::graph::build_graph_capped(n, &pairs, opts.max_order).expect("decoded pairs are in range");
    Ok(Decoded { graph, padding_warning })
}

fn size_field(n: usize) -> Result<Vec<u8>, Graph6Error> {
    if n <= 62 {
        Ok(vec![n as u8 + OFFSET])
    } else if n <= MAX_GRAPH6_ORDER {
        Ok([126]
            .into_iter()
            .chain([12, 6, 0].map(|s| (n >> s & 0x3f) as u8 + OFFSET))
            .collect())
    } else {
        Err(Graph6Error::Unwritable(n))
    }
}

/// Canonical graph6 encoding of `g`.
pub fn write_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.order();
    let mut out = size_field(n)?;
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = acc << 1 | u8::from(g.has_edge(u, v));
            filled += 1;
            if filled == 6 {
                out.push(acc + OFFSET);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + OFFSET);
    }
    Ok(String::from_utf8(out).expect("graph6 output is ASCII"))
}

/// Iterates the records of a graph6 stream as `(line number, result)`, with
/// line numbers starting at 1. Header lines and blank lines are skipped; a
/// `>>graph6<<` prefix glued to the first record is stripped.
pub fn read_stream<R: BufRead>(
    reader: R,
    opts: Graph6Options,
) -> impl Iterator<Item = (usize, Result<Decoded, Graph6Error>)> {
    reader.lines().enumerate().filter_map(move |(i, line)| {
        let line_no = i + 1;
        let line = match line {
            Ok(l) => l,
            Err(e) => return Some((line_no, Err(Graph6Error::Io(e.to_string())))),
        };
        let record = line.strip_prefix(HEADER).unwrap_or(&line).trim_end_matches('\r');
        if record.is_empty() || record.starts_with(">>") {
            return None;
        }
        Some((line_no, parse_graph6_with(record, &opts)))
    })
}
