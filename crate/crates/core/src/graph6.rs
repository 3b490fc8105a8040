//! graph6 reading and writing, bit-exact with the standard format.

use crate::error::{Error, Result};
use crate::graph::Graph;

const BIAS: u8 = 63;

fn parse_err(offset: usize, msg: impl Into<String>) -> Error {
    Error::Parse { offset, msg: msg.into() }
}

fn data_byte(bytes: &[u8], i: usize) -> Result<u8> {
    match bytes.get(i) {
        None => Err(parse_err(i, "truncated input")),
        Some(&b) if (BIAS..=BIAS + 63).contains(&b) => Ok(b - BIAS),
        Some(&b) => Err(parse_err(i, format!("byte 0x{b:02x} outside the graph6 range 63..=126"))),
    }
}

/// Returns (n, bytes consumed by the header).
fn parse_header(bytes: &[u8]) -> Result<(usize, usize)> {
    let first = data_byte(bytes, 0)?;
    if first < 63 {
        return Ok((first as usize, 1));
    }
    // 126 prefix: either 3 more bytes, or 126 again and then 6 bytes.
    let second = data_byte(bytes, 1)?;
    if second < 63 {
        let mut n = 0usize;
        for i in 1..4 {
            n = (n << 6) | data_byte(bytes, i)? as usize;
        }
        if n < 63 {
            return Err(parse_err(1, "non-canonical long header for small n"));
        }
        Ok((n, 4))
    } else {
        let mut n = 0usize;
        for i in 2..8 {
            n = (n << 6) | data_byte(bytes, i)? as usize;
        }
        if n <= 258_047 {
            return Err(parse_err(2, "non-canonical 8-byte header"));
        }
        Ok((n, 8))
    }
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let line = text.trim_end_matches(['\n', '\r']);
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(parse_err(0, "empty input"));
    }
    let (n, head) = parse_header(bytes)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() < head + nbytes {
        return Err(parse_err(bytes.len(), format!("truncated bit stream: expected {nbytes} data bytes")));
    }
    if bytes.len() > head + nbytes {
        return Err(parse_err(head + nbytes, "trailing garbage after bit stream"));
    }
    let mut g = Graph::empty(n);
    let mut k = 0usize;
    for v in 1..n {
        for u in 0..v {
            let byte = data_byte(bytes, head + k / 6)?;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.set_edge(u, v);
            }
            k += 1;
        }
    }
    // padding bits must be zero for the encoding to be canonical
    if nbits % 6 != 0 {
        let last = data_byte(bytes, head + nbytes - 1)?;
        let pad = 6 - nbits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(parse_err(head + nbytes - 1, "nonzero padding bits"));
        }
    }
    g.finish();
    Ok(g)
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
        out.push(n as u8 + BIAS);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + BIAS);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + BIAS);
        }
    }
    let mut acc = 0u8;
    let mut k = 0usize;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            k += 1;
            if k.is_multiple_of(6) {
                out.push(acc + BIAS);
                acc = 0;
            }
        }
    }
    if !k.is_multiple_of(6) {
        acc <<= 6 - k % 6;
        out.push(acc + BIAS);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

/// One graph6 per line; blank lines and `#` comments are skipped. Errors name the line.
pub fn read_corpus(text: &str) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let g = parse_graph6(t).map_err(|e| Error::usage(format!("line {}: {e}", lineno + 1)))?;
        out.push(g);
    }
    Ok(out)
}

/// A witness pair file: `# note` lines annotate the next `g6a g6b` line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRecord {
    pub note: String,
    pub a: Graph,
    pub b: Graph,
}

pub fn read_pair_corpus(text: &str) -> Result<Vec<PairRecord>> {
    let mut out = Vec::new();
    let mut note = String::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(c) = t.strip_prefix('#') {
            note = c.trim().to_string();
            continue;
        }
        let mut parts = t.split_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::usage(format!("line {}: expected two graph6 strings", lineno + 1)));
        };
        let parse = |s: &str| parse_graph6(s).map_err(|e| Error::usage(format!("line {}: {e}", lineno + 1)));
        out.push(PairRecord { note: std::mem::take(&mut note), a: parse(a)?, b: parse(b)? });
    }
    Ok(out)
}

pub fn write_pair_corpus(records: &[PairRecord]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&format!("# {}\n{} {}\n", r.note, write_graph6(&r.a), write_graph6(&r.b)));
    }
    s
}
