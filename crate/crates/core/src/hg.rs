//! The `.hg` text format.
//!
//! ```text
//! # optional comments
//! 3 4
//! 0 1 2
//! 0 1 3
//! ```
//!
//! The first non-comment line is `k n`; every later non-comment line is one
//! edge as `k` ascending vertex indices separated by single spaces. Lines
//! starting with `#` are comments, and the file must end with a newline.
//! Constructions attach their certificate as a single `#certificate {json}`
//! comment line.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const CERTIFICATE_PREFIX: &str = "#certificate ";

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, message: message.into() })
}

fn parse_numbers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split(' ')
        .map(|tok| match tok.parse::<usize>() {
            Ok(v) => Ok(v),
            Err(_) => parse_err(line_no, format!("expected a non-negative integer, found {tok:?}")),
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Hypergraph> {
    if !text.is_empty() && !text.ends_with('\n') {
        let last = text.lines().count();
        return parse_err(last, "missing trailing newline");
    }
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let nums = parse_numbers(line_no, line)?;
        match header {
            None => {
                let [k, n] = nums[..] else {
                    return parse_err(line_no, "header must be `k n`");
                };
                if k < 2 {
                    return parse_err(line_no, format!("uniformity must be at least 2, got {k}"));
                }
                header = Some((k, n));
            }
            Some((k, n)) => {
                if nums.len() != k {
                    return parse_err(line_no, format!("edge has {} vertices, expected {k}", nums.len()));
                }
                if nums.windows(2).any(|w| w[0] >= w[1]) {
                    return parse_err(line_no, "edge vertices must be strictly ascending");
                }
                if let Some(&v) = nums.iter().find(|&&v| v >= n) {
                    return parse_err(line_no, format!("vertex {v} out of range 0..{n}"));
                }
                if !seen.insert(nums.clone()) {
                    return parse_err(line_no, "duplicate edge");
                }
                edges.push(nums);
            }
        }
    }
    let Some((k, n)) = header else {
        return parse_err(0, "missing `k n` header");
    };
    Hypergraph::from_edges(k, n, edges)
}

/// Serializes in canonical form, with each comment written as its own `#` line
/// before the header.
pub fn write(h: &Hypergraph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            if line.starts_with('#') {
                out.push_str(line);
            } else {
                out.push_str("# ");
                out.push_str(line);
            }
            out.push('\n');
        }
    }
    out.push_str(&format!("{} {}\n", h.k(), h.n()));
    for e in h.edges() {
        let parts: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

/// Serializes with a `#certificate` line carrying `certificate` as compact JSON.
pub fn write_with_certificate<C: serde::Serialize>(h: &Hypergraph, certificate: &C) -> Result<String> {
    let json = serde_json::to_string(certificate)
        .map_err(|e| Error::Domain(format!("certificate is not serializable: {e}")))?;
    Ok(write(h, &[format!("{CERTIFICATE_PREFIX}{json}")]))
}

/// The JSON payload of the first `#certificate` line, if any.
pub fn certificate_json(text: &str) -> Option<&str> {
    text.lines().find_map(|l| l.strip_prefix(CERTIFICATE_PREFIX))
}
