//! Plain-text instance format.
//!
//! ```text
//! # optional comments
//! n m k
//! v1 v2 ... vk      (m lines)
//! ```
//!
//! `#` starts a comment that runs to the end of the line; blank lines are
//! ignored. [`write`] emits the canonical form: header, then one edge per line
//! with vertices ascending, no comments.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Hypergraph, HypergraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error(transparent)]
    Invalid(#[from] HypergraphError),
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn parse_numbers(line: usize, body: &str) -> Result<Vec<usize>, FormatError> {
    body.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| FormatError::Parse {
                line,
                message: format!("not a non-negative integer: {tok:?}"),
            })
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Hypergraph, FormatError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or(FormatError::Parse {
        line: 1,
        message: "missing `n m k` header".into(),
    })?;
    let nums = parse_numbers(header_line, header)?;
    let [n, m, k] = nums[..] else {
        return Err(FormatError::Parse {
            line: header_line,
            message: format!("header needs 3 fields, found {}", nums.len()),
        });
    };

    let mut edges = Vec::with_capacity(m);
    for (line, body) in lines {
        let edge = parse_numbers(line, body)?;
        if edge.len() != k {
            return Err(FormatError::Parse {
                line,
                message: format!("edge has {} fields, expected {k}", edge.len()),
            });
        }
        edges.push(edge);
    }
    if edges.len() != m {
        return Err(FormatError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Hypergraph::validate(n, k, edges)?)
}

pub fn write(h: &Hypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", h.n(), h.num_edges(), h.k()).unwrap();
    for edge in h.edges() {
        let mut first = true;
        for v in edge {
            if !first {
                out.push(' ');
            }
            first = false;
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Undirected graph edge-list format used by the block-tree tooling:
/// header `n m`, then `m` lines `u v`. Comments as above.
pub fn parse_graph(text: &str) -> Result<(usize, Vec<(usize, usize)>), FormatError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or(FormatError::Parse {
        line: 1,
        message: "missing `n m` header".into(),
    })?;
    let nums = parse_numbers(header_line, header)?;
    let [n, m] = nums[..] else {
        return Err(FormatError::Parse {
            line: header_line,
            message: format!("header needs 2 fields, found {}", nums.len()),
        });
    };
    let mut edges = Vec::with_capacity(m);
    for (line, body) in lines {
        let pair = parse_numbers(line, body)?;
        match pair[..] {
            [u, v] if u < n && v < n && u != v => edges.push((u, v)),
            _ => {
                return Err(FormatError::Parse {
                    line,
                    message: format!("bad graph edge {body:?}"),
                })
            }
        }
    }
    if edges.len() != m {
        return Err(FormatError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    Ok((n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let text = "# tiny\n5 2 3\n0 1 2 # first\n\n4 3 2\n";
        let h = parse(text).unwrap();
        assert_eq!(h.n(), 5);
        assert_eq!(h.edges(), &[vec![0, 1, 2], vec![2, 3, 4]]);
        assert_eq!(write(&h), "5 2 3\n0 1 2\n2 3 4\n");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse(""), Err(FormatError::Parse { .. })));
        assert!(matches!(parse("3 1 3\n0 1\n"), Err(FormatError::Parse { line: 2, .. })));
        assert!(matches!(parse("3 2 3\n0 1 2\n"), Err(FormatError::EdgeCount { .. })));
        assert!(matches!(parse("3 1 3\n0 1 x\n"), Err(FormatError::Parse { .. })));
        assert!(matches!(parse("3 1 3\n0 1 1\n"), Err(FormatError::Invalid(_))));
    }

    #[test]
    fn empty_edge_set() {
        let h = parse("4 0 3\n").unwrap();
        assert_eq!(h.num_edges(), 0);
        assert_eq!(write(&h), "4 0 3\n");
    }

    #[test]
    fn graph_format() {
        let (n, edges) = parse_graph("3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(n, 3);
        assert_eq!(edges, vec![(0, 1), (1, 2)]);
        assert!(parse_graph("3 1\n0 0\n").is_err());
    }
}
