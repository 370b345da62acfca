//! Plain-text graph format: a header line `n m`, then `m` lines `u v w`.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::{GraphBuilder, WeightedGraph};
use crate::error::{Error, Result};

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        message: format!("bad {what} `{tok}`"),
    })
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "empty graph file".into(),
    })?;
    let mut toks = header.split_whitespace();
    let n: usize = field(toks.next(), hline, "vertex count")?;
    let m: usize = field(toks.next(), hline, "edge count")?;

    let mut b = GraphBuilder::new(n);
    let mut seen = 0;
    for (line, l) in lines {
        let mut toks = l.split_whitespace();
        let u: usize = field(toks.next(), line, "vertex")?;
        let v: usize = field(toks.next(), line, "vertex")?;
        let w: f64 = field(toks.next(), line, "weight")?;
        if toks.next().is_some() {
            return Err(Error::Parse {
                line,
                message: "trailing tokens".into(),
            });
        }
        b.add_edge(u, v, w).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse {
            line: hline,
            message: format!("header declares {m} edges, found {seen}"),
        });
    }
    Ok(b.build())
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

/// Serializes in canonical edge order; weights use the shortest round-trip form.
pub fn write_graph(g: &WeightedGraph) -> String {
    let mut out = format!("{} {}\n", g.order(), g.edge_count());
    for e in g.edges() {
        writeln!(out, "{} {} {}", e.u, e.v, e.weight).expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = WeightedGraph::from_edges(4, [(0, 1, 1.0), (1, 1, -0.25), (2, 3, 1e-3)]).unwrap();
        let back = parse_graph(&write_graph(&g)).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn comments_and_errors() {
        let g = parse_graph("# triangle\n3 3\n0 1 1\n1 2 1\n\n0 2 1\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(matches!(parse_graph("2 1\n0 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("2 2\n0 1 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("2 1\n0 5 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_graph("").is_err());
    }
}
