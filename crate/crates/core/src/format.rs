//! Plain-text graph files.
//!
//! ```text
//! maxcut <n_vertices> <n_edges> <denominator_exponent>
//! <u> <v> <numerator>
//! ...
//! ```
//!
//! Each weight is `numerator / 2^denominator_exponent`. Lines starting with
//! `#` are comments and may appear anywhere.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

pub fn write_graph(g: &WeightedGraph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "maxcut {} {} {}", g.n_vertices(), g.n_edges(), g.denom_exp());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.num);
    }
    out
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "maxcut" {
        return Err(Error::Parse {
            line: hline,
            msg: "expected `maxcut <n_vertices> <n_edges> <denominator_exponent>`".into(),
        });
    }
    let num = |s: &str, what: &str| -> Result<usize> {
        s.parse().map_err(|_| Error::Parse { line: hline, msg: format!("bad {what} `{s}`") })
    };
    let n = num(fields[1], "vertex count")?;
    let m = num(fields[2], "edge count")?;
    let p: u32 = fields[3]
        .parse()
        .map_err(|_| Error::Parse { line: hline, msg: format!("bad denominator exponent `{}`", fields[3]) })?;

    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse { line, msg: "expected `u v numerator`".into() });
        }
        let bad = |what: &str, s: &str| Error::Parse { line, msg: format!("bad {what} `{s}`") };
        let u: usize = parts[0].parse().map_err(|_| bad("vertex", parts[0]))?;
        let v: usize = parts[1].parse().map_err(|_| bad("vertex", parts[1]))?;
        let w: BigInt = parts[2].parse().map_err(|_| bad("numerator", parts[2]))?;
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header declares {m} edges but {} were listed", edges.len()),
        });
    }
    WeightedGraph::from_scaled(n, p, edges)
}
