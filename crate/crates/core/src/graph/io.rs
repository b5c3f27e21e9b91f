//! graph6 and plain edge-list text formats.
//!
//! graph6: a size header followed by the upper triangle of the adjacency
//! matrix in column order (x(0,1), x(0,2), x(1,2), x(0,3), ...), packed
//! big-endian into 6-bit groups, each offset by 63. Orders up to 62 use the
//! one-byte header; 63 and 64 use the `~` form.

use std::fmt::Write as _;

use log::warn;

use super::{Graph, GraphError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Graph6,
    EdgeList,
}

impl std::str::FromStr for Format {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "graph6" | "g6" => Ok(Format::Graph6),
            "edgelist" => Ok(Format::EdgeList),
            other => Err(GraphError::Parse(format!("unknown format {other:?}"))),
        }
    }
}

pub fn parse(text: &str, format: Format) -> Result<Graph, GraphError> {
    match format {
        Format::Graph6 => parse_graph6(text.trim()),
        Format::EdgeList => parse_edgelist(text),
    }
}

/// Parses a stream: one graph6 string per non-empty line, or a single edge list.
pub fn parse_many(text: &str, format: Format) -> Result<Vec<Graph>, GraphError> {
    match format {
        Format::Graph6 => text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(parse_graph6)
            .collect(),
        Format::EdgeList => Ok(vec![parse_edgelist(text)?]),
    }
}

pub fn emit(g: &Graph, format: Format) -> String {
    match format {
        Format::Graph6 => emit_graph6(g),
        Format::EdgeList => emit_edgelist(g),
    }
}

fn emit_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = String::new();
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.adjacent(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    out
}

fn parse_graph6(s: &str) -> Result<Graph, GraphError> {
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(GraphError::Parse("graph6 byte outside 63..=126".into()));
    }
    let (n, body) = match bytes.first() {
        None => return Err(GraphError::Parse("empty graph6 string".into())),
        Some(b'~') => {
            if bytes.get(1) == Some(&b'~') {
                return Err(GraphError::Parse("graph6 orders above 258047 unsupported".into()));
            }
            if bytes.len() < 4 {
                return Err(GraphError::Parse("truncated graph6 size header".into()));
            }
            let n = bytes[1..4].iter().fold(0usize, |a, &b| (a << 6) | (b - 63) as usize);
            if n < 63 {
                return Err(GraphError::Parse(format!("non-canonical long header for n={n}")));
            }
            (n, &bytes[4..])
        }
        Some(&b) => ((b - 63) as usize, &bytes[1..]),
    };
    if n == 0 || n > super::MAX_VERTICES {
        return Err(GraphError::Size(n));
    }
    let nbits = n * (n - 1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() != expected {
        return Err(GraphError::Parse(format!(
            "graph6 body has {} bytes, expected {expected} for n={n}",
            body.len()
        )));
    }
    let bit = |k: usize| ((body[k / 6] - 63) >> (5 - k % 6)) & 1 == 1;
    if (nbits..expected * 6).any(bit) {
        return Err(GraphError::Parse("non-zero graph6 padding bits".into()));
    }
    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                g.add_edge(i, j)?;
            }
            k += 1;
        }
    }
    Ok(g)
}

fn emit_edgelist(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// First non-comment line: vertex count. Then one `u v` pair per line.
/// Duplicate edges are accepted with a warning.
fn parse_edgelist(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .enumerate()
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines.next().ok_or_else(|| GraphError::Parse("empty edge list".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| GraphError::Parse(format!("bad vertex count {header:?}")))?;
    let mut g = Graph::empty(n)?;
    for (lineno, line) in lines {
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        let (u, v) = match (it.next(), it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => (u, v),
            _ => return Err(GraphError::Parse(format!("line {}: expected \"u v\"", lineno + 1))),
        };
        if !g.add_edge(u, v)? {
            warn!("line {}: duplicate edge {u} {v}", lineno + 1);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};
    use proptest::prelude::*;

    #[test]
    fn reference_strings() {
        // Cross-checked against networkx.to_graph6_bytes.
        assert_eq!(parse("Bw", Format::Graph6).unwrap(), generate(Family::Complete(3)).unwrap());
        assert_eq!(parse("A_", Format::Graph6).unwrap(), generate(Family::Path(2)).unwrap());
        assert_eq!(emit(&generate(Family::Path(5)).unwrap(), Format::Graph6), "DhC");
        assert_eq!(emit(&generate(Family::Cycle(6)).unwrap(), Format::Graph6), "EhEG");
        assert_eq!(emit(&generate(Family::Path(1)).unwrap(), Format::Graph6), "@");
    }

    #[test]
    fn long_header_orders() {
        let g = generate(Family::Cycle(64)).unwrap();
        let s = emit(&g, Format::Graph6);
        assert!(s.starts_with("~?@?"));
        assert_eq!(parse(&s, Format::Graph6).unwrap(), g);
    }

    #[test]
    fn graph6_errors() {
        assert!(parse("", Format::Graph6).is_err());
        assert!(parse("Bx", Format::Graph6).is_err(), "padding bit set");
        assert!(parse("Bww", Format::Graph6).is_err(), "trailing byte");
        assert!(parse("B", Format::Graph6).is_err(), "truncated");
        assert!(parse("B\u{7f}", Format::Graph6).is_err());
        assert_eq!(parse("?", Format::Graph6).unwrap_err(), GraphError::Size(0));
    }

    #[test]
    fn edgelist_cases() {
        let g = parse("3\n0 1\n1 2\n# note\n1 0\n", Format::EdgeList).unwrap();
        assert_eq!(g, generate(Family::Path(3)).unwrap());
        assert_eq!(
            parse("2\n0 2\n", Format::EdgeList).unwrap_err(),
            GraphError::VertexOutOfRange { vertex: 2, n: 2 }
        );
        assert!(parse("2\n0\n", Format::EdgeList).is_err());
        assert_eq!(parse("2\n1 1\n", Format::EdgeList).unwrap_err(), GraphError::SelfLoop(1));
        assert_eq!(emit(&generate(Family::Path(3)).unwrap(), Format::EdgeList), "3\n0 1\n1 2\n");
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..=64).prop_flat_map(|n| {
            proptest::collection::vec(any::<u64>(), n).prop_map(move |rows| {
                let mut g = Graph::empty(n).unwrap();
                for (u, row) in rows.iter().enumerate() {
                    for v in u + 1..n {
                        if (row >> (v % 64)) & 1 == 1 {
                            g.add_edge(u, v).unwrap();
                        }
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip_both_formats(g in arb_graph()) {
            for f in [Format::Graph6, Format::EdgeList] {
                prop_assert_eq!(&parse(&emit(&g, f), f).unwrap(), &g);
            }
            let s = emit(&g, Format::Graph6);
            prop_assert_eq!(emit(&parse(&s, Format::Graph6).unwrap(), Format::Graph6), s);
        }
    }
}
