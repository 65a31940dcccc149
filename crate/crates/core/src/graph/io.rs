//! Text formats.
//!
//! Edge list: first line `n m`, then `m` lines `u v` (0-based). Colored edge
//! list: same, with a third column `c >= 1`. Blank lines and `#` comments
//! are ignored. graph6 follows the usual byte layout (`N(n)` then the upper
//! triangle column by column, six bits per byte, offset by 63).

use std::fmt::Write as _;

use super::{Graph, GraphError};

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty, comment-stripped lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn parse_num<T: std::str::FromStr>(line: usize, field: &str) -> Result<T, GraphError> {
    field.parse().map_err(|_| {
        parse_err(
            line,
            format!("expected a non-negative integer, got {field:?}"),
        )
    })
}

fn parse_rows(text: &str, columns: usize) -> Result<(usize, Vec<Vec<usize>>), GraphError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    if header.len() != 2 {
        return Err(parse_err(hline, "header must be `n m`"));
    }
    let n: usize = parse_num(hline, header[0])?;
    let m: usize = parse_num(hline, header[1])?;
    let mut rows = Vec::with_capacity(m);
    let mut last = hline;
    for (line, fields) in lines {
        if fields.len() != columns {
            return Err(parse_err(line, format!("expected {columns} columns")));
        }
        rows.push(
            fields
                .iter()
                .map(|f| parse_num(line, f))
                .collect::<Result<Vec<usize>, _>>()?,
        );
        last = line;
    }
    if rows.len() != m {
        return Err(parse_err(
            last,
            format!("header promises {m} edges, found {}", rows.len()),
        ));
    }
    Ok((n, rows))
}

pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let (n, rows) = parse_rows(text, 2)?;
    let pairs: Vec<_> = rows.iter().map(|r| (r[0], r[1])).collect();
    Graph::from_edge_list(n, &pairs)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Parses a colored edge list into the graph and the color of each edge
/// (indexed by the graph's sorted edge order).
pub fn parse_colored_edge_list(text: &str) -> Result<(Graph, Vec<u32>), GraphError> {
    let (n, rows) = parse_rows(text, 3)?;
    let pairs: Vec<_> = rows.iter().map(|r| (r[0], r[1])).collect();
    let g = Graph::from_edge_list(n, &pairs)?;
    let mut colors = vec![0u32; g.m()];
    for (i, r) in rows.iter().enumerate() {
        if r[2] == 0 {
            return Err(parse_err(i + 2, "colors must be >= 1"));
        }
        let e = g.edge_index(r[0], r[1]).expect("edge was just inserted");
        colors[e] = u32::try_from(r[2]).map_err(|_| parse_err(i + 2, "color too large"))?;
    }
    Ok((g, colors))
}

pub fn write_colored_edge_list(g: &Graph, colors: &[u32]) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (&(u, v), c) in g.edges().iter().zip(colors) {
        writeln!(out, "{u} {v} {c}").unwrap();
    }
    out
}

const G6_HEADER: &str = ">>graph6<<";

pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let s = text.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(G6_HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(parse_err(1, "empty graph6 string"));
    }
    if let Some(b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(parse_err(1, format!("byte {b} outside the graph6 range")));
    }
    let six = |b: u8| (b - 63) as usize;
    let (n, rest) = if bytes[0] != 126 {
        (six(bytes[0]), &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] != 126 {
        if bytes.len() < 4 {
            return Err(parse_err(1, "truncated size field"));
        }
        let n = bytes[1..4].iter().fold(0, |acc, &b| (acc << 6) | six(b));
        (n, &bytes[4..])
    } else {
        if bytes.len() < 8 {
            return Err(parse_err(1, "truncated size field"));
        }
        let n = bytes[2..8].iter().fold(0, |acc, &b| (acc << 6) | six(b));
        (n, &bytes[8..])
    };
    let nbits = n * n.saturating_sub(1) / 2;
    if rest.len() != nbits.div_ceil(6) {
        return Err(parse_err(
            1,
            format!(
                "expected {} data bytes for n={n}, found {}",
                nbits.div_ceil(6),
                rest.len()
            ),
        ));
    }
    let bit = |k: usize| (six(rest[k / 6]) >> (5 - k % 6)) & 1 == 1;
    let mut pairs = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                pairs.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edge_list(n, &pairs)
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    }
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

/// Accepts either an edge list or a single graph6 line.
pub fn parse_graph_auto(text: &str) -> Result<Graph, GraphError> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let looks_g6 = first.starts_with(G6_HEADER)
        || (!first.contains(char::is_whitespace)
            && !first.chars().all(|c| c.is_ascii_digit())
            && !first.is_empty());
    if looks_g6 {
        parse_graph6(first)
    } else {
        parse_edge_list(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn edge_list_with_comments() {
        let g = parse_edge_list("# a path\n3 2\n0 1  # first\n\n1 2\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(write_edge_list(&g), "3 2\n0 1\n1 2\n");
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(parse_edge_list(""), Err(GraphError::Parse { .. })));
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n"),
            Err(GraphError::Parse { .. })
        ));
        assert!(matches!(
            parse_edge_list("3 1\n0 x\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert_eq!(
            parse_edge_list("3 2\n0 1\n1 0\n"),
            Err(GraphError::DuplicateEdge(0, 1))
        );
    }

    #[test]
    fn colored_edge_list() {
        let (g, c) = parse_colored_edge_list("3 2\n2 1 5\n0 1 3\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(c, vec![3, 5]);
        assert!(parse_colored_edge_list("2 1\n0 1 0\n").is_err());
        assert_eq!(write_colored_edge_list(&g, &c), "3 2\n0 1 3\n1 2 5\n");
    }

    #[test]
    fn graph6_known_strings() {
        // Standard examples: "A_" is K_2, "Bw" is K_3, "C~" is K_4.
        assert_eq!(parse_graph6("A_").unwrap(), Graph::complete(2));
        assert_eq!(parse_graph6("Bw").unwrap(), Graph::complete(3));
        assert_eq!(parse_graph6("C~").unwrap(), Graph::complete(4));
        assert_eq!(write_graph6(&Graph::complete(4)), "C~");
        // Path 0-1-2-3 has bits (01)(02)(12)(03)(13)(23) = 1 0 1 0 0 1.
        let p = parse_graph6("Ch").unwrap();
        assert_eq!(p.edges(), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(parse_graph6(">>graph6<<Ch\n").unwrap(), p);
        assert_eq!(parse_graph6("?").unwrap().n(), 0);
    }

    #[test]
    fn graph6_large_header() {
        let g = Graph::empty(100);
        let s = write_graph6(&g);
        assert_eq!(&s.as_bytes()[..4], &[126, 63, 64, 99]);
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn graph6_rejects_bad_length() {
        assert!(parse_graph6("C~~").is_err());
        assert!(parse_graph6("C").is_err());
    }

    #[test]
    fn auto_detection() {
        assert_eq!(parse_graph_auto("Bw\n").unwrap(), Graph::complete(3));
        assert_eq!(parse_graph_auto("2 1\n0 1\n").unwrap(), Graph::complete(2));
    }

    proptest! {
        #[test]
        fn graph6_and_edge_list_round_trip(n in 0usize..70, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let pairs: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.2))
                .collect();
            let g = Graph::from_edge_list(n, &pairs).unwrap();
            prop_assert_eq!(&parse_graph6(&write_graph6(&g)).unwrap(), &g);
            prop_assert_eq!(&parse_edge_list(&write_edge_list(&g)).unwrap(), &g);
        }
    }
}
