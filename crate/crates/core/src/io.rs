//! Text serialization.
//!
//! Instance files are line-oriented UTF-8: a header `k n r`, then one line
//! per edge holding k vertex ids followed by a colour index, all space
//! separated, each line terminated by `\n`. Writers emit edges in canonical
//! lexicographic order, so write -> parse -> write is bit-exact.
//!
//! Structure files: a cycle is one line of n vertex ids; a matching is one
//! edge per line. Fractional matchings dump as CSV with one `v1 .. vk,w`
//! row per edge.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fractional::FractionalMatching;
use crate::hypergraph::{Colouring, Hypergraph, HypergraphBuilder, TightPath, Vertex};

pub fn write_instance(g: &Hypergraph, c: &Colouring) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", g.k(), g.n(), c.r()).unwrap();
    for (id, e) in g.edges().iter().enumerate() {
        for &v in e {
            write!(out, "{v} ").unwrap();
        }
        writeln!(out, "{}", c.colour(id)).unwrap();
    }
    out
}

pub fn read_instance(text: &str) -> Result<(Hypergraph, Colouring)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::parse("empty instance file"))?;
    let head: Vec<usize> = parse_ints(header)?;
    let [k, n, r] = head[..] else {
        return Err(Error::parse(format!("header {header:?}: expected `k n r`")));
    };
    let mut builder = HypergraphBuilder::new(n, k)?;
    let mut coloured: Vec<(Vec<Vertex>, usize)> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields = parse_ints(line)?;
        if fields.len() != k + 1 {
            return Err(Error::parse(format!(
                "line {}: expected {} vertex ids and a colour",
                lineno + 2,
                k
            )));
        }
        let (edge, colour) = fields.split_at(k);
        if !builder.add_edge(edge).map_err(|e| Error::parse(e.to_string()))? {
            return Err(Error::parse(format!("line {}: duplicate edge", lineno + 2)));
        }
        let mut sorted = edge.to_vec();
        sorted.sort_unstable();
        coloured.push((sorted, colour[0]));
    }
    let g = builder.freeze(128);
    let mut by_edge = vec![0usize; g.edge_count()];
    for (edge, colour) in coloured {
        let id = g.edge_id(&edge).expect("edge was just inserted");
        by_edge[id] = colour;
    }
    let c = Colouring::new(&g, r, by_edge).map_err(|e| Error::parse(e.to_string()))?;
    Ok((g, c))
}

pub fn write_cycle(vertices: &[Vertex]) -> String {
    let mut out = join_ints(vertices);
    out.push('\n');
    out
}

pub fn read_cycle(text: &str) -> Result<Vec<Vertex>> {
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Error::parse("empty cycle file"))?;
    parse_ints(line)
}

pub fn write_matching(edges: &[Vec<Vertex>]) -> String {
    let mut out = String::new();
    for e in edges {
        writeln!(out, "{}", join_ints(e)).unwrap();
    }
    out
}

pub fn read_matching(text: &str) -> Result<Vec<Vec<Vertex>>> {
    let mut edges = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        edges.push(parse_ints(line)?);
    }
    Ok(edges)
}

/// Edge-weight CSV: one `v1 v2 .. vk,weight` row per edge, canonical order.
pub fn write_pfm_csv(g: &Hypergraph, x: &FractionalMatching) -> String {
    let mut out = String::new();
    for (id, e) in g.edges().iter().enumerate() {
        writeln!(out, "{},{:.17e}", join_ints(e), x.weight(id)).unwrap();
    }
    out
}

/// Newline-delimited vertex sequences, one sampled path per line.
pub fn write_paths(paths: &[TightPath]) -> String {
    let mut out = String::new();
    for p in paths {
        writeln!(out, "{}", join_ints(p.vertices())).unwrap();
    }
    out
}

fn join_ints(vals: &[usize]) -> String {
    vals.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_ints(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(format!("bad integer {tok:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_near_perfect_extremal, gen_random_dirac, random_colouring};
    use proptest::prelude::*;

    #[test]
    fn instance_round_trip_is_bit_exact() {
        let (g, c) = gen_near_perfect_extremal(8).unwrap();
        let text = write_instance(&g, &c);
        let (g2, c2) = read_instance(&text).unwrap();
        assert_eq!(write_instance(&g2, &c2), text);
        assert_eq!(g2.edges(), g.edges());
        assert_eq!(c2.by_edge(), c.by_edge());
    }

    #[test]
    fn rejects_malformed_instances() {
        assert!(read_instance("").is_err());
        assert!(read_instance("3 6\n").is_err());
        assert!(read_instance("3 6 2\n0 1 2\n").is_err()); // missing colour
        assert!(read_instance("3 6 2\n0 1 2 0\n0 1 2 1\n").is_err()); // duplicate
        assert!(read_instance("3 6 2\n0 1 9 0\n").is_err()); // vertex range
    }

    #[test]
    fn cycle_and_matching_round_trip() {
        let cyc = vec![0, 3, 1, 4, 2, 5];
        assert_eq!(read_cycle(&write_cycle(&cyc)).unwrap(), cyc);
        let m = vec![vec![0, 1, 2], vec![3, 4, 5]];
        assert_eq!(read_matching(&write_matching(&m)).unwrap(), m);
    }

    proptest! {
        #[test]
        fn random_instances_round_trip(seed in 0u64..50) {
            let g = gen_random_dirac(10, 3, 0.5, seed).unwrap();
            let c = random_colouring(&g, 3, seed);
            let text = write_instance(&g, &c);
            let (g2, c2) = read_instance(&text).unwrap();
            prop_assert_eq!(write_instance(&g2, &c2), text);
        }
    }
}
