//! Tight-path connectors: shortest bounded-length connections between
//! ordered tuple ends, and the spanning closure that consumes a whole pool.
//!
//! A path connects the tuples A and B when its ends (first k-1 vertices in
//! order, last k-1 reversed) are exactly (A, B); equivalently its vertex
//! sequence is A, interior, reverse(B). Interior vertices come only from
//! the pool.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, OrderedTuple, TightPath, Vertex};

fn check_tuple(g: &Hypergraph, t: &OrderedTuple, name: &str) -> Result<()> {
    if t.len() != g.k() - 1 {
        return Err(Error::input(format!(
            "{name} has {} vertices, expected k-1 = {}",
            t.len(),
            g.k() - 1
        )));
    }
    if let Some(&v) = t.vertices().iter().find(|&&v| v >= g.n()) {
        return Err(Error::input(format!("{name} vertex {v} out of range 0..{}", g.n())));
    }
    Ok(())
}

/// Shortest tight path connecting A and B with interior vertices drawn from
/// the pool: breadth-first over (last-tuple, used-set) states, candidates in
/// ascending vertex order, so ties resolve to the lexicographically least
/// path. Fails when no connection exists within `max_order` vertices or the
/// state budget runs out.
pub fn connect(
    g: &Hypergraph,
    pool: &[Vertex],
    a: &OrderedTuple,
    b: &OrderedTuple,
    max_order: usize,
    state_budget: usize,
) -> Result<TightPath> {
    let k = g.k();
    check_tuple(g, a, "start tuple")?;
    check_tuple(g, b, "target tuple")?;
    if a.vertices().iter().any(|&v| b.contains(v)) {
        return Err(Error::input(format!(
            "end tuples {:?} and {:?} must be disjoint",
            a.vertices(),
            b.vertices()
        )));
    }
    let connection_err = || Error::Connection {
        from: a.vertices().to_vec(),
        to: b.vertices().to_vec(),
        max_order,
    };
    if max_order < 2 * (k - 1) {
        return Err(connection_err());
    }

    // suffix the search must reach: reverse(B) in forward order
    let suffix: Vec<Vertex> = b.reversed().vertices().to_vec();
    let b_set = b.as_set();

    // a completed prefix closes iff every window spanning into the suffix is
    // an edge
    let closes = |prefix_tail: &[Vertex]| -> bool {
        let mut joint = prefix_tail.to_vec();
        joint.extend_from_slice(&suffix);
        joint.windows(k).all(|w| g.has_edge(w))
    };

    // interior candidates: pool minus both end tuples
    let candidates: Vec<Vertex> = {
        let banned: BTreeSet<Vertex> = a.vertices().iter().chain(&b_set).copied().collect();
        let mut c: Vec<Vertex> = pool.iter().copied().filter(|v| !banned.contains(v)).collect();
        c.sort_unstable();
        c.dedup();
        c
    };

    let mut frontier: Vec<Vec<Vertex>> = vec![a.vertices().to_vec()];
    let mut visited: BTreeSet<(Vec<Vertex>, Vec<Vertex>)> = BTreeSet::new();
    let mut explored = 0usize;
    let max_interior = max_order - 2 * (k - 1);

    for depth in 0..=max_interior {
        let mut next: Vec<Vec<Vertex>> = Vec::new();
        for prefix in &frontier {
            explored += 1;
            if explored > state_budget {
                return Err(connection_err());
            }
            let tail = &prefix[prefix.len() - (k - 1)..];
            if closes(tail) {
                let mut vertices = prefix.clone();
                vertices.extend_from_slice(&suffix);
                return TightPath::new(g, vertices);
            }
            if depth == max_interior {
                continue;
            }
            for &v in &candidates {
                if prefix.contains(&v) {
                    continue;
                }
                let mut window = tail.to_vec();
                window.push(v);
                if !g.has_edge(&window) {
                    continue;
                }
                let mut tuple = tail[1..].to_vec();
                tuple.push(v);
                let mut used: Vec<Vertex> = prefix.iter().copied().filter(|u| candidates.binary_search(u).is_ok()).collect();
                used.push(v);
                used.sort_unstable();
                if !visited.insert((tuple, used)) {
                    continue;
                }
                let mut extended = prefix.clone();
                extended.push(v);
                next.push(extended);
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Err(connection_err())
}

/// Tight path connecting A and B whose vertex set is exactly
/// A + pool + B: backtracking over the pool orderings with incremental
/// window pruning, candidates in ascending order. Deterministic.
pub fn spanning_connect(
    g: &Hypergraph,
    pool: &[Vertex],
    a: &OrderedTuple,
    b: &OrderedTuple,
    node_budget: usize,
) -> Result<TightPath> {
    let k = g.k();
    check_tuple(g, a, "start tuple")?;
    check_tuple(g, b, "target tuple")?;
    if a.vertices().iter().any(|&v| b.contains(v)) {
        return Err(Error::input(format!(
            "end tuples {:?} and {:?} must be disjoint",
            a.vertices(),
            b.vertices()
        )));
    }
    let b_set = b.as_set();
    let pool: Vec<Vertex> = {
        let banned: BTreeSet<Vertex> = a.vertices().iter().chain(&b_set).copied().collect();
        let mut c: Vec<Vertex> = pool.iter().copied().filter(|v| !banned.contains(v)).collect();
        c.sort_unstable();
        c.dedup();
        c
    };
    let spanning_err = || Error::Spanning {
        from: a.vertices().to_vec(),
        to: b.vertices().to_vec(),
        pool_size: pool.len(),
    };

    let total = 2 * (k - 1) + pool.len();
    let suffix_start = total - (k - 1);
    let mut seq: Vec<Vertex> = Vec::with_capacity(total);
    seq.extend_from_slice(a.vertices());
    seq.resize(total, 0);
    let suffix: Vec<Vertex> = b.reversed().vertices().to_vec();
    seq[suffix_start..].copy_from_slice(&suffix);

    let mut used = vec![false; pool.len()];
    let mut budget = node_budget;

    fn place(
        g: &Hypergraph,
        pool: &[Vertex],
        used: &mut [bool],
        seq: &mut [Vertex],
        pos: usize,
        suffix_start: usize,
        budget: &mut usize,
    ) -> bool {
        let k = g.k();
        if pos == suffix_start {
            // middle complete: the windows reaching into the suffix remain
            return (pos..seq.len())
                .filter(|&end| end + 1 >= k)
                .all(|end| g.has_edge(&seq[end + 1 - k..=end]));
        }
        for i in 0..pool.len() {
            if used[i] {
                continue;
            }
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            seq[pos] = pool[i];
            if pos + 1 >= k && !g.has_edge(&seq[pos + 1 - k..=pos]) {
                continue;
            }
            used[i] = true;
            if place(g, pool, used, seq, pos + 1, suffix_start, budget) {
                return true;
            }
            used[i] = false;
        }
        false
    }

    if place(g, &pool, &mut used, &mut seq, k - 1, suffix_start, &mut budget) {
        TightPath::new(g, seq)
    } else {
        Err(spanning_err())
    }
}
