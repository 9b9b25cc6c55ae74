//! Degree cleaning and the bad/clean classification of (k-1)-sets.
//!
//! Cleaning deletes edges until every (k-1)-set has degree 0 or at least t
//! inside the class being cleaned; the removal count never exceeds
//! t * C(n, k-1) per pass. On a 2-coloured host the pass runs once per
//! colour class. The cleaned graph's shadow then carries a possibly-double
//! colouring from which (k-1)-sets are classified bad (low degree or double
//! coloured) or clean (bounded intersection with bad sets).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::config::Ledger;
use crate::error::{Error, Result};
use crate::hypergraph::{Colouring, Hypergraph, HypergraphBuilder, Vertex};
use crate::util::for_each_subset;

/// Result of a cleaning pass.
#[derive(Debug, Clone)]
pub struct CleanedPair {
    pub original: Hypergraph,
    pub cleaned: Hypergraph,
    /// Removed edges, sorted lexicographically.
    pub removed: Vec<Vec<Vertex>>,
    pub t: usize,
    /// Colour class the pass was restricted to, when it was.
    pub colour: Option<usize>,
}

/// Cleans a hypergraph as a single class: while some (k-1)-set has degree
/// in [1, t-1], delete all edges containing it. Sets are scanned in
/// lexicographic order, which fixes the outcome.
pub fn clean(g: &Hypergraph, t: usize) -> Result<CleanedPair> {
    if t < 1 {
        return Err(Error::input("cleaning threshold t must be >= 1".to_string()));
    }
    let k = g.k();
    // live incidence: (k-1)-subset -> ids of surviving edges containing it
    let mut incidence: BTreeMap<Vec<Vertex>, BTreeSet<usize>> = BTreeMap::new();
    for (id, e) in g.edges().iter().enumerate() {
        for drop in 0..k {
            let sub: Vec<Vertex> = e
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, &v)| v)
                .collect();
            incidence.entry(sub).or_default().insert(id);
        }
    }
    let mut alive = vec![true; g.edge_count()];
    loop {
        let victim = incidence
            .iter()
            .find(|(_, ids)| (1..t).contains(&ids.len()))
            .map(|(s, _)| s.clone());
        let Some(s) = victim else { break };
        let ids: Vec<usize> = incidence[&s].iter().copied().collect();
        for id in ids {
            alive[id] = false;
            let e = g.edge(id);
            for drop in 0..k {
                let sub: Vec<Vertex> = e
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != drop)
                    .map(|(_, &v)| v)
                    .collect();
                if let Some(set) = incidence.get_mut(&sub) {
                    set.remove(&id);
                }
            }
        }
    }
    let mut builder = HypergraphBuilder::new(g.n(), k)?;
    let mut removed = Vec::new();
    for (id, e) in g.edges().iter().enumerate() {
        if alive[id] {
            builder.add_edge(e)?;
        } else {
            removed.push(e.clone());
        }
    }
    Ok(CleanedPair {
        original: g.clone(),
        cleaned: builder.freeze(g.n()),
        removed,
        t,
        colour: None,
    })
}

/// Sub-hypergraph carrying exactly the edges of one colour class.
fn colour_class(g: &Hypergraph, c: &Colouring, colour: usize) -> Result<Hypergraph> {
    let mut builder = HypergraphBuilder::new(g.n(), g.k())?;
    for (id, e) in g.edges().iter().enumerate() {
        if c.colour(id) == colour {
            builder.add_edge(e)?;
        }
    }
    Ok(builder.freeze(g.n()))
}

/// Cleans a single colour class of a coloured host.
pub fn clean_class(g: &Hypergraph, c: &Colouring, colour: usize, t: usize) -> Result<CleanedPair> {
    if colour >= c.r() {
        return Err(Error::input(format!("colour {colour} out of range 0..{}", c.r())));
    }
    let class = colour_class(g, c, colour)?;
    let mut pair = clean(&class, t)?;
    pair.colour = Some(colour);
    Ok(pair)
}

/// Cleans both classes of a 2-coloured host and reassembles the survivors:
/// in the result, every (k-1)-set has per-colour degree 0 or >= t, and at
/// most 2 t C(n, k-1) edges were removed in total.
pub fn clean_bicolour(g: &Hypergraph, c: &Colouring, t: usize) -> Result<CleanedPair> {
    if c.r() != 2 {
        return Err(Error::input(format!("clean_bicolour needs r=2, got r={}", c.r())));
    }
    let red = clean_class(g, c, 0, t)?;
    let blue = clean_class(g, c, 1, t)?;
    let mut builder = HypergraphBuilder::new(g.n(), g.k())?;
    for e in red.cleaned.edges() {
        builder.add_edge(e)?;
    }
    for e in blue.cleaned.edges() {
        builder.add_edge(e)?;
    }
    let mut removed = red.removed;
    removed.extend(blue.removed);
    removed.sort_unstable();
    Ok(CleanedPair {
        original: g.clone(),
        cleaned: builder.freeze(g.n()),
        removed,
        t,
        colour: None,
    })
}

/// The cleaned graph's (k-1)-shadow with its inherited colouring. A shadow
/// edge is red when it sits inside at least one red edge of the cleaned
/// graph, blue likewise; both flags may be set.
#[derive(Debug, Clone)]
pub struct ShadowColouring {
    pub shadow: Hypergraph,
    pub red: Vec<bool>,
    pub blue: Vec<bool>,
}

impl ShadowColouring {
    pub fn double_coloured(&self, shadow_edge_id: usize) -> bool {
        self.red[shadow_edge_id] && self.blue[shadow_edge_id]
    }

    pub fn double_count(&self) -> usize {
        (0..self.shadow.edge_count())
            .filter(|&i| self.double_coloured(i))
            .count()
    }
}

pub fn shadow_colouring(cleaned: &Hypergraph, c: &Colouring) -> Result<ShadowColouring> {
    if c.r() != 2 {
        return Err(Error::input(format!("shadow colouring needs r=2, got r={}", c.r())));
    }
    let shadow = cleaned.shadow();
    let mut red = vec![false; shadow.edge_count()];
    let mut blue = vec![false; shadow.edge_count()];
    for (id, e) in cleaned.edges().iter().enumerate() {
        let colour = c.colour(id);
        for drop in 0..cleaned.k() {
            let sub: Vec<Vertex> = e
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, &v)| v)
                .collect();
            let sid = shadow.edge_id(&sub).expect("subset of an edge is a shadow edge");
            if colour == 0 {
                red[sid] = true;
            } else {
                blue[sid] = true;
            }
        }
    }
    Ok(ShadowColouring { shadow, red, blue })
}

/// Bad/clean classification of all (k-1)-subsets of the vertex set.
#[derive(Debug, Clone, Serialize)]
pub struct BadSetReport {
    pub bad: Vec<Vec<Vertex>>,
    pub clean: Vec<Vec<Vertex>>,
    pub epsilon: f64,
    /// Intersection caps indexed by intersection size j = 0..k-1.
    pub caps: Vec<f64>,
}

/// A set is bad when its degree in the cleaned graph falls below
/// (1/2 + epsilon/2) n or its shadow edge carries both colours. A set is
/// clean when, for every j, it meets at most cap_j bad sets in exactly j
/// vertices; the j = k-1 cap forces clean sets not to be bad themselves.
pub fn classify_bad(
    cleaned: &Hypergraph,
    shadow_col: &ShadowColouring,
    epsilon: f64,
    ledger: &Ledger,
) -> Result<BadSetReport> {
    if epsilon <= 0.0 {
        return Err(Error::input(format!("epsilon={epsilon} must be positive")));
    }
    let n = cleaned.n();
    let k = cleaned.k();
    let threshold = (0.5 + epsilon / 2.0) * n as f64;
    let caps: Vec<f64> = (0..k).map(|j| ledger.bad_cap(n, k, j)).collect();

    let mut bad: Vec<Vec<Vertex>> = Vec::new();
    cleaned.for_each_codegree_set(|s, d| {
        let double = shadow_col
            .shadow
            .edge_id(s)
            .is_some_and(|id| shadow_col.double_coloured(id));
        if (d as f64) < threshold || double {
            bad.push(s.to_vec());
        }
        true
    });

    let mut clean_sets: Vec<Vec<Vertex>> = Vec::new();
    for_each_subset(n, k - 1, |s| {
        let mut counts = vec![0usize; k];
        for t in &bad {
            let inter = t.iter().filter(|v| s.contains(v)).count();
            counts[inter] += 1;
        }
        if counts.iter().zip(&caps).all(|(&c, &cap)| c as f64 <= cap) {
            clean_sets.push(s.to_vec());
        }
        true
    });

    Ok(BadSetReport {
        bad,
        clean: clean_sets,
        epsilon,
        caps,
    })
}

impl BadSetReport {
    pub fn is_bad(&self, sorted: &[Vertex]) -> bool {
        self.bad.binary_search_by(|probe| probe.as_slice().cmp(sorted)).is_ok()
    }

    pub fn is_clean(&self, sorted: &[Vertex]) -> bool {
        self.clean.binary_search_by(|probe| probe.as_slice().cmp(sorted)).is_ok()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
