//! Core data model: k-uniform hypergraphs, edge colourings, ordered tuples,
//! tight paths and tight Hamilton cycles.
//!
//! Vertices are dense integer ids `0..n`. Edges are stored in canonical
//! sorted order and the edge list itself is sorted lexicographically, so a
//! hypergraph's edge ids are stable across runs. Hypergraphs are immutable
//! after construction; build them through [`HypergraphBuilder`].

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::util::for_each_subset;

pub type Vertex = usize;

/// Incidence index keyed by (k-1)-subset: for each subset the list of
/// (extending vertex, edge id) pairs, both in ascending vertex order.
type LinkIndex = BTreeMap<Vec<Vertex>, Vec<(Vertex, usize)>>;

#[derive(Debug, Clone)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<Vertex>>,
    edge_ids: HashMap<Vec<Vertex>, usize>,
    link: Option<LinkIndex>,
}

#[derive(Debug, Clone)]
pub struct HypergraphBuilder {
    n: usize,
    k: usize,
    edges: BTreeSet<Vec<Vertex>>,
}

impl HypergraphBuilder {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::input(format!("uniformity k={k} must be >= 2")));
        }
        Ok(HypergraphBuilder {
            n,
            k,
            edges: BTreeSet::new(),
        })
    }

    /// Inserts an edge given in any vertex order. Duplicate insertions are
    /// no-ops; returns whether the edge was new.
    pub fn add_edge(&mut self, verts: &[Vertex]) -> Result<bool> {
        let mut e = verts.to_vec();
        e.sort_unstable();
        if e.len() != self.k {
            return Err(Error::input(format!(
                "edge {verts:?} has {} vertices, expected {}",
                verts.len(),
                self.k
            )));
        }
        if e.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input(format!("edge {verts:?} repeats a vertex")));
        }
        if let Some(&v) = e.last() {
            if v >= self.n {
                return Err(Error::input(format!(
                    "vertex {v} out of range 0..{}",
                    self.n
                )));
            }
        }
        Ok(self.edges.insert(e))
    }

    pub fn contains(&self, sorted_edge: &[Vertex]) -> bool {
        self.edges.contains(sorted_edge)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Freezes the builder. The (k-1)-set degree index is precomputed when
    /// n is at most `precompute_cap`; larger hosts answer degree queries by
    /// scanning.
    pub fn freeze(self, precompute_cap: usize) -> Hypergraph {
        let edges: Vec<Vec<Vertex>> = self.edges.into_iter().collect();
        let edge_ids = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let link = if self.n <= precompute_cap {
            let mut index: LinkIndex = BTreeMap::new();
            for (id, e) in edges.iter().enumerate() {
                for drop in 0..self.k {
                    let mut sub = Vec::with_capacity(self.k - 1);
                    sub.extend(e.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v));
                    index.entry(sub).or_default().push((e[drop], id));
                }
            }
            for exts in index.values_mut() {
                exts.sort_unstable();
            }
            Some(index)
        } else {
            None
        };
        Hypergraph {
            n: self.n,
            k: self.k,
            edges,
            edge_ids,
            link,
        }
    }
}

impl Hypergraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical lexicographic order; the position is the edge id.
    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &[Vertex] {
        &self.edges[id]
    }

    /// Edge id of a sorted vertex set, if present.
    pub fn edge_id(&self, sorted: &[Vertex]) -> Option<usize> {
        self.edge_ids.get(sorted).copied()
    }

    /// Membership test for an edge given in any vertex order.
    pub fn has_edge(&self, verts: &[Vertex]) -> bool {
        let mut e = verts.to_vec();
        e.sort_unstable();
        self.edge_ids.contains_key(e.as_slice())
    }

    fn check_vertex_set(&self, set: &[Vertex]) -> Result<()> {
        for &v in set {
            if v >= self.n {
                return Err(Error::input(format!("vertex {v} out of range 0..{}", self.n)));
            }
        }
        if set.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input(format!("vertex set {set:?} repeats a vertex")));
        }
        Ok(())
    }

    /// Number of edges containing the vertex set S (|S| <= k).
    pub fn degree(&self, set: &[Vertex]) -> Result<usize> {
        let mut s = set.to_vec();
        s.sort_unstable();
        self.check_vertex_set(&s)?;
        if s.len() > self.k {
            return Err(Error::input(format!(
                "degree query on {} vertices exceeds uniformity {}",
                s.len(),
                self.k
            )));
        }
        if s.len() == self.k {
            return Ok(usize::from(self.edge_ids.contains_key(s.as_slice())));
        }
        if s.len() == self.k - 1 {
            if let Some(link) = &self.link {
                return Ok(link.get(s.as_slice()).map_or(0, |v| v.len()));
            }
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| is_subset(&s, e))
            .count())
    }

    /// Minimum (k-1)-degree over all (k-1)-subsets of the vertex set.
    pub fn min_codegree(&self) -> Result<usize> {
        if self.n < self.k {
            return Err(Error::input(format!(
                "min_codegree needs n >= k, got n={} k={}",
                self.n, self.k
            )));
        }
        let mut best = usize::MAX;
        self.for_each_codegree_set(|_, d| {
            best = best.min(d);
            best > 0 // once a zero shows up there is nothing smaller
        });
        Ok(best)
    }

    /// Calls `f(subset, degree)` for every (k-1)-subset of the vertex set in
    /// lexicographic order, until `f` returns false.
    pub fn for_each_codegree_set<F: FnMut(&[Vertex], usize) -> bool>(&self, mut f: F) {
        let m = self.k - 1;
        for_each_subset(self.n, m, |s| {
            let d = match &self.link {
                Some(link) => link.get(s).map_or(0, |v| v.len()),
                None => self.edges.iter().filter(|e| is_subset(s, e)).count(),
            };
            f(s, d)
        });
    }

    /// Vertices v outside S with S + v an edge; |S| must equal k-1.
    pub fn neighbours(&self, set: &[Vertex]) -> Result<Vec<Vertex>> {
        let mut s = set.to_vec();
        s.sort_unstable();
        self.check_vertex_set(&s)?;
        if s.len() != self.k - 1 {
            return Err(Error::input(format!(
                "neighbours query needs a (k-1)-set, got {} vertices",
                s.len()
            )));
        }
        if let Some(link) = &self.link {
            return Ok(link
                .get(s.as_slice())
                .map_or_else(Vec::new, |exts| exts.iter().map(|&(v, _)| v).collect()));
        }
        let mut out = Vec::new();
        for e in &self.edges {
            if is_subset(&s, e) {
                for &v in e {
                    if !s.contains(&v) {
                        out.push(v);
                    }
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Extensions of a (k-1)-set as (vertex, edge id) pairs, ascending.
    /// Empty when the set extends no edge.
    pub fn extensions(&self, sorted: &[Vertex]) -> Vec<(Vertex, usize)> {
        if let Some(link) = &self.link {
            return link.get(sorted).cloned().unwrap_or_default();
        }
        let mut out = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            if is_subset(sorted, e) {
                for &v in e {
                    if !sorted.contains(&v) {
                        out.push((v, id));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The (k-1)-graph of all (k-1)-sets contained in at least one edge.
    pub fn shadow(&self) -> Hypergraph {
        let mut builder = HypergraphBuilder::new(self.n, self.k - 1).expect("k >= 2 invariant");
        for e in &self.edges {
            for drop in 0..self.k {
                let sub: Vec<Vertex> = e
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != drop)
                    .map(|(_, &v)| v)
                    .collect();
                builder.add_edge(&sub).expect("shadow edge valid");
            }
        }
        builder.freeze(if self.link.is_some() { self.n } else { 0 })
    }

    /// Sub-hypergraph induced on `keep` (any order), with vertices renamed to
    /// 0..keep.len(). Returns the new host and the new-to-old vertex map.
    pub fn induced(&self, keep: &[Vertex]) -> Result<(Hypergraph, Vec<Vertex>)> {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        self.check_vertex_set(&sorted)?;
        let old_to_new: HashMap<Vertex, Vertex> = sorted
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let mut builder = HypergraphBuilder::new(sorted.len(), self.k)?;
        for e in &self.edges {
            if e.iter().all(|v| old_to_new.contains_key(v)) {
                let mapped: Vec<Vertex> = e.iter().map(|v| old_to_new[v]).collect();
                builder.add_edge(&mapped)?;
            }
        }
        Ok((builder.freeze(if self.link.is_some() { sorted.len() } else { 0 }), sorted))
    }

    /// Copy of this host without the listed edges (ignored when absent).
    pub fn without_edges(&self, drop: &[Vec<Vertex>]) -> Hypergraph {
        let dropset: BTreeSet<Vec<Vertex>> = drop
            .iter()
            .map(|e| {
                let mut s = e.clone();
                s.sort_unstable();
                s
            })
            .collect();
        let mut builder = HypergraphBuilder::new(self.n, self.k).expect("same parameters");
        for e in &self.edges {
            if !dropset.contains(e) {
                builder.add_edge(e).expect("edge already validated");
            }
        }
        builder.freeze(if self.link.is_some() { self.n } else { 0 })
    }
}

fn is_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    // both sorted
    let mut it = big.iter();
    'outer: for &s in small {
        for &b in it.by_ref() {
            if b == s {
                continue 'outer;
            }
            if b > s {
                return false;
            }
        }
        return false;
    }
    true
}

/// Total edge colouring with colours `0..r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    r: usize,
    by_edge: Vec<usize>,
}

impl Colouring {
    /// Builds a colouring from a per-edge-id assignment aligned with the
    /// host's canonical edge order.
    pub fn new(host: &Hypergraph, r: usize, by_edge: Vec<usize>) -> Result<Self> {
        if r < 2 {
            return Err(Error::input(format!("colour count r={r} must be >= 2")));
        }
        if by_edge.len() != host.edge_count() {
            return Err(Error::input(format!(
                "colouring covers {} edges, host has {}",
                by_edge.len(),
                host.edge_count()
            )));
        }
        if let Some(&c) = by_edge.iter().find(|&&c| c >= r) {
            return Err(Error::input(format!("colour {c} out of range 0..{r}")));
        }
        Ok(Colouring { r, by_edge })
    }

    pub fn from_fn(host: &Hypergraph, r: usize, f: impl Fn(&[Vertex]) -> usize) -> Result<Self> {
        let by_edge = host.edges().iter().map(|e| f(e)).collect();
        Colouring::new(host, r, by_edge)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn colour(&self, edge_id: usize) -> usize {
        self.by_edge[edge_id]
    }

    pub fn by_edge(&self) -> &[usize] {
        &self.by_edge
    }

    /// Edge count per colour class.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.r];
        for &c in &self.by_edge {
            counts[c] += 1;
        }
        counts
    }

    /// Identifies all colours other than `kept` into one: the result has
    /// r = 2 with colour 0 ("red") the kept class and colour 1 ("blue") the
    /// rest.
    pub fn merge_colours(&self, kept: usize) -> Result<Colouring> {
        if kept >= self.r {
            return Err(Error::input(format!(
                "kept colour {kept} out of range 0..{}",
                self.r
            )));
        }
        Ok(Colouring {
            r: 2,
            by_edge: self
                .by_edge
                .iter()
                .map(|&c| usize::from(c != kept))
                .collect(),
        })
    }

    /// Restriction of this colouring to a sub-host whose edges are a subset
    /// of the original host's (same vertex ids).
    pub fn restrict_to(&self, original: &Hypergraph, sub: &Hypergraph) -> Result<Colouring> {
        let by_edge = sub
            .edges()
            .iter()
            .map(|e| {
                original
                    .edge_id(e)
                    .map(|id| self.by_edge[id])
                    .ok_or_else(|| Error::input(format!("edge {e:?} missing from original host")))
            })
            .collect::<Result<Vec<_>>>()?;
        Colouring::new(sub, self.r, by_edge)
    }

    /// Colouring of an induced sub-host produced by [`Hypergraph::induced`],
    /// given the new-to-old vertex map it returned.
    pub fn induced_to(
        &self,
        original: &Hypergraph,
        sub: &Hypergraph,
        new_to_old: &[Vertex],
    ) -> Result<Colouring> {
        let by_edge = sub
            .edges()
            .iter()
            .map(|e| {
                let mut mapped: Vec<Vertex> = e.iter().map(|&v| new_to_old[v]).collect();
                mapped.sort_unstable();
                original
                    .edge_id(&mapped)
                    .map(|id| self.by_edge[id])
                    .ok_or_else(|| Error::input(format!("edge {mapped:?} missing from original host")))
            })
            .collect::<Result<Vec<_>>>()?;
        Colouring::new(sub, self.r, by_edge)
    }
}

/// An ordered tuple of k-1 distinct vertices; the unit the walk and the
/// connectors work with.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedTuple(Vec<Vertex>);

impl OrderedTuple {
    pub fn new(verts: Vec<Vertex>) -> Result<Self> {
        let mut sorted = verts.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input(format!("tuple {verts:?} repeats a vertex")));
        }
        Ok(OrderedTuple(verts))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> OrderedTuple {
        OrderedTuple(self.0.iter().rev().copied().collect())
    }

    /// Underlying vertex set in sorted order.
    pub fn as_set(&self) -> Vec<Vertex> {
        let mut s = self.0.clone();
        s.sort_unstable();
        s
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }
}

/// A tight path: every window of k consecutive vertices is an edge of the
/// host. Paths of order k-1 are valid and edgeless.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightPath {
    vertices: Vec<Vertex>,
}

impl TightPath {
    pub fn new(host: &Hypergraph, vertices: Vec<Vertex>) -> Result<Self> {
        let k = host.k();
        if vertices.len() + 1 < k {
            return Err(Error::input(format!(
                "tight path needs at least {} vertices, got {}",
                k - 1,
                vertices.len()
            )));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input(format!("path {vertices:?} repeats a vertex")));
        }
        if let Some(&v) = sorted.last() {
            if v >= host.n() {
                return Err(Error::input(format!("vertex {v} out of range 0..{}", host.n())));
            }
        }
        for w in vertices.windows(k) {
            if !host.has_edge(w) {
                return Err(Error::input(format!("window {w:?} is not an edge of the host")));
            }
        }
        Ok(TightPath { vertices })
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// The ends: first k-1 vertices in order, and the last k-1 vertices in
    /// reversed order.
    pub fn ends(&self, k: usize) -> (OrderedTuple, OrderedTuple) {
        let l = self.vertices.len();
        let head = OrderedTuple(self.vertices[..k - 1].to_vec());
        let tail = OrderedTuple(self.vertices[l - (k - 1)..].iter().rev().copied().collect());
        (head, tail)
    }

    /// Edge windows as sorted vertex sets, in path order.
    pub fn edge_sets(&self, k: usize) -> Vec<Vec<Vertex>> {
        self.vertices
            .windows(k)
            .map(|w| {
                let mut e = w.to_vec();
                e.sort_unstable();
                e
            })
            .collect()
    }
}

/// A tight Hamilton cycle: a cyclic ordering of all n vertices in which
/// every cyclic window of k consecutive vertices is an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonCycle {
    vertices: Vec<Vertex>,
}

impl HamiltonCycle {
    pub fn new(host: &Hypergraph, vertices: Vec<Vertex>) -> Result<Self> {
        let n = host.n();
        let k = host.k();
        if vertices.len() != n {
            return Err(Error::input(format!(
                "cycle covers {} vertices, host has {n}",
                vertices.len()
            )));
        }
        let mut seen = vec![false; n];
        for &v in &vertices {
            if v >= n {
                return Err(Error::input(format!("vertex {v} out of range 0..{n}")));
            }
            if seen[v] {
                return Err(Error::input(format!("vertex {v} appears twice in the cycle")));
            }
            seen[v] = true;
        }
        for i in 0..n {
            let window: Vec<Vertex> = (0..k).map(|j| vertices[(i + j) % n]).collect();
            if !host.has_edge(&window) {
                return Err(Error::input(format!(
                    "cyclic window at position {i} ({window:?}) is not an edge"
                )));
            }
        }
        Ok(HamiltonCycle { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// The n cyclic edge windows as sorted vertex sets, by start position.
    pub fn edge_sets(&self, k: usize) -> Vec<Vec<Vertex>> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let mut e: Vec<Vertex> = (0..k).map(|j| self.vertices[(i + j) % n]).collect();
                e.sort_unstable();
                e
            })
            .collect()
    }
}
