//! Independent verifiers. Everything here re-checks structures from scratch
//! against the hypergraph read API; none of the constructor code paths
//! (path/cycle builders, solvers, searches) are reused, so a verifier
//! passing is evidence about the object, not about shared code.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fractional::FractionalMatching;
use crate::hypergraph::{Colouring, Hypergraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureKind {
    Cycle,
    Matching,
    Forest,
}

/// Colour audit of a verified structure. The stored surplus is the raw
/// majority surplus max_c count_c - m/r; the r-scaled discrepancy is
/// r times that.
#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyReport {
    pub kind: StructureKind,
    pub total_edges: usize,
    pub counts: Vec<usize>,
    pub majority: usize,
    pub surplus: f64,
    pub scaled_discrepancy: f64,
    /// For matchings: whether k |M| = n.
    pub perfect: Option<bool>,
}

impl DiscrepancyReport {
    fn from_counts(kind: StructureKind, counts: Vec<usize>, perfect: Option<bool>) -> Self {
        let m: usize = counts.iter().sum();
        let r = counts.len();
        let (majority, &best) = counts
            .iter()
            .enumerate()
            .max_by_key(|&(_, &c)| c)
            .expect("at least one colour");
        let surplus = best as f64 - m as f64 / r as f64;
        DiscrepancyReport {
            kind,
            total_edges: m,
            counts,
            majority,
            surplus,
            scaled_discrepancy: r as f64 * surplus,
            perfect,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Re-checks a claimed tight Hamilton cycle window by window: n in-range
/// distinct vertices, every cyclic k-window an edge. Returns the colour
/// audit; fails naming the first bad window.
pub fn verify_cycle(g: &Hypergraph, c: &Colouring, cycle: &[Vertex]) -> Result<DiscrepancyReport> {
    let n = g.n();
    let k = g.k();
    if cycle.len() != n {
        return Err(Error::Verification(format!(
            "cycle lists {} vertices, host has {n}",
            cycle.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n {
            return Err(Error::Verification(format!("vertex {v} out of range 0..{n}")));
        }
        if seen[v] {
            return Err(Error::Verification(format!("vertex {v} repeated")));
        }
        seen[v] = true;
    }
    let mut counts = vec![0usize; c.r()];
    for i in 0..n {
        let mut window: Vec<Vertex> = (0..k).map(|j| cycle[(i + j) % n]).collect();
        window.sort_unstable();
        match g.edge_id(&window) {
            Some(id) => counts[c.colour(id)] += 1,
            None => {
                return Err(Error::Verification(format!(
                    "window at position {i} ({window:?}) is not an edge"
                )))
            }
        }
    }
    Ok(DiscrepancyReport::from_counts(StructureKind::Cycle, counts, None))
}

/// Re-checks a claimed matching: edges present, pairwise disjoint; when
/// `claim_perfect` is set, also k |M| = n. Returns the colour audit.
pub fn verify_matching(
    g: &Hypergraph,
    c: &Colouring,
    edges: &[Vec<Vertex>],
    claim_perfect: bool,
) -> Result<DiscrepancyReport> {
    let mut seen = vec![false; g.n()];
    let mut counts = vec![0usize; c.r()];
    for e in edges {
        let mut sorted = e.clone();
        sorted.sort_unstable();
        let Some(id) = g.edge_id(&sorted) else {
            return Err(Error::Verification(format!("{sorted:?} is not an edge")));
        };
        for &v in &sorted {
            if seen[v] {
                return Err(Error::Verification(format!(
                    "vertex {v} covered twice (at edge {sorted:?})"
                )));
            }
            seen[v] = true;
        }
        counts[c.colour(id)] += 1;
    }
    let perfect = g.k() * edges.len() == g.n();
    if claim_perfect && !perfect {
        return Err(Error::Verification(format!(
            "matching of size {} is not perfect on {} vertices",
            edges.len(),
            g.n()
        )));
    }
    Ok(DiscrepancyReport::from_counts(
        StructureKind::Matching,
        counts,
        Some(perfect),
    ))
}

/// Colour audit of a path forest: paths are re-checked window by window and
/// for pairwise vertex-disjointness.
pub fn verify_forest(
    g: &Hypergraph,
    c: &Colouring,
    paths: &[Vec<Vertex>],
) -> Result<DiscrepancyReport> {
    let k = g.k();
    let mut seen = vec![false; g.n()];
    let mut counts = vec![0usize; c.r()];
    for (pi, path) in paths.iter().enumerate() {
        for &v in path {
            if v >= g.n() {
                return Err(Error::Verification(format!("vertex {v} out of range")));
            }
            if seen[v] {
                return Err(Error::Verification(format!(
                    "vertex {v} covered twice (path {pi})"
                )));
            }
            seen[v] = true;
        }
        for w in path.windows(k) {
            let mut window = w.to_vec();
            window.sort_unstable();
            match g.edge_id(&window) {
                Some(id) => counts[c.colour(id)] += 1,
                None => {
                    return Err(Error::Verification(format!(
                        "path {pi} window {window:?} is not an edge"
                    )))
                }
            }
        }
    }
    Ok(DiscrepancyReport::from_counts(StructureKind::Forest, counts, None))
}

/// Re-sums every vertex constraint of a fractional matching and re-checks
/// the normality bounds independently. Returns whether everything holds and
/// the list of violations.
pub fn verify_pfm(
    g: &Hypergraph,
    x: &FractionalMatching,
    tol: f64,
) -> (bool, Vec<String>) {
    let mut violations = Vec::new();
    let mut sums = vec![0.0f64; g.n()];
    for (id, e) in g.edges().iter().enumerate() {
        for &v in e {
            sums[v] += x.weight(id);
        }
    }
    for (v, s) in sums.iter().enumerate() {
        if (s - 1.0).abs() > tol {
            violations.push(format!("vertex {v} sums to {s:.12}"));
        }
    }
    let lower = x.lower_bound();
    let upper = x.upper_bound();
    for (id, &w) in x.weights().iter().enumerate() {
        if w < lower * (1.0 - 1e-12) - f64::EPSILON {
            violations.push(format!("edge {id} weight {w:.3e} below {lower:.3e}"));
        }
        if w > upper * (1.0 + 1e-12) + f64::EPSILON {
            violations.push(format!("edge {id} weight {w:.3e} above {upper:.3e}"));
        }
    }
    let total = x.total();
    let expect = g.n() as f64 / g.k() as f64;
    if (total - expect).abs() > tol * g.n() as f64 {
        violations.push(format!("total weight {total:.12} differs from n/k = {expect:.12}"));
    }
    (violations.is_empty(), violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Ledger;
    use crate::fractional::solve_pfm;
    use crate::instances::{gen_complete, gen_split_colouring};

    #[test]
    fn cycle_report_examples() {
        let g = gen_complete(6, 3).unwrap();
        let mono = Colouring::from_fn(&g, 2, |_| 0).unwrap();
        let report = verify_cycle(&g, &mono, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(report.total_edges, 6);
        assert_eq!(report.counts, vec![6, 0]);
        assert_eq!(report.surplus, 3.0); // n/2 for a monochromatic cycle
        assert_eq!(report.scaled_discrepancy, 6.0);

        // balanced two-colouring of the cycle windows: surplus 0
        let balanced = Colouring::from_fn(&g, 2, |e| usize::from(e[0] % 2 == 0)).unwrap();
        let report = verify_cycle(&g, &balanced, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(report.counts.iter().sum::<usize>(), 6);

        // surplus arithmetic: counts (10, 4) on m = 14 gives 3
        let counts = vec![10usize, 4];
        let r = DiscrepancyReport::from_counts(StructureKind::Cycle, counts, None);
        assert_eq!(r.surplus, 3.0);
    }

    #[test]
    fn cycle_failures_name_the_window() {
        let g = gen_complete(6, 3).unwrap();
        let sparse = g.without_edges(&[vec![3, 4, 5]]);
        let c = Colouring::from_fn(&sparse, 2, |_| 0).unwrap();
        match verify_cycle(&sparse, &c, &[0, 1, 2, 3, 4, 5]) {
            Err(Error::Verification(msg)) => assert!(msg.contains("[3, 4, 5]"), "{msg}"),
            other => panic!("expected failure, got {other:?}"),
        }
        // wrong length and repeats
        let c6 = Colouring::from_fn(&g, 2, |_| 0).unwrap();
        assert!(verify_cycle(&g, &c6, &[0, 1, 2]).is_err());
        assert!(verify_cycle(&g, &c6, &[0, 1, 2, 3, 4, 4]).is_err());
    }

    #[test]
    fn matching_report_examples() {
        let g = gen_complete(6, 3).unwrap();
        let c = gen_split_colouring(&g, &[0, 1, 2]).unwrap();
        let report =
            verify_matching(&g, &c, &[vec![0, 1, 2], vec![3, 4, 5]], true).unwrap();
        assert_eq!(report.total_edges, 2);
        assert_eq!(report.perfect, Some(true));

        match verify_matching(&g, &c, &[vec![0, 1, 2], vec![2, 3, 4]], false) {
            Err(Error::Verification(msg)) => assert!(msg.contains("vertex 2"), "{msg}"),
            other => panic!("expected overlap failure, got {other:?}"),
        }
        // deficiency only fails under the perfection claim
        assert!(verify_matching(&g, &c, &[vec![0, 1, 2]], false).is_ok());
        assert!(verify_matching(&g, &c, &[vec![0, 1, 2]], true).is_err());
    }

    #[test]
    fn pfm_verifier_counts_violations() {
        let ledger = Ledger::default();
        let g = gen_complete(6, 3).unwrap();
        let x = solve_pfm(&g, 0.2, &ledger).unwrap();
        let (ok, violations) = verify_pfm(&g, &x, ledger.tol_pfm);
        assert!(ok, "{violations:?}");

        // hand-made weights with one vertex deliberately short
        let mut weights = x.weights().to_vec();
        for (id, e) in g.edges().iter().enumerate() {
            if e.contains(&0) {
                weights[id] *= 0.9;
            }
        }
        let bad = FractionalMatching::from_weights(&g, weights, 0.2).unwrap();
        let (ok, violations) = verify_pfm(&g, &bad, ledger.tol_pfm);
        assert!(!ok);
        assert!(violations.iter().any(|v| v.contains("vertex 0")));
    }
}
