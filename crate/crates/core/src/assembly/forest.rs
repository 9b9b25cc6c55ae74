//! Path forest construction: the auxiliary t-graph over sampled paths, the
//! greedy-plus-local-search matching surrogate, and the forest pipeline.
//!
//! Sampled paths become edges of a t-uniform auxiliary graph weighted by
//! w1 = 1 and w2 = number of majority-colour edges on the backing path.
//! A matching in that graph is a vertex-disjoint path collection; the
//! surrogate reports its weight ratios w_i(M) / (w_i(E) / Delta) in place
//! of a nibble guarantee.

use serde::Serialize;

use crate::config::Ledger;
use crate::error::{Error, Result};
use crate::fractional::discrepant_pfm;
use crate::hypergraph::{Colouring, Hypergraph, TightPath, Vertex};
use crate::util::stream_rng;
use crate::walk::{SampledPath, WalkSampler};

/// Auxiliary t-graph: vertex set of the host, one edge per retained sampled
/// path. Paths whose vertex set collides with another's are dropped in
/// pairs (all members of every collision group).
#[derive(Debug, Clone)]
pub struct AuxiliaryGraph {
    pub t: usize,
    pub n: usize,
    /// Retained paths, each the backing object of one auxiliary edge.
    pub paths: Vec<TightPath>,
    /// Sorted vertex set per auxiliary edge, aligned with `paths`.
    pub vertex_sets: Vec<Vec<Vertex>>,
    /// Majority-colour edge count of each backing path (the w2 weight).
    pub w2: Vec<usize>,
    /// How many sampled paths were dropped by the collision rule.
    pub dropped: usize,
}

impl AuxiliaryGraph {
    pub fn edge_count(&self) -> usize {
        self.paths.len()
    }

    /// Maximum vertex degree.
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n];
        for set in &self.vertex_sets {
            for &v in set {
                deg[v] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }

    pub fn w1_total(&self) -> f64 {
        self.edge_count() as f64
    }

    pub fn w2_total(&self) -> f64 {
        self.w2.iter().map(|&w| w as f64).sum()
    }
}

/// Builds the auxiliary graph from sampled paths: vertex-set collision
/// groups are removed entirely, surviving paths carry w2 = count of edges
/// in the majority colour.
pub fn build_auxiliary(
    host: &Hypergraph,
    samples: &[SampledPath],
    c: &Colouring,
    majority: usize,
) -> Result<AuxiliaryGraph> {
    if majority >= c.r() {
        return Err(Error::input(format!("colour {majority} out of range 0..{}", c.r())));
    }
    let t = match samples.first() {
        Some(s) => s.path.order(),
        None => 0,
    };
    if samples.iter().any(|s| s.path.order() != t) {
        return Err(Error::input("sampled paths must share one order".to_string()));
    }
    let mut groups: std::collections::BTreeMap<Vec<Vertex>, Vec<usize>> =
        std::collections::BTreeMap::new();
    for (i, s) in samples.iter().enumerate() {
        let mut set = s.path.vertices().to_vec();
        set.sort_unstable();
        groups.entry(set).or_default().push(i);
    }
    let mut paths = Vec::new();
    let mut vertex_sets = Vec::new();
    let mut w2 = Vec::new();
    let mut dropped = 0usize;
    for (set, members) in groups {
        if members.len() > 1 {
            dropped += members.len();
            continue;
        }
        let path = samples[members[0]].path.clone();
        let red = path
            .edge_sets(host.k())
            .iter()
            .filter(|e| c.colour(host.edge_id(e).expect("path window is an edge")) == majority)
            .count();
        paths.push(path);
        vertex_sets.push(set);
        w2.push(red);
    }
    Ok(AuxiliaryGraph {
        t,
        n: host.n(),
        paths,
        vertex_sets,
        w2,
        dropped,
    })
}

/// Reported quality of a matching: the two EGJ-style weight ratios
/// w_i(M) / (w_i(E) / Delta), plus the degree they were measured against.
#[derive(Debug, Clone, Serialize)]
pub struct MatchingQuality {
    pub ratio_w1: f64,
    pub ratio_w2: f64,
    pub max_degree: usize,
}

/// Greedy matching in decreasing-w2 order with local-search augmentation:
/// plain additions, 1-for-1 swaps that raise w2, and 1-for-2 swaps that grow
/// the matching without losing w2. Both weights are monotone over the
/// rounds; the search stops early once both ratios reach
/// 1 - quality_target.
pub fn nibble_matching(
    h: &AuxiliaryGraph,
    quality_target: f64,
    rounds: usize,
) -> (Vec<usize>, MatchingQuality) {
    let m = h.edge_count();
    let mut selected: Vec<usize> = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; h.n]; // vertex -> selected edge

    let conflicts = |set: &[Vertex], owner: &[Option<usize>]| -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().filter_map(|&v| owner[v]).collect();
        out.sort_unstable();
        out.dedup();
        out
    };

    // greedy in decreasing w2, ties by edge id
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(h.w2[i]), i));
    for &i in &order {
        if conflicts(&h.vertex_sets[i], &owner).is_empty() {
            for &v in &h.vertex_sets[i] {
                owner[v] = Some(i);
            }
            selected.push(i);
        }
    }

    let delta = h.max_degree().max(1);
    let target_w1 = h.w1_total() / delta as f64;
    let target_w2 = h.w2_total() / delta as f64;
    let quality = |selected: &[usize]| -> (f64, f64) {
        let w1 = selected.len() as f64;
        let w2: f64 = selected.iter().map(|&i| h.w2[i] as f64).sum();
        (
            if target_w1 > 0.0 { w1 / target_w1 } else { 1.0 },
            if target_w2 > 0.0 { w2 / target_w2 } else { 1.0 },
        )
    };

    for _ in 0..rounds {
        let (r1, r2) = quality(&selected);
        if r1 >= 1.0 - quality_target && r2 >= 1.0 - quality_target {
            break;
        }
        let mut improved = false;

        // additions
        for i in 0..m {
            if owner[h.vertex_sets[i][0]] == Some(i) {
                continue;
            }
            if conflicts(&h.vertex_sets[i], &owner).is_empty() {
                for &v in &h.vertex_sets[i] {
                    owner[v] = Some(i);
                }
                selected.push(i);
                improved = true;
            }
        }

        // swaps: candidates conflicting with exactly one selected edge
        let mut single_conflict: std::collections::BTreeMap<usize, Vec<usize>> =
            std::collections::BTreeMap::new();
        for i in 0..m {
            if selected.contains(&i) {
                continue;
            }
            let cs = conflicts(&h.vertex_sets[i], &owner);
            if cs.len() == 1 {
                single_conflict.entry(cs[0]).or_default().push(i);
            }
        }
        for (&e, cands) in &single_conflict {
            if !selected.contains(&e) {
                continue; // already swapped out this round
            }
            // 1-for-2: two disjoint candidates covering e's slot
            let mut applied = false;
            'pairs: for (ai, &p) in cands.iter().enumerate() {
                for &q in &cands[ai + 1..] {
                    let disjoint = h.vertex_sets[p]
                        .iter()
                        .all(|v| !h.vertex_sets[q].contains(v));
                    if disjoint && h.w2[p] + h.w2[q] >= h.w2[e] {
                        selected.retain(|&s| s != e);
                        for &v in &h.vertex_sets[e] {
                            owner[v] = None;
                        }
                        for &cand in &[p, q] {
                            if conflicts(&h.vertex_sets[cand], &owner).is_empty() {
                                for &v in &h.vertex_sets[cand] {
                                    owner[v] = Some(cand);
                                }
                                selected.push(cand);
                            }
                        }
                        improved = true;
                        applied = true;
                        break 'pairs;
                    }
                }
            }
            if applied {
                continue;
            }
            // 1-for-1 raising w2
            if let Some(&p) = cands.iter().find(|&&p| h.w2[p] > h.w2[e]) {
                selected.retain(|&s| s != e);
                for &v in &h.vertex_sets[e] {
                    owner[v] = None;
                }
                if conflicts(&h.vertex_sets[p], &owner).is_empty() {
                    for &v in &h.vertex_sets[p] {
                        owner[v] = Some(p);
                    }
                    selected.push(p);
                    improved = true;
                } else {
                    // put e back; the swap was stale
                    for &v in &h.vertex_sets[e] {
                        owner[v] = Some(e);
                    }
                    selected.push(e);
                }
            }
        }

        if !improved {
            break;
        }
    }

    selected.sort_unstable();
    let (ratio_w1, ratio_w2) = quality(&selected);
    (
        selected,
        MatchingQuality {
            ratio_w1,
            ratio_w2,
            max_degree: delta,
        },
    )
}

/// Vertex-disjoint tight paths of a common order, plus the vertices none of
/// them covers.
#[derive(Debug, Clone)]
pub struct PathForest {
    pub paths: Vec<TightPath>,
    pub uncovered: Vec<Vertex>,
}

/// Diagnostics reported alongside a path forest.
#[derive(Debug, Clone, Serialize)]
pub struct ForestDiagnostics {
    pub samples: usize,
    pub dropped_collisions: usize,
    pub auxiliary_edges: usize,
    pub quality: MatchingQuality,
    pub mu_out: f64,
    pub gadgets_used: usize,
    pub uncovered_count: usize,
}

/// The forest pipeline: discrepant fractional matching, path sampling,
/// auxiliary graph, matching surrogate. Returns the forest, the majority
/// colour, the total majority-edge count over the forest, and diagnostics.
pub fn path_forest(
    g: &Hypergraph,
    c: &Colouring,
    epsilon: f64,
    ledger: &Ledger,
    seed: u64,
) -> Result<(PathForest, usize, usize, ForestDiagnostics)> {
    let t = ledger.t;
    if t < g.k() {
        return Err(Error::input(format!("path order t={t} below k={}", g.k())));
    }
    if t > g.n() {
        return Err(Error::input(format!(
            "path order t={t} exceeds the host's {} vertices",
            g.n()
        )));
    }
    let disc = discrepant_pfm(g, c, epsilon, ledger, seed)?;
    let sampler = WalkSampler::new(g, &disc.matching)?;
    let n_samples = ledger.sample_count(g.n());
    let mut rng = stream_rng(seed, 0x70617468); // "path"
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        samples.push(sampler.sample_tight_path(t, ledger.sample_max_attempts, &mut rng)?);
    }
    let aux = build_auxiliary(g, &samples, c, disc.majority)?;
    let (selected, quality) = nibble_matching(&aux, ledger.nibble_quality, ledger.nibble_rounds);

    let mut covered = vec![false; g.n()];
    let mut paths = Vec::with_capacity(selected.len());
    let mut red_count = 0usize;
    for &i in &selected {
        for &v in &aux.vertex_sets[i] {
            covered[v] = true;
        }
        red_count += aux.w2[i];
        paths.push(aux.paths[i].clone());
    }
    let uncovered: Vec<Vertex> = (0..g.n()).filter(|&v| !covered[v]).collect();
    let diagnostics = ForestDiagnostics {
        samples: n_samples,
        dropped_collisions: aux.dropped,
        auxiliary_edges: aux.edge_count(),
        quality,
        mu_out: disc.mu_out,
        gadgets_used: disc.gadgets.len(),
        uncovered_count: uncovered.len(),
    };
    Ok((PathForest { paths, uncovered }, disc.majority, red_count, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_complete, gen_split_colouring};
    use crate::util::binomial;

    fn sampled(host: &Hypergraph, v: &[Vertex]) -> SampledPath {
        SampledPath {
            path: TightPath::new(host, v.to_vec()).unwrap(),
            attempts: 1,
        }
    }

    #[test]
    fn collision_pairs_are_both_dropped() {
        let g = gen_complete(10, 3).unwrap();
        let c = Colouring::from_fn(&g, 2, |_| 0).unwrap();
        let samples = vec![
            sampled(&g, &[0, 1, 2, 3]),
            sampled(&g, &[3, 2, 1, 0]), // same vertex set, other orientation
            sampled(&g, &[4, 5, 6, 7]),
        ];
        let aux = build_auxiliary(&g, &samples, &c, 0).unwrap();
        assert_eq!(aux.edge_count(), 1);
        assert_eq!(aux.dropped, 2);
        assert_eq!(aux.vertex_sets[0], vec![4, 5, 6, 7]);
    }

    #[test]
    fn disjoint_samples_all_survive_with_full_w2() {
        let g = gen_complete(12, 3).unwrap();
        let c = Colouring::from_fn(&g, 2, |_| 0).unwrap();
        let samples = vec![
            sampled(&g, &[0, 1, 2, 3, 4]),
            sampled(&g, &[5, 6, 7, 8, 9]),
        ];
        let aux = build_auxiliary(&g, &samples, &c, 0).unwrap();
        assert_eq!(aux.edge_count(), 2);
        assert_eq!(aux.dropped, 0);
        // an all-red path of order 5 has t - k + 1 = 3 red edges
        assert_eq!(aux.w2, vec![3, 3]);
    }

    #[test]
    fn nibble_on_degenerate_and_prematched_inputs() {
        let g = gen_complete(10, 3).unwrap();
        let c = Colouring::from_fn(&g, 2, |_| 0).unwrap();

        // single edge: selected, ratio reported against delta = 1
        let aux = build_auxiliary(&g, &[sampled(&g, &[0, 1, 2, 3])], &c, 0).unwrap();
        let (selected, q) = nibble_matching(&aux, 0.5, 10);
        assert_eq!(selected, vec![0]);
        assert_eq!(q.max_degree, 1);
        assert_eq!(q.ratio_w1, 1.0);

        // an input that is already a perfect matching: everything selected,
        // w(M) = w(E)
        let samples = vec![sampled(&g, &[0, 1, 2, 3, 4]), sampled(&g, &[5, 6, 7, 8, 9])];
        let aux = build_auxiliary(&g, &samples, &c, 0).unwrap();
        let (selected, q) = nibble_matching(&aux, 0.5, 10);
        assert_eq!(selected.len(), 2);
        // delta = 1 and w_i(M) = w_i(E), so both ratios sit at exactly 1
        assert_eq!(q.ratio_w1, 1.0);
        assert_eq!(q.ratio_w2, 1.0);
    }

    #[test]
    fn nibble_prefers_heavy_paths_and_stays_disjoint() {
        let g = gen_complete(9, 3).unwrap();
        // red iff the edge avoids vertex 8
        let c = Colouring::from_fn(&g, 2, |e| usize::from(e.contains(&8))).unwrap();
        let heavy = sampled(&g, &[0, 1, 2, 3]); // 2 red edges
        let light = sampled(&g, &[2, 3, 4, 8]); // overlaps heavy, 0 red
        let other = sampled(&g, &[4, 5, 6, 7]); // disjoint, 2 red
        let aux = build_auxiliary(&g, &[light, heavy, other], &c, 0).unwrap();
        let (selected, _) = nibble_matching(&aux, 0.0, 50);
        let picked: Vec<Vec<Vertex>> = selected.iter().map(|&i| aux.vertex_sets[i].clone()).collect();
        assert!(picked.contains(&vec![0, 1, 2, 3]));
        assert!(picked.contains(&vec![4, 5, 6, 7]));
        assert_eq!(selected.len(), 2);
    }

    #[test]
    fn local_search_grows_coverage_monotonically() {
        // a planted scenario where greedy picks a blocking heavy path and
        // the 1-for-2 swap recovers both replacements
        let g = gen_complete(8, 3).unwrap();
        let c = Colouring::from_fn(&g, 2, |_| 0).unwrap();
        let blocker = sampled(&g, &[2, 3, 4, 5]);
        let left = sampled(&g, &[0, 1, 2, 3]);
        let right = sampled(&g, &[4, 5, 6, 7]);
        let aux = build_auxiliary(&g, &[blocker, left, right], &c, 0).unwrap();
        let (selected, q) = nibble_matching(&aux, 0.0, 50);
        assert_eq!(selected.len(), 2, "swap should free both sides");
        assert!(q.ratio_w1 >= 1.0);
    }

    #[test]
    fn nibble_reaches_the_coverage_bound_at_n30() {
        let ledger = Ledger {
            t: 8,
            sample_base: 3000,
            sample_per_n: 0,
            ..Ledger::default()
        };
        let g = gen_complete(30, 3).unwrap();
        let c = gen_split_colouring(&g, &(0..15).collect::<Vec<_>>()).unwrap();
        let need = (1.0 - ledger.beta) * 30.0 / ledger.t as f64;
        for seed in 0..5u64 {
            let (forest, _, _, _) = path_forest(&g, &c, 0.1, &ledger, seed).unwrap();
            assert!(
                forest.paths.len() as f64 >= need,
                "seed {seed}: |M| = {} below {need:.2}",
                forest.paths.len()
            );
        }
    }

    #[test]
    fn forest_on_split_host_covers_most_vertices() {
        let ledger = Ledger {
            t: 6,
            ..Ledger::default()
        };
        let g = gen_complete(24, 3).unwrap();
        let c = gen_split_colouring(&g, &(0..12).collect::<Vec<_>>()).unwrap();
        let (forest, majority, red_count, diag) =
            path_forest(&g, &c, 0.1, &ledger, 5).unwrap();
        assert_eq!(majority, 1); // blue dominates the split colouring
        // disjointness and tightness are type invariants; check coverage
        let covered: usize = forest.paths.iter().map(|p| p.order()).sum();
        assert_eq!(covered + forest.uncovered.len(), 24);
        assert!(
            forest.uncovered.len() as f64 <= ledger.beta * 24.0,
            "uncovered {} of 24",
            forest.uncovered.len()
        );
        assert!(red_count > 0);
        assert_eq!(diag.uncovered_count, forest.uncovered.len());
        let audit = crate::verify::verify_forest(
            &g,
            &c,
            &forest.paths.iter().map(|p| p.vertices().to_vec()).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(audit.counts[majority], red_count);
        let _ = binomial(24, 3);
    }
}
