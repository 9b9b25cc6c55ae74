//! The full cycle pipeline: reserve a random vertex set, build a path
//! forest on the rest, connect consecutive forest paths through the
//! reservoir, and close the cycle with a spanning connection over the
//! leftover vertices. Forest edges survive into the cycle, so the cycle
//! inherits the forest's majority-colour count.

mod connector;
mod forest;

pub use connector::{connect, spanning_connect};
pub use forest::{
    build_auxiliary, nibble_matching, path_forest, AuxiliaryGraph, ForestDiagnostics,
    MatchingQuality, PathForest,
};

use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::config::Ledger;
use crate::error::{Error, Result};
use crate::hypergraph::{Colouring, HamiltonCycle, Hypergraph, TightPath, Vertex};
use crate::util::{derived_seed, stream_rng};

/// Everything the pipeline needs besides the instance: the desk-scale
/// ledger and the master seed.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineParams {
    pub ledger: Ledger,
    pub seed: u64,
}

impl PipelineParams {
    pub fn new(ledger: Ledger, seed: u64) -> Result<Self> {
        if !(ledger.epsilon > 0.0 && ledger.epsilon < 1.0) {
            return Err(Error::input(format!("epsilon={} not in (0,1)", ledger.epsilon)));
        }
        if !(ledger.beta > 0.0 && ledger.beta < 1.0) {
            return Err(Error::input(format!("beta={} not in (0,1)", ledger.beta)));
        }
        if !(ledger.mu_reserve > 0.0 && ledger.mu_reserve < 1.0) {
            return Err(Error::input(format!(
                "mu_reserve={} not in (0,1)",
                ledger.mu_reserve
            )));
        }
        Ok(PipelineParams { ledger, seed })
    }
}

/// Timing of one pipeline stage. Wall-clock values are reporting-only and
/// excluded from determinism comparisons.
#[derive(Debug, Clone, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub millis: u128,
}

/// Machine-readable run report; `schema_version` tracks the JSON layout.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub seed: u64,
    pub params: Ledger,
    pub retries: usize,
    pub stages: Vec<StageTiming>,
    pub colour_counts: Vec<usize>,
    pub majority: usize,
    pub surplus: f64,
    pub scaled_discrepancy: f64,
    pub forest: ForestDiagnostics,
    pub reservoir_size: usize,
    pub cycle: Vec<Vertex>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A verified cycle with its colour audit and run report.
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub cycle: HamiltonCycle,
    pub colour_counts: Vec<usize>,
    pub majority: usize,
    pub surplus: f64,
    pub report: RunReport,
}

struct AttemptOutcome {
    cycle: HamiltonCycle,
    forest_diag: ForestDiagnostics,
    reservoir_size: usize,
    stages: Vec<StageTiming>,
}

/// Builds a tight Hamilton cycle whose majority colour count inherits the
/// path forest's discrepancy. Stage failures (an unlucky reservoir, a
/// failed connection or closure) trigger full retries with derived seeds,
/// up to the ledger's retry budget.
pub fn hamilton_with_discrepancy(
    g: &Hypergraph,
    c: &Colouring,
    params: &PipelineParams,
) -> Result<PipelineOutcome> {
    let ledger = &params.ledger;
    let threshold = (0.5 + ledger.epsilon) * g.n() as f64;
    if (g.min_codegree()? as f64) < threshold {
        return Err(Error::input(format!(
            "host codegree {} below the (1/2+epsilon) n threshold {threshold:.2}",
            g.min_codegree()?
        )));
    }

    let mut last_error: Option<Error> = None;
    for attempt in 0..=ledger.pipeline_retries {
        let attempt_seed = derived_seed(params.seed, attempt as u64);
        match run_attempt(g, c, ledger, attempt_seed) {
            Ok(outcome) => {
                let counts = colour_counts(g, c, &outcome.cycle);
                let m: usize = counts.iter().sum();
                let (majority, &best) = counts
                    .iter()
                    .enumerate()
                    .max_by_key(|&(_, &cnt)| cnt)
                    .expect("colours present");
                let surplus = best as f64 - m as f64 / c.r() as f64;
                let report = RunReport {
                    schema_version: 1,
                    n: g.n(),
                    k: g.k(),
                    r: c.r(),
                    seed: params.seed,
                    params: ledger.clone(),
                    retries: attempt,
                    stages: outcome.stages,
                    colour_counts: counts.clone(),
                    majority,
                    surplus,
                    scaled_discrepancy: c.r() as f64 * surplus,
                    forest: outcome.forest_diag,
                    reservoir_size: outcome.reservoir_size,
                    cycle: outcome.cycle.vertices().to_vec(),
                };
                return Ok(PipelineOutcome {
                    cycle: outcome.cycle,
                    colour_counts: counts,
                    majority,
                    surplus,
                    report,
                });
            }
            Err(e) => {
                log::debug!("pipeline attempt {attempt} failed: {e}");
                last_error = Some(e);
            }
        }
    }
    Err(Error::Pipeline {
        retries: ledger.pipeline_retries,
        last: last_error.map_or_else(|| "no attempt ran".to_string(), |e| e.to_string()),
    })
}

fn colour_counts(g: &Hypergraph, c: &Colouring, cycle: &HamiltonCycle) -> Vec<usize> {
    let mut counts = vec![0usize; c.r()];
    for e in cycle.edge_sets(g.k()) {
        counts[c.colour(g.edge_id(&e).expect("cycle window is an edge"))] += 1;
    }
    counts
}

fn run_attempt(
    g: &Hypergraph,
    c: &Colouring,
    ledger: &Ledger,
    seed: u64,
) -> Result<AttemptOutcome> {
    let k = g.k();
    let n = g.n();
    let mut stages = Vec::new();

    // reservoir: each vertex independently with probability mu_reserve
    let clock = Instant::now();
    let mut rng = stream_rng(seed, 0x72657376); // "resv"
    let reservoir: Vec<Vertex> = (0..n)
        .filter(|_| rng.gen::<f64>() < ledger.mu_reserve)
        .collect();
    let keep: Vec<Vertex> = (0..n).filter(|v| !reservoir.contains(v)).collect();
    if keep.len() < ledger.t + k {
        return Err(Error::Pipeline {
            retries: 0,
            last: format!("reservoir {} leaves too few vertices", reservoir.len()),
        });
    }
    let (sub, new_to_old) = g.induced(&keep)?;
    let sub_threshold = (0.5 + ledger.epsilon / 2.0) * sub.n() as f64;
    if (sub.min_codegree()? as f64) < sub_threshold {
        return Err(Error::Pipeline {
            retries: 0,
            last: "reservoir broke the sub-host codegree".to_string(),
        });
    }
    let sub_c = c.induced_to(g, &sub, &new_to_old)?;
    stages.push(StageTiming {
        stage: "reserve".to_string(),
        millis: clock.elapsed().as_millis(),
    });

    // path forest on the sub-host, with the halved slack it retains
    let clock = Instant::now();
    let (forest, _majority, _red, diag) = path_forest(
        &sub,
        &sub_c,
        ledger.epsilon / 2.0,
        ledger,
        derived_seed(seed, 0x666f7265),
    )?;
    if forest.paths.is_empty() {
        return Err(Error::Pipeline {
            retries: 0,
            last: "path forest came back empty".to_string(),
        });
    }
    // map forest paths and leftovers back into host ids
    let paths: Vec<TightPath> = forest
        .paths
        .iter()
        .map(|p| {
            let mapped: Vec<Vertex> = p.vertices().iter().map(|&v| new_to_old[v]).collect();
            TightPath::new(g, mapped)
        })
        .collect::<Result<_>>()?;
    let mut pool: std::collections::BTreeSet<Vertex> = reservoir.iter().copied().collect();
    for &v in &forest.uncovered {
        pool.insert(new_to_old[v]);
    }
    stages.push(StageTiming {
        stage: "forest".to_string(),
        millis: clock.elapsed().as_millis(),
    });

    // connect consecutive paths through the reservoir
    let clock = Instant::now();
    let mut mega: Vec<Vertex> = paths[0].vertices().to_vec();
    for next in &paths[1..] {
        let tail_here = {
            let (_, tail) = TightPath::new(g, mega.clone())?.ends(k);
            tail
        };
        let (head_next, _) = next.ends(k);
        let pool_vec: Vec<Vertex> = pool.iter().copied().collect();
        let max_order = ledger
            .connect_max_order
            .min(2 * (k - 1) + pool_vec.len());
        let q = connect(
            g,
            &pool_vec,
            &tail_here.reversed(),
            &head_next.reversed(),
            max_order,
            ledger.connect_state_budget,
        )?;
        // interior vertices leave the pool
        for &v in &q.vertices()[k - 1..q.order() - (k - 1)] {
            pool.remove(&v);
        }
        mega.extend_from_slice(&q.vertices()[k - 1..]);
        mega.extend_from_slice(&next.vertices()[k - 1..]);
    }
    stages.push(StageTiming {
        stage: "connect".to_string(),
        millis: clock.elapsed().as_millis(),
    });

    // spanning closure over the leftover reservoir
    let clock = Instant::now();
    if pool.len() > ledger.spanning_ceiling {
        return Err(Error::Pipeline {
            retries: 0,
            last: format!(
                "closure pool of {} exceeds the ceiling {}",
                pool.len(),
                ledger.spanning_ceiling
            ),
        });
    }
    let mega_path = TightPath::new(g, mega.clone())?;
    let (head, tail) = mega_path.ends(k);
    let pool_vec: Vec<Vertex> = pool.iter().copied().collect();
    let closure = spanning_connect(
        g,
        &pool_vec,
        &head.reversed(),
        &tail.reversed(),
        ledger.spanning_node_budget,
    )?;
    // append the closure interior, reversed, to wrap the cycle
    let khop = k - 1;
    let interior = &closure.vertices()[khop..closure.order() - khop];
    mega.extend(interior.iter().rev());
    let cycle = HamiltonCycle::new(g, mega)?;
    stages.push(StageTiming {
        stage: "closure".to_string(),
        millis: clock.elapsed().as_millis(),
    });

    Ok(AttemptOutcome {
        cycle,
        forest_diag: diag,
        reservoir_size: reservoir.len(),
        stages,
    })
}

/// Splits a tight Hamilton cycle into the k perfect matchings formed by the
/// windows starting at positions congruent to j mod k. Requires k | n.
pub fn cycle_to_matchings(g: &Hypergraph, cycle: &HamiltonCycle) -> Result<Vec<Vec<Vec<Vertex>>>> {
    let k = g.k();
    let n = g.n();
    if !n.is_multiple_of(k) {
        return Err(Error::input(format!("k={k} does not divide n={n}")));
    }
    let windows = cycle.edge_sets(k);
    Ok((0..k)
        .map(|j| (0..n / k).map(|i| windows[j + i * k].clone()).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_complete, gen_split_colouring};
    use crate::verify::{verify_cycle, verify_matching};

    fn small_ledger() -> Ledger {
        Ledger {
            t: 6,
            sample_base: 2000,
            sample_per_n: 100,
            ..Ledger::default()
        }
    }

    #[test]
    fn monochromatic_complete_host_yields_a_cycle() {
        let g = gen_complete(18, 3).unwrap();
        let c = Colouring::from_fn(&g, 2, |_| 0).unwrap();
        let params = PipelineParams::new(small_ledger(), 11).unwrap();
        let out = hamilton_with_discrepancy(&g, &c, &params).unwrap();
        assert_eq!(out.colour_counts, vec![18, 0]);
        assert_eq!(out.majority, 0);
        assert_eq!(out.surplus, 9.0);
        let audit = verify_cycle(&g, &c, out.cycle.vertices()).unwrap();
        assert_eq!(audit.counts, out.colour_counts);
    }

    #[test]
    fn split_host_cycle_carries_discrepancy_and_counts_sum() {
        let g = gen_complete(24, 3).unwrap();
        let c = gen_split_colouring(&g, &(0..12).collect::<Vec<_>>()).unwrap();
        let params = PipelineParams::new(small_ledger(), 3).unwrap();
        let out = hamilton_with_discrepancy(&g, &c, &params).unwrap();
        assert_eq!(out.colour_counts.iter().sum::<usize>(), 24);
        let audit = verify_cycle(&g, &c, out.cycle.vertices()).unwrap();
        assert_eq!(audit.counts, out.colour_counts);
        assert!(out.surplus >= 2.0, "split cycles hold at least n/2+2 blue");
        assert_eq!(out.majority, 1);
    }

    #[test]
    fn pipeline_is_deterministic_per_seed() {
        let g = gen_complete(18, 3).unwrap();
        let c = gen_split_colouring(&g, &(0..9).collect::<Vec<_>>()).unwrap();
        let params = PipelineParams::new(small_ledger(), 42).unwrap();
        let a = hamilton_with_discrepancy(&g, &c, &params).unwrap();
        let b = hamilton_with_discrepancy(&g, &c, &params).unwrap();
        assert_eq!(a.cycle.vertices(), b.cycle.vertices());
        assert_eq!(a.colour_counts, b.colour_counts);

        let params2 = PipelineParams::new(small_ledger(), 43).unwrap();
        let c2 = hamilton_with_discrepancy(&g, &c, &params2).unwrap();
        // a different seed may give a different cycle; both verify
        assert_eq!(c2.colour_counts.iter().sum::<usize>(), 18);
    }

    #[test]
    fn decomposition_into_perfect_matchings() {
        let g = gen_complete(18, 3).unwrap();
        let c = gen_split_colouring(&g, &(0..9).collect::<Vec<_>>()).unwrap();
        let params = PipelineParams::new(small_ledger(), 7).unwrap();
        let out = hamilton_with_discrepancy(&g, &c, &params).unwrap();
        let matchings = cycle_to_matchings(&g, &out.cycle).unwrap();
        assert_eq!(matchings.len(), 3);
        let mut union: Vec<Vec<Vertex>> = Vec::new();
        for m in &matchings {
            assert_eq!(m.len(), 6);
            let report = verify_matching(&g, &c, m, true).unwrap();
            assert_eq!(report.perfect, Some(true));
            union.extend(m.iter().cloned());
        }
        union.sort();
        let mut cycle_edges = out.cycle.edge_sets(3);
        cycle_edges.sort();
        assert_eq!(union, cycle_edges);
    }

    #[test]
    fn decomposition_requires_divisibility() {
        let g = gen_complete(8, 3).unwrap();
        let cycle = HamiltonCycle::new(&g, (0..8).collect()).unwrap();
        assert!(cycle_to_matchings(&g, &cycle).is_err());
    }

    #[test]
    fn low_codegree_hosts_are_rejected() {
        let g = crate::instances::gen_random_dirac(12, 3, 0.3, 1).unwrap();
        let c = Colouring::from_fn(&g, 2, |_| 0).unwrap();
        let params = PipelineParams::new(small_ledger(), 1).unwrap();
        assert!(hamilton_with_discrepancy(&g, &c, &params).is_err());
    }
}
