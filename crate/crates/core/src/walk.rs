//! The fractional-matching random walk on ordered (k-1)-tuples and the
//! rejection sampler for self-avoiding tight paths.
//!
//! The walk starts from an ordered (k-1)-tuple drawn proportionally to the
//! matching's subset weights (the closed-form normaliser is (k-1)! n) and
//! extends by one vertex at a time with probability x(Z + v) / x(Z), where Z
//! is the current tuple. Visited vertices are uniform over the host and the
//! i-th edge appears with probability (k/n) x(e), which is what makes the
//! sampled paths carry the matching's colour discrepancy.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fractional::FractionalMatching;
use crate::hypergraph::{Colouring, Hypergraph, TightPath, Vertex};

/// A tight path drawn from the conditioned walk law, with the number of
/// rejection attempts it cost.
#[derive(Debug, Clone)]
pub struct SampledPath {
    pub path: TightPath,
    pub attempts: usize,
}

/// Sampler for the walk induced by a normal perfect fractional matching.
pub struct WalkSampler<'a> {
    host: &'a Hypergraph,
    x: &'a FractionalMatching,
    /// Unordered (k-1)-sets with positive subset weight, with cumulative
    /// weights for the initial draw. The unordered mass of S is x(S)/n.
    init_cumulative: Vec<(Vec<Vertex>, f64)>,
    init_total: f64,
}

impl<'a> WalkSampler<'a> {
    pub fn new(host: &'a Hypergraph, x: &'a FractionalMatching) -> Result<Self> {
        if x.weights().iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::input("matching weights must be finite and nonnegative".to_string()));
        }
        let mut init_cumulative = Vec::new();
        let mut acc = 0.0f64;
        let mut dead: Option<Vec<Vertex>> = None;
        host.for_each_codegree_set(|s, _| {
            let w = x.subset_weight(host, s).expect("valid subset");
            if w > 0.0 {
                if host.extensions(s).iter().all(|&(_, id)| x.weight(id) <= 0.0) {
                    dead = Some(s.to_vec());
                    return false;
                }
                acc += w;
                init_cumulative.push((s.to_vec(), acc));
            }
            true
        });
        if let Some(prefix) = dead {
            return Err(Error::DeadState { prefix });
        }
        if init_cumulative.is_empty() {
            return Err(Error::input("matching carries no weight to walk on".to_string()));
        }
        Ok(WalkSampler {
            host,
            x,
            init_cumulative,
            init_total: acc,
        })
    }

    pub fn host(&self) -> &Hypergraph {
        self.host
    }

    /// The initial-distribution normaliser (k-1)! n.
    pub fn initial_denominator(&self) -> f64 {
        let k = self.host.k();
        (1..k).map(|i| i as f64).product::<f64>() * self.host.n() as f64
    }

    /// The full initial distribution over ordered (k-1)-tuples of positive
    /// probability, in lexicographic tuple order. Probabilities sum to 1.
    pub fn initial_distribution(&self) -> Vec<(Vec<Vertex>, f64)> {
        let denom = self.initial_denominator();
        let mut out = Vec::new();
        for (set, _) in &self.init_cumulative {
            let weight = self.x.subset_weight(self.host, set).expect("valid subset");
            for perm in crate::grids::permutations(set) {
                out.push((perm, weight / denom));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Initial probability of one ordered tuple.
    pub fn pi(&self, tuple: &[Vertex]) -> Result<f64> {
        let mut set = tuple.to_vec();
        set.sort_unstable();
        Ok(self.x.subset_weight(self.host, &set)? / self.initial_denominator())
    }

    /// Transition distribution out of an ordered tuple, as ascending
    /// (vertex, probability) pairs. Vertices of the tuple itself have
    /// probability zero and are omitted.
    pub fn transition(&self, tuple: &[Vertex]) -> Result<Vec<(Vertex, f64)>> {
        let mut set = tuple.to_vec();
        set.sort_unstable();
        let exts = self.host.extensions(&set);
        let total: f64 = exts.iter().map(|&(_, id)| self.x.weight(id)).sum();
        if total <= 0.0 {
            return Err(Error::DeadState {
                prefix: tuple.to_vec(),
            });
        }
        Ok(exts
            .into_iter()
            .map(|(v, id)| (v, self.x.weight(id) / total))
            .collect())
    }

    /// Runs the walk for `t` steps and returns the visited vertices, which
    /// may repeat. Deterministic given the RNG state.
    pub fn sample_walk(&self, t: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vertex>> {
        let k = self.host.k();
        if t + 1 < k {
            return Err(Error::input(format!("walk length {t} below k-1 = {}", k - 1)));
        }
        let mut out = self.draw_initial(rng);
        while out.len() < t {
            let z = &out[out.len() - (k - 1)..];
            let mut zset = z.to_vec();
            zset.sort_unstable();
            let exts = self.host.extensions(&zset);
            let total: f64 = exts.iter().map(|&(_, id)| self.x.weight(id)).sum();
            if total <= 0.0 {
                return Err(Error::DeadState { prefix: out });
            }
            let mut u = rng.gen::<f64>() * total;
            let mut chosen = None;
            for &(v, id) in &exts {
                let w = self.x.weight(id);
                if w <= 0.0 {
                    continue;
                }
                if u < w {
                    chosen = Some(v);
                    break;
                }
                u -= w;
            }
            let v = chosen.unwrap_or_else(|| {
                // float tail: fall back to the last positive-weight candidate
                exts.iter()
                    .rev()
                    .find(|&&(_, id)| self.x.weight(id) > 0.0)
                    .map(|&(v, _)| v)
                    .expect("total > 0")
            });
            out.push(v);
        }
        Ok(out)
    }

    fn draw_initial(&self, rng: &mut ChaCha8Rng) -> Vec<Vertex> {
        let u = rng.gen::<f64>() * self.init_total;
        let idx = match self
            .init_cumulative
            .binary_search_by(|(_, acc)| acc.partial_cmp(&u).expect("finite"))
        {
            Ok(i) => (i + 1).min(self.init_cumulative.len() - 1),
            Err(i) => i.min(self.init_cumulative.len() - 1),
        };
        let mut tuple = self.init_cumulative[idx].0.clone();
        tuple.shuffle(rng);
        tuple
    }

    /// Rejection sampling from the walk law conditioned on self-avoidance:
    /// walks are redrawn until the first `t` vertices are pairwise distinct.
    /// The returned path is in canonical orientation (lexicographically
    /// smaller end first) since paths are undirected.
    pub fn sample_tight_path(
        &self,
        t: usize,
        max_attempts: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<SampledPath> {
        if max_attempts < 1 {
            return Err(Error::input("max_attempts must be >= 1".to_string()));
        }
        for attempt in 1..=max_attempts {
            let walk = self.sample_walk(t, rng)?;
            let mut sorted = walk.clone();
            sorted.sort_unstable();
            if sorted.windows(2).all(|w| w[0] != w[1]) {
                let reversed: Vec<Vertex> = walk.iter().rev().copied().collect();
                let vertices = if reversed < walk { reversed } else { walk };
                let path = TightPath::new(self.host, vertices)?;
                return Ok(SampledPath {
                    path,
                    attempts: attempt,
                });
            }
        }
        Err(Error::SamplingBudget {
            order: t,
            max_attempts,
        })
    }
}

/// Empirical mean of the majority-colour edge count over `samples` accepted
/// paths of order `t`.
#[allow(clippy::too_many_arguments)]
pub fn red_edge_expectation_audit(
    host: &Hypergraph,
    x: &FractionalMatching,
    c: &Colouring,
    red: usize,
    t: usize,
    samples: usize,
    max_attempts: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    if red >= c.r() {
        return Err(Error::input(format!("colour {red} out of range 0..{}", c.r())));
    }
    let sampler = WalkSampler::new(host, x)?;
    let k = host.k();
    let mut total = 0usize;
    for _ in 0..samples {
        let sampled = sampler.sample_tight_path(t, max_attempts, rng)?;
        total += sampled
            .path
            .edge_sets(k)
            .iter()
            .filter(|e| c.colour(host.edge_id(e).expect("window is an edge")) == red)
            .count();
    }
    Ok(total as f64 / samples as f64)
}
