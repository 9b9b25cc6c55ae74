//! Deterministic instance generators: complete hosts, random hosts densified
//! to a codegree target, split colourings, and the k=3 extremal family where
//! near-perfect matchings cannot have high discrepancy.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Colouring, Hypergraph, HypergraphBuilder, Vertex};
use crate::util::{for_each_subset, stream_rng};

const PRECOMPUTE_CAP: usize = 128;

/// Instance families the generator knows how to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Complete host with a seeded uniform random colouring.
    Complete,
    /// Random host (each k-set kept with probability p), densified to meet
    /// the codegree target, with a seeded uniform random colouring.
    RandomDirac,
    /// Complete host, 2-coloured: blue iff the edge meets the split set A.
    SplitColour,
    /// The k=3 extremal family: edges meeting both sides of an equipartition,
    /// red iff the edge has two vertices on the A side.
    NearPerfectExtremal,
}

/// Full description of a generated instance; every generator is a pure
/// function of this.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub seed: u64,
    /// Edge probability for the random family.
    pub p: f64,
    /// Size of the split set A (the first `a_size` vertices).
    pub a_size: usize,
    /// Codegree slack used by the densifier: target (1/2 + epsilon) n.
    pub epsilon: f64,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < self.k {
            return Err(Error::input(format!("n={} below k={}", self.n, self.k)));
        }
        if self.k < 2 {
            return Err(Error::input("k must be >= 2".to_string()));
        }
        if self.r < 2 {
            return Err(Error::input("r must be >= 2".to_string()));
        }
        match self.family {
            Family::RandomDirac => {
                if !(self.p > 0.0 && self.p <= 1.0) {
                    return Err(Error::input(format!("edge probability p={} not in (0,1]", self.p)));
                }
            }
            Family::SplitColour => {
                if self.a_size > self.n {
                    return Err(Error::input(format!(
                        "split set size {} exceeds n={}",
                        self.a_size, self.n
                    )));
                }
            }
            Family::NearPerfectExtremal => {
                if self.k != 3 {
                    return Err(Error::input("extremal family is defined for k=3".to_string()));
                }
                if !self.n.is_multiple_of(2) || self.n < 6 {
                    return Err(Error::input(format!("extremal family needs even n >= 6, got {}", self.n)));
                }
            }
            Family::Complete => {}
        }
        Ok(())
    }

    /// Builds the instance. Deterministic in the spec, seed included.
    pub fn generate(&self) -> Result<(Hypergraph, Colouring)> {
        self.validate()?;
        match self.family {
            Family::Complete => {
                let g = gen_complete(self.n, self.k)?;
                let c = random_colouring(&g, self.r, self.seed);
                Ok((g, c))
            }
            Family::RandomDirac => {
                let raw = gen_random_dirac(self.n, self.k, self.p, self.seed)?;
                let target = ((0.5 + self.epsilon) * self.n as f64).ceil() as usize;
                let g = densify_to_codegree(&raw, target)?;
                let c = random_colouring(&g, self.r, self.seed);
                Ok((g, c))
            }
            Family::SplitColour => {
                let g = gen_complete(self.n, self.k)?;
                let a: Vec<Vertex> = (0..self.a_size).collect();
                let c = gen_split_colouring(&g, &a)?;
                Ok((g, c))
            }
            Family::NearPerfectExtremal => gen_near_perfect_extremal(self.n),
        }
    }
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            family: Family::Complete,
            n: 24,
            k: 3,
            r: 2,
            seed: 0,
            p: 0.9,
            a_size: 12,
            epsilon: 0.1,
        }
    }
}

/// The complete n-vertex k-graph.
pub fn gen_complete(n: usize, k: usize) -> Result<Hypergraph> {
    if n < k {
        return Err(Error::input(format!("gen_complete needs n >= k, got n={n} k={k}")));
    }
    let mut builder = HypergraphBuilder::new(n, k)?;
    for_each_subset(n, k, |e| {
        builder.add_edge(e).expect("subset is a valid edge");
        true
    });
    Ok(builder.freeze(PRECOMPUTE_CAP))
}

/// Random host: each k-set kept independently with probability p. The caller
/// is responsible for checking the codegree and densifying if needed.
pub fn gen_random_dirac(n: usize, k: usize, p: f64, seed: u64) -> Result<Hypergraph> {
    if n < k {
        return Err(Error::input(format!("gen_random_dirac needs n >= k, got n={n} k={k}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::input(format!("edge probability p={p} not in (0,1]")));
    }
    let mut rng = stream_rng(seed, 0x0064_6972_6163); // "dirac"
    let mut builder = HypergraphBuilder::new(n, k)?;
    for_each_subset(n, k, |e| {
        if rng.gen::<f64>() < p {
            builder.add_edge(e).expect("subset is a valid edge");
        }
        true
    });
    Ok(builder.freeze(PRECOMPUTE_CAP))
}

/// Adds the lexicographically least missing edges at deficient (k-1)-sets
/// until every (k-1)-set has degree at least `target`. Deterministic; never
/// rejects.
pub fn densify_to_codegree(g: &Hypergraph, target: usize) -> Result<Hypergraph> {
    let n = g.n();
    let k = g.k();
    if target > n - k + 1 {
        return Err(Error::input(format!(
            "codegree target {target} unreachable: complete host attains {}",
            n - k + 1
        )));
    }
    let mut builder = HypergraphBuilder::new(n, k)?;
    for e in g.edges() {
        builder.add_edge(e)?;
    }
    for_each_subset(n, k - 1, |s| {
        let mut degree = 0usize;
        let mut missing: Vec<Vec<Vertex>> = Vec::new();
        for v in 0..n {
            if s.contains(&v) {
                continue;
            }
            let mut e = s.to_vec();
            e.push(v);
            e.sort_unstable();
            if builder.contains(&e) {
                degree += 1;
            } else {
                missing.push(e);
            }
        }
        // missing is generated in ascending v order; completions sorted by
        // the completing vertex, which is the lexicographic-least rule here
        let mut it = missing.into_iter();
        while degree < target {
            let e = it.next().expect("target is reachable");
            builder.add_edge(&e).expect("validated edge");
            degree += 1;
        }
        true
    });
    Ok(builder.freeze(PRECOMPUTE_CAP))
}

/// Blue iff the edge intersects A, red otherwise (red = colour 0).
pub fn gen_split_colouring(g: &Hypergraph, a: &[Vertex]) -> Result<Colouring> {
    for &v in a {
        if v >= g.n() {
            return Err(Error::input(format!("split vertex {v} out of range 0..{}", g.n())));
        }
    }
    let mut in_a = vec![false; g.n()];
    for &v in a {
        in_a[v] = true;
    }
    Colouring::from_fn(g, 2, |e| usize::from(e.iter().any(|&v| in_a[v])))
}

/// The k=3 extremal instance: equipartition V = A + B, edges are the triples
/// meeting both sides, red (colour 0) iff |e intersect A| = 2.
pub fn gen_near_perfect_extremal(n: usize) -> Result<(Hypergraph, Colouring)> {
    if !n.is_multiple_of(2) || n < 6 {
        return Err(Error::input(format!("extremal family needs even n >= 6, got {n}")));
    }
    let half = n / 2;
    let mut builder = HypergraphBuilder::new(n, 3)?;
    for_each_subset(n, 3, |e| {
        let in_a = e.iter().filter(|&&v| v < half).count();
        if in_a == 1 || in_a == 2 {
            builder.add_edge(e).expect("valid edge");
        }
        true
    });
    let g = builder.freeze(PRECOMPUTE_CAP);
    let c = Colouring::from_fn(&g, 2, |e| {
        let in_a = e.iter().filter(|&&v| v < half).count();
        usize::from(in_a != 2)
    })?;
    Ok((g, c))
}

/// Seeded uniform random r-colouring.
pub fn random_colouring(g: &Hypergraph, r: usize, seed: u64) -> Colouring {
    let mut rng = stream_rng(seed, 0x636f_6c6f_7572); // "colour"
    let by_edge = (0..g.edge_count()).map(|_| rng.gen_range(0..r)).collect();
    Colouring::new(g, r, by_edge).expect("colours drawn in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::binomial;

    #[test]
    fn complete_edge_counts() {
        assert_eq!(gen_complete(4, 3).unwrap().edge_count(), 4);
        assert_eq!(gen_complete(5, 3).unwrap().edge_count(), 10);
        assert_eq!(gen_complete(3, 3).unwrap().edge_count(), 1);
        assert!(gen_complete(2, 3).is_err());
    }

    #[test]
    fn random_dirac_p_one_is_complete() {
        let g = gen_random_dirac(7, 3, 1.0, 5).unwrap();
        assert_eq!(g.edge_count(), binomial(7, 3) as usize);
    }

    #[test]
    fn random_dirac_deterministic() {
        let a = gen_random_dirac(20, 3, 0.9, 99).unwrap();
        let b = gen_random_dirac(20, 3, 0.9, 99).unwrap();
        assert_eq!(a.edges(), b.edges());
        // exhaustive scan oracle for the codegree of the seeded instance
        let mut min_seen = usize::MAX;
        a.for_each_codegree_set(|_, d| {
            min_seen = min_seen.min(d);
            true
        });
        assert_eq!(a.min_codegree().unwrap(), min_seen);
    }

    #[test]
    fn densify_reaches_target() {
        let raw = gen_random_dirac(12, 3, 0.3, 7).unwrap();
        let g = densify_to_codegree(&raw, 7).unwrap();
        assert!(g.min_codegree().unwrap() >= 7);
        // original edges kept
        for e in raw.edges() {
            assert!(g.has_edge(e));
        }
        assert!(densify_to_codegree(&raw, 11).is_err());
    }

    #[test]
    fn split_colouring_examples() {
        let g = gen_complete(5, 3).unwrap();
        let all_red = gen_split_colouring(&g, &[]).unwrap();
        assert_eq!(all_red.class_sizes(), vec![10, 0]);

        let all: Vec<usize> = (0..5).collect();
        let all_blue = gen_split_colouring(&g, &all).unwrap();
        assert_eq!(all_blue.class_sizes(), vec![0, 10]);

        let one = gen_split_colouring(&g, &[0]).unwrap();
        // exactly C(4,2) = 6 edges pass through vertex 0
        assert_eq!(one.class_sizes(), vec![4, 6]);

        assert!(gen_split_colouring(&g, &[7]).is_err());
    }

    #[test]
    fn extremal_structure_at_n6() {
        let (g, c) = gen_near_perfect_extremal(6).unwrap();
        // brute-force enumeration oracle: triples meeting both halves of
        // {0,1,2} | {3,4,5}, split by |e cap A|
        let mut total = 0;
        let mut red = 0;
        let mut blue = 0;
        for_each_subset(6, 3, |e| {
            let in_a = e.iter().filter(|&&v| v < 3).count();
            if in_a == 1 || in_a == 2 {
                total += 1;
                if in_a == 2 {
                    red += 1;
                } else {
                    blue += 1;
                }
            }
            true
        });
        assert_eq!((total, red, blue), (18, 9, 9));
        assert_eq!(g.edge_count(), total);
        assert_eq!(c.class_sizes(), vec![red, blue]);

        // no triple inside A or inside B is an edge
        assert!(!g.has_edge(&[0, 1, 2]));
        assert!(!g.has_edge(&[3, 4, 5]));
        assert!(gen_near_perfect_extremal(7).is_err());
    }

    #[test]
    fn genspec_families_deterministic() {
        for family in [
            Family::Complete,
            Family::RandomDirac,
            Family::SplitColour,
            Family::NearPerfectExtremal,
        ] {
            let spec = GenSpec {
                family,
                n: 12,
                seed: 3,
                a_size: 6,
                ..GenSpec::default()
            };
            let (g1, c1) = spec.generate().unwrap();
            let (g2, c2) = spec.generate().unwrap();
            assert_eq!(g1.edges(), g2.edges());
            assert_eq!(c1.by_edge(), c2.by_edge());
        }
    }
}
