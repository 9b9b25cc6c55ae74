//! The desk-scale parameter ledger.
//!
//! The existence results behind the pipeline hold "for sufficiently large n"
//! with constants buried in asymptotic chains. At the instance sizes this
//! crate targets (n in the tens), those constants have no derivable values,
//! so every knob is an explicit field here with a documented default. The
//! ledger can be overridden from a plain-text `key=value` file.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    /// Codegree slack: hosts are expected to satisfy delta(G) >= (1/2+epsilon)n.
    pub epsilon: f64,
    /// Normality parameter requested from the fractional matching solver.
    pub mu0: f64,
    /// Vertex-sum tolerance for perfect fractional matchings.
    pub tol_pfm: f64,
    /// Iteration cap for the alternating-projection feasibility solver.
    pub pocs_max_iters: usize,
    /// Cleaning threshold: post-clean per-colour degrees are 0 or >= t_clean.
    pub t_clean: usize,
    /// Fraction of (k-1)-sets allowed below the codegree threshold when a
    /// gadget search is invoked (allowance = deficient_allowance * n^(k-1)).
    pub deficient_allowance: f64,
    /// Eta knob behind the bad-set intersection caps cap_j = sqrt(eta) * n^(k-1-j).
    pub caps_eta: f64,
    /// Number of edge-disjoint gadgets the booster asks for.
    pub gadget_target: usize,
    /// Monochromatic threshold: a minority class of at most
    /// mono_fraction * n^k edges counts as almost monochromatic.
    pub mono_fraction: f64,
    /// Randomized grid-assembly attempts before the exhaustive fallback.
    pub grid_attempts: usize,
    /// Ceiling on the worst-case exhaustive grid search size C(n,u^2)*(u^2)!.
    pub grid_exhaustive_ceiling: f64,
    /// Weight shift per gadget as a fraction of the lower normality bound.
    pub delta_w_factor: f64,
    /// Per-vertex inclusion probability of the connection reservoir.
    pub mu_reserve: f64,
    /// Order of the sampled tight paths.
    pub t: usize,
    /// Allowed uncovered fraction after the path forest stage.
    pub beta: f64,
    /// Path sample count: samples = sample_base + sample_per_n * n.
    pub sample_base: usize,
    pub sample_per_n: usize,
    /// Rejection-sampler attempt cap per accepted path.
    pub sample_max_attempts: usize,
    /// Matching-quality target: local search may stop once both weight
    /// ratios w_i(M) / (w_i(E)/Delta) reach 1 - nibble_quality.
    pub nibble_quality: f64,
    /// Local-search round cap for the matching surrogate.
    pub nibble_rounds: usize,
    /// Connector order cap (the bounded-length connecting lemma's 2k/eps^2,
    /// clamped by the available pool at call time).
    pub connect_max_order: usize,
    /// Explored-state budget for the connector search.
    pub connect_state_budget: usize,
    /// Largest pool the spanning closure will attempt.
    pub spanning_ceiling: usize,
    /// Node budget for the spanning backtracking search.
    pub spanning_node_budget: usize,
    /// Full-pipeline retries before giving up.
    pub pipeline_retries: usize,
    /// Acceptance discrepancy target as a fraction of n.
    pub disc_target_factor: f64,
    /// Slack (in edges) granted to the sampled red-edge expectation audit
    /// against its (1 + mu_out)/r * (t - k + 1) baseline.
    pub audit_slack: f64,
    /// Precompute the (k-1)-set degree index for hosts up to this many vertices.
    pub precompute_cap: usize,
}

impl Default for Ledger {
    fn default() -> Self {
        Ledger {
            epsilon: 0.1,
            mu0: 0.2,
            tol_pfm: 1e-9,
            pocs_max_iters: 5000,
            t_clean: 3,
            deficient_allowance: 0.01,
            caps_eta: 0.04,
            gadget_target: 8,
            mono_fraction: 0.05,
            grid_attempts: 100_000,
            grid_exhaustive_ceiling: 2e8,
            delta_w_factor: 0.25,
            mu_reserve: 0.12,
            t: 8,
            beta: 0.35,
            sample_base: 4000,
            sample_per_n: 250,
            sample_max_attempts: 1000,
            nibble_quality: 0.1,
            nibble_rounds: 60,
            connect_max_order: 600,
            connect_state_budget: 2_000_000,
            spanning_ceiling: 24,
            spanning_node_budget: 20_000_000,
            pipeline_retries: 3,
            disc_target_factor: 0.02,
            audit_slack: 0.5,
            precompute_cap: 128,
        }
    }
}

impl Ledger {
    /// Acceptance surplus target for an n-vertex instance.
    pub fn disc_target(&self, n: usize) -> f64 {
        self.disc_target_factor * n as f64
    }

    /// Path sample count for an n-vertex host.
    pub fn sample_count(&self, n: usize) -> usize {
        self.sample_base + self.sample_per_n * n
    }

    /// Bad-set intersection cap for intersection size j in a k-uniform host.
    pub fn bad_cap(&self, n: usize, k: usize, j: usize) -> f64 {
        self.caps_eta.sqrt() * (n as f64).powi((k - 1 - j) as i32)
    }

    /// Parses overrides from `key=value` lines. Unknown keys are rejected;
    /// blank lines and lines starting with `#` are ignored.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("line {}: expected key=value", lineno + 1)))?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        for (key, value) in map {
            self.set(&key, &value)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Ledger> {
        let mut ledger = Ledger::default();
        ledger.apply_kv(&std::fs::read_to_string(path)?)?;
        Ok(ledger)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn f64_of(key: &str, value: &str) -> Result<f64> {
            value
                .parse()
                .map_err(|_| Error::parse(format!("{key}: bad float {value:?}")))
        }
        fn usize_of(key: &str, value: &str) -> Result<usize> {
            value
                .parse()
                .map_err(|_| Error::parse(format!("{key}: bad integer {value:?}")))
        }
        match key {
            "epsilon" => self.epsilon = f64_of(key, value)?,
            "mu0" => self.mu0 = f64_of(key, value)?,
            "tol_pfm" => self.tol_pfm = f64_of(key, value)?,
            "pocs_max_iters" => self.pocs_max_iters = usize_of(key, value)?,
            "t_clean" => self.t_clean = usize_of(key, value)?,
            "deficient_allowance" => self.deficient_allowance = f64_of(key, value)?,
            "caps_eta" => self.caps_eta = f64_of(key, value)?,
            "gadget_target" => self.gadget_target = usize_of(key, value)?,
            "mono_fraction" => self.mono_fraction = f64_of(key, value)?,
            "grid_attempts" => self.grid_attempts = usize_of(key, value)?,
            "grid_exhaustive_ceiling" => self.grid_exhaustive_ceiling = f64_of(key, value)?,
            "delta_w_factor" => self.delta_w_factor = f64_of(key, value)?,
            "mu_reserve" => self.mu_reserve = f64_of(key, value)?,
            "t" => self.t = usize_of(key, value)?,
            "beta" => self.beta = f64_of(key, value)?,
            "sample_base" => self.sample_base = usize_of(key, value)?,
            "sample_per_n" => self.sample_per_n = usize_of(key, value)?,
            "sample_max_attempts" => self.sample_max_attempts = usize_of(key, value)?,
            "nibble_quality" => self.nibble_quality = f64_of(key, value)?,
            "nibble_rounds" => self.nibble_rounds = usize_of(key, value)?,
            "connect_max_order" => self.connect_max_order = usize_of(key, value)?,
            "connect_state_budget" => self.connect_state_budget = usize_of(key, value)?,
            "spanning_ceiling" => self.spanning_ceiling = usize_of(key, value)?,
            "spanning_node_budget" => self.spanning_node_budget = usize_of(key, value)?,
            "pipeline_retries" => self.pipeline_retries = usize_of(key, value)?,
            "disc_target_factor" => self.disc_target_factor = f64_of(key, value)?,
            "audit_slack" => self.audit_slack = f64_of(key, value)?,
            "precompute_cap" => self.precompute_cap = usize_of(key, value)?,
            _ => return Err(Error::parse(format!("unknown ledger key {key:?}"))),
        }
        Ok(())
    }
}
