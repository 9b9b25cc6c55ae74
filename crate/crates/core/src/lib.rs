//! Constructive search for tight Hamilton cycles with high colour discrepancy
//! in dense k-uniform hypergraphs.
//!
//! Given an r-edge-coloured k-graph whose minimum (k-1)-degree is above
//! (1/2 + eps)n, the pipeline builds a tight Hamilton cycle on which one
//! colour class is provably over-represented, exposing every intermediate
//! object on the way: the cleaned subgraph, near-alternating grid gadgets,
//! a normal perfect fractional matching, random-walk path samples and the
//! path forest the cycle is stitched from.
//!
//! The crate is organised around the pipeline stages:
//!
//! * [`hypergraph`] — core data model (graphs, colourings, paths, cycles);
//! * [`instances`] — deterministic instance generators;
//! * [`cleaning`] — degree cleaning and bad/clean set classification;
//! * [`grids`] — alternating-grid search and gadget extraction;
//! * [`fractional`] — normal perfect fractional matchings and boosting;
//! * [`walk`] — the fractional-matching random walk and path sampler;
//! * [`assembly`] — path forest, connectors and the full cycle pipeline;
//! * [`verify`] — independent verifiers that share no constructor code.

pub mod assembly;
pub mod cleaning;
pub mod config;
pub mod error;
pub mod fractional;
pub mod grids;
pub mod hypergraph;
pub mod instances;
pub mod io;
pub mod util;
pub mod verify;
pub mod walk;

pub use assembly::{
    cycle_to_matchings, hamilton_with_discrepancy, AuxiliaryGraph, PathForest, PipelineOutcome,
    PipelineParams, RunReport,
};
pub use cleaning::{BadSetReport, CleanedPair, ShadowColouring};
pub use config::Ledger;
pub use error::{Error, Result};
pub use fractional::{DiscrepantPfm, FractionalMatching};
pub use grids::{Grid, GridSearchOutcome, NearAlternatingGrid};
pub use hypergraph::{
    Colouring, HamiltonCycle, Hypergraph, HypergraphBuilder, OrderedTuple, TightPath, Vertex,
};
pub use instances::{Family, GenSpec};
pub use verify::{verify_cycle, verify_matching, verify_pfm, DiscrepancyReport, StructureKind};
pub use walk::{SampledPath, WalkSampler};
