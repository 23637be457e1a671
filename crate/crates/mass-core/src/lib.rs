//! Simulation engine and analysis toolkit for multi-agent social systems:
//! heterogeneous agents exchanging messages over a co-evolving interaction
//! network, with population-level outcome tracking, structural-prior
//! experiments, benchmark scenarios, and the matching nonparametric
//! statistics for both simulated trajectories and empirical reply logs.

pub mod agents;
pub mod benchmarks;
pub mod config;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod ingest;
pub mod report;
pub mod stats;

pub use agents::{
    clip, emit_message, init_population, init_population_with_gain, update_state, AgentParams,
    Archetype, Placement, PlacementMode, Population,
};
pub use engine::{
    divergence_series, pair_divergence, run, run_from, run_replications, step, Perturbation,
    PerturbTarget, SimConfig, Snapshot, Topology, Trajectory,
};
pub use error::{Error, Result};
pub use graph::{
    degree_partition, gen_barabasi_albert, gen_erdos_renyi, gen_watts_strogatz, rewire_homophily,
    DegreePartition, InteractionGraph,
};
pub use report::{ExperimentId, ExperimentReport};
pub use stats::{OlsFit, TestResult};
