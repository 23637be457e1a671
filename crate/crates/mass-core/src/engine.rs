//! Synchronous advancement of the full system state (population + graph),
//! replication management, trajectory recording and perturbation injection.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agents::{self, Placement, Population};
use crate::error::{Error, Result};
use crate::graph::{self, InteractionGraph};
use crate::stats;

/// Network model for the initial interaction graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Topology {
    BarabasiAlbert { m: usize },
    WattsStrogatz { k: usize, p: f64 },
    ErdosRenyi { p: f64 },
}

/// Which agent a perturbation lands on: the highest-degree node of the
/// initial graph, the lowest-degree node (ties to the lower index), or an
/// explicit index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbTarget {
    Hub,
    Periphery,
    Index(usize),
}

/// A bounded additive state shift applied to one agent immediately before
/// the step that produces snapshot `at_step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    pub target: PerturbTarget,
    pub epsilon: f64,
    pub at_step: usize,
}

/// Full description of one simulation run. Mirrors the configuration file
/// schema key for key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    /// Agent count.
    pub agents: usize,
    /// Number of synchronous steps per replication.
    pub steps: usize,
    /// Number of independent replications.
    pub replications: usize,
    pub topology: Topology,
    #[serde(default)]
    pub placement: Placement,
    /// Standard deviation of the baseline message-intensity draw.
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_rewire_enabled")]
    pub rewire_enabled: bool,
    /// Stance distance at or beyond which an edge is cut.
    #[serde(default = "default_rewire_threshold")]
    pub rewire_threshold: f64,
    pub master_seed: u64,
    #[serde(default)]
    pub perturbation: Option<Perturbation>,
    /// Message gain of amplifier agents.
    #[serde(default = "default_amplifier_gain")]
    pub amplifier_gain: f64,
    /// Also write per-agent state dumps when exporting trajectories.
    #[serde(default)]
    pub dump_states: bool,
    /// Optional knobs for the benchmark runners.
    #[serde(default)]
    pub benchmark: Option<BenchmarkParams>,
}

fn default_sigma() -> f64 {
    0.2
}
fn default_rewire_enabled() -> bool {
    true
}
fn default_rewire_threshold() -> f64 {
    0.5
}
fn default_amplifier_gain() -> f64 {
    agents::DEFAULT_AMPLIFIER_GAIN
}

/// Parameters consumed by the benchmark runners; every field has a
/// documented default so the section may be omitted entirely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct BenchmarkParams {
    /// Number of biased agents the perturbation benchmark injects.
    pub inject_count: Option<usize>,
    /// Fixed stance of injected agents.
    pub inject_bias: Option<f64>,
    /// Step before which the injection happens.
    pub inject_at_step: Option<usize>,
    /// Archetype compositions for the heterogeneity benchmark.
    pub compositions: Option<Vec<NamedPlacement>>,
    /// Topologies for the topology benchmark.
    pub topologies: Option<Vec<Topology>>,
}

/// A named amplifier placement, used to describe one archetype composition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedPlacement {
    pub name: String,
    #[serde(flatten)]
    pub placement: Placement,
}

impl SimConfig {
    /// The worked-example setup: 300 agents, 40 steps, 30 replications on
    /// a scale-free graph with threshold-0.5 co-evolutionary rewiring.
    pub fn worked_example(master_seed: u64) -> Self {
        SimConfig {
            agents: 300,
            steps: 40,
            replications: 30,
            topology: Topology::BarabasiAlbert { m: 3 },
            placement: Placement::none(),
            sigma: default_sigma(),
            rewire_enabled: true,
            rewire_threshold: default_rewire_threshold(),
            master_seed,
            perturbation: None,
            amplifier_gain: default_amplifier_gain(),
            dump_states: false,
            benchmark: None,
        }
    }

    /// Check every invariant the engine relies on.
    pub fn validate(&self) -> Result<()> {
        if self.agents < 1 {
            return Err(Error::invalid("agents must be at least 1"));
        }
        if self.steps < 1 {
            return Err(Error::invalid("steps must be at least 1"));
        }
        if self.replications < 1 {
            return Err(Error::invalid("replications must be at least 1"));
        }
        if self.rewire_threshold <= 0.0 {
            return Err(Error::invalid("rewire_threshold must be positive"));
        }
        if self.sigma < 0.0 {
            return Err(Error::invalid("sigma must be nonnegative"));
        }
        if self.placement.count > self.agents {
            return Err(Error::invalid("placement count exceeds agent count"));
        }
        match self.topology {
            Topology::BarabasiAlbert { m } => {
                if m < 1 || self.agents <= m {
                    return Err(Error::invalid("barabasi-albert requires agents > m >= 1"));
                }
            }
            Topology::WattsStrogatz { k, p } => {
                if k < 2 || k % 2 != 0 || k >= self.agents {
                    return Err(Error::invalid(
                        "watts-strogatz requires agents > k >= 2 with k even",
                    ));
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::invalid("watts-strogatz p must lie in [0, 1]"));
                }
            }
            Topology::ErdosRenyi { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::invalid("erdos-renyi p must lie in [0, 1]"));
                }
            }
        }
        if let Some(p) = &self.perturbation {
            if p.epsilon < 0.0 {
                return Err(Error::invalid("perturbation epsilon must be nonnegative"));
            }
            if p.at_step < 1 || p.at_step > self.steps {
                return Err(Error::invalid(
                    "perturbation at_step must lie in 1..=steps",
                ));
            }
            if let PerturbTarget::Index(i) = p.target {
                if i >= self.agents {
                    return Err(Error::invalid("perturbation index out of range"));
                }
            }
        }
        Ok(())
    }
}

/// Independent seed streams derived from (master_seed, replication).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedStream {
    /// Graph construction.
    Graph = 1,
    /// Population draws.
    Population = 2,
    /// Rewiring choices during dynamics.
    Dynamics = 3,
    /// Wiring of agents injected mid-run.
    Injection = 4,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic seed for one (master, replication, stream) triple:
/// three chained splitmix64 rounds, so nearby replications decorrelate.
pub fn replication_seed(master_seed: u64, replication: usize, stream: SeedStream) -> u64 {
    let s = splitmix64(master_seed);
    let s = splitmix64(s ^ replication as u64);
    splitmix64(s ^ stream as u64)
}

/// One recorded time point: all agent stances plus population outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: usize,
    pub states: Vec<f64>,
    pub edge_count: usize,
    /// Mean agent stance.
    pub phi_mean: f64,
    /// Population variance of agent stances.
    pub phi_var: f64,
}

impl Snapshot {
    pub fn capture(t: usize, population: &Population, graph: &InteractionGraph) -> Self {
        Snapshot {
            t,
            states: population.states.clone(),
            edge_count: graph.edge_count(),
            phi_mean: stats::mean(&population.states),
            phi_var: stats::population_variance(&population.states),
        }
    }

    /// Mean absolute stance, the polarization-style outcome.
    pub fn mean_abs_state(&self) -> f64 {
        if self.states.is_empty() {
            0.0
        } else {
            self.states.iter().map(|x| x.abs()).sum::<f64>() / self.states.len() as f64
        }
    }
}

/// Time series of snapshots for one replication, t = 0..=steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub config: SimConfig,
    pub replication: usize,
    pub snapshots: Vec<Snapshot>,
}

impl Trajectory {
    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots.last().expect("at least the t=0 snapshot")
    }
}

/// Advance the system one synchronous step:
/// 1. every agent emits a message from its current stance;
/// 2. every stance updates against the current graph's neighborhoods;
/// 3. with rewiring enabled, the graph rewires on the new stances.
pub fn step<R: Rng>(
    population: &Population,
    graph: &InteractionGraph,
    config: &SimConfig,
    rng: &mut R,
) -> Result<(Population, InteractionGraph)> {
    let n = population.len();
    if graph.node_count() != n || population.params.len() != n {
        return Err(Error::invalid(format!(
            "population of {n} does not match graph of {} nodes",
            graph.node_count()
        )));
    }
    let messages: Vec<f64> = population
        .states
        .iter()
        .zip(&population.params)
        .map(|(x, p)| agents::emit_message(*x, p))
        .collect();
    let mut buffer = Vec::new();
    let mut new_states = Vec::with_capacity(n);
    for i in 0..n {
        buffer.clear();
        buffer.extend(graph.neighbors(i)?.iter().map(|&j| messages[j]));
        new_states.push(agents::update_state(
            population.states[i],
            &population.params[i],
            &buffer,
        ));
    }
    let new_graph = if config.rewire_enabled {
        graph::rewire_homophily_with(graph, &new_states, config.rewire_threshold, rng)?
    } else {
        graph.clone()
    };
    Ok((
        Population {
            states: new_states,
            params: population.params.clone(),
        },
        new_graph,
    ))
}

/// Build the initial graph for one replication.
pub fn build_graph(config: &SimConfig, replication: usize) -> Result<InteractionGraph> {
    let seed = replication_seed(config.master_seed, replication, SeedStream::Graph);
    match config.topology {
        Topology::BarabasiAlbert { m } => graph::gen_barabasi_albert(config.agents, m, seed),
        Topology::WattsStrogatz { k, p } => graph::gen_watts_strogatz(config.agents, k, p, seed),
        Topology::ErdosRenyi { p } => graph::gen_erdos_renyi(config.agents, p, seed),
    }
}

/// Draw the initial population for one replication. The population seed
/// stream is independent of the graph stream, so configurations that
/// differ only in topology still share their agent draws.
pub fn build_population(
    config: &SimConfig,
    replication: usize,
    graph: &InteractionGraph,
) -> Result<Population> {
    let seed = replication_seed(config.master_seed, replication, SeedStream::Population);
    agents::init_population_with_gain(
        config.agents,
        config.placement,
        graph,
        config.sigma,
        config.amplifier_gain,
        seed,
    )
}

fn resolve_target(target: PerturbTarget, initial_graph: &InteractionGraph) -> usize {
    match target {
        PerturbTarget::Hub => graph::top_degree_nodes(initial_graph, 1)[0],
        PerturbTarget::Periphery => graph::bottom_degree_nodes(initial_graph, 1)[0],
        PerturbTarget::Index(i) => i,
    }
}

/// Run one full replication from freshly built state.
pub fn run(config: &SimConfig, replication: usize) -> Result<Trajectory> {
    config.validate()?;
    let graph = build_graph(config, replication)?;
    let population = build_population(config, replication, &graph)?;
    run_from(config, replication, population, graph)
}

/// Advance prepared state through `steps` synchronous steps, recording a
/// snapshot at t = 0 and after every step. The configured perturbation,
/// if any, lands immediately before the step producing snapshot
/// `at_step`, with the hub / periphery target resolved on the initial
/// graph.
pub fn run_from(
    config: &SimConfig,
    replication: usize,
    population: Population,
    graph: InteractionGraph,
) -> Result<Trajectory> {
    let mut population = population;
    let mut graph = graph;
    let mut rng = ChaCha8Rng::seed_from_u64(replication_seed(
        config.master_seed,
        replication,
        SeedStream::Dynamics,
    ));
    let perturbation = config
        .perturbation
        .map(|p| (p.at_step, resolve_target(p.target, &graph), p.epsilon));
    let mut snapshots = Vec::with_capacity(config.steps + 1);
    snapshots.push(Snapshot::capture(0, &population, &graph));
    for t in 1..=config.steps {
        if let Some((at_step, target, epsilon)) = perturbation {
            if at_step == t {
                population.states[target] = agents::clip(population.states[target] + epsilon);
            }
        }
        let (next_population, next_graph) = step(&population, &graph, config, &mut rng)?;
        population = next_population;
        graph = next_graph;
        snapshots.push(Snapshot::capture(t, &population, &graph));
    }
    Ok(Trajectory {
        config: config.clone(),
        replication,
        snapshots,
    })
}

/// Run all replications, indices 0..replications.
pub fn run_replications(config: &SimConfig) -> Result<Vec<Trajectory>> {
    (0..config.replications)
        .map(|r| run(config, r))
        .collect()
}

/// Mean absolute per-step stance change, D(t) for t = 1..=steps. When an
/// injection grew the population mid-run, the change is taken over the
/// agents present at both ends of the step.
pub fn divergence_series(trajectory: &Trajectory) -> Vec<f64> {
    trajectory
        .snapshots
        .windows(2)
        .map(|w| {
            let shared = w[0].states.len().min(w[1].states.len());
            if shared == 0 {
                return 0.0;
            }
            w[0].states[..shared]
                .iter()
                .zip(&w[1].states[..shared])
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
                / shared as f64
        })
        .collect()
}

/// Per-step absolute difference of mean stance between two trajectories
/// of equal length, t = 0..=steps.
pub fn pair_divergence(base: &Trajectory, perturbed: &Trajectory) -> Result<Vec<f64>> {
    if base.snapshots.len() != perturbed.snapshots.len() {
        return Err(Error::invalid(format!(
            "trajectory lengths differ: {} vs {}",
            base.snapshots.len(),
            perturbed.snapshots.len()
        )));
    }
    Ok(base
        .snapshots
        .iter()
        .zip(&perturbed.snapshots)
        .map(|(a, b)| (a.phi_mean - b.phi_mean).abs())
        .collect())
}

/// Trajectory CSV: `t,replication,phi_mean,phi_var,edge_count`, one row
/// per snapshot.
pub fn write_trajectory_csv<W: Write>(trajectory: &Trajectory, mut w: W) -> std::io::Result<()> {
    writeln!(w, "t,replication,phi_mean,phi_var,edge_count")?;
    for s in &trajectory.snapshots {
        writeln!(
            w,
            "{},{},{},{},{}",
            s.t, trajectory.replication, s.phi_mean, s.phi_var, s.edge_count
        )?;
    }
    Ok(())
}

/// Full-state dump CSV: `t,replication,agent,x`.
pub fn write_states_csv<W: Write>(trajectory: &Trajectory, mut w: W) -> std::io::Result<()> {
    writeln!(w, "t,replication,agent,x")?;
    for s in &trajectory.snapshots {
        for (agent, x) in s.states.iter().enumerate() {
            writeln!(w, "{},{},{},{}", s.t, trajectory.replication, agent, x)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{AgentParams, Archetype, PlacementMode};

    fn tiny_config(n: usize, steps: usize) -> SimConfig {
        SimConfig {
            agents: n,
            steps,
            replications: 2,
            topology: Topology::ErdosRenyi { p: 0.5 },
            placement: Placement::none(),
            sigma: 0.2,
            rewire_enabled: false,
            rewire_threshold: 0.5,
            master_seed: 11,
            perturbation: None,
            amplifier_gain: 1.5,
            dump_states: false,
            benchmark: None,
        }
    }

    fn two_agent_population(states: [f64; 2], alpha: f64, beta: f64) -> Population {
        Population {
            states: states.to_vec(),
            params: vec![
                AgentParams {
                    archetype: Archetype::Baseline,
                    susceptibility: alpha,
                    intensity: beta,
                    gain: 1.5,
                };
                2
            ],
        }
    }

    #[test]
    fn frozen_population_is_a_fixed_point() {
        let config = tiny_config(2, 1);
        let graph = InteractionGraph::from_edges(2, [(0, 1)]).unwrap();
        let pop = two_agent_population([0.4, -0.7], 0.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (next, g) = step(&pop, &graph, &config, &mut rng).unwrap();
        assert_eq!(next.states, pop.states);
        assert_eq!(g, graph);
    }

    #[test]
    fn consensus_is_a_fixed_point() {
        let config = tiny_config(2, 1);
        let graph = InteractionGraph::from_edges(2, [(0, 1)]).unwrap();
        let pop = two_agent_population([1.0, 1.0], 0.7, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (next, _) = step(&pop, &graph, &config, &mut rng).unwrap();
        assert_eq!(next.states, vec![1.0, 1.0]);
    }

    #[test]
    fn fully_susceptible_pair_swaps_opposed_stances() {
        let config = tiny_config(2, 1);
        let graph = InteractionGraph::from_edges(2, [(0, 1)]).unwrap();
        let pop = two_agent_population([1.0, -1.0], 1.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (next, _) = step(&pop, &graph, &config, &mut rng).unwrap();
        assert_eq!(next.states, vec![-1.0, 1.0]);
    }

    #[test]
    fn step_rejects_size_mismatch() {
        let config = tiny_config(3, 1);
        let graph = InteractionGraph::empty(3);
        let pop = two_agent_population([0.0, 0.0], 0.5, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(step(&pop, &graph, &config, &mut rng).is_err());
    }

    #[test]
    fn run_records_steps_plus_one_snapshots() {
        let mut config = SimConfig::worked_example(5);
        config.steps = 40;
        config.replications = 1;
        let traj = run(&config, 0).unwrap();
        assert_eq!(traj.snapshots.len(), 41);
        for (t, s) in traj.snapshots.iter().enumerate() {
            assert_eq!(s.t, t);
            assert!(s.states.iter().all(|x| (-1.0..=1.0).contains(x)));
            assert!((-1.0..=1.0).contains(&s.phi_mean));
            assert!(s.phi_var >= 0.0);
        }
    }

    #[test]
    fn identical_inputs_reproduce_bitwise() {
        let mut config = SimConfig::worked_example(17);
        config.agents = 60;
        config.steps = 12;
        let a = run(&config, 3).unwrap();
        let b = run(&config, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_epsilon_perturbation_changes_nothing() {
        let mut config = SimConfig::worked_example(23);
        config.agents = 50;
        config.steps = 10;
        let base = run(&config, 0).unwrap();
        config.perturbation = Some(Perturbation {
            target: PerturbTarget::Hub,
            epsilon: 0.0,
            at_step: 4,
        });
        let perturbed = run(&config, 0).unwrap();
        assert_eq!(base.snapshots, perturbed.snapshots);
    }

    #[test]
    fn perturbation_leaves_earlier_steps_untouched() {
        let mut config = SimConfig::worked_example(31);
        config.agents = 50;
        config.steps = 12;
        let base = run(&config, 1).unwrap();
        config.perturbation = Some(Perturbation {
            target: PerturbTarget::Hub,
            epsilon: 0.1,
            at_step: 6,
        });
        let perturbed = run(&config, 1).unwrap();
        let div = pair_divergence(&base, &perturbed).unwrap();
        assert_eq!(div.len(), 13);
        for (t, d) in div.iter().enumerate() {
            if t < 6 {
                assert_eq!(*d, 0.0, "divergence before the perturbation at t={t}");
            }
        }
        assert!(div[6..].iter().any(|d| *d > 0.0));
    }

    #[test]
    fn replications_have_distinct_initial_states() {
        let mut config = SimConfig::worked_example(2);
        config.agents = 40;
        config.steps = 1;
        config.replications = 3;
        let trajs = run_replications(&config).unwrap();
        assert_eq!(trajs.len(), 3);
        assert_ne!(trajs[0].snapshots[0].states, trajs[1].snapshots[0].states);
        assert_ne!(trajs[1].snapshots[0].states, trajs[2].snapshots[0].states);
    }

    #[test]
    fn divergence_of_frozen_dynamics_is_zero() {
        let mut config = tiny_config(20, 8);
        config.topology = Topology::ErdosRenyi { p: 0.0 };
        let traj = run(&config, 0).unwrap();
        let d = divergence_series(&traj);
        assert_eq!(d.len(), 8);
        assert!(d.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn divergence_hand_value() {
        let config = tiny_config(4, 1);
        let snapshots = vec![
            Snapshot {
                t: 0,
                states: vec![0.0, 0.2, -0.5, 0.9],
                edge_count: 0,
                phi_mean: 0.0,
                phi_var: 0.0,
            },
            Snapshot {
                t: 1,
                states: vec![0.4, 0.2, -0.5, 0.9],
                edge_count: 0,
                phi_mean: 0.0,
                phi_var: 0.0,
            },
        ];
        let traj = Trajectory {
            config,
            replication: 0,
            snapshots,
        };
        assert_eq!(divergence_series(&traj), vec![0.1]);
    }

    #[test]
    fn pair_divergence_rejects_length_mismatch() {
        let mut config = SimConfig::worked_example(1);
        config.agents = 30;
        config.steps = 4;
        let a = run(&config, 0).unwrap();
        config.steps = 5;
        let b = run(&config, 0).unwrap();
        assert!(pair_divergence(&a, &b).is_err());
    }

    #[test]
    fn convex_averaging_contracts_state_envelope() {
        // all baseline, unit intensity, no rewiring: per-step min must not
        // fall and max must not rise
        let mut config = SimConfig::worked_example(3);
        config.agents = 60;
        config.steps = 20;
        config.rewire_enabled = false;
        config.sigma = 0.0;
        let traj = run(&config, 0).unwrap();
        for w in traj.snapshots.windows(2) {
            let min0 = w[0].states.iter().copied().fold(f64::INFINITY, f64::min);
            let max0 = w[0]
                .states
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            let min1 = w[1].states.iter().copied().fold(f64::INFINITY, f64::min);
            let max1 = w[1]
                .states
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(min1 >= min0 - 1e-12);
            assert!(max1 <= max0 + 1e-12);
        }
    }

    #[test]
    fn step_is_permutation_equivariant() {
        // relabeling agents and the graph consistently permutes the output
        // states identically (rewiring off, so no RNG is consumed)
        let config = tiny_config(5, 1);
        let graph =
            InteractionGraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let pop = Population {
            states: vec![0.9, -0.3, 0.1, 0.5, -0.8],
            params: (0..5)
                .map(|i| AgentParams {
                    archetype: if i == 0 {
                        Archetype::Amplifier
                    } else {
                        Archetype::Baseline
                    },
                    susceptibility: 0.1 * i as f64 + 0.2,
                    intensity: 1.0 + 0.05 * i as f64,
                    gain: 1.5,
                })
                .collect(),
        };
        let perm = [3usize, 0, 4, 1, 2]; // old index -> new index
        let permuted_graph = InteractionGraph::from_edges(
            5,
            graph.edges().map(|(u, v)| (perm[u], perm[v])),
        )
        .unwrap();
        let mut permuted_pop = pop.clone();
        for (old, &new) in perm.iter().enumerate() {
            permuted_pop.states[new] = pop.states[old];
            permuted_pop.params[new] = pop.params[old];
        }
        let mut rng_a = ChaCha8Rng::seed_from_u64(0);
        let mut rng_b = ChaCha8Rng::seed_from_u64(0);
        let (out, _) = step(&pop, &graph, &config, &mut rng_a).unwrap();
        let (out_permuted, _) = step(&permuted_pop, &permuted_graph, &config, &mut rng_b).unwrap();
        for (old, &new) in perm.iter().enumerate() {
            assert_eq!(out.states[old], out_permuted.states[new]);
        }
    }

    #[test]
    fn seed_streams_are_pairwise_distinct() {
        let streams = [
            SeedStream::Graph,
            SeedStream::Population,
            SeedStream::Dynamics,
            SeedStream::Injection,
        ];
        let mut seen = std::collections::BTreeSet::new();
        for r in 0..8 {
            for s in streams {
                assert!(seen.insert(replication_seed(99, r, s)));
            }
        }
    }

    #[test]
    fn trajectory_csv_shape() {
        let mut config = SimConfig::worked_example(2);
        config.agents = 10;
        config.steps = 2;
        config.topology = Topology::ErdosRenyi { p: 0.3 };
        let traj = run(&config, 0).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&traj, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,replication,phi_mean,phi_var,edge_count");
        assert_eq!(lines.len(), 4);
        let mut buf = Vec::new();
        write_states_csv(&traj, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1 + 3 * 10);
    }

    #[test]
    fn validate_catches_bad_configs() {
        let mut c = SimConfig::worked_example(0);
        c.agents = 0;
        assert!(c.validate().is_err());
        let mut c = SimConfig::worked_example(0);
        c.topology = Topology::WattsStrogatz { k: 7, p: 0.1 };
        assert!(c.validate().is_err());
        let mut c = SimConfig::worked_example(0);
        c.perturbation = Some(Perturbation {
            target: PerturbTarget::Hub,
            epsilon: 0.1,
            at_step: 100,
        });
        assert!(c.validate().is_err());
        let mut c = SimConfig::worked_example(0);
        c.placement = Placement::new(PlacementMode::Hubs, 1000);
        assert!(c.validate().is_err());
    }
}
