//! Agent behavior: per-agent parameters, the message-emission map and the
//! neighborhood influence update.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, InteractionGraph};

/// Default message gain for amplifier agents.
pub const DEFAULT_AMPLIFIER_GAIN: f64 = 1.5;

/// Functional agent class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Archetype {
    Baseline,
    Amplifier,
}

/// Behavior parameters of one agent.
///
/// `intensity` scales baseline messages and is unused by amplifiers;
/// `gain` scales amplifier messages and is unused by baselines. Both are
/// always populated so that swapping an agent's archetype never disturbs
/// the draws of its peers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentParams {
    pub archetype: Archetype,
    /// Susceptibility to neighborhood influence, in [0, 1].
    pub susceptibility: f64,
    /// Baseline message intensity.
    pub intensity: f64,
    /// Amplifier message gain.
    pub gain: f64,
}

/// Stances plus parameters for a whole population; both vectors share
/// indexing with the interaction graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub states: Vec<f64>,
    pub params: Vec<AgentParams>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Where amplifier agents are placed in the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PlacementMode {
    Hubs,
    Periphery,
    UniformRandom,
    #[default]
    None,
}

/// Amplifier placement: mode plus amplifier count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Placement {
    #[serde(default)]
    pub mode: PlacementMode,
    #[serde(default)]
    pub count: usize,
}

impl Placement {
    pub fn none() -> Self {
        Placement {
            mode: PlacementMode::None,
            count: 0,
        }
    }

    pub fn new(mode: PlacementMode, count: usize) -> Self {
        Placement { mode, count }
    }
}

/// Clamp a value into the stance range [-1, 1].
pub fn clip(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// Draw a fresh population with the default amplifier gain.
///
/// Initial stances are Uniform(-1, 1); susceptibility is Beta(2, 2) and
/// intensity Normal(1, sigma^2) for every agent. Amplifier indices are
/// then selected per `placement` (highest-degree nodes for hubs,
/// lowest-degree for periphery, ties to the lower index; a uniform
/// sample without replacement for random placement). Every base draw
/// happens before placement is applied, so two populations that differ
/// only in placement share all their draws.
pub fn init_population(
    n: usize,
    placement: Placement,
    graph: &InteractionGraph,
    sigma: f64,
    seed: u64,
) -> Result<Population> {
    init_population_with_gain(n, placement, graph, sigma, DEFAULT_AMPLIFIER_GAIN, seed)
}

/// [`init_population`] with an explicit amplifier gain.
pub fn init_population_with_gain(
    n: usize,
    placement: Placement,
    graph: &InteractionGraph,
    sigma: f64,
    gain: f64,
    seed: u64,
) -> Result<Population> {
    if placement.count > n {
        return Err(Error::invalid(format!(
            "placement count {} exceeds population size {n}",
            placement.count
        )));
    }
    if graph.node_count() != n {
        return Err(Error::invalid(format!(
            "graph has {} nodes for a population of {n}",
            graph.node_count()
        )));
    }
    if sigma < 0.0 {
        return Err(Error::invalid("sigma must be nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let beta22 = Beta::new(2.0, 2.0).expect("valid shape parameters");
    let normal = Normal::new(1.0, sigma).expect("nonnegative sigma");
    let mut states = Vec::with_capacity(n);
    let mut params = Vec::with_capacity(n);
    for _ in 0..n {
        states.push(rng.random_range(-1.0..1.0));
        params.push(AgentParams {
            archetype: Archetype::Baseline,
            susceptibility: beta22.sample(&mut rng),
            intensity: normal.sample(&mut rng),
            gain,
        });
    }
    for idx in amplifier_indices(placement, graph, &mut rng) {
        params[idx].archetype = Archetype::Amplifier;
    }
    Ok(Population { states, params })
}

fn amplifier_indices<R: Rng>(
    placement: Placement,
    graph: &InteractionGraph,
    rng: &mut R,
) -> Vec<usize> {
    match placement.mode {
        PlacementMode::None => Vec::new(),
        PlacementMode::Hubs => graph::top_degree_nodes(graph, placement.count),
        PlacementMode::Periphery => graph::bottom_degree_nodes(graph, placement.count),
        PlacementMode::UniformRandom => {
            rand::seq::index::sample(rng, graph.node_count(), placement.count).into_vec()
        }
    }
}

/// Information-exchange map: latent stance to observable message.
/// Baselines emit `clip(intensity * state)`, amplifiers `clip(gain * state)`.
pub fn emit_message(state: f64, params: &AgentParams) -> f64 {
    match params.archetype {
        Archetype::Baseline => clip(params.intensity * state),
        Archetype::Amplifier => clip(params.gain * state),
    }
}

/// Influence update: convex combination of the agent's stance and the
/// mean neighborhood message, weighted by susceptibility. No messages
/// means no influence.
pub fn update_state(state: f64, params: &AgentParams, neighbor_messages: &[f64]) -> f64 {
    if neighbor_messages.is_empty() {
        return state;
    }
    let mean = neighbor_messages.iter().sum::<f64>() / neighbor_messages.len() as f64;
    let alpha = params.susceptibility;
    clip((1.0 - alpha) * state + alpha * mean)
}
