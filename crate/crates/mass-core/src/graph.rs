//! Dynamic undirected interaction networks: generation, queries, degree
//! partitioning and homophily-driven rewiring.

use std::collections::BTreeSet;
use std::io::Write;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Undirected simple graph over agent indices `0..node_count`.
///
/// Values are immutable once constructed; rewiring produces a new graph.
/// Edges are kept as ordered `(u, v)` pairs with `u < v` alongside a
/// per-node adjacency index, so edge iteration and neighbor queries are
/// deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    node_count: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<BTreeSet<usize>>,
}

impl InteractionGraph {
    /// Graph with `node_count` isolated nodes.
    pub fn empty(node_count: usize) -> Self {
        InteractionGraph {
            node_count,
            edges: BTreeSet::new(),
            adjacency: vec![BTreeSet::new(); node_count],
        }
    }

    /// Build from an explicit edge list. Self-loops and out-of-range
    /// endpoints are rejected; duplicate edges collapse.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = InteractionGraph::empty(node_count);
        for (u, v) in edges {
            if u == v {
                return Err(Error::invalid(format!("self-loop at node {u}")));
            }
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidIndex {
                    index: u.max(v),
                    node_count,
                });
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        if self.edges.insert((a, b)) {
            self.adjacency[a].insert(b);
            self.adjacency[b].insert(a);
        }
    }

    fn remove_edge(&mut self, u: usize, v: usize) {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        if self.edges.remove(&(a, b)) {
            self.adjacency[a].remove(&b);
            self.adjacency[b].remove(&a);
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges.contains(&(a, b))
    }

    /// Edges as `(u, v)` pairs with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Degree of every node, indexed by node.
    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(|n| n.len()).collect()
    }

    /// The neighborhood of node `i` (never contains `i` itself).
    pub fn neighbors(&self, i: usize) -> Result<&BTreeSet<usize>> {
        self.adjacency.get(i).ok_or(Error::InvalidIndex {
            index: i,
            node_count: self.node_count,
        })
    }

    /// Copy of the graph with `extra` fresh isolated nodes appended.
    pub fn with_appended_nodes(&self, extra: usize) -> Self {
        let mut g = self.clone();
        g.node_count += extra;
        g.adjacency.extend((0..extra).map(|_| BTreeSet::new()));
        g
    }

    /// Copy of the graph with the given edge added (used when wiring
    /// injected agents). Errors on self-loops or out-of-range endpoints.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self> {
        if u == v {
            return Err(Error::invalid(format!("self-loop at node {u}")));
        }
        if u >= self.node_count || v >= self.node_count {
            return Err(Error::InvalidIndex {
                index: u.max(v),
                node_count: self.node_count,
            });
        }
        let mut g = self.clone();
        g.add_edge(u, v);
        Ok(g)
    }

    /// Edge-list CSV: header `u,v`, one undirected edge per row with
    /// `u < v`, rows in ascending `(u, v)` order.
    pub fn write_edge_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "u,v")?;
        for (u, v) in &self.edges {
            writeln!(w, "{u},{v}")?;
        }
        Ok(())
    }
}

/// Degree-quartile partition of a graph's nodes.
///
/// Hubs are the top degree quartile, periphery the bottom quartile, mid
/// the remainder. Index lists are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreePartition {
    pub hub: Vec<usize>,
    pub mid: Vec<usize>,
    pub periphery: Vec<usize>,
}

/// Scale-free graph by preferential attachment.
///
/// Starts from a fully connected `m`-node seed clique; each later node
/// attaches to `m` distinct existing nodes drawn proportionally to degree
/// without replacement. Total edges: `m(m-1)/2 + m(n-m)`.
pub fn gen_barabasi_albert(n: usize, m: usize, seed: u64) -> Result<InteractionGraph> {
    if m < 1 || n <= m {
        return Err(Error::invalid(format!(
            "barabasi-albert requires n > m >= 1, got n={n}, m={m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = InteractionGraph::empty(n);
    // One entry per degree unit; uniform draws from it are degree-proportional.
    let mut repeated: Vec<usize> = Vec::with_capacity(2 * (m * (m - 1) / 2 + m * (n - m)));
    for u in 0..m {
        for v in (u + 1)..m {
            g.add_edge(u, v);
            repeated.push(u);
            repeated.push(v);
        }
    }
    let mut chosen: BTreeSet<usize> = BTreeSet::new();
    for v in m..n {
        chosen.clear();
        while chosen.len() < m {
            let target = repeated[rng.random_range(0..repeated.len())];
            chosen.insert(target);
        }
        for &t in &chosen {
            g.add_edge(v, t);
            repeated.push(v);
            repeated.push(t);
        }
    }
    Ok(g)
}

/// Small-world graph: ring lattice of even degree `k`, each lattice edge
/// independently rewired with probability `p` to a uniformly chosen
/// non-neighbor endpoint. Edge count stays `n*k/2`.
pub fn gen_watts_strogatz(n: usize, k: usize, p: f64, seed: u64) -> Result<InteractionGraph> {
    if k < 2 || k % 2 != 0 || k >= n {
        return Err(Error::invalid(format!(
            "watts-strogatz requires n > k >= 2 with k even, got n={n}, k={k}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!(
            "rewiring probability must lie in [0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = InteractionGraph::empty(n);
    for offset in 1..=(k / 2) {
        for i in 0..n {
            g.add_edge(i, (i + offset) % n);
        }
    }
    for offset in 1..=(k / 2) {
        for i in 0..n {
            let j = (i + offset) % n;
            if !g.has_edge(i, j) {
                continue; // already rewired away by an earlier pass
            }
            if rng.random_bool(p) {
                let neighbors = g.neighbors(i).expect("node in range");
                // candidates: anything that is not i and not already adjacent to i
                let candidate = (0..n)
                    .filter(|w| *w != i && !neighbors.contains(w))
                    .choose(&mut rng);
                if let Some(w) = candidate {
                    g.remove_edge(i, j);
                    g.add_edge(i, w);
                }
            }
        }
    }
    Ok(g)
}

/// Bernoulli random graph: each of the `n(n-1)/2` pairs is an edge
/// independently with probability `p`.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<InteractionGraph> {
    if n < 1 {
        return Err(Error::invalid("erdos-renyi requires n >= 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!(
            "edge probability must lie in [0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = InteractionGraph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// Partition nodes into hub / mid / periphery by degree quartile.
///
/// Thresholds are the nearest-rank 25th and 75th percentiles of the
/// degree multiset. Hubs are nodes at or above the 75th-percentile
/// degree, periphery the remaining nodes at or below the 25th, mid the
/// rest. Two degenerate regimes:
/// - all degrees equal: every node is mid;
/// - the two percentile values coincide (heavily tied degrees): the hub
///   comparison becomes strict, so only nodes strictly above the shared
///   threshold count as hubs (a star center, but not its leaves).
pub fn degree_partition(g: &InteractionGraph) -> DegreePartition {
    let degrees = g.degrees();
    let n = degrees.len();
    let mut sorted = degrees.clone();
    sorted.sort_unstable();
    if n == 0 || sorted[0] == sorted[n - 1] {
        return DegreePartition {
            hub: Vec::new(),
            mid: (0..n).collect(),
            periphery: Vec::new(),
        };
    }
    let p25 = sorted[nearest_rank(25.0, n)];
    let p75 = sorted[nearest_rank(75.0, n)];
    let strict_hub = p75 == p25;
    let mut hub = Vec::new();
    let mut mid = Vec::new();
    let mut periphery = Vec::new();
    for (i, &d) in degrees.iter().enumerate() {
        let is_hub = if strict_hub { d > p75 } else { d >= p75 };
        if is_hub {
            hub.push(i);
        } else if d <= p25 {
            periphery.push(i);
        } else {
            mid.push(i);
        }
    }
    DegreePartition { hub, mid, periphery }
}

/// Nearest-rank ordinal index (0-based) for percentile `p` of `n` items.
fn nearest_rank(p: f64, n: usize) -> usize {
    let rank = (p / 100.0 * n as f64).ceil() as usize;
    rank.clamp(1, n) - 1
}

/// Homophily rewiring: remove every edge whose endpoint stance distance
/// is at least `threshold`, then for each removal add one replacement
/// edge from a uniformly chosen endpoint of the removed edge to a
/// uniformly chosen similar non-neighbor. A removal with no eligible
/// replacement target is skipped, so the edge count never grows.
pub fn rewire_homophily(
    g: &InteractionGraph,
    states: &[f64],
    threshold: f64,
    seed: u64,
) -> Result<InteractionGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rewire_homophily_with(g, states, threshold, &mut rng)
}

/// [`rewire_homophily`] driven by an external RNG stream, for callers
/// advancing a simulation across many steps.
pub fn rewire_homophily_with<R: Rng>(
    g: &InteractionGraph,
    states: &[f64],
    threshold: f64,
    rng: &mut R,
) -> Result<InteractionGraph> {
    if states.len() != g.node_count() {
        return Err(Error::invalid(format!(
            "{} states for {} nodes",
            states.len(),
            g.node_count()
        )));
    }
    if threshold <= 0.0 {
        return Err(Error::invalid("rewiring threshold must be positive"));
    }
    let removals: Vec<(usize, usize)> = g
        .edges()
        .filter(|&(u, v)| (states[u] - states[v]).abs() >= threshold)
        .collect();
    let mut out = g.clone();
    for &(u, v) in &removals {
        out.remove_edge(u, v);
    }
    let n = g.node_count();
    for &(u, v) in &removals {
        let keep = if rng.random_bool(0.5) { u } else { v };
        let neighbors = out.neighbors(keep).expect("node in range");
        let candidates: Vec<usize> = (0..n)
            .filter(|&w| {
                w != keep && !neighbors.contains(&w) && (states[keep] - states[w]).abs() < threshold
            })
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let w = candidates[rng.random_range(0..candidates.len())];
        out.add_edge(keep, w);
    }
    Ok(out)
}

/// The `count` highest-degree nodes, ties broken by lower index.
pub fn top_degree_nodes(g: &InteractionGraph, count: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(g.degree(i)), i));
    order.truncate(count);
    order
}

/// The `count` lowest-degree nodes, ties broken by lower index.
pub fn bottom_degree_nodes(g: &InteractionGraph, count: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by_key(|&i| (g.degree(i), i));
    order.truncate(count);
    order
}
