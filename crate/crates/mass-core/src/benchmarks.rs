//! Benchmark scenarios: stability under interaction, sensitivity to
//! injected biased agents, archetype-composition stress and topology
//! variation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::agents::{self, AgentParams, Archetype};
use crate::engine::{
    self, replication_seed, NamedPlacement, SeedStream, SimConfig, Snapshot, Topology, Trajectory,
};
use crate::error::{Error, Result};
use crate::experiments::{
    finals, series_mean_abs, series_phi_mean, series_phi_var, series_w1, topology_label,
    W1_DRIFT_THRESHOLD,
};
use crate::report::{ConditionSeries, ExperimentId, ExperimentReport, HypothesisCheck, LabeledTest};
use crate::stats;

/// Default number of injected biased agents.
pub const DEFAULT_INJECT_COUNT: usize = 10;
/// Default fixed stance of injected agents.
pub const DEFAULT_INJECT_BIAS: f64 = 1.0;
/// Default injection step.
pub const DEFAULT_INJECT_AT_STEP: usize = 10;
/// Edges given to every injected agent.
pub const INJECT_ATTACHMENTS: usize = 3;
/// An agent counts as cascaded when its final stance differs from the
/// control run by more than this.
pub const CASCADE_THRESHOLD: f64 = 0.01;
/// The population has recovered when |phi_mean - control| falls below this.
pub const RECOVERY_THRESHOLD: f64 = 0.005;

/// Stability under interaction: drift of the state distribution plus
/// convergence diagnostics (last-quarter slopes of the mean and variance
/// series).
pub fn bench_stability(config: &SimConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let mut cfg = config.clone();
    cfg.perturbation = None;
    let trajs = engine::run_replications(&cfg)?;
    let phi_mean = series_phi_mean(&trajs);
    let phi_var = series_phi_var(&trajs);
    let w1 = series_w1(&trajs)?;
    let mean_w1 = stats::mean(&w1.iter().flatten().copied().collect::<Vec<f64>>());
    let mean_slopes = last_quarter_slopes(&phi_mean);
    let var_slopes = last_quarter_slopes(&phi_var);
    let initial_vars: Vec<f64> = phi_var.iter().map(|r| r[0]).collect();
    let final_vars = finals(&phi_var);

    let mut report = ExperimentReport::new(ExperimentId::Stability);
    report
        .conditions
        .push(ConditionSeries::from_rows("base", "phi_mean", phi_mean));
    report
        .conditions
        .push(ConditionSeries::from_rows("base", "phi_var", phi_var));
    report
        .conditions
        .push(ConditionSeries::from_rows("base", "w1_consecutive", w1));
    report.summary.insert("mean_w1".into(), mean_w1);
    report
        .summary
        .insert("mean_phi_mean_slope".into(), stats::mean(&mean_slopes));
    report
        .summary
        .insert("mean_phi_var_slope".into(), stats::mean(&var_slopes));
    report
        .summary
        .insert("mean_initial_var".into(), stats::mean(&initial_vars));
    report
        .summary
        .insert("mean_final_var".into(), stats::mean(&final_vars));
    report.h0.push(HypothesisCheck::new(
        "the state distribution is stable under interaction",
        mean_w1 > W1_DRIFT_THRESHOLD,
    ));
    Ok(report)
}

/// OLS slope of each row over its last quarter (at least two points).
fn last_quarter_slopes(rows: &[Vec<f64>]) -> Vec<f64> {
    rows.iter()
        .map(|row| {
            let last = row.len() - 1;
            let start = (3 * last / 4).min(last.saturating_sub(1));
            let xs: Vec<f64> = (start..=last).map(|t| t as f64).collect();
            let ys = row[start..=last].to_vec();
            match stats::ols_simple(&xs, &ys) {
                Ok(fit) => fit.slope,
                // constant predictor cannot happen (xs is a range); keep 0 for safety
                Err(_) => 0.0,
            }
        })
        .collect()
}

/// Sensitivity to perturbation: inject `inject_count` unwavering agents
/// with stance `inject_bias` immediately before step `at_step`, each
/// wired to three uniformly random pre-existing nodes, and compare
/// against an uninjected control run under identical seeds.
///
/// Reported per replication: the signed shift of phi_mean versus the
/// control at every step, the cascade size (original agents whose final
/// stance moved more than [`CASCADE_THRESHOLD`]) and the recovery time
/// (first t >= at_step with |shift| < [`RECOVERY_THRESHOLD`], if any).
pub fn bench_perturbation(
    config: &SimConfig,
    inject_count: usize,
    inject_bias: f64,
    at_step: usize,
) -> Result<ExperimentReport> {
    config.validate()?;
    if !(-1.0..=1.0).contains(&inject_bias) {
        return Err(Error::invalid("inject_bias must lie in [-1, 1]"));
    }
    if at_step < 1 || at_step > config.steps {
        return Err(Error::invalid("at_step must lie in 1..=steps"));
    }
    let mut cfg = config.clone();
    cfg.perturbation = None;
    let mut shift_rows = Vec::new();
    let mut cascade_sizes = Vec::new();
    let mut recovery_times = Vec::new();
    for rep in 0..cfg.replications {
        let control = engine::run(&cfg, rep)?;
        let injected = run_with_injection(&cfg, rep, inject_count, inject_bias, at_step)?;
        let shifts: Vec<f64> = injected
            .snapshots
            .iter()
            .zip(&control.snapshots)
            .map(|(inj, ctl)| inj.phi_mean - ctl.phi_mean)
            .collect();
        let original = control.final_snapshot().states.len();
        let cascade = injected.final_snapshot().states[..original]
            .iter()
            .zip(&control.final_snapshot().states[..original])
            .filter(|(a, b)| (*a - *b).abs() > CASCADE_THRESHOLD)
            .count();
        let recovery = (at_step..=cfg.steps).find(|&t| shifts[t].abs() < RECOVERY_THRESHOLD);
        cascade_sizes.push(cascade as f64);
        recovery_times.push(recovery);
        shift_rows.push(shifts);
    }
    let final_shifts: Vec<f64> = shift_rows.iter().map(|r| *r.last().unwrap()).collect();
    let recovered: Vec<f64> = recovery_times
        .iter()
        .flatten()
        .map(|&t| t as f64)
        .collect();

    let mut report = ExperimentReport::new(ExperimentId::Perturbation);
    report.conditions.push(ConditionSeries::from_rows(
        "injected",
        "phi_mean_shift",
        shift_rows,
    ));
    report
        .summary
        .insert("mean_final_shift".into(), stats::mean(&final_shifts));
    report
        .summary
        .insert("mean_cascade_size".into(), stats::mean(&cascade_sizes));
    report.summary.insert(
        "recovered_fraction".into(),
        recovered.len() as f64 / cfg.replications as f64,
    );
    if !recovered.is_empty() {
        report
            .summary
            .insert("mean_recovery_time".into(), stats::mean(&recovered));
    }
    report.summary.insert("inject_count".into(), inject_count as f64);
    report.summary.insert("inject_bias".into(), inject_bias);
    report.summary.insert("at_step".into(), at_step as f64);
    Ok(report)
}

/// Run one replication, appending biased agents immediately before
/// `at_step`. Wiring draws come from a dedicated injection stream so the
/// dynamics stream stays aligned with the control run.
fn run_with_injection(
    config: &SimConfig,
    replication: usize,
    inject_count: usize,
    inject_bias: f64,
    at_step: usize,
) -> Result<Trajectory> {
    let mut graph = engine::build_graph(config, replication)?;
    let mut population = engine::build_population(config, replication, &graph)?;
    let mut dyn_rng = ChaCha8Rng::seed_from_u64(replication_seed(
        config.master_seed,
        replication,
        SeedStream::Dynamics,
    ));
    let mut inject_rng = ChaCha8Rng::seed_from_u64(replication_seed(
        config.master_seed,
        replication,
        SeedStream::Injection,
    ));
    let mut snapshots = Vec::with_capacity(config.steps + 1);
    snapshots.push(Snapshot::capture(0, &population, &graph));
    for t in 1..=config.steps {
        if t == at_step {
            let existing = population.len();
            let attachments = INJECT_ATTACHMENTS.min(existing);
            for _ in 0..inject_count {
                let new_idx = graph.node_count();
                graph = graph.with_appended_nodes(1);
                let targets =
                    rand::seq::index::sample(&mut inject_rng, existing, attachments);
                for target in targets {
                    graph = graph.with_edge(new_idx, target)?;
                }
                population.states.push(agents::clip(inject_bias));
                population.params.push(AgentParams {
                    archetype: Archetype::Baseline,
                    susceptibility: 0.0,
                    intensity: 1.0,
                    gain: config.amplifier_gain,
                });
            }
        }
        let (next_population, next_graph) =
            engine::step(&population, &graph, config, &mut dyn_rng)?;
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

/// Heterogeneity stress test: run each archetype composition on
/// identical graphs and seeds and compare the final mean absolute
/// stances pairwise.
pub fn bench_heterogeneity(
    config: &SimConfig,
    compositions: &[NamedPlacement],
) -> Result<ExperimentReport> {
    config.validate()?;
    if compositions.is_empty() {
        return Err(Error::invalid(
            "heterogeneity benchmark needs at least one composition",
        ));
    }
    let mut report = ExperimentReport::new(ExperimentId::Heterogeneity);
    let mut final_abs = Vec::new();
    for comp in compositions {
        let mut cfg = config.clone();
        cfg.placement = comp.placement;
        cfg.perturbation = None;
        cfg.validate()?;
        let trajs = engine::run_replications(&cfg)?;
        let abs = series_mean_abs(&trajs);
        final_abs.push(finals(&abs));
        report.conditions.push(ConditionSeries::from_rows(
            comp.name.clone(),
            "mean_abs_state",
            abs,
        ));
        report.conditions.push(ConditionSeries::from_rows(
            comp.name.clone(),
            "phi_mean",
            series_phi_mean(&trajs),
        ));
        report.conditions.push(ConditionSeries::from_rows(
            comp.name.clone(),
            "phi_var",
            series_phi_var(&trajs),
        ));
    }
    for i in 0..compositions.len() {
        for j in (i + 1)..compositions.len() {
            let test = LabeledTest::new(
                format!("{}-vs-{}", compositions[i].name, compositions[j].name),
                stats::mann_whitney_u(&final_abs[i], &final_abs[j])?,
            );
            report.h0.push(HypothesisCheck::new(
                format!(
                    "compositions {} and {} are interchangeable",
                    compositions[i].name, compositions[j].name
                ),
                test.rejects(),
            ));
            report.tests.push(test);
        }
    }
    Ok(report)
}

/// Topology variation: the same agents and seeds across the listed
/// topologies, with drift series and the time-to-half-variance diffusion
/// proxy (first t with phi_var(t) <= phi_var(0) / 2).
pub fn bench_topology(config: &SimConfig, topologies: &[Topology]) -> Result<ExperimentReport> {
    config.validate()?;
    if topologies.is_empty() {
        return Err(Error::invalid(
            "topology benchmark needs at least one topology",
        ));
    }
    let mut report = ExperimentReport::new(ExperimentId::Topology);
    for &topology in topologies {
        let mut cfg = config.clone();
        cfg.topology = topology;
        cfg.perturbation = None;
        cfg.validate()?;
        let trajs = engine::run_replications(&cfg)?;
        let label = topology_label(topology);
        let phi_var = series_phi_var(&trajs);
        let half_times: Vec<Option<usize>> = phi_var
            .iter()
            .map(|row| {
                let target = row[0] / 2.0;
                row.iter().position(|v| *v <= target)
            })
            .collect();
        let reached: Vec<f64> = half_times.iter().flatten().map(|&t| t as f64).collect();
        report.summary.insert(
            format!("half_variance_fraction.{label}"),
            reached.len() as f64 / cfg.replications as f64,
        );
        if !reached.is_empty() {
            report
                .summary
                .insert(format!("mean_half_variance_time.{label}"), stats::mean(&reached));
        }
        report.conditions.push(ConditionSeries::from_rows(
            label.clone(),
            "phi_mean",
            series_phi_mean(&trajs),
        ));
        report.conditions.push(ConditionSeries::from_rows(
            label.clone(),
            "phi_var",
            phi_var,
        ));
        report.conditions.push(ConditionSeries::from_rows(
            label,
            "w1_consecutive",
            series_w1(&trajs)?,
        ));
    }
    Ok(report)
}
