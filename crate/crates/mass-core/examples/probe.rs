// Scratch probe for calibrating the experiment defaults. Not shipped.
use mass_core::agents::{Placement, PlacementMode};
use mass_core::engine::{self, PerturbTarget, Perturbation, SimConfig, Topology};
use mass_core::stats;

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(42);
    let base = SimConfig::worked_example(seed);

    // --- P1: three placements, shared graph + draws -------------------
    let mut finals_abs = Vec::new();
    let mut finals_signed = Vec::new();
    for (name, placement) in [
        ("uniform", Placement::none()),
        ("hub", Placement::new(PlacementMode::Hubs, 10)),
        ("periphery", Placement::new(PlacementMode::Periphery, 10)),
    ] {
        let mut cfg = base.clone();
        cfg.placement = placement;
        let trajs = engine::run_replications(&cfg).unwrap();
        let abs: Vec<f64> = trajs
            .iter()
            .map(|t| t.final_snapshot().mean_abs_state())
            .collect();
        let signed: Vec<f64> = trajs.iter().map(|t| t.final_snapshot().phi_mean).collect();
        println!(
            "P1 {name:9} mean|x|={:.4} sd={:.4}   signed mean={:+.4} sd={:.4}",
            stats::mean(&abs),
            stats::sample_std_dev(&abs),
            stats::mean(&signed),
            stats::sample_std_dev(&signed)
        );
        finals_abs.push(abs);
        finals_signed.push(signed);
    }
    let mwu_abs = stats::mann_whitney_u(&finals_abs[1], &finals_abs[0]).unwrap();
    let mwu_signed = stats::mann_whitney_u(&finals_signed[1], &finals_signed[0]).unwrap();
    println!(
        "P1 hub-vs-uniform MWU p: abs={:?} signed={:?}",
        mwu_abs.p_value, mwu_signed.p_value
    );
    let mwu_hp = stats::mann_whitney_u(&finals_abs[1], &finals_abs[2]).unwrap();
    println!("P1 hub-vs-periphery MWU p (abs): {:?}", mwu_hp.p_value);

    // --- P2: BA vs WS final variance ----------------------------------
    let mut final_vars = Vec::new();
    for topology in [
        Topology::BarabasiAlbert { m: 3 },
        Topology::WattsStrogatz { k: 6, p: 0.08 },
    ] {
        let mut cfg = base.clone();
        cfg.topology = topology;
        let trajs = engine::run_replications(&cfg).unwrap();
        let vars: Vec<f64> = trajs.iter().map(|t| t.final_snapshot().phi_var).collect();
        println!(
            "P2 {topology:?} mean final var={:.4} sd={:.4}",
            stats::mean(&vars),
            stats::sample_std_dev(&vars)
        );
        final_vars.push(vars);
    }
    let gap = (stats::mean(&final_vars[0]) - stats::mean(&final_vars[1])).abs();
    let r = base.replications as f64;
    let se = (stats::sample_std_dev(&final_vars[0]).powi(2) / r
        + stats::sample_std_dev(&final_vars[1]).powi(2) / r)
        .sqrt();
    println!("P2 gap={gap:.4} pooled SE={se:.4} ratio={:.2}", gap / se);
    let mwu_var = stats::mann_whitney_u(&final_vars[0], &final_vars[1]).unwrap();
    println!("P2 MWU p: {:?}", mwu_var.p_value);

    // --- P3: divergence range + hub vs periphery perturbation ---------
    let trajs = engine::run_replications(&base).unwrap();
    let ranges: Vec<f64> = trajs
        .iter()
        .map(|t| {
            let d = engine::divergence_series(t);
            let max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = d.iter().copied().fold(f64::INFINITY, f64::min);
            max - min
        })
        .collect();
    println!(
        "P3 divergence range: min={:.2e} median-ish mean={:.4}",
        ranges.iter().copied().fold(f64::INFINITY, f64::min),
        stats::mean(&ranges)
    );
    let at_step = 10;
    let horizon = at_step + 10;
    let mut hub_wins = 0;
    let mut hub_divs = Vec::new();
    let mut peri_divs = Vec::new();
    for rep in 0..base.replications {
        let base_traj = engine::run(&base, rep).unwrap();
        let mut hub_cfg = base.clone();
        hub_cfg.perturbation = Some(Perturbation {
            target: PerturbTarget::Hub,
            epsilon: 0.1,
            at_step,
        });
        let hub_traj = engine::run(&hub_cfg, rep).unwrap();
        let mut peri_cfg = base.clone();
        peri_cfg.perturbation = Some(Perturbation {
            target: PerturbTarget::Periphery,
            epsilon: 0.1,
            at_step,
        });
        let peri_traj = engine::run(&peri_cfg, rep).unwrap();
        let hub_div = engine::pair_divergence(&base_traj, &hub_traj).unwrap();
        let peri_div = engine::pair_divergence(&base_traj, &peri_traj).unwrap();
        if hub_div[horizon] > peri_div[horizon] {
            hub_wins += 1;
        }
        hub_divs.push(hub_div[horizon]);
        peri_divs.push(peri_div[horizon]);
    }
    println!(
        "P3 hub wins at horizon: {hub_wins}/{} (hub mean {:.5}, peri mean {:.5})",
        base.replications,
        stats::mean(&hub_divs),
        stats::mean(&peri_divs)
    );

    // --- P4: consecutive W1 + KS first/last ----------------------------
    let mut all_w1 = Vec::new();
    let mut pooled_first = Vec::new();
    let mut pooled_last = Vec::new();
    for t in &trajs {
        for w in t.snapshots.windows(2) {
            all_w1.push(stats::wasserstein1(&w[0].states, &w[1].states).unwrap());
        }
        pooled_first.extend_from_slice(&t.snapshots[0].states);
        pooled_last.extend_from_slice(&t.final_snapshot().states);
    }
    let ks = stats::ks_two_sample(&pooled_first, &pooled_last).unwrap();
    println!(
        "P4 mean W1={:.4}  KS D={:.4} p={:?}",
        stats::mean(&all_w1),
        ks.statistic,
        ks.p_value
    );

    // --- P6: BA vs WS trajectory divergence by t=5 --------------------
    let mut ba_cfg = base.clone();
    ba_cfg.rewire_enabled = true;
    let ba = engine::run(&ba_cfg, 0).unwrap();
    let mut ws_cfg = base.clone();
    ws_cfg.topology = Topology::WattsStrogatz { k: 6, p: 0.08 };
    let ws = engine::run(&ws_cfg, 0).unwrap();
    assert_eq!(ba.snapshots[0].states, ws.snapshots[0].states);
    let linf: f64 = ba.snapshots[5]
        .states
        .iter()
        .zip(&ws.snapshots[5].states)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("P6 L-inf at t=5: {linf:.5}");
}
