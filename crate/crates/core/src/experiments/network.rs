//! Network-level experiments: flow-versus-connectivity placement sweeps,
//! parallel-route congestion, and the distributed placement comparison.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::{mean_se, sample_deployment, ExperimentConfig};
use crate::error::{Error, Result};
use crate::flow::{avg_max_flow, avg_max_flow_fixed};
use crate::graph::{
    algebraic_connectivity, build_disk_graph, occupy_relays, occupy_relays_bridge, Deployment,
    Graph, RelayEdgeModel,
};
use crate::placement::{distributed_place_with_model, greedy_place_with_model, ObjectiveKind};
use crate::rng::trial_rng;
use crate::routing::{overlap_stats, relay_routes, select_parallel_routes};

/// Placement scheme tag carried in result rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Lem,
    Lambda2,
    MaxFlow,
    DistributedLem,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Lem => "lem",
            Scheme::Lambda2 => "lambda2",
            Scheme::MaxFlow => "maxflow",
            Scheme::DistributedLem => "distributed-lem",
        }
    }

    fn objective(self) -> ObjectiveKind {
        match self {
            Scheme::Lem | Scheme::DistributedLem => ObjectiveKind::Lem,
            Scheme::Lambda2 => ObjectiveKind::Lambda2,
            Scheme::MaxFlow => ObjectiveKind::MaxFlow,
        }
    }
}

/// One (trial, K, scheme) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub k: usize,
    pub scheme: Scheme,
    pub avg_flow: f64,
    pub lambda2: f64,
}

fn flow_metric(cfg: &ExperimentConfig, g: &Graph) -> Result<f64> {
    match cfg.fixed_destination {
        None => Ok(avg_max_flow(g)),
        Some(d) => avg_max_flow_fixed(g, d),
    }
}

fn occupy_one(
    g: &Graph,
    dep: &Deployment,
    site: usize,
    model: RelayEdgeModel,
) -> Result<Graph> {
    match model {
        RelayEdgeModel::Vertex => occupy_relays(g, dep, &[site]),
        RelayEdgeModel::Bridge => occupy_relays_bridge(g, dep, &[site]),
    }
}

/// Per trial: sample a deployment, run the three greedy placement schemes
/// to K = k_max, and record average flow and algebraic connectivity at
/// every K (including the shared K = 0 baseline).
pub fn run_flow_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let per_trial: Vec<Vec<TrialRecord>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| flow_trial(cfg, t))
        .collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

fn flow_trial(cfg: &ExperimentConfig, trial: usize) -> Result<Vec<TrialRecord>> {
    let mut rng = trial_rng(cfg.seed, trial as u64);
    let dep = sample_deployment(cfg, &mut rng)?;
    let base = build_disk_graph(&dep);
    let flow0 = flow_metric(cfg, &base)?;
    let lambda0 = algebraic_connectivity(&base, true)?;
    let mut rows = Vec::with_capacity(3 * (cfg.k_max + 1));
    for scheme in [Scheme::Lem, Scheme::Lambda2, Scheme::MaxFlow] {
        let placement = greedy_place_with_model(
            &dep,
            scheme.objective(),
            cfg.k_max,
            cfg.gamma,
            cfg.relay_edge_model,
        )?;
        rows.push(TrialRecord {
            trial,
            k: 0,
            scheme,
            avg_flow: flow0,
            lambda2: lambda0,
        });
        let mut g = base.clone();
        for (i, &site) in placement.occupied_sites.iter().enumerate() {
            g = occupy_one(&g, &dep, site, cfg.relay_edge_model)?;
            rows.push(TrialRecord {
                trial,
                k: i + 1,
                scheme,
                avg_flow: flow_metric(cfg, &g)?,
                lambda2: algebraic_connectivity(&g, true)?,
            });
        }
    }
    Ok(rows)
}

pub fn flow_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from("trial,k,scheme,avg_flow,lambda2\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.trial,
            r.k,
            r.scheme.name(),
            r.avg_flow,
            r.lambda2
        );
    }
    out
}

/// Per-(scheme, K) trial means with standard errors, as a plain text table.
pub fn flow_summary(records: &[TrialRecord]) -> String {
    let mut out = String::from("scheme          k  avg_flow (mean +/- se)   lambda2 (mean +/- se)\n");
    for scheme in [
        Scheme::Lem,
        Scheme::Lambda2,
        Scheme::MaxFlow,
        Scheme::DistributedLem,
    ] {
        let ks: Vec<usize> = {
            let mut ks: Vec<usize> = records
                .iter()
                .filter(|r| r.scheme == scheme)
                .map(|r| r.k)
                .collect();
            ks.sort_unstable();
            ks.dedup();
            ks
        };
        for k in ks {
            let flows: Vec<f64> = records
                .iter()
                .filter(|r| r.scheme == scheme && r.k == k)
                .map(|r| r.avg_flow)
                .collect();
            let lams: Vec<f64> = records
                .iter()
                .filter(|r| r.scheme == scheme && r.k == k)
                .map(|r| r.lambda2)
                .collect();
            let (fm, fse) = mean_se(&flows);
            let (lm, lse) = mean_se(&lams);
            let _ = writeln!(
                out,
                "{:<15} {:>2}  {:>8.4} +/- {:<8.4}  {:>8.4} +/- {:<8.4}",
                scheme.name(),
                k,
                fm,
                fse,
                lm,
                lse
            );
        }
    }
    out
}

/// Overlap of the selected parallel route pair for one (trial, K, scheme).
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingRecord {
    pub trial: usize,
    pub k: usize,
    pub scheme: Scheme,
    /// (shared nodes, shared edges) of the selected pair; None when fewer
    /// than two relay-to-relay routes exist.
    pub overlap: Option<(usize, usize)>,
    /// Relay pairs with no connecting path.
    pub unreachable_pairs: usize,
}

/// Per trial and K in 3..=k_max: place relays (LEM and max-flow schemes
/// under the configured relay edge model), then compute all inter-relay
/// shortest routes on the physical vertex-model graph of the chosen
/// sites, select the LEM-maximizing pair, and record its overlap.
pub fn run_routing_experiment(cfg: &ExperimentConfig) -> Result<Vec<RoutingRecord>> {
    cfg.validate()?;
    if cfg.k_max < 3 {
        return Err(Error::Config(format!(
            "routing experiment needs k_max >= 3 to allow two parallel routes, got {}",
            cfg.k_max
        )));
    }
    let per_trial: Vec<Vec<RoutingRecord>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| routing_trial(cfg, t))
        .collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

fn routing_trial(cfg: &ExperimentConfig, trial: usize) -> Result<Vec<RoutingRecord>> {
    let mut rng = trial_rng(cfg.seed, trial as u64);
    let dep = sample_deployment(cfg, &mut rng)?;
    let base = build_disk_graph(&dep);
    let mut rows = Vec::new();
    for scheme in [Scheme::Lem, Scheme::MaxFlow] {
        let placement = greedy_place_with_model(
            &dep,
            scheme.objective(),
            cfg.k_max,
            cfg.gamma,
            cfg.relay_edge_model,
        )?;
        // routes run over relay vertices regardless of the placement model
        let mut g = base.clone();
        for (i, &site) in placement.occupied_sites.iter().enumerate() {
            g = occupy_relays(&g, &dep, &[site])?;
            let k = i + 1;
            if k < 3 {
                continue;
            }
            let prefix = crate::placement::Placement {
                occupied_sites: placement.occupied_sites[..k].to_vec(),
                objective: placement.objective,
                trace: placement.trace[..k].to_vec(),
            };
            let (routes, unreachable_pairs) = relay_routes(&g, &prefix, cfg.gamma)?;
            let overlap = if routes.len() >= 2 {
                let (a, b) = select_parallel_routes(&routes)?;
                Some(overlap_stats(&routes[a], &routes[b]))
            } else {
                None
            };
            rows.push(RoutingRecord {
                trial,
                k,
                scheme,
                overlap,
                unreachable_pairs,
            });
        }
    }
    Ok(rows)
}

/// Per-trial rows followed by per-(k, scheme) mean rows. Trials without a
/// valid route pair leave the overlap fields empty and are excluded from
/// the means; `valid_trials` counts what went in.
pub fn routing_csv(records: &[RoutingRecord]) -> String {
    let mut out =
        String::from("trial,k,scheme,shared_nodes,shared_edges,unreachable_pairs,valid_trials\n");
    for r in records {
        let (nodes, edges) = match r.overlap {
            Some((n, e)) => (n.to_string(), e.to_string()),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},",
            r.trial,
            r.k,
            r.scheme.name(),
            nodes,
            edges,
            r.unreachable_pairs
        );
    }
    let mut keys: Vec<(usize, Scheme)> = records.iter().map(|r| (r.k, r.scheme)).collect();
    keys.sort_by_key(|(k, s)| (*k, s.name()));
    keys.dedup();
    for (k, scheme) in keys {
        let group: Vec<&RoutingRecord> = records
            .iter()
            .filter(|r| r.k == k && r.scheme == scheme)
            .collect();
        let nodes: Vec<f64> = group
            .iter()
            .filter_map(|r| r.overlap.map(|(n, _)| n as f64))
            .collect();
        let edges: Vec<f64> = group
            .iter()
            .filter_map(|r| r.overlap.map(|(_, e)| e as f64))
            .collect();
        let unreachable: usize = group.iter().map(|r| r.unreachable_pairs).sum();
        let (nm, _) = mean_se(&nodes);
        let (em, _) = mean_se(&edges);
        let _ = writeln!(
            out,
            "mean,{},{},{},{},{},{}",
            k,
            scheme.name(),
            nm,
            em,
            unreachable,
            nodes.len()
        );
    }
    out
}

/// Which controller placed the relays in a [`DistributedRecord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlacementVariant {
    Centralized,
    Distributed,
}

impl PlacementVariant {
    pub fn name(self) -> &'static str {
        match self {
            PlacementVariant::Centralized => "centralized",
            PlacementVariant::Distributed => "distributed",
        }
    }
}

/// One (trial, K, variant) measurement of the distributed comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributedRecord {
    pub trial: usize,
    pub k: usize,
    pub variant: PlacementVariant,
    pub avg_flow: f64,
    pub lambda2: f64,
    /// Relays actually placed (regions without sites place none).
    pub relays_placed: usize,
}

/// Centralized versus distributed LEM placement, per trial and K.
pub fn run_distributed_experiment(cfg: &ExperimentConfig) -> Result<Vec<DistributedRecord>> {
    cfg.validate()?;
    let per_trial: Vec<Vec<DistributedRecord>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| distributed_trial(cfg, t))
        .collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

fn distributed_trial(cfg: &ExperimentConfig, trial: usize) -> Result<Vec<DistributedRecord>> {
    let mut rng = trial_rng(cfg.seed, trial as u64);
    let dep = sample_deployment(cfg, &mut rng)?;
    let base = build_disk_graph(&dep);
    let flow0 = flow_metric(cfg, &base)?;
    let lambda0 = algebraic_connectivity(&base, true)?;
    let mut rows = Vec::new();
    for variant in [PlacementVariant::Centralized, PlacementVariant::Distributed] {
        rows.push(DistributedRecord {
            trial,
            k: 0,
            variant,
            avg_flow: flow0,
            lambda2: lambda0,
            relays_placed: 0,
        });
    }
    let central = greedy_place_with_model(
        &dep,
        ObjectiveKind::Lem,
        cfg.k_max,
        cfg.gamma,
        cfg.relay_edge_model,
    )?;
    let mut g = base.clone();
    for (i, &site) in central.occupied_sites.iter().enumerate() {
        g = occupy_one(&g, &dep, site, cfg.relay_edge_model)?;
        rows.push(DistributedRecord {
            trial,
            k: i + 1,
            variant: PlacementVariant::Centralized,
            avg_flow: flow_metric(cfg, &g)?,
            lambda2: algebraic_connectivity(&g, true)?,
            relays_placed: i + 1,
        });
    }
    for k in 1..=cfg.k_max {
        let d = distributed_place_with_model(&dep, k, cfg.gamma, cfg.relay_edge_model)?;
        let g = match cfg.relay_edge_model {
            RelayEdgeModel::Vertex => occupy_relays(&base, &dep, &d.placement.occupied_sites)?,
            RelayEdgeModel::Bridge => {
                occupy_relays_bridge(&base, &dep, &d.placement.occupied_sites)?
            }
        };
        rows.push(DistributedRecord {
            trial,
            k,
            variant: PlacementVariant::Distributed,
            avg_flow: flow_metric(cfg, &g)?,
            lambda2: algebraic_connectivity(&g, true)?,
            relays_placed: d.placement.occupied_sites.len(),
        });
    }
    Ok(rows)
}

pub fn distributed_csv(records: &[DistributedRecord]) -> String {
    let mut out = String::from("trial,k,variant,avg_flow,lambda2,relays_placed\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.trial,
            r.k,
            r.variant.name(),
            r.avg_flow,
            r.lambda2,
            r.relays_placed
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.num_nodes = 8;
        cfg.num_sites = 9;
        cfg.k_max = 3;
        cfg.trials = 2;
        cfg.seed = 5;
        cfg
    }

    #[test]
    fn flow_experiment_is_deterministic() {
        let cfg = small_cfg();
        let a = run_flow_experiment(&cfg).unwrap();
        let b = run_flow_experiment(&cfg).unwrap();
        assert_eq!(flow_csv(&a), flow_csv(&b));
        assert_eq!(a.len(), 2 * 3 * 4);
    }

    #[test]
    fn baseline_rows_agree_across_schemes() {
        let records = run_flow_experiment(&small_cfg()).unwrap();
        for trial in 0..2 {
            let base: Vec<&TrialRecord> = records
                .iter()
                .filter(|r| r.trial == trial && r.k == 0)
                .collect();
            assert_eq!(base.len(), 3);
            for r in &base[1..] {
                assert_eq!(r.avg_flow, base[0].avg_flow);
                assert_eq!(r.lambda2, base[0].lambda2);
            }
        }
    }

    #[test]
    fn unsatisfiable_config_fails_before_running() {
        let mut cfg = small_cfg();
        cfg.k_max = 9;
        assert!(matches!(
            run_flow_experiment(&cfg),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn routing_needs_three_relays() {
        let mut cfg = small_cfg();
        cfg.k_max = 2;
        assert!(matches!(
            run_routing_experiment(&cfg),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn routing_rows_cover_k_three_and_up() {
        let cfg = small_cfg();
        let records = run_routing_experiment(&cfg).unwrap();
        assert_eq!(records.len(), 2 * 2); // trials x schemes, k = 3 only
        assert!(records.iter().all(|r| r.k == 3));
        let csv = routing_csv(&records);
        assert!(csv.starts_with(
            "trial,k,scheme,shared_nodes,shared_edges,unreachable_pairs,valid_trials\n"
        ));
        assert!(csv.lines().any(|l| l.starts_with("mean,3,lem,")));
    }

    #[test]
    fn both_relay_models_run_everywhere() {
        for model in [RelayEdgeModel::Vertex, RelayEdgeModel::Bridge] {
            let mut cfg = small_cfg();
            cfg.trials = 1;
            cfg.relay_edge_model = model;
            run_flow_experiment(&cfg).unwrap();
            run_routing_experiment(&cfg).unwrap();
            run_distributed_experiment(&cfg).unwrap();
        }
    }

    #[test]
    fn distributed_experiment_shape() {
        let cfg = small_cfg();
        let records = run_distributed_experiment(&cfg).unwrap();
        // per trial: 2 baseline rows + k_max centralized + k_max distributed
        assert_eq!(records.len(), 2 * (2 + 3 + 3));
        let csv = distributed_csv(&records);
        assert_eq!(csv, distributed_csv(&run_distributed_experiment(&cfg).unwrap()));
        for r in &records {
            if r.variant == PlacementVariant::Centralized {
                assert_eq!(r.relays_placed, r.k);
            }
        }
    }
}
