//! Seeded Monte Carlo experiments and their CSV emission.
//!
//! Every experiment is a pure function of its configuration: trial t
//! draws from ChaCha8 stream t of the configured seed, trials run
//! concurrently, and rows are assembled in trial order, so reruns produce
//! byte-identical CSV. Placement searches inside the experiments are
//! greedy, which is prefix-stable: one K = k_max search per scheme yields
//! the placements for every smaller K.

mod config;
mod link;
mod network;

pub use config::ExperimentConfig;
pub use link::{beamform_csv, run_beamforming_experiment, BeamformRecord};
pub use network::{
    distributed_csv, flow_csv, flow_summary, routing_csv, run_distributed_experiment,
    run_flow_experiment, run_routing_experiment, DistributedRecord, PlacementVariant,
    RoutingRecord, Scheme, TrialRecord,
};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::{square_site_grid, Deployment, Point};

/// Draws one deployment: nodes i.i.d. uniform over the area (x then y per
/// node, in index order), candidate sites on the square grid.
pub fn sample_deployment(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<Deployment> {
    let nodes = (0..cfg.num_nodes)
        .map(|_| {
            let x = rng.random::<f64>() * cfg.area.0;
            let y = rng.random::<f64>() * cfg.area.1;
            Point::new(x, y)
        })
        .collect();
    let sites = square_site_grid(cfg.num_sites, cfg.area)?;
    Deployment::new(nodes, sites, cfg.disk_radius, cfg.area)
}

/// Mean and standard error of the mean.
pub(crate) fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
