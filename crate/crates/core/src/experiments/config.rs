//! Experiment configuration: defaults, key=value files, validation.

use crate::error::{Error, Result};
use crate::graph::RelayEdgeModel;

/// All knobs of the Monte Carlo harness. Defaults follow the standard
/// simulation setup: 6x6 area, disk radius 2, 20 nodes, 16 candidate
/// sites on a 4x4 grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub area: (f64, f64),
    pub disk_radius: f64,
    pub num_nodes: usize,
    pub num_sites: usize,
    pub gamma: f64,
    /// Relays are evaluated for K = 1..=k_max (plus the K = 0 baseline).
    pub k_max: usize,
    pub trials: usize,
    pub seed: u64,
    /// How occupying a site changes the graph for placement objectives and
    /// flow/connectivity metrics. The default is `Bridge`: a relay adds
    /// direct edges between the node pairs it can serve, keeping every
    /// Laplacian on the baseline's dimension. Routing always runs over
    /// relay vertices regardless of this setting.
    pub relay_edge_model: RelayEdgeModel,
    pub snr_db: f64,
    /// Antenna counts swept by the beamforming experiment.
    pub antennas: Vec<usize>,
    /// Training-set sizes swept by the beamforming experiment.
    pub train_sizes: Vec<usize>,
    /// Steering-angle grid points over [0, pi] for codebook search.
    pub angle_grid: usize,
    /// Soft-margin regularization constant.
    pub svm_reg: f64,
    /// Channel ridge: epsilon = epsilon_scale * mean ||h||^2.
    pub epsilon_scale: f64,
    /// Average flow over all destinations (None) or against one fixed
    /// destination node.
    pub fixed_destination: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            area: (6.0, 6.0),
            disk_radius: 2.0,
            num_nodes: 20,
            num_sites: 16,
            gamma: 0.5,
            k_max: 5,
            trials: 200,
            seed: 1,
            relay_edge_model: RelayEdgeModel::Bridge,
            snr_db: 10.0,
            antennas: vec![2, 4],
            train_sizes: vec![20, 40, 100, 200],
            angle_grid: 5,
            svm_reg: 1.0,
            epsilon_scale: 1e-3,
            fixed_destination: None,
        }
    }
}

impl ExperimentConfig {
    pub fn snr_linear(&self) -> f64 {
        10f64.powf(self.snr_db / 10.0)
    }

    /// Rejects unsatisfiable configurations before any trial runs.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.num_nodes < 2 {
            return fail(format!("num_nodes must be >= 2, got {}", self.num_nodes));
        }
        if self.num_sites < 1 {
            return fail("num_sites must be >= 1".into());
        }
        if self.k_max == 0 || self.k_max >= self.num_sites {
            return fail(format!(
                "k_max must satisfy 1 <= k_max < num_sites ({} vs {})",
                self.k_max, self.num_sites
            ));
        }
        if self.trials == 0 {
            return fail("trials must be >= 1".into());
        }
        if self.trials as u64 > (1 << 50) {
            return fail("trials too large for stream derivation".into());
        }
        if self.gamma <= 0.0 || !self.gamma.is_finite() {
            return fail(format!("gamma must be positive, got {}", self.gamma));
        }
        if self.disk_radius <= 0.0 || self.area.0 <= 0.0 || self.area.1 <= 0.0 {
            return fail("disk_radius and area must be positive".into());
        }
        if !self.snr_db.is_finite() {
            return fail("snr_db must be finite".into());
        }
        if self.antennas.is_empty() || self.train_sizes.is_empty() {
            return fail("antennas and train_sizes must be non-empty".into());
        }
        if self.antennas.len() > 64 || self.train_sizes.len() > 64 {
            return fail("antennas/train_sizes limited to 64 entries each".into());
        }
        if self.antennas.iter().any(|&m| m == 0) {
            return fail("antenna counts must be >= 1".into());
        }
        if let Some(s) = self.train_sizes.iter().find(|&&s| s < 4) {
            return fail(format!("training size {s} too small to split (need >= 4)"));
        }
        if self.angle_grid < 2 {
            return fail(format!("angle_grid must be >= 2, got {}", self.angle_grid));
        }
        if self.svm_reg <= 0.0 || self.epsilon_scale <= 0.0 {
            return fail("svm_reg and epsilon_scale must be positive".into());
        }
        if let Some(d) = self.fixed_destination {
            if d >= self.num_nodes {
                return fail(format!(
                    "fixed_destination {d} out of range (num_nodes = {})",
                    self.num_nodes
                ));
            }
        }
        Ok(())
    }

    /// Parses a flat `key=value` file (one pair per line, `#` comments)
    /// on top of the defaults.
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value, got `{line}`", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    /// Applies one key=value pair (used by both file parsing and CLI
    /// overrides).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("cannot parse {key}=`{value}`")))
        }
        fn list(key: &str, value: &str) -> Result<Vec<usize>> {
            value
                .split(',')
                .map(|v| num::<usize>(key, v.trim()))
                .collect()
        }
        match key {
            "area_width" => self.area.0 = num(key, value)?,
            "area_height" => self.area.1 = num(key, value)?,
            "disk_radius" => self.disk_radius = num(key, value)?,
            "num_nodes" => self.num_nodes = num(key, value)?,
            "num_sites" => self.num_sites = num(key, value)?,
            "gamma" => self.gamma = num(key, value)?,
            "k_max" => self.k_max = num(key, value)?,
            "trials" => self.trials = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "relay_edge_model" => {
                self.relay_edge_model = match value {
                    "vertex" => RelayEdgeModel::Vertex,
                    "bridge" => RelayEdgeModel::Bridge,
                    other => {
                        return Err(Error::Config(format!(
                            "relay_edge_model must be vertex|bridge, got `{other}`"
                        )))
                    }
                }
            }
            "snr_db" => self.snr_db = num(key, value)?,
            "antennas" => self.antennas = list(key, value)?,
            "train_sizes" => self.train_sizes = list(key, value)?,
            "angle_grid" => self.angle_grid = num(key, value)?,
            "svm_reg" => self.svm_reg = num(key, value)?,
            "epsilon_scale" => self.epsilon_scale = num(key, value)?,
            "fixed_destination" => {
                self.fixed_destination = if value == "none" {
                    None
                } else {
                    Some(num(key, value)?)
                }
            }
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ExperimentConfig::default().validate().unwrap();
    }

    #[test]
    fn file_overrides_defaults() {
        let cfg = ExperimentConfig::from_text(
            "# comment\n\
             trials = 10\n\
             seed=42\n\
             antennas = 2, 4, 8\n\
             relay_edge_model = vertex\n",
        )
        .unwrap();
        assert_eq!(cfg.trials, 10);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.antennas, vec![2, 4, 8]);
        assert_eq!(cfg.relay_edge_model, RelayEdgeModel::Vertex);
        assert_eq!(cfg.num_nodes, 20);
    }

    #[test]
    fn unknown_keys_and_bad_values_are_config_errors() {
        assert!(matches!(
            ExperimentConfig::from_text("bogus = 1\n"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            ExperimentConfig::from_text("trials = ten\n"),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            ExperimentConfig::from_text("just a line\n"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn unsatisfiable_k_is_rejected() {
        let mut cfg = ExperimentConfig::default();
        cfg.k_max = 16;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg.k_max = 0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn tiny_training_sizes_are_rejected() {
        let mut cfg = ExperimentConfig::default();
        cfg.train_sizes = vec![3];
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }
}
