//! Link-level experiment: learn channel groups, build codebooks, and
//! measure achievable rates against the genie and matched-beam bounds.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::ExperimentConfig;
use crate::beamforming::{
    build_codebook, channel_spd, exp_correlation, genie_rate, link_rate, ridge_epsilon,
    sample_channel, train_classifier, Channel, UserLabel,
};
use crate::error::Result;
use crate::rng::trial_rng;

/// One (seed replica, antennas, training size) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformRecord {
    pub seed: u64,
    pub antennas: usize,
    pub train_size: usize,
    pub snr_db: f64,
    pub mean_rate_gml: f64,
    pub mean_rate_genie: f64,
    pub mean_rate_mrt: f64,
    pub accuracy: f64,
}

/// For every antenna count and training size: draw training channels
/// (half per user), learn the classifier, build the codebook from the
/// learned groups, and evaluate on a fresh test set of 0.4 * S channels
/// never used in training.
///
/// Replica r, antenna index mi, size index si draw from ChaCha8 stream
/// (r << 12) | (mi << 6) | si, so every combination is independent and
/// reproducible in isolation.
pub fn run_beamforming_experiment(cfg: &ExperimentConfig) -> Result<Vec<BeamformRecord>> {
    cfg.validate()?;
    let per_replica: Vec<Vec<BeamformRecord>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|replica| beamform_replica(cfg, replica))
        .collect::<Result<_>>()?;
    Ok(per_replica.into_iter().flatten().collect())
}

fn beamform_replica(cfg: &ExperimentConfig, replica: u64) -> Result<Vec<BeamformRecord>> {
    let snr = cfg.snr_linear();
    let mut rows = Vec::with_capacity(cfg.antennas.len() * cfg.train_sizes.len());
    for (mi, &m) in cfg.antennas.iter().enumerate() {
        for (si, &s) in cfg.train_sizes.iter().enumerate() {
            let stream = (replica << 12) | ((mi as u64) << 6) | si as u64;
            let mut rng = trial_rng(cfg.seed, stream);

            let q1 = exp_correlation(m, 0.5, std::f64::consts::PI)?;
            let q2 = exp_correlation(m, 0.5, 0.0)?;
            let n1 = s.div_ceil(2);
            let n2 = s - n1;
            let test_per_user = ((0.2 * s as f64).round() as usize).max(1);

            let mut train: Vec<(Channel, UserLabel)> = Vec::with_capacity(s);
            for _ in 0..n1 {
                train.push((sample_channel(&q1, &mut rng), UserLabel::User1));
            }
            for _ in 0..n2 {
                train.push((sample_channel(&q2, &mut rng), UserLabel::User2));
            }
            let mut test: Vec<(Channel, UserLabel)> = Vec::with_capacity(2 * test_per_user);
            for _ in 0..test_per_user {
                test.push((sample_channel(&q1, &mut rng), UserLabel::User1));
            }
            for _ in 0..test_per_user {
                test.push((sample_channel(&q2, &mut rng), UserLabel::User2));
            }

            let train_channels: Vec<Channel> = train.iter().map(|(h, _)| h.clone()).collect();
            let epsilon = ridge_epsilon(&train_channels, cfg.epsilon_scale);
            let samples: Vec<_> = train
                .iter()
                .map(|(h, l)| channel_spd(h, epsilon).map(|s| (s, *l)))
                .collect::<Result<_>>()?;
            let clf = train_classifier(&samples, cfg.svm_reg)?;

            // codebook from the learned grouping of the training channels
            let mut groups: Vec<Vec<Channel>> = vec![Vec::new(), Vec::new()];
            for ((h, _), (spd, _)) in train.iter().zip(&samples) {
                groups[clf.classify(spd)?.group_index()].push(h.clone());
            }
            let codebook = build_codebook(&groups, m, snr, cfg.angle_grid)?;

            let mut gml_sum = 0.0;
            let mut genie_sum = 0.0;
            let mut mrt_sum = 0.0;
            let mut correct = 0usize;
            for (h, label) in &test {
                let spd = channel_spd(h, epsilon)?;
                let predicted = clf.classify(&spd)?;
                if predicted == *label {
                    correct += 1;
                }
                gml_sum += link_rate(h, codebook.codeword_for(predicted), snr);
                let g = genie_rate(h, &codebook, snr);
                genie_sum += g.best_rate;
                mrt_sum += g.mrt_bound;
            }
            let n_test = test.len() as f64;
            rows.push(BeamformRecord {
                seed: replica,
                antennas: m,
                train_size: s,
                snr_db: cfg.snr_db,
                mean_rate_gml: gml_sum / n_test,
                mean_rate_genie: genie_sum / n_test,
                mean_rate_mrt: mrt_sum / n_test,
                accuracy: correct as f64 / n_test,
            });
        }
    }
    Ok(rows)
}

pub fn beamform_csv(records: &[BeamformRecord]) -> String {
    let mut out = String::from(
        "seed,m,s_train,snr_db,mean_rate_gml,mean_rate_genie,mean_rate_mrt,accuracy\n",
    );
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.seed,
            r.antennas,
            r.train_size,
            r.snr_db,
            r.mean_rate_gml,
            r.mean_rate_genie,
            r.mean_rate_mrt,
            r.accuracy
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.trials = 3;
        cfg.antennas = vec![2];
        cfg.train_sizes = vec![10, 20];
        cfg.seed = 11;
        cfg
    }

    #[test]
    fn beamform_experiment_is_deterministic() {
        let cfg = small_cfg();
        let a = run_beamforming_experiment(&cfg).unwrap();
        let b = run_beamforming_experiment(&cfg).unwrap();
        assert_eq!(beamform_csv(&a), beamform_csv(&b));
        assert_eq!(a.len(), 3 * 2);
    }

    #[test]
    fn genie_dominates_gml_in_every_row() {
        let records = run_beamforming_experiment(&small_cfg()).unwrap();
        for r in &records {
            assert!(r.mean_rate_genie >= r.mean_rate_gml, "{r:?}");
            assert!(r.mean_rate_mrt >= r.mean_rate_genie, "{r:?}");
            assert!((0.0..=1.0).contains(&r.accuracy));
        }
    }

    #[test]
    fn changing_one_size_does_not_disturb_other_combos() {
        // stream-per-combination isolation
        let a = run_beamforming_experiment(&small_cfg()).unwrap();
        let mut cfg = small_cfg();
        cfg.train_sizes = vec![10, 40];
        let b = run_beamforming_experiment(&cfg).unwrap();
        let pick = |rs: &[BeamformRecord]| -> Vec<BeamformRecord> {
            rs.iter().filter(|r| r.train_size == 10).cloned().collect()
        };
        assert_eq!(pick(&a), pick(&b));
    }
}
