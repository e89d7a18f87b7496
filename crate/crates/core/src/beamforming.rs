//! Spatially-correlated MISO channels, tangent-space max-margin channel
//! classification, beamforming codebook construction, and link rates.
//!
//! Channels follow an exponential transmit-correlation model: the
//! correlation matrix has entries t^(j-i) above the diagonal for a complex
//! coefficient t whose magnitude reflects antenna spacing and whose phase
//! reflects the user direction. Channel outer products h h^H (ridged to
//! stay positive definite) are classified in the log-tangent space, where
//! log-Euclidean distances are plain Euclidean ones, so a linear
//! soft-margin classifier there is exactly a max-margin classifier under
//! the log-Euclidean geometry.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::standard_complex_gaussian;
use crate::spd::SpdMatrix;

/// A transmit channel vector (one complex gain per relay antenna).
pub type Channel = DVector<Complex<f64>>;

/// The two user populations of the training scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UserLabel {
    User1,
    User2,
}

impl UserLabel {
    /// Classifier sign convention: User1 is the non-negative side.
    fn sign(self) -> f64 {
        match self {
            UserLabel::User1 => 1.0,
            UserLabel::User2 => -1.0,
        }
    }

    pub fn group_index(self) -> usize {
        match self {
            UserLabel::User1 => 0,
            UserLabel::User2 => 1,
        }
    }
}

/// Exponential transmit correlation matrix with coefficient t.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    spd: SpdMatrix,
    coefficient: Complex<f64>,
}

impl CorrelationMatrix {
    pub fn antennas(&self) -> usize {
        self.spd.dim()
    }

    pub fn coefficient(&self) -> Complex<f64> {
        self.coefficient
    }

    pub fn entries(&self) -> &DMatrix<Complex<f64>> {
        self.spd.entries()
    }

    pub fn spd(&self) -> &SpdMatrix {
        &self.spd
    }
}

/// Q[i][j] = t^(j-i) for j >= i (conjugate below), t = magnitude * e^{i*phase}.
/// Positive definite for magnitude < 1.
pub fn exp_correlation(antennas: usize, magnitude: f64, phase: f64) -> Result<CorrelationMatrix> {
    if !(0.0..1.0).contains(&magnitude) {
        return Err(Error::InvalidCorrelationMagnitude(magnitude));
    }
    let t = Complex::from_polar(magnitude, phase);
    let mut q = DMatrix::<Complex<f64>>::zeros(antennas, antennas);
    for i in 0..antennas {
        for j in 0..antennas {
            let p = t.powu(i.abs_diff(j) as u32);
            q[(i, j)] = if j >= i { p } else { p.conj() };
        }
    }
    Ok(CorrelationMatrix {
        spd: SpdMatrix::new(q)?,
        coefficient: t,
    })
}

/// Draws h = Q^{1/2} w with w a vector of i.i.d. CN(0, 1) entries, so
/// E[h h^H] = Q.
pub fn sample_channel<R: Rng>(q: &CorrelationMatrix, rng: &mut R) -> Channel {
    let m = q.antennas();
    let w = DVector::from_fn(m, |_, _| standard_complex_gaussian(rng));
    let sqrt = q
        .spd
        .sqrt()
        .expect("correlation matrices are positive definite");
    sqrt.entries() * w
}

/// Rank-one-plus-ridge SPD form of a channel: h h^H + epsilon * I.
pub fn channel_spd(h: &Channel, epsilon: f64) -> Result<SpdMatrix> {
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::NonPositiveEpsilon(epsilon));
    }
    let m = h.len();
    let mut s = h * h.adjoint();
    for i in 0..m {
        s[(i, i)] += Complex::new(epsilon, 0.0);
    }
    SpdMatrix::from_hermitian_unchecked(s)
}

/// Ridge scale: epsilon = scale * mean ||h||^2 over the training channels.
pub fn ridge_epsilon(channels: &[Channel], scale: f64) -> f64 {
    let mean_power =
        channels.iter().map(|h| h.norm_squared()).sum::<f64>() / channels.len().max(1) as f64;
    scale * mean_power
}

/// Linear max-margin classifier in the centered log-tangent feature space.
#[derive(Debug, Clone)]
pub struct GeometricClassifier {
    weights: DVector<f64>,
    bias: f64,
    feature_mean: DVector<f64>,
    antennas: usize,
    /// Human-readable description of the feature map.
    pub feature_map: String,
}

/// Objective convergence tolerance for training.
pub const TRAIN_TOL: f64 = 1e-6;
const TRAIN_MAX_ITER: usize = 100_000;

fn features(spd: &SpdMatrix) -> Result<DVector<f64>> {
    Ok(spd.log()?.vectorize_hermitian().0)
}

/// Trains a soft-margin classifier on log-vectorized tangent features by
/// minimizing 0.5 ||w||^2 + (reg / n) * sum_i max(0, 1 - y_i d_i)^2 with
/// deterministic gradient descent (backtracking line search) until the
/// objective changes by less than [`TRAIN_TOL`] relative. The per-sample
/// normalization makes the decision invariant to duplicating the
/// training set.
pub fn train_classifier(
    samples: &[(SpdMatrix, UserLabel)],
    reg: f64,
) -> Result<GeometricClassifier> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples(samples.len()));
    }
    let antennas = samples[0].0.dim();
    let mut saw = [false, false];
    for (s, label) in samples {
        if s.dim() != antennas {
            return Err(Error::DimensionMismatch {
                left: antennas,
                right: s.dim(),
            });
        }
        saw[label.group_index()] = true;
    }
    if !(saw[0] && saw[1]) {
        return Err(Error::SingleClassTrainingSet);
    }

    let n = samples.len();
    let x: Vec<DVector<f64>> = samples
        .iter()
        .map(|(s, _)| features(s))
        .collect::<Result<_>>()?;
    let y: Vec<f64> = samples.iter().map(|(_, l)| l.sign()).collect();
    let dim = x[0].len();
    let mut mean = DVector::<f64>::zeros(dim);
    for xi in &x {
        mean += xi;
    }
    mean /= n as f64;
    let xc: Vec<DVector<f64>> = x.iter().map(|xi| xi - &mean).collect();

    let c = reg / n as f64;
    let objective = |w: &DVector<f64>, b: f64| -> f64 {
        let mut loss = 0.0;
        for (xi, yi) in xc.iter().zip(&y) {
            let m = 1.0 - yi * (w.dot(xi) + b);
            if m > 0.0 {
                loss += m * m;
            }
        }
        0.5 * w.norm_squared() + c * loss
    };

    let mut w = DVector::<f64>::zeros(dim);
    let mut b = 0.0;
    let mut f = objective(&w, b);
    let mut step = 1.0;
    for _ in 0..TRAIN_MAX_ITER {
        let mut gw = w.clone();
        let mut gb = 0.0;
        for (xi, yi) in xc.iter().zip(&y) {
            let m = 1.0 - yi * (w.dot(xi) + b);
            if m > 0.0 {
                gw.axpy(-2.0 * c * yi * m, xi, 1.0);
                gb -= 2.0 * c * yi * m;
            }
        }
        let grad_sq = gw.norm_squared() + gb * gb;
        let (w2, b2, f2) = loop {
            let w2 = &w - &gw * step;
            let b2 = b - gb * step;
            let f2 = objective(&w2, b2);
            if f2 <= f - 0.5 * step * grad_sq || step < 1e-18 {
                break (w2, b2, f2);
            }
            step *= 0.5;
        };
        let converged = (f - f2).abs() <= TRAIN_TOL * f.max(1.0);
        w = w2;
        b = b2;
        f = f2;
        if converged {
            break;
        }
        step *= 1.3;
    }

    Ok(GeometricClassifier {
        weights: w,
        bias: b,
        feature_mean: mean,
        antennas,
        feature_map: format!(
            "centered hermitian log-vectorization, {dim} features over {antennas} antennas"
        ),
    })
}

impl GeometricClassifier {
    pub fn antennas(&self) -> usize {
        self.antennas
    }

    /// Signed distance-like score; User1 on the non-negative side.
    pub fn decision_value(&self, sample: &SpdMatrix) -> Result<f64> {
        if sample.dim() != self.antennas {
            return Err(Error::DimensionMismatch {
                left: self.antennas,
                right: sample.dim(),
            });
        }
        let x = features(sample)?;
        Ok(self.weights.dot(&(x - &self.feature_mean)) + self.bias)
    }

    pub fn classify(&self, sample: &SpdMatrix) -> Result<UserLabel> {
        Ok(if self.decision_value(sample)? >= 0.0 {
            UserLabel::User1
        } else {
            UserLabel::User2
        })
    }
}

/// Unit-norm array response of an M-antenna uniform array at
/// half-wavelength spacing: (1/sqrt M) (1, e^{i pi cos theta}, ...,
/// e^{i pi (M-1) cos theta}).
pub fn steering_vector(antennas: usize, theta: f64) -> Channel {
    let psi = std::f64::consts::PI * theta.cos();
    let scale = 1.0 / (antennas as f64).sqrt();
    DVector::from_fn(antennas, |k, _| {
        Complex::from_polar(scale, psi * k as f64)
    })
}

/// One codeword per learned channel group.
#[derive(Debug, Clone)]
pub struct Codebook {
    codewords: Vec<Channel>,
    thetas: Vec<f64>,
}

impl Codebook {
    pub fn codewords(&self) -> &[Channel] {
        &self.codewords
    }

    pub fn codeword_for(&self, label: UserLabel) -> &Channel {
        &self.codewords[label.group_index()]
    }

    pub fn theta_for(&self, label: UserLabel) -> f64 {
        self.thetas[label.group_index()]
    }
}

/// Achievable rate log2(1 + snr |h^H c|^2) in bits/s/Hz (snr linear).
pub fn link_rate(h: &Channel, codeword: &Channel, snr: f64) -> f64 {
    let gain = codeword.dotc(h).norm_sqr();
    (1.0 + snr * gain).log2()
}

/// Grid-searches the steering angle maximizing the mean rate over each
/// group's channels (`angle_grid` uniform points over [0, pi], ties to the
/// smallest angle) and returns one codeword per group.
pub fn build_codebook(
    groups: &[Vec<Channel>],
    antennas: usize,
    snr: f64,
    angle_grid: usize,
) -> Result<Codebook> {
    if angle_grid < 2 {
        return Err(Error::InvalidAngleGrid(angle_grid));
    }
    let mut codewords = Vec::with_capacity(groups.len());
    let mut thetas = Vec::with_capacity(groups.len());
    for (gi, channels) in groups.iter().enumerate() {
        if channels.is_empty() {
            return Err(Error::EmptyChannelGroup(gi));
        }
        let mut best: Option<(f64, f64, Channel)> = None;
        for k in 0..angle_grid {
            let theta = k as f64 * std::f64::consts::PI / (angle_grid - 1) as f64;
            let c = steering_vector(antennas, theta);
            let mean_rate = channels.iter().map(|h| link_rate(h, &c, snr)).sum::<f64>()
                / channels.len() as f64;
            if best.as_ref().is_none_or(|(v, _, _)| mean_rate > *v) {
                best = Some((mean_rate, theta, c));
            }
        }
        let (_, theta, c) = best.expect("grid has at least two points");
        codewords.push(c);
        thetas.push(theta);
    }
    Ok(Codebook { codewords, thetas })
}

/// Best-of-codebook rate for one channel, with the unconstrained
/// matched-beam bound reported alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenieRate {
    /// max over codewords of the link rate
    pub best_rate: f64,
    /// log2(1 + snr ||h||^2), the per-channel maximum over all unit beams
    pub mrt_bound: f64,
}

pub fn genie_rate(h: &Channel, codebook: &Codebook, snr: f64) -> GenieRate {
    let best_rate = codebook
        .codewords
        .iter()
        .map(|c| link_rate(h, c, snr))
        .fold(f64::NEG_INFINITY, f64::max);
    GenieRate {
        best_rate,
        mrt_bound: (1.0 + snr * h.norm_squared()).log2(),
    }
}
