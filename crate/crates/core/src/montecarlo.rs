//! Seeded sampling of detection events and empirical error rates.
//!
//! Ground-truth labels come from a projective measurement in the
//! `{A, B} ⊗ {↑, ↓}` basis right before the merger, so `(path, spin)` follows
//! the joint `P_{X s}`. The detector outcome is then drawn from
//! `P(± | s) = P_{±s} / (P_{+s} + P_{−s})`, which reproduces the observable
//! channel probabilities exactly. Restricting the output amplitudes to a
//! single arm would give a 50/50 detector split and lose the interference
//! term, so it is not used.
//!
//! Two equivalent bookkeeping orders are provided: truth first (sample
//! `(X, s)`, then the detector) and observation first (sample the channel
//! `(±, s)`, then `X` from `P_{X s} / P_s`). Both realize the same joint law.
//!
//! Work is split into `workers` chunks. Chunk `i` draws from a ChaCha8 stream
//! seeded with `seed` and stream number `i`, so results depend only on
//! `(seed, n_trials, workers)` and not on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Beta, ContinuousCDF};

use crate::detection::{channel_probabilities, Channel, ChannelProbabilities};
use crate::error::{domain, Result};
use crate::exec::{map_indices, Execution};
use crate::inference::{tie_errors_from, tie_guess_rule, ErrorPair, PhaseSign};
use crate::mzi::{Detector, InterferometerConfig};
use crate::state::{InternalBasis, Path, Spin, TieParams};

/// z-score of a two-sided 95% normal interval.
pub const Z_95: f64 = 1.96;

/// Truth labels in the order `A↑, B↑, A↓, B↓`.
pub const TRUTH_ORDER: [(Path, Spin); 4] = [
    (Path::A, Spin::Up),
    (Path::B, Spin::Up),
    (Path::A, Spin::Down),
    (Path::B, Spin::Down),
];

fn truth_index(path: Path, spin: Spin) -> usize {
    match (path, spin) {
        (Path::A, Spin::Up) => 0,
        (Path::B, Spin::Up) => 1,
        (Path::A, Spin::Down) => 2,
        (Path::B, Spin::Down) => 3,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialRecord {
    pub truth_path: Path,
    pub truth_internal: Spin,
    pub detector: Detector,
    pub guess_path: Path,
    pub guess_phase_sign: PhaseSign,
}

impl TrialRecord {
    fn new(truth_path: Path, spin: Spin, detector: Detector) -> Self {
        let (guess_path, guess_phase_sign) = tie_guess_rule(Channel::new(detector, spin));
        Self {
            truth_path,
            truth_internal: spin,
            detector,
            guess_path,
            guess_phase_sign,
        }
    }

    pub fn channel(&self) -> Channel {
        Channel::new(self.detector, self.truth_internal)
    }

    pub fn wrong_way(&self) -> bool {
        self.guess_path != self.truth_path
    }
}

/// Index drawn from unnormalized non-negative weights; zero weights are never chosen.
fn categorical<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    let target = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, w) in weights.iter().enumerate() {
        let w = w.max(0.0);
        if w > 0.0 {
            acc += w;
            last_positive = i;
            if target < acc {
                return i;
            }
        }
    }
    last_positive
}

fn bernoulli_plus<R: Rng + ?Sized>(plus: f64, minus: f64, rng: &mut R) -> Detector {
    if categorical(&[plus, minus], rng) == 0 {
        Detector::Plus
    } else {
        Detector::Minus
    }
}

/// Truth first: `(X, s)` from the joint, then the detector given `s`.
pub fn sample_trial<R: Rng + ?Sized>(cp: &ChannelProbabilities, rng: &mut R) -> TrialRecord {
    let joint = TRUTH_ORDER.map(|(x, s)| cp.joint(x, s));
    let (path, spin) = TRUTH_ORDER[categorical(&joint, rng)];
    let detector = bernoulli_plus(
        cp.channel(Channel::new(Detector::Plus, spin)),
        cp.channel(Channel::new(Detector::Minus, spin)),
        rng,
    );
    TrialRecord::new(path, spin, detector)
}

/// Observation first: the channel `(±, s)`, then `X` given `s`.
pub fn sample_trial_observed_first<R: Rng + ?Sized>(cp: &ChannelProbabilities, rng: &mut R) -> TrialRecord {
    let ch = Channel::ALL[categorical(&cp.channels(), rng)];
    let path = if categorical(&[cp.joint(Path::A, ch.spin), cp.joint(Path::B, ch.spin)], rng) == 0 {
        Path::A
    } else {
        Path::B
    };
    TrialRecord::new(path, ch.spin, ch.detector)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Bookkeeping {
    #[default]
    TruthFirst,
    ObservedFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntervalMethod {
    #[default]
    Normal,
    ClopperPearson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CampaignConfig {
    pub n_trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub bookkeeping: Bookkeeping,
    pub interval: IntervalMethod,
    pub execution: Execution,
}

impl CampaignConfig {
    pub fn new(n_trials: u64, seed: u64) -> Self {
        Self {
            n_trials,
            seed,
            workers: 16,
            bookkeeping: Bookkeeping::default(),
            interval: IntervalMethod::default(),
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
}

impl ConfidenceInterval {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// `1.96 √(r(1−r)/n)`.
pub fn normal_half_width(rate: f64, n: u64) -> f64 {
    Z_95 * (rate * (1.0 - rate) / n as f64).sqrt()
}

pub fn confidence_interval(successes: u64, n: u64, method: IntervalMethod) -> ConfidenceInterval {
    let rate = successes as f64 / n as f64;
    match method {
        IntervalMethod::Normal => {
            let h = normal_half_width(rate, n);
            ConfidenceInterval {
                lower: (rate - h).max(0.0),
                upper: (rate + h).min(1.0),
            }
        }
        IntervalMethod::ClopperPearson => {
            let alpha = 0.05;
            let (k, n) = (successes as f64, n as f64);
            let lower = if successes == 0 {
                0.0
            } else {
                Beta::new(k, n - k + 1.0).map_or(0.0, |b| b.inverse_cdf(alpha / 2.0))
            };
            let upper = if successes as f64 == n {
                1.0
            } else {
                Beta::new(k + 1.0, n - k).map_or(1.0, |b| b.inverse_cdf(1.0 - alpha / 2.0))
            };
            ConfidenceInterval { lower, upper }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Tally {
    channels: [u64; 4],
    truth: [u64; 4],
    wrong_way: u64,
    wrong_phase: u64,
}

impl Tally {
    fn record(&mut self, t: &TrialRecord, true_sign: PhaseSign) {
        self.channels[t.channel().index()] += 1;
        self.truth[truth_index(t.truth_path, t.truth_internal)] += 1;
        self.wrong_way += u64::from(t.wrong_way());
        self.wrong_phase += u64::from(t.guess_phase_sign != true_sign);
    }

    fn merge(mut self, other: Tally) -> Tally {
        for i in 0..4 {
            self.channels[i] += other.channels[i];
            self.truth[i] += other.truth[i];
        }
        self.wrong_way += other.wrong_way;
        self.wrong_phase += other.wrong_phase;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignStats {
    pub n_trials: u64,
    pub seed: u64,
    pub workers: usize,
    /// Counts in the order of [`Channel::ALL`].
    pub channel_counts: [u64; 4],
    /// Counts in the order of [`TRUTH_ORDER`].
    pub truth_counts: [u64; 4],
    pub wrong_way_count: u64,
    pub wrong_phase_count: u64,
    pub wrong_way_rate: f64,
    pub wrong_phase_rate: f64,
    pub wrong_way_ci: ConfidenceInterval,
    pub wrong_phase_ci: ConfidenceInterval,
    /// Exact probabilities the campaign was sampled from.
    pub expected: ChannelProbabilities,
    pub expected_errors: ErrorPair,
}

impl CampaignStats {
    pub fn channel_frequency(&self, ch: Channel) -> f64 {
        self.channel_counts[ch.index()] as f64 / self.n_trials as f64
    }

    /// Normal-approximation 95% half-width of the wrong-way rate.
    pub fn ci_halfwidth_95(&self) -> f64 {
        normal_half_width(self.wrong_way_rate, self.n_trials)
    }
}

fn chunk_len(n: u64, workers: usize, i: usize) -> u64 {
    let w = workers as u64;
    n / w + u64::from((i as u64) < n % w)
}

/// Runs a seeded campaign of `n_trials` particles at a fixed configuration.
pub fn run_campaign(
    params: &TieParams,
    cfg: &InterferometerConfig,
    basis: &InternalBasis,
    campaign: &CampaignConfig,
) -> Result<CampaignStats> {
    if campaign.n_trials == 0 {
        return Err(domain("n_trials", 0.0, "n_trials >= 1"));
    }
    if campaign.workers == 0 {
        return Err(domain("workers", 0.0, "workers >= 1"));
    }
    cfg.validate()?;
    let cp = channel_probabilities(params, cfg, basis);
    let true_sign = PhaseSign::of(cfg.delta_phi_a);
    let sampler = match campaign.bookkeeping {
        Bookkeeping::TruthFirst => sample_trial::<ChaCha8Rng>,
        Bookkeeping::ObservedFirst => sample_trial_observed_first::<ChaCha8Rng>,
    };

    let tallies = map_indices(campaign.workers, campaign.execution, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(campaign.seed);
        rng.set_stream(i as u64);
        let mut tally = Tally::default();
        for _ in 0..chunk_len(campaign.n_trials, campaign.workers, i) {
            tally.record(&sampler(&cp, &mut rng), true_sign);
        }
        tally
    });
    let total = tallies.into_iter().fold(Tally::default(), Tally::merge);

    let n = campaign.n_trials;
    Ok(CampaignStats {
        n_trials: n,
        seed: campaign.seed,
        workers: campaign.workers,
        channel_counts: total.channels,
        truth_counts: total.truth,
        wrong_way_count: total.wrong_way,
        wrong_phase_count: total.wrong_phase,
        wrong_way_rate: total.wrong_way as f64 / n as f64,
        wrong_phase_rate: total.wrong_phase as f64 / n as f64,
        wrong_way_ci: confidence_interval(total.wrong_way, n, campaign.interval),
        wrong_phase_ci: confidence_interval(total.wrong_phase, n, campaign.interval),
        expected: cp,
        expected_errors: tie_errors_from(&cp, cfg.delta_phi_a),
    })
}
