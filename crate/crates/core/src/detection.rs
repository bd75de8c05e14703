//! Detection probabilities at the two output detectors.
//!
//! Closed forms are used where they are known exactly: the internal-blind
//! click probabilities for `N = 3`, and the four internal-resolved channels
//! for `N = 3`, `p = 1/2` in the Ramsey basis. Every other regime is
//! evaluated by projecting the propagated state vector.

use crate::mzi::{arm_vector, merge_at_bs2, propagate, Detector, InterferometerConfig};
use crate::state::{InternalBasis, Path, Spin, TieParams};

/// One of the four observable output channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Channel {
    pub detector: Detector,
    pub spin: Spin,
}

impl Channel {
    /// Fixed order `+↑, +↓, −↑, −↓`.
    pub const ALL: [Channel; 4] = [
        Channel::new(Detector::Plus, Spin::Up),
        Channel::new(Detector::Plus, Spin::Down),
        Channel::new(Detector::Minus, Spin::Up),
        Channel::new(Detector::Minus, Spin::Down),
    ];

    pub const fn new(detector: Detector, spin: Spin) -> Self {
        Self { detector, spin }
    }

    pub fn index(&self) -> usize {
        match (self.detector, self.spin) {
            (Detector::Plus, Spin::Up) => 0,
            (Detector::Plus, Spin::Down) => 1,
            (Detector::Minus, Spin::Up) => 2,
            (Detector::Minus, Spin::Down) => 3,
        }
    }

    pub fn label(&self) -> &'static str {
        ["+up", "+down", "-up", "-down"][self.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelProbabilities {
    pub p_plus_up: f64,
    pub p_plus_down: f64,
    pub p_minus_up: f64,
    pub p_minus_down: f64,
    /// Joint probability of arm A and internal ↑ right before the merger.
    pub pa_up: f64,
    pub pb_up: f64,
    pub pa_down: f64,
    pub pb_down: f64,
    /// Signed interference term of the ↑ channel.
    pub pab_up: f64,
    pub pab_down: f64,
}

impl ChannelProbabilities {
    pub fn channel(&self, ch: Channel) -> f64 {
        self.channels()[ch.index()]
    }

    /// Channel probabilities in the order of [`Channel::ALL`].
    pub fn channels(&self) -> [f64; 4] {
        [self.p_plus_up, self.p_plus_down, self.p_minus_up, self.p_minus_down]
    }

    pub fn joint(&self, path: Path, spin: Spin) -> f64 {
        match (path, spin) {
            (Path::A, Spin::Up) => self.pa_up,
            (Path::B, Spin::Up) => self.pb_up,
            (Path::A, Spin::Down) => self.pa_down,
            (Path::B, Spin::Down) => self.pb_down,
        }
    }

    pub fn interference(&self, spin: Spin) -> f64 {
        match spin {
            Spin::Up => self.pab_up,
            Spin::Down => self.pab_down,
        }
    }

    /// Marginal click probabilities `(P₊, P₋)` summed over the internal outcome.
    pub fn blind(&self) -> (f64, f64) {
        (
            self.p_plus_up + self.p_plus_down,
            self.p_minus_up + self.p_minus_down,
        )
    }

    pub fn total(&self) -> f64 {
        self.channels().iter().sum()
    }

    /// Largest violation of the normalization and decomposition identities.
    pub fn consistency_residual(&self) -> f64 {
        let mut worst = (self.total() - 1.0).abs();
        worst = worst.max((self.pa_up + self.pb_up + self.pa_down + self.pb_down - 1.0).abs());
        for spin in Spin::ALL {
            let base = self.joint(Path::A, spin) + self.joint(Path::B, spin);
            let ab = self.interference(spin);
            let plus = self.channel(Channel::new(Detector::Plus, spin));
            let minus = self.channel(Channel::new(Detector::Minus, spin));
            worst = worst.max((plus - 0.5 * (base + ab)).abs());
            worst = worst.max((minus - 0.5 * (base - ab)).abs());
        }
        worst
    }
}

/// Internal-blind click probabilities `(P₊, P₋)`.
pub fn blind_probabilities(params: &TieParams, cfg: &InterferometerConfig) -> (f64, f64) {
    if params.ratio_n() == 3 {
        blind_closed_form(params.p(), cfg.phase_difference())
    } else {
        oracle_blind_probabilities(params, cfg)
    }
}

/// `P_± = ½[1 ± (1−p)cos φ ± p cos 3φ]`, valid for `k₂ = 3k₁`.
pub fn blind_closed_form(p: f64, phi: f64) -> (f64, f64) {
    let m = (1.0 - p) * phi.cos() + p * (3.0 * phi).cos();
    (0.5 * (1.0 + m), 0.5 * (1.0 - m))
}

/// `P_± = ‖ψ_±‖²` from the propagated state.
pub fn oracle_blind_probabilities(params: &TieParams, cfg: &InterferometerConfig) -> (f64, f64) {
    let out = merge_at_bs2(&propagate(params, cfg));
    (out.norm_sqr(Detector::Plus), out.norm_sqr(Detector::Minus))
}

/// All channel probabilities, using the closed form when it applies.
pub fn channel_probabilities(
    params: &TieParams,
    cfg: &InterferometerConfig,
    basis: &InternalBasis,
) -> ChannelProbabilities {
    if params.p() == 0.5 && params.ratio_n() == 3 && *basis == InternalBasis::ramsey() {
        closed_form_channel_probabilities(cfg)
    } else {
        oracle_channel_probabilities(params, cfg, basis)
    }
}

/// Closed form for `p = 1/2`, `k₂ = 3k₁`, Ramsey basis.
///
/// The ↓ terms follow from the ↑ terms by flipping the sign of every cosine
/// except `cos φ` and `cos 3φ`.
pub fn closed_form_channel_probabilities(cfg: &InterferometerConfig) -> ChannelProbabilities {
    let pa = cfg.phi_a();
    let pb = cfg.phi_b();
    let phi = pa - pb;
    let single = |sign: f64, x: f64| 0.25 * (1.0 + sign * (2.0 * x).cos());
    let interf = |sign: f64| {
        0.25 * (phi.cos()
            + (3.0 * phi).cos()
            + sign * (3.0 * pb - pa).cos()
            + sign * (3.0 * pa - pb).cos())
    };

    let (pa_up, pb_up, pab_up) = (single(1.0, pa), single(1.0, pb), interf(1.0));
    let (pa_down, pb_down, pab_down) = (single(-1.0, pa), single(-1.0, pb), interf(-1.0));
    ChannelProbabilities {
        p_plus_up: 0.5 * (pa_up + pb_up + pab_up),
        p_plus_down: 0.5 * (pa_down + pb_down + pab_down),
        p_minus_up: 0.5 * (pa_up + pb_up - pab_up),
        p_minus_down: 0.5 * (pa_down + pb_down - pab_down),
        pa_up,
        pb_up,
        pa_down,
        pb_down,
        pab_up,
        pab_down,
    }
}

/// Brute-force channel probabilities from squared projections of the state vector.
pub fn oracle_channel_probabilities(
    params: &TieParams,
    cfg: &InterferometerConfig,
    basis: &InternalBasis,
) -> ChannelProbabilities {
    let state = propagate(params, cfg);
    let out = merge_at_bs2(&state);
    let arm_a = arm_vector(&state, Path::A);
    let arm_b = arm_vector(&state, Path::B);

    let channel = |d: Detector, s: Spin| basis.project(s, out.get(d)).norm_sqr();
    let single = |v: &[_; 2], s: Spin| 0.5 * basis.project(s, v).norm_sqr();
    let interf = |s: Spin| (basis.project(s, &arm_a).conj() * basis.project(s, &arm_b)).re;

    ChannelProbabilities {
        p_plus_up: channel(Detector::Plus, Spin::Up),
        p_plus_down: channel(Detector::Plus, Spin::Down),
        p_minus_up: channel(Detector::Minus, Spin::Up),
        p_minus_down: channel(Detector::Minus, Spin::Down),
        pa_up: single(&arm_a, Spin::Up),
        pb_up: single(&arm_b, Spin::Up),
        pa_down: single(&arm_a, Spin::Down),
        pb_down: single(&arm_b, Spin::Down),
        pab_up: interf(Spin::Up),
        pab_down: interf(Spin::Down),
    }
}

/// Number of strict sign changes along a sampled curve; exact zeros are skipped.
pub fn sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}
