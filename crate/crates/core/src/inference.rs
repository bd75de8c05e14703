//! Path and phase-sign inference from detector clicks, and the error rates of
//! the entangled scheme versus an in-arm which-path detector.

use crate::detection::{channel_probabilities, Channel, ChannelProbabilities};
use crate::error::{domain, Result};
use crate::mzi::{Detector, InterferometerConfig};
use crate::state::{InternalBasis, Path, Spin, TieParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseSign {
    Positive,
    Negative,
}

impl PhaseSign {
    /// Sign of an arm deviation; zero counts as positive.
    pub fn of(delta: f64) -> Self {
        if delta < 0.0 {
            PhaseSign::Negative
        } else {
            PhaseSign::Positive
        }
    }

    pub fn symbol(&self) -> char {
        match self {
            PhaseSign::Positive => '+',
            PhaseSign::Negative => '-',
        }
    }
}

/// Expected detector counts for `n_in` particles in each internal channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountStatistics {
    pub n_in: f64,
    /// `(N₊)_↑ − (N₋)_↑`.
    pub delta_n_up: f64,
    pub delta_n_down: f64,
    /// `(N₊)_↑ + (N₋)_↑`.
    pub n_tot_up: f64,
    pub n_tot_down: f64,
}

pub fn expected_counts(
    params: &TieParams,
    cfg: &InterferometerConfig,
    basis: &InternalBasis,
    n_in: f64,
) -> Result<CountStatistics> {
    if !(n_in.is_finite() && n_in > 0.0) {
        return Err(domain("n_in", n_in, "n_in > 0"));
    }
    let cp = channel_probabilities(params, cfg, basis);
    Ok(counts_from(&cp, n_in))
}

pub(crate) fn counts_from(cp: &ChannelProbabilities, n_in: f64) -> CountStatistics {
    CountStatistics {
        n_in,
        delta_n_up: n_in * cp.pab_up,
        delta_n_down: n_in * cp.pab_down,
        n_tot_up: n_in * (cp.pa_up + cp.pb_up),
        n_tot_down: n_in * (cp.pa_down + cp.pb_down),
    }
}

/// Guess attached to each observed channel at the working point
/// `φ̄_A = π/2`, `φ̄_B = π`.
///
/// ↑ points to arm B and ↓ to arm A. A `−` click indicates `δφ_A > 0`, since
/// the ↑ imbalance falls as `−N_in δφ_A`.
pub fn tie_guess_rule(channel: Channel) -> (Path, PhaseSign) {
    let path = match channel.spin {
        Spin::Up => Path::B,
        Spin::Down => Path::A,
    };
    let sign = match channel.detector {
        Detector::Plus => PhaseSign::Negative,
        Detector::Minus => PhaseSign::Positive,
    };
    (path, sign)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorPair {
    pub wrong_way: f64,
    pub wrong_phase: f64,
}

/// Exact per-particle error probabilities of the guess rule.
///
/// Wrong way is `P_{A↑} + P_{B↓}`. Wrong phase is the probability that the
/// detector contradicting the true sign of `δφ_A` clicks, which is `P₊` for
/// `δφ_A ≥ 0` and `P₋` otherwise.
pub fn tie_error_probabilities(
    params: &TieParams,
    cfg: &InterferometerConfig,
    basis: &InternalBasis,
) -> ErrorPair {
    let cp = channel_probabilities(params, cfg, basis);
    tie_errors_from(&cp, cfg.delta_phi_a)
}

pub(crate) fn tie_errors_from(cp: &ChannelProbabilities, delta_phi_a: f64) -> ErrorPair {
    let (plus, minus) = cp.blind();
    ErrorPair {
        wrong_way: cp.pa_up + cp.pb_down,
        wrong_phase: match PhaseSign::of(delta_phi_a) {
            PhaseSign::Positive => plus,
            PhaseSign::Negative => minus,
        },
    }
}

/// Conventional which-path detector inside one arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardDetectorModel {
    d_s: f64,
}

impl StandardDetectorModel {
    pub fn new(d_s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&d_s) {
            return Err(domain("d_s", d_s, "range [0, 1]"));
        }
        Ok(Self { d_s })
    }

    pub fn distinguishability(&self) -> f64 {
        self.d_s
    }

    /// `V = √(1 − D_S²)`.
    pub fn visibility(&self) -> f64 {
        (1.0 - self.d_s * self.d_s).sqrt()
    }

    /// Output click probabilities `½ ± V cos φ / 2`.
    pub fn blind_probabilities(&self, phi: f64) -> (f64, f64) {
        let m = self.visibility() * phi.cos();
        (0.5 * (1.0 + m), 0.5 * (1.0 - m))
    }
}

pub fn standard_error_probabilities(model: &StandardDetectorModel, delta_phi: f64) -> ErrorPair {
    ErrorPair {
        wrong_way: 0.5 * (1.0 - model.distinguishability()),
        wrong_phase: 0.5 * (1.0 - model.visibility() * delta_phi.abs()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub abs_delta_phi: f64,
    pub tie: ErrorPair,
    pub standard: ErrorPair,
}

impl ComparisonRow {
    pub fn tie_better_way(&self) -> bool {
        self.tie.wrong_way < self.standard.wrong_way
    }

    pub fn tie_better_phase(&self) -> bool {
        self.tie.wrong_phase < self.standard.wrong_phase
    }

    /// TIE is strictly lower on both error channels.
    pub fn tie_dominates(&self) -> bool {
        self.tie_better_way() && self.tie_better_phase()
    }
}

/// Error rates of both strategies over a grid of `|δφ_A|` values.
///
/// The entangled scheme is evaluated at `base` with `δφ_A` replaced by each
/// grid value; `δφ_B` is kept from `base`.
pub fn compare_strategies(
    params: &TieParams,
    base: &InterferometerConfig,
    basis: &InternalBasis,
    model: &StandardDetectorModel,
    abs_delta_phi: &[f64],
) -> Vec<ComparisonRow> {
    abs_delta_phi
        .iter()
        .map(|&d| {
            let cfg = base.with_deviations(d.abs(), base.delta_phi_b);
            ComparisonRow {
                abs_delta_phi: d.abs(),
                tie: tie_error_probabilities(params, &cfg, basis),
                standard: standard_error_probabilities(model, d),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn half3() -> TieParams {
        TieParams::new(0.5, 3).unwrap()
    }

    fn at(delta_a: f64, delta_b: f64) -> InterferometerConfig {
        InterferometerConfig::operating_point().with_deviations(delta_a, delta_b)
    }

    fn tie(delta_a: f64) -> ErrorPair {
        tie_error_probabilities(&half3(), &at(delta_a, 0.0), &InternalBasis::ramsey())
    }

    #[test]
    fn counts_near_working_point() {
        let c = expected_counts(&half3(), &at(0.01, 0.0), &InternalBasis::ramsey(), 1e6).unwrap();
        // δN_↑ = N_in (sin δ − sin 3δ)/2
        let exact = 0.5e6 * (0.01f64.sin() - 0.03f64.sin());
        assert_abs_diff_eq!(c.delta_n_up, exact, epsilon = 1e-8);
        assert!((c.delta_n_up + 1e4).abs() < 3.0);
        // N_tot↑ = N_in (1/2 + (1 − cos 2δ)/4)
        assert_abs_diff_eq!(c.n_tot_up, 1e6 * (0.5 + 0.25 * (1.0 - 0.02f64.cos())), epsilon = 1e-8);
        assert!((c.n_tot_up - 0.5e6 * (1.0 + 1e-4)).abs() < 1e-2);
        assert_abs_diff_eq!(c.n_tot_up + c.n_tot_down, 1e6, epsilon = 1e-3);

        let c = expected_counts(&half3(), &at(0.0, 0.0), &InternalBasis::ramsey(), 1e6).unwrap();
        assert_abs_diff_eq!(c.delta_n_up, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.n_tot_up, 0.5e6, epsilon = 1e-9);
    }

    #[test]
    fn counts_reject_nonpositive_input() {
        for n in [0.0, -5.0] {
            assert!(expected_counts(&half3(), &at(0.0, 0.0), &InternalBasis::ramsey(), n).is_err());
        }
    }

    #[test]
    fn guess_rule_table() {
        use crate::mzi::Detector::*;
        use crate::state::Spin::*;
        assert_eq!(tie_guess_rule(Channel::new(Plus, Up)), (Path::B, PhaseSign::Negative));
        assert_eq!(tie_guess_rule(Channel::new(Minus, Down)), (Path::A, PhaseSign::Positive));
        assert_eq!(tie_guess_rule(Channel::new(Plus, Down)), (Path::A, PhaseSign::Negative));
        assert_eq!(tie_guess_rule(Channel::new(Minus, Up)), (Path::B, PhaseSign::Positive));
    }

    #[test]
    fn tie_error_examples() {
        let e = tie(0.1);
        assert_abs_diff_eq!(e.wrong_way, 0.25 * (1.0 - 0.2f64.cos()), epsilon = 1e-15);
        // P₊ = ½ + (sin δ − sin 3δ)/4
        assert_abs_diff_eq!(e.wrong_phase, 0.5 + 0.25 * (0.1f64.sin() - 0.3f64.sin()), epsilon = 1e-15);

        let e = tie(0.0);
        assert_abs_diff_eq!(e.wrong_way, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.wrong_phase, 0.5, epsilon = 1e-15);

        let e = tie(0.2);
        assert!((e.wrong_phase - 0.4).abs() < 2.0 * 0.2f64.powi(3));
    }

    #[test]
    fn wrong_phase_is_symmetric_in_sign() {
        for d in [0.05, 0.2, 0.45] {
            assert_abs_diff_eq!(tie(d).wrong_phase, tie(-d).wrong_phase, epsilon = 1e-15);
        }
    }

    #[test]
    fn standard_examples() {
        let m = StandardDetectorModel::new(0.95).unwrap();
        let e = standard_error_probabilities(&m, 0.1);
        assert_abs_diff_eq!(e.wrong_way, 0.025, epsilon = 1e-15);
        assert_abs_diff_eq!(e.wrong_phase, 0.5 * (1.0 - 0.0975f64.sqrt() * 0.1), epsilon = 1e-15);
        assert_abs_diff_eq!(e.wrong_phase, 0.48439, epsilon = 1e-5);

        let m = StandardDetectorModel::new(1.0).unwrap();
        let e = standard_error_probabilities(&m, 0.3);
        assert_eq!(e.wrong_way, 0.0);
        assert_eq!(e.wrong_phase, 0.5);
        assert!(StandardDetectorModel::new(1.2).is_err());
    }

    #[test]
    fn standard_complementarity_is_exact() {
        for i in 0..=100 {
            let m = StandardDetectorModel::new(i as f64 / 100.0).unwrap();
            let v = m.visibility();
            assert!((v * v + m.distinguishability().powi(2) - 1.0).abs() <= 2.0 * f64::EPSILON);
        }
    }

    #[test]
    fn comparison_reports_crossover() {
        let m = StandardDetectorModel::new(0.95).unwrap();
        let rows = compare_strategies(
            &half3(),
            &InterferometerConfig::operating_point(),
            &InternalBasis::ramsey(),
            &m,
            &[1e-9, 0.1, 0.3],
        );
        assert!(rows[0].tie_better_way());
        assert_abs_diff_eq!(rows[0].tie.wrong_phase, 0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(rows[0].standard.wrong_phase, 0.5, epsilon = 1e-8);
        assert!(rows[1].tie_dominates());
        assert!(!rows[2].tie_better_way());
        assert!(rows[2].tie_better_phase());
        assert_abs_diff_eq!(rows[2].tie.wrong_way, 0.25 * (1.0 - 0.6f64.cos()), epsilon = 1e-15);
    }

    #[test]
    fn small_angle_laws() {
        let d = 1e-3;
        let ratio = tie(d).wrong_way / (d * d);
        assert!((ratio - 0.5).abs() < 0.005);
        let slope = (0.5 - tie(d).wrong_phase) / d;
        assert!((slope - 0.5).abs() < 0.005);
    }
}
