//! Propagation through the interferometer: input splitter, arm phases, and
//! the output merger.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::state::{inner2, prepare_input, FourState, Level, Path, TieParams};

/// Arm phases, all in radians and scaled by `k1`.
///
/// The level-1 phase accumulated along arm `X` is `mean_phi_x + delta_phi_x`;
/// the level-2 phase is `ratio_n` times that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerConfig {
    pub mean_phi_a: f64,
    pub mean_phi_b: f64,
    pub delta_phi_a: f64,
    pub delta_phi_b: f64,
}

impl InterferometerConfig {
    pub fn new(mean_phi_a: f64, mean_phi_b: f64) -> Self {
        Self {
            mean_phi_a,
            mean_phi_b,
            delta_phi_a: 0.0,
            delta_phi_b: 0.0,
        }
    }

    /// The working point with `P_{A↑} ≈ 0`, `P_{B↑} ≈ 1/2`.
    pub fn operating_point() -> Self {
        Self::new(std::f64::consts::FRAC_PI_2, std::f64::consts::PI)
    }

    pub fn with_deviations(mut self, delta_phi_a: f64, delta_phi_b: f64) -> Self {
        self.delta_phi_a = delta_phi_a;
        self.delta_phi_b = delta_phi_b;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mean_phi_a", self.mean_phi_a),
            ("mean_phi_b", self.mean_phi_b),
            ("delta_phi_a", self.delta_phi_a),
            ("delta_phi_b", self.delta_phi_b),
        ] {
            if !v.is_finite() {
                return Err(domain(name, v, "a finite phase"));
            }
        }
        Ok(())
    }

    pub fn phi_a(&self) -> f64 {
        self.mean_phi_a + self.delta_phi_a
    }

    pub fn phi_b(&self) -> f64 {
        self.mean_phi_b + self.delta_phi_b
    }

    /// Level-1 phase difference `φ = φ_{A1} − φ_{B1}`.
    pub fn phase_difference(&self) -> f64 {
        self.phi_a() - self.phi_b()
    }

    pub fn arm_phase(&self, path: Path, level: Level, ratio_n: u32) -> f64 {
        let base = match path {
            Path::A => self.phi_a(),
            Path::B => self.phi_b(),
        };
        match level {
            Level::One => base,
            Level::Two => f64::from(ratio_n) * base,
        }
    }
}

/// Balanced splitter acting on the path qubit: `A → (A+B)/√2`, `B → (A−B)/√2`.
pub fn beam_split(state: &FourState) -> FourState {
    let a = state.arm(Path::A);
    let b = state.arm(Path::B);
    let h = FRAC_1_SQRT_2;
    FourState::from_amplitudes([
        (a[0] + b[0]) * h,
        (a[1] + b[1]) * h,
        (a[0] - b[0]) * h,
        (a[1] - b[1]) * h,
    ])
}

pub fn apply_arm_phases(state: &FourState, cfg: &InterferometerConfig, ratio_n: u32) -> FourState {
    let mut amp = *state.amplitudes();
    for path in [Path::A, Path::B] {
        for level in [Level::One, Level::Two] {
            let slot = FourState::slot(path, level);
            amp[slot] *= Complex64::from_polar(1.0, cfg.arm_phase(path, level, ratio_n));
        }
    }
    FourState::from_amplitudes(amp)
}

/// State right before the output merger.
pub fn propagate(params: &TieParams, cfg: &InterferometerConfig) -> FourState {
    let split = beam_split(&prepare_input(params));
    apply_arm_phases(&split, cfg, params.ratio_n())
}

/// Internal-state vectors reaching the `+` and `−` detectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputPair {
    pub psi_plus: [Complex64; 2],
    pub psi_minus: [Complex64; 2],
}

impl OutputPair {
    pub fn get(&self, detector: Detector) -> &[Complex64; 2] {
        match detector {
            Detector::Plus => &self.psi_plus,
            Detector::Minus => &self.psi_minus,
        }
    }

    pub fn norm_sqr(&self, detector: Detector) -> f64 {
        let v = self.get(detector);
        inner2(v, v).re
    }
}

/// Single-arm internal vector `ψ_Xf = √2 · (amplitudes of arm X)`, unit norm for a propagated state.
pub fn arm_vector(state: &FourState, path: Path) -> [Complex64; 2] {
    let s = std::f64::consts::SQRT_2;
    let v = state.arm(path);
    [v[0] * s, v[1] * s]
}

/// `ψ_± = (ψ_Af ± ψ_Bf)/2`.
pub fn merge_at_bs2(state: &FourState) -> OutputPair {
    let a = arm_vector(state, Path::A);
    let b = arm_vector(state, Path::B);
    OutputPair {
        psi_plus: [(a[0] + b[0]) * 0.5, (a[1] + b[1]) * 0.5],
        psi_minus: [(a[0] - b[0]) * 0.5, (a[1] - b[1]) * 0.5],
    }
}

/// Output detector behind the merger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detector {
    Plus,
    Minus,
}

impl Detector {
    pub const ALL: [Detector; 2] = [Detector::Plus, Detector::Minus];
}
