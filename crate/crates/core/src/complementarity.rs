//! Entanglement and duality measures and the complementarity ellipses.
//!
//! For a phase difference `φ = φ_{A1} − φ_{B1}` the module evaluates
//! concurrence `C`, generalized visibility `𝒱`, phase sensitivity `𝒮` and the
//! path distinguishability `𝒟`. `𝒟` is identified with `C`; the distinguishability
//! obtained from the path-guess error rate is exposed separately together
//! with the residual of that identification.

use num_complex::Complex64;

use crate::detection::oracle_blind_probabilities;
use crate::error::{Error, Result};
use crate::inference::{tie_error_probabilities, StandardDetectorModel};
use crate::mzi::{merge_at_bs2, propagate, InterferometerConfig};
use crate::quadrature::{scan_then_refine, simpson};
use crate::state::{FourState, InternalBasis, Level, Path, TieParams};

/// Step for the numerical phase derivative.
pub const DERIVATIVE_STEP: f64 = 1e-6;

/// Argument tolerance of the optimal-phase search.
pub const OPTIMUM_TOLERANCE: f64 = 1e-10;

/// `σ_y ⊗ σ_y` in the ordered basis `(A,1), (A,2), (B,1), (B,2)`.
fn sigma_yy() -> [[Complex64; 4]; 4] {
    let i = Complex64::new(0.0, 1.0);
    let z = Complex64::new(0.0, 0.0);
    let sy = [[z, -i], [i, z]];
    let mut m = [[z; 4]; 4];
    for (r, row) in m.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = sy[r / 2][c / 2] * sy[r % 2][c % 2];
        }
    }
    m
}

/// Pure-state concurrence `|⟨ψ|σ_y⊗σ_y|ψ*⟩|`.
pub fn spin_flip_concurrence(state: &FourState) -> f64 {
    let amp = state.amplitudes();
    let m = sigma_yy();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..4 {
        for c in 0..4 {
            acc += amp[r].conj() * m[r][c] * amp[c].conj();
        }
    }
    acc.norm()
}

/// Output-port ⊗ internal state `|+⟩ψ₊ + |−⟩ψ₋`; the `+` port occupies the `A` slots.
pub fn output_two_qubit_state(state: &FourState) -> FourState {
    let out = merge_at_bs2(state);
    FourState::from_amplitudes([out.psi_plus[0], out.psi_plus[1], out.psi_minus[0], out.psi_minus[1]])
}

fn state_at(p: f64, phi: f64, ratio_n: u32) -> Result<FourState> {
    let params = TieParams::new(p, ratio_n)?;
    Ok(propagate(&params, &InterferometerConfig::new(phi, 0.0)))
}

/// Concurrence; closed form `2√(p(1−p))|sin φ|` for `N = 3`, spin-flip oracle otherwise.
pub fn concurrence(p: f64, phi: f64, ratio_n: u32) -> Result<f64> {
    if ratio_n == 3 {
        TieParams::new(p, 3)?;
        Ok(2.0 * (p * (1.0 - p)).sqrt() * phi.sin().abs())
    } else {
        oracle_concurrence(p, phi, ratio_n)
    }
}

pub fn oracle_concurrence(p: f64, phi: f64, ratio_n: u32) -> Result<f64> {
    Ok(spin_flip_concurrence(&output_two_qubit_state(&state_at(p, phi, ratio_n)?)))
}

/// Path coherence `2|ρ_AB|` of the reduced path density matrix.
pub fn path_coherence(state: &FourState) -> f64 {
    let off: Complex64 = [Level::One, Level::Two]
        .iter()
        .map(|&l| state[(Path::A, l)] * state[(Path::B, l)].conj())
        .sum();
    2.0 * off.norm()
}

/// Generalized visibility; closed form `√((1−p)² + p² + 2p(1−p)cos 2φ)` for `N = 3`.
pub fn generalized_visibility(p: f64, phi: f64, ratio_n: u32) -> Result<f64> {
    if ratio_n == 3 {
        TieParams::new(p, 3)?;
        let q = 1.0 - p;
        Ok((q * q + p * p + 2.0 * p * q * (2.0 * phi).cos()).max(0.0).sqrt())
    } else {
        Ok(path_coherence(&state_at(p, phi, ratio_n)?))
    }
}

/// Phase sensitivity `|2 dP₊ / d(k_max L)|` with `k_max L = Nφ`.
///
/// `N = 3` uses `⅓|(p−1)sin φ − 3p sin 3φ|`; other ratios differentiate the
/// state-vector click probability numerically.
pub fn sensitivity(p: f64, phi: f64, ratio_n: u32) -> Result<f64> {
    if ratio_n == 3 {
        TieParams::new(p, 3)?;
        Ok(((p - 1.0) * phi.sin() - 3.0 * p * (3.0 * phi).sin()).abs() / 3.0)
    } else {
        numeric_sensitivity(p, phi, ratio_n)
    }
}

/// Central-difference sensitivity with one Richardson extrapolation step.
pub fn numeric_sensitivity(p: f64, phi: f64, ratio_n: u32) -> Result<f64> {
    let params = TieParams::new(p, ratio_n)?;
    let plus = |x: f64| oracle_blind_probabilities(&params, &InterferometerConfig::new(x, 0.0)).0;
    let central = |h: f64| (plus(phi + h) - plus(phi - h)) / (2.0 * h);
    let coarse = central(DERIVATIVE_STEP);
    let fine = central(0.5 * DERIVATIVE_STEP);
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    if (extrapolated - fine).abs() > 1e-6 * extrapolated.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "derivative at phi = {phi} did not settle: {coarse} vs {fine}"
        )));
    }
    Ok((2.0 * extrapolated / f64::from(ratio_n)).abs())
}

/// Sensitivity of the standard in-arm detector scheme, `V|sin φ|`.
pub fn standard_sensitivity(model: &StandardDetectorModel, phi: f64) -> f64 {
    model.visibility() * phi.sin().abs()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplementarityPoint {
    pub distinguishability: f64,
    pub gen_visibility: f64,
    pub concurrence: f64,
    pub sensitivity: f64,
    pub at_p: f64,
    pub at_phi: f64,
    pub ratio_n: u32,
}

impl ComplementarityPoint {
    pub fn evaluate(p: f64, phi: f64, ratio_n: u32) -> Result<Self> {
        let concurrence = concurrence(p, phi, ratio_n)?;
        Ok(Self {
            distinguishability: concurrence,
            gen_visibility: generalized_visibility(p, phi, ratio_n)?,
            concurrence,
            sensitivity: sensitivity(p, phi, ratio_n)?,
            at_p: p,
            at_phi: phi,
            ratio_n,
        })
    }

    /// `𝒟² + 𝒱² − 1`.
    pub fn duality_residual(&self) -> f64 {
        self.distinguishability.powi(2) + self.gen_visibility.powi(2) - 1.0
    }
}

/// `1 − 2 P_wrong-way` of the path-guess rule.
pub fn guess_distinguishability(params: &TieParams, cfg: &InterferometerConfig, basis: &InternalBasis) -> f64 {
    1.0 - 2.0 * tie_error_probabilities(params, cfg, basis).wrong_way
}

/// `|C − (1 − 2 P_wrong-way)|` at a configuration.
pub fn identification_residual(params: &TieParams, cfg: &InterferometerConfig, basis: &InternalBasis) -> Result<f64> {
    let c = concurrence(params.p(), cfg.phase_difference(), params.ratio_n())?;
    Ok((c - guess_distinguishability(params, cfg, basis)).abs())
}

/// Phase-explicit ellipse for `k₂ = 3k₁`:
/// `[𝒮 + (sin φ + 3 sin 3φ)/6]² / (|sin φ − 3 sin 3φ|²/36) + 𝒟²/sin²φ`.
pub fn ellipse_lhs(point: &ComplementarityPoint, phi: f64) -> Result<f64> {
    let s1 = phi.sin();
    let s3 = (3.0 * phi).sin();
    let axis = s1 - 3.0 * s3;
    if s1.abs() < 1e-12 || axis.abs() < 1e-12 {
        return Err(Error::Singular(format!("ellipse denominators vanish at phi = {phi}")));
    }
    let centered = point.sensitivity + (s1 + 3.0 * s3) / 6.0;
    Ok(centered * centered / (axis * axis / 36.0) + point.distinguishability.powi(2) / (s1 * s1))
}

/// `(𝒮 − (N−1)/(2N))² / ((N+1)²/(4N²)) + 𝒟²`.
pub fn general_ellipse_lhs(s: f64, d: f64, ratio_n: u32) -> f64 {
    Ellipse::Ratio(ratio_n).lhs(s, d)
}

/// A member of the `𝒮`–`𝒟` complementarity family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ellipse {
    /// Wavenumber ratio `N`; `N = 1` is the standard circle.
    Ratio(u32),
    /// The `N ≫ 1` curve `(𝒮 − ½)²/¼ + 𝒟² = 1`.
    Asymptotic,
}

impl Ellipse {
    pub fn center(&self) -> f64 {
        match *self {
            Ellipse::Ratio(n) => {
                let n = f64::from(n);
                (n - 1.0) / (2.0 * n)
            }
            Ellipse::Asymptotic => 0.5,
        }
    }

    /// Semi-axis along `𝒮`; the `𝒟` semi-axis is always 1.
    pub fn semi_axis(&self) -> f64 {
        match *self {
            Ellipse::Ratio(n) => {
                let n = f64::from(n);
                (n + 1.0) / (2.0 * n)
            }
            Ellipse::Asymptotic => 0.5,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Ellipse::Ratio(n) => format!("n{n}"),
            Ellipse::Asymptotic => "ninf".to_string(),
        }
    }

    pub fn lhs(&self, s: f64, d: f64) -> f64 {
        let a = self.semi_axis();
        let u = s - self.center();
        u * u / (a * a) + d * d
    }

    /// Parameter where the curve meets `𝒮 = 0`.
    fn t_max(&self) -> f64 {
        (-self.center() / self.semi_axis()).clamp(-1.0, 1.0).acos()
    }

    pub fn point(&self, t: f64) -> (f64, f64) {
        (self.center() + self.semi_axis() * t.cos(), t.sin())
    }

    /// First-quadrant arc from `(1, 0)` to the `𝒟` axis, `points ≥ 2` samples.
    pub fn sample(&self, points: usize) -> Vec<(f64, f64)> {
        let t_max = self.t_max();
        let last = points.max(2) - 1;
        (0..=last)
            .map(|i| {
                let (s, d) = self.point(t_max * i as f64 / last as f64);
                (s.max(0.0), d)
            })
            .collect()
    }

    /// Area between the first-quadrant arc and the axes.
    pub fn quadrant_area(&self) -> f64 {
        let a = self.semi_axis();
        simpson(|t| a * t.sin().powi(2), 0.0, self.t_max(), 4096)
    }

    /// Area of the first-quadrant region dominated by the arc's Pareto
    /// frontier: the arc from `(1, 0)` to the top `(c, 1)` plus the segment `𝒟 = 1`
    /// for `0 ≤ 𝒮 ≤ c`.
    pub fn frontier_area(&self) -> f64 {
        let a = self.semi_axis();
        let arc = simpson(|t| a * t.sin().powi(2), 0.0, std::f64::consts::FRAC_PI_2, 4096);
        arc + self.center().max(0.0)
    }
}

/// Figure-2 curves for the requested family members.
pub fn figure2_curves(members: &[Ellipse], points: usize) -> Vec<(Ellipse, Vec<(f64, f64)>)> {
    members.iter().map(|e| (*e, e.sample(points))).collect()
}

/// Point of maximal sensitivity at fixed distinguishability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalPoint {
    pub phi: f64,
    pub p: f64,
    pub sensitivity: f64,
    pub distinguishability: f64,
}

impl OptimalPoint {
    pub fn general_ellipse_residual(&self, ratio_n: u32) -> f64 {
        general_ellipse_lhs(self.sensitivity, self.distinguishability, ratio_n) - 1.0
    }
}

/// Population `p ∈ [½, 1]` giving concurrence `d` at phase `phi`, if any.
fn population_for(d: f64, phi: f64, ratio_n: u32) -> Result<Option<f64>> {
    // C = 2√(p(1−p)) g(φ) with g the concurrence at p = ½
    let g = concurrence(0.5, phi, ratio_n)?;
    if g <= 0.0 || d > g {
        return Ok(None);
    }
    let x = (1.0 - (d / g).powi(2)).max(0.0);
    Ok(Some(0.5 * (1.0 + x.sqrt())))
}

/// Numerically locates the phase in `(0, π)` that maximizes `𝒮` at `𝒟 = d` on the branch `p ≥ ½`.
pub fn optimal_point_at_fixed_distinguishability(d: f64, ratio_n: u32) -> Result<OptimalPoint> {
    if !(0.0..=1.0).contains(&d) {
        return Err(crate::error::domain("d", d, "range [0, 1]"));
    }
    let objective = |phi: f64| match population_for(d, phi, ratio_n) {
        Ok(Some(p)) => sensitivity(p, phi, ratio_n).unwrap_or(f64::NEG_INFINITY),
        _ => f64::NEG_INFINITY,
    };
    let eps = 1e-9;
    let (phi, s) = scan_then_refine(objective, eps, std::f64::consts::PI - eps, 512, OPTIMUM_TOLERANCE);
    let p = population_for(d, phi, ratio_n)?
        .ok_or_else(|| Error::Numerical(format!("no population reaches D = {d} for N = {ratio_n}")))?;
    Ok(OptimalPoint {
        phi,
        p,
        sensitivity: s,
        distinguishability: concurrence(p, phi, ratio_n)?,
    })
}

/// Optimal phase of the standard scheme; `𝒟` is the detector's `D_S`.
pub fn standard_optimal_point(model: &StandardDetectorModel) -> OptimalPoint {
    let (phi, s) = scan_then_refine(
        |phi| standard_sensitivity(model, phi),
        0.0,
        std::f64::consts::PI,
        512,
        OPTIMUM_TOLERANCE,
    );
    OptimalPoint {
        phi,
        p: 0.0,
        sensitivity: s,
        distinguishability: model.distinguishability(),
    }
}
