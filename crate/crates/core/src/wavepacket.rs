//! Finite-width gaussian packets and the loss of distinguishability caused
//! by incomplete packet overlap at the output.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::quadrature::simpson;

/// Coherence predicate threshold on `width_k · L`.
pub const COHERENCE_THRESHOLD: f64 = 0.1;

/// Gaussian momentum distribution `∝ exp(−(k − k₀)²/Δ²)`.
///
/// The position-space envelope of the packet is `∝ exp(−x²/(2w²))` with
/// `w = 1/Δ`, so that `|ψ(x)|² ∝ exp(−x²/w²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    center_k: f64,
    width_k: f64,
}

impl GaussianPacket {
    pub fn new(center_k: f64, width_k: f64) -> Result<Self> {
        if !center_k.is_finite() {
            return Err(domain("center_k", center_k, "a finite wavenumber"));
        }
        if !(width_k.is_finite() && width_k > 0.0) {
            return Err(domain("width_k", width_k, "width_k > 0"));
        }
        Ok(Self { center_k, width_k })
    }

    /// Packet with spatial width `w`.
    pub fn with_spatial_width(center_k: f64, w: f64) -> Result<Self> {
        if !(w.is_finite() && w > 0.0) {
            return Err(domain("spatial_width", w, "w > 0"));
        }
        Self::new(center_k, 1.0 / w)
    }

    pub fn center_k(&self) -> f64 {
        self.center_k
    }

    pub fn width_k(&self) -> f64 {
        self.width_k
    }

    pub fn spatial_width(&self) -> f64 {
        1.0 / self.width_k
    }

    /// `width_k · L < 0.1`: the coherence length exceeds the setup.
    pub fn is_coherent_over(&self, length: f64) -> bool {
        self.width_k * length < COHERENCE_THRESHOLD
    }

    /// Normalized position wavefunction `ψ(x) = (πw²)^{-1/4} exp(−x²/(2w²)) e^{ik₀x}`.
    pub fn wavefunction(&self, x: f64) -> Complex64 {
        let w = self.spatial_width();
        let env = (std::f64::consts::PI * w * w).powf(-0.25) * (-x * x / (2.0 * w * w)).exp();
        Complex64::from_polar(env, self.center_k * x)
    }
}

/// Unit-integral momentum density `exp(−(k − k₀)²/Δ²)/(Δ√π)`.
pub fn momentum_density(packet: &GaussianPacket, k: f64) -> f64 {
    let u = (k - packet.center_k) / packet.width_k;
    (-u * u).exp() / (packet.width_k * std::f64::consts::PI.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayConfig {
    a_const: f64,
    mzi_length: f64,
}

impl DecayConfig {
    pub fn new(a_const: f64, mzi_length: f64) -> Result<Self> {
        if !(a_const.is_finite() && a_const > 0.0) {
            return Err(domain("a_const", a_const, "a_const > 0"));
        }
        if !(mzi_length.is_finite() && mzi_length >= 0.0) {
            return Err(domain("mzi_length", mzi_length, "mzi_length >= 0"));
        }
        Ok(Self { a_const, mzi_length })
    }

    pub fn a_const(&self) -> f64 {
        self.a_const
    }

    pub fn mzi_length(&self) -> f64 {
        self.mzi_length
    }
}

/// Distinguishability reduction `exp(−A L²/w²)`.
pub fn distinguishability_decay(cfg: &DecayConfig, w: f64) -> Result<f64> {
    if w.is_nan() || w <= 0.0 {
        return Err(domain("w", w, "w > 0"));
    }
    let r = cfg.mzi_length / w;
    Ok((-cfg.a_const * r * r).exp())
}

/// `⟨ψ₁|T_s ψ₂⟩` with `T_s ψ(x) = ψ(x − s)`, in closed form.
pub fn overlap_integral(p1: &GaussianPacket, p2: &GaussianPacket, relative_shift: f64) -> Complex64 {
    let (w1, w2) = (p1.spatial_width(), p2.spatial_width());
    let a1 = 0.5 / (w1 * w1);
    let a2 = 0.5 / (w2 * w2);
    let a = a1 + a2;
    let s = relative_shift;
    let b = Complex64::new(2.0 * a2 * s, p2.center_k - p1.center_k);
    let norm = (std::f64::consts::PI * w1 * w2).sqrt().recip() * (std::f64::consts::PI / a).sqrt();
    let exponent = b * b / (4.0 * a) - a2 * s * s - Complex64::new(0.0, p2.center_k * s);
    norm * exponent.exp()
}

/// The same overlap by composite Simpson quadrature of the wavefunctions.
pub fn overlap_quadrature(p1: &GaussianPacket, p2: &GaussianPacket, relative_shift: f64) -> Complex64 {
    let w = p1.spatial_width().max(p2.spatial_width());
    let lo = relative_shift.min(0.0) - 14.0 * w;
    let hi = relative_shift.max(0.0) + 14.0 * w;
    let k_max = p1.center_k.abs().max(p2.center_k.abs());
    let intervals = (((hi - lo) * (8.0 / w + k_max)) as usize).clamp(2000, 2_000_000);
    let integrand = |x: f64| p1.wavefunction(x).conj() * p2.wavefunction(x - relative_shift);
    Complex64::new(
        simpson(|x| integrand(x).re, lo, hi, intervals),
        simpson(|x| integrand(x).im, lo, hi, intervals),
    )
}

/// Maps the interferometer length to a relative packet displacement.
pub trait ShiftModel {
    fn shift(&self, mzi_length: f64) -> f64;
}

/// `shift = β · L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearShift {
    pub beta: f64,
}

impl LinearShift {
    /// Slope for which identical packets reproduce `exp(−A L²/w²)`; `β = 2√A`.
    pub fn matching(a_const: f64) -> Self {
        Self {
            beta: 2.0 * a_const.sqrt(),
        }
    }
}

impl Default for LinearShift {
    fn default() -> Self {
        Self::matching(1.0)
    }
}

impl ShiftModel for LinearShift {
    fn shift(&self, mzi_length: f64) -> f64 {
        self.beta * mzi_length
    }
}

/// `|overlap|` of a packet with its displaced copy after propagating through the interferometer.
pub fn overlap_decay<M: ShiftModel>(packet: &GaussianPacket, cfg: &DecayConfig, model: &M) -> f64 {
    overlap_integral(packet, packet, model.shift(cfg.mzi_length)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn density_shape() {
        let g = GaussianPacket::new(3.0, 0.2).unwrap();
        let peak = momentum_density(&g, 3.0);
        for dk in [-0.3, -0.01, 0.05, 0.4] {
            assert!(momentum_density(&g, 3.0 + dk) < peak);
        }
        for k in [2.8, 3.2] {
            assert_abs_diff_eq!(momentum_density(&g, k) / peak, (-1.0f64).exp(), epsilon = 1e-14);
        }
        let integral = simpson(|k| momentum_density(&g, k), 3.0 - 3.0, 3.0 + 3.0, 20000);
        assert_abs_diff_eq!(integral, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn decay_examples() {
        assert_eq!(distinguishability_decay(&DecayConfig::new(1.0, 0.0).unwrap(), 2.0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            distinguishability_decay(&DecayConfig::new(1.0, 3.0).unwrap(), 3.0).unwrap(),
            0.36787944117144233,
            epsilon = 1e-15
        );
        assert!(distinguishability_decay(&DecayConfig::new(1.0, 3.0).unwrap(), 1e150).unwrap() > 1.0 - 1e-12);
        assert!(distinguishability_decay(&DecayConfig::new(1.0, 3.0).unwrap(), 0.0).is_err());
        assert!(distinguishability_decay(&DecayConfig::new(1.0, 3.0).unwrap(), -1.0).is_err());
        assert!(DecayConfig::new(0.0, 1.0).is_err());
        assert!(DecayConfig::new(1.0, -1.0).is_err());
    }

    #[test]
    fn decay_monotone_and_scale_invariant() {
        let mut last = 1.0;
        for i in 1..50 {
            let cfg = DecayConfig::new(1.3, 0.1 * i as f64).unwrap();
            let v = distinguishability_decay(&cfg, 2.0).unwrap();
            assert!(v < last);
            last = v;
            let doubled = DecayConfig::new(1.3, 0.2 * i as f64).unwrap();
            assert_abs_diff_eq!(distinguishability_decay(&doubled, 4.0).unwrap(), v, epsilon = 1e-15);
        }
    }

    #[test]
    fn overlap_limits() {
        let g = GaussianPacket::with_spatial_width(0.0, 1.5).unwrap();
        assert_abs_diff_eq!(overlap_integral(&g, &g, 0.0).norm(), 1.0, epsilon = 1e-15);
        let w = g.spatial_width();
        assert_abs_diff_eq!(overlap_integral(&g, &g, w).norm(), (-0.25f64).exp(), epsilon = 1e-15);
        assert!(overlap_integral(&g, &g, 40.0 * w).norm() < 1e-12);
    }

    #[test]
    fn overlap_matches_quadrature() {
        let cases = [
            (GaussianPacket::new(0.0, 1.0).unwrap(), GaussianPacket::new(0.0, 1.0).unwrap(), 1.0),
            (GaussianPacket::new(2.0, 0.5).unwrap(), GaussianPacket::new(2.0, 0.5).unwrap(), 0.7),
            (GaussianPacket::new(1.0, 0.8).unwrap(), GaussianPacket::new(1.3, 0.6).unwrap(), -1.1),
        ];
        for (a, b, s) in cases {
            let exact = overlap_integral(&a, &b, s);
            let quad = overlap_quadrature(&a, &b, s);
            assert!((exact - quad).norm() < 1e-9, "{exact} vs {quad}");
        }
    }

    #[test]
    fn linear_shift_reproduces_decay_law() {
        let g = GaussianPacket::with_spatial_width(5.0, 2.0).unwrap();
        for a in [0.5, 1.0, 2.0] {
            for l in [0.0, 0.5, 1.0, 3.0] {
                let cfg = DecayConfig::new(a, l).unwrap();
                let model = LinearShift::matching(a);
                assert_abs_diff_eq!(
                    overlap_decay(&g, &cfg, &model),
                    distinguishability_decay(&cfg, 2.0).unwrap(),
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn coherence_predicate() {
        let g = GaussianPacket::new(1.0, 0.01).unwrap();
        assert!(g.is_coherent_over(5.0));
        assert!(!g.is_coherent_over(10.0));
        assert!(GaussianPacket::new(1.0, 0.0).is_err());
    }
}
