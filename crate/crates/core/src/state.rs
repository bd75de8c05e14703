//! Path ⊗ internal pure states of a single particle.
//!
//! The Hilbert space is spanned by the two interferometer paths `A`, `B`
//! and the two internal levels `1`, `2`. A [`FourState`] stores the four
//! amplitudes in the fixed order `(A,1), (A,2), (B,1), (B,2)`.
//!
//! Before the first beam splitter the particle occupies the input port,
//! which shares the `A` slots of the basis.

use std::ops::Index;

use num_complex::Complex64;

use crate::error::{domain, Result};

pub type ComplexAmplitude = Complex64;

/// Absolute tolerance for normalization and orthonormality checks.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Relative tolerance for the energy-conservation check.
pub const ENERGY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Path {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    One,
    Two,
}

/// Parameters of the entangled input state.
///
/// `p` is the population of internal level 2, `k1` the wavenumber carried by
/// level 1, and the level-2 wavenumber is `k2 = ratio_n * k1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TieParams {
    p: f64,
    k1: f64,
    ratio_n: u32,
}

impl TieParams {
    pub fn new(p: f64, ratio_n: u32) -> Result<Self> {
        Self::with_wavenumber(p, 1.0, ratio_n)
    }

    pub fn with_wavenumber(p: f64, k1: f64, ratio_n: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(domain("p", p, "range [0, 1]"));
        }
        if !(k1.is_finite() && k1 > 0.0) {
            return Err(domain("k1", k1, "k1 > 0"));
        }
        if ratio_n == 0 {
            return Err(domain("ratio_n", 0.0, "ratio_n >= 1"));
        }
        Ok(Self { p, k1, ratio_n })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn k2(&self) -> f64 {
        f64::from(self.ratio_n) * self.k1
    }

    pub fn ratio_n(&self) -> u32 {
        self.ratio_n
    }

    /// Real, non-negative amplitudes `(√(1−p), √p)` of the two internal levels.
    pub fn level_amplitudes(&self) -> [f64; 2] {
        [(1.0 - self.p).sqrt(), self.p.sqrt()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub hbar: f64,
    pub mass: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            eps1: 0.0,
            eps2: 0.0,
        }
    }
}

impl PhysicalParams {
    /// Total energy `ħ²k²/(2M) + ε` of a component with wavenumber `k` and internal energy `eps`.
    pub fn component_energy(&self, k: f64, eps: f64) -> f64 {
        self.hbar * self.hbar * k * k / (2.0 * self.mass) + eps
    }

    /// Level-2 wavenumber that makes the state stationary for a given `k1`.
    pub fn matching_k2(&self, k1: f64) -> Result<f64> {
        self.check()?;
        let k2_sq = k1 * k1 + 2.0 * self.mass * (self.eps1 - self.eps2) / (self.hbar * self.hbar);
        if k2_sq <= 0.0 {
            return Err(domain("eps1 - eps2", self.eps1 - self.eps2, "a real positive k2"));
        }
        Ok(k2_sq.sqrt())
    }

    fn check(&self) -> Result<()> {
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(domain("hbar", self.hbar, "hbar > 0"));
        }
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(domain("mass", self.mass, "mass > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub energy_1: f64,
    pub energy_2: f64,
    pub residual: f64,
    pub relative_residual: f64,
    pub consistent: bool,
}

/// Checks that both internal components carry the same total energy.
pub fn validate_energy(params: &TieParams, phys: &PhysicalParams) -> Result<EnergyReport> {
    phys.check()?;
    let energy_1 = phys.component_energy(params.k1(), phys.eps1);
    let energy_2 = phys.component_energy(params.k2(), phys.eps2);
    let residual = (energy_1 - energy_2).abs();
    let scale = energy_1.abs().max(energy_2.abs());
    let relative_residual = if scale > 0.0 { residual / scale } else { 0.0 };
    Ok(EnergyReport {
        energy_1,
        energy_2,
        residual,
        relative_residual,
        consistent: relative_residual < ENERGY_TOLERANCE,
    })
}

/// Pure state on the four-dimensional path ⊗ internal space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourState {
    amp: [Complex64; 4],
}

impl FourState {
    pub fn from_amplitudes(amp: [Complex64; 4]) -> Self {
        Self { amp }
    }

    pub fn basis(path: Path, level: Level) -> Self {
        let mut amp = [Complex64::new(0.0, 0.0); 4];
        amp[Self::slot(path, level)] = Complex64::new(1.0, 0.0);
        Self { amp }
    }

    pub fn slot(path: Path, level: Level) -> usize {
        match (path, level) {
            (Path::A, Level::One) => 0,
            (Path::A, Level::Two) => 1,
            (Path::B, Level::One) => 2,
            (Path::B, Level::Two) => 3,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amp
    }

    pub fn amplitude(&self, path: Path, level: Level) -> Complex64 {
        self.amp[Self::slot(path, level)]
    }

    /// Internal-state vector `(⟨1|, ⟨2|)` carried by one path (unnormalized).
    pub fn arm(&self, path: Path) -> [Complex64; 2] {
        [self.amplitude(path, Level::One), self.amplitude(path, Level::Two)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }
}

impl Index<(Path, Level)> for FourState {
    type Output = Complex64;

    fn index(&self, (path, level): (Path, Level)) -> &Complex64 {
        &self.amp[Self::slot(path, level)]
    }
}

/// Sesquilinear inner product `⟨a|b⟩`, antilinear in `a`.
pub fn inner_product(a: &FourState, b: &FourState) -> Complex64 {
    a.amp
        .iter()
        .zip(b.amp.iter())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

pub(crate) fn inner2(a: &[Complex64; 2], b: &[Complex64; 2]) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

/// Input state before the first beam splitter: `√(1−p)|k₁,1⟩ + √p|k₂,2⟩` in the input port.
pub fn prepare_input(params: &TieParams) -> FourState {
    let [c1, c2] = params.level_amplitudes();
    FourState::from_amplitudes([
        Complex64::new(c1, 0.0),
        Complex64::new(c2, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    ])
}

/// Orthonormal projective basis `{↑, ↓}` for the internal levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InternalBasis {
    up: [Complex64; 2],
    down: [Complex64; 2],
}

impl InternalBasis {
    pub fn new(up: [Complex64; 2], down: [Complex64; 2]) -> Result<Self> {
        let nu = inner2(&up, &up).re;
        let nd = inner2(&down, &down).re;
        let cross = inner2(&up, &down).norm();
        if (nu - 1.0).abs() > NORM_TOLERANCE {
            return Err(domain("basis.up", nu, "unit norm"));
        }
        if (nd - 1.0).abs() > NORM_TOLERANCE {
            return Err(domain("basis.down", nd, "unit norm"));
        }
        if cross > NORM_TOLERANCE {
            return Err(domain("basis", cross, "orthogonal up/down vectors"));
        }
        Ok(Self { up, down })
    }

    /// The Ramsey basis `(|1⟩ ± |2⟩)/√2`.
    pub fn ramsey() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            up: [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            down: [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        }
    }

    /// Basis `cos θ|1⟩ + e^{iχ} sin θ|2⟩` and its orthogonal complement.
    pub fn rotated(theta: f64, chi: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let e = Complex64::from_polar(1.0, chi);
        Self {
            up: [Complex64::new(c, 0.0), e * s],
            down: [Complex64::new(-s, 0.0), e * c],
        }
    }

    pub fn up(&self) -> &[Complex64; 2] {
        &self.up
    }

    pub fn down(&self) -> &[Complex64; 2] {
        &self.down
    }

    pub fn vector(&self, spin: Spin) -> &[Complex64; 2] {
        match spin {
            Spin::Up => &self.up,
            Spin::Down => &self.down,
        }
    }

    /// `⟨s|v⟩` for an internal-state vector `v`.
    pub fn project(&self, spin: Spin, v: &[Complex64; 2]) -> Complex64 {
        inner2(self.vector(spin), v)
    }
}

impl Default for InternalBasis {
    fn default() -> Self {
        Self::ramsey()
    }
}

/// Outcome of the internal-state projection at a detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const ALL: [Spin; 2] = [Spin::Up, Spin::Down];
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn input_amplitudes() {
        let s = prepare_input(&TieParams::new(0.0, 3).unwrap());
        assert_eq!(s[(Path::A, Level::One)], Complex64::new(1.0, 0.0));
        assert_eq!(s.amplitudes()[1..], [Complex64::new(0.0, 0.0); 3]);

        let s = prepare_input(&TieParams::new(0.5, 3).unwrap());
        assert_abs_diff_eq!(s[(Path::A, Level::One)].re, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(s[(Path::A, Level::Two)].re, 0.5f64.sqrt(), epsilon = 1e-15);

        let s = prepare_input(&TieParams::new(0.25, 3).unwrap());
        assert_abs_diff_eq!(s[(Path::A, Level::One)].re, 0.75f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(s[(Path::A, Level::Two)].re, 0.5, epsilon = 1e-15);
        assert!(s.is_normalized());
    }

    #[test]
    fn invalid_population_rejected() {
        for p in [-0.1, 1.5, f64::NAN] {
            assert!(matches!(TieParams::new(p, 3), Err(crate::Error::Domain { name: "p", .. })));
        }
        assert!(TieParams::new(0.5, 0).is_err());
        assert!(TieParams::with_wavenumber(0.5, 0.0, 3).is_err());
    }

    #[test]
    fn complementary_population_swaps_levels() {
        for p in [0.0, 0.1, 0.25, 0.5, 0.9] {
            let a = prepare_input(&TieParams::new(p, 3).unwrap());
            let b = prepare_input(&TieParams::new(1.0 - p, 3).unwrap());
            assert!((a[(Path::A, Level::One)] - b[(Path::A, Level::Two)]).norm() < 1e-15);
            assert!((a[(Path::A, Level::Two)] - b[(Path::A, Level::One)]).norm() < 1e-15);
        }
    }

    #[test]
    fn energy_consistency() {
        let phys = PhysicalParams {
            eps1: 4.0,
            ..Default::default()
        };
        let params = TieParams::with_wavenumber(0.5, 1.0, 3).unwrap();
        let r = validate_energy(&params, &phys).unwrap();
        assert!(r.consistent);
        assert_eq!(r.energy_1, 4.5);
        assert_eq!(r.energy_2, 4.5);
        assert_eq!(phys.matching_k2(1.0).unwrap(), 3.0);

        let degenerate = PhysicalParams {
            eps1: 0.7,
            eps2: 0.7,
            ..Default::default()
        };
        let r = validate_energy(&TieParams::new(0.5, 1).unwrap(), &degenerate).unwrap();
        assert!(r.consistent);

        let r = validate_energy(&params, &PhysicalParams::default()).unwrap();
        assert!(!r.consistent);
        assert_eq!(r.residual, 4.0);
    }

    #[test]
    fn energy_rejects_bad_mass() {
        let phys = PhysicalParams {
            mass: 0.0,
            ..Default::default()
        };
        let params = TieParams::new(0.5, 3).unwrap();
        assert!(matches!(
            validate_energy(&params, &phys),
            Err(crate::Error::Domain { name: "mass", .. })
        ));
        let phys = PhysicalParams {
            hbar: -1.0,
            ..Default::default()
        };
        assert!(validate_energy(&params, &phys).is_err());
    }

    #[test]
    fn inner_products() {
        let s = prepare_input(&TieParams::new(0.3, 3).unwrap());
        let n = inner_product(&s, &s);
        assert_abs_diff_eq!(n.re, 1.0, epsilon = 1e-15);
        assert_eq!(n.im, 0.0);

        let a = FourState::basis(Path::A, Level::One);
        let b = FourState::basis(Path::B, Level::Two);
        assert_eq!(inner_product(&a, &b), Complex64::new(0.0, 0.0));

        let b = FourState::from_amplitudes([
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        assert_eq!(inner_product(&a, &b), Complex64::new(0.6, 0.0));
    }

    #[test]
    fn bases_are_orthonormal() {
        let r = InternalBasis::ramsey();
        assert!(InternalBasis::new(*r.up(), *r.down()).is_ok());
        for i in 0..20 {
            let b = InternalBasis::rotated(0.31 * i as f64, 0.77 * i as f64);
            assert!(inner2(b.up(), b.down()).norm() < NORM_TOLERANCE);
            assert!(InternalBasis::new(*b.up(), *b.down()).is_ok());
        }
        let bad = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!(InternalBasis::new(bad, bad).is_err());
    }
}
