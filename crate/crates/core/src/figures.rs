//! Data behind the three published figures.

use std::f64::consts::{PI, TAU};

use crate::complementarity::Ellipse;
use crate::detection::{channel_probabilities, oracle_blind_probabilities};
use crate::exec::{map_indices, Execution};
use crate::inference::{compare_strategies, ComparisonRow, StandardDetectorModel};
use crate::mzi::InterferometerConfig;
use crate::state::{InternalBasis, TieParams};
use crate::Result;

pub const FIG1B_POINTS: usize = 1024;
pub const FIG1C_POINTS: usize = 100;
pub const FIG1C_MAX_DELTA: f64 = 0.5;
pub const FIG1C_DS: f64 = 0.95;
pub const FIG2_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1bRow {
    pub phi_a1: f64,
    pub p_ab_up: f64,
    /// `1 − 2(P_{A↑} + P_{B↓})`.
    pub d_tie: f64,
    /// Unentangled interference `P₊ − P₋` with `V = 1`.
    pub p_ab_standard: f64,
}

/// `φ_{A1}` sweep over `[0, 2π)` at `φ_{B1} = π`, `p = 1/2`, `N = 3`.
pub fn fig1b(points: usize, exec: Execution) -> Result<Vec<Fig1bRow>> {
    let tie = TieParams::new(0.5, 3)?;
    let standard = TieParams::new(0.5, 1)?;
    let basis = InternalBasis::ramsey();
    Ok(map_indices(points, exec, |i| {
        let phi_a1 = TAU * i as f64 / points as f64;
        let cfg = InterferometerConfig::new(phi_a1, PI);
        let cp = channel_probabilities(&tie, &cfg, &basis);
        let (plus, minus) = oracle_blind_probabilities(&standard, &cfg);
        Fig1bRow {
            phi_a1,
            p_ab_up: cp.pab_up,
            d_tie: 1.0 - 2.0 * (cp.pa_up + cp.pb_down),
            p_ab_standard: plus - minus,
        }
    }))
}

/// Uniform grid `max/points, 2·max/points, …, max`.
pub fn fig1c_grid(points: usize, max: f64) -> Vec<f64> {
    (1..=points).map(|i| max * i as f64 / points as f64).collect()
}

/// Error rates of both strategies versus `|δφ_A|` at the working point.
pub fn fig1c(grid: &[f64], d_s: f64) -> Result<Vec<ComparisonRow>> {
    let params = TieParams::new(0.5, 3)?;
    let model = StandardDetectorModel::new(d_s)?;
    Ok(compare_strategies(
        &params,
        &InterferometerConfig::operating_point(),
        &InternalBasis::ramsey(),
        &model,
        grid,
    ))
}

/// Standard circle, `N = 3` ellipse and the `N ≫ 1` ellipse.
pub fn fig2_members() -> [Ellipse; 3] {
    [Ellipse::Ratio(1), Ellipse::Ratio(3), Ellipse::Asymptotic]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::sign_changes;

    #[test]
    fn fig1b_structure() {
        let rows = fig1b(FIG1B_POINTS, Execution::Sequential).unwrap();
        assert_eq!(rows.len(), 1024);
        let tie: Vec<f64> = rows.iter().map(|r| r.p_ab_up).collect();
        let std: Vec<f64> = rows.iter().map(|r| r.p_ab_standard).collect();
        assert!(sign_changes(&tie) >= 4);
        assert_eq!(sign_changes(&std), 2);
        for r in &rows {
            assert!((r.p_ab_standard + r.phi_a1.cos()).abs() < 1e-12);
            assert!((0.0..=1.0 + 1e-12).contains(&r.d_tie));
        }
    }

    #[test]
    fn fig1c_contains_reference_row() {
        let grid = fig1c_grid(FIG1C_POINTS, FIG1C_MAX_DELTA);
        assert_eq!(grid[19], 0.1);
        let rows = fig1c(&grid, FIG1C_DS).unwrap();
        let r = rows[19];
        assert!((r.tie.wrong_way - 0.0049833).abs() < 1e-6);
        assert!((r.standard.wrong_way - 0.025).abs() < 1e-15);
    }
}
