use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::config::{ConfigError, FigureSel, Mode, RunConfig, SweepVar};
use super::output::{fmt_g17, Table, WriteError};
use crate::complementarity::{
    optimal_point_at_fixed_distinguishability, standard_optimal_point, ComplementarityPoint, Ellipse,
};
use crate::detection::{blind_probabilities, channel_probabilities, Channel, ChannelProbabilities};
use crate::exec::{map_indices, Execution};
use crate::figures::{self, FIG1B_POINTS, FIG1C_MAX_DELTA, FIG1C_POINTS, FIG2_POINTS};
use crate::inference::{compare_strategies, tie_error_probabilities, ComparisonRow, StandardDetectorModel};
use crate::montecarlo::run_campaign;
use crate::state::{InternalBasis, TieParams};
use crate::wavepacket::distinguishability_decay;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error(transparent)]
    Write(#[from] WriteError),
    #[error("cannot create output directory {path}: {source}")]
    CreateDir {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    /// 1 for usage or configuration problems, 2 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Default)]
pub struct Report {
    pub summary: String,
    pub files: Vec<PathBuf>,
}

impl Report {
    fn line(&mut self, text: impl AsRef<str>) {
        self.summary.push_str(text.as_ref());
        self.summary.push('\n');
    }

    fn save(&mut self, table: &Table, dir: &Path, name: &str) -> Result<(), RunError> {
        let path = dir.join(name);
        table.write(&path)?;
        self.files.push(path);
        Ok(())
    }
}

pub fn run(config: &RunConfig) -> Result<Report, RunError> {
    let dir = &config.output_path;
    std::fs::create_dir_all(dir).map_err(|source| RunError::CreateDir {
        path: dir.clone(),
        source,
    })?;
    let mut report = Report::default();
    match config.mode {
        Mode::Probabilities => probabilities(config, &mut report)?,
        Mode::Sweep => sweep(config, &mut report)?,
        Mode::Montecarlo => montecarlo(config, &mut report)?,
        Mode::Complementarity => complementarity(config, &mut report)?,
        Mode::Figures => {
            let files = emit_figure_data(config.figure, dir, config.detector_model.distinguishability())?;
            for f in &files {
                report.line(format!("wrote {}", f.display()));
            }
            report.files = files;
        }
        Mode::Compare => compare(config, &mut report)?,
    }
    Ok(report)
}

const CHANNEL_COLUMNS: [&str; 10] = [
    "p_plus_up",
    "p_plus_down",
    "p_minus_up",
    "p_minus_down",
    "pa_up",
    "pb_up",
    "pa_down",
    "pb_down",
    "pab_up",
    "pab_down",
];

fn channel_values(cp: &ChannelProbabilities) -> [f64; 10] {
    [
        cp.p_plus_up,
        cp.p_plus_down,
        cp.p_minus_up,
        cp.p_minus_down,
        cp.pa_up,
        cp.pb_up,
        cp.pa_down,
        cp.pb_down,
        cp.pab_up,
        cp.pab_down,
    ]
}

fn probabilities(config: &RunConfig, report: &mut Report) -> Result<(), RunError> {
    let basis = InternalBasis::ramsey();
    let cfg = &config.interferometer;
    let cp = channel_probabilities(&config.params, cfg, &basis);
    let (plus, minus) = blind_probabilities(&config.params, cfg);
    let errors = tie_error_probabilities(&config.params, cfg, &basis);

    report.line(format!(
        "p = {}, N = {}, phi_A1 = {}, phi_B1 = {}",
        config.params.p(),
        config.params.ratio_n(),
        cfg.phi_a(),
        cfg.phi_b()
    ));
    for ch in Channel::ALL {
        report.line(format!("P[{:>5}] = {:.12}", ch.label(), cp.channel(ch)));
    }
    report.line(format!("sum       = {:.15}", cp.total()));
    report.line(format!("P+ = {plus:.12}, P- = {minus:.12}"));
    report.line(format!(
        "wrong way = {:.12}, wrong phase = {:.12}",
        errors.wrong_way, errors.wrong_phase
    ));

    let mut header = vec!["p", "ratio_n", "phi_a1", "phi_b1"];
    header.extend(CHANNEL_COLUMNS);
    header.extend(["p_plus", "p_minus", "wrong_way", "wrong_phase"]);
    let mut t = Table::new(&header);
    let mut row = vec![
        config.params.p(),
        f64::from(config.params.ratio_n()),
        cfg.phi_a(),
        cfg.phi_b(),
    ];
    row.extend(channel_values(&cp));
    row.extend([plus, minus, errors.wrong_way, errors.wrong_phase]);
    t.push_numbers(&row);
    report.save(&t, &config.output_path, "probabilities.csv")
}

fn sweep(config: &RunConfig, report: &mut Report) -> Result<(), RunError> {
    let basis = InternalBasis::ramsey();
    let values = config.grid.values();
    let rows = map_indices(values.len(), config.campaign.execution, |i| {
        let v = values[i];
        let mut cfg = config.interferometer;
        let mut params = config.params;
        match config.sweep {
            SweepVar::P => params = TieParams::new(v, params.ratio_n())?,
            SweepVar::MeanPhiA => cfg.mean_phi_a = v,
            SweepVar::MeanPhiB => cfg.mean_phi_b = v,
            SweepVar::DeltaPhiA => cfg.delta_phi_a = v,
            SweepVar::DeltaPhiB => cfg.delta_phi_b = v,
        }
        let cp = channel_probabilities(&params, &cfg, &basis);
        let e = tie_error_probabilities(&params, &cfg, &basis);
        let mut row = vec![v];
        row.extend(channel_values(&cp));
        row.extend([e.wrong_way, e.wrong_phase]);
        Ok::<_, crate::Error>(row)
    });

    let mut header = vec![config.sweep.name()];
    header.extend(CHANNEL_COLUMNS);
    header.extend(["wrong_way", "wrong_phase"]);
    let mut t = Table::new(&header);
    for row in rows {
        t.push_numbers(&row?);
    }
    report.line(format!(
        "swept {} over [{}, {}] in {} points",
        config.sweep.name(),
        config.grid.start,
        config.grid.stop,
        config.grid.points
    ));
    report.save(&t, &config.output_path, "sweep.csv")
}

fn montecarlo(config: &RunConfig, report: &mut Report) -> Result<(), RunError> {
    let s = run_campaign(
        &config.params,
        &config.interferometer,
        &InternalBasis::ramsey(),
        &config.campaign,
    )?;
    report.line(format!("seed = {}, trials = {}, workers = {}", s.seed, s.n_trials, s.workers));
    for ch in Channel::ALL {
        report.line(format!(
            "{:>5}: {:>10} (freq {:.6}, exact {:.6})",
            ch.label(),
            s.channel_counts[ch.index()],
            s.channel_frequency(ch),
            s.expected.channel(ch)
        ));
    }
    report.line(format!(
        "wrong way   {:.6} [{:.6}, {:.6}] exact {:.6}",
        s.wrong_way_rate, s.wrong_way_ci.lower, s.wrong_way_ci.upper, s.expected_errors.wrong_way
    ));
    report.line(format!(
        "wrong phase {:.6} [{:.6}, {:.6}] exact {:.6}",
        s.wrong_phase_rate, s.wrong_phase_ci.lower, s.wrong_phase_ci.upper, s.expected_errors.wrong_phase
    ));

    let mut header: Vec<String> = ["seed", "n_trials", "workers"].map(String::from).to_vec();
    for ch in Channel::ALL {
        header.push(format!("count_{}", ch.label().replace('+', "plus_").replace('-', "minus_")));
    }
    for ch in Channel::ALL {
        header.push(format!("exact_{}", ch.label().replace('+', "plus_").replace('-', "minus_")));
    }
    header.extend(
        [
            "wrong_way_rate",
            "wrong_way_ci_lower",
            "wrong_way_ci_upper",
            "wrong_way_exact",
            "wrong_phase_rate",
            "wrong_phase_ci_lower",
            "wrong_phase_ci_upper",
            "wrong_phase_exact",
        ]
        .map(String::from),
    );
    let mut t = Table::new(&header);
    let mut cells = vec![s.seed.to_string(), s.n_trials.to_string(), s.workers.to_string()];
    cells.extend(s.channel_counts.iter().map(u64::to_string));
    cells.extend(s.expected.channels().iter().map(|&v| fmt_g17(v)));
    cells.extend(
        [
            s.wrong_way_rate,
            s.wrong_way_ci.lower,
            s.wrong_way_ci.upper,
            s.expected_errors.wrong_way,
            s.wrong_phase_rate,
            s.wrong_phase_ci.lower,
            s.wrong_phase_ci.upper,
            s.expected_errors.wrong_phase,
        ]
        .map(fmt_g17),
    );
    t.push(cells);
    report.save(&t, &config.output_path, "montecarlo.csv")
}

fn complementarity(config: &RunConfig, report: &mut Report) -> Result<(), RunError> {
    let p = config.params.p();
    let n = config.params.ratio_n();
    let decay = distinguishability_decay(&config.decay, config.packet_width)?;
    let phis = config.grid.values();
    let points = map_indices(phis.len(), config.campaign.execution, |i| {
        ComplementarityPoint::evaluate(p, phis[i], n)
    });

    let mut t = Table::new(&[
        "p",
        "ratio_n",
        "phi",
        "distinguishability",
        "gen_visibility",
        "concurrence",
        "sensitivity",
        "duality_residual",
        "decayed_distinguishability",
    ]);
    let mut worst: f64 = 0.0;
    for pt in points {
        let pt = pt?;
        worst = worst.max(pt.duality_residual().abs());
        t.push_numbers(&[
            pt.at_p,
            f64::from(pt.ratio_n),
            pt.at_phi,
            pt.distinguishability,
            pt.gen_visibility,
            pt.concurrence,
            pt.sensitivity,
            pt.duality_residual(),
            pt.distinguishability * decay,
        ]);
    }
    report.line(format!("p = {p}, N = {n}, {} phases, max |D^2+V^2-1| = {worst:.3e}", t.len()));
    report.line(format!("overlap decay factor = {decay:.12}"));
    report.save(&t, &config.output_path, "complementarity.csv")?;

    let mut opt = Table::new(&["ratio_n", "d", "phi_opt", "p", "s", "general_ellipse_residual"]);
    for d in [0.3, 0.6, 0.9] {
        let model = StandardDetectorModel::new(d)?;
        let o = standard_optimal_point(&model);
        opt.push_numbers(&[1.0, d, o.phi, o.p, o.sensitivity, o.general_ellipse_residual(1)]);
        for n in [2u32, 3, 5, 10] {
            let o = optimal_point_at_fixed_distinguishability(d, n)?;
            opt.push_numbers(&[f64::from(n), d, o.phi, o.p, o.sensitivity, o.general_ellipse_residual(n)]);
        }
    }
    report.line("optimal-phase ellipse residuals written to complementarity_optimal.csv");
    report.save(&opt, &config.output_path, "complementarity_optimal.csv")
}

fn comparison_table(rows: &[ComparisonRow]) -> Table {
    let mut t = Table::new(&[
        "abs_delta_phi_a",
        "tie_wrong_way",
        "tie_wrong_phase",
        "std_wrong_way",
        "std_wrong_phase",
    ]);
    for r in rows {
        t.push_numbers(&[
            r.abs_delta_phi,
            r.tie.wrong_way,
            r.tie.wrong_phase,
            r.standard.wrong_way,
            r.standard.wrong_phase,
        ]);
    }
    t
}

fn compare(config: &RunConfig, report: &mut Report) -> Result<(), RunError> {
    let rows = compare_strategies(
        &config.params,
        &config.interferometer,
        &InternalBasis::ramsey(),
        &config.detector_model,
        &config.grid.values(),
    );
    let mut t = Table::new(&[
        "abs_delta_phi_a",
        "tie_wrong_way",
        "tie_wrong_phase",
        "std_wrong_way",
        "std_wrong_phase",
        "tie_better_way",
        "tie_better_phase",
        "tie_dominates",
    ]);
    let flag = |b: bool| if b { "1" } else { "0" }.to_string();
    let mut summary = String::new();
    for r in &rows {
        let mut cells: Vec<String> = [
            r.abs_delta_phi,
            r.tie.wrong_way,
            r.tie.wrong_phase,
            r.standard.wrong_way,
            r.standard.wrong_phase,
        ]
        .map(fmt_g17)
        .to_vec();
        cells.extend([flag(r.tie_better_way()), flag(r.tie_better_phase()), flag(r.tie_dominates())]);
        t.push(cells);
    }
    let dominated = rows.iter().filter(|r| r.tie_dominates()).count();
    let _ = write!(
        summary,
        "D_S = {}: TIE lower on both errors at {dominated} of {} points",
        config.detector_model.distinguishability(),
        rows.len()
    );
    report.line(summary);
    if let Some(r) = rows.iter().find(|r| !r.tie_better_way()) {
        report.line(format!(
            "standard wrong-way is lower from |dphi_A| = {} (TIE {:.6} vs {:.6})",
            r.abs_delta_phi, r.tie.wrong_way, r.standard.wrong_way
        ));
    }
    report.save(&t, &config.output_path, "compare.csv")
}

/// Writes the CSV data behind the selected figure(s) into `dir`.
pub fn emit_figure_data(which: FigureSel, dir: &Path, d_s: f64) -> Result<Vec<PathBuf>, RunError> {
    std::fs::create_dir_all(dir).map_err(|source| RunError::CreateDir {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut report = Report::default();
    let all = which == FigureSel::All;

    if all || which == FigureSel::Fig1b {
        let mut t = Table::new(&["phi_a1", "p_ab_up", "d_tie", "p_ab_standard"]);
        for r in figures::fig1b(FIG1B_POINTS, Execution::Parallel)? {
            t.push_numbers(&[r.phi_a1, r.p_ab_up, r.d_tie, r.p_ab_standard]);
        }
        report.save(&t, dir, "fig1b.csv")?;
    }
    if all || which == FigureSel::Fig1c {
        let grid = figures::fig1c_grid(FIG1C_POINTS, FIG1C_MAX_DELTA);
        let t = comparison_table(&figures::fig1c(&grid, d_s)?);
        report.save(&t, dir, "fig1c.csv")?;
    }
    if all || which == FigureSel::Fig2 {
        for e in figures::fig2_members() {
            let mut t = Table::new(&["s", "d"]);
            for (s, d) in e.sample(FIG2_POINTS) {
                t.push_numbers(&[s, d]);
            }
            report.save(&t, dir, &format!("fig2_{}.csv", e.label()))?;
        }
        let mut t = Table::new(&["curve", "center", "semi_axis", "quadrant_area", "frontier_area"]);
        let family = [1u32, 2, 3, 5, 10]
            .map(Ellipse::Ratio)
            .into_iter()
            .chain(std::iter::once(Ellipse::Asymptotic));
        for e in family {
            t.push(vec![
                e.label(),
                fmt_g17(e.center()),
                fmt_g17(e.semi_axis()),
                fmt_g17(e.quadrant_area()),
                fmt_g17(e.frontier_area()),
            ]);
        }
        report.save(&t, dir, "fig2_areas.csv")?;
    }
    Ok(report.files)
}
