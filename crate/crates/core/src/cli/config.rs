//! Run configuration from a `key = value` file and long-form flags.

use std::fmt;
use std::path::{Path as FsPath, PathBuf};
use std::str::FromStr;

use clap::Parser;
use thiserror::Error;

use crate::exec::Execution;
use crate::inference::StandardDetectorModel;
use crate::montecarlo::{Bookkeeping, CampaignConfig, IntervalMethod};
use crate::mzi::InterferometerConfig;
use crate::state::TieParams;
use crate::wavepacket::DecayConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("mode missing (expected one of {})", Mode::NAMES.join(", "))]
    MissingMode,
    #[error("unknown key `{key}`{}", at_line(*.line))]
    UnknownKey { key: String, line: Option<usize> },
    #[error("malformed line {line}: `{text}` (expected `key = value`)")]
    Syntax { line: usize, text: String },
    #[error("key `{key}`: cannot parse `{value}` as {expected}")]
    Malformed {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("key `{key}`: {constraint}")]
    Invalid { key: String, constraint: String },
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    /// Help or version text was requested; not a failure.
    #[error("{0}")]
    Info(String),
}

fn at_line(line: Option<usize>) -> String {
    line.map(|l| format!(" at line {l}")).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Probabilities,
    Sweep,
    Montecarlo,
    Complementarity,
    Figures,
    Compare,
}

impl Mode {
    pub const NAMES: [&'static str; 6] = [
        "probabilities",
        "sweep",
        "montecarlo",
        "complementarity",
        "figures",
        "compare",
    ];
}

impl FromStr for Mode {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "probabilities" => Mode::Probabilities,
            "sweep" => Mode::Sweep,
            "montecarlo" => Mode::Montecarlo,
            "complementarity" => Mode::Complementarity,
            "figures" => Mode::Figures,
            "compare" => Mode::Compare,
            _ => return Err(()),
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize;
        f.write_str(Mode::NAMES[i])
    }
}

/// Variable swept in `sweep` mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    P,
    MeanPhiA,
    MeanPhiB,
    DeltaPhiA,
    DeltaPhiB,
}

impl SweepVar {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVar::P => "p",
            SweepVar::MeanPhiA => "mean_phi_a",
            SweepVar::MeanPhiB => "mean_phi_b",
            SweepVar::DeltaPhiA => "delta_phi_a",
            SweepVar::DeltaPhiB => "delta_phi_b",
        }
    }
}

impl FromStr for SweepVar {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "p" => SweepVar::P,
            "mean_phi_a" => SweepVar::MeanPhiA,
            "mean_phi_b" => SweepVar::MeanPhiB,
            "delta_phi_a" => SweepVar::DeltaPhiA,
            "delta_phi_b" => SweepVar::DeltaPhiB,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureSel {
    Fig1b,
    Fig1c,
    Fig2,
    All,
}

impl FromStr for FigureSel {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "fig1b" => FigureSel::Fig1b,
            "fig1c" => FigureSel::Fig1c,
            "fig2" => FigureSel::Fig2,
            "all" => FigureSel::All,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / last)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: TieParams,
    pub interferometer: InterferometerConfig,
    pub detector_model: StandardDetectorModel,
    pub decay: DecayConfig,
    pub packet_width: f64,
    pub campaign: CampaignConfig,
    pub output_path: PathBuf,
    pub grid: Grid,
    pub sweep: SweepVar,
    pub figure: FigureSel,
}

/// Every accepted key, in the spelling used by config files.
pub const KEYS: &[&str] = &[
    "mode",
    "p",
    "ratio_n",
    "mean_phi_a",
    "mean_phi_b",
    "delta_phi_a",
    "delta_phi_b",
    "d_s",
    "a_const",
    "mzi_length",
    "packet_width",
    "n_trials",
    "seed",
    "workers",
    "bookkeeping",
    "interval",
    "execution",
    "output",
    "sweep",
    "grid_start",
    "grid_stop",
    "grid_points",
    "figure",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String, Option<usize>)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: i + 1,
            text: raw.trim().to_string(),
        })?;
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey {
                key,
                line: Some(i + 1),
            });
        }
        out.push((key, v.trim().to_string(), Some(i + 1)));
    }
    Ok(out)
}

/// Command-line interface; every flag mirrors a config-file key.
#[derive(Debug, Parser, Default)]
#[command(name = "tie-mzi", version, about = "Entangled Mach-Zehnder interferometry simulator")]
pub struct Flags {
    /// Configuration file with `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// probabilities | sweep | montecarlo | complementarity | figures | compare
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub ratio_n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mean_phi_a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mean_phi_b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta_phi_a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta_phi_b: Option<String>,
    #[arg(long)]
    pub d_s: Option<String>,
    #[arg(long)]
    pub a_const: Option<String>,
    #[arg(long)]
    pub mzi_length: Option<String>,
    #[arg(long)]
    pub packet_width: Option<String>,
    #[arg(long)]
    pub n_trials: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub workers: Option<String>,
    /// truth_first | observed_first
    #[arg(long)]
    pub bookkeeping: Option<String>,
    /// normal | clopper_pearson
    #[arg(long)]
    pub interval: Option<String>,
    /// parallel | sequential
    #[arg(long)]
    pub execution: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub output: Option<String>,
    /// Swept variable: p | mean_phi_a | mean_phi_b | delta_phi_a | delta_phi_b
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_start: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_stop: Option<String>,
    #[arg(long)]
    pub grid_points: Option<String>,
    /// fig1b | fig1c | fig2 | all
    #[arg(long)]
    pub figure: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(String, String, Option<usize>)> {
        let fields: [(&str, &Option<String>); 22] = [
            ("mode", &self.mode),
            ("p", &self.p),
            ("ratio_n", &self.ratio_n),
            ("mean_phi_a", &self.mean_phi_a),
            ("mean_phi_b", &self.mean_phi_b),
            ("delta_phi_a", &self.delta_phi_a),
            ("delta_phi_b", &self.delta_phi_b),
            ("d_s", &self.d_s),
            ("a_const", &self.a_const),
            ("mzi_length", &self.mzi_length),
            ("packet_width", &self.packet_width),
            ("n_trials", &self.n_trials),
            ("seed", &self.seed),
            ("workers", &self.workers),
            ("bookkeeping", &self.bookkeeping),
            ("interval", &self.interval),
            ("execution", &self.execution),
            ("output", &self.output),
            ("sweep", &self.sweep),
            ("grid_start", &self.grid_start),
            ("grid_stop", &self.grid_stop),
            ("grid_points", &self.grid_points),
        ];
        let mut out: Vec<_> = fields
            .iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone(), None)))
            .collect();
        if let Some(f) = &self.figure {
            out.push(("figure".to_string(), f.clone(), None));
        }
        out
    }
}

/// Parses flags (without the program name), reading `--config` if given.
pub fn parse_args<I, T>(args: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let flags = Flags::try_parse_from(std::iter::once("tie-mzi".into()).chain(args.into_iter().map(Into::into)))
        .map_err(|e| {
            let text = e.to_string().trim_end().to_string();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ConfigError::Info(text),
                _ => ConfigError::Usage(text),
            }
        })?;
    let file = match &flags.config {
        Some(path) => Some(read_file(path)?),
        None => None,
    };
    parse_config(file.as_deref(), &flags)
}

fn read_file(path: &FsPath) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Merges file contents and flags (flags win) into a validated configuration.
pub fn parse_config(file: Option<&str>, flags: &Flags) -> Result<RunConfig, ConfigError> {
    let mut entries = match file {
        Some(text) => parse_key_values(text)?,
        None => Vec::new(),
    };
    entries.extend(flags.pairs());
    Resolver { entries }.build()
}

struct Resolver {
    entries: Vec<(String, String, Option<usize>)>,
}

impl Resolver {
    fn raw(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, _)| v.as_str())
    }

    fn get<T: FromStr>(&self, key: &str, expected: &'static str, default: T) -> Result<T, ConfigError> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| ConfigError::Malformed {
                key: key.to_string(),
                value: v.to_string(),
                expected,
            }),
        }
    }

    fn real(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v: f64 = self.get(key, "a real number", default)?;
        if !v.is_finite() {
            return Err(invalid(key, "must be finite"));
        }
        Ok(v)
    }

    fn choice<T: FromStr>(&self, key: &str, options: &'static str, default: T) -> Result<T, ConfigError> {
        self.get(key, options, default)
    }

    fn build(self) -> Result<RunConfig, ConfigError> {
        let mode: Mode = match self.raw("mode") {
            None => return Err(ConfigError::MissingMode),
            Some(_) => self.choice("mode", "one of probabilities|sweep|montecarlo|complementarity|figures|compare", Mode::Probabilities)?,
        };

        let p = self.real("p", 0.5)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid("p", "must lie in range [0, 1]"));
        }
        let ratio_n: u32 = self.get("ratio_n", "a positive integer", 3)?;
        if ratio_n == 0 {
            return Err(invalid("ratio_n", "must be >= 1"));
        }
        let params = TieParams::new(p, ratio_n).map_err(|e| invalid("p", &e.to_string()))?;

        let interferometer = InterferometerConfig::new(
            self.real("mean_phi_a", std::f64::consts::FRAC_PI_2)?,
            self.real("mean_phi_b", std::f64::consts::PI)?,
        )
        .with_deviations(self.real("delta_phi_a", 0.0)?, self.real("delta_phi_b", 0.0)?);

        let d_s = self.real("d_s", 0.95)?;
        let detector_model = StandardDetectorModel::new(d_s).map_err(|_| invalid("d_s", "must lie in range [0, 1]"))?;

        let a_const = self.real("a_const", 1.0)?;
        if a_const <= 0.0 {
            return Err(invalid("a_const", "must be > 0"));
        }
        let mzi_length = self.real("mzi_length", 0.0)?;
        if mzi_length < 0.0 {
            return Err(invalid("mzi_length", "must be >= 0"));
        }
        let decay = DecayConfig::new(a_const, mzi_length).map_err(|e| invalid("a_const", &e.to_string()))?;
        let packet_width = self.real("packet_width", 1.0)?;
        if packet_width <= 0.0 {
            return Err(invalid("packet_width", "must be > 0"));
        }

        let n_trials: u64 = self.get("n_trials", "a non-negative integer", 1_000_000)?;
        if n_trials == 0 {
            return Err(invalid("n_trials", "must be >= 1"));
        }
        let workers: usize = self.get("workers", "a positive integer", 16)?;
        if workers == 0 {
            return Err(invalid("workers", "must be >= 1"));
        }
        let campaign = CampaignConfig {
            n_trials,
            seed: self.get("seed", "a 64-bit unsigned integer", 0)?,
            workers,
            bookkeeping: match self.raw("bookkeeping").unwrap_or("truth_first") {
                "truth_first" => Bookkeeping::TruthFirst,
                "observed_first" => Bookkeeping::ObservedFirst,
                v => return Err(malformed("bookkeeping", v, "truth_first|observed_first")),
            },
            interval: match self.raw("interval").unwrap_or("normal") {
                "normal" => IntervalMethod::Normal,
                "clopper_pearson" => IntervalMethod::ClopperPearson,
                v => return Err(malformed("interval", v, "normal|clopper_pearson")),
            },
            execution: match self.raw("execution").unwrap_or("parallel") {
                "parallel" => Execution::Parallel,
                "sequential" => Execution::Sequential,
                v => return Err(malformed("execution", v, "parallel|sequential")),
            },
        };

        let sweep: SweepVar = self.choice("sweep", "p|mean_phi_a|mean_phi_b|delta_phi_a|delta_phi_b", SweepVar::DeltaPhiA)?;
        let default_grid = match mode {
            Mode::Sweep if sweep == SweepVar::P => Grid { start: 0.0, stop: 1.0, points: 101 },
            Mode::Sweep => Grid { start: -0.5, stop: 0.5, points: 101 },
            Mode::Complementarity => Grid { start: 0.01, stop: std::f64::consts::PI - 0.01, points: 200 },
            _ => Grid { start: 0.005, stop: 0.5, points: 100 },
        };
        let grid = Grid {
            start: self.real("grid_start", default_grid.start)?,
            stop: self.real("grid_stop", default_grid.stop)?,
            points: self.get("grid_points", "an integer >= 2", default_grid.points)?,
        };
        if grid.points < 2 {
            return Err(invalid("grid_points", "must be >= 2"));
        }
        if grid.start >= grid.stop {
            return Err(invalid("grid_start", "must be < grid_stop"));
        }
        if mode == Mode::Sweep && sweep == SweepVar::P && (grid.start < 0.0 || grid.stop > 1.0) {
            return Err(invalid("grid_start", "p sweep must stay in range [0, 1]"));
        }

        Ok(RunConfig {
            mode,
            params,
            interferometer,
            detector_model,
            decay,
            packet_width,
            campaign,
            output_path: PathBuf::from(self.raw("output").unwrap_or("out")),
            grid,
            sweep,
            figure: self.choice("figure", "fig1b|fig1c|fig2|all", FigureSel::All)?,
        })
    }
}

fn invalid(key: &str, constraint: &str) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        constraint: constraint.to_string(),
    }
}

fn malformed(key: &str, value: &str, expected: &'static str) -> ConfigError {
    ConfigError::Malformed {
        key: key.to_string(),
        value: value.to_string(),
        expected,
    }
}
