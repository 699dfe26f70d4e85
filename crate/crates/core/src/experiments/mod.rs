//! Seeded experiment drivers.
//!
//! Every driver expands its config into a list of independent tasks, runs
//! them on a rayon pool of `workers` threads and writes the rows in task
//! order, so output files are byte-identical for any worker count. Each row
//! carries its child seed `derive_seed(master, [experiment, N, trial])`.

mod ar;
mod labs;
mod restarts;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baselines::GwParams;
use crate::error::{Error, Result};
use crate::quad::CoefficientMode;
use crate::rng::derive_seed;
use crate::trace::TauPolicy;

pub use ar::{run_ar, ArRow, ArSummary};
pub use labs::{run_labs, run_quad, LabsRow, LabsSummary, QuadRow, QuadSummary};
pub use restarts::{run_restarts, RestartRow, RestartSummary};

/// Environment variable that overrides any configured output directory.
pub const OUT_DIR_ENV: &str = "QITE_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Restarts,
    Ar,
    Labs,
    Quad,
}

impl ExperimentKind {
    /// Stable id mixed into every child seed.
    pub fn id(self) -> u64 {
        match self {
            ExperimentKind::Restarts => 1,
            ExperimentKind::Ar => 2,
            ExperimentKind::Labs => 3,
            ExperimentKind::Quad => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Restarts => "restarts",
            ExperimentKind::Ar => "ar",
            ExperimentKind::Labs => "labs",
            ExperimentKind::Quad => "quad",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub k: usize,
    pub p: f64,
    pub weighted: bool,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            k: 4,
            p: 0.5,
            weighted: true,
        }
    }
}

/// MaxCut edge ramp and LABS schedule parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ItdConfig {
    pub n_edges: usize,
    pub a: usize,
    pub b: usize,
    pub r_max: usize,
}

impl Default for ItdConfig {
    fn default() -> Self {
        Self {
            n_edges: 1,
            a: DEFAULT_LABS_A,
            b: DEFAULT_LABS_B,
            r_max: DEFAULT_LABS_R_MAX,
        }
    }
}

pub const DEFAULT_LABS_A: usize = 4;
pub const DEFAULT_LABS_B: usize = 1;
pub const DEFAULT_LABS_R_MAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ansatz {
    Linear,
    Quad,
}

/// Everything needed to reproduce one sweep. Round-trips through TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    #[serde(default = "one")]
    pub n_stride: usize,
    /// Graphs per N (MaxCut) or initial states per N (LABS).
    pub n_trials: usize,
    pub steps: Vec<usize>,
    /// Step counts also run on the unweighted ensemble (restarts only).
    #[serde(default)]
    pub unweighted_steps: Vec<usize>,
    #[serde(default = "one")]
    pub workers: usize,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub ensemble: EnsembleConfig,
    #[serde(default)]
    pub tau: TauPolicy,
    #[serde(default)]
    pub itd: ItdConfig,
    #[serde(default)]
    pub restarts: RestartConfig,
    #[serde(default)]
    pub gw: GwParams,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_ansatz")]
    pub ansatz: Ansatz,
    #[serde(default = "default_mode")]
    pub mode: CoefficientMode,
    /// LABS solution bank consulted before exhaustive search.
    #[serde(default)]
    pub bank: Option<PathBuf>,
    /// Largest N solved exhaustively (brute force or LABS search).
    #[serde(default = "default_exact_cap")]
    pub exact_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RestartConfig {
    pub threshold: f64,
    pub max_restarts: usize,
}

impl Default for RestartConfig {
    fn default() -> Self {
        Self {
            threshold: 0.995,
            max_restarts: 50,
        }
    }
}

fn one() -> usize {
    1
}

fn default_samples() -> usize {
    1000
}

fn default_ansatz() -> Ansatz {
    Ansatz::Linear
}

fn default_mode() -> CoefficientMode {
    CoefficientMode::Identity
}

fn default_exact_cap() -> usize {
    24
}

impl ExperimentConfig {
    /// Defaults matching each experiment's standard sweep.
    pub fn preset(kind: ExperimentKind) -> Self {
        let (n_min, n_max, n_trials, steps, unweighted) = match kind {
            ExperimentKind::Restarts => (6, 12, 25, vec![25, 50], vec![25]),
            ExperimentKind::Ar => (20, 125, 25, vec![10, 25, 50], vec![]),
            ExperimentKind::Labs => (6, 13, 50, vec![40], vec![]),
            ExperimentKind::Quad => (5, 9, 20, vec![40], vec![]),
        };
        Self {
            experiment: kind,
            seed: 1,
            n_min,
            n_max,
            n_stride: 1,
            n_trials,
            steps,
            unweighted_steps: unweighted,
            workers: 1,
            out_dir: None,
            ensemble: EnsembleConfig::default(),
            tau: TauPolicy::default(),
            itd: ItdConfig::default(),
            restarts: RestartConfig::default(),
            gw: GwParams::default(),
            samples: default_samples(),
            ansatz: Ansatz::Linear,
            mode: CoefficientMode::Identity,
            bank: None,
            exact_cap: default_exact_cap(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::input(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min > self.n_max {
            return Err(Error::input(format!(
                "n_min {} > n_max {}",
                self.n_min, self.n_max
            )));
        }
        if self.n_stride == 0 {
            return Err(Error::input("n_stride must be positive"));
        }
        if self.n_trials == 0 {
            return Err(Error::input("n_trials must be positive"));
        }
        if self.steps.is_empty() && self.unweighted_steps.is_empty() {
            return Err(Error::input("no step counts configured"));
        }
        if self.workers == 0 {
            return Err(Error::input("workers must be positive"));
        }
        if !(0.0..=1.0).contains(&self.ensemble.p) {
            return Err(Error::input(format!(
                "ensemble p = {} outside [0, 1]",
                self.ensemble.p
            )));
        }
        self.tau.validate()
    }

    pub fn sizes(&self) -> Vec<usize> {
        (self.n_min..=self.n_max).step_by(self.n_stride).collect()
    }

    pub fn child_seed(&self, n: usize, trial: usize) -> u64 {
        derive_seed(self.seed, &[self.experiment.id(), n as u64, trial as u64])
    }

    /// `QITE_OUT_DIR` if set, else the configured directory, else `out`.
    pub fn resolved_out_dir(&self) -> PathBuf {
        resolve_out_dir(self.out_dir.as_deref())
    }
}

pub fn resolve_out_dir(configured: Option<&Path>) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => configured.map_or_else(|| PathBuf::from("out"), Path::to_path_buf),
    }
}

/// Runs `f` over `tasks` on a dedicated pool, keeping task order.
pub(crate) fn par_map<T: Sync, R: Send>(
    workers: usize,
    tasks: &[T],
    f: impl Fn(&T) -> Result<R> + Sync,
) -> Result<Vec<R>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::resource(format!("thread pool: {e}")))?;
    pool.install(|| tasks.par_iter().map(&f).collect())
}

/// Mean and standard error (sample standard deviation over `sqrt(n)`).
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Files written by one experiment run.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentOutput {
    pub rows_csv: PathBuf,
    pub summary_csv: PathBuf,
    pub summary_json: PathBuf,
    pub config: PathBuf,
}

pub(crate) fn write_outputs<R: Serialize, S: Serialize>(
    cfg: &ExperimentConfig,
    rows: &[R],
    summary: &[S],
) -> Result<ExperimentOutput> {
    let dir = cfg.resolved_out_dir();
    fs::create_dir_all(&dir)?;
    let name = cfg.experiment.name();
    let out = ExperimentOutput {
        rows_csv: dir.join(format!("exp_{name}.csv")),
        summary_csv: dir.join(format!("exp_{name}_summary.csv")),
        summary_json: dir.join(format!("exp_{name}_summary.json")),
        config: dir.join(format!("exp_{name}_config.toml")),
    };
    write_csv(&out.rows_csv, rows)?;
    write_csv(&out.summary_csv, summary)?;
    let json = serde_json::json!({ "config": cfg, "summary": summary });
    fs::write(
        &out.summary_json,
        serde_json::to_string_pretty(&json)? + "\n",
    )?;
    fs::write(&out.config, cfg.to_toml())?;
    Ok(out)
}

fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        for kind in [
            ExperimentKind::Restarts,
            ExperimentKind::Ar,
            ExperimentKind::Labs,
            ExperimentKind::Quad,
        ] {
            let mut cfg = ExperimentConfig::preset(kind);
            cfg.mode = CoefficientMode::Solve { lambda: 1e-8 };
            cfg.out_dir = Some("somewhere".into());
            let back = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
            assert_eq!(back, cfg);
        }
    }

    #[test]
    fn minimal_config() {
        let cfg = ExperimentConfig::from_toml(
            "experiment = \"labs\"\nseed = 3\nn_min = 6\nn_max = 8\nn_trials = 4\nsteps = [40]\n\n[itd]\na = 5\n",
        )
        .unwrap();
        assert_eq!(cfg.itd.a, 5);
        assert_eq!(cfg.itd.b, DEFAULT_LABS_B);
        assert_eq!(cfg.sizes(), vec![6, 7, 8]);
        assert!(ExperimentConfig::from_toml("experiment = \"labs\"\nbogus = 1\n").is_err());
        assert!(ExperimentConfig::from_toml(
            "experiment = \"labs\"\nseed = 3\nn_min = 9\nn_max = 8\nn_trials = 4\nsteps = [40]\n"
        )
        .is_err());
    }

    #[test]
    fn stderr_is_std_over_sqrt_n() {
        let (m, se) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        let sd = (5.0f64 / 3.0).sqrt();
        assert!((se - sd / 2.0).abs() < 1e-15);
        assert_eq!(mean_stderr(&[7.0]), (7.0, 0.0));
    }

    #[test]
    fn child_seeds_differ() {
        let cfg = ExperimentConfig::preset(ExperimentKind::Labs);
        assert_ne!(cfg.child_seed(6, 0), cfg.child_seed(6, 1));
        assert_ne!(cfg.child_seed(6, 0), cfg.child_seed(7, 0));
        let other = ExperimentConfig::preset(ExperimentKind::Quad);
        assert_ne!(cfg.child_seed(6, 0), other.child_seed(6, 0));
    }
}
