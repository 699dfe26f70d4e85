use serde::Serialize;

use super::{
    mean_stderr, par_map, write_outputs, ExperimentConfig, ExperimentKind, ExperimentOutput,
};
use crate::error::{Error, Result};
use crate::graphs::{nws_generate, NwsParams};
use crate::hamiltonian::brute_force_ground;
use crate::problems::maxcut_hamiltonian;
use crate::restarts::{converge_with_restarts, RestartOptions};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub steps: usize,
    pub weighted: bool,
    pub trial: usize,
    pub seed: u64,
    pub restarts: usize,
    pub converged: bool,
    pub best_p_gs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartSummary {
    #[serde(rename = "N")]
    pub n: usize,
    pub steps: usize,
    pub weighted: bool,
    pub trials: usize,
    pub converged: usize,
    pub mean_restarts: f64,
    pub stderr_restarts: f64,
}

/// Restarts needed to reach `P(GS) >= threshold`, per graph. The weighted and
/// unweighted variants of a trial share the graph structure.
pub fn run_restarts(
    cfg: &ExperimentConfig,
) -> Result<(Vec<RestartRow>, Vec<RestartSummary>, ExperimentOutput)> {
    if cfg.experiment != ExperimentKind::Restarts {
        return Err(Error::input("config is not a restarts experiment"));
    }
    cfg.validate()?;
    if cfg.n_max > cfg.exact_cap {
        return Err(Error::resource(format!(
            "N = {} needs brute-force ground sets beyond the cap of {}",
            cfg.n_max, cfg.exact_cap
        )));
    }
    let variants: Vec<(usize, bool)> = cfg
        .steps
        .iter()
        .map(|&s| (s, cfg.ensemble.weighted))
        .chain(cfg.unweighted_steps.iter().map(|&s| (s, false)))
        .collect();
    let mut tasks = Vec::new();
    for n in cfg.sizes() {
        for &(steps, weighted) in &variants {
            for trial in 0..cfg.n_trials {
                tasks.push((n, steps, weighted, trial));
            }
        }
    }
    let rows = par_map(cfg.workers, &tasks, |&(n, steps, weighted, trial)| {
        let seed = cfg.child_seed(n, trial);
        let g = nws_generate(
            NwsParams {
                n,
                k: cfg.ensemble.k,
                p: cfg.ensemble.p,
                weighted,
            },
            derive_seed(seed, &[0]),
        )?;
        let gs = brute_force_ground(&maxcut_hamiltonian(&g)?, cfg.exact_cap)?.ground_set;
        let opts = RestartOptions {
            n_steps: steps,
            threshold: cfg.restarts.threshold,
            max_restarts: cfg.restarts.max_restarts,
            n_itd_edges: cfg.itd.n_edges,
            tau: cfg.tau,
        };
        let out = converge_with_restarts(
            &g,
            &gs,
            &opts,
            derive_seed(seed, &[1, steps as u64, weighted as u64]),
        )?;
        Ok(RestartRow {
            n,
            steps,
            weighted,
            trial,
            seed,
            restarts: out.attempts,
            converged: out.converged,
            best_p_gs: out.best_p_gs,
        })
    })?;
    let mut summary = Vec::new();
    for n in cfg.sizes() {
        for &(steps, weighted) in &variants {
            let sel: Vec<&RestartRow> = rows
                .iter()
                .filter(|r| r.n == n && r.steps == steps && r.weighted == weighted)
                .collect();
            let counts: Vec<f64> = sel.iter().map(|r| r.restarts as f64).collect();
            let (mean, se) = mean_stderr(&counts);
            summary.push(RestartSummary {
                n,
                steps,
                weighted,
                trials: sel.len(),
                converged: sel.iter().filter(|r| r.converged).count(),
                mean_restarts: mean,
                stderr_restarts: se,
            });
        }
    }
    let out = write_outputs(cfg, &rows, &summary)?;
    Ok((rows, summary, out))
}
