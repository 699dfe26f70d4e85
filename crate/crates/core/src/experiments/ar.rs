use serde::Serialize;

use super::{
    mean_stderr, par_map, write_outputs, ExperimentConfig, ExperimentKind, ExperimentOutput,
};
use crate::baselines::goemans_williamson;
use crate::error::{Error, Result};
use crate::graphs::{nws_generate, NwsParams};
use crate::linear::{
    best_sample, qite_run, round_state, InitSymbol, ProductState, QiteOptions, SymbolString,
};
use crate::problems::maxcut_hamiltonian;
use crate::restarts::draw_attempt;
use crate::rng::{derive_seed, SplitMix64};
use crate::schedule::{ItdSchedule, Ramp};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub steps: usize,
    pub trial: usize,
    pub seed: u64,
    pub init: String,
    #[serde(rename = "E_qite")]
    pub e_qite: f64,
    #[serde(rename = "E_gw")]
    pub e_gw: f64,
    /// `E_qite / E_gw`; above 1 means QITE found a lower energy.
    pub ar: f64,
    #[serde(rename = "E_sampled_best")]
    pub e_sampled_best: f64,
    #[serde(rename = "E_rounded")]
    pub e_rounded: f64,
    pub measurement_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArSummary {
    #[serde(rename = "N")]
    pub n: usize,
    pub steps: usize,
    pub trials: usize,
    pub mean_ar: f64,
    pub stderr_ar: f64,
    pub max_ar: f64,
    /// Trials whose best of expectation, rounding and samples stays above GW.
    pub best_ar_below_one: usize,
}

/// One random ITD edge set and initial state per graph, shared by all step
/// counts; GW is computed once per graph.
pub fn run_ar(cfg: &ExperimentConfig) -> Result<(Vec<ArRow>, Vec<ArSummary>, ExperimentOutput)> {
    if cfg.experiment != ExperimentKind::Ar {
        return Err(Error::input("config is not an AR experiment"));
    }
    cfg.validate()?;
    let mut tasks = Vec::new();
    for n in cfg.sizes() {
        for trial in 0..cfg.n_trials {
            tasks.push((n, trial));
        }
    }
    let per_graph = par_map(cfg.workers, &tasks, |&(n, trial)| {
        let seed = cfg.child_seed(n, trial);
        let g = nws_generate(
            NwsParams {
                n,
                k: cfg.ensemble.k,
                p: cfg.ensemble.p,
                weighted: cfg.ensemble.weighted,
            },
            derive_seed(seed, &[0]),
        )?;
        let h = maxcut_hamiltonian(&g)?;
        let gw = goemans_williamson(&g, &cfg.gw, derive_seed(seed, &[2]))?;
        let mut rng = SplitMix64::new(derive_seed(seed, &[1]));
        let attempt = draw_attempt(&g, cfg.itd.n_edges, &InitSymbol::ALL, &mut rng);
        let init = ProductState::from_symbols(&attempt.symbols);
        let mut rows = Vec::new();
        for &steps in &cfg.steps {
            let opts =
                QiteOptions::new(steps)
                    .with_tau(cfg.tau)
                    .with_schedule(ItdSchedule::EdgeRamp {
                        edges: attempt.itd_edges.clone(),
                        ramp: Ramp::Linear,
                    });
            let run = qite_run(&h, &init, &opts)?;
            let e_qite = run.trace.final_energy();
            let e_rounded = h.evaluate(&round_state(&run.state))?;
            let e_sampled_best = best_sample(
                &h,
                &run.state,
                cfg.samples,
                derive_seed(seed, &[3, steps as u64]),
            )?
            .map_or(f64::NAN, |(_, e)| e);
            rows.push(ArRow {
                n,
                steps,
                trial,
                seed,
                init: SymbolString(&attempt.symbols).to_string(),
                e_qite,
                e_gw: gw.energy,
                ar: e_qite / gw.energy,
                e_sampled_best,
                e_rounded,
                measurement_count: run.trace.measurement_count(),
            });
        }
        Ok(rows)
    })?;
    let mut rows: Vec<ArRow> = per_graph.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.n, r.steps, r.trial));
    let mut summary = Vec::new();
    for n in cfg.sizes() {
        for &steps in &cfg.steps {
            let sel: Vec<&ArRow> = rows
                .iter()
                .filter(|r| r.n == n && r.steps == steps)
                .collect();
            let ars: Vec<f64> = sel.iter().map(|r| r.ar).collect();
            let (mean, se) = mean_stderr(&ars);
            summary.push(ArSummary {
                n,
                steps,
                trials: sel.len(),
                mean_ar: mean,
                stderr_ar: se,
                max_ar: ars.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                best_ar_below_one: sel
                    .iter()
                    .filter(|r| r.e_qite.min(r.e_rounded).min(r.e_sampled_best) / r.e_gw < 1.0)
                    .count(),
            });
        }
    }
    let out = write_outputs(cfg, &rows, &summary)?;
    Ok((rows, summary, out))
}
