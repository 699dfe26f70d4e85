use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    mean_stderr, par_map, write_outputs, Ansatz, ExperimentConfig, ExperimentKind, ExperimentOutput,
};
use crate::error::{Error, Result};
use crate::hamiltonian::IsingHamiltonian;
use crate::linear::{
    best_sample, p_gs, qite_run, round_state, InitSymbol, ProductState, QiteOptions, SymbolString,
};
use crate::problems::{labs_exact, labs_hamiltonian_expansion, LabsOptimum, LabsSolutionBank};
use crate::quad::{p_gs_statevector, qite_quad_run, QuadOptions, StateVector, YOperatorBasis};
use crate::rng::{derive_seed, SplitMix64};
use crate::schedule::ItdSchedule;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabsRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub init_index: usize,
    pub seed: u64,
    pub init: String,
    pub ansatz: String,
    #[serde(rename = "E_qite")]
    pub e_qite: f64,
    #[serde(rename = "E_opt")]
    pub e_opt: u64,
    /// `E_qite / E_opt`; 1 is optimal.
    pub ar: f64,
    #[serde(rename = "E_best")]
    pub e_best: f64,
    pub ar_best: f64,
    pub p_gs: f64,
    pub measurement_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabsSummary {
    #[serde(rename = "N")]
    pub n: usize,
    pub inits: usize,
    #[serde(rename = "E_opt")]
    pub e_opt: u64,
    pub mean_ar: f64,
    pub stderr_ar: f64,
    pub best_ar: f64,
    pub mean_p_gs: f64,
    pub stderr_p_gs: f64,
    pub max_p_gs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub init_index: usize,
    pub seed: u64,
    pub init: String,
    pub mode: String,
    #[serde(rename = "E_linear")]
    pub e_linear: f64,
    #[serde(rename = "E_quad")]
    pub e_quad: f64,
    pub p_gs_linear: f64,
    pub p_gs_quad: f64,
    pub p_gs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadSummary {
    #[serde(rename = "N")]
    pub n: usize,
    pub inits: usize,
    pub mean_p_gs_linear: f64,
    pub mean_p_gs_quad: f64,
    pub mean_diff: f64,
    pub stderr_diff: f64,
}

/// Optima per N: bank entries first, exhaustive search for the rest.
fn labs_references(
    cfg: &ExperimentConfig,
) -> Result<BTreeMap<usize, (IsingHamiltonian, LabsOptimum)>> {
    let bank = match &cfg.bank {
        Some(p) if p.exists() => LabsSolutionBank::load(p)?,
        _ => LabsSolutionBank::new(),
    };
    let mut out = BTreeMap::new();
    for n in cfg.sizes() {
        let opt = match bank.get(n) {
            Some(e) => LabsOptimum {
                n,
                energy: e.energy,
                witnesses: e.witnesses.clone(),
            },
            None => labs_exact(n, cfg.exact_cap)?,
        };
        out.insert(n, (labs_hamiltonian_expansion(n)?, opt));
    }
    Ok(out)
}

fn schedule(cfg: &ExperimentConfig) -> ItdSchedule {
    ItdSchedule::Labs {
        a: cfg.itd.a,
        b: cfg.itd.b,
        r_max: cfg.itd.r_max,
    }
}

fn init_symbols(seed: u64, n: usize) -> Vec<InitSymbol> {
    let mut rng = SplitMix64::new(derive_seed(seed, &[0]));
    InitSymbol::random(n, &InitSymbol::ZERO_PLUS, &mut rng)
}

fn single_steps(cfg: &ExperimentConfig) -> Result<usize> {
    match cfg.steps.as_slice() {
        [s] => Ok(*s),
        _ => Err(Error::input("LABS experiments take exactly one step count")),
    }
}

/// Random `{|0>, |+>}` product states per N under the LABS schedule; AR uses
/// the expected sidelobe energy, the best AR the best of rounding and samples.
pub fn run_labs(
    cfg: &ExperimentConfig,
) -> Result<(Vec<LabsRow>, Vec<LabsSummary>, ExperimentOutput)> {
    if cfg.experiment != ExperimentKind::Labs {
        return Err(Error::input("config is not a LABS experiment"));
    }
    cfg.validate()?;
    let steps = single_steps(cfg)?;
    let refs = labs_references(cfg)?;
    let sched = schedule(cfg);
    let mut tasks = Vec::new();
    for n in cfg.sizes() {
        for i in 0..cfg.n_trials {
            tasks.push((n, i));
        }
    }
    let rows = par_map(cfg.workers, &tasks, |&(n, i)| {
        let seed = cfg.child_seed(n, i);
        let (h, opt) = &refs[&n];
        let gs = opt.ground_set();
        let syms = init_symbols(seed, n);
        let (e_qite, e_best, pg, meas) = match cfg.ansatz {
            Ansatz::Linear => {
                let opts = QiteOptions::new(steps)
                    .with_tau(cfg.tau)
                    .with_schedule(sched.clone());
                let run = qite_run(h, &ProductState::from_symbols(&syms), &opts)?;
                let rounded = h.evaluate(&round_state(&run.state))?;
                let sampled = best_sample(h, &run.state, cfg.samples, derive_seed(seed, &[1]))?
                    .map_or(f64::INFINITY, |(_, e)| e);
                (
                    run.trace.final_energy(),
                    rounded.min(sampled),
                    p_gs(&run.state, &gs)?,
                    run.trace.measurement_count(),
                )
            }
            Ansatz::Quad => {
                let opts = QuadOptions::new(steps)
                    .with_tau(cfg.tau)
                    .with_schedule(sched.clone())
                    .with_mode(cfg.mode);
                let run = qite_quad_run(
                    h,
                    &StateVector::init_product(&syms)?,
                    &YOperatorBasis::quadratic(n),
                    &opts,
                )?;
                // Most likely basis state stands in for rounding.
                let probs = run.state.probabilities();
                let argmax =
                    (0..probs.len()).fold(0, |b, x| if probs[x] > probs[b] { x } else { b });
                (
                    run.trace.final_energy(),
                    h.evaluate_bits(argmax as u64),
                    p_gs_statevector(&run.state, &gs)?,
                    run.trace.measurement_count(),
                )
            }
        };
        let e_opt = opt.energy;
        Ok(LabsRow {
            n,
            init_index: i,
            seed,
            init: SymbolString(&syms).to_string(),
            ansatz: format!("{:?}", cfg.ansatz).to_lowercase(),
            e_qite,
            e_opt,
            ar: e_qite / e_opt as f64,
            e_best,
            ar_best: e_best / e_opt as f64,
            p_gs: pg,
            measurement_count: meas,
        })
    })?;
    let mut summary = Vec::new();
    for n in cfg.sizes() {
        let sel: Vec<&LabsRow> = rows.iter().filter(|r| r.n == n).collect();
        let ars: Vec<f64> = sel.iter().map(|r| r.ar).collect();
        let ps: Vec<f64> = sel.iter().map(|r| r.p_gs).collect();
        let (mean_ar, stderr_ar) = mean_stderr(&ars);
        let (mean_p_gs, stderr_p_gs) = mean_stderr(&ps);
        summary.push(LabsSummary {
            n,
            inits: sel.len(),
            e_opt: refs[&n].1.energy,
            mean_ar,
            stderr_ar,
            best_ar: sel.iter().map(|r| r.ar_best).fold(f64::INFINITY, f64::min),
            mean_p_gs,
            stderr_p_gs,
            max_p_gs: ps.iter().copied().fold(0.0, f64::max),
        });
    }
    let out = write_outputs(cfg, &rows, &summary)?;
    Ok((rows, summary, out))
}

/// Linear and quadratic Ansatz from the same initial states; paired `P(GS)`.
pub fn run_quad(
    cfg: &ExperimentConfig,
) -> Result<(Vec<QuadRow>, Vec<QuadSummary>, ExperimentOutput)> {
    if cfg.experiment != ExperimentKind::Quad {
        return Err(Error::input("config is not a quad experiment"));
    }
    cfg.validate()?;
    let steps = single_steps(cfg)?;
    let refs = labs_references(cfg)?;
    let sched = schedule(cfg);
    let mut tasks = Vec::new();
    for n in cfg.sizes() {
        for i in 0..cfg.n_trials {
            tasks.push((n, i));
        }
    }
    let rows = par_map(cfg.workers, &tasks, |&(n, i)| {
        let seed = cfg.child_seed(n, i);
        let (h, opt) = &refs[&n];
        let gs = opt.ground_set();
        let syms = init_symbols(seed, n);
        let lin = qite_run(
            h,
            &ProductState::from_symbols(&syms),
            &QiteOptions::new(steps)
                .with_tau(cfg.tau)
                .with_schedule(sched.clone()),
        )?;
        let quad = qite_quad_run(
            h,
            &StateVector::init_product(&syms)?,
            &YOperatorBasis::quadratic(n),
            &QuadOptions::new(steps)
                .with_tau(cfg.tau)
                .with_schedule(sched.clone())
                .with_mode(cfg.mode),
        )?;
        let p_gs_linear = p_gs(&lin.state, &gs)?;
        let p_gs_quad = p_gs_statevector(&quad.state, &gs)?;
        Ok(QuadRow {
            n,
            init_index: i,
            seed,
            init: SymbolString(&syms).to_string(),
            mode: cfg.mode.name().to_string(),
            e_linear: lin.trace.final_energy(),
            e_quad: quad.trace.final_energy(),
            p_gs_linear,
            p_gs_quad,
            p_gs_diff: p_gs_quad - p_gs_linear,
        })
    })?;
    let mut summary = Vec::new();
    for n in cfg.sizes() {
        let sel: Vec<&QuadRow> = rows.iter().filter(|r| r.n == n).collect();
        let diffs: Vec<f64> = sel.iter().map(|r| r.p_gs_diff).collect();
        let (mean_diff, stderr_diff) = mean_stderr(&diffs);
        let k = sel.len() as f64;
        summary.push(QuadSummary {
            n,
            inits: sel.len(),
            mean_p_gs_linear: sel.iter().map(|r| r.p_gs_linear).sum::<f64>() / k,
            mean_p_gs_quad: sel.iter().map(|r| r.p_gs_quad).sum::<f64>() / k,
            mean_diff,
            stderr_diff,
        });
    }
    let out = write_outputs(cfg, &rows, &summary)?;
    Ok((rows, summary, out))
}
