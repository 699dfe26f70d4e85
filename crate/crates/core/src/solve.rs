//! Single-instance solvers with serializable summaries, shared by the
//! command-line tool and the examples.

use serde::Serialize;

use crate::error::Result;
use crate::experiments::{DEFAULT_LABS_A, DEFAULT_LABS_B, DEFAULT_LABS_R_MAX};
use crate::graphs::WeightedGraph;
use crate::hamiltonian::{brute_force_ground, Spins, DEFAULT_BRUTE_FORCE_CAP};
use crate::linear::{
    best_sample, p_gs, qite_run, round_state, InitSymbol, ProductState, QiteOptions, SymbolString,
};
use crate::problems::{
    cut_value, format_sequence, labs_exact, labs_hamiltonian_expansion, maxcut_hamiltonian,
    LabsOptimum,
};
use crate::quad::{
    p_gs_statevector, qite_quad_run, CoefficientMode, QuadOptions, StateVector, YOperatorBasis,
};
use crate::restarts::{converge_with_restarts, draw_attempt, RestartOptions};
use crate::rng::{derive_seed, SplitMix64};
use crate::schedule::{ItdSchedule, Ramp};
use crate::trace::{RunTrace, TauPolicy};

#[derive(Debug, Clone)]
pub struct MaxCutRequest {
    pub n_steps: usize,
    pub n_itd_edges: usize,
    pub tau: TauPolicy,
    pub samples: usize,
    /// Restart until `P(GS) >= threshold` (needs a brute-force ground set).
    pub converge: Option<RestartOptions>,
}

impl MaxCutRequest {
    pub fn new(n_steps: usize) -> Self {
        Self {
            n_steps,
            n_itd_edges: 1,
            tau: TauPolicy::default(),
            samples: 1000,
            converge: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MaxCutSummary {
    pub seed: u64,
    pub n: usize,
    pub n_steps: usize,
    pub init: String,
    pub itd_edges: Vec<(usize, usize)>,
    pub final_energy: f64,
    pub rounded: String,
    pub rounded_energy: f64,
    pub rounded_cut: f64,
    pub sampled_best_energy: Option<f64>,
    /// `None` when the graph is too large for a brute-force ground set.
    pub p_gs: Option<f64>,
    pub ground_energy: Option<f64>,
    pub attempts: usize,
    pub measurement_count: u64,
}

pub fn solve_maxcut(
    g: &WeightedGraph,
    req: &MaxCutRequest,
    seed: u64,
) -> Result<(MaxCutSummary, RunTrace)> {
    let h = maxcut_hamiltonian(g)?;
    let ground = if g.n() <= DEFAULT_BRUTE_FORCE_CAP {
        Some(brute_force_ground(&h, DEFAULT_BRUTE_FORCE_CAP)?)
    } else {
        None
    };
    let (symbols, itd_edges, run, attempts) = match (&req.converge, &ground) {
        (Some(opts), Some(gt)) => {
            let mut opts = opts.clone();
            opts.n_steps = req.n_steps;
            opts.n_itd_edges = req.n_itd_edges;
            opts.tau = req.tau;
            let out = converge_with_restarts(g, &gt.ground_set, &opts, derive_seed(seed, &[1]))?;
            (
                out.best_attempt.symbols,
                out.best_attempt.itd_edges,
                out.best_run,
                out.attempts,
            )
        }
        _ => {
            let mut rng = SplitMix64::new(derive_seed(seed, &[1]));
            let a = draw_attempt(g, req.n_itd_edges, &InitSymbol::ALL, &mut rng);
            let opts = QiteOptions::new(req.n_steps)
                .with_tau(req.tau)
                .with_schedule(ItdSchedule::EdgeRamp {
                    edges: a.itd_edges.clone(),
                    ramp: Ramp::Linear,
                });
            let run = qite_run(&h, &ProductState::from_symbols(&a.symbols), &opts)?;
            (a.symbols, a.itd_edges, run, 1)
        }
    };
    let rounded = round_state(&run.state);
    let sampled = best_sample(&h, &run.state, req.samples, derive_seed(seed, &[2]))?;
    let summary = MaxCutSummary {
        seed,
        n: g.n(),
        n_steps: req.n_steps,
        init: SymbolString(&symbols).to_string(),
        itd_edges,
        final_energy: run.trace.final_energy(),
        rounded: format_sequence(&rounded),
        rounded_energy: h.evaluate(&rounded)?,
        rounded_cut: cut_value(g, &rounded)?,
        sampled_best_energy: sampled.map(|(_, e)| e),
        p_gs: ground
            .as_ref()
            .map(|gt| p_gs(&run.state, &gt.ground_set))
            .transpose()?,
        ground_energy: ground.as_ref().map(|gt| gt.energy),
        attempts,
        measurement_count: run.trace.measurement_count(),
    };
    Ok((summary, run.trace))
}

#[derive(Debug, Clone)]
pub struct LabsRequest {
    pub n_steps: usize,
    pub n_inits: usize,
    pub a: usize,
    pub b: usize,
    pub r_max: usize,
    pub tau: TauPolicy,
    pub samples: usize,
    pub quadratic: bool,
    pub mode: CoefficientMode,
    pub exact_cap: usize,
}

impl LabsRequest {
    pub fn new(n_steps: usize, n_inits: usize) -> Self {
        Self {
            n_steps,
            n_inits,
            a: DEFAULT_LABS_A,
            b: DEFAULT_LABS_B,
            r_max: DEFAULT_LABS_R_MAX,
            tau: TauPolicy::default(),
            samples: 1000,
            quadratic: false,
            mode: CoefficientMode::Identity,
            exact_cap: 24,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LabsSolveSummary {
    pub seed: u64,
    pub n: usize,
    pub n_steps: usize,
    pub n_inits: usize,
    pub ansatz: &'static str,
    pub mode: &'static str,
    pub best_energy: f64,
    pub best_sequence: String,
    pub best_init: String,
    pub optimum: Option<u64>,
    pub best_ar: Option<f64>,
    pub mean_expected_energy: f64,
    pub mean_p_gs: Option<f64>,
    pub max_p_gs: Option<f64>,
}

/// Best sequence over `n_inits` random `{|0>, |+>}` starts. The trace returned
/// is the one of the init that produced the best sequence.
pub fn solve_labs(n: usize, req: &LabsRequest, seed: u64) -> Result<(LabsSolveSummary, RunTrace)> {
    let h = labs_hamiltonian_expansion(n)?;
    let opt: Option<LabsOptimum> = if n <= req.exact_cap {
        Some(labs_exact(n, req.exact_cap)?)
    } else {
        None
    };
    let gs = opt.as_ref().map(LabsOptimum::ground_set);
    let sched = ItdSchedule::Labs {
        a: req.a,
        b: req.b,
        r_max: req.r_max,
    };
    let mut best: Option<(f64, Spins, Vec<InitSymbol>, RunTrace)> = None;
    let mut expected = Vec::new();
    let mut probs = Vec::new();
    for i in 0..req.n_inits as u64 {
        let mut rng = SplitMix64::new(derive_seed(seed, &[i, 0]));
        let syms = InitSymbol::random(n, &InitSymbol::ZERO_PLUS, &mut rng);
        let (cand, trace, p) = if req.quadratic {
            let run = qite_quad_run(
                &h,
                &StateVector::init_product(&syms)?,
                &YOperatorBasis::quadratic(n),
                &QuadOptions::new(req.n_steps)
                    .with_tau(req.tau)
                    .with_schedule(sched.clone())
                    .with_mode(req.mode),
            )?;
            let probs = run.state.probabilities();
            let x = (0..probs.len()).fold(0, |b, x| if probs[x] > probs[b] { x } else { b });
            let sigma = crate::hamiltonian::bits_to_spins(x as u64, n);
            let p = gs
                .as_ref()
                .map(|g| p_gs_statevector(&run.state, g))
                .transpose()?;
            (vec![sigma], run.trace, p)
        } else {
            let run = qite_run(
                &h,
                &ProductState::from_symbols(&syms),
                &QiteOptions::new(req.n_steps)
                    .with_tau(req.tau)
                    .with_schedule(sched.clone()),
            )?;
            let mut cand = vec![round_state(&run.state)];
            if let Some((s, _)) =
                best_sample(&h, &run.state, req.samples, derive_seed(seed, &[i, 1]))?
            {
                cand.push(s);
            }
            let p = gs.as_ref().map(|g| p_gs(&run.state, g)).transpose()?;
            (cand, run.trace, p)
        };
        expected.push(trace.final_energy());
        if let Some(p) = p {
            probs.push(p);
        }
        for sigma in cand {
            let e = h.evaluate(&sigma)?;
            if best.as_ref().is_none_or(|(be, ..)| e < *be) {
                best = Some((e, sigma, syms.clone(), trace.clone()));
            }
        }
    }
    let (best_energy, sigma, init, trace) =
        best.ok_or_else(|| crate::error::Error::input("need at least one init"))?;
    let summary = LabsSolveSummary {
        seed,
        n,
        n_steps: req.n_steps,
        n_inits: req.n_inits,
        ansatz: if req.quadratic { "quad" } else { "linear" },
        mode: req.mode.name(),
        best_energy,
        best_sequence: format_sequence(&sigma),
        best_init: SymbolString(&init).to_string(),
        optimum: opt.as_ref().map(|o| o.energy),
        best_ar: opt.as_ref().map(|o| best_energy / o.energy as f64),
        mean_expected_energy: expected.iter().sum::<f64>() / expected.len() as f64,
        mean_p_gs: (!probs.is_empty()).then(|| probs.iter().sum::<f64>() / probs.len() as f64),
        max_p_gs: probs.iter().copied().reduce(f64::max),
    };
    Ok((summary, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maxcut_cycle_converges() {
        let g = WeightedGraph::new(6, (0..6).map(|i| (i, (i + 1) % 6, 1.0))).unwrap();
        let mut req = MaxCutRequest::new(25);
        req.converge = Some(RestartOptions::new(25));
        let (s, trace) = solve_maxcut(&g, &req, 3).unwrap();
        assert!(s.p_gs.unwrap() >= 0.995);
        assert_eq!(s.rounded_cut, 6.0);
        assert_eq!(trace.records.len(), 26);
    }

    #[test]
    fn labs_small_finds_optimum() {
        let (s, _) = solve_labs(6, &LabsRequest::new(40, 10), 1).unwrap();
        assert_eq!(s.best_energy, 7.0);
        assert_eq!(s.best_ar, Some(1.0));
        let mut req = LabsRequest::new(20, 4);
        req.quadratic = true;
        let (q, _) = solve_labs(5, &req, 1).unwrap();
        assert!(q.best_energy >= 2.0);
    }
}
