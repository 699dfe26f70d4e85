//! Restart loop over random ITD edges and random initial states.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::WeightedGraph;
use crate::hamiltonian::Spins;
use crate::linear::{p_gs, qite_run, InitSymbol, LinearRun, ProductState, QiteOptions};
use crate::problems::maxcut_hamiltonian;
use crate::rng::SplitMix64;
use crate::schedule::{ItdSchedule, Ramp};
use crate::trace::TauPolicy;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartOptions {
    pub n_steps: usize,
    /// Success when `P(GS) >= threshold`.
    pub threshold: f64,
    pub max_restarts: usize,
    pub n_itd_edges: usize,
    pub tau: TauPolicy,
}

impl RestartOptions {
    pub fn new(n_steps: usize) -> Self {
        Self {
            n_steps,
            threshold: 0.995,
            max_restarts: 50,
            n_itd_edges: 1,
            tau: TauPolicy::default(),
        }
    }
}

/// One attempt's random choices.
#[derive(Debug, Clone, PartialEq)]
pub struct Attempt {
    pub itd_edges: Vec<(usize, usize)>,
    pub symbols: Vec<InitSymbol>,
}

/// Draws `n_itd` distinct edges uniformly, then one symbol per vertex
/// uniformly from `alphabet`.
pub fn draw_attempt(
    g: &WeightedGraph,
    n_itd: usize,
    alphabet: &[InitSymbol],
    rng: &mut SplitMix64,
) -> Attempt {
    let m = g.edges().len();
    let mut pool: Vec<usize> = (0..m).collect();
    let mut itd_edges = Vec::new();
    for _ in 0..n_itd.min(m) {
        let k = rng.below(pool.len());
        let e = g.edges()[pool.swap_remove(k)];
        itd_edges.push((e.u, e.v));
    }
    let symbols = InitSymbol::random(g.n(), alphabet, rng);
    Attempt { itd_edges, symbols }
}

#[derive(Debug, Clone)]
pub struct RestartOutcome {
    /// Attempts made, including the successful one.
    pub attempts: usize,
    pub converged: bool,
    pub best_p_gs: f64,
    pub best_attempt: Attempt,
    pub best_run: LinearRun,
}

/// Repeats single QITE runs with a fresh random ITD edge set and a random
/// initial state (symbols uniform over `|0>, |1>, |+>, |->`) until the final
/// `P(GS)` reaches the threshold or `max_restarts` attempts are spent.
/// Non-convergence is reported in the outcome, not as an error.
pub fn converge_with_restarts(
    g: &WeightedGraph,
    ground_set: &[Spins],
    opts: &RestartOptions,
    seed: u64,
) -> Result<RestartOutcome> {
    if opts.max_restarts == 0 {
        return Err(Error::input("max_restarts must be positive"));
    }
    let h = maxcut_hamiltonian(g)?;
    let mut rng = SplitMix64::new(seed);
    let mut best: Option<(f64, Attempt, LinearRun)> = None;
    for attempt_no in 1..=opts.max_restarts {
        let attempt = draw_attempt(g, opts.n_itd_edges, &InitSymbol::ALL, &mut rng);
        let qopts = QiteOptions::new(opts.n_steps)
            .with_tau(opts.tau)
            .with_schedule(ItdSchedule::EdgeRamp {
                edges: attempt.itd_edges.clone(),
                ramp: Ramp::Linear,
            });
        let run = qite_run(&h, &ProductState::from_symbols(&attempt.symbols), &qopts)?;
        let p = p_gs(&run.state, ground_set)?;
        let improved = best.as_ref().is_none_or(|(bp, _, _)| p > *bp);
        if improved {
            best = Some((p, attempt, run));
        }
        if p >= opts.threshold {
            let (best_p_gs, best_attempt, best_run) = best.expect("set above");
            return Ok(RestartOutcome {
                attempts: attempt_no,
                converged: true,
                best_p_gs,
                best_attempt,
                best_run,
            });
        }
    }
    let (best_p_gs, best_attempt, best_run) = best.expect("at least one attempt");
    Ok(RestartOutcome {
        attempts: opts.max_restarts,
        converged: false,
        best_p_gs,
        best_attempt,
        best_run,
    })
}
