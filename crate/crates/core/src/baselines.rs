//! Classical MaxCut references: Goemans-Williamson through a low-rank
//! coordinate-descent relaxation, and single-flip greedy search.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::WeightedGraph;
use crate::hamiltonian::Spins;
use crate::problems::cut_value;
use crate::rng::{derive_seed, SplitMix64};

/// Unit vectors, one per vertex, and the relaxed cut value
/// `sum_ij w_ij (1 - v_i . v_j) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpEmbedding {
    pub rank: usize,
    pub vectors: Vec<Vec<f64>>,
    pub objective: f64,
    pub sweeps: usize,
    /// Objective after every sweep, starting with the random init.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GwParams {
    /// `None` picks `ceil(sqrt(2N)) + 1`.
    pub rank: Option<usize>,
    pub tol: f64,
    pub max_iters: usize,
    pub n_hyperplanes: usize,
    pub restarts: usize,
}

impl Default for GwParams {
    fn default() -> Self {
        Self {
            rank: None,
            tol: 1e-6,
            max_iters: 2000,
            n_hyperplanes: 100,
            restarts: 5,
        }
    }
}

pub fn default_rank(n: usize) -> usize {
    ((2.0 * n as f64).sqrt().ceil() as usize + 1).max(2)
}

fn relaxed_cut(g: &WeightedGraph, v: &[Vec<f64>]) -> f64 {
    g.edges()
        .iter()
        .map(|e| e.w * (1.0 - dot(&v[e.u], &v[e.v])) / 2.0)
        .sum()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn random_unit(r: usize, rng: &mut SplitMix64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..r).map(|_| rng.normal()).collect();
        let n = dot(&v, &v).sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Mixing-method coordinate descent: each sweep sets, in vertex order,
/// `v_i <- -normalize(sum_j w_ij v_j)`, which exactly maximizes the relaxed
/// cut in `v_i`. Stops when the largest per-sweep vector change drops below
/// `tol`, or after `max_iters` sweeps.
pub fn gw_sdp(
    g: &WeightedGraph,
    r: usize,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<SdpEmbedding> {
    if r < 2 {
        return Err(Error::input(format!("SDP rank r = {r} must be at least 2")));
    }
    if !(tol > 0.0) {
        return Err(Error::input("SDP tolerance must be positive"));
    }
    let adj = g.adjacency();
    let mut rng = SplitMix64::new(seed);
    let mut v: Vec<Vec<f64>> = (0..g.n()).map(|_| random_unit(r, &mut rng)).collect();
    let mut history = vec![relaxed_cut(g, &v)];
    let mut sweeps = 0;
    let mut acc = vec![0.0; r];
    while sweeps < max_iters {
        sweeps += 1;
        let mut delta: f64 = 0.0;
        for i in 0..g.n() {
            acc.iter_mut().for_each(|x| *x = 0.0);
            for &(j, w) in &adj[i] {
                for (a, x) in acc.iter_mut().zip(&v[j]) {
                    *a += w * x;
                }
            }
            let norm = dot(&acc, &acc).sqrt();
            if norm < 1e-14 {
                continue;
            }
            let mut change = 0.0;
            for (x, a) in v[i].iter_mut().zip(&acc) {
                let new = -a / norm;
                change += (new - *x) * (new - *x);
                *x = new;
            }
            delta = delta.max(change.sqrt());
        }
        history.push(relaxed_cut(g, &v));
        if delta < tol {
            break;
        }
    }
    Ok(SdpEmbedding {
        rank: r,
        objective: *history.last().expect("non-empty"),
        vectors: v,
        sweeps,
        history,
    })
}

/// Best of `n_hyperplanes` Gaussian hyperplane roundings. A vertex on the
/// non-negative side of the hyperplane gets spin `+1`.
pub fn gw_round(
    g: &WeightedGraph,
    emb: &SdpEmbedding,
    n_hyperplanes: usize,
    seed: u64,
) -> Result<(Spins, f64)> {
    if emb.vectors.len() != g.n() {
        return Err(Error::input("embedding and graph sizes differ"));
    }
    if n_hyperplanes == 0 {
        return Err(Error::input("need at least one hyperplane"));
    }
    let mut rng = SplitMix64::new(seed);
    let mut best: Option<(Spins, f64)> = None;
    for _ in 0..n_hyperplanes {
        let h: Vec<f64> = (0..emb.rank).map(|_| rng.normal()).collect();
        let sigma: Spins = emb
            .vectors
            .iter()
            .map(|v| if dot(v, &h) >= 0.0 { 1 } else { -1 })
            .collect();
        let cut = cut_value(g, &sigma)?;
        if best.as_ref().is_none_or(|(_, c)| cut > *c) {
            best = Some((sigma, cut));
        }
    }
    Ok(best.expect("at least one hyperplane"))
}

/// `sum w - 2 cut`: the MaxCut Hamiltonian energy of `sigma`.
pub fn gw_energy(g: &WeightedGraph, sigma: &[i8]) -> Result<f64> {
    Ok(g.total_weight() - 2.0 * cut_value(g, sigma)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GwResult {
    pub sigma: Spins,
    pub cut: f64,
    pub energy: f64,
    /// Largest relaxed cut over restarts.
    pub relaxation: f64,
    pub rank: usize,
    pub params: GwParams,
}

/// Independent relaxations from fresh inits, each rounded `n_hyperplanes`
/// times; the best cut over everything wins.
pub fn goemans_williamson(g: &WeightedGraph, params: &GwParams, seed: u64) -> Result<GwResult> {
    if params.restarts == 0 {
        return Err(Error::input("GW needs at least one restart"));
    }
    let rank = params.rank.unwrap_or_else(|| default_rank(g.n()));
    let mut best: Option<(Spins, f64)> = None;
    let mut relaxation = f64::NEG_INFINITY;
    for k in 0..params.restarts as u64 {
        let emb = gw_sdp(
            g,
            rank,
            params.tol,
            params.max_iters,
            derive_seed(seed, &[k, 0]),
        )?;
        relaxation = relaxation.max(emb.objective);
        let (sigma, cut) = gw_round(g, &emb, params.n_hyperplanes, derive_seed(seed, &[k, 1]))?;
        if best.as_ref().is_none_or(|(_, c)| cut > *c) {
            best = Some((sigma, cut));
        }
    }
    let (sigma, cut) = best.expect("at least one restart");
    Ok(GwResult {
        energy: gw_energy(g, &sigma)?,
        sigma,
        cut,
        relaxation,
        rank,
        params: *params,
    })
}

/// Hill climbing from random assignments: flip the vertex with the largest
/// positive gain until none is left. Best of `n_restarts`.
pub fn greedy_maxcut(g: &WeightedGraph, seed: u64, n_restarts: usize) -> Result<(Spins, f64)> {
    if n_restarts == 0 {
        return Err(Error::input("greedy needs at least one restart"));
    }
    let adj = g.adjacency();
    let mut rng = SplitMix64::new(seed);
    let mut best: Option<(Spins, f64)> = None;
    for _ in 0..n_restarts {
        let mut sigma: Spins = (0..g.n())
            .map(|_| if rng.bernoulli(0.5) { -1 } else { 1 })
            .collect();
        // gain of flipping i: same-side weight minus cross weight
        let gain = |sigma: &Spins, i: usize| -> f64 {
            adj[i]
                .iter()
                .map(|&(j, w)| if sigma[j] == sigma[i] { w } else { -w })
                .sum()
        };
        loop {
            let (i, best_gain) =
                (0..g.n())
                    .map(|i| (i, gain(&sigma, i)))
                    .fold(
                        (usize::MAX, 0.0),
                        |acc, x| if x.1 > acc.1 + 1e-12 { x } else { acc },
                    );
            if i == usize::MAX || best_gain <= 1e-12 {
                break;
            }
            sigma[i] = -sigma[i];
        }
        let cut = cut_value(g, &sigma)?;
        if best.as_ref().is_none_or(|(_, c)| cut > *c) {
            best = Some((sigma, cut));
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Uniformly random spins.
pub fn random_assignment(n: usize, seed: u64) -> Spins {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|_| if rng.bernoulli(0.5) { -1 } else { 1 })
        .collect()
}
