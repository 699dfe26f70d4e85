use crate::error::{Error, Result};
use crate::graphs::WeightedGraph;
use crate::hamiltonian::IsingHamiltonian;

/// `H = sum_{(i,j)} w_ij Z_i Z_j` with zero offset.
pub fn maxcut_hamiltonian(g: &WeightedGraph) -> Result<IsingHamiltonian> {
    if g.edges().is_empty() {
        return Err(Error::input("MaxCut needs a graph with at least one edge"));
    }
    IsingHamiltonian::from_pairs(g.n(), g.edges().iter().map(|e| (vec![e.u, e.v], e.w)), 0.0)
}

/// Total weight of edges whose endpoints carry different spins.
pub fn cut_value(g: &WeightedGraph, sigma: &[i8]) -> Result<f64> {
    if sigma.len() != g.n() {
        return Err(Error::input(format!(
            "spin vector of length {} for a {}-vertex graph",
            sigma.len(),
            g.n()
        )));
    }
    Ok(g.edges()
        .iter()
        .filter(|e| sigma[e.u] != sigma[e.v])
        .map(|e| e.w)
        .sum())
}
