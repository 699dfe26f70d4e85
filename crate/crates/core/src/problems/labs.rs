use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonian::{bits_to_spins, spins_to_bits, IsingHamiltonian, Spins, ZTerm};

/// Default sequence-length cap for exhaustive LABS search.
pub const DEFAULT_LABS_CAP: usize = 24;

/// Aperiodic autocorrelation at lag `k`, `sum_{i} s_i s_{i+k}`.
pub fn autocorrelation(sigma: &[i8], k: usize) -> Result<i64> {
    let n = sigma.len();
    if k == 0 || k >= n {
        return Err(Error::input(format!(
            "lag {k} outside 1..={} for length {n}",
            n.saturating_sub(1)
        )));
    }
    Ok(lag_sum(sigma, k))
}

fn lag_sum(sigma: &[i8], k: usize) -> i64 {
    sigma
        .iter()
        .zip(&sigma[k..])
        .map(|(&a, &b)| i64::from(a * b))
        .sum()
}

/// `sum_{k=1}^{N-1} A_k^2`.
pub fn sidelobe_energy(sigma: &[i8]) -> u64 {
    (1..sigma.len())
        .map(|k| lag_sum(sigma, k).pow(2) as u64)
        .sum()
}

/// Sidelobe energy of a packed sequence (bit `i` set means `s_i = -1`).
fn sidelobe_bits(x: u64, n: usize) -> u64 {
    (1..n)
        .map(|k| {
            let len = n - k;
            let mask = (1u64 << len) - 1;
            let differ = ((x ^ (x >> k)) & mask).count_ones() as i64;
            let a = len as i64 - 2 * differ;
            (a * a) as u64
        })
        .sum()
}

/// `N^2 / (2 E_sidelobe)`.
pub fn merit_factor(sigma: &[i8]) -> Result<f64> {
    let e = sidelobe_energy(sigma);
    if e == 0 {
        return Err(Error::Undefined(format!(
            "merit factor of a length-{} sequence with zero sidelobe energy",
            sigma.len()
        )));
    }
    let n = sigma.len() as f64;
    Ok(n * n / (2.0 * e as f64))
}

/// The LABS operator obtained by expanding `sum_k A_k^2` term by term.
///
/// Diagonal `i = j` products contribute the offset `N(N-1)/2`; the rest become
/// quartic terms, or quadratic ones where two indices coincide. The energy of
/// every spin vector equals its sidelobe energy exactly.
pub fn labs_hamiltonian_expansion(n: usize) -> Result<IsingHamiltonian> {
    if n < 2 {
        return Err(Error::input(format!("LABS needs N >= 2, got {n}")));
    }
    let mut offset = 0.0;
    let mut acc: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for k in 1..n {
        for i in 0..n - k {
            for j in 0..n - k {
                if i == j {
                    offset += 1.0;
                    continue;
                }
                let support = odd_indices([i, i + k, j, j + k]);
                if support.is_empty() {
                    offset += 1.0;
                } else {
                    *acc.entry(support).or_insert(0.0) += 1.0;
                }
            }
        }
    }
    let terms = acc
        .into_iter()
        .map(|(s, c)| ZTerm::new(s, c))
        .collect::<Result<Vec<_>>>()?;
    IsingHamiltonian::new(n, terms, offset)
}

/// Indices that appear an odd number of times (since `Z^2 = I`), sorted.
fn odd_indices(idx: [usize; 4]) -> Vec<usize> {
    let mut v = idx.to_vec();
    v.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(v[i]);
        }
        i = j;
    }
    out
}

/// The published closed form of the LABS operator, with 1-based indices
/// shifted to 0-based:
///
/// ```text
/// 2 sum_{i=1}^{N-3} sum_{t=1}^{floor((N-i-1)/2)} sum_{k=t+1}^{N-i-t} Z_i Z_{i+t} Z_{i+k} Z_{i+t+k}
///   + sum_{i=1}^{N-2} sum_{k=1}^{floor((N-i)/2)} Z_i Z_{i+2k}
/// ```
///
/// Kept as a cross-check of [`labs_hamiltonian_expansion`]; see
/// [`compact_form_affine_fit`].
pub fn labs_hamiltonian_compact(n: usize) -> Result<IsingHamiltonian> {
    if n < 4 {
        return Err(Error::input(format!("closed form needs N >= 4, got {n}")));
    }
    let mut pairs: Vec<(Vec<usize>, f64)> = Vec::new();
    for i in 1..=n - 3 {
        for t in 1..=(n - i - 1) / 2 {
            for k in t + 1..=n - i - t {
                pairs.push((vec![i - 1, i + t - 1, i + k - 1, i + t + k - 1], 2.0));
            }
        }
    }
    for i in 1..=n - 2 {
        for k in 1..=(n - i) / 2 {
            pairs.push((vec![i - 1, i + 2 * k - 1], 1.0));
        }
    }
    IsingHamiltonian::from_pairs(n, pairs, 0.0)
}

/// Least-squares fit `E_sidelobe(s) ~ slope * H(s) + intercept` over all
/// `2^N` sequences, with the largest absolute residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

pub fn compact_form_affine_fit(n: usize) -> Result<AffineFit> {
    if n > 20 {
        return Err(Error::resource(format!(
            "affine fit enumerates 2^{n} sequences"
        )));
    }
    let h = labs_hamiltonian_compact(n)?;
    let pts: Vec<(f64, f64)> = (0..1u64 << n)
        .map(|x| (h.evaluate_bits(x), sidelobe_bits(x, n) as f64))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let max_residual = pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).abs())
        .fold(0.0, f64::max);
    Ok(AffineFit {
        slope,
        intercept,
        max_residual,
    })
}

/// Lags `(t, k)` of a quartic LABS term `Z_i Z_{i+t} Z_{i+k} Z_{i+t+k}` with
/// `t < k`, recovered from its sorted support. Returns `None` for supports
/// that are not of that shape.
pub fn labs_quartic_lags(support: &[usize]) -> Option<(usize, usize)> {
    match *support {
        [a, b, c, d] if a + d == b + c => Some((b - a, c - a)),
        _ => None,
    }
}

/// The symmetry orbit of a sequence under negation and reversal, without
/// duplicates, ordered by packed value.
pub fn labs_orbit(sigma: &[i8]) -> Vec<Spins> {
    let neg: Spins = sigma.iter().map(|s| -s).collect();
    let rev: Spins = sigma.iter().rev().copied().collect();
    let neg_rev: Spins = rev.iter().map(|s| -s).collect();
    let set: BTreeSet<u64> = [sigma.to_vec(), neg, rev, neg_rev]
        .iter()
        .map(|s| spins_to_bits(s))
        .collect();
    set.into_iter()
        .map(|b| bits_to_spins(b, sigma.len()))
        .collect()
}

/// Orbit representative: the element with `s_0 = +1` and the smallest packed
/// value.
fn canonical_bits(x: u64, n: usize) -> u64 {
    let s = bits_to_spins(x, n);
    labs_orbit(&s)
        .into_iter()
        .map(|o| spins_to_bits(&o))
        .filter(|b| b & 1 == 0)
        .min()
        .expect("every orbit has an element starting with +1")
}

/// Exact LABS optimum with one canonical witness per symmetry orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct LabsOptimum {
    pub n: usize,
    pub energy: u64,
    pub witnesses: Vec<Spins>,
}

impl LabsOptimum {
    /// Every optimal sequence: the witnesses expanded over their full orbits.
    pub fn ground_set(&self) -> Vec<Spins> {
        let set: BTreeSet<u64> = self
            .witnesses
            .iter()
            .flat_map(|w| labs_orbit(w))
            .map(|s| spins_to_bits(&s))
            .collect();
        set.into_iter().map(|b| bits_to_spins(b, self.n)).collect()
    }
}

/// Exhaustive LABS search over sequences with `s_0 = +1`.
pub fn labs_exact(n: usize, cap: usize) -> Result<LabsOptimum> {
    if n < 2 {
        return Err(Error::input(format!("LABS needs N >= 2, got {n}")));
    }
    if n > cap || n > 40 {
        return Err(Error::resource(format!(
            "N = {n} exceeds the exhaustive LABS cap of {cap}"
        )));
    }
    let half = 1u64 << (n - 1);
    const BLOCK: u64 = 1 << 14;
    let blocks = half.div_ceil(BLOCK);
    let per_block: Vec<(u64, Vec<u64>)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut best = u64::MAX;
            let mut hits = Vec::new();
            for y in b * BLOCK..((b + 1) * BLOCK).min(half) {
                let x = y << 1;
                let e = sidelobe_bits(x, n);
                if e < best {
                    best = e;
                    hits.clear();
                }
                if e == best {
                    hits.push(x);
                }
            }
            (best, hits)
        })
        .collect();
    let energy = per_block.iter().map(|p| p.0).min().unwrap_or(0);
    let reps: BTreeSet<u64> = per_block
        .into_iter()
        .filter(|p| p.0 == energy)
        .flat_map(|p| p.1)
        .map(|x| canonical_bits(x, n))
        .collect();
    Ok(LabsOptimum {
        n,
        energy,
        witnesses: reps.into_iter().map(|b| bits_to_spins(b, n)).collect(),
    })
}

/// Formats a sequence as a `+`/`-` string.
pub fn format_sequence(sigma: &[i8]) -> String {
    sigma
        .iter()
        .map(|&s| if s > 0 { '+' } else { '-' })
        .collect()
}

pub fn parse_sequence(s: &str) -> Option<Spins> {
    s.chars()
        .map(|c| match c {
            '+' => Some(1),
            '-' => Some(-1),
            _ => None,
        })
        .collect()
}
