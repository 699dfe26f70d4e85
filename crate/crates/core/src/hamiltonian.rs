//! Diagonal Z-string Hamiltonians.
//!
//! Spin convention, used throughout the crate: bit value 0 of a qubit is spin
//! `+1` and the `+1` eigenvalue of `Z`; bit value 1 is spin `-1`. When a spin
//! vector is packed into an integer, qubit `q` is bit `q`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Coefficients smaller than this in magnitude are dropped on canonicalization.
pub const DROP_TOLERANCE: f64 = 1e-15;

/// Absolute tolerance for treating two energies as a degenerate ground state.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Default qubit cap for exhaustive search.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 24;

/// A spin vector; every entry is `+1` or `-1`.
pub type Spins = Vec<i8>;

/// One term `coeff * Z_{q1} ... Z_{qm}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZTerm {
    support: Vec<usize>,
    coeff: f64,
}

impl ZTerm {
    /// Builds a term, sorting the support. Repeated qubits are rejected.
    pub fn new(mut support: Vec<usize>, coeff: f64) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::input("term support must be non-empty"));
        }
        if !coeff.is_finite() {
            return Err(Error::input(format!("non-finite coefficient {coeff}")));
        }
        support.sort_unstable();
        if support.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input(format!(
                "repeated qubit in support {support:?}"
            )));
        }
        Ok(Self { support, coeff })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    /// Bitmask of the support (qubit `q` is bit `q`). Only valid for `n <= 64`.
    pub fn mask(&self) -> u64 {
        self.support.iter().fold(0u64, |m, &q| m | (1u64 << q))
    }
}

/// A Hamiltonian `offset + sum_t c_t prod_{q in t} Z_q` in canonical form.
///
/// Terms are sorted lexicographically by support and supports are distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingHamiltonian {
    n_qubits: usize,
    terms: Vec<ZTerm>,
    offset: f64,
    /// For each qubit, indices into `terms` of the terms that act on it.
    by_qubit: Vec<Vec<usize>>,
}

impl IsingHamiltonian {
    /// Canonicalizes `terms`: repeated supports are merged by adding their
    /// coefficients and terms with `|coeff| < 1e-15` are dropped.
    pub fn new(n_qubits: usize, terms: Vec<ZTerm>, offset: f64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::input("Hamiltonian needs at least one qubit"));
        }
        if !offset.is_finite() {
            return Err(Error::input("non-finite offset"));
        }
        let mut merged: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for t in terms {
            if let Some(&q) = t.support.last() {
                if q >= n_qubits {
                    return Err(Error::input(format!(
                        "qubit {q} out of range for {n_qubits} qubits"
                    )));
                }
            }
            *merged.entry(t.support).or_insert(0.0) += t.coeff;
        }
        let terms: Vec<ZTerm> = merged
            .into_iter()
            .filter(|(_, c)| c.abs() >= DROP_TOLERANCE)
            .map(|(support, coeff)| ZTerm { support, coeff })
            .collect();
        Ok(Self::from_canonical(n_qubits, terms, offset))
    }

    fn from_canonical(n_qubits: usize, terms: Vec<ZTerm>, offset: f64) -> Self {
        let mut by_qubit = vec![Vec::new(); n_qubits];
        for (i, t) in terms.iter().enumerate() {
            for &q in &t.support {
                by_qubit[q].push(i);
            }
        }
        Self {
            n_qubits,
            terms,
            offset,
            by_qubit,
        }
    }

    /// Convenience constructor from `(support, coeff)` pairs.
    pub fn from_pairs<I, S>(n_qubits: usize, pairs: I, offset: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<Vec<usize>>,
    {
        let terms = pairs
            .into_iter()
            .map(|(s, c)| ZTerm::new(s.into(), c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_qubits, terms, offset)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[ZTerm] {
        &self.terms
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Indices into [`terms`](Self::terms) of the terms containing `qubit`.
    pub fn terms_on(&self, qubit: usize) -> &[usize] {
        &self.by_qubit[qubit]
    }

    /// Returns a copy with every coefficient replaced by `f(index, term)`.
    /// Zeroed terms are kept so the term layout stays stable across steps.
    pub fn map_coeffs(&self, mut f: impl FnMut(usize, &ZTerm) -> f64) -> Self {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| ZTerm {
                support: t.support.clone(),
                coeff: f(i, t),
            })
            .collect();
        Self::from_canonical(self.n_qubits, terms, self.offset)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_qubits {
            return Err(Error::input(format!(
                "vector of length {len} for a {}-qubit Hamiltonian",
                self.n_qubits
            )));
        }
        Ok(())
    }

    pub fn evaluate(&self, sigma: &[i8]) -> Result<f64> {
        self.check_len(sigma.len())?;
        Ok(self.offset
            + self
                .terms
                .iter()
                .map(|t| {
                    let sign: i8 = t.support.iter().map(|&q| sigma[q]).product();
                    t.coeff * f64::from(sign)
                })
                .sum::<f64>())
    }

    /// Exact expectation in a product state with single-qubit `<Z_q> = z[q]`.
    pub fn expectation_product(&self, z: &[f64]) -> Result<f64> {
        self.check_len(z.len())?;
        Ok(self.expectation_product_unchecked(z))
    }

    pub(crate) fn expectation_product_unchecked(&self, z: &[f64]) -> f64 {
        self.offset
            + self
                .terms
                .iter()
                .map(|t| t.coeff * t.support.iter().map(|&q| z[q]).product::<f64>())
                .sum::<f64>()
    }

    /// Energy of the packed basis state `bits` (bit `q` set means spin `-1`).
    pub fn evaluate_bits(&self, bits: u64) -> f64 {
        self.offset
            + self
                .terms
                .iter()
                .map(|t| {
                    if (bits & t.mask()).count_ones() % 2 == 0 {
                        t.coeff
                    } else {
                        -t.coeff
                    }
                })
                .sum::<f64>()
    }

    /// All `2^n` diagonal entries, indexed by packed basis state.
    pub fn diagonal(&self) -> Vec<f64> {
        assert!(self.n_qubits < 64);
        let masks: Vec<(u64, f64)> = self.terms.iter().map(|t| (t.mask(), t.coeff)).collect();
        (0..1u64 << self.n_qubits)
            .into_par_iter()
            .map(|x| {
                self.offset
                    + masks
                        .iter()
                        .map(|&(m, c)| if (x & m).count_ones() % 2 == 0 { c } else { -c })
                        .sum::<f64>()
            })
            .collect()
    }

    /// True when every term has even support, i.e. the energy is invariant
    /// under a global spin flip.
    pub fn is_flip_symmetric(&self) -> bool {
        self.terms.iter().all(|t| t.support.len() % 2 == 0)
    }

    /// Parses the text format: one `coeff q1 q2 ...` term per line, `#`
    /// comments, `offset <value>`, and an optional `qubits <n>` line. Without
    /// `qubits`, the qubit count is one more than the largest index used.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut terms = Vec::new();
        let mut offset = 0.0;
        let mut n_declared = None;
        let mut max_q = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = lineno + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let head = fields.next().unwrap_or_default();
            match head {
                "offset" => {
                    offset = parse_field::<f64>(fields.next(), path, lineno, "offset value")?;
                }
                "qubits" => {
                    n_declared = Some(parse_field::<usize>(
                        fields.next(),
                        path,
                        lineno,
                        "qubit count",
                    )?);
                }
                _ => {
                    let coeff = parse_field::<f64>(Some(head), path, lineno, "coefficient")?;
                    let support = fields
                        .map(|f| parse_field::<usize>(Some(f), path, lineno, "qubit index"))
                        .collect::<Result<Vec<_>>>()?;
                    if let Some(&m) = support.iter().max() {
                        max_q = Some(max_q.map_or(m, |x: usize| x.max(m)));
                    }
                    let term = ZTerm::new(support, coeff)
                        .map_err(|e| Error::parse(path, lineno, e.to_string()))?;
                    terms.push(term);
                }
            }
        }
        let n = match (n_declared, max_q) {
            (Some(n), Some(m)) if m >= n => {
                return Err(Error::input(format!(
                    "qubit {m} out of range for declared {n} qubits"
                )))
            }
            (Some(n), _) => n,
            (None, Some(m)) => m + 1,
            (None, None) => {
                return Err(Error::input(
                    "Hamiltonian file has no terms and no qubit count",
                ))
            }
        };
        Self::new(n, terms, offset)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "qubits {}", self.n_qubits);
        if self.offset != 0.0 {
            let _ = writeln!(out, "offset {}", self.offset);
        }
        for t in &self.terms {
            let _ = write!(out, "{}", t.coeff);
            for q in &t.support {
                let _ = write!(out, " {q}");
            }
            out.push('\n');
        }
        out
    }
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    path: &Path,
    line: usize,
    what: &str,
) -> Result<T> {
    let f = field.ok_or_else(|| Error::parse(path, line, format!("missing {what}")))?;
    f.parse()
        .map_err(|_| Error::parse(path, line, format!("bad {what} `{f}`")))
}

/// Unpacks `bits` into a spin vector of length `n`.
pub fn bits_to_spins(bits: u64, n: usize) -> Spins {
    (0..n)
        .map(|q| if bits >> q & 1 == 0 { 1 } else { -1 })
        .collect()
}

/// Packs a spin vector into an integer (spin `-1` sets the bit).
pub fn spins_to_bits(sigma: &[i8]) -> u64 {
    sigma
        .iter()
        .enumerate()
        .fold(0, |b, (q, &s)| if s < 0 { b | 1 << q } else { b })
}

/// Exact ground energy and every minimizer within [`TIE_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub energy: f64,
    pub ground_set: Vec<Spins>,
}

/// Exhaustive minimization over all `2^n` spin vectors.
///
/// The search is split into fixed-size blocks evaluated in parallel; the
/// result is independent of the split. The ground set is ordered by packed
/// basis index.
pub fn brute_force_ground(h: &IsingHamiltonian, cap: usize) -> Result<GroundTruth> {
    let n = h.n_qubits();
    if n > cap || n >= 63 {
        return Err(Error::resource(format!(
            "{n} qubits exceeds the exhaustive-search cap of {cap}"
        )));
    }
    let masks: Vec<(u64, f64)> = h.terms().iter().map(|t| (t.mask(), t.coeff)).collect();
    let energy_of = |x: u64| -> f64 {
        h.offset()
            + masks
                .iter()
                .map(|&(m, c)| if (x & m).count_ones() % 2 == 0 { c } else { -c })
                .sum::<f64>()
    };
    const BLOCK: u64 = 1 << 12;
    let total = 1u64 << n;
    let n_blocks = total.div_ceil(BLOCK);
    let per_block: Vec<(f64, Vec<(u64, f64)>)> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(total);
            let mut best = f64::INFINITY;
            let mut cands: Vec<(u64, f64)> = Vec::new();
            for x in lo..hi {
                let e = energy_of(x);
                if e < best - TIE_TOLERANCE {
                    best = e;
                    cands.retain(|&(_, ce)| ce <= best + TIE_TOLERANCE);
                }
                if e <= best + TIE_TOLERANCE {
                    best = best.min(e);
                    cands.push((x, e));
                }
            }
            (best, cands)
        })
        .collect();
    let energy = per_block
        .iter()
        .map(|(b, _)| *b)
        .fold(f64::INFINITY, f64::min);
    let ground_set = per_block
        .into_iter()
        .flat_map(|(_, c)| c)
        .filter(|&(_, e)| e <= energy + TIE_TOLERANCE)
        .map(|(x, _)| bits_to_spins(x, n))
        .collect();
    Ok(GroundTruth { energy, ground_set })
}
