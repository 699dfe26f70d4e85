//! Exact statevector engine for the entangling quadratic Ansatz
//! `A = sum_j a_j Y_j + sum_{i<j} a_ij Y_i Y_j`.
//!
//! Amplitude index layout: qubit 0 is the least-significant bit, and a set bit
//! is `|1>`, i.e. spin `-1`. All generators are Y-strings, which pairwise
//! commute, so the order in which the rotations of one update are applied does
//! not matter.

use std::collections::HashMap;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{spins_to_bits, IsingHamiltonian, Spins};
use crate::linear::{check_ground_set, InitSymbol};
use crate::schedule::ItdSchedule;
use crate::trace::{grid_line_search, pairwise_sum, RunTrace, StepRecord, TauPolicy};

pub const DEFAULT_STATEVECTOR_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amp: Vec<Complex64>,
}

impl StateVector {
    /// Tensor product of single-qubit eigenstates of `Z` and `X`.
    pub fn init_product(symbols: &[InitSymbol]) -> Result<Self> {
        Self::init_product_capped(symbols, DEFAULT_STATEVECTOR_CAP)
    }

    pub fn init_product_capped(symbols: &[InitSymbol], cap: usize) -> Result<Self> {
        let n = symbols.len();
        if n == 0 {
            return Err(Error::input("statevector needs at least one qubit"));
        }
        if n > cap {
            return Err(Error::resource(format!(
                "{n} qubits exceeds the statevector cap of {cap}"
            )));
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let local: Vec<[f64; 2]> = symbols
            .iter()
            .map(|s| match s {
                InitSymbol::Zero => [1.0, 0.0],
                InitSymbol::One => [0.0, 1.0],
                InitSymbol::Plus => [h, h],
                InitSymbol::Minus => [h, -h],
            })
            .collect();
        let amp = (0..1usize << n)
            .map(|x| {
                let a: f64 = local
                    .iter()
                    .enumerate()
                    .map(|(q, l)| l[x >> q & 1])
                    .product();
                Complex64::new(a, 0.0)
            })
            .collect();
        Ok(Self { n, amp })
    }

    pub fn from_amplitudes(n: usize, amp: Vec<Complex64>) -> Result<Self> {
        if amp.len() != 1 << n {
            return Err(Error::input(format!(
                "{} amplitudes for {n} qubits",
                amp.len()
            )));
        }
        Ok(Self { n, amp })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn norm(&self) -> f64 {
        let sq: Vec<f64> = self.amp.iter().map(|a| a.norm_sqr()).collect();
        pairwise_sum(&sq).sqrt()
    }

    pub fn renormalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amp.iter_mut().for_each(|a| *a /= n);
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amp.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::input(format!(
                "qubit {q} out of range for {} qubits",
                self.n
            )));
        }
        Ok(())
    }

    /// `exp(-i theta Y_j)`: a real rotation of each `(|..0..>, |..1..>)` pair.
    pub fn apply_y(&mut self, j: usize, theta: f64) -> Result<()> {
        self.check_qubit(j)?;
        self.rotate_y(j, theta);
        Ok(())
    }

    fn rotate_y(&mut self, j: usize, theta: f64) {
        let (s, c) = theta.sin_cos();
        let bit = 1usize << j;
        for x in 0..self.amp.len() {
            if x & bit == 0 {
                let a0 = self.amp[x];
                let a1 = self.amp[x | bit];
                self.amp[x] = a0 * c - a1 * s;
                self.amp[x | bit] = a0 * s + a1 * c;
            }
        }
    }

    /// `exp(-i theta Y_i Y_j)`. On `(|00>, |01>, |10>, |11>)` of qubits
    /// `(i, j)`, `Y_i Y_j` maps `|00> -> -|11>` and `|01> -> |10>`.
    pub fn apply_yy(&mut self, i: usize, j: usize, theta: f64) -> Result<()> {
        self.check_qubit(i)?;
        self.check_qubit(j)?;
        if i == j {
            return Err(Error::input(format!(
                "Y_iY_j rotation needs distinct qubits, got {i} twice"
            )));
        }
        self.rotate_yy(i, j, theta);
        Ok(())
    }

    fn rotate_yy(&mut self, i: usize, j: usize, theta: f64) {
        let (s, c) = theta.sin_cos();
        let is = Complex64::new(0.0, s);
        let (bi, bj) = (1usize << i, 1usize << j);
        for x in 0..self.amp.len() {
            if x & (bi | bj) == 0 {
                let x00 = x;
                let x11 = x | bi | bj;
                let x10 = x | bi;
                let x01 = x | bj;
                let (a00, a11, a10, a01) =
                    (self.amp[x00], self.amp[x11], self.amp[x10], self.amp[x01]);
                self.amp[x00] = a00 * c + is * a11;
                self.amp[x11] = a11 * c + is * a00;
                self.amp[x10] = a10 * c - is * a01;
                self.amp[x01] = a01 * c - is * a10;
            }
        }
    }

    /// `(Y_m psi)_x = i^|m| (-1)^popcount(m & !x) psi_{x ^ m}` for the
    /// Y-string with qubit mask `m`.
    fn y_string_element(&self, mask: usize, x: usize) -> Complex64 {
        let weight = mask.count_ones();
        let phase = match weight % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let sign = if (mask & !x).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        phase * sign * self.amp[x ^ mask]
    }

    /// `<psi| Y_m |psi>`.
    fn y_string_expectation(&self, mask: usize) -> Complex64 {
        if mask == 0 {
            return self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>().into();
        }
        (0..self.amp.len())
            .map(|x| self.amp[x].conj() * self.y_string_element(mask, x))
            .sum()
    }

    /// Writes the amplitudes as little-endian `f64` pairs `(re, im)`.
    pub fn write_amplitudes<W: Write>(&self, mut w: W) -> Result<()> {
        for a in &self.amp {
            w.write_all(&a.re.to_le_bytes())?;
            w.write_all(&a.im.to_le_bytes())?;
        }
        Ok(())
    }
}

/// Ordered generator list: singles `Y_0 .. Y_{N-1}`, then pairs `Y_iY_j`
/// with `i < j` in lexicographic order. Coefficient vectors use this indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct YOperatorBasis {
    n: usize,
    ops: Vec<YOp>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YOp {
    Single(usize),
    Pair(usize, usize),
}

impl YOp {
    pub fn mask(self) -> usize {
        match self {
            YOp::Single(j) => 1 << j,
            YOp::Pair(i, j) => (1 << i) | (1 << j),
        }
    }
}

impl YOperatorBasis {
    /// All `N(N+1)/2` singles and pairs.
    pub fn quadratic(n: usize) -> Self {
        let mut ops: Vec<YOp> = (0..n).map(YOp::Single).collect();
        for i in 0..n {
            for j in i + 1..n {
                ops.push(YOp::Pair(i, j));
            }
        }
        Self { n, ops }
    }

    /// Singles only; reproduces the linear Ansatz.
    pub fn linear(n: usize) -> Self {
        Self {
            n,
            ops: (0..n).map(YOp::Single).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[YOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

fn check_basis(state: &StateVector, basis: &YOperatorBasis) -> Result<()> {
    if basis.n() != state.n() {
        return Err(Error::input(format!(
            "{}-qubit operator basis with a {}-qubit state",
            basis.n(),
            state.n()
        )));
    }
    Ok(())
}

fn check_hamiltonian(h: &IsingHamiltonian, state: &StateVector) -> Result<()> {
    if h.n_qubits() != state.n() {
        return Err(Error::input(format!(
            "{}-qubit Hamiltonian with a {}-qubit state",
            h.n_qubits(),
            state.n()
        )));
    }
    Ok(())
}

/// Applies `exp(-i tau sum_J a_J Y_J)` as one rotation per generator, in the
/// given order.
pub fn apply_generator_in_order(
    state: &mut StateVector,
    basis: &YOperatorBasis,
    a: &[f64],
    tau: f64,
    order: &[usize],
) {
    for &k in order {
        let theta = tau * a[k];
        if theta == 0.0 {
            continue;
        }
        match basis.ops[k] {
            YOp::Single(j) => state.rotate_y(j, theta),
            YOp::Pair(i, j) => state.rotate_yy(i, j, theta),
        }
    }
}

pub fn apply_generator(
    state: &mut StateVector,
    basis: &YOperatorBasis,
    a: &[f64],
    tau: f64,
) -> Result<()> {
    check_basis(state, basis)?;
    if a.len() != basis.len() {
        return Err(Error::input(format!(
            "{} coefficients for {} generators",
            a.len(),
            basis.len()
        )));
    }
    let order: Vec<usize> = (0..basis.len()).collect();
    apply_generator_in_order(state, basis, a, tau, &order);
    Ok(())
}

fn expectation_with_diag(diag: &[f64], state: &StateVector) -> f64 {
    let terms: Vec<f64> = state
        .amp
        .iter()
        .zip(diag)
        .map(|(a, d)| a.norm_sqr() * d)
        .collect();
    pairwise_sum(&terms)
}

/// `<psi|H|psi>` for a diagonal `H`.
pub fn expectation_diag(h: &IsingHamiltonian, state: &StateVector) -> Result<f64> {
    check_hamiltonian(h, state)?;
    Ok(expectation_with_diag(&h.diagonal(), state))
}

fn b_with_diag(diag: &[f64], state: &StateVector, basis: &YOperatorBasis) -> Vec<f64> {
    basis
        .ops
        .iter()
        .map(|op| {
            let m = op.mask();
            let val: Complex64 = (0..state.amp.len())
                .map(|x| state.amp[x].conj() * diag[x] * state.y_string_element(m, x))
                .sum();
            -val.im
        })
        .collect()
}

/// Descent-consistent `b_J = -Im <psi| H Y_J |psi> = (i/2)<[H, Y_J]>`.
pub fn b_quad(
    h: &IsingHamiltonian,
    state: &StateVector,
    basis: &YOperatorBasis,
) -> Result<Vec<f64>> {
    check_hamiltonian(h, state)?;
    check_basis(state, basis)?;
    Ok(b_with_diag(&h.diagonal(), state, basis))
}

/// `S_IJ = <Y_I Y_J>`. Products of two basis Y-strings are the Y-string on
/// the symmetric difference of their supports, so every entry is a real
/// Y-string expectation.
pub fn s_matrix(state: &StateVector, basis: &YOperatorBasis) -> Result<DMatrix<f64>> {
    check_basis(state, basis)?;
    let l = basis.len();
    let mut cache: HashMap<usize, f64> = HashMap::new();
    let mut s = DMatrix::zeros(l, l);
    for i in 0..l {
        for j in i..l {
            let m = basis.ops[i].mask() ^ basis.ops[j].mask();
            let v = *cache
                .entry(m)
                .or_insert_with(|| state.y_string_expectation(m).re);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientMode {
    /// `a = b`.
    Identity,
    /// Minimizes `||S a - b||^2 + lambda ||a||^2`.
    Solve { lambda: f64 },
}

impl CoefficientMode {
    pub const DEFAULT_LAMBDA: f64 = 1e-8;

    pub fn name(&self) -> &'static str {
        match self {
            CoefficientMode::Identity => "identity",
            CoefficientMode::Solve { .. } => "solve",
        }
    }
}

/// Update coefficients from `S a = b`.
pub fn solve_update(s: &DMatrix<f64>, b: &[f64], mode: CoefficientMode) -> Result<Vec<f64>> {
    if b.iter().any(|x| !x.is_finite()) || s.iter().any(|x| !x.is_finite()) {
        return Err(Error::input("non-finite entries in the linear system"));
    }
    if s.nrows() != b.len() || s.ncols() != b.len() {
        return Err(Error::input("S and b dimensions differ"));
    }
    match mode {
        CoefficientMode::Identity => Ok(b.to_vec()),
        CoefficientMode::Solve { lambda } => {
            if !(lambda >= 0.0 && lambda.is_finite()) {
                return Err(Error::input(format!(
                    "Tikhonov lambda = {lambda} must be non-negative"
                )));
            }
            let bv = DVector::from_column_slice(b);
            let n = b.len();
            let normal = s.transpose() * s + DMatrix::identity(n, n) * lambda;
            let rhs = s.transpose() * &bv;
            let a = match normal.clone().cholesky() {
                Some(ch) => ch.solve(&rhs),
                None => normal
                    .svd(true, true)
                    .solve(&rhs, 1e-12)
                    .map_err(|e| Error::input(format!("least-squares solve failed: {e}")))?,
            };
            Ok(a.iter().copied().collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadOptions {
    pub n_steps: usize,
    pub schedule: ItdSchedule,
    pub tau: TauPolicy,
    pub mode: CoefficientMode,
}

impl QuadOptions {
    pub fn new(n_steps: usize) -> Self {
        Self {
            n_steps,
            schedule: ItdSchedule::None,
            tau: TauPolicy::default(),
            mode: CoefficientMode::Identity,
        }
    }

    pub fn with_schedule(mut self, schedule: ItdSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_mode(mut self, mode: CoefficientMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_tau(mut self, tau: TauPolicy) -> Self {
        self.tau = tau;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadRun {
    pub trace: RunTrace,
    pub state: StateVector,
}

/// QITE on a full statevector with generators from `basis`.
///
/// Per step: schedule the Hamiltonian, compute `b` (and `S` in solve mode),
/// solve for `a`, grid line-search `tau` on the exact post-update energy, apply
/// all rotations and renormalize. Measurements: one per generator for `b`,
/// `N` per line-search probe.
pub fn qite_quad_run(
    h: &IsingHamiltonian,
    init: &StateVector,
    basis: &YOperatorBasis,
    opts: &QuadOptions,
) -> Result<QuadRun> {
    check_hamiltonian(h, init)?;
    check_basis(init, basis)?;
    opts.tau.validate()?;
    opts.schedule.validate()?;
    let n = init.n();
    let base_diag = h.diagonal();
    let mut state = init.clone();
    let mut measurements = 0u64;
    let mut diag_cache: Option<(f64, f64, Vec<f64>)> = None;
    let mut scheduled_diag = |s: usize| -> Vec<f64> {
        // Schedules only change at multiplier boundaries; reuse the diagonal
        // while both multipliers are unchanged.
        let key = (
            opts.schedule.multiplier(s, opts.n_steps),
            beta_key(&opts.schedule, s, opts.n_steps),
        );
        if let Some((a, b, d)) = &diag_cache {
            if (*a, *b) == key {
                return d.clone();
            }
        }
        let d = opts.schedule.hamiltonian_at(h, s, opts.n_steps).diagonal();
        diag_cache = Some((key.0, key.1, d.clone()));
        d
    };
    let d0 = scheduled_diag(0);
    let mut records = vec![StepRecord {
        step: 0,
        tau: 0.0,
        energy: expectation_with_diag(&base_diag, &state),
        b_norm: 0.0,
        alpha: opts.schedule.multiplier(0, opts.n_steps),
        measurement_count: 0,
        scheduled_energy: expectation_with_diag(&d0, &state),
    }];
    let order: Vec<usize> = (0..basis.len()).collect();
    for s in 1..=opts.n_steps {
        let diag = scheduled_diag(s);
        let b = b_with_diag(&diag, &state, basis);
        measurements += basis.len() as u64;
        let a = match opts.mode {
            CoefficientMode::Identity => b.clone(),
            mode => solve_update(&s_matrix(&state, basis)?, &b, mode)?,
        };
        let e_before = expectation_with_diag(&diag, &state);
        let ls = grid_line_search(&opts.tau, e_before, |beta| {
            let mut trial = state.clone();
            apply_generator_in_order(&mut trial, basis, &a, beta, &order);
            expectation_with_diag(&diag, &trial)
        });
        measurements += (n * ls.probes) as u64;
        apply_generator_in_order(&mut state, basis, &a, ls.tau, &order);
        state.renormalize();
        records.push(StepRecord {
            step: s,
            tau: ls.tau,
            energy: expectation_with_diag(&base_diag, &state),
            b_norm: b.iter().map(|x| x * x).sum::<f64>().sqrt(),
            alpha: opts.schedule.multiplier(s, opts.n_steps),
            measurement_count: measurements,
            scheduled_energy: expectation_with_diag(&diag, &state),
        });
    }
    Ok(QuadRun {
        trace: RunTrace { records },
        state,
    })
}

fn beta_key(sched: &ItdSchedule, s: usize, n_steps: usize) -> f64 {
    match sched {
        ItdSchedule::Labs { b, .. } => crate::schedule::stepped(*b, s, n_steps),
        _ => 1.0,
    }
}

/// `sum_{sigma in ground_set} |<sigma|psi>|^2`.
pub fn p_gs_statevector(state: &StateVector, ground_set: &[Spins]) -> Result<f64> {
    check_ground_set(ground_set, state.n())?;
    Ok(ground_set
        .iter()
        .map(|g| state.amp[spins_to_bits(g) as usize].norm_sqr())
        .sum())
}
