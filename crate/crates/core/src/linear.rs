//! QITE with the separable linear Ansatz `A = sum_j a_j Y_j`.
//!
//! A product state on the X-Z great circle stays on it under `Y` rotations,
//! so the whole evolution is tracked exactly by one Bloch angle per qubit:
//! qubit `j` is `cos(phi_j / 2)|0> + sin(phi_j / 2)|1>`, with `<Z_j> = cos phi_j`
//! and `<X_j> = sin phi_j`. The rotation `exp(-i tau a_j Y_j)` advances
//! `phi_j` by `2 tau a_j`.
//!
//! For these states `<Y_i Y_j> = delta_ij`, so the update coefficients equal
//! the commutator vector `b` and no linear solve is needed.

use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{IsingHamiltonian, Spins};
use crate::rng::SplitMix64;
use crate::schedule::ItdSchedule;
use crate::trace::{grid_line_search, LineSearch, RunTrace, StepRecord, TauPolicy};

/// Single-qubit initial states: the eigenstates of `Z` and `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InitSymbol {
    Zero,
    One,
    Plus,
    Minus,
}

impl InitSymbol {
    pub const ALL: [InitSymbol; 4] = [
        InitSymbol::Zero,
        InitSymbol::One,
        InitSymbol::Plus,
        InitSymbol::Minus,
    ];
    /// Alphabet for LABS initial states.
    pub const ZERO_PLUS: [InitSymbol; 2] = [InitSymbol::Zero, InitSymbol::Plus];

    pub fn angle(self) -> f64 {
        match self {
            InitSymbol::Zero => 0.0,
            InitSymbol::One => PI,
            InitSymbol::Plus => FRAC_PI_2,
            InitSymbol::Minus => -FRAC_PI_2,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            InitSymbol::Zero => '0',
            InitSymbol::One => '1',
            InitSymbol::Plus => '+',
            InitSymbol::Minus => '-',
        }
    }

    /// Draws `n` symbols i.i.d. uniform over `alphabet`.
    pub fn random(n: usize, alphabet: &[InitSymbol], rng: &mut SplitMix64) -> Vec<InitSymbol> {
        (0..n)
            .map(|_| alphabet[rng.below(alphabet.len())])
            .collect()
    }
}

/// Symbols as a compact string such as `0+-1`.
pub struct SymbolString<'a>(pub &'a [InitSymbol]);

impl fmt::Display for SymbolString<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

pub fn parse_symbols(s: &str) -> Result<Vec<InitSymbol>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(InitSymbol::Zero),
            '1' => Ok(InitSymbol::One),
            '+' => Ok(InitSymbol::Plus),
            '-' => Ok(InitSymbol::Minus),
            other => Err(Error::input(format!(
                "unknown initial-state symbol `{other}`"
            ))),
        })
        .collect()
}

/// A product state on the X-Z great circle, one Bloch angle per qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    pub phi: Vec<f64>,
}

impl ProductState {
    pub fn new(phi: Vec<f64>) -> Self {
        Self { phi }
    }

    pub fn from_symbols(symbols: &[InitSymbol]) -> Self {
        Self::new(symbols.iter().map(|s| s.angle()).collect())
    }

    pub fn n(&self) -> usize {
        self.phi.len()
    }

    /// Single-qubit `<Z_j> = cos phi_j`.
    pub fn z(&self) -> Vec<f64> {
        self.phi.iter().map(|&p| bloch_sin_cos(p).1).collect()
    }

    /// Probability of measuring spin `+1` (bit 0) on each qubit.
    pub fn p_up(&self) -> Vec<f64> {
        self.z().into_iter().map(|z| (1.0 + z) / 2.0).collect()
    }

    pub fn energy(&self, h: &IsingHamiltonian) -> Result<f64> {
        h.expectation_product(&self.z())
    }
}

/// `(sin phi, cos phi)`, exact at integer multiples of `pi/2` so that basis
/// states and `|+>`/`|->` stay exact fixed points and saddles.
pub fn bloch_sin_cos(phi: f64) -> (f64, f64) {
    let r = phi / FRAC_PI_2;
    if r == r.round() && r.abs() < 1e15 {
        return match (r as i64).rem_euclid(4) {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        };
    }
    phi.sin_cos()
}

fn check_dims(h: &IsingHamiltonian, n: usize) -> Result<()> {
    if h.n_qubits() != n {
        return Err(Error::input(format!(
            "{}-qubit Hamiltonian with a {n}-qubit state",
            h.n_qubits()
        )));
    }
    Ok(())
}

/// Descent-consistent commutator coefficients
/// `b_j = (i/2)<[H, Y_j]> = -d<H>/d phi_j
///      = sin(phi_j) sum_{t containing j} c_t prod_{q in t, q != j} cos(phi_q)`.
pub fn b_vector(h: &IsingHamiltonian, s: &ProductState) -> Result<Vec<f64>> {
    check_dims(h, s.n())?;
    let cos = s.z();
    Ok(b_from_cos(h, s, &cos))
}

fn b_from_cos(h: &IsingHamiltonian, s: &ProductState, cos: &[f64]) -> Vec<f64> {
    (0..s.n())
        .map(|j| {
            let sin = bloch_sin_cos(s.phi[j]).0;
            if sin == 0.0 {
                return 0.0;
            }
            let field: f64 = h
                .terms_on(j)
                .iter()
                .map(|&ti| {
                    let t = &h.terms()[ti];
                    t.coeff()
                        * t.support()
                            .iter()
                            .filter(|&&q| q != j)
                            .map(|&q| cos[q])
                            .product::<f64>()
                })
                .sum();
            sin * field
        })
        .collect()
}

/// `phi_j += 2 tau a_j`.
pub fn apply_update(s: &mut ProductState, a: &[f64], tau: f64) -> Result<()> {
    if a.len() != s.n() {
        return Err(Error::input(format!(
            "{} coefficients for a {}-qubit state",
            a.len(),
            s.n()
        )));
    }
    for (p, &aj) in s.phi.iter_mut().zip(a) {
        *p += 2.0 * tau * aj;
    }
    Ok(())
}

fn trial_energy(h: &IsingHamiltonian, s: &ProductState, b: &[f64], beta: f64) -> f64 {
    let z: Vec<f64> = s
        .phi
        .iter()
        .zip(b)
        .map(|(p, bj)| bloch_sin_cos(p + 2.0 * beta * bj).1)
        .collect();
    h.expectation_product_unchecked(&z)
}

/// Grid line search for the step `tau` along `b`. Each probe is one energy
/// estimate; [`qite_run`] charges `N` measurements per probe.
pub fn line_search_tau(
    h: &IsingHamiltonian,
    s: &ProductState,
    b: &[f64],
    policy: &TauPolicy,
) -> Result<LineSearch> {
    check_dims(h, s.n())?;
    policy.validate()?;
    if b.len() != s.n() {
        return Err(Error::input("coefficient vector length mismatch"));
    }
    let e0 = h.expectation_product_unchecked(&s.z());
    Ok(grid_line_search(policy, e0, |beta| {
        trial_energy(h, s, b, beta)
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct QiteOptions {
    pub n_steps: usize,
    pub schedule: ItdSchedule,
    pub tau: TauPolicy,
}

impl QiteOptions {
    pub fn new(n_steps: usize) -> Self {
        Self {
            n_steps,
            schedule: ItdSchedule::None,
            tau: TauPolicy::default(),
        }
    }

    pub fn with_schedule(mut self, schedule: ItdSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_tau(mut self, tau: TauPolicy) -> Self {
        self.tau = tau;
        self
    }
}

/// Result of a linear-Ansatz run.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRun {
    pub trace: RunTrace,
    pub initial: ProductState,
    pub state: ProductState,
    /// Accumulated generator coefficients `sum_s tau_s a_j[s]`; the final state
    /// is `exp(-i sum_j generator_j Y_j)` applied to the initial one.
    pub generator: Vec<f64>,
}

/// Runs `n_steps` QITE updates from `init`.
///
/// Step `s` (1-based) uses the scheduled Hamiltonian `H[s]` for the
/// coefficients and the line search. Trace energies are always reported
/// against the unscheduled `h`. Measurements: `N` per coefficient vector plus
/// `N` per line-search probe.
pub fn qite_run(
    h: &IsingHamiltonian,
    init: &ProductState,
    opts: &QiteOptions,
) -> Result<LinearRun> {
    check_dims(h, init.n())?;
    opts.tau.validate()?;
    opts.schedule.validate()?;
    let n = init.n();
    let mut state = init.clone();
    let mut generator = vec![0.0; n];
    let mut measurements = 0u64;
    let e0 = h.expectation_product_unchecked(&state.z());
    let mut records = vec![StepRecord {
        step: 0,
        tau: 0.0,
        energy: e0,
        b_norm: 0.0,
        alpha: opts.schedule.multiplier(0, opts.n_steps),
        measurement_count: 0,
        scheduled_energy: opts
            .schedule
            .hamiltonian_at(h, 0, opts.n_steps)
            .expectation_product_unchecked(&state.z()),
    }];
    for s in 1..=opts.n_steps {
        let hs = opts.schedule.hamiltonian_at(h, s, opts.n_steps);
        let cos = state.z();
        let b = b_from_cos(&hs, &state, &cos);
        measurements += n as u64;
        let e_before = hs.expectation_product_unchecked(&cos);
        let ls = grid_line_search(&opts.tau, e_before, |beta| {
            trial_energy(&hs, &state, &b, beta)
        });
        measurements += (n * ls.probes) as u64;
        apply_update(&mut state, &b, ls.tau)?;
        for (g, bj) in generator.iter_mut().zip(&b) {
            *g += ls.tau * bj;
        }
        let z = state.z();
        records.push(StepRecord {
            step: s,
            tau: ls.tau,
            energy: h.expectation_product_unchecked(&z),
            b_norm: b.iter().map(|x| x * x).sum::<f64>().sqrt(),
            alpha: opts.schedule.multiplier(s, opts.n_steps),
            measurement_count: measurements,
            scheduled_energy: hs.expectation_product_unchecked(&z),
        });
    }
    Ok(LinearRun {
        trace: RunTrace { records },
        initial: init.clone(),
        state,
        generator,
    })
}

/// Validates a ground set: equal lengths, spins in `{+1, -1}`, no duplicates.
pub(crate) fn check_ground_set(ground_set: &[Spins], n: usize) -> Result<()> {
    if ground_set.is_empty() {
        return Err(Error::input("empty ground set"));
    }
    let mut seen = HashSet::new();
    for g in ground_set {
        if g.len() != n {
            return Err(Error::input(format!(
                "ground-set entry of length {} for {n} qubits",
                g.len()
            )));
        }
        if g.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::input("ground-set entries must be +1/-1"));
        }
        if !seen.insert(g) {
            return Err(Error::input("duplicate ground-set entry"));
        }
    }
    Ok(())
}

/// Probability mass of the product state on `ground_set`.
pub fn p_gs(s: &ProductState, ground_set: &[Spins]) -> Result<f64> {
    check_ground_set(ground_set, s.n())?;
    let up = s.p_up();
    Ok(ground_set
        .iter()
        .map(|g| {
            g.iter()
                .zip(&up)
                .map(|(&sj, &p)| if sj > 0 { p } else { 1.0 - p })
                .product::<f64>()
        })
        .sum())
}

/// Independent per-qubit measurements in the computational basis.
pub fn sample(s: &ProductState, n_samples: usize, seed: u64) -> Vec<Spins> {
    let up = s.p_up();
    let mut rng = SplitMix64::new(seed);
    (0..n_samples)
        .map(|_| {
            up.iter()
                .map(|&p| if rng.bernoulli(p) { 1 } else { -1 })
                .collect()
        })
        .collect()
}

/// `sign(cos phi_j)`, with `|cos phi_j| < 1e-12` rounded to `+1`.
pub fn round_state(s: &ProductState) -> Spins {
    s.phi
        .iter()
        .map(|p| {
            let c = bloch_sin_cos(*p).1;
            if c.abs() < 1e-12 || c > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// Best energy among `n_samples` measurements; ties keep the earliest sample.
pub fn best_sample(
    h: &IsingHamiltonian,
    s: &ProductState,
    n_samples: usize,
    seed: u64,
) -> Result<Option<(Spins, f64)>> {
    check_dims(h, s.n())?;
    let mut best: Option<(Spins, f64)> = None;
    for x in sample(s, n_samples, seed) {
        let e = h.evaluate(&x)?;
        if best.as_ref().is_none_or(|(_, be)| e < *be) {
            best = Some((x, e));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{bits_to_spins, brute_force_ground};
    use crate::schedule::Ramp;
    use proptest::prelude::*;

    fn z0() -> IsingHamiltonian {
        IsingHamiltonian::from_pairs(1, [(vec![0], 1.0)], 0.0).unwrap()
    }

    fn triangle() -> IsingHamiltonian {
        IsingHamiltonian::from_pairs(
            3,
            [(vec![0, 1], 1.0), (vec![1, 2], 1.0), (vec![0, 2], 1.0)],
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn symbol_angles() {
        let s = ProductState::from_symbols(&parse_symbols("01+-").unwrap());
        assert_eq!(s.phi, vec![0.0, PI, FRAC_PI_2, -FRAC_PI_2]);
        assert!(parse_symbols("0x").is_err());
        assert_eq!(
            SymbolString(&parse_symbols("+-10").unwrap()).to_string(),
            "+-10"
        );
    }

    #[test]
    fn b_vector_examples() {
        let b = b_vector(&z0(), &ProductState::new(vec![FRAC_PI_2])).unwrap();
        assert!((b[0] - 1.0).abs() < 1e-15);

        let frozen = ProductState::new(vec![0.0, PI, 0.0]);
        assert_eq!(b_vector(&triangle(), &frozen).unwrap(), vec![0.0; 3]);

        // <H> = cos(phi0) cos(phi1); at (pi/2, 0) the descent direction is +1
        // on qubit 0, and qubit 1 sits at a Z eigenstate.
        let zz = IsingHamiltonian::from_pairs(2, [(vec![0, 1], 1.0)], 0.0).unwrap();
        let s = ProductState::new(vec![FRAC_PI_2, 0.0]);
        let b = b_vector(&zz, &s).unwrap();
        let h = 1e-6;
        let e = |p0: f64| p0.cos() * 0.0f64.cos();
        let fd = -(e(FRAC_PI_2 + h) - e(FRAC_PI_2 - h)) / (2.0 * h);
        assert!((b[0] - fd).abs() < 1e-9);
        assert!((b[0] - 1.0).abs() < 1e-12);
        assert_eq!(b[1], 0.0);

        assert!(b_vector(&zz, &ProductState::new(vec![0.0])).is_err());
    }

    #[test]
    fn update_examples() {
        let mut s = ProductState::new(vec![0.0]);
        apply_update(&mut s, &[1.0], PI / 4.0).unwrap();
        assert!((s.phi[0] - FRAC_PI_2).abs() < 1e-15);

        let mut s = ProductState::new(vec![0.3, 1.1]);
        apply_update(&mut s, &[0.0, 0.0], 0.7).unwrap();
        assert_eq!(s.phi, vec![0.3, 1.1]);

        let mut a = ProductState::new(vec![0.3, 1.1]);
        let mut b = a.clone();
        apply_update(&mut a, &[0.2, -0.5], 0.1).unwrap();
        apply_update(&mut a, &[0.4, 0.25], 0.1).unwrap();
        apply_update(&mut b, &[0.6, -0.25], 0.1).unwrap();
        for (x, y) in a.phi.iter().zip(&b.phi) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn line_search_examples() {
        let s = ProductState::new(vec![FRAC_PI_2]);
        let policy = TauPolicy {
            delta_beta: PI / 8.0,
            beta_max: PI,
        };
        let ls = line_search_tau(&z0(), &s, &[1.0], &policy).unwrap();
        assert!((ls.tau - PI / 4.0).abs() < 1e-12);
        assert!((s.phi[0] + 2.0 * ls.tau - PI).abs() < 1e-12);

        let ls = line_search_tau(&z0(), &s, &[0.0], &TauPolicy::default()).unwrap();
        assert_eq!(ls.tau, 0.0);

        let wide = TauPolicy {
            delta_beta: 2.0,
            beta_max: 1.0,
        };
        let ls = line_search_tau(&z0(), &s, &[1.0], &wide).unwrap();
        assert!(ls.tau == 0.0 || ls.tau == 2.0);
        assert_eq!(ls.probes, 1);
    }

    #[test]
    fn single_qubit_descends_to_ground() {
        let run = qite_run(
            &z0(),
            &ProductState::from_symbols(&[InitSymbol::Plus]),
            &QiteOptions::new(50),
        )
        .unwrap();
        assert!(run.trace.final_energy() < -0.999);
        assert_eq!(run.trace.records.len(), 51);
    }

    #[test]
    fn plus_state_is_a_saddle_for_maxcut() {
        let init = ProductState::from_symbols(&[InitSymbol::Plus; 3]);
        let run = qite_run(&triangle(), &init, &QiteOptions::new(10)).unwrap();
        assert_eq!(run.state, init);
        assert!(run
            .trace
            .records
            .iter()
            .skip(1)
            .all(|r| r.b_norm == 0.0 && r.tau == 0.0));
    }

    #[test]
    fn basis_state_is_frozen() {
        let init = ProductState::from_symbols(&[InitSymbol::Zero; 3]);
        let run = qite_run(&triangle(), &init, &QiteOptions::new(10)).unwrap();
        let e = run.trace.energies();
        assert!(e.iter().all(|&x| x == e[0]));
    }

    #[test]
    fn measurement_accounting() {
        let run = qite_run(
            &z0(),
            &ProductState::new(vec![FRAC_PI_2]),
            &QiteOptions::new(1),
        )
        .unwrap();
        let ls = line_search_tau(
            &z0(),
            &ProductState::new(vec![FRAC_PI_2]),
            &[1.0],
            &TauPolicy::default(),
        )
        .unwrap();
        assert_eq!(run.trace.measurement_count(), 1 + ls.probes as u64);
    }

    #[test]
    fn generator_reproduces_final_state() {
        let h = triangle();
        let init = ProductState::new(vec![0.4, 2.0, -1.0]);
        let opts = QiteOptions::new(30).with_schedule(ItdSchedule::EdgeRamp {
            edges: vec![(0, 1)],
            ramp: Ramp::Linear,
        });
        let run = qite_run(&h, &init, &opts).unwrap();
        let mut replay = init.clone();
        apply_update(&mut replay, &run.generator, 1.0).unwrap();
        for (a, b) in replay.phi.iter().zip(&run.state.phi) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn p_gs_examples() {
        let s = ProductState::new(vec![PI; 3]);
        assert!((p_gs(&s, &[vec![-1, -1, -1]]).unwrap() - 1.0).abs() < 1e-15);
        let s = ProductState::new(vec![FRAC_PI_2; 2]);
        assert!((p_gs(&s, &[vec![1, 1]]).unwrap() - 0.25).abs() < 1e-15);
        let gs = brute_force_ground(&triangle(), 24).unwrap().ground_set;
        let s = ProductState::new(vec![FRAC_PI_2; 3]);
        assert!((p_gs(&s, &gs).unwrap() - 0.75).abs() < 1e-15);
        assert!(p_gs(&s, &[vec![1, 1, 1], vec![1, 1, 1]]).is_err());
    }

    #[test]
    fn sampling() {
        let up = ProductState::new(vec![0.0; 5]);
        assert!(sample(&up, 100, 1)
            .iter()
            .all(|x| x.iter().all(|&s| s == 1)));
        let s = ProductState::new(vec![0.3, 1.9, -0.7]);
        assert_eq!(sample(&s, 50, 9), sample(&s, 50, 9));
        let uniform = ProductState::new(vec![FRAC_PI_2; 4]);
        let n = 10_000;
        let xs = sample(&uniform, n, 5);
        for q in 0..4 {
            let mean = xs.iter().map(|x| f64::from(x[q])).sum::<f64>() / n as f64;
            // 4 sigma of a mean of n fair +-1 draws.
            assert!(mean.abs() < 4.0 / (n as f64).sqrt());
        }
    }

    #[test]
    fn rounding() {
        assert_eq!(round_state(&ProductState::new(vec![0.1, 3.0])), vec![1, -1]);
        assert_eq!(round_state(&ProductState::new(vec![FRAC_PI_2])), vec![1]);
    }

    #[test]
    fn converged_triangle_rounds_into_ground_set() {
        let h = triangle();
        let gs = brute_force_ground(&h, 24).unwrap().ground_set;
        let init =
            ProductState::from_symbols(&[InitSymbol::Zero, InitSymbol::Plus, InitSymbol::Minus]);
        let run = qite_run(&h, &init, &QiteOptions::new(25)).unwrap();
        assert!(gs.contains(&round_state(&run.state)));
        assert!(p_gs(&run.state, &gs).unwrap() > 0.99);
    }

    fn arb_case() -> impl Strategy<Value = (IsingHamiltonian, ProductState)> {
        (1usize..7)
            .prop_flat_map(|n| {
                let term = (
                    proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=n.min(4)),
                    -2.0..2.0f64,
                );
                (
                    Just(n),
                    proptest::collection::vec(term, 1..12),
                    proptest::collection::vec(-PI..PI, n),
                )
            })
            .prop_map(|(n, pairs, phi)| {
                (
                    IsingHamiltonian::from_pairs(n, pairs, 0.0).unwrap(),
                    ProductState::new(phi),
                )
            })
    }

    proptest! {
        #[test]
        fn gradient_matches_finite_differences((h, s) in arb_case()) {
            let b = b_vector(&h, &s).unwrap();
            let step = 1e-5;
            for j in 0..s.n() {
                let mut plus = s.clone();
                plus.phi[j] += step;
                let mut minus = s.clone();
                minus.phi[j] -= step;
                let fd = -(plus.energy(&h).unwrap() - minus.energy(&h).unwrap()) / (2.0 * step);
                prop_assert!((b[j] - fd).abs() < 1e-6, "j={} b={} fd={}", j, b[j], fd);
            }
        }

        #[test]
        fn unscheduled_runs_never_ascend((h, s) in arb_case()) {
            let run = qite_run(&h, &s, &QiteOptions::new(15)).unwrap();
            for w in run.trace.records.windows(2) {
                prop_assert!(w[1].energy <= w[0].energy + 1e-9);
            }
        }

        #[test]
        fn product_expectation_is_probability_weighted((h, s) in arb_case()) {
            // Independent route: sum over all basis states with product probabilities.
            let n = s.n();
            let up = s.p_up();
            let direct: f64 = (0..1u64 << n)
                .map(|x| {
                    let sigma = bits_to_spins(x, n);
                    let p: f64 = sigma.iter().zip(&up).map(|(&sj, &pu)| if sj > 0 { pu } else { 1.0 - pu }).product();
                    p * h.evaluate(&sigma).unwrap()
                })
                .sum();
            prop_assert!((direct - s.energy(&h).unwrap()).abs() < 1e-10);
        }
    }
}
