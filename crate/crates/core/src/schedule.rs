//! Imaginary-time-dependent (ITD) coefficient schedules.
//!
//! A schedule rescales some Hamiltonian coefficients as a function of the step
//! index `s` in `0..=n_steps`. Every multiplier lies in `[0, 1]` and equals 1
//! at `s = n_steps`, so the last update always sees the true objective.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::IsingHamiltonian;
use crate::problems::labs_quartic_lags;

/// Step-to-multiplier ramp for ITD edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ramp {
    /// `s / n_steps`.
    Linear,
    /// `a * floor(s / a) / n_steps`, clamped to 1 at the last step.
    Stepped { a: usize },
}

impl Ramp {
    pub fn value(self, s: usize, n_steps: usize) -> f64 {
        match self {
            Ramp::Linear => stepped(1, s, n_steps),
            Ramp::Stepped { a } => stepped(a, s, n_steps),
        }
    }
}

/// `a * floor(s / a) / n_steps`, exactly 1 at `s >= n_steps`.
pub fn stepped(a: usize, s: usize, n_steps: usize) -> f64 {
    if n_steps == 0 || s >= n_steps {
        return 1.0;
    }
    let a = a.max(1);
    ((a * (s / a)) as f64 / n_steps as f64).min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ItdSchedule {
    None,
    /// The listed edges (as `(u, v)` supports) are ramped from 0 to full weight.
    EdgeRamp {
        edges: Vec<(usize, usize)>,
        ramp: Ramp,
    },
    /// Quartic terms scaled by `alpha[s]`, long-range quartic terms
    /// (`max(t, k, t+k, |t-k|) > r_max`) additionally by `beta[s]`.
    Labs {
        a: usize,
        b: usize,
        r_max: usize,
    },
}

impl ItdSchedule {
    pub fn validate(&self) -> Result<()> {
        match self {
            ItdSchedule::EdgeRamp {
                ramp: Ramp::Stepped { a: 0 },
                ..
            } => Err(Error::input("ramp step a must be positive")),
            ItdSchedule::Labs { a, b, .. } if *a == 0 || *b == 0 => {
                Err(Error::input("LABS schedule steps a and b must be positive"))
            }
            _ => Ok(()),
        }
    }

    /// Headline multiplier at step `s`: the ramp value or `alpha[s]`.
    pub fn multiplier(&self, s: usize, n_steps: usize) -> f64 {
        match self {
            ItdSchedule::None => 1.0,
            ItdSchedule::EdgeRamp { ramp, .. } => ramp.value(s, n_steps),
            ItdSchedule::Labs { a, .. } => stepped(*a, s, n_steps),
        }
    }

    /// The Hamiltonian in effect at step `s`.
    pub fn hamiltonian_at(
        &self,
        base: &IsingHamiltonian,
        s: usize,
        n_steps: usize,
    ) -> IsingHamiltonian {
        match self {
            ItdSchedule::None => base.clone(),
            ItdSchedule::EdgeRamp { edges, ramp } => {
                let r = ramp.value(s, n_steps);
                base.map_coeffs(|_, t| match *t.support() {
                    [u, v] if edges.iter().any(|&(a, b)| (a.min(b), a.max(b)) == (u, v)) => {
                        t.coeff() * r
                    }
                    _ => t.coeff(),
                })
            }
            ItdSchedule::Labs { a, b, r_max } => {
                let alpha = stepped(*a, s, n_steps);
                let beta = stepped(*b, s, n_steps);
                base.map_coeffs(|_, t| {
                    if t.support().len() != 4 {
                        return t.coeff();
                    }
                    let long_range = labs_quartic_lags(t.support())
                        .map(|(t, k)| t.max(k).max(t + k).max(t.abs_diff(k)) > *r_max)
                        .unwrap_or(false);
                    let factor = if long_range { alpha * beta } else { alpha };
                    t.coeff() * factor
                })
            }
        }
    }

    /// True when the schedule gives the same Hamiltonian at steps `s` and `s + 1`.
    pub fn constant_between(&self, s: usize, n_steps: usize) -> bool {
        match self {
            ItdSchedule::None => true,
            ItdSchedule::EdgeRamp { ramp, edges } => {
                edges.is_empty() || ramp.value(s, n_steps) == ramp.value(s + 1, n_steps)
            }
            ItdSchedule::Labs { a, b, .. } => {
                stepped(*a, s, n_steps) == stepped(*a, s + 1, n_steps)
                    && stepped(*b, s, n_steps) == stepped(*b, s + 1, n_steps)
            }
        }
    }
}
