//! Per-step run records and the grid line search shared by both engines.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid line search over the imaginary-time step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauPolicy {
    pub delta_beta: f64,
    pub beta_max: f64,
}

impl Default for TauPolicy {
    fn default() -> Self {
        Self {
            delta_beta: 0.05,
            beta_max: 1.0,
        }
    }
}

impl TauPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_beta > 0.0 && self.delta_beta.is_finite()) {
            return Err(Error::input(format!(
                "delta_beta = {} must be positive",
                self.delta_beta
            )));
        }
        if !(self.beta_max > 0.0 && self.beta_max.is_finite()) {
            return Err(Error::input(format!(
                "beta_max = {} must be positive",
                self.beta_max
            )));
        }
        Ok(())
    }

    /// Number of grid points `delta_beta, 2 delta_beta, ... <= beta_max`;
    /// at least one.
    pub fn probes(&self) -> usize {
        ((self.beta_max / self.delta_beta + 1e-9).floor() as usize).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearch {
    pub tau: f64,
    /// Energy at the chosen `tau`.
    pub energy: f64,
    /// Trial energies evaluated.
    pub probes: usize,
}

/// Scans `beta = delta_beta, 2 delta_beta, ...` and stops at the first energy
/// increase. Returns the running argmin of the scanned prefix, with `beta = 0`
/// (energy `e0`) as the starting point, so a flat or rising first probe
/// returns `tau = 0`.
pub fn grid_line_search(
    policy: &TauPolicy,
    e0: f64,
    mut energy_at: impl FnMut(f64) -> f64,
) -> LineSearch {
    let mut best = (0.0, e0);
    let mut prev = e0;
    let mut probes = 0;
    for m in 1..=policy.probes() {
        let beta = m as f64 * policy.delta_beta;
        let e = energy_at(beta);
        probes += 1;
        if e > prev {
            break;
        }
        if e < best.1 {
            best = (beta, e);
        }
        prev = e;
    }
    LineSearch {
        tau: best.0,
        energy: best.1,
        probes,
    }
}

/// One row of a run trace. Step 0 is the initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub tau: f64,
    /// Expectation of the unscheduled objective.
    pub energy: f64,
    pub b_norm: f64,
    /// Schedule multiplier used for this step.
    pub alpha: f64,
    /// Cumulative measurement count.
    pub measurement_count: u64,
    /// Expectation of the scheduled Hamiltonian of this step, after the update.
    #[serde(skip)]
    pub scheduled_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunTrace {
    pub records: Vec<StepRecord>,
}

impl RunTrace {
    pub fn energies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.energy).collect()
    }

    pub fn taus(&self) -> Vec<f64> {
        self.records.iter().skip(1).map(|r| r.tau).collect()
    }

    pub fn final_energy(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.energy)
    }

    pub fn measurement_count(&self) -> u64 {
        self.records.last().map_or(0, |r| r.measurement_count)
    }

    /// Writes `step,tau,energy,b_norm,alpha,measurement_count`, plus a trailing
    /// `mode` column when `mode` is given.
    pub fn write_csv<W: Write>(&self, w: W, mode: Option<&str>) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec![
            "step",
            "tau",
            "energy",
            "b_norm",
            "alpha",
            "measurement_count",
        ];
        if mode.is_some() {
            header.push("mode");
        }
        out.write_record(&header)?;
        for r in &self.records {
            let mut row = vec![
                r.step.to_string(),
                r.tau.to_string(),
                r.energy.to_string(),
                r.b_norm.to_string(),
                r.alpha.to_string(),
                r.measurement_count.to_string(),
            ];
            if let Some(m) = mode {
                row.push(m.to_string());
            }
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Pairwise (cascade) summation; the reduction order depends only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}
