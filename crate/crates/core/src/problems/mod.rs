//! Problem encodings: weighted MaxCut and low-autocorrelation binary
//! sequences (LABS), with their native metrics.

mod bank;
mod labs;
mod maxcut;

pub use bank::{BankEntry, LabsSolutionBank};
pub use labs::{
    autocorrelation, compact_form_affine_fit, format_sequence, labs_exact,
    labs_hamiltonian_compact, labs_hamiltonian_expansion, labs_orbit, labs_quartic_lags,
    merit_factor, parse_sequence, sidelobe_energy, AffineFit, LabsOptimum, DEFAULT_LABS_CAP,
};
pub use maxcut::{cut_value, maxcut_hamiltonian};
