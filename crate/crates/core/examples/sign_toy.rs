//! Single qubit, `H = Z`, started in |+>. QITE should drive it to |1>
//! (`<Z> = -1`) within a handful of steps.

use qite_pubo::hamiltonian::IsingHamiltonian;
use qite_pubo::linear::{qite_run, InitSymbol, ProductState, QiteOptions};

fn main() -> qite_pubo::Result<()> {
    let h = IsingHamiltonian::from_pairs(1, [(vec![0], 1.0)], 0.0)?;
    let run = qite_run(
        &h,
        &ProductState::from_symbols(&[InitSymbol::Plus]),
        &QiteOptions::new(50),
    )?;
    for r in run.trace.records.iter().take(8) {
        println!(
            "step {:>2}  tau {:.2}  <Z> {:+.6}  |b| {:.2e}",
            r.step, r.tau, r.energy, r.b_norm
        );
    }
    println!("final <Z> = {:+.9}", run.state.z()[0]);
    Ok(())
}
