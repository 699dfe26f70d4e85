//! Build Ising Hamiltonians, round-trip them through the text format, and
//! minimize them exhaustively.

use std::path::Path;

use qite_pubo::hamiltonian::{brute_force_ground, IsingHamiltonian};
use qite_pubo::problems::{format_sequence, labs_hamiltonian_expansion};

fn main() -> qite_pubo::Result<()> {
    // Frustrated triangle plus a cubic term.
    let h = IsingHamiltonian::from_pairs(
        3,
        [
            (vec![0, 1], 1.0),
            (vec![1, 2], 1.0),
            (vec![0, 2], 1.0),
            (vec![0, 1, 2], 0.5),
        ],
        0.0,
    )?;
    let text = h.to_text();
    print!("{text}");
    let back = IsingHamiltonian::parse(&text, Path::new("<memory>"))?;
    assert_eq!(back, h);
    let gt = brute_force_ground(&h, 24)?;
    println!(
        "E0 = {}, minimizers: {:?}",
        gt.energy,
        gt.ground_set
            .iter()
            .map(|s| format_sequence(s))
            .collect::<Vec<_>>()
    );

    let labs = labs_hamiltonian_expansion(10)?;
    println!(
        "LABS N = 10: {} terms, flip symmetric {}",
        labs.terms().len(),
        labs.is_flip_symmetric()
    );
    Ok(())
}
