//! Exact LABS optima, their symmetry orbits, and the on-disk solution bank.

use qite_pubo::problems::{labs_exact, LabsSolutionBank};

fn main() -> qite_pubo::Result<()> {
    let mut bank = LabsSolutionBank::new();
    for n in 3..=14 {
        let opt = labs_exact(n, 24)?;
        println!(
            "N = {n:>2}: E_opt {:>3}, {} optimal sequences",
            opt.energy,
            opt.ground_set().len()
        );
        bank.insert_optimum(&opt)?;
    }
    let dir = std::env::temp_dir().join("qite_labs_bank_example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("labs_bank.txt");
    bank.store(&path)?;
    assert_eq!(LabsSolutionBank::load(&path)?, bank);
    println!(
        "bank with {} entries written to {}",
        bank.len(),
        path.display()
    );
    Ok(())
}
