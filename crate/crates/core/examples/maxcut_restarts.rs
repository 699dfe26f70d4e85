//! Restart random inits and driven edges until the product state holds the
//! ground state with probability at least 0.995.

use qite_pubo::graphs::{nws_generate, NwsParams};
use qite_pubo::hamiltonian::brute_force_ground;
use qite_pubo::linear::SymbolString;
use qite_pubo::problems::maxcut_hamiltonian;
use qite_pubo::restarts::{converge_with_restarts, RestartOptions};

fn main() -> qite_pubo::Result<()> {
    for (n, seed) in [(6, 1), (9, 2), (12, 3)] {
        let g = nws_generate(
            NwsParams {
                n,
                k: 4,
                p: 0.5,
                weighted: true,
            },
            seed,
        )?;
        let gt = brute_force_ground(&maxcut_hamiltonian(&g)?, 24)?;
        let out = converge_with_restarts(&g, &gt.ground_set, &RestartOptions::new(25), seed)?;
        println!(
            "N = {n:>2}: converged {}, attempts {}, best P(GS) {:.4}, init {} edges {:?}",
            out.converged,
            out.attempts,
            out.best_p_gs,
            SymbolString(&out.best_attempt.symbols),
            out.best_attempt.itd_edges
        );
    }
    Ok(())
}
