//! Classical references on one graph: exhaustive search, Goemans-Williamson
//! via a low-rank SDP, greedy local search, and a random cut.

use qite_pubo::baselines::{
    goemans_williamson, greedy_maxcut, gw_energy, random_assignment, GwParams,
};
use qite_pubo::graphs::{nws_generate, NwsParams};
use qite_pubo::hamiltonian::brute_force_ground;
use qite_pubo::problems::maxcut_hamiltonian;

fn main() -> qite_pubo::Result<()> {
    let g = nws_generate(
        NwsParams {
            n: 16,
            k: 4,
            p: 0.5,
            weighted: true,
        },
        11,
    )?;
    let exact = brute_force_ground(&maxcut_hamiltonian(&g)?, 24)?;
    let gw = goemans_williamson(&g, &GwParams::default(), 11)?;
    let (greedy, greedy_cut) = greedy_maxcut(&g, 11, 10)?;
    let random = gw_energy(&g, &random_assignment(g.n(), 11))?;
    println!(
        "exact  E {:+.4} ({} minimizers)",
        exact.energy,
        exact.ground_set.len()
    );
    println!(
        "GW     E {:+.4} (rank {}, relaxed cut {:.4}, cut {:.4})",
        gw.energy, gw.rank, gw.relaxation, gw.cut
    );
    println!(
        "greedy E {:+.4} (cut {:.4})",
        gw_energy(&g, &greedy)?,
        greedy_cut
    );
    println!("random E {:+.4}", random);
    Ok(())
}
