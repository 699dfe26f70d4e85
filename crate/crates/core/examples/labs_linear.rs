//! LABS with the linear Ansatz: many random {|0>, |+>} starts under the
//! stepped driving schedule, best sequence against the exact optimum.

use qite_pubo::problems::{labs_exact, merit_factor, parse_sequence};
use qite_pubo::solve::{solve_labs, LabsRequest};

fn main() -> qite_pubo::Result<()> {
    for n in [7, 9, 11] {
        let (s, _) = solve_labs(n, &LabsRequest::new(40, 50), 1)?;
        let opt = labs_exact(n, 24)?;
        let mf = merit_factor(&parse_sequence(&s.best_sequence).unwrap())?;
        println!(
            "N = {n:>2}: best E {} ({}, merit {mf:.3}), optimum {}, mean P(GS) {:.3}",
            s.best_energy,
            s.best_sequence,
            opt.energy,
            s.mean_p_gs.unwrap()
        );
    }
    Ok(())
}
