//! Linear-Ansatz QITE on a weighted Newman-Watts-Strogatz graph with one
//! inhomogeneous-driving edge, compared with brute force.

use qite_pubo::graphs::{nws_generate, NwsParams};
use qite_pubo::restarts::RestartOptions;
use qite_pubo::solve::{solve_maxcut, MaxCutRequest};

fn main() -> qite_pubo::Result<()> {
    let seed = 7;
    let g = nws_generate(
        NwsParams {
            n: 14,
            k: 4,
            p: 0.5,
            weighted: true,
        },
        seed,
    )?;
    println!(
        "graph: N = {}, |E| = {}, total weight {:.3}",
        g.n(),
        g.edges().len(),
        g.total_weight()
    );

    let (summary, trace) = solve_maxcut(&g, &MaxCutRequest::new(50), seed)?;
    println!(
        "init {}  driven edges {:?}",
        summary.init, summary.itd_edges
    );
    for r in trace.records.iter().step_by(10) {
        println!("step {:>2}  E {:+.4}  tau {:.2}", r.step, r.energy, r.tau);
    }
    println!(
        "final <H> {:+.4}, rounded {:+.4} (cut {:.3}), ground {:+.4}, P(GS) {:.4}",
        summary.final_energy,
        summary.rounded_energy,
        summary.rounded_cut,
        summary.ground_energy.unwrap(),
        summary.p_gs.unwrap()
    );

    // A single draw can stall in a product state far from the optimum;
    // restarting over fresh inits and driven edges fixes that on small graphs.
    let mut req = MaxCutRequest::new(50);
    req.converge = Some(RestartOptions::new(50));
    let (conv, _) = solve_maxcut(&g, &req, seed)?;
    println!(
        "with restarts: {} attempts, rounded {:+.4}, P(GS) {:.4}",
        conv.attempts,
        conv.rounded_energy,
        conv.p_gs.unwrap()
    );
    Ok(())
}
