//! Same LABS instance and start, run with the product-state Ansatz and with
//! the statevector Ansatz over all single and pair Y generators.

use qite_pubo::linear::{p_gs, parse_symbols, qite_run, ProductState, QiteOptions};
use qite_pubo::problems::{labs_exact, labs_hamiltonian_expansion};
use qite_pubo::quad::{
    p_gs_statevector, qite_quad_run, CoefficientMode, QuadOptions, StateVector, YOperatorBasis,
};
use qite_pubo::schedule::ItdSchedule;

fn main() -> qite_pubo::Result<()> {
    let n = 7;
    let h = labs_hamiltonian_expansion(n)?;
    let gs = labs_exact(n, 24)?.ground_set();
    let sched = ItdSchedule::Labs {
        a: 4,
        b: 1,
        r_max: 8,
    };
    let syms = parse_symbols("0+0++0+")?;

    let lin = qite_run(
        &h,
        &ProductState::from_symbols(&syms),
        &QiteOptions::new(40).with_schedule(sched.clone()),
    )?;
    println!(
        "linear     E {:.4}  P(GS) {:.4}",
        lin.trace.final_energy(),
        p_gs(&lin.state, &gs)?
    );

    let basis = YOperatorBasis::quadratic(n);
    for mode in [
        CoefficientMode::Identity,
        CoefficientMode::Solve {
            lambda: CoefficientMode::DEFAULT_LAMBDA,
        },
    ] {
        let run = qite_quad_run(
            &h,
            &StateVector::init_product(&syms)?,
            &basis,
            &QuadOptions::new(40)
                .with_schedule(sched.clone())
                .with_mode(mode),
        )?;
        println!(
            "quad/{:<8} E {:.4}  P(GS) {:.4}  ({} generators, {} measurements)",
            mode.name(),
            run.trace.final_energy(),
            p_gs_statevector(&run.state, &gs)?,
            basis.len(),
            run.trace.measurement_count()
        );
    }
    Ok(())
}
