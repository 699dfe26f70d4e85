//! A scaled-down configured sweep: build a config in code, print it as TOML,
//! run it on all cores, and show that one worker gives identical output.

use qite_pubo::experiments::{run_labs, ExperimentConfig, ExperimentKind};

fn main() -> qite_pubo::Result<()> {
    let dir = std::env::temp_dir().join("qite_sweep_example");
    let mut cfg = ExperimentConfig::preset(ExperimentKind::Labs);
    cfg.n_min = 6;
    cfg.n_max = 10;
    cfg.n_trials = 20;
    cfg.workers = std::thread::available_parallelism()
        .map_or(4, |n| n.get())
        .max(4);
    cfg.out_dir = Some(dir.join("parallel"));
    print!("{}", cfg.to_toml());

    let (rows, summary, out) = run_labs(&cfg)?;
    for s in &summary {
        println!(
            "N = {:>2}: mean AR {:.3} +- {:.3}, best AR {:.3}, mean P(GS) {:.3}",
            s.n, s.mean_ar, s.stderr_ar, s.best_ar, s.mean_p_gs
        );
    }

    let parallel = cfg.workers;
    cfg.workers = 1;
    cfg.out_dir = Some(dir.join("serial"));
    let (serial, _, out1) = run_labs(&cfg)?;
    assert_eq!(rows, serial);
    assert_eq!(
        std::fs::read(&out.rows_csv)?,
        std::fs::read(&out1.rows_csv)?
    );
    println!(
        "{} rows, identical at 1 and {} workers; files in {}",
        rows.len(),
        parallel,
        dir.display()
    );
    Ok(())
}
