use proptest::prelude::*;

use qite_pubo::experiments::{run_ar, run_restarts, ExperimentConfig, ExperimentKind};
use qite_pubo::graphs::{nws_generate, NwsParams};
use qite_pubo::hamiltonian::brute_force_ground;
use qite_pubo::linear::{p_gs, qite_run, InitSymbol, ProductState, QiteOptions};
use qite_pubo::problems::maxcut_hamiltonian;
use qite_pubo::quad::{expectation_diag, p_gs_statevector, StateVector};
use qite_pubo::rng::SplitMix64;

fn small(kind: ExperimentKind, dir: &std::path::Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::preset(kind);
    cfg.n_trials = 3;
    cfg.workers = 3;
    cfg.out_dir = Some(dir.to_path_buf());
    cfg
}

#[test]
fn restarts_driver_respects_exact_cap() {
    let d = tempfile::tempdir().unwrap();
    let mut cfg = small(ExperimentKind::Restarts, d.path());
    cfg.n_min = 6;
    cfg.n_max = 7;
    let (rows, summary, out) = run_restarts(&cfg).unwrap();
    assert_eq!(
        rows.len(),
        2 * 3 * (cfg.steps.len() + cfg.unweighted_steps.len())
    );
    assert!(!summary.is_empty());
    assert!(out.summary_json.exists());

    cfg.n_max = 30;
    assert_eq!(run_restarts(&cfg).unwrap_err().exit_code(), 3);
}

#[test]
fn ar_driver_bounds() {
    let d = tempfile::tempdir().unwrap();
    let mut cfg = small(ExperimentKind::Ar, d.path());
    cfg.n_min = 20;
    cfg.n_max = 25;
    cfg.n_stride = 5;
    cfg.steps = vec![10, 25];
    let (rows, summary, _) = run_ar(&cfg).unwrap();
    assert_eq!(rows.len(), 2 * 3 * 2);
    for r in &rows {
        // Both energies are negative on these graphs; GW is a strong reference.
        assert!(r.e_gw < 0.0);
        assert!(r.ar <= 1.0 + 1e-9 || r.e_qite < r.e_gw);
    }
    assert_eq!(summary.len(), 2 * 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The product-state engine and its statevector embedding agree on energy
    /// and ground-state probability after a full run.
    #[test]
    fn product_and_statevector_views_agree(seed in any::<u64>(), n in 5usize..10) {
        let g = nws_generate(NwsParams { n, k: 4, p: 0.5, weighted: true }, seed).unwrap();
        let h = maxcut_hamiltonian(&g).unwrap();
        let gs = brute_force_ground(&h, 24).unwrap().ground_set;
        let mut rng = SplitMix64::new(seed);
        let syms = InitSymbol::random(n, &InitSymbol::ALL, &mut rng);
        let run = qite_run(&h, &ProductState::from_symbols(&syms), &QiteOptions::new(10)).unwrap();

        let mut sv = StateVector::init_product(&[InitSymbol::Zero].repeat(n)).unwrap();
        for (j, &phi) in run.state.phi.iter().enumerate() {
            sv.apply_y(j, phi / 2.0).unwrap();
        }
        prop_assert!((expectation_diag(&h, &sv).unwrap() - run.trace.final_energy()).abs() < 1e-9);
        prop_assert!((p_gs_statevector(&sv, &gs).unwrap() - p_gs(&run.state, &gs).unwrap()).abs() < 1e-9);
    }
}
