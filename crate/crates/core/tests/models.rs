use graphon_entropy::blockfit::log_likelihood;
use graphon_entropy::config::GraphonConfig;
use graphon_entropy::*;

#[test]
fn exchangeability_witness() {
    // mean edge count over 200 seeds with permuted latents matches the original
    let spec = make_f1(0.25).unwrap();
    let n = 60;
    let xi = sample_latents(n, 1).unwrap();
    let perm: Vec<usize> = (0..n).map(|i| (i * 7 + 3) % n).collect();
    let xp = xi.permuted(&perm);
    let counts = |x: &LatentVector| -> Vec<f64> { (0..200).map(|s| sample_graph(&spec, x, 1000 + s).edge_count() as f64).collect() };
    let (a, b) = (counts(&xi), counts(&xp));
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let var = |v: &[f64]| {
        let m = mean(v);
        v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
    };
    let se = ((var(&a) + var(&b)) / 200.0).sqrt();
    assert!((mean(&a) - mean(&b)).abs() <= 3.0 * se);
}

#[test]
fn presets_build_valid_specs() {
    for kind in graphon_entropy::config::KIND_NAMES {
        let cfg = GraphonConfig::preset(kind, None).unwrap();
        let spec = cfg.to_spec().unwrap();
        let h = graphon_entropy(&spec, 256).unwrap();
        assert!((0.0..=std::f64::consts::LN_2).contains(&h), "{kind}: {h}");
    }
    assert!(GraphonConfig::preset("constant", Some(1.5)).and_then(|c| c.to_spec()).is_err());
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two_block.cfg");
    std::fs::write(&path, "# planted\nkind = block\nrho = 0.5\ntheta = 0.8 0.1; 0.1 0.8\nfractions = 0.25, 0.75\n").unwrap();
    let cfg = GraphonConfig::load(&path).unwrap();
    let spec = cfg.to_spec().unwrap();
    let want = block_entropy(&[0.4, 0.05, 0.05, 0.4], &[1, 3], 4).unwrap();
    assert!((graphon_entropy(&spec, 16).unwrap() - want).abs() < 1e-14);
    let again = GraphonConfig::parse(&cfg.to_string(), None).unwrap();
    assert_eq!(again, cfg);
}

#[test]
fn fit_never_lowers_initial_likelihood() {
    let spec = make_f1(0.25).unwrap();
    for seed in 0..4 {
        let g = sample_graph(&spec, &sample_latents(80, seed).unwrap(), seed + 50);
        let opts = FitOptions { seed, restarts: 2, ..FitOptions::default() };
        let fit: BlockFit<f64> = fit_labels(&g, 5, &opts).unwrap();
        assert!(fit.converged);
        assert!(fit.trace.windows(2).all(|w| w[1] >= w[0]));
        assert!(fit.log_likelihood >= fit.trace[0]);
        let exact = log_likelihood(&g, &fit.labels, 5, &fit.theta_hat).unwrap();
        assert!((exact - fit.log_likelihood).abs() < 1e-8 * exact.abs().max(1.0));
    }
}

#[test]
fn restart_selection_is_schedule_independent() {
    let spec = make_f1(0.25).unwrap();
    let g = sample_graph(&spec, &sample_latents(70, 3).unwrap(), 4);
    let opts = FitOptions { restarts: 4, seed: 9, ..FitOptions::default() };
    let run = |t: usize| -> BlockFit<f64> {
        rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap().install(|| fit_labels(&g, 6, &opts).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn sparse_schedule_is_capped_and_decreasing() {
    assert_eq!(rho_schedule(1000, Regime::Sparse, 1.0_f64).unwrap(), (1000f64.ln().powf(3.5)) / 1000.0);
    assert_eq!(rho_schedule(1000, Regime::Sparse, 0.25_f64).unwrap(), 0.25);
    let r: Vec<f64> = (30..2000).step_by(50).map(|n| rho_schedule(n, Regime::Sparse, 1.0).unwrap()).collect();
    assert!(r.windows(2).all(|w| w[1] <= w[0]));
}
