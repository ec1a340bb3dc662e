mod common;

use common::{dirichlet, mean_n, search_min_occupation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use urbounds::{
    covariance_matrices, frontier_table, min_mean_occupation, phi_exact, phi_tilde, purity, quadrature_observables,
    random_density_matrix, random_gaussian_state, FrontierPoint, PhysConfig, State,
};

/// Pulls `q` toward the uniform vector on its support until `Σp² = mu`.
/// Returns `None` when `q` is already less pure than `mu`.
fn to_purity(q: &[f64], mu: f64) -> Option<Vec<f64>> {
    let k = q.len() as f64;
    let qq: f64 = q.iter().map(|v| v * v).sum();
    if qq < mu || mu < 1.0 / k {
        return None;
    }
    let d: Vec<f64> = q.iter().map(|v| 1.0 / k - v).collect();
    let a: f64 = d.iter().map(|v| v * v).sum();
    let b: f64 = 2.0 * q.iter().zip(&d).map(|(x, y)| x * y).sum::<f64>();
    let c = qq - mu;
    if a == 0.0 {
        return (c.abs() < 1e-15).then(|| q.to_vec());
    }
    let disc = (b * b - 4.0 * a * c).max(0.0);
    let t = (-b - disc.sqrt()) / (2.0 * a);
    let t = t.clamp(0.0, 1.0);
    Some(q.iter().zip(&d).map(|(x, y)| (x + t * y).max(0.0)).collect())
}

#[test]
fn random_search_reproduces_quarter_purity_value() {
    let oracle = search_min_occupation(0.25, 10, 7);
    let (occ, probs) = min_mean_occupation(0.25, 256).unwrap();
    assert_eq!(probs.len(), 5);
    assert!(oracle >= occ - 1e-12, "search found {oracle} below {occ}");
    assert!(oracle - occ < 1e-9, "search {oracle} vs {occ}");
    assert!((2.0 * oracle + 1.0 - 3.5857864).abs() < 1e-6);
    assert!((phi_exact(0.25).unwrap() - (5.0 - 2f64.sqrt())).abs() < 1e-12);
}

#[test]
fn random_search_agrees_across_purities() {
    for (i, mu) in [0.15, 0.4, 0.6, 0.9].into_iter().enumerate() {
        let oracle = search_min_occupation(mu, 12, 100 + i as u64);
        let (occ, _) = min_mean_occupation(mu, 256).unwrap();
        assert!(oracle >= occ - 1e-12, "mu {mu}: {oracle} < {occ}");
        assert!(oracle - occ < 1e-9, "mu {mu}: {oracle} vs {occ}");
    }
}

#[test]
#[allow(clippy::approx_constant)]
fn two_level_closed_form() {
    for mu in [0.6, 0.70711, std::f64::consts::FRAC_1_SQRT_2, 0.8, 0.95] {
        let (occ, probs) = min_mean_occupation(mu, 256).unwrap();
        let p1 = (1.0 - (2.0 * mu - 1.0).sqrt()) / 2.0;
        assert_eq!(probs.len(), 2);
        assert!((occ - p1).abs() < 1e-12, "{mu}: {occ} vs {p1}");
    }
    assert_eq!(min_mean_occupation(1.0, 256).unwrap(), (0.0, vec![1.0]));
    assert_eq!(phi_exact(1.0).unwrap(), 1.0);
}

#[test]
fn feasible_vectors_never_beat_frontier() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for mu in [0.08, 0.25, 0.5, 0.75, 0.95] {
        let phi = phi_exact(mu).unwrap();
        let mut count = 0;
        while count < 1000 {
            let k = rng.random_range(2..=40);
            let q = dirichlet(&mut rng, k);
            let q: Vec<f64> = q.iter().map(|v| v.powi(3)).collect();
            let s: f64 = q.iter().sum();
            let q: Vec<f64> = q.iter().map(|v| v / s).collect();
            let Some(p) = to_purity(&q, mu) else { continue };
            let pur: f64 = p.iter().map(|v| v * v).sum();
            assert!((pur - mu).abs() < 1e-9);
            assert!(phi <= 2.0 * mean_n(&p) + 1.0 + 1e-12, "mu {mu}: {p:?}");
            count += 1;
        }
    }
}

#[test]
fn sandwich_monotone_and_agreement() {
    let table = frontier_table(0.05, 1.0, 100).unwrap();
    let mut prev = f64::INFINITY;
    for pt in &table {
        assert!(
            pt.phi_exact >= 1.0 - 1e-15 && pt.phi_exact <= 1.0 / pt.mu + 1e-12,
            "{pt:?}"
        );
        assert!(
            pt.phi_tilde >= 1.0 - 1e-15 && pt.phi_tilde <= 1.0 / pt.mu + 1e-12,
            "{pt:?}"
        );
        assert!(pt.phi_exact <= prev + 1e-14);
        assert!((pt.phi_exact - pt.phi_tilde).abs() / pt.phi_exact <= 0.02, "{pt:?}");
        let s: f64 = pt.probs.iter().sum();
        let q: f64 = pt.probs.iter().map(|p| p * p).sum();
        assert!((s - 1.0).abs() < 1e-12 && (q - pt.mu).abs() < 1e-12);
        assert!(pt.probs.windows(2).all(|w| w[0] >= w[1]));
        prev = pt.phi_exact;
    }
}

#[test]
fn table_reference_points() {
    let one = FrontierPoint::at(1.0).unwrap();
    assert_eq!((one.phi_exact, one.phi_tilde), (1.0, 1.0));
    let q = FrontierPoint::at(0.25).unwrap();
    assert!(((q.phi_exact - q.phi_tilde).abs() - 7.1e-4).abs() < 1e-4);
    assert!((q.abs_diff_lead() - 0.0302).abs() < 1e-3);
    assert!(q.scaled_diff_lead() < 0.01);
    assert!((q.phi_exact - q.phi_asym).abs() < 0.01);
    let small = FrontierPoint::at(0.05).unwrap();
    let ratio = small.phi_exact * 9.0 * 0.05 / 8.0;
    assert!((ratio - 1.0).abs() < 0.01, "{ratio}");
    assert!(phi_tilde(0.25).unwrap() - 3.5865 < 1e-4);
    assert!(min_mean_occupation(0.003, 256).is_err());
}

#[test]
fn sampled_density_matrices_respect_frontier() {
    let cfg = PhysConfig::default();
    for seed in 0..300u64 {
        let dim = 4 + (seed as usize % 29);
        let rho = random_density_matrix(5000 + seed, dim).unwrap().embed(dim + 1).unwrap();
        let mu = rho.purity();
        let (x, p) = quadrature_observables(dim + 1, &cfg).unwrap();
        let mp = covariance_matrices(&State::Fock(rho), &[x, p], &cfg).unwrap();
        let lhs = (mp.x(0, 0) * mp.x(1, 1) - mp.x(0, 1).powi(2)).sqrt();
        let floor = cfg.hbar / 2.0 * phi_exact(mu).unwrap();
        assert!(lhs >= floor - 1e-8, "seed {seed} dim {dim}: {lhs} < {floor}");
    }
}

#[test]
fn gaussian_states_are_not_optimal() {
    let mut seen = 0;
    for hbar in [1.0, 2.0] {
        let cfg = PhysConfig::with_hbar(hbar).unwrap();
        for seed in 0..200u64 {
            let g = random_gaussian_state(seed, 1, &cfg).unwrap();
            let (sxx, spp, sxp) = g.mode_moments(0);
            let mu = purity(&State::Gaussian(g));
            if mu >= 0.99 {
                continue;
            }
            seen += 1;
            let det = (sxx * spp - sxp * sxp).sqrt();
            assert!(det > hbar / 2.0 * phi_exact(mu).unwrap(), "seed {seed}: mu {mu}");
        }
    }
    assert!(seen > 300);
}
