use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

pub fn mean_n(p: &[f64]) -> f64 {
    p.iter().enumerate().map(|(n, v)| n as f64 * v).sum()
}

/// Uniform draw from the probability simplex on `k` levels.
pub fn dirichlet(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// `p ∝ q^γ` with `γ ≥ 0` chosen by bisection so that `Σp² = mu`; zeros of `q` stay zero.
pub fn power_to_purity(q: &[f64], mu: f64) -> Option<Vec<f64>> {
    let support = q.iter().filter(|v| **v > 0.0).count();
    if (support as f64) * mu < 1.0 - 1e-12 {
        return None;
    }
    let shape = |g: f64| {
        let m = q.iter().cloned().fold(0.0, f64::max);
        let w: Vec<f64> = q.iter().map(|v| if *v > 0.0 { (v / m).powf(g) } else { 0.0 }).collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|v| v / s).collect::<Vec<f64>>()
    };
    let pur = |p: &[f64]| p.iter().map(|v| v * v).sum::<f64>();
    let (mut lo, mut hi) = (0.0, 1.0);
    while pur(&shape(hi)) < mu {
        hi *= 2.0;
        if hi > 1e6 {
            return None;
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if pur(&shape(mid)) < mu {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(shape(0.5 * (lo + hi)))
}

/// Random-restart search over feasible vectors on `levels` levels: random
/// sparse perturbations of the simplex, projected onto `Σp² = mu`.
pub fn search_min_occupation(mu: f64, levels: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..8 {
        let mut p = loop {
            if let Some(p) = power_to_purity(&dirichlet(&mut rng, levels), mu) {
                break p;
            }
        };
        let mut cur = mean_n(&p);
        let mut step: f64 = 0.1;
        while step > 1e-10 {
            let mut improved = false;
            for _ in 0..100 {
                let mut cand = p.clone();
                for _ in 0..rng.random_range(1..=3) {
                    let (i, j) = (rng.random_range(0..levels), rng.random_range(0..levels));
                    let d = (step * rng.random_range(0.0..1.0)).min(cand[i]);
                    cand[i] -= d;
                    cand[j] += d;
                }
                if rng.random_bool(0.1) {
                    let k = rng.random_range(0..levels);
                    cand[k] = 0.0;
                }
                let s: f64 = cand.iter().sum();
                cand.iter_mut().for_each(|v| *v /= s);
                if let Some(pc) = power_to_purity(&cand, mu) {
                    let m = mean_n(&pc);
                    if m < cur {
                        cur = m;
                        p = pc;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.min(cur);
    }
    best
}
