#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random linear model `y = b0 + X b + σ ε` with uniform predictors and
/// Gaussian noise.
pub struct Instance {
    pub rows: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub intercept: bool,
}

impl Instance {
    pub fn columns(&self) -> Vec<Vec<f64>> {
        let k = self.rows[0].len();
        (0..k).map(|j| self.rows.iter().map(|r| r[j]).collect()).collect()
    }
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    let u: f64 = rng.gen();
    let v: f64 = rng.gen();
    (-2.0 * (1.0 - u).ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

pub fn instance(seed: u64, n_range: (usize, usize), max_k: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=max_k);
    let n = rng.gen_range(n_range.0.max(k + 3)..=n_range.1);
    let intercept = rng.gen_bool(0.8);
    let b0 = if intercept { rng.gen_range(1.0..5.0) } else { 0.0 };
    let betas: Vec<f64> = (0..k)
        .map(|_| rng.gen_range(0.5..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    let sigma = rng.gen_range(0.05..1.0);
    let mut rows = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let row: Vec<f64> = (0..k).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let mean: f64 = b0 + row.iter().zip(&betas).map(|(x, b)| x * b).sum::<f64>();
        y.push(mean + sigma * gaussian(&mut rng));
        rows.push(row);
    }
    Instance { rows, y, intercept }
}

pub fn rel_err(computed: f64, reference: f64) -> f64 {
    if computed == reference {
        return 0.0;
    }
    (computed - reference).abs() / reference.abs()
}

pub fn assert_rel(what: &str, computed: f64, reference: f64, tol: f64) {
    let e = rel_err(computed, reference);
    assert!(
        e <= tol,
        "{what}: computed {computed:e}, reference {reference:e}, relative error {e:e} > {tol:e}"
    );
}

pub fn assert_all_rel(what: &str, computed: &[f64], reference: &[f64], tol: f64) {
    assert_eq!(computed.len(), reference.len(), "{what}: length");
    for (i, (c, r)) in computed.iter().zip(reference).enumerate() {
        assert_rel(&format!("{what}[{i}]"), *c, *r, tol);
    }
}
