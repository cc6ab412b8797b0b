//! Seeded random matrices for self-tests, examples, and the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numkit::{ComplexMatrix, C64};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex Gaussian with unit variance per component.
pub fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniform sample from the disk of the given radius.
pub fn in_disk(rng: &mut impl Rng, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    C64::from_polar(r, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

pub fn disk_matrix(rng: &mut impl Rng, rows: usize, cols: usize, radius: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| in_disk(rng, radius))
}

/// Haar-distributed unitary: Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        u.set_column(j, c);
    }
    u
}

/// `U diag(sigmas) W` with Haar factors: a matrix with prescribed singular
/// values, zero-padded when `sigmas` is shorter than `min(rows, cols)`.
pub fn with_singulars(rng: &mut impl Rng, rows: usize, cols: usize, sigmas: &[f64]) -> ComplexMatrix {
    let u = random_unitary(rows, rng);
    let w = random_unitary(cols, rng);
    let mut d = ComplexMatrix::zeros(rows, cols);
    for (j, &s) in sigmas.iter().take(rows.min(cols)).enumerate() {
        d[(j, j)] = C64::new(s, 0.0);
    }
    &(&u * &d) * &w
}
