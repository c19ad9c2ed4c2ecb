#![allow(dead_code)]

use qpp_core::{Amplitude, Matrix, Operator, QuantumState};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Amplitude> {
    (0..dim)
        .map(|_| Amplitude::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn normalize(v: Vec<Amplitude>) -> Vec<Amplitude> {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a.scale(1.0 / norm)).collect()
}

pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> QuantumState {
    QuantumState::from_amplitudes(normalize(random_vector(rng, 1 << n))).unwrap()
}

/// Gram-Schmidt on random columns.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> Operator {
    let dim = 1 << n;
    let mut cols: Vec<Vec<Amplitude>> = Vec::new();
    while cols.len() < dim {
        let mut v = random_vector(rng, dim);
        for c in &cols {
            let dot = c
                .iter()
                .zip(&v)
                .fold(Amplitude::ZERO, |acc, (a, b)| acc + a.conj() * *b);
            for (x, y) in v.iter_mut().zip(c) {
                *x = *x - dot * *y;
            }
        }
        cols.push(normalize(v));
    }
    Operator::dense(Matrix::from_fn(dim, |r, c| cols[c][r])).unwrap()
}

pub fn random_table(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    (0..1 << n).map(|_| rng.gen_bool(0.5)).collect()
}

pub fn max_diff(a: &[Amplitude], b: &[Amplitude]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (*x - *y).abs()).fold(0.0, f64::max)
}
