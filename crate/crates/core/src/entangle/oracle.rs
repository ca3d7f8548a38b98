//! Brute-force lower bound on max |C|: evaluate the correlation at many
//! quasi-random unit vectors and keep the largest.
//!
//! Points come from a Halton sequence in `2d` dimensions (shifted modulo 1 by
//! a seeded random offset), pushed through Box–Muller to complex Gaussians
//! and normalized, which spreads them over the complex unit sphere.

use ndarray::Array1;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::maximize::CorrelationProblem;
use crate::linalg;

const CHUNK: usize = 8192;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub max_abs: f64,
    pub argmax: Array1<C64>,
    pub samples: usize,
}

fn first_primes(n: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(n);
    let mut k = 2u64;
    while primes.len() < n {
        if primes
            .iter()
            .take_while(|&&p| p * p <= k)
            .all(|&p| !k.is_multiple_of(p))
        {
            primes.push(k);
        }
        k += 1;
    }
    primes
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

fn point(index: u64, primes: &[u64], shift: &[f64], d: usize) -> Array1<C64> {
    let mut u = [0.0f64; 2];
    let mut z = Array1::zeros(d);
    for k in 0..d {
        for (j, slot) in u.iter_mut().enumerate() {
            let dim = 2 * k + j;
            let x = radical_inverse(index, primes[dim]) + shift[dim];
            *slot = x - x.floor();
        }
        // 1 − u lies in (0, 1]
        let r = (-2.0 * (1.0 - u[0]).ln()).sqrt();
        let theta = std::f64::consts::TAU * u[1];
        z[k] = C64::new(r * theta.cos(), r * theta.sin());
    }
    let n = linalg::vec_norm(&z.view());
    z.mapv(|x| x / n)
}

/// Largest |C| seen over `samples` quasi-random unit vectors.
pub fn sampling_oracle(problem: &CorrelationProblem, samples: usize, seed: u64) -> OracleResult {
    let d = problem.dim();
    let primes = first_primes(2 * d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let shift: Vec<f64> = (0..2 * d).map(|_| rng.random::<f64>()).collect();

    let n_chunks = samples.div_ceil(CHUNK);
    let best = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(samples);
            let mut best_val = -1.0;
            let mut best_idx = lo;
            for i in lo..hi {
                let z = point(i as u64 + 1, &primes, &shift, d);
                let v = problem.correlation(&z).norm();
                if v > best_val {
                    best_val = v;
                    best_idx = i;
                }
            }
            (best_val, best_idx)
        })
        .reduce(
            || (-1.0, usize::MAX),
            |x, y| {
                // ties go to the lower sample index
                if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                    y
                } else {
                    x
                }
            },
        );
    let argmax = if samples > 0 {
        point(best.1 as u64 + 1, &primes, &shift, d)
    } else {
        Array1::zeros(d)
    };
    OracleResult {
        max_abs: best.0.max(0.0),
        argmax,
        samples,
    }
}
