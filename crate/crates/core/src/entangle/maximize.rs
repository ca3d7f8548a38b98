//! Maximization of |C_AB^φ|² over the unit sphere.
//!
//! Points are complex unit vectors `z`. The objective is extended to all
//! nonzero `z` as the degree-0 homogeneous function
//! `F(z) = |z†Mz/n − (z†Az)(z†Bz)/n²|²` with `n = z†z` and `M = AB`, so its
//! gradient at a unit vector is already tangent to the sphere and orthogonal
//! to the global-phase direction.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::oracle::sampling_oracle;
use super::{require_hermitian, Observable};
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, PartialEq)]
pub struct MaximizeOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// Stop a restart once the gradient norm drops to this.
    pub grad_tol: f64,
    /// Size of the quasi-random sampling cross-check; 0 disables it.
    pub oracle_samples: usize,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            restarts: 64,
            seed: 42,
            max_iterations: 20_000,
            grad_tol: 1e-10,
            oracle_samples: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OptimizerDiagnostics {
    pub restarts: usize,
    /// Summed over restarts.
    pub iterations: usize,
    /// Whether the winning restart reached the gradient tolerance.
    pub converged: bool,
    pub best_restart: usize,
    pub final_grad_norm: f64,
    pub oracle_max: Option<f64>,
    /// `optimizer max − oracle max`; should never be meaningfully negative.
    pub oracle_gap: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Maximum {
    /// max |C|
    pub value: f64,
    pub argmax: Array1<C64>,
    pub diagnostics: OptimizerDiagnostics,
}

/// `A`, `B` and `M = AB` as dense matrices on the search space.
#[derive(Debug, Clone)]
pub struct CorrelationProblem {
    pub a: Array2<C64>,
    pub b: Array2<C64>,
    pub ab: Array2<C64>,
    ab_adj: Array2<C64>,
}

impl CorrelationProblem {
    pub fn new(a: Array2<C64>, b: Array2<C64>, ab: Array2<C64>) -> Result<Self> {
        let d = a.nrows();
        for m in [&a, &b, &ab] {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: m.nrows().max(m.ncols()),
                });
            }
        }
        for m in [&a, &b] {
            let deviation = linalg::hermitian_deviation(&m.view());
            if deviation > crate::fock::HERMITIAN_TOL {
                return Err(Error::NonHermitianObservable { deviation });
            }
        }
        let ab_adj = linalg::adjoint(&ab.view());
        Ok(Self { a, b, ab, ab_adj })
    }

    pub fn from_observables<O: Observable>(a: &O, b: &O) -> Result<Self> {
        require_hermitian(a)?;
        require_hermitian(b)?;
        let ab = a.compose(b)?;
        Self::new(a.sector_matrix()?, b.sector_matrix()?, ab.sector_matrix()?)
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `C` at a unit vector.
    pub fn correlation(&self, z: &Array1<C64>) -> C64 {
        let a = linalg::quadratic_form(&self.a.view(), &z.view()).re;
        let b = linalg::quadratic_form(&self.b.view(), &z.view()).re;
        let m = linalg::quadratic_form(&self.ab.view(), &z.view());
        m - a * b
    }

    fn eval(&self, z: &Array1<C64>) -> f64 {
        self.correlation(z).norm_sqr()
    }

    /// Gradient of `F` at a unit vector, as the complex vector `g` with
    /// `dF = Re(δ† g)`.
    pub fn gradient(&self, z: &Array1<C64>) -> Array1<C64> {
        let az = self.a.dot(z);
        let bz = self.b.dot(z);
        let mz = self.ab.dot(z);
        let madj_z = self.ab_adj.dot(z);
        let a = linalg::inner(&z.view(), &az.view()).re;
        let b = linalg::inner(&z.view(), &bz.view()).re;
        let m = linalg::inner(&z.view(), &mz.view());
        let c = m - a * b;
        let cr = c.re;
        let cm = (c.conj() * m).re;
        let mut g = Array1::zeros(z.len());
        for k in 0..z.len() {
            g[k] = 2.0 * c.conj() * mz[k]
                + 2.0 * c * madj_z[k]
                + 2.0 * cr * (-2.0 * b * az[k] - 2.0 * a * bz[k] + 4.0 * a * b * z[k])
                - 4.0 * cm * z[k];
        }
        g
    }

    /// Single restart of gradient ascent from `start`, using
    /// Barzilai–Borwein trial steps with halving.
    fn ascend(
        &self,
        start: Array1<C64>,
        options: &MaximizeOptions,
    ) -> (Array1<C64>, f64, usize, bool, f64) {
        let normalize = |v: Array1<C64>| {
            let n = linalg::vec_norm(&v.view());
            v.mapv(|x| x / n)
        };
        let mut z = normalize(start);
        let mut cur = self.eval(&z);
        let mut g = self.gradient(&z);
        let mut gnorm = linalg::vec_norm(&g.view());
        let mut step = 0.1;
        let mut iters = 0;
        while iters < options.max_iterations {
            if gnorm <= options.grad_tol {
                return (z, cur, iters, true, gnorm);
            }
            iters += 1;
            let mut trial = step;
            let mut accepted = None;
            while trial > 1e-18 {
                let cand = normalize(&z + &g.mapv(|x| x * trial));
                let e = self.eval(&cand);
                // accept a step within rounding of F if the gradient shrinks
                let slack = 8.0 * f64::EPSILON * cur.max(1e-300);
                if e > cur {
                    accepted = Some((cand, e, None));
                    break;
                }
                if e >= cur - slack {
                    let gc = self.gradient(&cand);
                    let gcn = linalg::vec_norm(&gc.view());
                    if gcn < gnorm {
                        accepted = Some((cand, e, Some((gc, gcn))));
                        break;
                    }
                }
                trial *= 0.5;
            }
            let Some((cand, e, gpre)) = accepted else {
                break;
            };
            let (gn, gnn) = gpre.unwrap_or_else(|| {
                let gn = self.gradient(&cand);
                let gnn = linalg::vec_norm(&gn.view());
                (gn, gnn)
            });
            // BB1 step from the change in position and gradient (ascent sign)
            let dz = &cand - &z;
            let dg = &gn - &g;
            let num: f64 = dz.iter().map(|x| x.norm_sqr()).sum();
            let den: f64 = -dz
                .iter()
                .zip(dg.iter())
                .map(|(x, y)| (x.conj() * y).re)
                .sum::<f64>();
            step = if den > 0.0 {
                (num / den).clamp(1e-8, 1e3)
            } else {
                (trial * 2.0).min(1e3)
            };
            z = cand;
            cur = e;
            g = gn;
            gnorm = gnn;
        }
        let converged = gnorm <= options.grad_tol;
        (z, cur, iters, converged, gnorm)
    }

    pub fn maximize(&self, options: &MaximizeOptions) -> Maximum {
        let d = self.dim();
        let restarts = options.restarts.max(1);
        let runs: Vec<_> = (0..restarts)
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
                rng.set_stream(k as u64);
                let start = linalg::random_complex_vector(&mut rng, d);
                self.ascend(start, options)
            })
            .collect();

        let mut best = 0;
        for (k, run) in runs.iter().enumerate() {
            if run.1 > runs[best].1 {
                best = k;
            }
        }
        let iterations = runs.iter().map(|r| r.2).sum();
        let (mut argmax, value, _, converged, grad) =
            runs.into_iter().nth(best).expect("at least one restart");
        linalg::fix_phase(&mut argmax);
        let value = value.sqrt();

        let (oracle_max, oracle_gap) = if options.oracle_samples > 0 {
            let o = sampling_oracle(self, options.oracle_samples, options.seed);
            (Some(o.max_abs), Some(value - o.max_abs))
        } else {
            (None, None)
        };
        if !converged {
            log::warn!("correlation maximizer stopped with gradient norm {grad:e}");
        }
        Maximum {
            value,
            argmax,
            diagnostics: OptimizerDiagnostics {
                restarts,
                iterations,
                converged,
                best_restart: best,
                final_grad_norm: grad,
                oracle_max,
                oracle_gap,
            },
        }
    }
}

/// `F(z) = |C(z/‖z‖)|²` for arbitrary nonzero `z`.
pub fn objective(problem: &CorrelationProblem, z: &Array1<C64>) -> f64 {
    let n = linalg::vec_norm(&z.view());
    problem.eval(&z.mapv(|x| x / n))
}

/// Analytic gradient of [`objective`] at a unit vector, as a real vector
/// `(Re g_0, Im g_0, Re g_1, …)` in the coordinates `(Re z_0, Im z_0, …)`.
pub fn gradient(problem: &CorrelationProblem, z: &Array1<C64>) -> Vec<f64> {
    problem
        .gradient(z)
        .iter()
        .flat_map(|g| [g.re, g.im])
        .collect()
}
