//! Slater rank of two-fermion states.
//!
//! Any antisymmetric `w` can be brought by a single-particle unitary to a
//! block-diagonal form `⊕_k z_k [[0, 1], [−1, 0]]`. The number of nonzero
//! `z_k` is the Slater rank; rank 1 means the state is a single determinant.
//! The `z_k` are the singular values of `w`, each appearing twice.

use ndarray::{s, Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::firstq::{outer, TwoParticleWavefunction, ANTISYMMETRY_TOL};
use crate::linalg;

/// Relative to ‖w‖_F.
pub const DEFAULT_TOL: f64 = 1e-9;

/// One 2×2 block of the canonical form: `amplitude · (a⊗b − b⊗a)`.
#[derive(Debug, Clone)]
pub struct CanonicalPair {
    pub amplitude: f64,
    pub orbitals: (Array1<C64>, Array1<C64>),
}

#[derive(Debug, Clone)]
pub struct SlaterAnalysis {
    pub rank: usize,
    /// All block amplitudes, descending, including those below tolerance.
    pub amplitudes: Vec<f64>,
    /// `|w01 w23 − w02 w13 + w03 w12|`, only for four modes.
    pub pfaffian_residual: Option<f64>,
    /// Blocks above tolerance.
    pub canonical_pairs: Vec<CanonicalPair>,
}

impl SlaterAnalysis {
    pub fn is_single_determinant(&self) -> bool {
        self.rank == 1
    }
}

/// Plücker relation for a 4×4 antisymmetric matrix. It vanishes iff the
/// matrix has rank ≤ 2, i.e. Slater rank ≤ 1.
pub fn pfaffian_residual(w: &Array2<C64>) -> C64 {
    w[[0, 1]] * w[[2, 3]] - w[[0, 2]] * w[[1, 3]] + w[[0, 3]] * w[[1, 2]]
}

fn check_antisymmetric(w: &Array2<C64>) -> Result<()> {
    let n = w.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((w[[i, j]] + w[[j, i]]).norm());
        }
    }
    if dev > ANTISYMMETRY_TOL {
        return Err(Error::NotAntisymmetric { deviation: dev });
    }
    Ok(())
}

/// Slater rank and canonical decomposition of an antisymmetric amplitude
/// matrix. `tol` is relative to ‖w‖_F.
pub fn slater_rank_of(w: &Array2<C64>, tol: f64) -> Result<SlaterAnalysis> {
    if w.nrows() != w.ncols() {
        return Err(Error::DimensionMismatch {
            expected: w.nrows(),
            got: w.ncols(),
        });
    }
    check_antisymmetric(w)?;
    let n = w.nrows();
    let scale = linalg::frobenius(&w.view());
    let threshold = tol * scale;

    // eigenvalues of [[0, w], [w†, 0]] are ±σ_i
    let mut aug = Array2::zeros((2 * n, 2 * n));
    aug.slice_mut(s![..n, n..]).assign(w);
    aug.slice_mut(s![n.., ..n])
        .assign(&linalg::adjoint(&w.view()));
    let eig = linalg::eigh(&aug.view());
    let mut desc: Vec<f64> = eig
        .values
        .iter()
        .rev()
        .take(n)
        .map(|&v| v.max(0.0))
        .collect();
    desc.truncate(2 * (n / 2));
    let amplitudes: Vec<f64> = desc.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    let rank = amplitudes.iter().filter(|&&z| z > threshold).count();

    // Explicit blocks by deflation: for a unit e in the top eigenspace of
    // w†w, a = ē and b = −w e / z span one block with amplitude z.
    let mut rest = w.clone();
    let mut canonical_pairs = Vec::with_capacity(rank);
    for _ in 0..rank {
        let g = linalg::adjoint(&rest.view()).dot(&rest);
        let e = linalg::eigh(&g.view());
        let top = e.values[n - 1].max(0.0);
        let z = top.sqrt();
        if z <= threshold {
            break;
        }
        let ev = e.vector(n - 1);
        let a = ev.mapv(|x| x.conj());
        let b = rest.dot(&ev).mapv(|x| -x / z);
        let block = (outer(&a, &b) - outer(&b, &a)).mapv(|x| x * z);
        rest = rest - block;
        canonical_pairs.push(CanonicalPair {
            amplitude: z,
            orbitals: (a, b),
        });
    }

    let pfaffian_residual = (n == 4).then(|| pfaffian_residual(w).norm());
    Ok(SlaterAnalysis {
        rank,
        amplitudes,
        pfaffian_residual,
        canonical_pairs,
    })
}

pub fn slater_rank(psi: &TwoParticleWavefunction, tol: f64) -> Result<SlaterAnalysis> {
    slater_rank_of(psi.amplitudes(), tol)
}

pub fn is_single_slater(psi: &TwoParticleWavefunction, tol: f64) -> Result<bool> {
    Ok(slater_rank(psi, tol)?.is_single_determinant())
}
