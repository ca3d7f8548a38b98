//! Two fermions in the labeled-particle (first-quantized) picture.
//!
//! A two-particle state is stored as the amplitude matrix `w[a][b] = Ψ(ξ₁=a, ξ₂=b)`
//! over an orthonormal single-particle basis. Fermionic states satisfy
//! `w = −wᵀ` and are normalized to `‖w‖_F = 1`. The occupation-basis state
//! `Σ_{a<b} c_ab c†_a c†_b |0⟩` corresponds to `w_ab = c_ab/√2 = −w_ba`.
//!
//! Observables acting on labeled particles are sums of product terms
//! `κ · A ⊗ B` (A on particle 1, B on particle 2) and are evaluated in the full
//! labeled tensor space, so operators such as `s₁ᶻ ⊗ 1` that are not
//! permutation symmetric still have well-defined expectations.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use ndarray::{arr2, Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, StateVector};
use crate::linalg::{self, ONE, ZERO};

pub const ANTISYMMETRY_TOL: f64 = 1e-12;
pub const ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingleParticleSpace {
    dim: usize,
    /// Number of orbitals when the space factorizes as orbital ⊗ spin-½.
    orbitals: Option<usize>,
}

impl SingleParticleSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "single-particle space needs dim >= 2, got {dim}"
            )));
        }
        Ok(Self {
            dim,
            orbitals: None,
        })
    }

    /// `n_orbitals × 2` spin orbitals, indexed `2·orbital + spin`.
    pub fn spin_orbitals(n_orbitals: usize) -> Result<Self> {
        if n_orbitals == 0 {
            return Err(Error::InvalidParameter("need at least one orbital".into()));
        }
        Ok(Self {
            dim: 2 * n_orbitals,
            orbitals: Some(n_orbitals),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn orbitals(&self) -> Option<usize> {
        self.orbitals
    }
}

/// Antisymmetric two-particle amplitude matrix.
#[derive(Debug, Clone)]
pub struct TwoParticleWavefunction {
    space: SingleParticleSpace,
    w: Array2<C64>,
}

impl TwoParticleWavefunction {
    /// Wraps `w` after checking antisymmetry and unit Frobenius norm.
    pub fn new(space: SingleParticleSpace, w: Array2<C64>) -> Result<Self> {
        let d = space.dim();
        if w.nrows() != d || w.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: w.nrows().max(w.ncols()),
            });
        }
        let dev = antisymmetry_deviation(&w);
        if dev > ANTISYMMETRY_TOL {
            return Err(Error::NotAntisymmetric { deviation: dev });
        }
        let norm = linalg::frobenius(&w.view());
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { space, w })
    }

    pub fn space(&self) -> SingleParticleSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn amplitudes(&self) -> &Array2<C64> {
        &self.w
    }

    pub fn norm(&self) -> f64 {
        linalg::frobenius(&self.w.view())
    }

    /// `⟨self|other⟩ = Σ conj(w_ab) v_ab`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .w
            .iter()
            .zip(other.w.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// One-body reduced density matrix `ρ = w w†`, trace 1.
    pub fn one_body_density(&self) -> Array2<C64> {
        self.w.dot(&linalg::adjoint(&self.w.view()))
    }

    /// Single-particle change of basis `w → U w Uᵀ`.
    pub fn transformed(&self, u: &Array2<C64>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.nrows(),
            });
        }
        Ok(Self {
            space: self.space,
            w: u.dot(&self.w).dot(&u.t()),
        })
    }

    /// Inverse of [`from_second_quantized`] onto the given two-particle sector.
    pub fn to_second_quantized(&self, basis: &Arc<FockBasis>) -> Result<StateVector> {
        check_pair_basis(basis, self.dim())?;
        let amps = basis
            .states()
            .iter()
            .map(|occ| {
                let (a, b) = pair_modes(occ.0);
                self.w[[a, b]] * std::f64::consts::SQRT_2
            })
            .collect();
        StateVector::new(basis.clone(), amps)
    }
}

fn antisymmetry_deviation(w: &Array2<C64>) -> f64 {
    let n = w.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((w[[i, j]] + w[[j, i]]).norm());
        }
    }
    dev
}

fn pair_modes(bits: u64) -> (usize, usize) {
    let a = bits.trailing_zeros() as usize;
    let b = (bits & !(1u64 << a)).trailing_zeros() as usize;
    (a, b)
}

fn check_pair_basis(basis: &FockBasis, dim: usize) -> Result<()> {
    if basis.n_particles() != 2 {
        return Err(Error::WrongParticleNumber {
            expected: 2,
            got: basis.n_particles(),
        });
    }
    if basis.n_modes() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: basis.n_modes(),
        });
    }
    Ok(())
}

/// `w = f − fᵀ`, normalized.
pub fn antisymmetrize(
    space: SingleParticleSpace,
    f: &Array2<C64>,
) -> Result<TwoParticleWavefunction> {
    let d = space.dim();
    if f.nrows() != d || f.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: f.nrows().max(f.ncols()),
        });
    }
    let w = f - &f.t();
    let norm = linalg::frobenius(&w.view());
    if norm < 1e-12 {
        return Err(Error::ZeroAfterAntisymmetrization);
    }
    Ok(TwoParticleWavefunction {
        space,
        w: w.mapv(|z| z / norm),
    })
}

pub fn outer(a: &Array1<C64>, b: &Array1<C64>) -> Array2<C64> {
    Array2::from_shape_fn((a.len(), b.len()), |(i, j)| a[i] * b[j])
}

/// `(a⊗b − b⊗a)/√2` for orthonormal orbitals `a`, `b`.
pub fn slater_determinant(
    space: SingleParticleSpace,
    a: &Array1<C64>,
    b: &Array1<C64>,
) -> Result<TwoParticleWavefunction> {
    let d = space.dim();
    for v in [a, b] {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: v.len(),
            });
        }
    }
    let overlap = linalg::inner(&a.view(), &b.view()).norm();
    let na = linalg::vec_norm(&a.view());
    let nb = linalg::vec_norm(&b.view());
    let worst = overlap.max((na - 1.0).abs()).max((nb - 1.0).abs());
    if worst > ORTHONORMAL_TOL {
        return Err(Error::NonOrthonormalOrbitals { overlap: worst });
    }
    let w = (outer(a, b) - outer(b, a)).mapv(|z| z * FRAC_1_SQRT_2);
    Ok(TwoParticleWavefunction { space, w })
}

/// Spin singlet `(↑↓ − ↓↑)/√2` on a bare spin-½ pair.
pub fn singlet() -> TwoParticleWavefunction {
    let h = C64::from(FRAC_1_SQRT_2);
    TwoParticleWavefunction {
        space: SingleParticleSpace::new(2).expect("dim 2"),
        w: arr2(&[[ZERO, h], [-h, ZERO]]),
    }
}

/// Spatial amplitude `s` (orbital × orbital, symmetric) times the singlet,
/// on a spin-orbital space indexed `2·orbital + spin`.
pub fn spatial_times_singlet(spatial: &Array2<C64>) -> Result<TwoParticleWavefunction> {
    let n = spatial.nrows();
    let space = SingleParticleSpace::spin_orbitals(n)?;
    let chi = singlet();
    let w = Array2::from_shape_fn((2 * n, 2 * n), |(i, j)| {
        spatial[[i / 2, j / 2]] * chi.w[[i % 2, j % 2]]
    });
    TwoParticleWavefunction::new(space, w)
}

/// Maps `Σ_{a<b} c_ab c†_a c†_b |0⟩` to `w_ab = c_ab/√2`, `w_ba = −c_ab/√2`.
pub fn from_second_quantized(psi: &StateVector) -> Result<TwoParticleWavefunction> {
    let basis = psi.basis();
    if basis.n_particles() != 2 {
        return Err(Error::WrongParticleNumber {
            expected: 2,
            got: basis.n_particles(),
        });
    }
    let d = basis.n_modes();
    let space = SingleParticleSpace::new(d)?;
    let mut w = Array2::zeros((d, d));
    for (occ, &amp) in basis.states().iter().zip(psi.amplitudes().iter()) {
        let (a, b) = pair_modes(occ.0);
        w[[a, b]] = amp * FRAC_1_SQRT_2;
        w[[b, a]] = -amp * FRAC_1_SQRT_2;
    }
    Ok(TwoParticleWavefunction { space, w })
}

/// Image of the occupation basis state `index` of a two-particle sector.
fn sector_basis_pairs(basis: &FockBasis) -> Vec<(usize, usize)> {
    basis.states().iter().map(|occ| pair_modes(occ.0)).collect()
}

/// Pauli matrices with eigenvalues ±1.
pub mod pauli {
    use super::*;

    pub fn x() -> Array2<C64> {
        arr2(&[[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn y() -> Array2<C64> {
        let i = C64::i();
        arr2(&[[ZERO, -i], [i, ZERO]])
    }

    pub fn z() -> Array2<C64> {
        arr2(&[[ONE, ZERO], [ZERO, -ONE]])
    }

    /// `1_orbital ⊗ σ` on `n_orbitals` spin orbitals indexed `2·orbital + spin`.
    pub fn on_spin_orbitals(sigma: &Array2<C64>, n_orbitals: usize) -> Array2<C64> {
        let d = 2 * n_orbitals;
        Array2::from_shape_fn((d, d), |(i, j)| {
            if i / 2 == j / 2 {
                sigma[[i % 2, j % 2]]
            } else {
                ZERO
            }
        })
    }
}

/// One term `κ · A ⊗ B` of a labeled two-particle observable.
#[derive(Debug, Clone)]
pub struct ProductTerm {
    pub coeff: C64,
    pub first: Array2<C64>,
    pub second: Array2<C64>,
}

/// Operator on the labeled two-particle space, `Σ_k κ_k A_k ⊗ B_k`.
#[derive(Debug, Clone)]
pub struct ParticleObservable {
    dim: usize,
    terms: Vec<ProductTerm>,
}

impl ParticleObservable {
    fn check_square(m: &Array2<C64>, dim: usize) -> Result<()> {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: m.nrows().max(m.ncols()),
            });
        }
        Ok(())
    }

    /// `A₁ B₂ = A ⊗ B`.
    pub fn product(a: Array2<C64>, b: Array2<C64>) -> Result<Self> {
        let dim = a.nrows();
        Self::check_square(&a, dim)?;
        Self::check_square(&b, dim)?;
        Ok(Self {
            dim,
            terms: vec![ProductTerm {
                coeff: ONE,
                first: a,
                second: b,
            }],
        })
    }

    /// `M ⊗ 1`.
    pub fn particle1(m: Array2<C64>) -> Result<Self> {
        let id = Array2::eye(m.nrows());
        Self::product(m, id)
    }

    /// `1 ⊗ M`.
    pub fn particle2(m: Array2<C64>) -> Result<Self> {
        let id = Array2::eye(m.nrows());
        Self::product(id, m)
    }

    /// `M ⊗ 1 + 1 ⊗ M`, symmetric under particle exchange.
    pub fn one_body_sum(m: Array2<C64>) -> Result<Self> {
        Self::particle1(m.clone())?.plus(&Self::particle2(m)?)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            terms: vec![ProductTerm {
                coeff: ONE,
                first: Array2::eye(dim),
                second: Array2::eye(dim),
            }],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    pub fn plus(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        Ok(Self {
            dim: self.dim,
            terms,
        })
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| ProductTerm {
                    coeff: t.coeff * factor,
                    ..t.clone()
                })
                .collect(),
        }
    }

    /// Operator product: `(A⊗B)(C⊗D) = AC ⊗ BD`, term by term.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for l in &self.terms {
            for r in &rhs.terms {
                terms.push(ProductTerm {
                    coeff: l.coeff * r.coeff,
                    first: l.first.dot(&r.first),
                    second: l.second.dot(&r.second),
                });
            }
        }
        Ok(Self {
            dim: self.dim,
            terms,
        })
    }

    /// Conjugation by the particle exchange `P(a⊗b) = b⊗a`.
    pub fn exchanged(&self) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| ProductTerm {
                    coeff: t.coeff,
                    first: t.second.clone(),
                    second: t.first.clone(),
                })
                .collect(),
        }
    }

    /// Dense `dim² × dim²` matrix, row index `a·dim + b`.
    pub fn full_matrix(&self) -> Array2<C64> {
        let d = self.dim;
        let mut m = Array2::zeros((d * d, d * d));
        for t in &self.terms {
            for a in 0..d {
                for a2 in 0..d {
                    let fa = t.coeff * t.first[[a, a2]];
                    if fa == ZERO {
                        continue;
                    }
                    for b in 0..d {
                        for b2 in 0..d {
                            m[[a * d + b, a2 * d + b2]] += fa * t.second[[b, b2]];
                        }
                    }
                }
            }
        }
        m
    }

    pub fn hermitian_deviation(&self) -> f64 {
        linalg::hermitian_deviation(&self.full_matrix().view())
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= crate::fock::HERMITIAN_TOL
    }

    /// Upper bound on the Frobenius norm: `Σ |κ| ‖A‖_F ‖B‖_F`.
    pub fn norm_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.coeff.norm()
                    * linalg::frobenius(&t.first.view())
                    * linalg::frobenius(&t.second.view())
            })
            .sum()
    }

    /// Image `O|Ψ⟩` as a labeled amplitude matrix, `Σ κ A w Bᵀ`.
    pub fn apply(&self, psi: &TwoParticleWavefunction) -> Result<Array2<C64>> {
        if psi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: psi.dim(),
            });
        }
        let mut out = Array2::zeros((self.dim, self.dim));
        for t in &self.terms {
            let img = t.first.dot(&psi.w).dot(&t.second.t());
            out.scaled_add(t.coeff, &img);
        }
        Ok(out)
    }

    /// Matrix of the observable compressed onto the antisymmetric two-particle
    /// sector, in the occupation basis of `basis` (via the isometry of
    /// [`from_second_quantized`]).
    pub fn sector_matrix(&self, basis: &FockBasis) -> Result<Array2<C64>> {
        check_pair_basis(basis, self.dim)?;
        let pairs = sector_basis_pairs(basis);
        let n = pairs.len();
        // basis state {a<b} has w_ab = +1/√2, w_ba = −1/√2
        let entries = |&(a, b): &(usize, usize)| [(a, b, 0.5f64.sqrt()), (b, a, -(0.5f64.sqrt()))];
        let mut m = Array2::zeros((n, n));
        for (i, pi) in pairs.iter().enumerate() {
            for (j, pj) in pairs.iter().enumerate() {
                let mut acc = ZERO;
                for t in &self.terms {
                    let mut s = ZERO;
                    for (p, q, x) in entries(pi) {
                        for (p2, q2, y) in entries(pj) {
                            s += t.first[[p, p2]] * t.second[[q, q2]] * (x * y);
                        }
                    }
                    acc += t.coeff * s;
                }
                m[[i, j]] = acc;
            }
        }
        Ok(m)
    }
}

/// `⟨Ψ|O|Ψ⟩` in the full labeled tensor space.
pub fn particle_expectation(
    psi: &TwoParticleWavefunction,
    obs: &ParticleObservable,
) -> Result<C64> {
    let img = obs.apply(psi)?;
    Ok(psi
        .w
        .iter()
        .zip(img.iter())
        .map(|(a, b)| a.conj() * b)
        .sum())
}
