//! Second-quantized fermion algebra on a fixed-particle-number sector.
//!
//! Modes are numbered `0..n_modes`. Basis states are bit patterns and a basis
//! state with occupied modes `m1 < m2 < …` stands for `c†_{m1} c†_{m2} … |0⟩`.
//! Creating or annihilating mode `m` picks up `(−1)^k`, where `k` is the number
//! of occupied modes below `m`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul};
use std::sync::Arc;

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, ONE, ZERO};

/// Tolerance on ‖M − M†‖_∞ below which an operator counts as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Largest mode count a `u64` occupation pattern can hold.
pub const MAX_MODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    /// Pauli-convention eigenvalue of s^z: +1 for up, −1 for down.
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn from_index(i: usize) -> Spin {
        if i == 0 {
            Spin::Up
        } else {
            Spin::Down
        }
    }

    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Up => "↑",
            Spin::Down => "↓",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex(pub usize);

/// Lattice label of a mode. Sites are numbered from 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiteSpin {
    pub site: usize,
    pub spin: Spin,
}

/// Bijection between lattice labels and mode indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeLayout {
    labels: Vec<SiteSpin>,
    index: HashMap<SiteSpin, usize>,
}

impl ModeLayout {
    /// `(site 0, ↑) = 0, (site 0, ↓) = 1, (site 1, ↑) = 2, …`
    pub fn canonical(n_sites: usize) -> Self {
        let labels = (0..n_sites)
            .flat_map(|site| Spin::BOTH.map(|spin| SiteSpin { site, spin }))
            .collect();
        Self::from_labels(labels).expect("canonical layout is a bijection")
    }

    /// Layout in which mode `m` carries `labels[m]`. Labels must be distinct.
    pub fn from_labels(labels: Vec<SiteSpin>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (m, l) in labels.iter().enumerate() {
            if index.insert(*l, m).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "label (site {}, {}) appears twice in mode layout",
                    l.site, l.spin
                )));
            }
        }
        Ok(Self { labels, index })
    }

    pub fn n_modes(&self) -> usize {
        self.labels.len()
    }

    pub fn mode(&self, site: usize, spin: Spin) -> Result<ModeIndex> {
        self.index
            .get(&SiteSpin { site, spin })
            .map(|&m| ModeIndex(m))
            .ok_or(Error::InvalidParameter(format!(
                "no mode for (site {site}, {spin})"
            )))
    }

    pub fn label(&self, m: ModeIndex) -> Option<SiteSpin> {
        self.labels.get(m.0).copied()
    }

    pub fn labels(&self) -> &[SiteSpin] {
        &self.labels
    }
}

/// Occupation bit pattern; bit `m` is the occupancy of mode `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState(pub u64);

impl FockState {
    pub const VACUUM: FockState = FockState(0);

    pub fn from_modes(modes: &[usize]) -> FockState {
        FockState(modes.iter().fold(0, |acc, &m| acc | (1u64 << m)))
    }

    pub fn is_occupied(self, m: ModeIndex) -> bool {
        self.0 >> m.0 & 1 == 1
    }

    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Occupied modes in ascending order.
    pub fn modes(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..MAX_MODES).filter(move |&m| bits >> m & 1 == 1)
    }

    fn sign_below(self, m: ModeIndex) -> i8 {
        let below = self.0 & ((1u64 << m.0) - 1);
        if below.count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// `c†_m |occ⟩`; `None` when the mode is already filled.
pub fn apply_creation(occ: FockState, m: ModeIndex) -> Option<(i8, FockState)> {
    if occ.is_occupied(m) {
        return None;
    }
    Some((occ.sign_below(m), FockState(occ.0 | 1u64 << m.0)))
}

/// `c_m |occ⟩`; `None` when the mode is empty.
pub fn apply_annihilation(occ: FockState, m: ModeIndex) -> Option<(i8, FockState)> {
    if !occ.is_occupied(m) {
        return None;
    }
    Some((occ.sign_below(m), FockState(occ.0 & !(1u64 << m.0))))
}

/// All occupation patterns with `n_particles` of `n_modes` modes filled,
/// in ascending numeric order.
#[derive(Debug, Clone)]
pub struct FockBasis {
    n_modes: usize,
    n_particles: usize,
    states: Vec<FockState>,
    lookup: HashMap<FockState, usize>,
}

impl PartialEq for FockBasis {
    fn eq(&self, other: &Self) -> bool {
        self.n_modes == other.n_modes
            && self.n_particles == other.n_particles
            && self.states == other.states
    }
}

impl FockBasis {
    pub fn new(n_modes: usize, n_particles: usize) -> Result<Arc<Self>> {
        if n_modes == 0 || n_modes > MAX_MODES || n_particles > n_modes {
            return Err(Error::InvalidSector {
                n_modes,
                n_particles,
            });
        }
        let mut states = Vec::new();
        // Gosper's hack walks fixed-popcount patterns in increasing order.
        if n_particles == 0 {
            states.push(FockState::VACUUM);
        } else {
            let limit: u128 = 1u128 << n_modes;
            let mut v: u128 = (1u128 << n_particles) - 1;
            while v < limit {
                states.push(FockState(v as u64));
                let c = v & v.wrapping_neg();
                let r = v + c;
                v = (((r ^ v) >> 2) / c) | r;
            }
        }
        let lookup = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Ok(Arc::new(Self {
            n_modes,
            n_particles,
            states,
            lookup,
        }))
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> FockState {
        self.states[i]
    }

    pub fn index_of(&self, occ: FockState) -> Option<usize> {
        self.lookup.get(&occ).copied()
    }

    fn check_mode(&self, m: ModeIndex) -> Result<()> {
        if m.0 >= self.n_modes {
            Err(Error::ModeOutOfRange {
                mode: m.0,
                n_modes: self.n_modes,
            })
        } else {
            Ok(())
        }
    }
}

fn same_basis(a: &Arc<FockBasis>, b: &Arc<FockBasis>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Normalized (or normalizable) amplitude vector over a sector.
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: Arc<FockBasis>,
    amplitudes: Array1<C64>,
}

impl StateVector {
    pub fn new(basis: Arc<FockBasis>, amplitudes: Array1<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: amplitudes.len(),
            });
        }
        Ok(Self { basis, amplitudes })
    }

    /// The basis state `|occ⟩` with unit amplitude.
    pub fn basis_state(basis: Arc<FockBasis>, occ: FockState) -> Result<Self> {
        let idx = basis.index_of(occ).ok_or(Error::WrongParticleNumber {
            expected: basis.n_particles(),
            got: occ.count(),
        })?;
        let mut amplitudes = Array1::zeros(basis.dim());
        amplitudes[idx] = ONE;
        Ok(Self { basis, amplitudes })
    }

    /// `∏ (Σ_m coeffs[k][m] c†_m) |0⟩` with the leftmost factor applied last.
    ///
    /// This is how determinants such as `a†_↑ a†_↓ |0⟩` for a general orbital
    /// `a†_σ = Σ_m u_m c†_m` are expanded into the occupation basis.
    pub fn from_creation_product(basis: Arc<FockBasis>, orbitals: &[Array1<C64>]) -> Result<Self> {
        if orbitals.len() != basis.n_particles() {
            return Err(Error::WrongParticleNumber {
                expected: basis.n_particles(),
                got: orbitals.len(),
            });
        }
        let mut terms: HashMap<FockState, C64> = HashMap::from([(FockState::VACUUM, ONE)]);
        for orb in orbitals.iter().rev() {
            if orb.len() != basis.n_modes() {
                return Err(Error::DimensionMismatch {
                    expected: basis.n_modes(),
                    got: orb.len(),
                });
            }
            let mut next: HashMap<FockState, C64> = HashMap::new();
            for (&occ, &amp) in &terms {
                for (m, &coef) in orb.iter().enumerate() {
                    if coef == ZERO {
                        continue;
                    }
                    if let Some((sign, out)) = apply_creation(occ, ModeIndex(m)) {
                        *next.entry(out).or_insert(ZERO) += amp * coef * f64::from(sign);
                    }
                }
            }
            terms = next;
        }
        let mut amplitudes = Array1::zeros(basis.dim());
        for (occ, amp) in terms {
            let idx = basis.index_of(occ).expect("particle number is conserved");
            amplitudes[idx] += amp;
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        linalg::vec_norm(&self.amplitudes.view())
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::NotNormalized { norm: 0.0 });
        }
        self.amplitudes.mapv_inplace(|z| z / n);
        Ok(self)
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if !same_basis(&self.basis, &other.basis) {
            return Err(Error::BasisMismatch);
        }
        Ok(linalg::inner(
            &self.amplitudes.view(),
            &other.amplitudes.view(),
        ))
    }
}

/// Dense operator on a sector. The Hermitian flag is always recomputed from
/// the matrix.
#[derive(Debug, Clone)]
pub struct Operator {
    basis: Arc<FockBasis>,
    matrix: Array2<C64>,
    hermitian: bool,
}

impl Operator {
    pub fn from_matrix(basis: Arc<FockBasis>, matrix: Array2<C64>) -> Result<Self> {
        let d = basis.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        let hermitian = linalg::hermitian_deviation(&matrix.view()) <= HERMITIAN_TOL;
        Ok(Self {
            basis,
            matrix,
            hermitian,
        })
    }

    pub fn zero(basis: Arc<FockBasis>) -> Self {
        let d = basis.dim();
        Self::from_matrix(basis, Array2::zeros((d, d))).expect("shape matches")
    }

    pub fn identity(basis: Arc<FockBasis>) -> Self {
        let d = basis.dim();
        Self::from_matrix(basis, Array2::eye(d)).expect("shape matches")
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn frobenius_norm(&self) -> f64 {
        linalg::frobenius(&self.matrix.view())
    }

    fn check_basis(&self, other: &Arc<FockBasis>) -> Result<()> {
        if same_basis(&self.basis, other) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    pub fn add(&self, rhs: &Operator) -> Result<Operator> {
        self.check_basis(&rhs.basis)?;
        Operator::from_matrix(self.basis.clone(), &self.matrix + &rhs.matrix)
    }

    pub fn mul(&self, rhs: &Operator) -> Result<Operator> {
        self.check_basis(&rhs.basis)?;
        Operator::from_matrix(self.basis.clone(), self.matrix.dot(&rhs.matrix))
    }

    pub fn scale(&self, factor: C64) -> Operator {
        Operator::from_matrix(self.basis.clone(), self.matrix.mapv(|z| z * factor))
            .expect("shape unchanged")
    }

    pub fn adjoint(&self) -> Operator {
        Operator::from_matrix(self.basis.clone(), linalg::adjoint(&self.matrix.view()))
            .expect("shape unchanged")
    }

    pub fn apply(&self, psi: &StateVector) -> Result<Array1<C64>> {
        self.check_basis(&psi.basis)?;
        Ok(self.matrix.dot(&psi.amplitudes))
    }

    /// Conjugation `P† M P` by a permutation of basis states, `perm[i]` being
    /// the image of state `i`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Operator> {
        let d = self.basis.dim();
        if perm.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: perm.len(),
            });
        }
        let m = Array2::from_shape_fn((d, d), |(i, j)| self.matrix[[perm[i], perm[j]]]);
        Operator::from_matrix(self.basis.clone(), m)
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator::add(self, rhs).expect("operators on the same basis")
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator::mul(self, rhs).expect("operators on the same basis")
    }
}

/// Matrix of `c†_a c_b` on the sector. `a == b` gives the number operator.
pub fn bilinear(a: ModeIndex, b: ModeIndex, basis: &Arc<FockBasis>) -> Result<Operator> {
    basis.check_mode(a)?;
    basis.check_mode(b)?;
    if basis.n_particles() == 0 {
        return Err(Error::WrongParticleNumber {
            expected: 1,
            got: 0,
        });
    }
    let d = basis.dim();
    let mut m = Array2::zeros((d, d));
    for (j, &occ) in basis.states().iter().enumerate() {
        let Some((s1, mid)) = apply_annihilation(occ, b) else {
            continue;
        };
        let Some((s2, out)) = apply_creation(mid, a) else {
            continue;
        };
        let i = basis.index_of(out).expect("number conserving");
        m[[i, j]] += C64::from(f64::from(s1 * s2));
    }
    Operator::from_matrix(basis.clone(), m)
}

/// `Σ_{ab} h_ab c†_a c_b` for a single-particle matrix `h`.
pub fn one_body(h: &Array2<C64>, basis: &Arc<FockBasis>) -> Result<Operator> {
    let n = basis.n_modes();
    if h.nrows() != n || h.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.nrows(),
        });
    }
    let mut acc = Operator::zero(basis.clone());
    for a in 0..n {
        for b in 0..n {
            if h[[a, b]] != ZERO {
                let term = bilinear(ModeIndex(a), ModeIndex(b), basis)?.scale(h[[a, b]]);
                acc = acc.add(&term)?;
            }
        }
    }
    Ok(acc)
}

pub fn number(m: ModeIndex, basis: &Arc<FockBasis>) -> Result<Operator> {
    bilinear(m, m, basis)
}

/// `⟨ψ|A|ψ⟩`.
pub fn expectation(psi: &StateVector, a: &Operator) -> Result<C64> {
    a.check_basis(&psi.basis)?;
    Ok(linalg::quadratic_form(
        &a.matrix.view(),
        &psi.amplitudes.view(),
    ))
}
