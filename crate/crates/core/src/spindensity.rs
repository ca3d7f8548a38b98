//! Spin density on a one-dimensional box grid and the two-detector
//! coincidence correlator.
//!
//! Spin orbitals are indexed `2·cell + spin`. A grid orbital `u` with
//! `Σ_k |u(k)|² Δ = 1` becomes the mode vector `u(k)√Δ`. Position delta
//! functions become cell indicators divided by `Δ`, so
//! `s(R_k) = Σ_i s^z_i 1[r_i ∈ k] / Δ`.

use std::sync::Arc;

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::firstq::{self, ParticleObservable, SingleParticleSpace, TwoParticleWavefunction};
use crate::fock::{self, FockBasis, ModeIndex, Operator, Spin};
use crate::linalg::{self, ZERO};

/// Joint density below which a detector pair has no support.
pub const MIN_DENSITY: f64 = 1e-14;
pub const DEFAULT_CELLS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    n_cells: usize,
    width: f64,
}

impl SpatialGrid {
    pub fn new(n_cells: usize, width: f64) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2 cells, got {n_cells}"
            )));
        }
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cell width must be > 0, got {width}"
            )));
        }
        Ok(Self { n_cells, width })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn n_modes(&self) -> usize {
        2 * self.n_cells
    }

    pub fn center(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.width
    }

    pub fn space(&self) -> SingleParticleSpace {
        SingleParticleSpace::spin_orbitals(self.n_cells).expect("n_cells >= 2")
    }

    pub fn mode(&self, cell: usize, spin: Spin) -> usize {
        2 * cell + spin.index()
    }

    fn check_cell(&self, cell: usize) -> Result<()> {
        if cell >= self.n_cells {
            Err(Error::CellOutOfRange {
                cell,
                n_cells: self.n_cells,
            })
        } else {
            Ok(())
        }
    }
}

/// Orbital sampled on the grid, normalized with the cell width.
#[derive(Debug, Clone)]
pub struct GridOrbital {
    grid: SpatialGrid,
    values: Array1<C64>,
}

impl GridOrbital {
    pub fn new(grid: SpatialGrid, values: Array1<C64>) -> Result<Self> {
        if values.len() != grid.n_cells() {
            return Err(Error::DimensionMismatch {
                expected: grid.n_cells(),
                got: values.len(),
            });
        }
        let norm = (values.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.width()).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { grid, values })
    }

    /// Rescales arbitrary samples to unit norm.
    pub fn normalized(grid: SpatialGrid, values: Array1<C64>) -> Result<Self> {
        let norm = (values.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.width()).sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(grid, values.mapv(|z| z / norm))
    }

    pub fn gaussian(grid: SpatialGrid, center: f64, sigma: f64) -> Result<Self> {
        let values = Array1::from_shape_fn(grid.n_cells(), |k| {
            let d = (grid.center(k) - center) / sigma;
            C64::from((-0.5 * d * d).exp())
        });
        Self::normalized(grid, values)
    }

    pub fn grid(&self) -> SpatialGrid {
        self.grid
    }

    pub fn values(&self) -> &Array1<C64> {
        &self.values
    }

    pub fn overlap(&self, other: &GridOrbital) -> C64 {
        linalg::inner(&self.values.view(), &other.values.view()) * self.grid.width()
    }

    /// Unit mode vector for this orbital carrying `spin`.
    pub fn spin_orbital(&self, spin: Spin) -> Array1<C64> {
        let sq = self.grid.width().sqrt();
        let mut v = Array1::zeros(self.grid.n_modes());
        for (k, &u) in self.values.iter().enumerate() {
            v[self.grid.mode(k, spin)] = u * sq;
        }
        v
    }
}

/// Bonding and antibonding orbitals `(g₁ ± g₂)/norm` built from two mirror
/// image Gaussians on either side of the grid center. Mirror symmetry makes
/// them orthogonal.
pub fn two_site_orbitals(
    grid: SpatialGrid,
    separation: f64,
    sigma: f64,
) -> Result<(GridOrbital, GridOrbital)> {
    let mid = 0.5 * grid.n_cells() as f64 * grid.width();
    let left = GridOrbital::gaussian(grid, mid - 0.5 * separation, sigma)?;
    let right = GridOrbital::gaussian(grid, mid + 0.5 * separation, sigma)?;
    let bond = GridOrbital::normalized(grid, left.values() + right.values())?;
    let anti = GridOrbital::normalized(grid, left.values() - right.values())?;
    Ok((bond, anti))
}

/// Default setup: bonding orbital over two Gaussian sites on `n_cells` cells
/// of unit width.
pub fn default_bonding_orbital(n_cells: usize) -> Result<GridOrbital> {
    let grid = SpatialGrid::new(n_cells, 1.0)?;
    let sep = 0.45 * n_cells as f64;
    let sigma = 0.2 * n_cells as f64;
    Ok(two_site_orbitals(grid, sep, sigma)?.0)
}

/// Both electrons in orbital `u` with opposite spins: `u(r₁)u(r₂)χ(s₁,s₂)`.
pub fn doubly_occupied(u: &GridOrbital) -> Result<TwoParticleWavefunction> {
    firstq::slater_determinant(
        u.grid().space(),
        &u.spin_orbital(Spin::Up),
        &u.spin_orbital(Spin::Down),
    )
}

/// Same-spin determinant of two orthogonal orbitals: antisymmetric space,
/// `↑↑` spin.
pub fn parallel_spin_pair(u: &GridOrbital, v: &GridOrbital) -> Result<TwoParticleWavefunction> {
    firstq::slater_determinant(
        u.grid().space(),
        &u.spin_orbital(Spin::Up),
        &v.spin_orbital(Spin::Up),
    )
}

/// Single-particle `s^z 1[r ∈ k] / Δ`.
pub fn cell_spin_matrix(grid: &SpatialGrid, k: usize) -> Result<Array2<C64>> {
    grid.check_cell(k)?;
    let n = grid.n_modes();
    let mut m = Array2::zeros((n, n));
    for spin in Spin::BOTH {
        let i = grid.mode(k, spin);
        m[[i, i]] = C64::from(spin.sign() / grid.width());
    }
    Ok(m)
}

/// Single-particle `1[r ∈ k] / Δ`.
pub fn cell_density_matrix(grid: &SpatialGrid, k: usize) -> Result<Array2<C64>> {
    grid.check_cell(k)?;
    let n = grid.n_modes();
    let mut m = Array2::zeros((n, n));
    for spin in Spin::BOTH {
        let i = grid.mode(k, spin);
        m[[i, i]] = C64::from(1.0 / grid.width());
    }
    Ok(m)
}

/// `s(R_k)` on labeled particles, `Σ_i s^z_i 1[r_i ∈ k]/Δ`.
pub fn spin_density_op(grid: &SpatialGrid, k: usize) -> Result<ParticleObservable> {
    ParticleObservable::one_body_sum(cell_spin_matrix(grid, k)?)
}

/// `s(R_k) = (ψ̂†_↑ψ̂_↑ − ψ̂†_↓ψ̂_↓)(R_k)` with `ψ̂_σ(R_k) = c_{kσ}/√Δ`, on the
/// two-particle sector.
pub fn spin_density_field(
    grid: &SpatialGrid,
    k: usize,
    basis: &Arc<FockBasis>,
) -> Result<Operator> {
    grid.check_cell(k)?;
    let mut op = Operator::zero(basis.clone());
    for spin in Spin::BOTH {
        let m = ModeIndex(grid.mode(k, spin));
        let n = fock::number(m, basis)?.scale(C64::from(spin.sign() / grid.width()));
        op = op.add(&n)?;
    }
    Ok(op)
}

/// Total `Σ_i s^z_i` on labeled particles.
pub fn total_spin_z(grid: &SpatialGrid) -> Result<ParticleObservable> {
    let n = grid.n_modes();
    let sz = Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            C64::from(Spin::from_index(i % 2).sign())
        } else {
            ZERO
        }
    });
    ParticleObservable::one_body_sum(sz)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coincidence {
    pub k: usize,
    pub k_prime: usize,
    /// Cross-particle part of `⟨s(R_k) s(R_k')⟩`.
    pub numerator: f64,
    /// Cross-particle joint number density at `(R_k, R_k')`.
    pub denominator: f64,
    pub conditional: f64,
}

fn cross_term(a: Array2<C64>, b: Array2<C64>) -> Result<ParticleObservable> {
    let ab = ParticleObservable::product(a.clone(), b.clone())?;
    ab.plus(&ParticleObservable::product(b, a)?)
}

/// Spin-spin average at two detector cells, conditional on one particle in
/// each: the `i ≠ j` terms of `s(R)s(R')` divided by the same terms with
/// spins replaced by 1.
pub fn coincidence_correlator(
    grid: &SpatialGrid,
    psi: &TwoParticleWavefunction,
    k: usize,
    k_prime: usize,
) -> Result<Coincidence> {
    if k == k_prime {
        return Err(Error::InvalidParameter(format!(
            "detector cells must differ, got {k} twice"
        )));
    }
    if psi.dim() != grid.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: grid.n_modes(),
            got: psi.dim(),
        });
    }
    let spin = cross_term(cell_spin_matrix(grid, k)?, cell_spin_matrix(grid, k_prime)?)?;
    let dens = cross_term(
        cell_density_matrix(grid, k)?,
        cell_density_matrix(grid, k_prime)?,
    )?;
    let numerator = firstq::particle_expectation(psi, &spin)?.re;
    let denominator = firstq::particle_expectation(psi, &dens)?.re;
    if denominator < MIN_DENSITY {
        return Err(Error::ZeroDensity {
            k,
            k_prime,
            density: denominator,
        });
    }
    Ok(Coincidence {
        k,
        k_prime,
        numerator,
        denominator,
        conditional: numerator / denominator,
    })
}

#[derive(Debug, Clone)]
pub struct CoincidenceTable {
    pub rows: Vec<Coincidence>,
    /// Pairs skipped for lack of joint density.
    pub skipped: Vec<(usize, usize)>,
}

impl CoincidenceTable {
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .rows
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                (lo.min(r.conditional), hi.max(r.conditional))
            });
        if self.rows.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    pub fn mean(&self) -> f64 {
        self.rows.iter().map(|r| r.conditional).sum::<f64>() / self.rows.len().max(1) as f64
    }
}

/// Conditional correlator over all ordered pairs `k ≠ k'`.
pub fn coincidence_table(
    grid: &SpatialGrid,
    psi: &TwoParticleWavefunction,
) -> Result<CoincidenceTable> {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for k in 0..grid.n_cells() {
        for kp in 0..grid.n_cells() {
            if k == kp {
                continue;
            }
            match coincidence_correlator(grid, psi, k, kp) {
                Ok(r) => rows.push(r),
                Err(Error::ZeroDensity { .. }) => skipped.push((k, kp)),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(CoincidenceTable { rows, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> SpatialGrid {
        SpatialGrid::new(n, 0.5).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(SpatialGrid::new(1, 1.0).is_err());
        assert!(SpatialGrid::new(4, 0.0).is_err());
        assert!(matches!(
            spin_density_op(&grid(4), 4),
            Err(Error::CellOutOfRange {
                cell: 4,
                n_cells: 4
            })
        ));
    }

    #[test]
    fn cells_sum_to_total_spin() {
        let g = grid(5);
        let mut acc: Option<ParticleObservable> = None;
        for k in 0..5 {
            let s = spin_density_op(&g, k).unwrap().scaled(C64::from(g.width()));
            acc = Some(match acc {
                None => s,
                Some(a) => a.plus(&s).unwrap(),
            });
        }
        let diff = acc.unwrap().full_matrix() - total_spin_z(&g).unwrap().full_matrix();
        assert!(diff.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn spin_density_commutes_with_exchange() {
        let g = grid(4);
        for k in 0..4 {
            let s = spin_density_op(&g, k).unwrap();
            let diff = s.full_matrix() - s.exchanged().full_matrix();
            assert!(diff.iter().all(|z| z.norm() < 1e-15));
        }
    }

    #[test]
    fn field_and_particle_constructions_agree() {
        let g = grid(6);
        let basis = FockBasis::new(g.n_modes(), 2).unwrap();
        for k in 0..6 {
            let field = spin_density_field(&g, k, &basis).unwrap();
            let particle = spin_density_op(&g, k)
                .unwrap()
                .sector_matrix(&basis)
                .unwrap();
            let diff = field.matrix() - &particle;
            assert!(diff.iter().all(|z| z.norm() <= 1e-12));
        }
    }

    #[test]
    fn doubly_occupied_state_has_zero_local_spin() {
        let u = default_bonding_orbital(DEFAULT_CELLS).unwrap();
        let d0 = doubly_occupied(&u).unwrap();
        for k in 0..DEFAULT_CELLS {
            let v =
                firstq::particle_expectation(&d0, &spin_density_op(&u.grid(), k).unwrap()).unwrap();
            assert!(v.norm() < 1e-14);
        }
    }

    #[test]
    fn singlet_coincidences_are_minus_one() {
        let u = default_bonding_orbital(DEFAULT_CELLS).unwrap();
        let d0 = doubly_occupied(&u).unwrap();
        let t = coincidence_table(&u.grid(), &d0).unwrap();
        assert!(t.skipped.is_empty());
        assert_eq!(t.rows.len(), DEFAULT_CELLS * (DEFAULT_CELLS - 1));
        for r in &t.rows {
            assert!((r.conditional + 1.0).abs() < 1e-10);
        }
        assert!(t.spread() <= 1e-10);
    }

    #[test]
    fn parallel_spin_coincidences_are_plus_one() {
        let g = SpatialGrid::new(12, 1.0).unwrap();
        let (bond, anti) = two_site_orbitals(g, 5.0, 2.0).unwrap();
        assert!(bond.overlap(&anti).norm() < 1e-14);
        let trip = parallel_spin_pair(&bond, &anti).unwrap();
        let t = coincidence_table(&g, &trip).unwrap();
        assert!(!t.rows.is_empty());
        for r in &t.rows {
            assert!((r.conditional - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn node_gives_zero_density() {
        let g = SpatialGrid::new(4, 1.0).unwrap();
        let u = GridOrbital::normalized(
            g,
            Array1::from(vec![
                C64::from(1.0),
                C64::from(0.0),
                C64::from(1.0),
                C64::from(1.0),
            ]),
        )
        .unwrap();
        let d0 = doubly_occupied(&u).unwrap();
        assert!(matches!(
            coincidence_correlator(&g, &d0, 0, 1),
            Err(Error::ZeroDensity {
                k: 0,
                k_prime: 1,
                ..
            })
        ));
        assert!(coincidence_correlator(&g, &d0, 0, 2).is_ok());
        assert!(coincidence_correlator(&g, &d0, 2, 2).is_err());
    }

    #[test]
    fn orbital_normalization_is_checked() {
        let g = grid(3);
        assert!(matches!(
            GridOrbital::new(g, Array1::from_elem(3, C64::from(1.0))),
            Err(Error::NotNormalized { .. })
        ));
    }
}
