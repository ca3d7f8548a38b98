//! Two-site, two-electron Hubbard model.
//!
//! `H = −t Σ_σ (c†_{0σ} c_{1σ} + h.c.) + U Σ_i n_{i↑} n_{i↓}` on the six-state
//! two-particle sector, plus the observables whose correlations are studied
//! in the ground state and their closed forms in `x = U/(4t)`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::entangle::{self, CorrelationProblem, MaximizeOptions, Maximum};
use crate::error::{Error, Result};
use crate::firstq::{self, ParticleObservable};
use crate::fock::{self, FockBasis, ModeLayout, Operator, Spin, StateVector};
use crate::linalg::{self, ZERO};

pub const N_SITES: usize = 2;
pub const N_ELECTRONS: usize = 2;
/// Relative gap below which the ground state counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubbardParams {
    t: f64,
    u: f64,
}

impl HubbardParams {
    pub fn new(t: f64, u: f64) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hopping t must be >= 0, got {t}"
            )));
        }
        if !(u.is_finite() && u >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "repulsion U must be >= 0, got {u}"
            )));
        }
        Ok(Self { t, u })
    }

    /// `(t, U) = (1, 4x)`.
    pub fn from_x(x: f64) -> Result<Self> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "x must be finite and >= 0, got {x}"
            )));
        }
        Self::new(1.0, 4.0 * x)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    /// `U/(4t)`; undefined without hopping.
    pub fn x(&self) -> Option<f64> {
        (self.t > 0.0).then(|| self.u / (4.0 * self.t))
    }
}

#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub energy: f64,
    pub state: StateVector,
    /// Set when the two lowest levels are closer than `DEGENERACY_TOL·‖H‖_F`.
    pub degenerate: bool,
    pub gap: f64,
    pub residual: f64,
}

/// The model on a particular mode layout. All sign-sensitive quantities are
/// layout independent; the layout only fixes how modes are numbered.
#[derive(Debug, Clone)]
pub struct HubbardModel {
    layout: ModeLayout,
    basis: Arc<FockBasis>,
}

impl Default for HubbardModel {
    fn default() -> Self {
        Self::new(ModeLayout::canonical(N_SITES)).expect("canonical layout is valid")
    }
}

impl HubbardModel {
    pub fn new(layout: ModeLayout) -> Result<Self> {
        if layout.n_modes() != 2 * N_SITES {
            return Err(Error::InvalidParameter(format!(
                "two-site layout needs 4 modes, got {}",
                layout.n_modes()
            )));
        }
        for site in 0..N_SITES {
            for spin in Spin::BOTH {
                layout.mode(site, spin)?;
            }
        }
        let basis = FockBasis::new(layout.n_modes(), N_ELECTRONS)?;
        Ok(Self { layout, basis })
    }

    pub fn layout(&self) -> &ModeLayout {
        &self.layout
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    fn mode(&self, site: usize, spin: Spin) -> Result<fock::ModeIndex> {
        self.layout.mode(site, spin)
    }

    pub fn hamiltonian(&self, p: &HubbardParams) -> Result<Operator> {
        let mut h = Operator::zero(self.basis.clone());
        for spin in Spin::BOTH {
            let a = self.mode(0, spin)?;
            let b = self.mode(1, spin)?;
            let hop =
                fock::bilinear(a, b, &self.basis)?.add(&fock::bilinear(b, a, &self.basis)?)?;
            h = h.add(&hop.scale(C64::from(-p.t)))?;
        }
        for site in 0..N_SITES {
            let double = self
                .site_spin_number(site, Spin::Up)?
                .mul(&self.site_spin_number(site, Spin::Down)?)?;
            h = h.add(&double.scale(C64::from(p.u)))?;
        }
        Ok(h)
    }

    /// `N_{iσ} = c†_{iσ} c_{iσ}`.
    pub fn site_spin_number(&self, site: usize, spin: Spin) -> Result<Operator> {
        fock::number(self.mode(site, spin)?, &self.basis)
    }

    /// `N_i = N_{i↑} + N_{i↓}`.
    pub fn site_number(&self, site: usize) -> Result<Operator> {
        self.site_spin_number(site, Spin::Up)?
            .add(&self.site_spin_number(site, Spin::Down)?)
    }

    /// `S^z_i = N_{i↑} − N_{i↓}`.
    pub fn site_spin(&self, site: usize) -> Result<Operator> {
        self.site_spin_number(site, Spin::Up)?.add(
            &self
                .site_spin_number(site, Spin::Down)?
                .scale(C64::from(-1.0)),
        )
    }

    /// `a†_σ a_σ` for the bonding (`sign = +1`) or antibonding (`sign = −1`)
    /// orbital `(c_{0σ} ± c_{1σ})/√2`.
    fn orbital_number(&self, spin: Spin, sign: f64) -> Result<Operator> {
        let n = self.layout.n_modes();
        let mut coeffs = vec![ZERO; n];
        coeffs[self.mode(0, spin)?.0] = C64::from(FRAC_1_SQRT_2);
        coeffs[self.mode(1, spin)?.0] = C64::from(sign * FRAC_1_SQRT_2);
        let h = Array2::from_shape_fn((n, n), |(i, j)| coeffs[i] * coeffs[j].conj());
        fock::one_body(&h, &self.basis)
    }

    pub fn bonding_number(&self, spin: Spin) -> Result<Operator> {
        self.orbital_number(spin, 1.0)
    }

    pub fn antibonding_number(&self, spin: Spin) -> Result<Operator> {
        self.orbital_number(spin, -1.0)
    }

    /// Single-particle `s^z` (eigenvalues ±1) on the model's modes.
    pub fn spin_z_matrix(&self) -> Array2<C64> {
        let n = self.layout.n_modes();
        Array2::from_shape_fn((n, n), |(i, j)| {
            if i == j {
                let label = self.layout.labels()[i];
                C64::from(label.spin.sign())
            } else {
                ZERO
            }
        })
    }

    /// `s^z` of labeled electron `particle` (1 or 2).
    pub fn electron_spin(&self, particle: usize) -> Result<ParticleObservable> {
        match particle {
            1 => ParticleObservable::particle1(self.spin_z_matrix()),
            2 => ParticleObservable::particle2(self.spin_z_matrix()),
            _ => Err(Error::InvalidParameter(format!(
                "particle must be 1 or 2, got {particle}"
            ))),
        }
    }

    pub fn ground_state(&self, p: &HubbardParams) -> Result<GroundStateResult> {
        ground_state(&self.hamiltonian(p)?)
    }
}

/// Lowest eigenpair of a Hermitian operator, phase fixed so the largest
/// amplitude is real and positive.
pub fn ground_state(h: &Operator) -> Result<GroundStateResult> {
    if !h.is_hermitian() {
        return Err(Error::NonHermitianObservable {
            deviation: linalg::hermitian_deviation(&h.matrix().view()),
        });
    }
    let eig = linalg::eigh(&h.matrix().view());
    let mut v = eig.vector(0);
    linalg::fix_phase(&mut v);
    let energy = eig.values[0];
    let gap = if eig.values.len() > 1 {
        eig.values[1] - eig.values[0]
    } else {
        f64::INFINITY
    };
    let scale = h.frobenius_norm();
    let degenerate = gap < DEGENERACY_TOL * scale.max(f64::MIN_POSITIVE);
    let r = h.matrix().dot(&v) - v.mapv(|z| z * energy);
    let residual = linalg::vec_norm(&r.view());
    let state = StateVector::new(h.basis().clone(), v)?;
    Ok(GroundStateResult {
        energy,
        state,
        degenerate,
        gap,
        residual,
    })
}

/// Closed-form ground-state correlations as functions of `x = U/(4t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub x: f64,
    /// `√(1+x²) − x`
    pub f: f64,
    /// `(1+f)² / (2(1+f²))`
    pub g: f64,
    /// electron spins, always −1
    pub c_electron_spins: f64,
    /// site spins, `−1/(1+f²)`
    pub c_site_spins: f64,
    /// degree for bonding occupations, `4g(1−g)`
    pub e_bonding: f64,
    /// site numbers, `−f²/(1+f²)`
    pub c_site_numbers: f64,
}

pub fn closed_form(x: f64) -> Result<ClosedForm> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::InvalidParameter(format!("x must be >= 0, got {x}")));
    }
    // 1/(√(1+x²)+x) = √(1+x²) − x
    let f = if x.is_infinite() {
        0.0
    } else {
        1.0 / (x.hypot(1.0) + x)
    };
    let f2 = f * f;
    let g = (1.0 + f) * (1.0 + f) / (2.0 * (1.0 + f2));
    Ok(ClosedForm {
        x,
        f,
        g,
        c_electron_spins: -1.0,
        c_site_spins: -1.0 / (1.0 + f2),
        e_bonding: 4.0 * g * (1.0 - g),
        c_site_numbers: -f2 / (1.0 + f2),
    })
}

/// The four observable pairs evaluated on the ground state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObservablePair {
    /// `s^z_1, s^z_2` of the two labeled electrons
    ElectronSpins,
    /// `S^z_1, S^z_2` of the two sites
    SiteSpins,
    /// `n_↑, n_↓` of the bonding orbital
    BondingOccupations,
    /// `N_1, N_2` of the two sites
    SiteOccupations,
}

impl ObservablePair {
    pub const ALL: [ObservablePair; 4] = [
        ObservablePair::ElectronSpins,
        ObservablePair::SiteSpins,
        ObservablePair::BondingOccupations,
        ObservablePair::SiteOccupations,
    ];

    pub fn roman(self) -> &'static str {
        match self {
            ObservablePair::ElectronSpins => "i",
            ObservablePair::SiteSpins => "ii",
            ObservablePair::BondingOccupations => "iii",
            ObservablePair::SiteOccupations => "iv",
        }
    }

    pub fn from_roman(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.roman() == s)
    }

    pub fn description(self) -> &'static str {
        match self {
            ObservablePair::ElectronSpins => "electron spins s1z, s2z",
            ObservablePair::SiteSpins => "site spins S1z, S2z",
            ObservablePair::BondingOccupations => "bonding occupations n_up, n_down",
            ObservablePair::SiteOccupations => "site occupations N1, N2",
        }
    }

    /// Normalizing maximum of |C| over the two-particle space.
    pub fn known_maximum(self) -> f64 {
        match self {
            ObservablePair::BondingOccupations => 0.25,
            _ => 1.0,
        }
    }
}

impl HubbardModel {
    /// Second-quantized operators for pairs (ii)–(iv).
    pub fn operator_pair(&self, pair: ObservablePair) -> Result<Option<(Operator, Operator)>> {
        Ok(match pair {
            ObservablePair::ElectronSpins => None,
            ObservablePair::SiteSpins => Some((self.site_spin(0)?, self.site_spin(1)?)),
            ObservablePair::BondingOccupations => Some((
                self.bonding_number(Spin::Up)?,
                self.bonding_number(Spin::Down)?,
            )),
            ObservablePair::SiteOccupations => Some((self.site_number(0)?, self.site_number(1)?)),
        })
    }

    /// Labeled-electron observables for pair (i).
    pub fn electron_spin_pair(&self) -> Result<(ParticleObservable, ParticleObservable)> {
        Ok((self.electron_spin(1)?, self.electron_spin(2)?))
    }

    /// `C_AB` for `pair` in a two-electron state of this model.
    pub fn pair_correlation(&self, psi: &StateVector, pair: ObservablePair) -> Result<C64> {
        match self.operator_pair(pair)? {
            Some((a, b)) => entangle::correlation(psi, &a, &b),
            None => {
                let w = firstq::from_second_quantized(psi)?;
                let (a, b) = self.electron_spin_pair()?;
                entangle::correlation(&w, &a, &b)
            }
        }
    }

    pub fn pair_problem(&self, pair: ObservablePair) -> Result<CorrelationProblem> {
        match self.operator_pair(pair)? {
            Some((a, b)) => CorrelationProblem::from_observables(&a, &b),
            None => {
                let (a, b) = self.electron_spin_pair()?;
                CorrelationProblem::from_observables(&a, &b)
            }
        }
    }

    /// Largest `|C|` for `pair` over all states of the two-electron space.
    pub fn pair_maximum(&self, pair: ObservablePair, options: &MaximizeOptions) -> Result<Maximum> {
        Ok(self.pair_problem(pair)?.maximize(options))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::firstq;
    use crate::fock::{expectation, SiteSpin};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn real(z: C64) -> f64 {
        assert!(z.im.abs() < 1e-12);
        z.re
    }

    #[test]
    fn params_validation() {
        assert!(HubbardParams::new(-1.0, 0.0).is_err());
        assert!(HubbardParams::new(1.0, -0.1).is_err());
        assert!(HubbardParams::from_x(f64::INFINITY).is_err());
        assert_eq!(HubbardParams::new(0.0, 1.0).unwrap().x(), None);
        assert_eq!(HubbardParams::new(2.0, 4.0).unwrap().x(), Some(0.5));
    }

    #[test]
    fn hamiltonian_is_hermitian_six_by_six() {
        let m = HubbardModel::default();
        let h = m
            .hamiltonian(&HubbardParams::new(1.3, 2.1).unwrap())
            .unwrap();
        assert!(h.is_hermitian());
        assert_eq!(h.matrix().dim(), (6, 6));
    }

    #[test]
    fn noninteracting_ground_energy() {
        let m = HubbardModel::default();
        let gs = m
            .ground_state(&HubbardParams::new(1.0, 0.0).unwrap())
            .unwrap();
        assert!((gs.energy + 2.0).abs() < 1e-13);
        assert!(!gs.degenerate);
    }

    #[test]
    fn zero_hopping_is_degenerate() {
        let m = HubbardModel::default();
        let gs = m
            .ground_state(&HubbardParams::new(0.0, 3.0).unwrap())
            .unwrap();
        assert!(gs.energy.abs() < 1e-13);
        assert!(gs.degenerate);
        let gs = m
            .ground_state(&HubbardParams::new(0.0, 0.0).unwrap())
            .unwrap();
        assert!(gs.degenerate);
    }

    #[test]
    fn energy_matches_two_level_formula() {
        // singlet sector: E0 = U/2 − √(U²/4 + 4t²) = −2t·f(x)
        let m = HubbardModel::default();
        for &(t, u) in &[(1.0, 0.0), (1.0, 4.0), (0.5, 7.0), (2.0, 0.3)] {
            let gs = m.ground_state(&HubbardParams::new(t, u).unwrap()).unwrap();
            let want = u / 2.0 - (u * u / 4.0 + 4.0 * t * t).sqrt();
            assert!((gs.energy - want).abs() < 1e-12);
            let cf = closed_form(u / (4.0 * t)).unwrap();
            assert!((gs.energy + 2.0 * t * cf.f).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_invariant_under_site_swap() {
        let m = HubbardModel::default();
        let h = m
            .hamiltonian(&HubbardParams::new(1.0, 2.5).unwrap())
            .unwrap();
        // image of each basis state under (site 0 ↔ site 1), including the fermionic sign
        let swap: Vec<usize> = m
            .basis()
            .states()
            .iter()
            .map(|occ| {
                let modes: Vec<usize> = occ
                    .modes()
                    .map(|md| {
                        let l = m.layout().labels()[md];
                        m.layout().mode(1 - l.site, l.spin).unwrap().0
                    })
                    .collect();
                m.basis()
                    .index_of(fock::FockState::from_modes(&modes))
                    .unwrap()
            })
            .collect();
        let hp = h.permuted(&swap).unwrap();
        let e1 = linalg::eigh(&h.matrix().view()).values;
        let e2 = linalg::eigh(&hp.matrix().view()).values;
        for (a, b) in e1.iter().zip(&e2) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn residuals_for_random_parameters() {
        let m = HubbardModel::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let t = rng.random_range(0.1..3.0);
            let u = rng.random_range(0.0..20.0);
            let gs = m.ground_state(&HubbardParams::new(t, u).unwrap()).unwrap();
            assert!(gs.residual <= 1e-10, "residual {}", gs.residual);
            assert!((gs.state.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn noninteracting_ground_state_is_bonding_determinant() {
        let m = HubbardModel::default();
        let gs = m
            .ground_state(&HubbardParams::new(1.0, 0.0).unwrap())
            .unwrap();
        let bond = |spin| {
            let mut v = ndarray::Array1::zeros(4);
            v[m.layout().mode(0, spin).unwrap().0] = C64::from(FRAC_1_SQRT_2);
            v[m.layout().mode(1, spin).unwrap().0] = C64::from(FRAC_1_SQRT_2);
            v
        };
        let d0 = StateVector::from_creation_product(
            m.basis().clone(),
            &[bond(Spin::Up), bond(Spin::Down)],
        )
        .unwrap();
        let overlap = gs.state.inner(&d0).unwrap();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
        // one electron per site on average
        let n1 = expectation(&d0, &m.site_number(0).unwrap()).unwrap();
        assert!((n1 - C64::from(1.0)).norm() < 1e-13);
    }

    #[test]
    fn ground_state_factorizes_into_symmetric_space_and_singlet() {
        let m = HubbardModel::default();
        for x in [0.0, 0.3, 1.0, 7.0] {
            let gs = m.ground_state(&HubbardParams::from_x(x).unwrap()).unwrap();
            let w = firstq::from_second_quantized(&gs.state).unwrap();
            // spatial amplitude read off from the (↑, ↓) block
            let spatial = Array2::from_shape_fn((2, 2), |(i, j)| {
                let a = m.layout().mode(i, Spin::Up).unwrap().0;
                let b = m.layout().mode(j, Spin::Down).unwrap().0;
                w.amplitudes()[[a, b]] * std::f64::consts::SQRT_2
            });
            assert!((spatial[[0, 1]] - spatial[[1, 0]]).norm() < 1e-12);
            let rebuilt = firstq::spatial_times_singlet(&spatial).unwrap();
            assert!((rebuilt.inner(&w).unwrap().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn large_x_limit() {
        let m = HubbardModel::default();
        let gs = m
            .ground_state(&HubbardParams::from_x(1e4).unwrap())
            .unwrap();
        let n1 = real(expectation(&gs.state, &m.site_number(0).unwrap()).unwrap());
        let n2 = real(expectation(&gs.state, &m.site_number(1).unwrap()).unwrap());
        let n12 = real(
            expectation(
                &gs.state,
                &m.site_number(0)
                    .unwrap()
                    .mul(&m.site_number(1).unwrap())
                    .unwrap(),
            )
            .unwrap(),
        );
        assert!((n1 - 1.0).abs() < 1e-8 && (n2 - 1.0).abs() < 1e-8);
        assert!((n12 - n1 * n2).abs() < 1e-8);
    }

    #[test]
    fn observable_identities() {
        let m = HubbardModel::default();
        let b = m.basis();
        let total_sz = m
            .site_spin(0)
            .unwrap()
            .add(&m.site_spin(1).unwrap())
            .unwrap();
        let gs = m
            .ground_state(&HubbardParams::from_x(0.8).unwrap())
            .unwrap();
        let img = total_sz.apply(&gs.state).unwrap();
        assert!(linalg::vec_norm(&img.view()) < 1e-13);

        let mut occ = Operator::zero(b.clone());
        for spin in Spin::BOTH {
            occ = occ.add(&m.bonding_number(spin).unwrap()).unwrap();
            occ = occ.add(&m.antibonding_number(spin).unwrap()).unwrap();
        }
        let sites = m
            .site_number(0)
            .unwrap()
            .add(&m.site_number(1).unwrap())
            .unwrap();
        let two = Operator::identity(b.clone()).scale(C64::from(2.0));
        for op in [&occ, &sites] {
            assert!((op.matrix() - two.matrix())
                .iter()
                .all(|z| z.norm() < 1e-14));
        }

        let eig = linalg::eigh(&m.site_number(0).unwrap().matrix().view());
        let mut vals: Vec<i64> = eig.values.iter().map(|v| v.round() as i64).collect();
        vals.dedup();
        assert_eq!(vals, vec![0, 1, 2]);
    }

    #[test]
    fn closed_form_values() {
        let cf = closed_form(0.0).unwrap();
        assert_eq!(cf.f, 1.0);
        assert!((cf.c_site_spins + 0.5).abs() < 1e-15);
        assert!(cf.e_bonding.abs() < 1e-15);
        assert!((cf.c_site_numbers + 0.5).abs() < 1e-15);

        // values at x = 1 evaluated independently: f = √2 − 1,
        // 1 + f² = 4 − 2√2, C11 = −1/(4 − 2√2) = −(2+√2)/4, C13 = −1 − C11
        let cf = closed_form(1.0).unwrap();
        let s2 = 2f64.sqrt();
        assert!((cf.f - (s2 - 1.0)).abs() < 1e-15);
        assert!((cf.c_site_spins + (2.0 + s2) / 4.0).abs() < 1e-15);
        assert!((cf.c_site_numbers + (2.0 - s2) / 4.0).abs() < 1e-15);
        assert!((cf.f - 0.414_213_6).abs() < 1e-7);
        assert!((cf.c_site_spins + 0.853_553_4).abs() < 1e-7);
        assert!((cf.c_site_numbers + 0.146_446_6).abs() < 1e-7);

        let cf = closed_form(1e8).unwrap();
        assert!(cf.f < 1e-8);
        assert!((cf.c_site_spins + 1.0).abs() < 1e-15);
        assert!((cf.e_bonding - 1.0).abs() < 1e-8);
        assert!(cf.c_site_numbers.abs() < 1e-15);

        assert!(closed_form(-0.1).is_err());
    }

    #[test]
    fn bonding_degree_is_monotone() {
        let mut prev = -1.0;
        for k in 0..=400 {
            let cf = closed_form(k as f64 * 0.05).unwrap();
            assert!(cf.e_bonding >= prev - 1e-15);
            prev = cf.e_bonding;
        }
    }

    #[test]
    fn alternative_layout_is_accepted() {
        let labels = vec![
            SiteSpin {
                site: 1,
                spin: Spin::Down,
            },
            SiteSpin {
                site: 0,
                spin: Spin::Up,
            },
            SiteSpin {
                site: 1,
                spin: Spin::Up,
            },
            SiteSpin {
                site: 0,
                spin: Spin::Down,
            },
        ];
        let m = HubbardModel::new(ModeLayout::from_labels(labels).unwrap()).unwrap();
        let gs = m
            .ground_state(&HubbardParams::new(1.0, 0.0).unwrap())
            .unwrap();
        assert!((gs.energy + 2.0).abs() < 1e-13);
        assert!(HubbardModel::new(ModeLayout::canonical(3)).is_err());
    }

    #[test]
    fn pair_correlations_match_closed_forms() {
        let m = HubbardModel::default();
        for x in [0.0, 0.3, 1.0, 7.5] {
            let gs = m.ground_state(&HubbardParams::from_x(x).unwrap()).unwrap();
            let cf = closed_form(x).unwrap();
            let c = |p| real(m.pair_correlation(&gs.state, p).unwrap());
            assert!((c(ObservablePair::ElectronSpins) + 1.0).abs() < 1e-12);
            assert!((c(ObservablePair::SiteSpins) - cf.c_site_spins).abs() < 1e-12);
            assert!((c(ObservablePair::SiteOccupations) - cf.c_site_numbers).abs() < 1e-12);
            let e = c(ObservablePair::BondingOccupations).abs() / 0.25;
            assert!((e - cf.e_bonding).abs() < 1e-12);
        }
    }

    #[test]
    fn pair_problems_live_on_the_six_state_sector() {
        let m = HubbardModel::default();
        for p in ObservablePair::ALL {
            assert_eq!(m.pair_problem(p).unwrap().dim(), 6);
        }
    }
}
