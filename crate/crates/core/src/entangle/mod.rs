//! Observable-relative entanglement.
//!
//! A pure state `ψ` is entangled with respect to observables `A` and `B` when
//! `C = ⟨AB⟩ − ⟨A⟩⟨B⟩` is nonzero. The degree of entanglement is `|C|`
//! divided by the largest `|C|` attainable on the state space, which is found
//! numerically by [`max_abs_correlation`].

mod maximize;
mod oracle;

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::firstq::{self, ParticleObservable, TwoParticleWavefunction};
use crate::fock::{self, FockBasis, Operator, StateVector, HERMITIAN_TOL};
use crate::linalg;

pub use maximize::{
    gradient, objective, CorrelationProblem, MaximizeOptions, Maximum, OptimizerDiagnostics,
};
pub use oracle::{sampling_oracle, OracleResult};

/// Allowed deviation of ‖ψ‖ from 1.
pub const NORM_TOL: f64 = 1e-10;

/// Something that can play the role of `A` or `B`.
pub trait Observable: Sized {
    type State: Clone + Send + Sync;

    fn expectation(&self, state: &Self::State) -> Result<C64>;
    /// Operator product `self · rhs`.
    fn compose(&self, rhs: &Self) -> Result<Self>;
    fn hermitian_deviation(&self) -> f64;
    /// ‖(A − λ)ψ‖.
    fn residual(&self, state: &Self::State, lambda: C64) -> Result<f64>;
    /// An upper bound on the Frobenius norm.
    fn norm_bound(&self) -> f64;
    fn state_norm(state: &Self::State) -> f64;
    /// Matrix on the finite space searched by the maximizer.
    fn sector_matrix(&self) -> Result<Array2<C64>>;
    /// Wraps unit amplitudes on that space as a state.
    fn sector_state(&self, amplitudes: Array1<C64>) -> Result<Self::State>;
}

impl Observable for Operator {
    type State = StateVector;

    fn expectation(&self, state: &StateVector) -> Result<C64> {
        fock::expectation(state, self)
    }

    fn compose(&self, rhs: &Self) -> Result<Self> {
        self.mul(rhs)
    }

    fn hermitian_deviation(&self) -> f64 {
        linalg::hermitian_deviation(&self.matrix().view())
    }

    fn residual(&self, state: &StateVector, lambda: C64) -> Result<f64> {
        let img = self.apply(state)?;
        let r = img - state.amplitudes().mapv(|z| z * lambda);
        Ok(linalg::vec_norm(&r.view()))
    }

    fn norm_bound(&self) -> f64 {
        self.frobenius_norm()
    }

    fn state_norm(state: &StateVector) -> f64 {
        state.norm()
    }

    fn sector_matrix(&self) -> Result<Array2<C64>> {
        Ok(self.matrix().clone())
    }

    fn sector_state(&self, amplitudes: Array1<C64>) -> Result<StateVector> {
        StateVector::new(self.basis().clone(), amplitudes)
    }
}

impl Observable for ParticleObservable {
    type State = TwoParticleWavefunction;

    fn expectation(&self, state: &TwoParticleWavefunction) -> Result<C64> {
        firstq::particle_expectation(state, self)
    }

    fn compose(&self, rhs: &Self) -> Result<Self> {
        ParticleObservable::compose(self, rhs)
    }

    fn hermitian_deviation(&self) -> f64 {
        ParticleObservable::hermitian_deviation(self)
    }

    fn residual(&self, state: &TwoParticleWavefunction, lambda: C64) -> Result<f64> {
        let img = self.apply(state)?;
        let r = img - state.amplitudes().mapv(|z| z * lambda);
        Ok(linalg::frobenius(&r.view()))
    }

    fn norm_bound(&self) -> f64 {
        ParticleObservable::norm_bound(self)
    }

    fn state_norm(state: &TwoParticleWavefunction) -> f64 {
        state.norm()
    }

    /// Compression onto the antisymmetric two-particle sector.
    fn sector_matrix(&self) -> Result<Array2<C64>> {
        let basis = FockBasis::new(self.dim(), 2)?;
        ParticleObservable::sector_matrix(self, &basis)
    }

    fn sector_state(&self, amplitudes: Array1<C64>) -> Result<TwoParticleWavefunction> {
        let basis = FockBasis::new(self.dim(), 2)?;
        firstq::from_second_quantized(&StateVector::new(basis, amplitudes)?)
    }
}

fn require_hermitian<O: Observable>(o: &O) -> Result<()> {
    let deviation = o.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        Err(Error::NonHermitianObservable { deviation })
    } else {
        Ok(())
    }
}

fn require_normalized<O: Observable>(state: &O::State) -> Result<()> {
    let norm = O::state_norm(state);
    if (norm - 1.0).abs() > NORM_TOL {
        Err(Error::NotNormalized { norm })
    } else {
        Ok(())
    }
}

/// `C_AB = ⟨ψ|AB|ψ⟩ − ⟨ψ|A|ψ⟩⟨ψ|B|ψ⟩`.
pub fn correlation<O: Observable>(psi: &O::State, a: &O, b: &O) -> Result<C64> {
    require_normalized::<O>(psi)?;
    require_hermitian(a)?;
    require_hermitian(b)?;
    let ab = a.compose(b)?;
    Ok(ab.expectation(psi)? - a.expectation(psi)? * b.expectation(psi)?)
}

/// `Some(⟨ψ|A|ψ⟩)` when `‖Aψ − ⟨A⟩ψ‖ ≤ tol`.
pub fn is_eigenstate<O: Observable>(psi: &O::State, a: &O, tol: f64) -> Result<Option<C64>> {
    let lambda = a.expectation(psi)?;
    Ok((a.residual(psi, lambda)? <= tol).then_some(lambda))
}

/// Largest `|C_AB^φ|` over unit vectors `φ` of the observables' state space,
/// found by restarted gradient ascent and cross-checked against a
/// quasi-random sampling oracle.
pub fn max_abs_correlation<O: Observable>(
    a: &O,
    b: &O,
    options: &MaximizeOptions,
) -> Result<(f64, O::State, OptimizerDiagnostics)> {
    let problem = CorrelationProblem::from_observables(a, b)?;
    let max = problem.maximize(options);
    let state = a.sector_state(max.argmax.clone())?;
    Ok((max.value, state, max.diagnostics))
}

#[derive(Debug, Clone)]
pub struct CorrelationReport<S> {
    pub c: C64,
    pub abs_c: f64,
    pub max_abs: f64,
    /// `abs_c / max_abs`, clamped to [0, 1].
    pub e: f64,
    /// How far the raw ratio fell outside [0, 1] before clamping.
    pub clamped_by: f64,
    pub argmax_state: S,
    pub optimizer: OptimizerDiagnostics,
}

impl<S> CorrelationReport<S> {
    pub fn new(c: C64, max_abs: f64, argmax_state: S, optimizer: OptimizerDiagnostics) -> Self {
        let abs_c = c.norm();
        let raw = if max_abs > 0.0 { abs_c / max_abs } else { 0.0 };
        let e = raw.clamp(0.0, 1.0);
        let clamped_by = (raw - e).abs();
        if clamped_by > 0.0 {
            log::warn!(
                "degree of entanglement {raw} clamped to {e} (|C| = {abs_c}, max = {max_abs})"
            );
        }
        Self {
            c,
            abs_c,
            max_abs,
            e,
            clamped_by,
            argmax_state,
            optimizer,
        }
    }
}

/// Degree of entanglement `|C_AB^ψ| / max_φ |C_AB^φ|`.
pub fn degree<O: Observable>(
    psi: &O::State,
    a: &O,
    b: &O,
    options: &MaximizeOptions,
) -> Result<CorrelationReport<O::State>> {
    let c = correlation(psi, a, b)?;
    let (max_abs, argmax, diag) = max_abs_correlation(a, b, options)?;
    Ok(CorrelationReport::new(c, max_abs, argmax, diag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::firstq::{pauli, singlet};
    use crate::fock::{FockState, ModeLayout, Spin};
    use crate::hubbard::{closed_form, HubbardModel, HubbardParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn quick() -> MaximizeOptions {
        MaximizeOptions {
            restarts: 16,
            oracle_samples: 20_000,
            ..MaximizeOptions::default()
        }
    }

    fn d0(model: &HubbardModel) -> StateVector {
        let bond = |spin| {
            let mut v = Array1::zeros(4);
            v[model.layout().mode(0, spin).unwrap().0] = C64::from(FRAC_1_SQRT_2);
            v[model.layout().mode(1, spin).unwrap().0] = C64::from(FRAC_1_SQRT_2);
            v
        };
        StateVector::from_creation_product(
            model.basis().clone(),
            &[bond(Spin::Up), bond(Spin::Down)],
        )
        .unwrap()
    }

    #[test]
    fn bonding_determinant_spin_correlation_is_minus_one() {
        let m = HubbardModel::default();
        let w = firstq::from_second_quantized(&d0(&m)).unwrap();
        let (s1, s2) = m.electron_spin_pair().unwrap();
        let c = correlation(&w, &s1, &s2).unwrap();
        assert!((c - C64::from(-1.0)).norm() < 1e-14);
    }

    #[test]
    fn parallel_spins_are_uncorrelated() {
        let m = HubbardModel::default();
        let modes = [
            m.layout().mode(0, Spin::Up).unwrap().0,
            m.layout().mode(1, Spin::Up).unwrap().0,
        ];
        let psi =
            StateVector::basis_state(m.basis().clone(), FockState::from_modes(&modes)).unwrap();
        let w = firstq::from_second_quantized(&psi).unwrap();
        let (s1, s2) = m.electron_spin_pair().unwrap();
        assert!(correlation(&w, &s1, &s2).unwrap().norm() < 1e-15);
    }

    #[test]
    fn site_spin_correlation_at_x_one() {
        let m = HubbardModel::default();
        let gs = m
            .ground_state(&HubbardParams::from_x(1.0).unwrap())
            .unwrap();
        let c = correlation(
            &gs.state,
            &m.site_spin(0).unwrap(),
            &m.site_spin(1).unwrap(),
        )
        .unwrap();
        assert!((c.re - closed_form(1.0).unwrap().c_site_spins).abs() < 1e-12);
        assert!((c.re + 0.853_553_4).abs() < 1e-7);
    }

    #[test]
    fn rejects_bad_inputs() {
        let m = HubbardModel::default();
        let b = m.basis().clone();
        let n = m.site_number(0).unwrap();
        let unnormalized =
            StateVector::new(b.clone(), Array1::from_elem(6, C64::from(1.0))).unwrap();
        assert!(matches!(
            correlation(&unnormalized, &n, &n),
            Err(Error::NotNormalized { .. })
        ));
        let raise = fock::bilinear(fock::ModeIndex(0), fock::ModeIndex(2), &b).unwrap();
        let psi = d0(&m);
        assert!(matches!(
            correlation(&psi, &raise, &n),
            Err(Error::NonHermitianObservable { .. })
        ));
        assert!(matches!(
            max_abs_correlation(&raise, &n, &quick()),
            Err(Error::NonHermitianObservable { .. })
        ));
        let other = HubbardModel::new(ModeLayout::canonical(2)).unwrap();
        let other_basis = FockBasis::new(4, 1).unwrap();
        let _ = other;
        let foreign = Operator::identity(other_basis);
        assert_eq!(
            correlation(&psi, &n, &foreign).unwrap_err(),
            Error::BasisMismatch
        );
    }

    #[test]
    fn eigenstate_examples() {
        let m = HubbardModel::default();
        let h0 = m
            .hamiltonian(&HubbardParams::new(1.0, 0.0).unwrap())
            .unwrap();
        let lambda = is_eigenstate(&d0(&m), &h0, 1e-12).unwrap().unwrap();
        assert!((lambda - C64::from(-2.0)).norm() < 1e-13);

        let chi = singlet();
        let mut s2: Option<ParticleObservable> = None;
        for sigma in [pauli::x(), pauli::y(), pauli::z()] {
            let t = ParticleObservable::one_body_sum(sigma).unwrap();
            let sq = t.compose(&t).unwrap();
            s2 = Some(match s2 {
                None => sq,
                Some(acc) => acc.plus(&sq).unwrap(),
            });
        }
        let lambda = is_eigenstate(&chi, &s2.unwrap(), 1e-12).unwrap().unwrap();
        assert!(lambda.norm() < 1e-14);

        // superposition of two N1 eigenstates with different eigenvalues
        let b = m.basis().clone();
        let doubly = |site| {
            let modes = [
                m.layout().mode(site, Spin::Up).unwrap().0,
                m.layout().mode(site, Spin::Down).unwrap().0,
            ];
            b.index_of(FockState::from_modes(&modes)).unwrap()
        };
        let mut amps = Array1::zeros(6);
        amps[doubly(0)] = C64::from(0.6);
        amps[doubly(1)] = C64::from(0.8);
        let psi = StateVector::new(b, amps).unwrap();
        assert!(is_eigenstate(&psi, &m.site_number(0).unwrap(), 1e-8)
            .unwrap()
            .is_none());
    }

    #[test]
    fn conjugate_symmetry_random() {
        let b = FockBasis::new(4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let a =
                Operator::from_matrix(b.clone(), linalg::random_hermitian(&mut rng, 6)).unwrap();
            let bb =
                Operator::from_matrix(b.clone(), linalg::random_hermitian(&mut rng, 6)).unwrap();
            let psi = StateVector::new(b.clone(), linalg::random_unit_vector(&mut rng, 6)).unwrap();
            let cab = correlation(&psi, &a, &bb).unwrap();
            let cba = correlation(&psi, &bb, &a).unwrap();
            assert!((cab - cba.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn scale_covariance() {
        let m = HubbardModel::default();
        let gs = m
            .ground_state(&HubbardParams::from_x(0.7).unwrap())
            .unwrap();
        let (a, b) = m
            .operator_pair(crate::hubbard::ObservablePair::SiteOccupations)
            .unwrap()
            .unwrap();
        let c = correlation(&gs.state, &a, &b).unwrap();
        let cs = correlation(
            &gs.state,
            &a.scale(C64::from(2.5)),
            &b.scale(C64::from(-0.4)),
        )
        .unwrap();
        assert!((cs - c * (2.5 * -0.4)).norm() < 1e-13);

        let opts = quick();
        let r1 = degree(&gs.state, &a, &b, &opts).unwrap();
        let r2 = degree(
            &gs.state,
            &a.scale(C64::from(3.0)),
            &b.scale(C64::from(0.5)),
            &opts,
        )
        .unwrap();
        assert!((r1.e - r2.e).abs() < 1e-9);
        assert!((r2.max_abs - 1.5 * r1.max_abs).abs() < 1e-9);
    }

    #[test]
    fn degree_of_bonding_occupations_vanishes_without_interaction() {
        let m = HubbardModel::default();
        let gs = m
            .ground_state(&HubbardParams::from_x(0.0).unwrap())
            .unwrap();
        let (a, b) = m
            .operator_pair(crate::hubbard::ObservablePair::BondingOccupations)
            .unwrap()
            .unwrap();
        let r = degree(&gs.state, &a, &b, &quick()).unwrap();
        assert!(r.e < 1e-12);
        assert!((r.max_abs - 0.25).abs() < 1e-9);
    }

    #[test]
    fn degree_of_site_occupations_at_x_one() {
        let m = HubbardModel::default();
        let gs = m
            .ground_state(&HubbardParams::from_x(1.0).unwrap())
            .unwrap();
        let (a, b) = m
            .operator_pair(crate::hubbard::ObservablePair::SiteOccupations)
            .unwrap()
            .unwrap();
        let r = degree(&gs.state, &a, &b, &quick()).unwrap();
        assert!((r.abs_c - 0.146_446_6).abs() < 1e-7);
        assert!((r.e - 0.146_446_6).abs() < 1e-7);
        assert!(r.optimizer.converged);
    }

    #[test]
    fn report_clamps() {
        let r = CorrelationReport::new(
            C64::from(1.0 + 1e-12),
            1.0,
            (),
            OptimizerDiagnostics::default(),
        );
        assert_eq!(r.e, 1.0);
        assert!(r.clamped_by > 0.0 && r.clamped_by < 1e-11);
    }
}
