//! Invariant checks across modules, run by `fermicorr verify`.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::entangle::{self, MaximizeOptions};
use crate::error::Result;
use crate::firstq::{self, ParticleObservable};
use crate::fock::{FockBasis, Operator, StateVector};
use crate::hubbard::{closed_form, HubbardModel, HubbardParams, ObservablePair};
use crate::linalg;
use crate::slater::{self, DEFAULT_TOL};
use crate::spindensity::{self, DEFAULT_CELLS};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

fn linear(n: usize, hi: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| hi * i as f64 / (n - 1) as f64)
}

fn ground(model: &HubbardModel, x: f64) -> Result<StateVector> {
    Ok(model.ground_state(&HubbardParams::from_x(x)?)?.state)
}

fn worst_over<F: Fn(f64) -> Result<f64>>(xs: impl Iterator<Item = f64>, f: F) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in xs {
        worst = worst.max(f(x)?);
    }
    Ok(worst)
}

fn closed_form_checks(model: &HubbardModel, maxima: &[f64; 4]) -> Result<Vec<Check>> {
    let c = |x, pair| -> Result<f64> { Ok(model.pair_correlation(&ground(model, x)?, pair)?.re) };
    let e1 = worst_over(linear(25, 100.0), |x| {
        Ok((c(x, ObservablePair::ElectronSpins)? + 1.0).abs())
    })?;
    let e2 = worst_over(linear(25, 100.0), |x| {
        Ok((c(x, ObservablePair::SiteSpins)? - closed_form(x)?.c_site_spins).abs())
    })?;
    let e3 = worst_over(linear(25, 100.0), |x| {
        Ok((c(x, ObservablePair::BondingOccupations)?.abs() / maxima[2]
            - closed_form(x)?.e_bonding)
            .abs())
    })?;
    let e4 = worst_over(linear(25, 100.0), |x| {
        Ok((c(x, ObservablePair::SiteOccupations)? - closed_form(x)?.c_site_numbers).abs())
    })?;
    let far = c(1e4, ObservablePair::SiteOccupations)?.abs();
    Ok(vec![
        check(
            "electron spins C = -1",
            e1 <= 1e-10,
            format!("max |C + 1| = {e1:.2e}"),
        ),
        check(
            "site spins vs closed form",
            e2 <= 1e-9,
            format!("max err = {e2:.2e}"),
        ),
        check(
            "bonding degree vs closed form",
            e3 <= 1e-6,
            format!("max err = {e3:.2e}"),
        ),
        check(
            "site numbers vs closed form",
            e4 <= 1e-9 && far < 1e-4,
            format!("max err = {e4:.2e}, |C(1e4)| = {far:.2e}"),
        ),
    ])
}

fn maxima_checks(model: &HubbardModel, seed: u64) -> Result<(Vec<Check>, [f64; 4])> {
    let opts = MaximizeOptions {
        seed,
        ..MaximizeOptions::default()
    };
    let mut checks = Vec::new();
    let mut values = [0.0; 4];
    for (k, pair) in ObservablePair::ALL.into_iter().enumerate() {
        let m = model.pair_maximum(pair, &opts)?;
        values[k] = m.value;
        let oracle = m.diagnostics.oracle_max.unwrap_or(0.0);
        let err = (m.value - pair.known_maximum()).abs();
        checks.push(check(
            match pair {
                ObservablePair::ElectronSpins => "max |C| pair i",
                ObservablePair::SiteSpins => "max |C| pair ii",
                ObservablePair::BondingOccupations => "max |C| pair iii",
                ObservablePair::SiteOccupations => "max |C| pair iv",
            },
            err <= 1e-6 && m.value >= oracle - 1e-6,
            format!("max = {:.12}, oracle = {oracle:.9}", m.value),
        ));
    }
    Ok((checks, values))
}

fn inconsistency_check(model: &HubbardModel) -> Result<Check> {
    let d0 = ground(model, 0.0)?;
    let s0 = slater::slater_rank(&firstq::from_second_quantized(&d0)?, DEFAULT_TOL)?;
    let c0 = model
        .pair_correlation(&d0, ObservablePair::ElectronSpins)?
        .norm();
    let far = ground(model, 1e4)?;
    let s1 = slater::slater_rank(&firstq::from_second_quantized(&far)?, DEFAULT_TOL)?;
    let c1 = model
        .pair_correlation(&far, ObservablePair::SiteOccupations)?
        .norm();
    let residual = s0.pfaffian_residual.unwrap_or(f64::INFINITY);
    Ok(check(
        "single determinant yet entangled",
        s0.rank == 1
            && residual <= 1e-12
            && (c0 - 1.0).abs() <= 1e-10
            && s1.rank == 2
            && c1 <= 1e-4,
        format!(
            "rank {} with |C| = {c0:.3}; rank {} with |C_N1N2| = {c1:.1e}",
            s0.rank, s1.rank
        ),
    ))
}

fn epr_check() -> Result<Check> {
    let u = spindensity::default_bonding_orbital(DEFAULT_CELLS)?;
    let d0 = spindensity::doubly_occupied(&u)?;
    let table = spindensity::coincidence_table(&u.grid(), &d0)?;
    let worst = table
        .rows
        .iter()
        .map(|r| (r.conditional + 1.0).abs())
        .fold(0.0, f64::max);
    Ok(check(
        "coincidence correlator",
        worst <= 1e-10 && table.spread() <= 1e-10 && !table.rows.is_empty(),
        format!(
            "{} pairs, spread = {:.1e}",
            table.rows.len(),
            table.spread()
        ),
    ))
}

fn property_checks(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = FockBasis::new(4, 2)?;
    let herm = |rng: &mut ChaCha8Rng| {
        Operator::from_matrix(basis.clone(), linalg::random_hermitian(rng, 6))
    };
    let state =
        |rng: &mut ChaCha8Rng| StateVector::new(basis.clone(), linalg::random_unit_vector(rng, 6));

    let mut conj_err: f64 = 0.0;
    for _ in 0..200 {
        let (psi, a, b) = (state(&mut rng)?, herm(&mut rng)?, herm(&mut rng)?);
        let ab = entangle::correlation(&psi, &a, &b)?;
        let ba = entangle::correlation(&psi, &b, &a)?;
        conj_err = conj_err.max((ab - ba.conj()).norm());
    }

    let mut eig_ok = true;
    for _ in 0..100 {
        let a = linalg::random_hermitian(&mut rng, 6);
        let eig = linalg::eigh(&a.view());
        let noise = linalg::random_unit_vector(&mut rng, 6).mapv(|z| z * 1e-9);
        let v = eig.vector(0) + noise;
        let v = v.mapv(|z| z / linalg::vec_norm(&v.view()));
        let (psi, a, b) = (
            StateVector::new(basis.clone(), v)?,
            Operator::from_matrix(basis.clone(), a)?,
            herm(&mut rng)?,
        );
        let tol = 1e-8;
        if entangle::is_eigenstate(&psi, &a, tol)?.is_none() {
            eig_ok = false;
            continue;
        }
        let c = entangle::correlation(&psi, &a, &b)?.norm();
        eig_ok &= c <= 10.0 * tol * b.frobenius_norm();
    }

    let mut grad_err: f64 = 0.0;
    let model = HubbardModel::default();
    let problems: Vec<_> = ObservablePair::ALL
        .iter()
        .map(|&p| model.pair_problem(p))
        .collect::<Result<_>>()?;
    for k in 0..100 {
        let p = &problems[k % 4];
        let z = linalg::random_unit_vector(&mut rng, p.dim());
        let g = entangle::gradient(p, &z);
        let h = 1e-5;
        for (j, &gj) in g.iter().enumerate() {
            let dir = if j % 2 == 0 {
                C64::new(h, 0.0)
            } else {
                C64::new(0.0, h)
            };
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[j / 2] += dir;
            zm[j / 2] -= dir;
            let fd = (entangle::objective(p, &zp) - entangle::objective(p, &zm)) / (2.0 * h);
            let scale = g.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-3);
            grad_err = grad_err.max((fd - gj).abs() / scale);
        }
    }

    let mut iso_err: f64 = 0.0;
    let six = FockBasis::new(6, 2)?;
    for _ in 0..50 {
        let u = StateVector::new(six.clone(), linalg::random_unit_vector(&mut rng, six.dim()))?;
        let v = StateVector::new(six.clone(), linalg::random_unit_vector(&mut rng, six.dim()))?;
        let (wu, wv) = (
            firstq::from_second_quantized(&u)?,
            firstq::from_second_quantized(&v)?,
        );
        let anti = (wu.amplitudes() + &wu.amplitudes().t())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let overlap = (wu.inner(&wv)? - u.inner(&v)?).norm();
        let back = wu.to_second_quantized(&six)?.amplitudes() - u.amplitudes();
        iso_err = iso_err
            .max(anti)
            .max(overlap)
            .max(linalg::vec_norm(&back.view()));
    }

    let mut rank_ok = true;
    let w = firstq::from_second_quantized(&ground(&model, 0.5)?)?;
    let base = slater::slater_rank(&w, DEFAULT_TOL)?.rank;
    for _ in 0..20 {
        let u = linalg::random_unitary(&mut rng, 4);
        rank_ok &= slater::slater_rank(&w.transformed(&u)?, DEFAULT_TOL)?.rank == base;
    }

    Ok(vec![
        check(
            "conjugate symmetry",
            conj_err <= 1e-12,
            format!("200 cases, max err = {conj_err:.1e}"),
        ),
        check("eigenstate bound", eig_ok, "100 cases".into()),
        check(
            "analytic gradient",
            grad_err <= 1e-6,
            format!("100 points, max rel err = {grad_err:.1e}"),
        ),
        check(
            "first-quantized isometry",
            iso_err <= 1e-12,
            format!("50 states, max err = {iso_err:.1e}"),
        ),
        check(
            "slater rank basis invariance",
            rank_ok,
            "20 unitaries".into(),
        ),
    ])
}

/// A spin-density cross-check on labeled particles: the site-0 spin of the
/// model equals the labeled sum `Σ_i s^z_i 1[i at site 0]`.
fn site_spin_check(model: &HubbardModel) -> Result<Check> {
    let layout = model.layout();
    let mut m = ndarray::Array2::zeros((4, 4));
    for spin in crate::fock::Spin::BOTH {
        let i = layout.mode(0, spin)?.0;
        m[[i, i]] = C64::from(spin.sign());
    }
    let labeled = ParticleObservable::one_body_sum(m)?.sector_matrix(model.basis())?;
    let direct = model.site_spin(0)?;
    let err = linalg::frobenius(&(labeled - direct.matrix()).view());
    Ok(check(
        "site spin as labeled sum",
        err <= 1e-12,
        format!("err = {err:.1e}"),
    ))
}

pub fn run_checks(seed: u64) -> Result<Vec<Check>> {
    let model = HubbardModel::default();
    let (mut checks, maxima) = maxima_checks(&model, seed)?;
    let mut out = closed_form_checks(&model, &maxima)?;
    out.append(&mut checks);
    out.push(inconsistency_check(&model)?);
    out.push(epr_check()?);
    out.push(site_spin_check(&model)?);
    out.extend(property_checks(seed)?);
    Ok(out)
}
