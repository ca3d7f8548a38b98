//! Python bindings: ground states, pair correlations and their maxima, Slater
//! rank and the spin-density coincidence table.

use ndarray::Array2;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fermicorr::entangle::MaximizeOptions;
use fermicorr::firstq;
use fermicorr::hubbard::{self, HubbardModel, HubbardParams, ObservablePair};
use fermicorr::slater::{self, SlaterAnalysis};
use fermicorr::spindensity;
use fermicorr::C64;

fn err(e: fermicorr::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pair(name: &str) -> PyResult<ObservablePair> {
    ObservablePair::from_roman(&name.to_ascii_lowercase()).ok_or_else(|| {
        PyValueError::new_err(format!(
            "pair must be 'i', 'ii', 'iii' or 'iv', got {name:?}"
        ))
    })
}

fn slater_dict<'py>(py: Python<'py>, s: &SlaterAnalysis) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("rank", s.rank)?;
    d.set_item("single_determinant", s.is_single_determinant())?;
    d.set_item("pfaffian_residual", s.pfaffian_residual)?;
    d.set_item("amplitudes", s.amplitudes.clone())?;
    Ok(d)
}

/// Ground state of the two-site Hubbard model at hopping `t` and on-site
/// repulsion `u`.
#[pyclass(module = "pyfermicorr", frozen)]
pub struct GroundState {
    model: HubbardModel,
    inner: hubbard::GroundStateResult,
}

#[pymethods]
impl GroundState {
    #[new]
    #[pyo3(signature = (t = 1.0, u = 0.0))]
    fn new(t: f64, u: f64) -> PyResult<Self> {
        let model = HubbardModel::default();
        let inner = model
            .ground_state(&HubbardParams::new(t, u).map_err(err)?)
            .map_err(err)?;
        Ok(Self { model, inner })
    }

    /// Ground state at `x = U/(4t)` with `t = 1`.
    #[staticmethod]
    fn from_x(x: f64) -> PyResult<Self> {
        let model = HubbardModel::default();
        let inner = model
            .ground_state(&HubbardParams::from_x(x).map_err(err)?)
            .map_err(err)?;
        Ok(Self { model, inner })
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy
    }

    #[getter]
    fn gap(&self) -> f64 {
        self.inner.gap
    }

    #[getter]
    fn degenerate(&self) -> bool {
        self.inner.degenerate
    }

    /// Amplitudes over the two-electron occupation basis.
    #[getter]
    fn amplitudes(&self) -> Vec<C64> {
        self.inner.state.amplitudes().to_vec()
    }

    /// Occupied modes of each basis state; mode `2·site + spin`, spin 0 = up.
    #[getter]
    fn basis(&self) -> Vec<Vec<usize>> {
        self.inner
            .state
            .basis()
            .states()
            .iter()
            .map(|s| s.modes().collect())
            .collect()
    }

    /// Antisymmetric amplitude matrix `w[a][b]` of the labeled-particle form.
    fn first_quantized(&self) -> PyResult<Vec<Vec<C64>>> {
        let w = firstq::from_second_quantized(&self.inner.state).map_err(err)?;
        Ok(w.amplitudes()
            .rows()
            .into_iter()
            .map(|r| r.to_vec())
            .collect())
    }

    /// `C = <AB> - <A><B>` for pair 'i' to 'iv'.
    fn correlation(&self, pair_name: &str) -> PyResult<C64> {
        self.model
            .pair_correlation(&self.inner.state, pair(pair_name)?)
            .map_err(err)
    }

    #[pyo3(signature = (tol = slater::DEFAULT_TOL))]
    fn slater<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        let w = firstq::from_second_quantized(&self.inner.state).map_err(err)?;
        slater_dict(py, &slater::slater_rank(&w, tol).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "GroundState(energy={}, gap={})",
            self.inner.energy, self.inner.gap
        )
    }
}

/// Closed-form correlations at `x`.
#[pyfunction]
fn closed_form<'py>(py: Python<'py>, x: f64) -> PyResult<Bound<'py, PyDict>> {
    let cf = hubbard::closed_form(x).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("x", cf.x)?;
    d.set_item("f", cf.f)?;
    d.set_item("g", cf.g)?;
    d.set_item("C_s1s2", cf.c_electron_spins)?;
    d.set_item("C_S1S2", cf.c_site_spins)?;
    d.set_item("E_nn", cf.e_bonding)?;
    d.set_item("C_N1N2", cf.c_site_numbers)?;
    Ok(d)
}

/// Largest |C| for a pair over all two-electron states.
#[pyfunction]
#[pyo3(signature = (pair_name, restarts = 64, seed = 42, oracle_samples = 0))]
fn max_abs_correlation<'py>(
    py: Python<'py>,
    pair_name: &str,
    restarts: usize,
    seed: u64,
    oracle_samples: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let p = pair(pair_name)?;
    let options = MaximizeOptions {
        restarts: restarts.max(1),
        seed,
        oracle_samples,
        ..MaximizeOptions::default()
    };
    let m = py
        .detach(|| HubbardModel::default().pair_maximum(p, &options))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("value", m.value)?;
    d.set_item("argmax", m.argmax.to_vec())?;
    d.set_item("converged", m.diagnostics.converged)?;
    d.set_item("iterations", m.diagnostics.iterations)?;
    d.set_item("final_grad_norm", m.diagnostics.final_grad_norm)?;
    d.set_item("oracle_max", m.diagnostics.oracle_max)?;
    Ok(d)
}

/// Degree of entanglement `|C| / max |C|` of the ground state at `x`.
#[pyfunction]
#[pyo3(signature = (x, pair_name, restarts = 64, seed = 42))]
fn degree(py: Python<'_>, x: f64, pair_name: &str, restarts: usize, seed: u64) -> PyResult<f64> {
    let p = pair(pair_name)?;
    let options = MaximizeOptions {
        restarts: restarts.max(1),
        seed,
        oracle_samples: 0,
        ..MaximizeOptions::default()
    };
    py.detach(|| {
        let model = HubbardModel::default();
        let gs = model.ground_state(&HubbardParams::from_x(x)?)?;
        let c = model.pair_correlation(&gs.state, p)?;
        let max = model.pair_maximum(p, &options)?;
        Ok(fermicorr::entangle::CorrelationReport::new(c, max.value, (), max.diagnostics).e)
    })
    .map_err(err)
}

/// Slater rank of an antisymmetric amplitude matrix.
#[pyfunction]
#[pyo3(signature = (w, tol = slater::DEFAULT_TOL))]
fn slater_rank<'py>(py: Python<'py>, w: Vec<Vec<C64>>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let n = w.len();
    if w.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("amplitude matrix must be square"));
    }
    let m = Array2::from_shape_fn((n, n), |(i, j)| w[i][j]);
    slater_dict(py, &slater::slater_rank_of(&m, tol).map_err(err)?)
}

/// `(k, k', numerator, denominator, conditional)`
type CoincidenceRow = (usize, usize, f64, f64, f64);

/// Conditional spin coincidences for the doubly occupied bonding orbital on
/// `n_cells` cells.
#[pyfunction]
#[pyo3(signature = (n_cells = spindensity::DEFAULT_CELLS))]
fn coincidence_table(n_cells: usize) -> PyResult<Vec<CoincidenceRow>> {
    let u = spindensity::default_bonding_orbital(n_cells).map_err(err)?;
    let psi = spindensity::doubly_occupied(&u).map_err(err)?;
    let table = spindensity::coincidence_table(&u.grid(), &psi).map_err(err)?;
    Ok(table
        .rows
        .iter()
        .map(|r| (r.k, r.k_prime, r.numerator, r.denominator, r.conditional))
        .collect())
}

#[pymodule]
fn pyfermicorr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<GroundState>()?;
    m.add_function(wrap_pyfunction!(closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(max_abs_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(degree, m)?)?;
    m.add_function(wrap_pyfunction!(slater_rank, m)?)?;
    m.add_function(wrap_pyfunction!(coincidence_table, m)?)?;
    Ok(())
}
