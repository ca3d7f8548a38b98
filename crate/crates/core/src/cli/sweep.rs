//! Ground-state correlations over a grid of `x = U/(4t)` compared against
//! the closed forms.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use super::format::{g15, round15};
use crate::entangle::{MaximizeOptions, OptimizerDiagnostics};
use crate::error::{Error, Result};
use crate::hubbard::{closed_form, HubbardModel, HubbardParams, ObservablePair};

pub const SWEEP_TOL: f64 = 1e-8;

pub const CSV_HEADER: &str =
    "x,C_s1s2,E_s1s2,C_S1S2,E_S1S2,C_nn,E_nn,C_N1N2,E_N1N2,cf_C_S1S2,cf_E_nn,cf_C_N1N2,err_max";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Evenly spaced (linear) or geometrically spaced (log) points, endpoints
/// included.
pub fn grid(x_min: f64, x_max: f64, n_points: usize, scale: Scale) -> Result<Vec<f64>> {
    let bad = |msg: String| Err(Error::InvalidParameter(msg));
    if !(x_min.is_finite() && x_max.is_finite()) {
        return bad("x range must be finite".into());
    }
    if x_min < 0.0 {
        return bad(format!("x-min must be >= 0, got {x_min}"));
    }
    if x_max < x_min {
        return bad(format!("x-max {x_max} is below x-min {x_min}"));
    }
    if n_points == 0 {
        return bad("n-points must be at least 1".into());
    }
    if scale == Scale::Log && x_min <= 0.0 {
        return bad("log scale needs x-min > 0".into());
    }
    if n_points == 1 {
        return Ok(vec![x_min]);
    }
    let last = (n_points - 1) as f64;
    Ok((0..n_points)
        .map(|i| {
            if i == 0 {
                return x_min;
            }
            if i == n_points - 1 {
                return x_max;
            }
            let s = i as f64 / last;
            match scale {
                Scale::Linear => x_min + s * (x_max - x_min),
                Scale::Log => (x_min.ln() + s * (x_max.ln() - x_min.ln())).exp(),
            }
        })
        .collect())
}

/// max |C| for each pair, computed once since it does not depend on `x`.
#[derive(Debug, Clone, Serialize)]
pub struct PairMaximum {
    pub pair: &'static str,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub final_grad_norm: f64,
    #[serde(skip)]
    pub diagnostics: OptimizerDiagnostics,
}

#[derive(Debug, Clone)]
pub struct Maxima(pub [PairMaximum; 4]);

impl Maxima {
    pub fn compute(model: &HubbardModel, options: &MaximizeOptions) -> Result<Self> {
        let mut out = Vec::with_capacity(4);
        for pair in ObservablePair::ALL {
            let m = model.pair_maximum(pair, options)?;
            out.push(PairMaximum {
                pair: pair.roman(),
                value: m.value,
                converged: m.diagnostics.converged,
                iterations: m.diagnostics.iterations,
                final_grad_norm: m.diagnostics.final_grad_norm,
                diagnostics: m.diagnostics,
            });
        }
        Ok(Self(out.try_into().expect("four pairs")))
    }

    pub fn get(&self, pair: ObservablePair) -> f64 {
        self.0[ObservablePair::ALL
            .iter()
            .position(|&p| p == pair)
            .expect("listed")]
        .value
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub x: f64,
    #[serde(rename = "C_s1s2")]
    pub c_s1s2: f64,
    #[serde(rename = "E_s1s2")]
    pub e_s1s2: f64,
    #[serde(rename = "C_S1S2")]
    pub c_site_spins: f64,
    #[serde(rename = "E_S1S2")]
    pub e_site_spins: f64,
    #[serde(rename = "C_nn")]
    pub c_nn: f64,
    #[serde(rename = "E_nn")]
    pub e_nn: f64,
    #[serde(rename = "C_N1N2")]
    pub c_site_numbers: f64,
    #[serde(rename = "E_N1N2")]
    pub e_site_numbers: f64,
    #[serde(rename = "cf_C_S1S2")]
    pub cf_c_site_spins: f64,
    #[serde(rename = "cf_E_nn")]
    pub cf_e_nn: f64,
    #[serde(rename = "cf_C_N1N2")]
    pub cf_c_site_numbers: f64,
    #[serde(rename = "err_C_s1s2")]
    pub err_c_s1s2: f64,
    #[serde(rename = "err_C_S1S2")]
    pub err_c_site_spins: f64,
    #[serde(rename = "err_E_nn")]
    pub err_e_nn: f64,
    #[serde(rename = "err_C_N1N2")]
    pub err_c_site_numbers: f64,
    pub err_max: f64,
}

fn degree(c: f64, max: f64) -> f64 {
    if max > 0.0 {
        (c.abs() / max).min(1.0)
    } else {
        0.0
    }
}

pub fn evaluate(model: &HubbardModel, x: f64, maxima: &Maxima) -> Result<SweepRow> {
    let gs = model.ground_state(&HubbardParams::from_x(x)?)?;
    if gs.degenerate {
        return Err(Error::InvalidParameter(format!(
            "ground state at x = {x} is degenerate (gap {:e})",
            gs.gap
        )));
    }
    let c = |pair| -> Result<f64> { Ok(model.pair_correlation(&gs.state, pair)?.re) };
    let c_s1s2 = c(ObservablePair::ElectronSpins)?;
    let c_site_spins = c(ObservablePair::SiteSpins)?;
    let c_nn = c(ObservablePair::BondingOccupations)?;
    let c_site_numbers = c(ObservablePair::SiteOccupations)?;
    let e_nn = degree(c_nn, maxima.get(ObservablePair::BondingOccupations));
    let cf = closed_form(x)?;
    let err_c_s1s2 = (c_s1s2 - cf.c_electron_spins).abs();
    let err_c_site_spins = (c_site_spins - cf.c_site_spins).abs();
    let err_e_nn = (e_nn - cf.e_bonding).abs();
    let err_c_site_numbers = (c_site_numbers - cf.c_site_numbers).abs();
    Ok(SweepRow {
        x,
        c_s1s2,
        e_s1s2: degree(c_s1s2, maxima.get(ObservablePair::ElectronSpins)),
        c_site_spins,
        e_site_spins: degree(c_site_spins, maxima.get(ObservablePair::SiteSpins)),
        c_nn,
        e_nn,
        c_site_numbers,
        e_site_numbers: degree(c_site_numbers, maxima.get(ObservablePair::SiteOccupations)),
        cf_c_site_spins: cf.c_site_spins,
        cf_e_nn: cf.e_bonding,
        cf_c_site_numbers: cf.c_site_numbers,
        err_c_s1s2,
        err_c_site_spins,
        err_e_nn,
        err_c_site_numbers,
        err_max: err_c_s1s2
            .max(err_c_site_spins)
            .max(err_e_nn)
            .max(err_c_site_numbers),
    })
}

/// Rows in the order of `xs`; points are evaluated in parallel.
pub fn sweep(model: &HubbardModel, xs: &[f64], maxima: &Maxima) -> Result<Vec<SweepRow>> {
    xs.par_iter().map(|&x| evaluate(model, x, maxima)).collect()
}

impl SweepRow {
    fn fields(&self) -> [f64; 13] {
        [
            self.x,
            self.c_s1s2,
            self.e_s1s2,
            self.c_site_spins,
            self.e_site_spins,
            self.c_nn,
            self.e_nn,
            self.c_site_numbers,
            self.e_site_numbers,
            self.cf_c_site_spins,
            self.cf_e_nn,
            self.cf_c_site_numbers,
            self.err_max,
        ]
    }

    fn rounded(&self) -> Self {
        let r = round15;
        Self {
            x: r(self.x),
            c_s1s2: r(self.c_s1s2),
            e_s1s2: r(self.e_s1s2),
            c_site_spins: r(self.c_site_spins),
            e_site_spins: r(self.e_site_spins),
            c_nn: r(self.c_nn),
            e_nn: r(self.e_nn),
            c_site_numbers: r(self.c_site_numbers),
            e_site_numbers: r(self.e_site_numbers),
            cf_c_site_spins: r(self.cf_c_site_spins),
            cf_e_nn: r(self.cf_e_nn),
            cf_c_site_numbers: r(self.cf_c_site_numbers),
            err_c_s1s2: r(self.err_c_s1s2),
            err_c_site_spins: r(self.err_c_site_spins),
            err_e_nn: r(self.err_e_nn),
            err_c_site_numbers: r(self.err_c_site_numbers),
            err_max: r(self.err_max),
        }
    }
}

pub fn write_csv<W: Write>(out: &mut W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let line: Vec<String> = row.fields().iter().map(|&v| g15(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonSweep<'a> {
    seed: u64,
    tolerance: f64,
    maxima: &'a [PairMaximum],
    rows: Vec<SweepRow>,
}

pub fn write_json<W: Write>(
    out: &mut W,
    rows: &[SweepRow],
    maxima: &Maxima,
    seed: u64,
) -> io::Result<()> {
    let maxima: Vec<PairMaximum> = maxima
        .0
        .iter()
        .map(|m| PairMaximum {
            value: round15(m.value),
            final_grad_norm: round15(m.final_grad_norm),
            ..m.clone()
        })
        .collect();
    let doc = JsonSweep {
        seed,
        tolerance: SWEEP_TOL,
        maxima: &maxima,
        rows: rows.iter().map(SweepRow::rounded).collect(),
    };
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}
