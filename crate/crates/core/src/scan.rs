//! Parameter grids over `(p, q)` for the two scenarios, written as CSV.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optimize::OptimizerConfig;
use crate::scenarios::Scenario;

pub const CSV_HEADER: &str = "p,q,min_value";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    ClosedForm,
    Optimizer,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed_form" => Ok(Engine::ClosedForm),
            "optimizer" => Ok(Engine::Optimizer),
            other => Err(Error::InvalidArgument(format!("unknown engine '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub p: f64,
    pub q: f64,
    pub min_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanGrid {
    /// `(start, stop, step)`.
    pub p_range: (f64, f64, f64),
    pub q_range: (f64, f64, f64),
    pub rows: Vec<ScanRow>,
}

/// `0, step, 2 step, ...` up to 1.
pub fn grid_axis(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 0.25) {
        return Err(Error::InvalidArgument(format!("step {step} outside (0, 0.25]")));
    }
    let n = (1.0 / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| i as f64 * step).collect())
}

/// Grid points in `(p, q)` order, restricted to the scenario's domain.
pub fn grid_points(scenario: &Scenario, step: f64) -> Result<Vec<(f64, f64)>> {
    let axis = grid_axis(step)?;
    Ok(axis
        .iter()
        .flat_map(|&p| axis.iter().map(move |&q| (p, q)))
        .filter(|&(p, q)| scenario.in_domain(p, q))
        .collect())
}

pub fn evaluate(scenario: &Scenario, engine: Engine, p: f64, q: f64, config: &OptimizerConfig) -> Result<f64> {
    match engine {
        Engine::ClosedForm => Ok(scenario.closed_form(p, q)),
        Engine::Optimizer => {
            let r = scenario.optimized(p, q, config)?;
            if !r.converged {
                return Err(Error::Numerical(format!(
                    "optimizer did not converge at p={p}, q={q}"
                )));
            }
            Ok(r.value)
        }
    }
}

pub fn run_scan(scenario: &Scenario, step: f64, engine: Engine, config: &OptimizerConfig) -> Result<ScanGrid> {
    let points = grid_points(scenario, step)?;
    let rows = points
        .par_iter()
        .map(|&(p, q)| {
            Ok(ScanRow {
                p,
                q,
                min_value: evaluate(scenario, engine, p, q, config)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let stop = grid_axis(step)?.last().copied().unwrap_or(0.0);
    Ok(ScanGrid {
        p_range: (0.0, stop, step),
        q_range: (0.0, stop, step),
        rows,
    })
}

impl ScanGrid {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            // Avoid printing "-0.000000000000".
            let v = if r.min_value.abs() < 5e-13 { 0.0 } else { r.min_value };
            writeln!(out, "{:.6},{:.6},{:.12}", r.p, r.q, v).expect("writing to a String");
        }
        out
    }

    pub fn value_at(&self, p: f64, q: f64) -> Option<f64> {
        let tol = self.p_range.2 * 1e-6;
        self.rows
            .iter()
            .find(|r| (r.p - p).abs() < tol && (r.q - q).abs() < tol)
            .map(|r| r.min_value)
    }
}
