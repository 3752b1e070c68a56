//! Refinement studies: evaluate a residual on a ladder of lattices and fit
//! the slope of `ln r` against `ln a`.

use crate::lattice::{make_lattice, Lattice};
use crate::{Error, Result};
use std::fmt;

/// Residuals at or below this are treated as exact zeros.
pub const EXACT_FLOOR: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Exact,
    Fitted(f64),
}

impl Order {
    /// `Exact` counts as arbitrarily high order.
    pub fn at_least(&self, min: f64) -> bool {
        match self {
            Order::Exact => true,
            Order::Fitted(o) => *o >= min,
        }
    }

    pub fn within(&self, lo: f64, hi: f64) -> bool {
        matches!(self, Order::Fitted(o) if *o >= lo && *o <= hi)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Exact => write!(f, "exact"),
            Order::Fitted(o) => write!(f, "{o:.3}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub spacing: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub order: Order,
}

impl fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "n={:<4} a={:.6e} residual={:.6e}", r.n, r.spacing, r.residual)?;
        }
        write!(f, "order {}", self.order)
    }
}

/// Least-squares slope of `ln r` versus `ln a`.
pub fn fit_order(spacings: &[f64], residuals: &[f64]) -> Result<Order> {
    if spacings.len() != residuals.len() {
        return Err(Error::InvalidArgument("spacings and residuals differ in length".into()));
    }
    if spacings.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a refinement study needs at least 3 resolutions, got {}",
            spacings.len()
        )));
    }
    if residuals.iter().all(|r| r.abs() <= EXACT_FLOOR) {
        return Ok(Order::Exact);
    }
    if residuals.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonFinite("residual".into()));
    }
    let xs: Vec<f64> = spacings.iter().map(|a| a.ln()).collect();
    // a residual at the floor would dominate the fit; clamp it there
    let ys: Vec<f64> = residuals.iter().map(|r| r.abs().max(EXACT_FLOOR).ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(Order::Fitted(sxy / sxx))
}

/// Runs `evaluator` on `dim`-dimensional lattices of side `length` with `n`
/// sites per axis for each `n` in `ns`.
pub fn convergence_study<F>(dim: usize, length: f64, ns: &[usize], mut evaluator: F) -> Result<ConvergenceReport>
where
    F: FnMut(&Lattice) -> Result<f64>,
{
    if ns.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a refinement study needs at least 3 resolutions, got {}",
            ns.len()
        )));
    }
    let mut rows = Vec::new();
    for &n in ns {
        let l = make_lattice(dim, n, length / n as f64)?;
        rows.push(ConvergenceRow {
            n,
            spacing: l.spacing,
            residual: evaluator(&l)?,
        });
    }
    let a: Vec<f64> = rows.iter().map(|r| r.spacing).collect();
    let r: Vec<f64> = rows.iter().map(|r| r.residual).collect();
    let order = fit_order(&a, &r)?;
    Ok(ConvergenceReport { rows, order })
}
