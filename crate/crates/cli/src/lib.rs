//! Check orchestration behind the `bfcg` binary. Every check renders a
//! section of plain `key value` lines ending in a PASS/FAIL verdict.

mod checks;

pub use checks::{dof_section, run_check, Check, CHECK_ORDER, MIN_ORDER};

use bfcg_core::crossed_module::{builtin_module, load_crossed_module, DifferentialCrossedModule};
use bfcg_core::Error;
use std::fmt::Write;
use std::path::PathBuf;

pub const REPORT_HEADER: &str = "# bfcg-report 1";
pub const SMOKE_MODULES: [&str; 2] = ["adjoint(su2)", "vector_poincare"];

/// Everything a run depends on; identical configs give identical reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub module: Option<String>,
    pub spec: Option<PathBuf>,
    /// Resolutions for every check; `None` selects each check's own ladder.
    /// Refinement checks need three or more, strictly increasing.
    pub ns: Option<Vec<usize>>,
    /// Spacing at the first resolution; the others scale as `1/n`.
    /// Default `2π/n`.
    pub a: Option<f64>,
    pub seed: u64,
    /// Overrides each check's own tolerance.
    pub tol: Option<f64>,
    /// Dimensions for the `dof` check; default from the module.
    pub dims: Option<(u64, u64)>,
}

impl RunConfig {
    /// Side length of the periodic box shared by every lattice of `ns`.
    pub fn length(&self, ns: &[usize]) -> f64 {
        self.a.map_or(std::f64::consts::TAU, |a| a * ns[0] as f64)
    }

    fn validate(&self) -> Result<(), Error> {
        if let Some(ns) = &self.ns {
            if ns.is_empty() {
                return Err(Error::InvalidArgument("--n needs at least one resolution".into()));
            }
            if ns.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidArgument("--n must be strictly increasing".into()));
            }
        }
        if let Some(a) = self.a {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::InvalidArgument(format!("--a must be positive, got {a}")));
            }
        }
        Ok(())
    }

    fn modules(&self) -> Result<Vec<DifferentialCrossedModule>, Error> {
        match (&self.spec, &self.module) {
            (Some(path), _) => Ok(vec![load_crossed_module(path)?]),
            (None, Some(name)) => Ok(vec![builtin_module(name)?]),
            (None, None) => SMOKE_MODULES.iter().map(|m| builtin_module(m)).collect(),
        }
    }
}

/// One check on one module.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub check: Check,
    pub module: String,
    pub lines: Vec<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: String,
    /// 0 when every check passes, 1 otherwise.
    pub code: i32,
}

/// Runs `checks` on every selected module. Errors (unreadable spec, bad
/// arguments) are returned for the caller to map to exit code 2.
pub fn run(checks: &[Check], cfg: &RunConfig) -> Result<Outcome, Error> {
    cfg.validate()?;
    let mut sections = Vec::new();
    match cfg.dims {
        Some((p, q)) if checks == [Check::Dof] => sections.push(dof_section(p, q)?),
        _ => {
            for cm in &cfg.modules()? {
                for &check in checks {
                    sections.push(run_check(check, cm, cfg)?);
                }
            }
        }
    }
    let pass = sections.iter().all(|s| s.pass);
    let mut r = String::new();
    writeln!(r, "{REPORT_HEADER}").unwrap();
    let names: Vec<&str> = checks.iter().map(|c| c.name()).collect();
    writeln!(r, "checks {}", names.join(",")).unwrap();
    match &cfg.ns {
        Some(ns) => {
            let ns: Vec<String> = ns.iter().map(|n| n.to_string()).collect();
            writeln!(r, "n {}", ns.join(",")).unwrap();
        }
        None => writeln!(r, "n per-check").unwrap(),
    }
    match cfg.a {
        Some(a) => writeln!(r, "a {a:.6e}").unwrap(),
        None => writeln!(r, "a 2pi/n").unwrap(),
    }
    writeln!(r, "seed {}", cfg.seed).unwrap();
    for s in &sections {
        writeln!(r, "[{} {}]", s.check.name(), s.module).unwrap();
        for l in &s.lines {
            writeln!(r, "{l}").unwrap();
        }
        writeln!(r, "{} {}", s.check.name(), verdict(s.pass)).unwrap();
    }
    writeln!(r, "result {}", verdict(pass)).unwrap();
    Ok(Outcome { report: r, code: if pass { 0 } else { 1 } })
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
