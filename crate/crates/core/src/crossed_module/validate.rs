use super::metric::{conditioning, NONDEGENERACY_THRESHOLD};
use super::DifferentialCrossedModule;
use std::fmt;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub violation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub checks: Vec<IdentityCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failing(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {:.6e} {}",
                c.name,
                c.violation,
                if c.pass { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

struct Residual(f64);

impl Residual {
    fn add(&mut self, r: f64) {
        // NaN must not be swallowed by max
        if r.is_nan() || r.abs() > self.0 {
            self.0 = if r.is_nan() { f64::INFINITY } else { r.abs() };
        }
    }
}

fn max_residual(body: impl FnOnce(&mut Residual)) -> f64 {
    let mut r = Residual(0.0);
    body(&mut r);
    r.0
}

/// Checks every algebraic identity of a differential crossed module. A failing
/// module yields a failing report; nothing here errors.
pub fn validate_crossed_module(cm: &DifferentialCrossedModule, tol: f64) -> ValidationReport {
    let (p, q) = (cm.p, cm.q);
    let f = &cm.f;
    let phi = &cm.phi;
    let del = &cm.del;
    let act = &cm.act;
    let qg = &cm.form_g;
    let qh = &cm.form_h;

    // ▷_{αaβ} = ▷^γ_{aβ} q_{γα}
    let lowered = ndarray::Array3::from_shape_fn((q, p, q), |(al, a, be)| {
        (0..q).map(|g| act[[g, a, be]] * qh[[g, al]]).sum::<f64>()
    });
    let act_low = |al: usize, a: usize, be: usize| lowered[[al, a, be]];

    let mut out: Vec<(&'static str, f64)> = Vec::new();

    out.push((
        "f_antisymmetry",
        max_residual(|r| {
            for a in 0..p {
                for b in 0..p {
                    for c in 0..p {
                        r.add(f[[a, b, c]] + f[[a, c, b]]);
                    }
                }
            }
        }),
    ));
    out.push((
        "phi_antisymmetry",
        max_residual(|r| {
            for a in 0..q {
                for b in 0..q {
                    for c in 0..q {
                        r.add(phi[[a, b, c]] + phi[[a, c, b]]);
                    }
                }
            }
        }),
    ));
    // f^d_{ac} f^c_{be} = f^c_{ab} f^d_{ce} − f^c_{ae} f^d_{cb}
    let jacobi = |t: &ndarray::Array3<f64>, n: usize| {
        max_residual(|r| {
            for a in 0..n {
                for b in 0..n {
                    for d in 0..n {
                        for e in 0..n {
                            let mut s = 0.0;
                            for c in 0..n {
                                s += t[[d, a, c]] * t[[c, b, e]] - t[[c, a, b]] * t[[d, c, e]]
                                    + t[[c, a, e]] * t[[d, c, b]];
                            }
                            r.add(s);
                        }
                    }
                }
            }
        })
    };
    out.push(("jacobi_f", jacobi(f, p)));
    out.push(("jacobi_phi", jacobi(phi, q)));
    // ▷^β_{aα} ∂_β^b = ∂_α^c f^b_{ac}
    out.push((
        "equivariance",
        max_residual(|r| {
            for a in 0..p {
                for al in 0..q {
                    for b in 0..p {
                        let lhs: f64 = (0..q).map(|be| act[[be, a, al]] * del[[be, b]]).sum();
                        let rhs: f64 = (0..p).map(|c| del[[al, c]] * f[[b, a, c]]).sum();
                        r.add(lhs - rhs);
                    }
                }
            }
        }),
    ));
    // ∂_α^a ▷^γ_{aβ} = φ^γ_{αβ}
    out.push((
        "composition",
        max_residual(|r| {
            for al in 0..q {
                for be in 0..q {
                    for ga in 0..q {
                        let lhs: f64 = (0..p).map(|a| del[[al, a]] * act[[ga, a, be]]).sum();
                        r.add(lhs - phi[[ga, al, be]]);
                    }
                }
            }
        }),
    ));
    // f^a_{bc} ▷_{αaβ} = ▷_{αbγ} ▷^γ_{cβ} − ▷_{αcγ} ▷^γ_{bβ}
    out.push((
        "mixed_relation",
        max_residual(|r| {
            for al in 0..q {
                for be in 0..q {
                    for b in 0..p {
                        for c in 0..p {
                            let lhs: f64 = (0..p).map(|a| f[[a, b, c]] * act_low(al, a, be)).sum();
                            let rhs: f64 = (0..q)
                                .map(|g| {
                                    act_low(al, b, g) * act[[g, c, be]]
                                        - act_low(al, c, g) * act[[g, b, be]]
                                })
                                .sum();
                            r.add(lhs - rhs);
                        }
                    }
                }
            }
        }),
    ));
    let symmetry = |m: &ndarray::Array2<f64>| {
        max_residual(|r| {
            let n = m.nrows();
            for i in 0..n {
                for j in 0..n {
                    r.add(m[[i, j]] - m[[j, i]]);
                }
            }
        })
    };
    out.push(("form_g_symmetry", symmetry(qg)));
    out.push(("form_h_symmetry", symmetry(qh)));
    let shortfall = |m: &ndarray::Array2<f64>| {
        let c = conditioning(m);
        if c >= NONDEGENERACY_THRESHOLD {
            0.0
        } else {
            (NONDEGENERACY_THRESHOLD - c) / NONDEGENERACY_THRESHOLD
        }
    };
    out.push(("form_g_nondegeneracy", shortfall(qg)));
    out.push(("form_h_nondegeneracy", shortfall(qh)));
    // f^c_{ab} Q_{cd} + f^c_{ad} Q_{bc} = 0
    out.push((
        "form_g_invariance",
        max_residual(|r| {
            for a in 0..p {
                for b in 0..p {
                    for d in 0..p {
                        let s: f64 = (0..p)
                            .map(|c| f[[c, a, b]] * qg[[c, d]] + f[[c, a, d]] * qg[[b, c]])
                            .sum();
                        r.add(s);
                    }
                }
            }
        }),
    ));
    // ▷_{αaβ} = −▷_{βaα}
    out.push((
        "form_h_invariance",
        max_residual(|r| {
            for a in 0..p {
                for al in 0..q {
                    for be in 0..q {
                        r.add(act_low(al, a, be) + act_low(be, a, al));
                    }
                }
            }
        }),
    ));

    ValidationReport {
        tolerance: tol,
        checks: out
            .into_iter()
            .map(|(name, violation)| IdentityCheck {
                name,
                violation,
                pass: violation <= tol,
            })
            .collect(),
    }
}
