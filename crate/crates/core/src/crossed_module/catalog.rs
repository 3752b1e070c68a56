//! Built-in crossed modules.
//!
//! Normalizations: `su2` uses `f^a_{bc} = ε_{abc}` with `Q = 1`; `so31` uses the
//! basis `M_{IJ}` (I < J) of the vector representation with `η = diag(-1,1,1,1)`
//! and the Killing form `Q_{ab} = f^c_{ad} f^d_{bc}`.

use super::DifferentialCrossedModule;
use crate::{Error, Result};
use ndarray::{Array2, Array3};

/// A Lie algebra given by its structure constants and an invariant form.
struct LieAlgebra {
    f: Array3<f64>,
    form: Array2<f64>,
}

fn su2() -> LieAlgebra {
    let mut f = Array3::zeros((3, 3, 3));
    for (a, b, c, s) in [
        (0, 1, 2, 1.0),
        (1, 2, 0, 1.0),
        (2, 0, 1, 1.0),
        (0, 2, 1, -1.0),
        (2, 1, 0, -1.0),
        (1, 0, 2, -1.0),
    ] {
        f[[a, b, c]] = s;
    }
    LieAlgebra {
        f,
        form: Array2::eye(3),
    }
}

const MINKOWSKI: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// Ordered index pairs `(I, J)`, `I < J`, labelling the so(3,1) basis.
fn lorentz_pairs() -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(6);
    for i in 0..4 {
        for j in (i + 1)..4 {
            out.push((i, j));
        }
    }
    out
}

/// `(M_{IJ})^K_L = δ^K_I η_{JL} − δ^K_J η_{IL}`.
fn lorentz_generators() -> Vec<Array2<f64>> {
    lorentz_pairs()
        .into_iter()
        .map(|(i, j)| {
            let mut m = Array2::zeros((4, 4));
            m[[i, j]] += MINKOWSKI[j];
            m[[j, i]] -= MINKOWSKI[i];
            m
        })
        .collect()
}

fn so31() -> LieAlgebra {
    let gens = lorentz_generators();
    let pairs = lorentz_pairs();
    let mut f = Array3::zeros((6, 6, 6));
    for a in 0..6 {
        for b in 0..6 {
            let comm = gens[a].dot(&gens[b]) - gens[b].dot(&gens[a]);
            for (c, &(i, j)) in pairs.iter().enumerate() {
                f[[c, a, b]] = comm[[i, j]] / MINKOWSKI[j];
            }
        }
    }
    let mut form = Array2::zeros((6, 6));
    for a in 0..6 {
        for b in 0..6 {
            let mut s = 0.0;
            for c in 0..6 {
                for d in 0..6 {
                    s += f[[c, a, d]] * f[[d, b, c]];
                }
            }
            form[[a, b]] = s;
        }
    }
    LieAlgebra { f, form }
}

fn lie_algebra(name: &str) -> Option<LieAlgebra> {
    match name {
        "su2" | "su(2)" | "so3" | "so(3)" => Some(su2()),
        "so31" | "so(3,1)" => Some(so31()),
        _ => None,
    }
}

fn adjoint(tag: &str, g: LieAlgebra) -> DifferentialCrossedModule {
    let p = g.f.shape()[0];
    let mut cm = DifferentialCrossedModule::zeros(format!("adjoint({tag})"), p, p);
    cm.del = Array2::eye(p);
    cm.act = g.f.clone();
    cm.phi = g.f.clone();
    cm.form_h = g.form.clone();
    cm.f = g.f;
    cm.form_g = g.form;
    cm
}

fn trivial_bf(tag: &str) -> Option<DifferentialCrossedModule> {
    if let Some(g) = lie_algebra(tag) {
        let p = g.f.shape()[0];
        let mut cm = DifferentialCrossedModule::zeros(format!("trivial_bf({tag})"), p, 0);
        cm.f = g.f;
        cm.form_g = g.form;
        return Some(cm);
    }
    let p: usize = tag.parse().ok().filter(|p| *p >= 1)?;
    Some(DifferentialCrossedModule::zeros(
        format!("trivial_bf({p})"),
        p,
        0,
    ))
}

fn vector_poincare() -> DifferentialCrossedModule {
    let g = so31();
    let mut cm = DifferentialCrossedModule::zeros("vector_poincare", 6, 4);
    for (a, m) in lorentz_generators().iter().enumerate() {
        for k in 0..4 {
            for l in 0..4 {
                cm.act[[k, a, l]] = m[[k, l]];
            }
        }
    }
    cm.form_h = Array2::from_diag(&ndarray::arr1(&MINKOWSKI));
    cm.f = g.f;
    cm.form_g = g.form;
    cm
}

fn split_call(name: &str) -> Option<(&str, &str)> {
    let open = name.find('(')?;
    let inner = name[open + 1..].strip_suffix(')')?;
    Some((&name[..open], inner))
}

/// Looks up a catalog module: `trivial_bf(<algebra>|<p>)`, `adjoint(<algebra>)`,
/// `vector_poincare`, `abelian(<p>,<q>)`. Algebras: `su2`, `so31`.
pub fn builtin_module(name: &str) -> Result<DifferentialCrossedModule> {
    let name = name.trim();
    let unknown = || Error::UnknownModule(name.to_string());
    if name == "vector_poincare" {
        return Ok(vector_poincare());
    }
    let (head, arg) = split_call(name).ok_or_else(unknown)?;
    let arg = arg.trim();
    match head.trim() {
        "adjoint" => lie_algebra(arg)
            .map(|g| adjoint(arg, g))
            .ok_or_else(unknown),
        "trivial_bf" => trivial_bf(arg).ok_or_else(unknown),
        "abelian" => {
            let mut it = arg.split(',').map(|s| s.trim().parse::<usize>());
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(p)), Some(Ok(q)), None) if p >= 1 => Ok(
                    DifferentialCrossedModule::zeros(format!("abelian({p},{q})"), p, q),
                ),
                _ => Err(unknown()),
            }
        }
        _ => Err(unknown()),
    }
}

/// Names exercised by the catalog-wide checks.
pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "trivial_bf(1)",
        "trivial_bf(su2)",
        "trivial_bf(so31)",
        "adjoint(su2)",
        "adjoint(so31)",
        "vector_poincare",
        "abelian(1,1)",
        "abelian(2,3)",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_su2_shapes() {
        let cm = builtin_module("adjoint(su2)").unwrap();
        assert_eq!((cm.p, cm.q), (3, 3));
        assert_eq!(cm.f[[0, 1, 2]], 1.0);
        assert_eq!(cm.phi, cm.f);
        assert_eq!(cm.act, cm.f);
        assert_eq!(cm.del, Array2::<f64>::eye(3));
    }

    #[test]
    fn vector_poincare_has_zero_boundary_map() {
        let cm = builtin_module("vector_poincare").unwrap();
        assert_eq!((cm.p, cm.q), (6, 4));
        assert!(cm.del.iter().all(|x| *x == 0.0));
        assert!(cm.phi.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn abelian_is_all_zero() {
        let cm = builtin_module("abelian(2,3)").unwrap();
        assert!(cm.is_abelian());
        assert!(cm.del.iter().all(|x| *x == 0.0));
        assert_eq!(cm.form_h, Array2::<f64>::eye(3));
    }

    #[test]
    fn so31_killing_form_is_diagonal_and_indefinite() {
        let g = so31();
        let diag: Vec<f64> = (0..6).map(|a| g.form[[a, a]]).collect();
        assert!(diag.iter().any(|x| *x > 0.0));
        assert!(diag.iter().any(|x| *x < 0.0));
        for a in 0..6 {
            for b in 0..6 {
                if a != b {
                    assert_eq!(g.form[[a, b]], 0.0);
                }
            }
        }
    }

    #[test]
    fn unknown_names_are_rejected() {
        for bad in ["adjoint(e8)", "abelian(0,2)", "abelian(1)", "nonsense", "trivial_bf(0)"] {
            assert!(matches!(builtin_module(bad), Err(Error::UnknownModule(_))), "{bad}");
        }
    }
}
