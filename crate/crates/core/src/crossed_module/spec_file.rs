//! TOML spec files for crossed modules.
//!
//! ```toml
//! name = "adjoint(su2)"
//! index_order = "f[a,b,c]=f^a_bc phi[g,a,b]=phi^g_ab del[al,a]=d_al^a act[be,a,al]=act^be_a,al Q[a,b] qf[al,be]"
//! p = 3
//! q = 3
//! [f]
//! shape = [3, 3, 3]
//! data = [0.0, ...]
//! ```
//! with tables `f`, `phi`, `del`, `act`, `Q`, `qf`, each row-major.

use super::DifferentialCrossedModule;
use crate::{Error, Result};
use ndarray::{Array2, Array3};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const INDEX_ORDER: &str =
    "f[a,b,c]=f^a_bc phi[g,a,b]=phi^g_ab del[al,a]=d_al^a act[be,a,al]=act^be_a,al Q[a,b] qf[al,be]";

#[derive(Debug, Serialize, Deserialize)]
struct FlatTensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDocument {
    name: String,
    #[serde(default)]
    index_order: Option<String>,
    p: usize,
    q: usize,
    f: FlatTensor,
    phi: FlatTensor,
    del: FlatTensor,
    act: FlatTensor,
    #[serde(rename = "Q")]
    form_g: FlatTensor,
    #[serde(rename = "qf")]
    form_h: FlatTensor,
}

fn check(field: &str, t: &FlatTensor, expected: &[usize]) -> Result<()> {
    let n: usize = expected.iter().product();
    if t.shape != expected || t.data.len() != n {
        let mut found = t.shape.clone();
        if t.shape == expected {
            // shape header agrees but the payload does not
            found = vec![t.data.len()];
        }
        return Err(Error::ShapeMismatch {
            field: field.to_string(),
            expected: expected.to_vec(),
            found,
        });
    }
    if t.data.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(field.to_string()));
    }
    Ok(())
}

fn array3(t: FlatTensor) -> Array3<f64> {
    let s = (t.shape[0], t.shape[1], t.shape[2]);
    Array3::from_shape_vec(s, t.data).expect("checked shape")
}

fn array2(t: FlatTensor) -> Array2<f64> {
    let s = (t.shape[0], t.shape[1]);
    Array2::from_shape_vec(s, t.data).expect("checked shape")
}

/// Parses a spec document. Algebraic identities are not checked here.
pub fn parse_crossed_module(text: &str) -> Result<DifferentialCrossedModule> {
    let doc: SpecDocument = toml::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let (p, q) = (doc.p, doc.q);
    if p == 0 {
        return Err(Error::Malformed("p must be positive".into()));
    }
    check("f", &doc.f, &[p, p, p])?;
    check("phi", &doc.phi, &[q, q, q])?;
    check("del", &doc.del, &[q, p])?;
    check("act", &doc.act, &[q, p, q])?;
    check("Q", &doc.form_g, &[p, p])?;
    check("qf", &doc.form_h, &[q, q])?;
    Ok(DifferentialCrossedModule {
        name: doc.name,
        p,
        q,
        f: array3(doc.f),
        phi: array3(doc.phi),
        del: array2(doc.del),
        act: array3(doc.act),
        form_g: array2(doc.form_g),
        form_h: array2(doc.form_h),
    })
}

pub fn load_crossed_module(path: impl AsRef<Path>) -> Result<DifferentialCrossedModule> {
    let text = std::fs::read_to_string(path)?;
    parse_crossed_module(&text)
}

fn flat<D: ndarray::Dimension>(a: &ndarray::Array<f64, D>) -> FlatTensor {
    FlatTensor {
        shape: a.shape().to_vec(),
        data: a.iter().copied().collect(),
    }
}

pub fn render_crossed_module(cm: &DifferentialCrossedModule) -> String {
    let doc = SpecDocument {
        name: cm.name.clone(),
        index_order: Some(INDEX_ORDER.to_string()),
        p: cm.p,
        q: cm.q,
        f: flat(&cm.f),
        phi: flat(&cm.phi),
        del: flat(&cm.del),
        act: flat(&cm.act),
        form_g: flat(&cm.form_g),
        form_h: flat(&cm.form_h),
    };
    toml::to_string(&doc).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossed_module::builtin_module;

    const TRIVIAL: &str = r#"
name = "trivial"
p = 1
q = 0
[f]
shape = [1, 1, 1]
data = [0.0]
[phi]
shape = [0, 0, 0]
data = []
[del]
shape = [0, 1]
data = []
[act]
shape = [0, 1, 0]
data = []
[Q]
shape = [1, 1]
data = [1.0]
[qf]
shape = [0, 0]
data = []
"#;

    #[test]
    fn trivial_module_loads() {
        let cm = parse_crossed_module(TRIVIAL).unwrap();
        assert_eq!((cm.p, cm.q), (1, 0));
        assert!(cm.phi.is_empty() && cm.act.is_empty() && cm.del.is_empty());
        assert_eq!(cm.form_g[[0, 0]], 1.0);
    }

    #[test]
    fn su2_adjoint_round_trips_through_text() {
        let cm = builtin_module("adjoint(su2)").unwrap();
        let text = render_crossed_module(&cm);
        assert!(text.contains("index_order"));
        assert_eq!(parse_crossed_module(&text).unwrap(), cm);
    }

    #[test]
    fn wrong_f_shape_is_rejected() {
        let cm = builtin_module("adjoint(su2)").unwrap();
        let mut doc: toml::Table = toml::from_str(&render_crossed_module(&cm)).unwrap();
        let f = doc.get_mut("f").unwrap().as_table_mut().unwrap();
        f.insert("shape".into(), toml::Value::try_from(vec![3, 3, 2]).unwrap());
        let data: Vec<f64> = vec![0.0; 18];
        f.insert("data".into(), toml::Value::try_from(data).unwrap());
        let err = parse_crossed_module(&toml::to_string(&doc).unwrap()).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { ref field, .. } if field == "f"), "{err}");
    }

    #[test]
    fn non_finite_entry_is_rejected() {
        let text = TRIVIAL.replace("data = [1.0]", "data = [nan]");
        assert!(matches!(parse_crossed_module(&text), Err(Error::NonFinite(f)) if f == "Q"));
    }

    #[test]
    fn garbage_is_malformed() {
        assert!(matches!(parse_crossed_module("p = ["), Err(Error::Malformed(_))));
        assert!(matches!(parse_crossed_module("name = \"x\"\np = 1"), Err(Error::Malformed(_))));
    }
}
