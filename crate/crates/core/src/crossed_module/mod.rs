//! Differential crossed modules `(g, h, ∂, ▷)` given by explicit structure tensors.
//!
//! Index conventions (all tensors dense, row-major):
//!
//! | tensor | shape     | entry `[i][j][k]`       |
//! |--------|-----------|-------------------------|
//! | `f`    | p × p × p | `f^i_{jk}`              |
//! | `phi`  | q × q × q | `φ^i_{jk}`              |
//! | `del`  | q × p     | `∂_i{}^j`               |
//! | `act`  | q × p × q | `▷^i_{jk}`              |
//! | `form_g` | p × p   | `Q_{ij}`                |
//! | `form_h` | q × q   | `q_{ij}`                |

mod catalog;
mod compiled;
mod metric;
mod spec_file;
mod tmap;
mod validate;

pub use catalog::{builtin_module, catalog_names};
pub use compiled::{CompiledModule, Entry2, Entry3};
pub use metric::{is_nondegenerate, lower_raise, IndexOp, SlotKind, NONDEGENERACY_THRESHOLD};
pub use spec_file::{load_crossed_module, parse_crossed_module, render_crossed_module};
pub use tmap::{t_map, TMapTensor};
pub use validate::{validate_crossed_module, IdentityCheck, ValidationReport, DEFAULT_TOLERANCE};

use ndarray::{Array2, Array3};

#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialCrossedModule {
    pub name: String,
    /// dim g
    pub p: usize,
    /// dim h
    pub q: usize,
    pub f: Array3<f64>,
    pub phi: Array3<f64>,
    pub del: Array2<f64>,
    pub act: Array3<f64>,
    pub form_g: Array2<f64>,
    pub form_h: Array2<f64>,
}

impl DifferentialCrossedModule {
    /// All-zero tensors with identity bilinear forms.
    pub fn zeros(name: impl Into<String>, p: usize, q: usize) -> Self {
        Self {
            name: name.into(),
            p,
            q,
            f: Array3::zeros((p, p, p)),
            phi: Array3::zeros((q, q, q)),
            del: Array2::zeros((q, p)),
            act: Array3::zeros((q, p, q)),
            form_g: Array2::eye(p),
            form_h: Array2::eye(q),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.f.iter().all(|x| *x == 0.0)
            && self.phi.iter().all(|x| *x == 0.0)
            && self.act.iter().all(|x| *x == 0.0)
    }

    /// Precomputes sparse structure lists, inverse forms and lowered tensors.
    pub fn compile(&self) -> crate::Result<CompiledModule> {
        CompiledModule::new(self)
    }
}
