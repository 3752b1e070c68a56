use super::DifferentialCrossedModule;
use crate::{Error, Result};
use nalgebra::DMatrix;
use ndarray::{Array2, ArrayD};

/// Minimum ratio of smallest to largest singular value for a form to count as
/// nondegenerate.
pub const NONDEGENERACY_THRESHOLD: f64 = 1e-8;

pub(crate) fn to_dmatrix(m: &Array2<f64>) -> DMatrix<f64> {
    let (r, c) = m.dim();
    DMatrix::from_fn(r, c, |i, j| m[[i, j]])
}

pub(crate) fn from_dmatrix(m: &DMatrix<f64>) -> Array2<f64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| m[(i, j)])
}

/// `σ_min / σ_max` of a square matrix; 1 for the empty matrix.
pub(crate) fn conditioning(m: &Array2<f64>) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    let sv = to_dmatrix(m).singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 0.0;
    }
    sv.min() / max
}

pub fn is_nondegenerate(m: &Array2<f64>) -> bool {
    conditioning(m) >= NONDEGENERACY_THRESHOLD
}

pub(crate) fn checked_inverse(m: &Array2<f64>, which: &'static str) -> Result<Array2<f64>> {
    if m.is_empty() {
        return Ok(m.clone());
    }
    if !is_nondegenerate(m) {
        return Err(Error::SingularForm(which));
    }
    to_dmatrix(m)
        .try_inverse()
        .map(|inv| from_dmatrix(&inv))
        .ok_or(Error::SingularForm(which))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    /// index of g, contracted with `Q`
    G,
    /// index of h, contracted with `q`
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexOp {
    Keep,
    Lower,
    Raise,
}

/// Lowers or raises the selected slots of `tensor` with `Q`, `q` or their inverses.
///
/// `spec[k]` describes slot `k`. Forms are symmetric, so contraction order within
/// a slot does not matter.
pub fn lower_raise(
    cm: &DifferentialCrossedModule,
    tensor: &ArrayD<f64>,
    spec: &[(SlotKind, IndexOp)],
) -> Result<ArrayD<f64>> {
    if spec.len() != tensor.ndim() {
        return Err(Error::BadIndexSpec(format!(
            "{} slots described for a rank-{} tensor",
            spec.len(),
            tensor.ndim()
        )));
    }
    let mut out = tensor.clone();
    for (slot, &(kind, op)) in spec.iter().enumerate() {
        let (dim, form, label) = match kind {
            SlotKind::G => (cm.p, &cm.form_g, "g"),
            SlotKind::H => (cm.q, &cm.form_h, "h"),
        };
        if out.shape()[slot] != dim {
            return Err(Error::BadIndexSpec(format!(
                "slot {slot} has extent {} but dim {label} = {dim}",
                out.shape()[slot]
            )));
        }
        let metric = match op {
            IndexOp::Keep => continue,
            IndexOp::Lower => form.clone(),
            IndexOp::Raise => checked_inverse(form, label)?,
        };
        // Contract slot with the metric, keeping axis order.
        let moved = out.view().permuted_axes(move_last(out.ndim(), slot));
        let shape = moved.shape().to_vec();
        let rows: usize = shape[..shape.len() - 1].iter().product();
        let flat = moved
            .as_standard_layout()
            .into_owned()
            .into_shape_with_order((rows, dim))
            .expect("contiguous");
        let contracted = flat.dot(&metric);
        let back = contracted
            .into_shape_with_order(ndarray::IxDyn(&shape))
            .expect("same size");
        let nd = back.ndim();
        out = back
            .permuted_axes(restore_from_last(nd, slot))
            .as_standard_layout()
            .into_owned();
    }
    Ok(out)
}

fn move_last(ndim: usize, slot: usize) -> Vec<usize> {
    let mut axes: Vec<usize> = (0..ndim).filter(|&k| k != slot).collect();
    axes.push(slot);
    axes
}

fn restore_from_last(ndim: usize, slot: usize) -> Vec<usize> {
    // inverse permutation of move_last
    let fwd = move_last(ndim, slot);
    let mut inv = vec![0; ndim];
    for (pos, &ax) in fwd.iter().enumerate() {
        inv[ax] = pos;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossed_module::builtin_module;
    use ndarray::{ArrayD, IxDyn};
    use proptest::prelude::*;

    #[test]
    fn lowering_with_identity_is_noop() {
        let cm = builtin_module("adjoint(su2)").unwrap();
        let mut v = ArrayD::zeros(IxDyn(&[3]));
        v[[1]] = 1.0;
        let low = lower_raise(&cm, &v, &[(SlotKind::G, IndexOp::Lower)]).unwrap();
        assert_eq!(low, v);
    }

    #[test]
    fn raised_boundary_map_vanishes_for_vector_poincare() {
        let cm = builtin_module("vector_poincare").unwrap();
        let del = cm.del.clone().into_dyn();
        let raised = lower_raise(
            &cm,
            &del,
            &[(SlotKind::H, IndexOp::Raise), (SlotKind::G, IndexOp::Lower)],
        )
        .unwrap();
        assert!(raised.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn bad_spec_is_rejected() {
        let cm = builtin_module("vector_poincare").unwrap();
        let t = ArrayD::zeros(IxDyn(&[6, 6]));
        assert!(lower_raise(&cm, &t, &[(SlotKind::G, IndexOp::Lower)]).is_err());
        assert!(lower_raise(
            &cm,
            &t,
            &[(SlotKind::G, IndexOp::Lower), (SlotKind::H, IndexOp::Lower)]
        )
        .is_err());
    }

    #[test]
    fn singular_form_cannot_raise() {
        let mut cm = builtin_module("abelian(2,1)").unwrap();
        cm.form_g[[1, 1]] = 0.0;
        let t = ArrayD::zeros(IxDyn(&[2]));
        assert!(matches!(
            lower_raise(&cm, &t, &[(SlotKind::G, IndexOp::Raise)]),
            Err(Error::SingularForm(_))
        ));
    }

    proptest! {
        #[test]
        fn lower_then_raise_round_trips(entries in proptest::collection::vec(-3.0f64..3.0, 6 * 4 * 6)) {
            let cm = builtin_module("vector_poincare").unwrap();
            let t = ArrayD::from_shape_vec(IxDyn(&[6, 4, 6]), entries).unwrap();
            let spec_low = [(SlotKind::G, IndexOp::Lower), (SlotKind::H, IndexOp::Lower), (SlotKind::G, IndexOp::Keep)];
            let spec_up = [(SlotKind::G, IndexOp::Raise), (SlotKind::H, IndexOp::Raise), (SlotKind::G, IndexOp::Keep)];
            let low = lower_raise(&cm, &t, &spec_low).unwrap();
            let back = lower_raise(&cm, &low, &spec_up).unwrap();
            for (x, y) in back.iter().zip(t.iter()) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
    }
}
