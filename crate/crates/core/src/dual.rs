//! Scalar types for exact derivatives: forward-mode dual numbers and a
//! reverse-mode tape, both behind the trait the field densities are written in.

use std::cell::RefCell;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Arithmetic needed by the polynomial field densities.
pub trait Scalar:
    Copy
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign<f64>
{
    fn cst(v: f64) -> Self;
    fn value(self) -> f64;

    #[inline]
    fn zero() -> Self {
        Self::cst(0.0)
    }
}

impl Scalar for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
}

/// `re + eps·ε` with `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual {
    pub re: f64,
    pub eps: f64,
}

impl Dual {
    pub const fn new(re: f64, eps: f64) -> Self {
        Self { re, eps }
    }

    pub const fn variable(re: f64) -> Self {
        Self { re, eps: 1.0 }
    }
}

impl Scalar for Dual {
    #[inline]
    fn cst(v: f64) -> Self {
        Self { re: v, eps: 0.0 }
    }
    #[inline]
    fn value(self) -> f64 {
        self.re
    }
}

impl Add for Dual {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.eps + o.eps)
    }
}

impl Sub for Dual {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.eps - o.eps)
    }
}

impl Mul for Dual {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re, self.re * o.eps + self.eps * o.re)
    }
}

impl Mul<f64> for Dual {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.re * s, self.eps * s)
    }
}

impl Neg for Dual {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.eps)
    }
}

impl AddAssign for Dual {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.re += o.re;
        self.eps += o.eps;
    }
}

impl SubAssign for Dual {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        self.re -= o.re;
        self.eps -= o.eps;
    }
}

impl MulAssign<f64> for Dual {
    #[inline]
    fn mul_assign(&mut self, s: f64) {
        self.re *= s;
        self.eps *= s;
    }
}

/// Reverse-mode scalar recorded on a thread-local tape.
///
/// Usage: [`Rev::reset`], create inputs with [`Rev::input`] (input `k` gets
/// tape index `k`), evaluate, then [`Rev::adjoints`] on the output.
#[derive(Debug, Clone, Copy)]
pub struct Rev {
    pub val: f64,
    idx: u32,
}

const CONST: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Node {
    a: u32,
    wa: f64,
    b: u32,
    wb: f64,
}

thread_local! {
    static TAPE: RefCell<Vec<Node>> = const { RefCell::new(Vec::new()) };
}

impl Rev {
    pub fn reset() {
        TAPE.with(|t| t.borrow_mut().clear());
    }

    pub fn input(val: f64) -> Self {
        Self { val, idx: push(CONST, 0.0, CONST, 0.0) }
    }

    pub fn is_const(&self) -> bool {
        self.idx == CONST
    }

    /// `∂out/∂input_k` for the first `n` inputs.
    pub fn adjoints(out: Rev, n: usize) -> Vec<f64> {
        let mut adj = vec![0.0; n];
        if out.idx == CONST {
            return adj;
        }
        TAPE.with(|t| {
            let t = t.borrow();
            let mut bar = vec![0.0; out.idx as usize + 1];
            bar[out.idx as usize] = 1.0;
            for k in (0..=out.idx as usize).rev() {
                let g = bar[k];
                if g == 0.0 {
                    continue;
                }
                let nd = t[k];
                if nd.a != CONST {
                    bar[nd.a as usize] += g * nd.wa;
                }
                if nd.b != CONST {
                    bar[nd.b as usize] += g * nd.wb;
                }
            }
            let m = n.min(bar.len());
            adj[..m].copy_from_slice(&bar[..m]);
        });
        adj
    }
}

#[inline]
fn push(a: u32, wa: f64, b: u32, wb: f64) -> u32 {
    TAPE.with(|t| {
        let mut t = t.borrow_mut();
        t.push(Node { a, wa, b, wb });
        (t.len() - 1) as u32
    })
}

#[inline]
fn node(val: f64, a: u32, wa: f64, b: u32, wb: f64) -> Rev {
    if a == CONST && b == CONST {
        return Rev { val, idx: CONST };
    }
    Rev { val, idx: push(a, wa, b, wb) }
}

impl Scalar for Rev {
    #[inline]
    fn cst(v: f64) -> Self {
        Self { val: v, idx: CONST }
    }
    #[inline]
    fn value(self) -> f64 {
        self.val
    }
}

impl Add for Rev {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        node(self.val + o.val, self.idx, 1.0, o.idx, 1.0)
    }
}

impl Sub for Rev {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        node(self.val - o.val, self.idx, 1.0, o.idx, -1.0)
    }
}

impl Mul for Rev {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        node(self.val * o.val, self.idx, o.val, o.idx, self.val)
    }
}

impl Mul<f64> for Rev {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        node(self.val * s, self.idx, s, CONST, 0.0)
    }
}

impl Neg for Rev {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        node(-self.val, self.idx, -1.0, CONST, 0.0)
    }
}

impl AddAssign for Rev {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Rev {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign<f64> for Rev {
    #[inline]
    fn mul_assign(&mut self, s: f64) {
        *self = *self * s;
    }
}
