//! Local constraint densities, generic over the scalar type so that the same
//! code yields values (`f64`) and exact derivatives (`Dual`).
//!
//! A density at site `x` reads a patch of seven sites: `x` itself (offset 0)
//! and `x ± e_s` (offsets `1 + 2s`, `2 + 2s`) for the three spatial axes.
//! Spacetime indices run over `0..4`, spatial ones over `1..4`; lattice axis
//! `s` carries spacetime index `s + 1`.
//!
//! Pair conventions: a contraction `½ X_{ij} Y^{ij}` over all index values is
//! evaluated as the ordered-pair sum `Σ_{i<j} X_{ij} Y^{ij}`, and the
//! antisymmetrizer `[ij]` carries no ½.

use super::Layout;
use crate::crossed_module::CompiledModule;
use crate::dual::Scalar;
use crate::lattice::{levi_civita4, pair_index};
use crate::{Error, Result};
use smallvec::SmallVec;

pub(crate) type V<T> = SmallVec<[T; 8]>;

/// Spatial ordered pairs in spacetime labels.
pub(crate) const SPATIAL_PAIRS: [(usize, usize); 3] = [(1, 2), (1, 3), (2, 3)];
/// Patch offsets: the site and its six neighbours.
pub(crate) const PATCH: usize = 7;

/// Which algebra a family's components live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    G,
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    PB,
    PC,
    PA,
    PBeta,
    SH,
    SG,
    SCB,
    SBCB,
    PhiB,
    PhiC,
    PhiBeta,
    PhiA,
    PhiH,
    PhiG,
    PhiCB,
    PhiBCB,
    ChiB,
    ChiC,
    ChiA,
    ChiBeta,
    SigmaH,
    SigmaG,
    SigmaCB,
    SigmaBCB,
}

impl Family {
    pub const ALL: [Family; 24] = [
        Family::PB,
        Family::PC,
        Family::PA,
        Family::PBeta,
        Family::SH,
        Family::SG,
        Family::SCB,
        Family::SBCB,
        Family::PhiB,
        Family::PhiC,
        Family::PhiBeta,
        Family::PhiA,
        Family::PhiH,
        Family::PhiG,
        Family::PhiCB,
        Family::PhiBCB,
        Family::ChiB,
        Family::ChiC,
        Family::ChiA,
        Family::ChiBeta,
        Family::SigmaH,
        Family::SigmaG,
        Family::SigmaCB,
        Family::SigmaBCB,
    ];

    pub fn name(&self) -> &'static str {
        use Family::*;
        match self {
            PB => "P(B)",
            PC => "P(C)",
            PA => "P(A)",
            PBeta => "P(beta)",
            SH => "S(H)",
            SG => "S(G)",
            SCB => "S(CB)",
            SBCB => "S(BCbeta)",
            PhiB => "phi(B)",
            PhiC => "phi(C)",
            PhiBeta => "phi(beta)",
            PhiA => "phi(A)",
            PhiH => "phi(H)",
            PhiG => "phi(G)",
            PhiCB => "phi(CB)",
            PhiBCB => "phi(BCbeta)",
            ChiB => "chi(B)",
            ChiC => "chi(C)",
            ChiA => "chi(A)",
            ChiBeta => "chi(beta)",
            SigmaH => "Sigma(H)",
            SigmaG => "Sigma(G)",
            SigmaCB => "Sigma(CB)",
            SigmaBCB => "Sigma(BCbeta)",
        }
    }

    pub fn parse(name: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == name.trim())
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    pub fn kind(&self) -> IndexKind {
        use Family::*;
        match self {
            PB | PA | SH | SBCB | PhiB | PhiA | PhiH | PhiBCB | ChiB | ChiA | SigmaH
            | SigmaBCB => IndexKind::G,
            _ => IndexKind::H,
        }
    }

    /// Number of spacetime/spatial index blocks; components are `block·dim + c`.
    pub fn blocks(&self) -> usize {
        use Family::*;
        match self {
            PB | PBeta => 6,
            PC | PA => 4,
            SG | SBCB | PhiC | PhiA | PhiG | PhiBCB | SigmaG | SigmaBCB => 1,
            _ => 3,
        }
    }

    /// Human-readable index signature.
    pub fn signature(&self) -> &'static str {
        use Family::*;
        match self {
            PB => "_a^{mu nu}",
            PC => "_alpha^mu",
            PA => "_a^mu",
            PBeta => "_alpha^{mu nu}",
            SH | SigmaH => "^a_{jk}",
            SG | SigmaG => "^alpha",
            SCB => "_{alpha jk}",
            SBCB | SigmaBCB | PhiA | PhiBCB => "_a",
            PhiB => "_a^i",
            PhiC => "_alpha",
            PhiBeta => "_alpha^i",
            PhiH => "^{a i}",
            PhiG => "^alpha",
            PhiCB => "^{alpha i}",
            ChiB => "_a^{jk}",
            ChiC => "_alpha^i",
            ChiA => "_a^i",
            ChiBeta => "_alpha^{ij}",
            SigmaCB => "_alpha^k",
        }
    }

    pub fn ncomp(&self, p: usize, q: usize) -> usize {
        self.blocks()
            * match self.kind() {
                IndexKind::G => p,
                IndexKind::H => q,
            }
    }

    /// Evaluates the density on a patch.
    pub(crate) fn eval<T: Scalar>(&self, x: &Ctx<T>) -> Vec<T> {
        use Family::*;
        let (p, q) = (x.p, x.q);
        let mut out = Vec::with_capacity(self.ncomp(p, q));
        match self {
            PB => (0..6).for_each(|k| out.extend(x.get(0, x.n + x.lay.b() + k * p, p))),
            PC => (0..4).for_each(|m| out.extend(x.pc(0, m))),
            PA => (0..4).for_each(|m| out.extend(x.p_a(0, m))),
            PBeta => {
                for (m, n) in PAIRS4 {
                    out.extend(x.p_beta(0, m, n))
                }
            }
            SH | SigmaH => SPATIAL_PAIRS.iter().for_each(|&(j, k)| out.extend(x.h(j, k))),
            SG | SigmaG => out.extend(x.g3()),
            SCB => SPATIAL_PAIRS.iter().for_each(|&(j, k)| out.extend(x.scb(j, k))),
            SBCB => out.extend(x.sbcb()),
            PhiB => (1..4).for_each(|i| out.extend(x.pb(0, 0, i))),
            PhiC => out.extend(x.pc(0, 0)),
            PhiBeta => (1..4).for_each(|i| out.extend(x.pbeta(0, 0, i))),
            PhiA => out.extend(x.pa(0, 0)),
            PhiH => (1..4).for_each(|i| out.extend(x.phi_h(i))),
            PhiG => out.extend(x.phi_g()),
            PhiCB => (1..4).for_each(|i| out.extend(x.phi_cb(i))),
            PhiBCB => out.extend(x.phi_bcb()),
            ChiB => SPATIAL_PAIRS.iter().for_each(|&(j, k)| out.extend(x.pb(0, j, k))),
            ChiC => (1..4).for_each(|i| out.extend(x.pc(0, i))),
            ChiA => (1..4).for_each(|i| out.extend(x.p_a(0, i))),
            ChiBeta => SPATIAL_PAIRS.iter().for_each(|&(j, k)| out.extend(x.p_beta(0, j, k))),
            SigmaCB => (1..4).for_each(|k| out.extend(x.sigma_cb(k))),
            SigmaBCB => out.extend(x.sigma_bcb()),
        }
        out
    }
}

pub(crate) const PAIRS4: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// `ε^{0ijk}` for spatial labels in `1..4`.
#[inline]
pub(crate) fn eps3(i: usize, j: usize, k: usize) -> f64 {
    levi_civita4([0, i, j, k])
}

pub(crate) fn zeros<T: Scalar>(m: usize) -> V<T> {
    (0..m).map(|_| T::zero()).collect()
}

#[inline]
pub(crate) fn axpy<T: Scalar>(out: &mut [T], s: f64, x: &[T]) {
    for (o, v) in out.iter_mut().zip(x) {
        *o += *v * s;
    }
}

/// Read access to one patch plus the derived building blocks.
pub(crate) struct Ctx<'a, T> {
    pub cm: &'a CompiledModule,
    pub lay: Layout,
    pub v: &'a [T],
    /// Coordinates per site; momenta start at `n`.
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub inv2a: f64,
}

impl<'a, T: Scalar> Ctx<'a, T> {
    pub fn new(cm: &'a CompiledModule, lay: Layout, v: &'a [T], spacing: f64) -> Self {
        Self {
            cm,
            lay,
            v,
            n: lay.width(),
            p: lay.p,
            q: lay.q,
            inv2a: 0.5 / spacing,
        }
    }

    #[inline]
    pub fn get(&self, off: usize, start: usize, m: usize) -> V<T> {
        let base = off * 2 * self.n + start;
        self.v[base..base + m].iter().copied().collect()
    }

    fn pair(&self, off: usize, start: usize, m: usize, mu: usize, nu: usize) -> V<T> {
        match pair_index(4, mu, nu) {
            None => zeros(m),
            Some((k, s)) => {
                let mut x = self.get(off, start + k * m, m);
                if s < 0.0 {
                    x.iter_mut().for_each(|v| *v = -*v);
                }
                x
            }
        }
    }

    pub fn a(&self, off: usize, mu: usize) -> V<T> {
        self.get(off, self.lay.a() + mu * self.p, self.p)
    }
    pub fn c(&self, off: usize, mu: usize) -> V<T> {
        self.get(off, self.lay.c() + mu * self.q, self.q)
    }
    pub fn b(&self, off: usize, mu: usize, nu: usize) -> V<T> {
        self.pair(off, self.lay.b(), self.p, mu, nu)
    }
    pub fn beta(&self, off: usize, mu: usize, nu: usize) -> V<T> {
        self.pair(off, self.lay.beta(), self.q, mu, nu)
    }
    pub fn pa(&self, off: usize, mu: usize) -> V<T> {
        self.get(off, self.n + self.lay.a() + mu * self.p, self.p)
    }
    pub fn pc(&self, off: usize, mu: usize) -> V<T> {
        self.get(off, self.n + self.lay.c() + mu * self.q, self.q)
    }
    pub fn pb(&self, off: usize, mu: usize, nu: usize) -> V<T> {
        self.pair(off, self.n + self.lay.b(), self.p, mu, nu)
    }
    pub fn pbeta(&self, off: usize, mu: usize, nu: usize) -> V<T> {
        self.pair(off, self.n + self.lay.beta(), self.q, mu, nu)
    }

    pub fn lower_g(&self, x: &[T]) -> V<T> {
        let mut o = zeros(self.p);
        self.cm.lower_g(x, 1.0, &mut o);
        o
    }
    pub fn raise_g(&self, x: &[T]) -> V<T> {
        let mut o = zeros(self.p);
        self.cm.raise_g(x, 1.0, &mut o);
        o
    }
    pub fn lower_h(&self, x: &[T]) -> V<T> {
        let mut o = zeros(self.q);
        self.cm.lower_h(x, 1.0, &mut o);
        o
    }
    pub fn raise_h(&self, x: &[T]) -> V<T> {
        let mut o = zeros(self.q);
        self.cm.raise_h(x, 1.0, &mut o);
        o
    }

    /// Central difference along spatial direction `i ∈ 1..4` of a patch quantity.
    pub fn d(&self, i: usize, f: impl Fn(usize) -> V<T>) -> V<T> {
        let s = i - 1;
        let mut x = f(1 + 2 * s);
        let y = f(2 + 2 * s);
        for (a, b) in x.iter_mut().zip(&y) {
            *a = (*a - *b) * self.inv2a;
        }
        x
    }

    /// `∇_i X^a` on an upper g-index.
    pub fn cov_up_g(&self, i: usize, f: impl Fn(usize) -> V<T>) -> V<T> {
        let x0 = f(0);
        let mut out = self.d(i, f);
        self.cm.bracket_g(&self.a(0, i), &x0, 1.0, &mut out);
        out
    }
    /// `∇_i X_a` on a lower g-index.
    pub fn cov_low_g(&self, i: usize, f: impl Fn(usize) -> V<T>) -> V<T> {
        let x0 = f(0);
        let mut out = self.d(i, f);
        self.cm.coad_g(&self.a(0, i), &x0, 1.0, &mut out);
        out
    }
    /// `∇^▷_i X^α` on an upper h-index.
    pub fn cov_up_h(&self, i: usize, f: impl Fn(usize) -> V<T>) -> V<T> {
        let x0 = f(0);
        let mut out = self.d(i, f);
        self.cm.act_on(&self.a(0, i), &x0, 1.0, &mut out);
        out
    }
    /// `∇^▷_i X_α` on a lower h-index.
    pub fn cov_low_h(&self, i: usize, f: impl Fn(usize) -> V<T>) -> V<T> {
        let x0 = f(0);
        let mut out = self.d(i, f);
        self.cm.coact_h(&self.a(0, i), &x0, 1.0, &mut out);
        out
    }

    /// `B_{a μν}`
    pub fn bl(&self, off: usize, mu: usize, nu: usize) -> V<T> {
        self.lower_g(&self.b(off, mu, nu))
    }
    /// `C_{α μ}`
    pub fn cl(&self, off: usize, mu: usize) -> V<T> {
        self.lower_h(&self.c(off, mu))
    }

    /// `P(A)_a^μ = π(A)_a^μ − ½ ε^{0μνρ} B_{a νρ}`
    pub fn p_a(&self, off: usize, mu: usize) -> V<T> {
        let mut out = self.pa(off, mu);
        for (nu, rho) in PAIRS4 {
            let e = levi_civita4([0, mu, nu, rho]);
            if e != 0.0 {
                axpy(&mut out, -e, &self.bl(off, nu, rho));
            }
        }
        out
    }

    /// `P(β)_α^{μν} = π(β)_α^{μν} + ε^{0μνρ} C_{α ρ}`
    pub fn p_beta(&self, off: usize, mu: usize, nu: usize) -> V<T> {
        let mut out = self.pbeta(off, mu, nu);
        for rho in 1..4 {
            let e = levi_civita4([0, mu, nu, rho]);
            if e != 0.0 {
                axpy(&mut out, e, &self.cl(off, rho));
            }
        }
        out
    }

    /// `H^a_{jk} = ∂_j A_k − ∂_k A_j + [A_j, A_k] − ∂β_{jk}`
    pub fn h(&self, j: usize, k: usize) -> V<T> {
        let mut out = self.d(j, |o| self.a(o, k));
        axpy(&mut out, -1.0, &self.d(k, |o| self.a(o, j)));
        self.cm.bracket_g(&self.a(0, j), &self.a(0, k), 1.0, &mut out);
        self.cm.del_apply(&self.beta(0, j, k), -1.0, &mut out);
        out
    }

    /// `F^a_{jk} = ∂_j A_k − ∂_k A_j + [A_j, A_k]`
    pub fn f(&self, j: usize, k: usize) -> V<T> {
        let mut out = self.h(j, k);
        self.cm.del_apply(&self.beta(0, j, k), 1.0, &mut out);
        out
    }

    /// `T^α_{jk} = ∇^▷_j C_k − ∇^▷_k C_j`
    pub fn t(&self, j: usize, k: usize) -> V<T> {
        let mut out = self.dc(j, k);
        axpy(&mut out, -1.0, &self.dc(k, j));
        out
    }

    /// `Gcal^α_{123}` (cyclic sum), equal to `⅙ ε^{ijk} Gcal_{ijk}`.
    pub fn g3(&self) -> V<T> {
        let mut out = zeros(self.q);
        for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            axpy(&mut out, 1.0, &self.d(i, |o| self.beta(o, j, k)));
            self.cm.act_on(&self.a(0, i), &self.beta(0, j, k), 1.0, &mut out);
        }
        out
    }

    /// `∇^▷_j C^α_k = ∂_j C_k + ▷(A_j) C_k`
    fn dc(&self, j: usize, k: usize) -> V<T> {
        self.cov_up_h(j, |o| self.c(o, k))
    }

    /// `S(CB)_{α jk} = (∇^▷_j C_k − ∇^▷_k C_j)_α − ∂_α^a B_{a jk}`
    pub fn scb(&self, j: usize, k: usize) -> V<T> {
        let mut x = self.dc(j, k);
        axpy(&mut x, -1.0, &self.dc(k, j));
        let mut out = self.lower_h(&x);
        self.cm.del_transpose(&self.bl(0, j, k), -1.0, &mut out);
        out
    }

    /// `½ ε^{ijk} (∇_i B_{a jk} − C^α_i ▷_{αaβ} β^β_{jk})`
    pub fn sbcb(&self) -> V<T> {
        let mut out = zeros(self.p);
        for i in 1..4 {
            for (j, k) in SPATIAL_PAIRS {
                let e = eps3(i, j, k);
                if e == 0.0 {
                    continue;
                }
                axpy(&mut out, e, &self.cov_low_g(i, |o| self.bl(o, j, k)));
                self.cm.act_moment(&self.cl(0, i), &self.beta(0, j, k), -e, &mut out);
            }
        }
        out
    }

    /// `φ(H)^{ai} = ½ ε^{ijk} S(H)^a_{jk} − ∇_j P(B)^{aij} − ∂^a_α P(C)^{αi}`
    pub fn phi_h(&self, i: usize) -> V<T> {
        let mut out = zeros(self.p);
        self.cm.del_apply(&self.raise_h(&self.pc(0, i)), -1.0, &mut out);
        for (j, k) in SPATIAL_PAIRS {
            let e = eps3(i, j, k);
            if e != 0.0 {
                axpy(&mut out, e, &self.h(j, k));
            }
        }
        for j in (1..4).filter(|&j| j != i) {
            axpy(&mut out, -1.0, &self.cov_up_g(j, |o| self.raise_g(&self.pb(o, i, j))));
        }
        out
    }

    /// `w_β ▷^β_{aγ} q^{γα} x^a`, the index pattern `w_β ▷^β_a^α x^a`.
    pub fn act_raised(&self, w: &[T], x: &[T]) -> V<T> {
        let mut low = zeros(self.q);
        self.cm.coact_h(x, w, -1.0, &mut low);
        self.raise_h(&low)
    }

    /// `φ(G)^α = S(G)^α + ∇^▷_i P(C)^{αi} + ½ β_{β ij} ▷^β_a^α P(B)^{a ij}`
    pub fn phi_g(&self) -> V<T> {
        let mut out = self.g3();
        for i in 1..4 {
            axpy(&mut out, 1.0, &self.cov_up_h(i, |o| self.raise_h(&self.pc(o, i))));
        }
        for (i, j) in SPATIAL_PAIRS {
            let w = self.lower_h(&self.beta(0, i, j));
            let x = self.raise_g(&self.pb(0, i, j));
            axpy(&mut out, 1.0, &self.act_raised(&w, &x));
        }
        out
    }

    /// `φ(CB)^{αi} = ½ ε^{ijk} S(CB)^α_{jk} − ∇^▷_j P(β)^{αij}
    ///   − C_{βj} ▷^β_a^α P(B)^{aij} − ∂^α_a P(A)^{ai}`
    pub fn phi_cb(&self, i: usize) -> V<T> {
        let mut low = zeros(self.q);
        for (j, k) in SPATIAL_PAIRS {
            let e = eps3(i, j, k);
            if e != 0.0 {
                axpy(&mut low, e, &self.scb(j, k));
            }
        }
        self.cm.del_transpose(&self.p_a(0, i), -1.0, &mut low);
        let mut out = self.raise_h(&low);
        for j in (1..4).filter(|&j| j != i) {
            axpy(&mut out, -1.0, &self.cov_up_h(j, |o| self.raise_h(&self.p_beta(o, i, j))));
            let x = self.raise_g(&self.pb(0, i, j));
            axpy(&mut out, -1.0, &self.act_raised(&self.cl(0, j), &x));
        }
        out
    }

    /// `φ(BCβ)_a = S(BCβ)_a + ∇_i P(A)_a^i + ½ f_{abc} B^b_{ij} P(B)^{cij}
    ///   − C^α_i ▷_{αaβ} P(C)^{βi} − ½ β^α_{ij} ▷_{αaβ} P(β)^{βij}`
    pub fn phi_bcb(&self) -> V<T> {
        let mut out = self.sbcb();
        for i in 1..4 {
            axpy(&mut out, 1.0, &self.cov_low_g(i, |o| self.p_a(o, i)));
            let pc = self.raise_h(&self.pc(0, i));
            self.cm.act_moment(&self.cl(0, i), &pc, -1.0, &mut out);
        }
        for (i, j) in SPATIAL_PAIRS {
            let mut up = zeros(self.p);
            self.cm.bracket_g(&self.b(0, i, j), &self.raise_g(&self.pb(0, i, j)), 1.0, &mut up);
            axpy(&mut out, 1.0, &self.lower_g(&up));
            let pbeta = self.raise_h(&self.p_beta(0, i, j));
            let w = self.lower_h(&self.beta(0, i, j));
            self.cm.act_moment(&w, &pbeta, -1.0, &mut out);
        }
        out
    }

    /// Momentum form `∇_k π(A)_a^k + ½ π(β)_α^{jk} ▷^α_{aβ} β^β_{jk}`.
    pub fn sigma_bcb(&self) -> V<T> {
        let mut out = zeros(self.p);
        for k in 1..4 {
            axpy(&mut out, 1.0, &self.cov_low_g(k, |o| self.pa(o, k)));
        }
        for (j, k) in SPATIAL_PAIRS {
            self.cm.act_moment(&self.pbeta(0, j, k), &self.beta(0, j, k), 1.0, &mut out);
        }
        out
    }

    /// Momentum form `∇^▷_j π(β)_α^{jk} − ∂_α^a π(A)_a^k`.
    pub fn sigma_cb(&self, k: usize) -> V<T> {
        let mut out = zeros(self.q);
        for j in (1..4).filter(|&j| j != k) {
            axpy(&mut out, 1.0, &self.cov_low_h(j, |o| self.pbeta(o, j, k)));
        }
        self.cm.del_transpose(&self.pa(0, k), -1.0, &mut out);
        out
    }
}

/// Momenta that make every primary constraint vanish at one site.
pub(crate) fn on_shell_momenta(cm: &CompiledModule, lay: Layout, coords: &[f64]) -> Vec<f64> {
    let n = lay.width();
    let mut v = vec![0.0; 2 * n * PATCH];
    v[..n].copy_from_slice(coords);
    let x = Ctx::new(cm, lay, &v, 1.0);
    let mut pi = vec![0.0; n];
    for mu in 1..4 {
        // π(A)^μ = ½ ε^{0μνρ} B_{νρ}: the negative of P(A) at zero momentum
        let pa = x.p_a(0, mu);
        for (c, val) in pa.iter().enumerate() {
            pi[lay.a() + mu * lay.p + c] = -val;
        }
    }
    for (k, (mu, nu)) in PAIRS4.into_iter().enumerate() {
        let pb = x.p_beta(0, mu, nu);
        for (c, val) in pb.iter().enumerate() {
            pi[lay.beta() + k * lay.q + c] = -val;
        }
    }
    pi
}
