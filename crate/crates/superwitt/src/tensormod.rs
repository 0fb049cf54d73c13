//! Weight modules built from a finite-dimensional fiber: the free module
//! over the even Laurent ring on (Grassmann algebra) ⊗ (fiber), with a
//! vector-field action parametrized by a weight shift and a matrix
//! representation of the general linear superalgebra on the fiber.
//!
//! Sign discipline: a fiber operator attached to a matrix unit picks up the
//! Koszul sign of that unit's parity against the Grassmann factor it moves
//! past.  This is the unique sign placement under which the action satisfies
//! the module axiom; `module_axiom_check` verifies exactly that and acts as
//! the arbiter for the convention.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::glmn::{GlIndex, GlRep};
use crate::linalg::RowSpan;
use crate::scalar::{qi, signed, sup_norm, window, Scalar};
use crate::superalg::{grass_left_deriv, grass_mul, grass_right_deriv, Monomial, Parity};
use crate::vfields::{AlgebraKind, Generator, VectorField};

/// Basis key of a tensor-module vector: lattice exponents `r`, Grassmann
/// bits `p`, fiber index `j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TvKey {
    pub r: Vec<i64>,
    pub p: u32,
    pub j: usize,
}

/// A finite rational combination of basis keys.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorVector {
    terms: BTreeMap<TvKey, Scalar>,
}

impl TensorVector {
    pub fn zero() -> TensorVector {
        TensorVector { terms: BTreeMap::new() }
    }

    pub fn unit(key: TvKey) -> TensorVector {
        let mut v = TensorVector::zero();
        v.add_term(key, qi(1));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TvKey, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &TvKey) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, key: TvKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let cur = self.terms.remove(&key).unwrap_or_else(Scalar::zero);
        let sum = cur + c;
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn scale(&self, c: &Scalar) -> TensorVector {
        let mut out = TensorVector::zero();
        if !c.is_zero() {
            for (k, v) in self.terms() {
                out.add_term(k.clone(), v * c);
            }
        }
        out
    }

    pub fn add(&self, rhs: &TensorVector) -> TensorVector {
        let mut out = self.clone();
        for (k, v) in rhs.terms() {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &TensorVector) -> TensorVector {
        self.add(&rhs.scale(&qi(-1)))
    }

    /// Drops every term whose lattice exponents leave the cube of the given
    /// radius.
    pub fn truncate(&self, radius: i64) -> TensorVector {
        let mut out = TensorVector::zero();
        for (k, v) in self.terms() {
            if sup_norm(&k.r) <= radius {
                out.add_term(k.clone(), v.clone());
            }
        }
        out
    }
}

/// Dimensions of one weight slice of a window search report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightCount {
    pub closure: usize,
    pub full: usize,
}

/// Result of a windowed submodule search: per-weight-offset dimensions of
/// the truncated closure against the full window.
#[derive(Debug, Clone)]
pub struct WindowReport {
    pub radius: i64,
    pub total_closure: usize,
    pub total_window: usize,
    pub per_weight: BTreeMap<Vec<i64>, WeightCount>,
    /// True when the closure is nonzero yet strictly smaller than the
    /// window: evidence (a lower bound, no completeness claim) of a proper
    /// submodule.
    pub proper: bool,
}

/// A tensor module: fiber representation, weight shift per lattice
/// direction, and for the semidirect algebra the scalar by which the formal
/// `D0` part acts.
#[derive(Debug, Clone)]
pub struct TensorModule {
    kind: AlgebraKind,
    fiber: GlRep,
    lambda: Vec<Scalar>,
    lambda0: Option<Scalar>,
}

impl TensorModule {
    pub fn new(
        kind: AlgebraKind,
        fiber: GlRep,
        lambda: Vec<Scalar>,
        lambda0: Option<Scalar>,
    ) -> Result<TensorModule> {
        let ec = kind.context().even_count();
        if fiber.shape() != (ec, kind.n()) || lambda.len() != ec {
            return Err(Error::BadDimensions);
        }
        if lambda0.is_some() != matches!(kind, AlgebraKind::SemiDirect { .. }) {
            return Err(Error::KindMismatch);
        }
        Ok(TensorModule { kind, fiber, lambda, lambda0 })
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn fiber(&self) -> &GlRep {
        &self.fiber
    }

    pub fn lambda(&self) -> &[Scalar] {
        &self.lambda
    }

    pub fn lambda0(&self) -> Option<&Scalar> {
        self.lambda0.as_ref()
    }

    pub fn validate_vector(&self, w: &TensorVector) -> Result<()> {
        let ec = self.kind.context().even_count();
        let full = self.kind.context().full_mask();
        for (k, _) in w.terms() {
            if k.r.len() != ec {
                return Err(Error::ContextMismatch);
            }
            if k.p & !full != 0 {
                return Err(Error::BadIndex { index: k.p as usize });
            }
            if k.j >= self.fiber.dim() {
                return Err(Error::BadIndex { index: k.j });
            }
        }
        Ok(())
    }

    /// Weight of a basis key under the Euler fields: `lambda + r`.
    pub fn weight_of(&self, key: &TvKey) -> Vec<Scalar> {
        self.lambda
            .iter()
            .zip(key.r.iter())
            .map(|(l, r)| l + qi(*r))
            .collect()
    }

    pub fn term_parity(&self, key: &TvKey) -> Parity {
        Parity::from_mask(key.p).xor(self.fiber.vector_parity(key.j))
    }

    /// Parity when all terms agree; zero counts as even.
    pub fn vector_parity(&self, w: &TensorVector) -> Option<Parity> {
        let mut it = w.terms();
        let first = match it.next() {
            None => return Some(Parity::Even),
            Some((k, _)) => self.term_parity(k),
        };
        for (k, _) in it {
            if self.term_parity(k) != first {
                return None;
            }
        }
        Some(first)
    }

    /// Adds `coef * (t^rs x^mask (x) rho(E[a,b]) v_j)` to the output.
    fn add_fiber_action(
        &self,
        out: &mut TensorVector,
        a: GlIndex,
        b: GlIndex,
        rs: &[i64],
        mask: u32,
        j: usize,
        coef: &Scalar,
    ) -> Result<()> {
        let mat = self.fiber.rho_unit(a, b)?;
        for k in 0..self.fiber.dim() {
            let e = mat.at(k, j);
            if !e.is_zero() {
                out.add_term(TvKey { r: rs.to_vec(), p: mask, j: k }, coef * e);
            }
        }
        Ok(())
    }

    /// The action of a vector field.  Per generator row, for a field term
    /// `t^s f gen` acting on a module term `t^r g (x) v`:
    ///
    /// * `D_j`: `(r_j + l_j) t^{r+s} f g (x) v`
    ///   `+ sum_i s_i t^{r+s} f g (x) E[i,j] v`
    ///   `+ sum_a (-1)^{p(g)} t^{r+s} ((f)*P_a · g) (x) E[a,j] v`;
    /// * `P_b`: `t^{r+s} f P_b(g) (x) v`
    ///   `+ sum_i s_i (-1)^{p(g)} t^{r+s} f g (x) E[i,b] v`
    ///   `+ sum_a t^{r+s} ((f)*P_a · g) (x) E[a,b] v`;
    /// * formal `D0`: `l0 t^{r+s} f g (x) v`.
    ///
    /// The `(-1)^{p(g)}` factors are the Koszul signs of the odd matrix
    /// units passing the Grassmann factor.
    pub fn act(&self, x: &VectorField, w: &TensorVector) -> Result<TensorVector> {
        if x.kind() != self.kind {
            return Err(Error::KindMismatch);
        }
        self.validate_vector(w)?;
        let ctx = self.kind.context();
        let n = ctx.n();
        let mut out = TensorVector::zero();
        for ((xm, gen), c) in x.terms() {
            let s = &xm.t;
            let q = xm.xi;
            for (key, d) in w.terms() {
                let base = c * d;
                let rs: Vec<i64> = key.r.iter().zip(s.iter()).map(|(a, b)| a + b).collect();
                let g_odd = Parity::from_mask(key.p).is_odd();
                match *gen {
                    Generator::D(jl) if self.kind_formal_d0(jl) => {
                        if let Some((mask, neg)) = grass_mul(q, key.p) {
                            let l0 = self.lambda0.as_ref().expect("validated at construction");
                            out.add_term(
                                TvKey { r: rs.clone(), p: mask, j: key.j },
                                signed(&base * l0, neg),
                            );
                        }
                    }
                    Generator::D(jl) => {
                        let jp = ctx.pos(jl)?;
                        let jgl = GlIndex::Ev(jp + 1);
                        if let Some((mask, neg)) = grass_mul(q, key.p) {
                            let coef = (qi(key.r[jp]) + &self.lambda[jp]) * &base;
                            out.add_term(
                                TvKey { r: rs.clone(), p: mask, j: key.j },
                                signed(coef, neg),
                            );
                            for i in ctx.labels() {
                                let ip = ctx.pos(i)?;
                                if s[ip] != 0 {
                                    let coef = signed(&base * qi(s[ip]), neg);
                                    self.add_fiber_action(
                                        &mut out,
                                        GlIndex::Ev(ip + 1),
                                        jgl,
                                        &rs,
                                        mask,
                                        key.j,
                                        &coef,
                                    )?;
                                }
                            }
                        }
                        for a in 1..=n {
                            let Some((q2, s1)) = grass_right_deriv(q, a) else { continue };
                            let Some((mask, s2)) = grass_mul(q2, key.p) else { continue };
                            let coef = signed(base.clone(), s1 ^ s2 ^ g_odd);
                            self.add_fiber_action(
                                &mut out,
                                GlIndex::Od(a),
                                jgl,
                                &rs,
                                mask,
                                key.j,
                                &coef,
                            )?;
                        }
                    }
                    Generator::P(b) => {
                        let bgl = GlIndex::Od(b);
                        if let Some((p2, s1)) = grass_left_deriv(key.p, b) {
                            if let Some((mask, s2)) = grass_mul(q, p2) {
                                out.add_term(
                                    TvKey { r: rs.clone(), p: mask, j: key.j },
                                    signed(base.clone(), s1 ^ s2),
                                );
                            }
                        }
                        if let Some((mask, neg)) = grass_mul(q, key.p) {
                            for i in ctx.labels() {
                                let ip = ctx.pos(i)?;
                                if s[ip] != 0 {
                                    let coef = signed(&base * qi(s[ip]), neg ^ g_odd);
                                    self.add_fiber_action(
                                        &mut out,
                                        GlIndex::Ev(ip + 1),
                                        bgl,
                                        &rs,
                                        mask,
                                        key.j,
                                        &coef,
                                    )?;
                                }
                            }
                        }
                        for a in 1..=n {
                            let Some((q2, s1)) = grass_right_deriv(q, a) else { continue };
                            let Some((mask, s2)) = grass_mul(q2, key.p) else { continue };
                            let coef = signed(base.clone(), s1 ^ s2);
                            self.add_fiber_action(
                                &mut out,
                                GlIndex::Od(a),
                                bgl,
                                &rs,
                                mask,
                                key.j,
                                &coef,
                            )?;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn kind_formal_d0(&self, label: usize) -> bool {
        matches!(self.kind, AlgebraKind::SemiDirect { .. }) && label == 0
    }

    /// Verifies `act([X,Y], w) = act(X, act(Y, w)) - (-1)^{p(X) p(Y)}
    /// act(Y, act(X, w))` exactly.  Requires homogeneous fields.
    pub fn module_axiom_check(
        &self,
        x: &VectorField,
        y: &VectorField,
        w: &TensorVector,
    ) -> Result<bool> {
        let px = x.parity().ok_or(Error::MixedParity)?;
        let py = y.parity().ok_or(Error::MixedParity)?;
        let lhs = self.act(&x.try_bracket(y)?, w)?;
        let xy = self.act(x, &self.act(y, w)?)?;
        let yx = self.act(y, &self.act(x, w)?)?;
        let rhs = if px.koszul(py) { xy.add(&yx) } else { xy.sub(&yx) };
        Ok(lhs == rhs)
    }

    /// Dimension of the weight space at `mu`: the module is free over the
    /// Laurent ring, so each weight in the support carries the full fiber.
    pub fn multiplicity(&self, mu: &[Scalar]) -> usize {
        if mu.len() != self.lambda.len() {
            return 0;
        }
        let integral = mu
            .iter()
            .zip(self.lambda.iter())
            .all(|(m, l)| (m - l).is_integer());
        if integral {
            (1usize << self.kind.n()) * self.fiber.dim()
        } else {
            0
        }
    }

    /// All basis keys with lattice exponents in the cube of the radius.
    fn window_keys(&self, radius: i64) -> Vec<TvKey> {
        let ctx = self.kind.context();
        let mut keys = Vec::new();
        for r in window(ctx.even_count(), radius) {
            for p in ctx.xi_masks() {
                for j in 0..self.fiber.dim() {
                    keys.push(TvKey { r: r.clone(), p, j });
                }
            }
        }
        keys
    }

    fn densify(keys: &BTreeMap<TvKey, usize>, w: &TensorVector) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); keys.len()];
        for (k, c) in w.terms() {
            out[keys[k]] = c.clone();
        }
        out
    }

    /// Closes the seeds under all basis fields with shifts in the cube of
    /// radius `b`, truncating supports to the cube of radius `3b`, and
    /// reports per-weight dimensions.  A closure strictly between zero and
    /// the full window is evidence of a proper submodule; the semantics are
    /// a lower bound only, since truncation discards boundary terms.
    pub fn window_submodule_search(
        &self,
        b: i64,
        seeds: &[TensorVector],
    ) -> Result<WindowReport> {
        if b < 1 {
            return Err(Error::BadIndex { index: 0 });
        }
        for s in seeds {
            self.validate_vector(s)?;
        }
        let ctx = self.kind.context();
        let radius = 3 * b;
        let keys = self.window_keys(radius);
        let index: BTreeMap<TvKey, usize> =
            keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut ops: Vec<VectorField> = Vec::new();
        for s in window(ctx.even_count(), b) {
            for q in ctx.xi_masks() {
                let mono = Monomial { t: s.clone(), xi: q };
                for i in self.kind.d_labels() {
                    let mut f = VectorField::zero(self.kind);
                    f.add_term(mono.clone(), Generator::D(i), qi(1));
                    ops.push(f);
                }
                for a in 1..=ctx.n() {
                    let mut f = VectorField::zero(self.kind);
                    f.add_term(mono.clone(), Generator::P(a), qi(1));
                    ops.push(f);
                }
            }
        }
        let mut span = RowSpan::new(keys.len());
        let mut frontier: Vec<TensorVector> =
            seeds.iter().map(|s| s.truncate(radius)).collect();
        while let Some(w) = frontier.pop() {
            if w.is_zero() || !span.insert(&Self::densify(&index, &w)) {
                continue;
            }
            for op in &ops {
                let img = self.act(op, &w)?.truncate(radius);
                if !img.is_zero() && !span.contains(&Self::densify(&index, &img)) {
                    frontier.push(img);
                }
            }
        }
        // Per-weight dimensions: dim(S ∩ slice) = dim S + dim slice − dim(S + slice).
        let mut per_weight = BTreeMap::new();
        for r in window(ctx.even_count(), radius) {
            let slice: Vec<usize> = keys
                .iter()
                .enumerate()
                .filter(|(_, k)| k.r == r)
                .map(|(i, _)| i)
                .collect();
            let mut joined = span.clone();
            for &i in &slice {
                let mut unit = vec![Scalar::zero(); keys.len()];
                unit[i] = qi(1);
                joined.insert(&unit);
            }
            let closure = span.dim() + slice.len() - joined.dim();
            per_weight.insert(r, WeightCount { closure, full: slice.len() });
        }
        let total_closure = span.dim();
        let total_window = keys.len();
        Ok(WindowReport {
            radius,
            total_closure,
            total_window,
            per_weight,
            proper: total_closure > 0 && total_closure < total_window,
        })
    }
}
