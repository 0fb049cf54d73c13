//! Finite fibers and polynomial fitting.
//!
//! A fiber is the Grassmann algebra tensored with a finite general-linear
//! module, acted on by the smash generators through closed first-order
//! formulas. Sampling those operators over a grid of shifts and fitting the
//! polynomial dependence recovers the jet matrices; the fit doubles as the
//! executable bridge between the smash and jet layers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_traits::Zero;

use crate::glmn::{GlIndex, GlRep};
use crate::jet::jets::{JetElement, JetKey};
use crate::jet::nf::jet_nf;
use crate::jet::smash::{SmashElement, SmashKey};
use crate::jet::JetTag;
use crate::linalg::QMatrix;
use crate::scalar::{l1_norm, multi_indices, power_over_factorial, qi, Scalar};
use crate::superalg::{grass_left_deriv, grass_mul, grass_right_deriv};
use crate::vfields::{AlgebraKind, Generator, VectorField};
use crate::{Error, Result};

/// Vector in a fiber: Grassmann monomial times a fiber basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FiberVector {
    terms: BTreeMap<(u32, usize), Scalar>,
}

impl FiberVector {
    pub fn zero() -> FiberVector {
        FiberVector {
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(mask: u32, idx: usize) -> FiberVector {
        let mut v = FiberVector::zero();
        v.add_term(mask, idx, qi(1));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, usize), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mask: u32, idx: usize) -> Scalar {
        self.terms
            .get(&(mask, idx))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, mask: u32, idx: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((mask, idx)).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(mask, idx));
        }
    }

    pub fn scale(&mut self, c: &Scalar) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for v in self.terms.values_mut() {
            *v *= c.clone();
        }
    }

    pub fn try_add(&self, other: &FiberVector) -> FiberVector {
        let mut out = self.clone();
        for (&(p, j), v) in other.terms.iter() {
            out.add_term(p, j, v.clone());
        }
        out
    }

    pub fn try_sub(&self, other: &FiberVector) -> FiberVector {
        let mut out = self.clone();
        for (&(p, j), v) in other.terms.iter() {
            out.add_term(p, j, -v.clone());
        }
        out
    }
}

/// Parameters of a fiber: the base weight, the scalar-row eigenvalue, and
/// the general-linear module.
#[derive(Debug, Clone)]
pub struct FiberSpec {
    lambda: Vec<Scalar>,
    lambda0: Scalar,
    rho: GlRep,
}

impl FiberSpec {
    pub fn new(lambda: Vec<Scalar>, lambda0: Scalar, rho: GlRep) -> Result<FiberSpec> {
        if rho.shape().0 != lambda.len() {
            return Err(Error::BadDimensions);
        }
        Ok(FiberSpec {
            lambda,
            lambda0,
            rho,
        })
    }

    pub fn m(&self) -> usize {
        self.lambda.len()
    }

    pub fn n(&self) -> usize {
        self.rho.shape().1
    }

    pub fn lambda(&self) -> &[Scalar] {
        &self.lambda
    }

    pub fn lambda0(&self) -> &Scalar {
        &self.lambda0
    }

    pub fn rho(&self) -> &GlRep {
        &self.rho
    }

    /// Total dimension: Grassmann masks times fiber vectors.
    pub fn dim(&self) -> usize {
        (1usize << self.n()) * self.rho.dim()
    }

    /// Flat index of `mask (x) fiber vector j`.
    pub fn flat(&self, mask: u32, j: usize) -> usize {
        (mask as usize) * self.rho.dim() + j
    }

    /// Inverse of [`Self::flat`].
    pub fn unflat(&self, idx: usize) -> (u32, usize) {
        ((idx / self.rho.dim()) as u32, idx % self.rho.dim())
    }
}

/// Applies a smash element to a fiber vector through the closed first-order
/// formulas: Euler rows pair the weight with even units and right
/// derivatives with odd units; odd rows differentiate and pair with the
/// mirrored units; scalar rows multiply by the scalar eigenvalue. A fiber
/// operator `a (x) B` picks up the sign `(-1)^{|B| |g|}` when moved past
/// the Grassmann monomial `g`.
pub fn fiber_act(spec: &FiberSpec, a: &SmashElement, u: &FiberVector) -> Result<FiberVector> {
    let (m, n) = a.shape();
    if m != spec.m() || n != spec.n() {
        return Err(Error::ContextMismatch);
    }
    let dv = spec.rho.dim();
    let mut out = FiberVector::zero();
    for (key, c) in a.terms() {
        for (&(g, vj), d) in u.terms.iter() {
            if vj >= dv {
                return Err(Error::BadIndex { index: vj });
            }
            let base = c.clone() * d.clone();
            let g_odd = crate::jet::mask_parity(g).is_odd();
            // Collect pure-operator output, then multiply by the prefix.
            let mut emit = |mask: u32, j: usize, w: Scalar| {
                if w.is_zero() {
                    return;
                }
                if let Some((pm, s)) = grass_mul(key.prefix, mask) {
                    out.add_term(pm, j, crate::scalar::signed(w, s));
                }
            };
            match key.tag {
                JetTag::D(i) => {
                    if let Some((fg, s)) = grass_mul(key.f, g) {
                        // Weight term.
                        emit(
                            fg,
                            vj,
                            crate::scalar::signed(base.clone() * spec.lambda[i - 1].clone(), s),
                        );
                        // Even units weighted by the shift.
                        for k in 1..=m {
                            if key.r[k - 1] == 0 {
                                continue;
                            }
                            let mat = spec.rho.rho_unit(GlIndex::Ev(k), GlIndex::Ev(i))?;
                            for row in 0..dv {
                                let v = mat.at(row, vj);
                                if v.is_zero() {
                                    continue;
                                }
                                emit(
                                    fg,
                                    row,
                                    crate::scalar::signed(
                                        base.clone() * qi(key.r[k - 1]) * v.clone(),
                                        s,
                                    ),
                                );
                            }
                        }
                    }
                    // Odd units against right derivatives of the argument.
                    for al in 1..=n {
                        if let Some((w, s1)) = grass_right_deriv(key.f, al) {
                            if let Some((wg, s2)) = grass_mul(w, g) {
                                let mat = spec.rho.rho_unit(GlIndex::Od(al), GlIndex::Ev(i))?;
                                for row in 0..dv {
                                    let v = mat.at(row, vj);
                                    if v.is_zero() {
                                        continue;
                                    }
                                    emit(
                                        wg,
                                        row,
                                        crate::scalar::signed(
                                            base.clone() * v.clone(),
                                            s1 ^ s2 ^ g_odd,
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
                JetTag::P(b) => {
                    // Derivation term.
                    if let Some((dg, s1)) = grass_left_deriv(g, b) {
                        if let Some((fdg, s2)) = grass_mul(key.f, dg) {
                            emit(fdg, vj, crate::scalar::signed(base.clone(), s1 ^ s2));
                        }
                    }
                    // Even units weighted by the shift; these are odd.
                    if let Some((fg, s)) = grass_mul(key.f, g) {
                        for k in 1..=m {
                            if key.r[k - 1] == 0 {
                                continue;
                            }
                            let mat = spec.rho.rho_unit(GlIndex::Ev(k), GlIndex::Od(b))?;
                            for row in 0..dv {
                                let v = mat.at(row, vj);
                                if v.is_zero() {
                                    continue;
                                }
                                emit(
                                    fg,
                                    row,
                                    crate::scalar::signed(
                                        base.clone() * qi(key.r[k - 1]) * v.clone(),
                                        s ^ g_odd,
                                    ),
                                );
                            }
                        }
                    }
                    // Odd-odd units, even operators.
                    for al in 1..=n {
                        if let Some((w, s1)) = grass_right_deriv(key.f, al) {
                            if let Some((wg, s2)) = grass_mul(w, g) {
                                let mat = spec.rho.rho_unit(GlIndex::Od(al), GlIndex::Od(b))?;
                                for row in 0..dv {
                                    let v = mat.at(row, vj);
                                    if v.is_zero() {
                                        continue;
                                    }
                                    emit(
                                        wg,
                                        row,
                                        crate::scalar::signed(base.clone() * v.clone(), s1 ^ s2),
                                    );
                                }
                            }
                        }
                    }
                }
                JetTag::D0 => {
                    if let Some((fg, s)) = grass_mul(key.f, g) {
                        emit(
                            fg,
                            vj,
                            crate::scalar::signed(base.clone() * spec.lambda0.clone(), s),
                        );
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Exact interpolation of polynomial families over the product grid
/// `{0..deg}^m`, with held-out probe points to certify the degree bound.
pub struct PolyFit {
    m: usize,
    deg: i64,
    grid: Vec<Vec<i64>>,
    inv: QMatrix,
}

impl PolyFit {
    pub fn new(m: usize, deg: i64) -> PolyFit {
        let grid = multi_indices(m, deg);
        let nn = grid.len();
        let mut v = QMatrix::zeros(nn, nn);
        for (ri, r) in grid.iter().enumerate() {
            for (ki, k) in grid.iter().enumerate() {
                v.set(ri, ki, power_over_factorial(r, k));
            }
        }
        let inv = v.inverse().expect("product grids are unisolvent");
        PolyFit { m, deg, grid, inv }
    }

    pub fn grid(&self) -> &[Vec<i64>] {
        &self.grid
    }

    /// Points outside the grid at which a fitted family must still agree.
    pub fn probes(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        out.push(alloc::vec![self.deg + 1; self.m]);
        out.push(alloc::vec![-1; self.m]);
        if self.m >= 2 {
            let mut alt = Vec::with_capacity(self.m);
            for p in 0..self.m {
                alt.push(if p % 2 == 0 { self.deg + 1 } else { -1 });
            }
            out.push(alt);
        } else {
            out.push(alloc::vec![-(self.deg) - 2; self.m]);
        }
        out
    }

    /// Solves for the coefficient vectors of each multi-index; sample `i`
    /// is the value vector at `grid()[i]`. Zero coefficient vectors are
    /// dropped.
    pub fn solve(&self, samples: &[Vec<Scalar>]) -> Result<BTreeMap<Vec<i64>, Vec<Scalar>>> {
        if samples.len() != self.grid.len() {
            return Err(Error::BadDimensions);
        }
        let width = samples.first().map(|s| s.len()).unwrap_or(0);
        if samples.iter().any(|s| s.len() != width) {
            return Err(Error::BadDimensions);
        }
        let mut out = BTreeMap::new();
        for (ki, k) in self.grid.iter().enumerate() {
            let mut vec = alloc::vec![Scalar::zero(); width];
            for (ri, sample) in samples.iter().enumerate() {
                let w = self.inv.at(ki, ri);
                if w.is_zero() {
                    continue;
                }
                for (slot, v) in vec.iter_mut().zip(sample.iter()) {
                    if !v.is_zero() {
                        *slot += w * v;
                    }
                }
            }
            if vec.iter().any(|v| !v.is_zero()) {
                out.insert(k.clone(), vec);
            }
        }
        Ok(out)
    }

    /// Evaluates fitted coefficients at an arbitrary point.
    pub fn eval(coeffs: &BTreeMap<Vec<i64>, Vec<Scalar>>, r: &[i64], width: usize) -> Vec<Scalar> {
        let mut out = alloc::vec![Scalar::zero(); width];
        for (k, vec) in coeffs.iter() {
            let w = power_over_factorial(r, k);
            if w.is_zero() {
                continue;
            }
            for (slot, v) in out.iter_mut().zip(vec.iter()) {
                if !v.is_zero() {
                    *slot += w.clone() * v.clone();
                }
            }
        }
        out
    }
}

/// Fits the jets of a smash family `r -> F(r)` whose terms all sit at the
/// sampled shift. The result satisfies `expand_eval(fit, r) = F(r)` for all
/// `r`; if the family is not polynomial of per-variable degree `deg`, the
/// held-out probes detect it as [`Error::DegreeBoundTooSmall`].
pub fn fit_jets<F>(m: usize, n: usize, deg: i64, mut family: F) -> Result<JetElement>
where
    F: FnMut(&[i64]) -> Result<SmashElement>,
{
    let fit = PolyFit::new(m, deg);
    let mut keyset: BTreeSet<(JetTag, u32, u32)> = BTreeSet::new();
    let mut raw: Vec<SmashElement> = Vec::with_capacity(fit.grid().len());
    let mut eval_at = |r: &[i64],
                       keyset: &mut BTreeSet<(JetTag, u32, u32)>|
     -> Result<SmashElement> {
        let s = family(r)?;
        if s.shape() != (m, n) {
            return Err(Error::ContextMismatch);
        }
        for (key, _) in s.terms() {
            if key.r != r {
                return Err(Error::InvalidElement(
                    "family sample contains a term at a foreign shift".into(),
                ));
            }
            keyset.insert((key.tag, key.f, key.prefix));
        }
        Ok(s)
    };
    for r in fit.grid().to_vec() {
        let s = eval_at(&r, &mut keyset)?;
        raw.push(s);
    }
    let keys: Vec<(JetTag, u32, u32)> = keyset.iter().cloned().collect();
    let vectorize = |s: &SmashElement, r: &[i64]| -> Vec<Scalar> {
        keys.iter()
            .map(|&(tag, f, prefix)| s.coeff(&SmashKey::new(tag, f, r.to_vec(), prefix)))
            .collect()
    };
    let samples: Vec<Vec<Scalar>> = raw
        .iter()
        .zip(fit.grid().iter())
        .map(|(s, r)| vectorize(s, r))
        .collect();
    let coeffs = fit.solve(&samples)?;
    // Held-out checks: the fitted polynomial must reproduce the family at
    // the probes, and the probes must not bring in unseen coordinates.
    for p in fit.probes() {
        let mut probe_keys = keyset.clone();
        let s = eval_at(&p, &mut probe_keys)?;
        if probe_keys.len() != keyset.len() {
            return Err(Error::DegreeBoundTooSmall);
        }
        let got = vectorize(&s, &p);
        let want = PolyFit::eval(&coeffs, &p, keys.len());
        if got != want {
            return Err(Error::DegreeBoundTooSmall);
        }
    }
    let mut out = JetElement::zero(m, n);
    for (k, vec) in coeffs.iter() {
        for (slot, c) in vec.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (tag, f, prefix) = keys[slot];
            let mut shift = k.clone();
            if let JetTag::D(i) = tag {
                shift[i - 1] -= 1;
            }
            out.add_term(JetKey::new(tag, f, shift, prefix), c.clone());
        }
    }
    Ok(out)
}

/// Fitted jet matrices of a fiber, plus the Grassmann multiplication
/// operators: everything needed to act by arbitrary jet elements and to
/// rebuild the module over the Laurent ring.
#[derive(Debug, Clone)]
pub struct JetMatrices {
    m: usize,
    n: usize,
    dim_v: usize,
    dim: usize,
    pub(crate) mats: BTreeMap<(JetTag, u32, Vec<i64>), QMatrix>,
    mul: Vec<QMatrix>,
}

impl JetMatrices {
    /// Samples the fiber operators over a shift grid and fits their jets.
    pub fn from_fiber(spec: &FiberSpec, deg: i64) -> Result<JetMatrices> {
        let m = spec.m();
        let n = spec.n();
        let dim = spec.dim();
        let dv = spec.rho.dim();
        let fit = PolyFit::new(m, deg);
        // Grassmann multiplication operators.
        let masks = 1u32 << n;
        let mut mul = Vec::with_capacity(masks as usize);
        for q in 0..masks {
            let mut mat = QMatrix::zeros(dim, dim);
            for g in 0..masks {
                if let Some((qg, s)) = grass_mul(q, g) {
                    for j in 0..dv {
                        mat.set(
                            spec.flat(qg, j),
                            spec.flat(g, j),
                            crate::scalar::signed(qi(1), s),
                        );
                    }
                }
            }
            mul.push(mat);
        }
        let mut tags: Vec<JetTag> = Vec::new();
        for i in 1..=m {
            tags.push(JetTag::D(i));
        }
        for a in 1..=n {
            tags.push(JetTag::P(a));
        }
        tags.push(JetTag::D0);
        let mut mats = BTreeMap::new();
        for &tag in tags.iter() {
            for f in 0..masks {
                let operator_at = |r: &[i64]| -> Result<Vec<Scalar>> {
                    let gen = SmashElement::generator(m, n, tag, f, r.to_vec())?;
                    let mut flat = alloc::vec![Scalar::zero(); dim * dim];
                    for g in 0..masks {
                        for j in 0..dv {
                            let col = fiber_act(spec, &gen, &FiberVector::unit(g, j))?;
                            for (&(p, row), v) in col.terms() {
                                flat[spec.flat(p, row) * dim + spec.flat(g, j)] = v.clone();
                            }
                        }
                    }
                    Ok(flat)
                };
                let samples: Result<Vec<Vec<Scalar>>> =
                    fit.grid().iter().map(|r| operator_at(r)).collect();
                let coeffs = fit.solve(&samples?)?;
                for p in fit.probes() {
                    let got = operator_at(&p)?;
                    let want = PolyFit::eval(&coeffs, &p, dim * dim);
                    if got != want {
                        return Err(Error::DegreeBoundTooSmall);
                    }
                }
                for (k, vec) in coeffs.iter() {
                    let mut shift = k.clone();
                    if let JetTag::D(i) = tag {
                        shift[i - 1] -= 1;
                    }
                    let mut mat = QMatrix::zeros(dim, dim);
                    for (pos, v) in vec.iter().enumerate() {
                        if !v.is_zero() {
                            mat.set(pos / dim, pos % dim, v.clone());
                        }
                    }
                    mats.insert((tag, f, shift), mat);
                }
            }
        }
        Ok(JetMatrices {
            m,
            n,
            dim_v: dv,
            dim,
            mats,
            mul,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fiber_dim(&self) -> usize {
        self.dim_v
    }

    pub fn flat(&self, mask: u32, j: usize) -> usize {
        (mask as usize) * self.dim_v + j
    }

    pub fn mul_matrix(&self, mask: u32) -> &QMatrix {
        &self.mul[mask as usize]
    }

    pub fn jet_matrix(&self, tag: JetTag, f: u32, shift: &[i64]) -> Option<&QMatrix> {
        self.mats.get(&(tag, f, shift.to_vec()))
    }

    /// Matrix of an arbitrary jet element: fitted row matrices composed
    /// with prefix multiplication.
    pub fn matrix_of(&self, a: &JetElement) -> Result<QMatrix> {
        if a.shape() != (self.m, self.n) {
            return Err(Error::ContextMismatch);
        }
        let mut out = QMatrix::zeros(self.dim, self.dim);
        for (key, c) in a.terms() {
            if let Some(mat) = self.mats.get(&(key.tag, key.f, key.shift.clone())) {
                let prod = self.mul[key.prefix as usize].mul(mat)?.mul_scalar(c);
                out = out.try_add(&prod)?;
            }
        }
        Ok(out)
    }

    /// Verifies that every row which rewrites to zero or to its normal form
    /// acts by zero, over all jet indices of total degree at most two.
    pub fn null_rows_annihilate(&self) -> Result<bool> {
        let mut tags: Vec<JetTag> = Vec::new();
        for i in 1..=self.m {
            tags.push(JetTag::D(i));
        }
        for a in 1..=self.n {
            tags.push(JetTag::P(a));
        }
        tags.push(JetTag::D0);
        let masks = 1u32 << self.n;
        for &tag in tags.iter() {
            for f in 0..masks {
                for k in multi_indices(self.m, 2) {
                    if l1_norm(&k) > 2 {
                        continue;
                    }
                    let mut shift = k.clone();
                    if let JetTag::D(i) = tag {
                        shift[i - 1] -= 1;
                    }
                    let jet =
                        JetElement::single(self.m, self.n, JetKey::new(tag, f, shift, 0), qi(1))?;
                    let diff = jet.try_sub(&jet_nf(&jet).into_jet())?;
                    if !self.matrix_of(&diff)?.is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Whether the distinguished null rows act by zero on the fiber; the
/// executable membership test for the annihilating span.
pub fn j_annihilation_check(spec: &FiberSpec) -> Result<bool> {
    JetMatrices::from_fiber(spec, 3)?.null_rows_annihilate()
}

/// Vector in a module rebuilt from fiber data: Laurent weight offset plus a
/// flat fiber coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InducedVector {
    terms: BTreeMap<(Vec<i64>, usize), Scalar>,
}

impl InducedVector {
    pub fn zero() -> InducedVector {
        InducedVector {
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(r: Vec<i64>, idx: usize) -> InducedVector {
        let mut v = InducedVector::zero();
        v.add_term(r, idx, qi(1));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Vec<i64>, usize), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, r: &[i64], idx: usize) -> Scalar {
        self.terms
            .get(&(r.to_vec(), idx))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, r: Vec<i64>, idx: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((r, idx)).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

/// Module over the vector-field algebra rebuilt from fitted fiber data:
/// Euler rows act by the weight offset plus their jets, odd rows by their
/// jets alone, the formal scalar row through its jets.
pub struct InducedModule {
    kind: AlgebraKind,
    jets: JetMatrices,
}

/// Packages fitted jet matrices as a module over the chosen algebra.
pub fn induce_from_fiber(kind: AlgebraKind, jets: JetMatrices) -> Result<InducedModule> {
    if matches!(kind, AlgebraKind::Extended { .. }) {
        return Err(Error::KindMismatch);
    }
    if kind.m() != jets.m() || kind.n() != jets.n() {
        return Err(Error::ContextMismatch);
    }
    Ok(InducedModule { kind, jets })
}

impl InducedModule {
    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn jets(&self) -> &JetMatrices {
        &self.jets
    }

    pub fn act(&self, x: &VectorField, w: &InducedVector) -> Result<InducedVector> {
        if x.kind() != self.kind {
            return Err(Error::KindMismatch);
        }
        let m = self.jets.m();
        let dim = self.jets.dim();
        let mut out = InducedVector::zero();
        for ((mono, gen), c) in x.terms() {
            let s = &mono.t;
            let q = mono.xi;
            // Jets of this generator's row with argument q, weighted by the
            // shift polynomial.
            let mut weighted: Vec<(&QMatrix, Scalar)> = Vec::new();
            let tag = match *gen {
                Generator::D(0) => JetTag::D0,
                Generator::D(j) => JetTag::D(j),
                Generator::P(b) => JetTag::P(b),
            };
            for ((t, f, shift), mat) in self.jets.mats.iter() {
                if *t != tag || *f != q {
                    continue;
                }
                let mut k = shift.clone();
                if let JetTag::D(i) = tag {
                    k[i - 1] += 1;
                }
                let wgt = power_over_factorial(s, &k);
                if !wgt.is_zero() {
                    weighted.push((mat, wgt));
                }
            }
            for ((r, idx), d) in w.terms.iter() {
                if r.len() != m || *idx >= dim {
                    return Err(Error::BadDimensions);
                }
                let rs: Vec<i64> = r.iter().zip(s.iter()).map(|(a, b)| a + b).collect();
                let base = c.clone() * d.clone();
                // Weight-offset channel for true Euler rows.
                if let Generator::D(j) = *gen {
                    if j >= 1 && r[j - 1] != 0 {
                        let mulq = self.jets.mul_matrix(q);
                        for row in 0..dim {
                            let v = mulq.at(row, *idx);
                            if !v.is_zero() {
                                out.add_term(
                                    rs.clone(),
                                    row,
                                    base.clone() * qi(r[j - 1]) * v.clone(),
                                );
                            }
                        }
                    }
                }
                for (mat, wgt) in weighted.iter() {
                    for row in 0..dim {
                        let v = mat.at(row, *idx);
                        if !v.is_zero() {
                            out.add_term(rs.clone(), row, base.clone() * wgt.clone() * v.clone());
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::jets::expand_eval;
    use crate::scalar::q;
    use crate::superalg::SuperPoly;
    use crate::tensormod::{TensorModule, TensorVector, TvKey};
    use crate::vfields::VectorField;

    fn natural_spec(m: usize, n: usize, lam: &[Scalar], lam0: Scalar) -> FiberSpec {
        FiberSpec::new(lam.to_vec(), lam0, GlRep::natural(m, n)).unwrap()
    }

    #[test]
    fn euler_row_reads_the_weight() {
        // D1(1, 0) acts by lambda_1 alone.
        let spec = natural_spec(1, 1, &[q(1, 2)], qi(0));
        let gen = SmashElement::generator(1, 1, JetTag::D(1), 0, alloc::vec![0]).unwrap();
        let u = FiberVector::unit(0, 0);
        let got = fiber_act(&spec, &gen, &u).unwrap();
        let mut want = u.clone();
        want.scale(&q(1, 2));
        assert_eq!(got, want);
    }

    #[test]
    fn odd_units_pair_with_the_argument_derivative() {
        // D1(x1, 0) with zero weight sends 1 (x) v_even to 1 (x) v_odd:
        // only the odd unit against the stripped argument survives.
        let spec = natural_spec(1, 1, &[qi(0)], qi(0));
        let gen = SmashElement::generator(1, 1, JetTag::D(1), 1, alloc::vec![0]).unwrap();
        let u = FiberVector::unit(0, 0);
        let got = fiber_act(&spec, &gen, &u).unwrap();
        assert_eq!(got, FiberVector::unit(0, 1));
    }

    #[test]
    fn odd_argument_row_differentiates() {
        // P1(1, 0) strips x1 from the Grassmann factor.
        let spec = natural_spec(1, 1, &[q(1, 2)], qi(0));
        let gen = SmashElement::generator(1, 1, JetTag::P(1), 0, alloc::vec![0]).unwrap();
        let u = FiberVector::unit(1, 0);
        let got = fiber_act(&spec, &gen, &u).unwrap();
        assert_eq!(got, FiberVector::unit(0, 0));
    }

    #[test]
    fn scalar_row_multiplies() {
        let spec = natural_spec(1, 1, &[qi(0)], q(5, 7));
        let gen = SmashElement::generator(1, 1, JetTag::D0, 1, alloc::vec![2]).unwrap();
        let u = FiberVector::unit(0, 1);
        let got = fiber_act(&spec, &gen, &u).unwrap();
        let mut want = FiberVector::unit(1, 1);
        want.scale(&q(5, 7));
        assert_eq!(got, want);
    }

    #[test]
    fn fiber_operators_respect_the_bracket() {
        // [A, B] acting = A B -+ B A on homogeneous elements, over a grid
        // of generator pairs.
        let spec = natural_spec(1, 2, &[q(1, 3)], q(2, 5));
        let gens: Vec<SmashElement> = alloc::vec![
            SmashElement::generator(1, 2, JetTag::D(1), 0b01, alloc::vec![1]).unwrap(),
            SmashElement::generator(1, 2, JetTag::D(1), 0b00, alloc::vec![-1]).unwrap(),
            SmashElement::generator(1, 2, JetTag::P(1), 0b00, alloc::vec![0]).unwrap(),
            SmashElement::generator(1, 2, JetTag::P(2), 0b11, alloc::vec![2]).unwrap(),
            SmashElement::generator(1, 2, JetTag::D0, 0b10, alloc::vec![1]).unwrap(),
        ];
        for a in gens.iter() {
            for b in gens.iter() {
                let br = crate::jet::smash::smash_bracket(a, b).unwrap();
                let pa = a.parity().unwrap();
                let pb = b.parity().unwrap();
                for g in 0..4u32 {
                    for j in 0..3usize {
                        let u = FiberVector::unit(g, j);
                        let direct = fiber_act(&spec, &br, &u).unwrap();
                        let ab = fiber_act(&spec, a, &fiber_act(&spec, b, &u).unwrap()).unwrap();
                        let mut ba =
                            fiber_act(&spec, b, &fiber_act(&spec, a, &u).unwrap()).unwrap();
                        ba.scale(&crate::scalar::signed(qi(1), pa.koszul(pb)));
                        assert_eq!(direct, ab.try_sub(&ba), "a={a} b={b} g={g} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn fitted_jets_round_trip_through_evaluation() {
        // Plant a jet family, evaluate it, fit it back.
        let mut jets = JetElement::zero(2, 1);
        jets.add_term(JetKey::new(JetTag::D(1), 1, alloc::vec![-1, 2], 0), q(3, 2));
        jets.add_term(JetKey::new(JetTag::D(1), 0, alloc::vec![1, 0], 1), qi(-2));
        jets.add_term(JetKey::new(JetTag::P(1), 0, alloc::vec![0, 3], 0), qi(5));
        jets.add_term(JetKey::new(JetTag::D0, 1, alloc::vec![0, 0], 0), qi(1));
        let fitted = fit_jets(2, 1, 3, |r| expand_eval(&jets, r)).unwrap();
        assert_eq!(fitted, jets);
    }

    #[test]
    fn degree_bound_violations_are_detected() {
        // A family of degree four cannot be fitted with bound three.
        let mut jets = JetElement::zero(1, 0);
        jets.add_term(JetKey::new(JetTag::D(1), 0, alloc::vec![3], 0), qi(1));
        let err = fit_jets(1, 0, 3, |r| expand_eval(&jets, r)).unwrap_err();
        assert_eq!(err, Error::DegreeBoundTooSmall);
        // Bound four fits it.
        let fitted = fit_jets(1, 0, 4, |r| expand_eval(&jets, r)).unwrap();
        assert_eq!(fitted, jets);
    }

    #[test]
    fn foreign_shift_samples_are_rejected() {
        let err = fit_jets(1, 0, 2, |_r| {
            SmashElement::generator(1, 0, JetTag::D(1), 0, alloc::vec![17])
        })
        .unwrap_err();
        assert!(matches!(err, Error::InvalidElement(_)));
    }

    #[test]
    fn fitted_fiber_jets_match_direct_application() {
        // The jets of the fiber operators, re-evaluated, give back the
        // operator at every probe shift.
        let spec = natural_spec(1, 1, &[q(1, 2)], q(1, 3));
        let jm = JetMatrices::from_fiber(&spec, 3).unwrap();
        for r in [-2i64, 0, 1, 5] {
            for (tag, f) in [
                (JetTag::D(1), 0u32),
                (JetTag::D(1), 1),
                (JetTag::P(1), 0),
                (JetTag::P(1), 1),
                (JetTag::D0, 0),
            ] {
                let gen = SmashElement::generator(1, 1, tag, f, alloc::vec![r]).unwrap();
                for g in 0..2u32 {
                    for j in 0..2usize {
                        let direct = fiber_act(&spec, &gen, &FiberVector::unit(g, j)).unwrap();
                        // Reassemble from jets.
                        let mut total = FiberVector::zero();
                        for ((t, ff, shift), mat) in jm.mats.iter() {
                            if *t != tag || *ff != f {
                                continue;
                            }
                            let mut k = shift.clone();
                            if let JetTag::D(i) = tag {
                                k[i - 1] += 1;
                            }
                            let w = power_over_factorial(&[r], &k);
                            if w.is_zero() {
                                continue;
                            }
                            let col = jm.flat(g, j);
                            for row in 0..jm.dim() {
                                let v = mat.at(row, col);
                                if !v.is_zero() {
                                    let (p, vj) = spec.unflat(row);
                                    total.add_term(p, vj, w.clone() * v.clone());
                                }
                            }
                        }
                        assert_eq!(direct, total, "{tag} f={f} r={r} g={g} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn null_rows_annihilate_small_fibers() {
        for (m, n) in [(1usize, 1usize), (2, 1)] {
            let lam: Vec<Scalar> = (0..m).map(|i| q(1 + i as i64, 2)).collect();
            let spec = natural_spec(m, n, &lam, q(1, 5));
            assert!(j_annihilation_check(&spec).unwrap(), "(m,n)=({m},{n})");
            let dual = FiberSpec::new(lam.clone(), q(1, 5), GlRep::natural(m, n).dual()).unwrap();
            assert!(j_annihilation_check(&dual).unwrap(), "dual (m,n)=({m},{n})");
        }
    }

    #[test]
    fn corrupted_jets_fail_the_annihilation_check() {
        let spec = natural_spec(1, 1, &[q(1, 2)], qi(0));
        let mut jm = JetMatrices::from_fiber(&spec, 3).unwrap();
        // Corrupt a matrix that a rewrite relates to others: the diagonal
        // row with Grassmann argument must factor through multiplication.
        let key = (JetTag::D(1), 1u32, alloc::vec![0i64]);
        let mat = jm.mats.get_mut(&key).unwrap();
        let v = mat.at(0, 0).clone();
        mat.set(0, 0, v + qi(1));
        assert!(!jm.null_rows_annihilate().unwrap());
    }

    #[test]
    fn induced_action_matches_the_tensor_module() {
        let kind = AlgebraKind::SemiDirect { m: 1, n: 1 };
        let rep = GlRep::natural(1, 1);
        let lam = alloc::vec![q(1, 2)];
        let lam0 = q(2, 7);
        let module =
            TensorModule::new(kind, rep.clone(), lam.clone(), Some(lam0.clone())).unwrap();
        let spec = FiberSpec::new(lam, lam0, rep).unwrap();
        let jm = JetMatrices::from_fiber(&spec, 3).unwrap();
        let induced = induce_from_fiber(kind, jm).unwrap();
        // Sample fields: t-power, Grassmann factor, every generator.
        let mut fields: Vec<VectorField> = Vec::new();
        for s in [-2i64, 0, 1] {
            for q_mask in 0..2u32 {
                for gen in [Generator::D(0), Generator::D(1), Generator::P(1)] {
                    let poly = SuperPoly::monomial(
                        crate::superalg::Context::new(1, 1),
                        crate::superalg::Monomial {
                            t: alloc::vec![s],
                            xi: q_mask,
                        },
                        qi(1),
                    )
                    .unwrap();
                    fields.push(VectorField::from_poly(kind, &poly, gen).unwrap());
                }
            }
        }
        for x in fields.iter() {
            for r in [-1i64, 0, 2] {
                for p in 0..2u32 {
                    for j in 0..2usize {
                        let w = TensorVector::unit(TvKey {
                            r: alloc::vec![r],
                            p,
                            j,
                        });
                        let expect = module.act(x, &w).unwrap();
                        let got = induced
                            .act(x, &InducedVector::unit(alloc::vec![r], (p as usize) * 2 + j))
                            .unwrap();
                        // Compare through the flat identification.
                        let mut flat_expect = InducedVector::zero();
                        for (key, c) in expect.terms() {
                            flat_expect.add_term(
                                key.r.clone(),
                                (key.p as usize) * 2 + key.j,
                                c.clone(),
                            );
                        }
                        assert_eq!(got, flat_expect, "x={x} r={r} p={p} j={j}");
                    }
                }
            }
        }
    }
}
