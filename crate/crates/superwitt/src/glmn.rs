//! The general linear Lie superalgebra on `m` even and `n` odd labels,
//! finite-dimensional representations of it, and searches for invariant
//! subspaces.
//!
//! Representation spaces are ordered even block first; every structural
//! matrix must respect that grading.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{QMatrix, RowSpan};
use crate::scalar::Scalar;
use crate::superalg::Parity;

/// A row or column label of the matrix superalgebra: `Ev(i)` for `1..=m`,
/// `Od(a)` for `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GlIndex {
    Ev(usize),
    Od(usize),
}

impl GlIndex {
    pub fn parity(&self) -> Parity {
        match self {
            GlIndex::Ev(_) => Parity::Even,
            GlIndex::Od(_) => Parity::Odd,
        }
    }

    fn validate(&self, m: usize, n: usize) -> Result<()> {
        let ok = match *self {
            GlIndex::Ev(i) => i >= 1 && i <= m,
            GlIndex::Od(a) => a >= 1 && a <= n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadIndex {
                index: match *self {
                    GlIndex::Ev(i) => i,
                    GlIndex::Od(a) => a,
                },
            })
        }
    }

    /// Flat position in the label list `Ev(1)..Ev(m), Od(1)..Od(n)`.
    pub fn flat(&self, m: usize) -> usize {
        match *self {
            GlIndex::Ev(i) => i - 1,
            GlIndex::Od(a) => m + a - 1,
        }
    }
}

impl fmt::Display for GlIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GlIndex::Ev(i) => write!(f, "e{i}"),
            GlIndex::Od(a) => write!(f, "o{a}"),
        }
    }
}

/// Parity of the matrix unit `E[a, b]`.
pub fn unit_parity(a: GlIndex, b: GlIndex) -> Parity {
    a.parity().xor(b.parity())
}

/// An element of the matrix superalgebra: rational combination of units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlElement {
    m: usize,
    n: usize,
    terms: BTreeMap<(GlIndex, GlIndex), Scalar>,
}

impl GlElement {
    pub fn zero(m: usize, n: usize) -> GlElement {
        GlElement { m, n, terms: BTreeMap::new() }
    }

    pub fn unit(m: usize, n: usize, a: GlIndex, b: GlIndex) -> Result<GlElement> {
        a.validate(m, n)?;
        b.validate(m, n)?;
        let mut e = GlElement::zero(m, n);
        e.add_term(a, b, crate::scalar::qi(1));
        Ok(e)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(GlIndex, GlIndex), &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, a: GlIndex, b: GlIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert!(a.validate(self.m, self.n).is_ok() && b.validate(self.m, self.n).is_ok());
        let key = (a, b);
        let cur = self.terms.remove(&key).unwrap_or_else(Scalar::zero);
        let sum = cur + c;
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn scale(&self, c: &Scalar) -> GlElement {
        let mut out = GlElement::zero(self.m, self.n);
        for ((a, b), v) in self.terms() {
            out.add_term(*a, *b, v * c);
        }
        out
    }

    pub fn try_add(&self, rhs: &GlElement) -> Result<GlElement> {
        if self.shape() != rhs.shape() {
            return Err(Error::KindMismatch);
        }
        let mut out = self.clone();
        for ((a, b), v) in rhs.terms() {
            out.add_term(*a, *b, v.clone());
        }
        Ok(out)
    }

    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Some(Parity::Even),
            Some(&(a, b)) => unit_parity(a, b),
        };
        for &(a, b) in it {
            if unit_parity(a, b) != first {
                return None;
            }
        }
        Some(first)
    }

    /// Supercommutator:
    /// `[E[a,b], E[c,d]] = d(b,c) E[a,d] - (-1)^{p p'} d(d,a) E[c,b]`.
    pub fn bracket(&self, rhs: &GlElement) -> Result<GlElement> {
        if self.shape() != rhs.shape() {
            return Err(Error::KindMismatch);
        }
        let mut out = GlElement::zero(self.m, self.n);
        for ((a, b), x) in self.terms() {
            let p = unit_parity(*a, *b);
            for ((c, d), y) in rhs.terms() {
                let q = unit_parity(*c, *d);
                let xy = x * y;
                if b == c {
                    out.add_term(*a, *d, xy.clone());
                }
                if d == a {
                    out.add_term(*c, *b, crate::scalar::signed(xy, !p.koszul(q)));
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for GlElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in self.terms() {
            crate::superalg::fmt_term(f, first, c, Some(alloc::format!("E[{a},{b}]")))?;
            first = false;
        }
        Ok(())
    }
}

/// A finite-dimensional representation: one matrix per matrix unit, acting
/// on a space whose first `even_dim` coordinates are even and remaining
/// `odd_dim` are odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlRep {
    m: usize,
    n: usize,
    even_dim: usize,
    odd_dim: usize,
    /// Indexed by `a.flat * (m + n) + b.flat`.
    mats: Vec<QMatrix>,
}

impl GlRep {
    pub fn from_matrices(
        m: usize,
        n: usize,
        even_dim: usize,
        odd_dim: usize,
        mats: Vec<QMatrix>,
    ) -> Result<GlRep> {
        let k = m + n;
        if mats.len() != k * k {
            return Err(Error::BadDimensions);
        }
        let d = even_dim + odd_dim;
        if mats.iter().any(|mat| mat.rows() != d || mat.cols() != d) {
            return Err(Error::BadDimensions);
        }
        Ok(GlRep { m, n, even_dim, odd_dim, mats })
    }

    /// The one-dimensional even representation on which everything acts by
    /// zero.
    pub fn trivial(m: usize, n: usize) -> GlRep {
        let k = m + n;
        GlRep { m, n, even_dim: 1, odd_dim: 0, mats: vec![QMatrix::zeros(1, 1); k * k] }
    }

    /// Column vectors with `E[a,b]` acting as the matrix unit.
    pub fn natural(m: usize, n: usize) -> GlRep {
        let k = m + n;
        let mut mats = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                let mut mat = QMatrix::zeros(k, k);
                mat.set(a, b, crate::scalar::qi(1));
                mats.push(mat);
            }
        }
        GlRep { m, n, even_dim: m, odd_dim: n, mats }
    }

    /// Super-dual representation on the dual basis: a unit of parity `p`
    /// acts by minus the transpose, with a sign `(-1)^{p * p(row)}` woven in
    /// so that the bracket relations survive.
    pub fn dual(&self) -> GlRep {
        let k = self.m + self.n;
        let dim = self.dim();
        let mut mats = Vec::with_capacity(k * k);
        for a in self.labels() {
            for b in self.labels() {
                let p = unit_parity(a, b);
                let src = self.rho_unit(a, b).expect("own labels");
                let mut mat = QMatrix::zeros(dim, dim);
                for c in 0..dim {
                    for d in 0..dim {
                        let v = src.at(c, d);
                        if v.is_zero() {
                            continue;
                        }
                        let neg = p.koszul(self.vector_parity(c));
                        mat.set(d, c, crate::scalar::signed(-v.clone(), neg));
                    }
                }
                mats.push(mat);
            }
        }
        GlRep { m: self.m, n: self.n, even_dim: self.even_dim, odd_dim: self.odd_dim, mats }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn even_dim(&self) -> usize {
        self.even_dim
    }

    pub fn odd_dim(&self) -> usize {
        self.odd_dim
    }

    pub fn dim(&self) -> usize {
        self.even_dim + self.odd_dim
    }

    pub fn vector_parity(&self, idx: usize) -> Parity {
        if idx < self.even_dim {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn labels(&self) -> Vec<GlIndex> {
        let mut out = Vec::with_capacity(self.m + self.n);
        for i in 1..=self.m {
            out.push(GlIndex::Ev(i));
        }
        for a in 1..=self.n {
            out.push(GlIndex::Od(a));
        }
        out
    }

    pub fn rho_unit(&self, a: GlIndex, b: GlIndex) -> Result<&QMatrix> {
        a.validate(self.m, self.n)?;
        b.validate(self.m, self.n)?;
        Ok(&self.mats[a.flat(self.m) * (self.m + self.n) + b.flat(self.m)])
    }

    pub fn rho(&self, x: &GlElement) -> Result<QMatrix> {
        if x.shape() != (self.m, self.n) {
            return Err(Error::KindMismatch);
        }
        let mut out = QMatrix::zeros(self.dim(), self.dim());
        for ((a, b), c) in x.terms() {
            let mat = self.rho_unit(*a, *b)?;
            for i in 0..self.dim() {
                for j in 0..self.dim() {
                    let v = mat.at(i, j);
                    if !v.is_zero() {
                        let cur = out.at(i, j).clone();
                        out.set(i, j, cur + c * v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn act(&self, x: &GlElement, v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.rho(x)?.mul_vec(v).map_err(|_| Error::BadDimensions)
    }

    /// Verifies that the matrices define a graded representation: each unit
    /// matrix is parity-homogeneous of the unit's parity, and all bracket
    /// relations hold.
    pub fn rep_check(&self) -> Result<()> {
        let labels = self.labels();
        for &a in &labels {
            for &b in &labels {
                let p = unit_parity(a, b);
                let mat = self.rho_unit(a, b)?;
                for i in 0..self.dim() {
                    for j in 0..self.dim() {
                        if mat.at(i, j).is_zero() {
                            continue;
                        }
                        if self.vector_parity(i).xor(self.vector_parity(j)) != p {
                            return Err(Error::NotGraded);
                        }
                    }
                }
            }
        }
        for &a in &labels {
            for &b in &labels {
                let x = GlElement::unit(self.m, self.n, a, b)?;
                let mx = self.rho_unit(a, b)?;
                let p = unit_parity(a, b);
                for &c in &labels {
                    for &d in &labels {
                        let y = GlElement::unit(self.m, self.n, c, d)?;
                        let my = self.rho_unit(c, d)?;
                        let q = unit_parity(c, d);
                        let lhs = self.rho(&x.bracket(&y)?)?;
                        let mut rhs = mx.mul(my)?;
                        let back = my.mul(mx)?;
                        let flip = p.koszul(q);
                        for i in 0..self.dim() {
                            for j in 0..self.dim() {
                                let t = back.at(i, j);
                                if !t.is_zero() {
                                    let cur = rhs.at(i, j).clone();
                                    let t = if flip { t.clone() } else { -t.clone() };
                                    rhs.set(i, j, cur + t);
                                }
                            }
                        }
                        if lhs != rhs {
                            return Err(Error::NotARep {
                                a: a.flat(self.m),
                                b: b.flat(self.m),
                                c: c.flat(self.m),
                                d: d.flat(self.m),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Graded tensor product: the action on `u (x) v` is
    /// `x u (x) v + (-1)^{p(x) p(u)} u (x) x v`, with the combined basis
    /// re-sorted so even vectors come first.
    pub fn tensor(&self, other: &GlRep) -> Result<GlRep> {
        if self.shape() != other.shape() {
            return Err(Error::KindMismatch);
        }
        let (da, db) = (self.dim(), other.dim());
        // Pairs in lexicographic order, then stably partitioned by parity.
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(da * db);
        for i in 0..da {
            for j in 0..db {
                pairs.push((i, j));
            }
        }
        let parity_of = |&(i, j): &(usize, usize)| {
            self.vector_parity(i).xor(other.vector_parity(j))
        };
        let mut sorted: Vec<(usize, usize)> =
            pairs.iter().copied().filter(|p| parity_of(p) == Parity::Even).collect();
        let even_dim = sorted.len();
        sorted.extend(pairs.iter().copied().filter(|p| parity_of(p) == Parity::Odd));
        let mut pos = BTreeMap::new();
        for (idx, pr) in sorted.iter().enumerate() {
            pos.insert(*pr, idx);
        }
        let d = da * db;
        let labels = self.labels();
        let mut mats = Vec::with_capacity((self.m + self.n) * (self.m + self.n));
        for &a in &labels {
            for &b in &labels {
                let p = unit_parity(a, b);
                let ma = self.rho_unit(a, b)?;
                let mb = other.rho_unit(a, b)?;
                let mut mat = QMatrix::zeros(d, d);
                for (col, &(i, j)) in sorted.iter().enumerate() {
                    for k in 0..da {
                        let c = ma.at(k, i);
                        if !c.is_zero() {
                            let row = pos[&(k, j)];
                            let cur = mat.at(row, col).clone();
                            mat.set(row, col, cur + c);
                        }
                    }
                    let neg = p.koszul(self.vector_parity(i));
                    for l in 0..db {
                        let c = mb.at(l, j);
                        if !c.is_zero() {
                            let row = pos[&(i, l)];
                            let cur = mat.at(row, col).clone();
                            let c = crate::scalar::signed(c.clone(), neg);
                            mat.set(row, col, cur + c);
                        }
                    }
                }
                mats.push(mat);
            }
        }
        Ok(GlRep {
            m: self.m,
            n: self.n,
            even_dim,
            odd_dim: d - even_dim,
            mats,
        })
    }

    /// Smallest invariant subspace containing the seeds.
    pub fn submodule_closure(&self, seeds: &[Vec<Scalar>]) -> Result<RowSpan> {
        let d = self.dim();
        let mut span = RowSpan::new(d);
        let mut frontier: Vec<Vec<Scalar>> = Vec::new();
        for s in seeds {
            if s.len() != d {
                return Err(Error::BadDimensions);
            }
            frontier.push(s.clone());
        }
        while let Some(v) = frontier.pop() {
            if !span.insert(&v) {
                continue;
            }
            for mat in &self.mats {
                let w = mat.mul_vec(&v).expect("dimension verified");
                if !w.iter().all(Scalar::is_zero) && !span.contains(&w) {
                    frontier.push(w);
                }
            }
        }
        Ok(span)
    }

    /// Whether the span of the given rows is invariant under every unit.
    pub fn is_invariant(&self, span: &RowSpan) -> bool {
        span.basis().iter().all(|v| {
            self.mats
                .iter()
                .all(|mat| span.contains(&mat.mul_vec(v).expect("dimension verified")))
        })
    }

    /// Quotient by an invariant graded subspace, with the complement taken
    /// along coordinate directions.
    pub fn quotient_rep(&self, sub: &[Vec<Scalar>]) -> Result<GlRep> {
        let d = self.dim();
        let mut span = RowSpan::new(d);
        for v in sub {
            if v.len() != d {
                return Err(Error::BadDimensions);
            }
            span.insert(v);
        }
        if !self.is_invariant(&span) {
            return Err(Error::NotInvariant);
        }
        // Graded iff every reduced basis row is parity-homogeneous.
        for row in span.basis() {
            let mut parities = (0..d)
                .filter(|&i| !row[i].is_zero())
                .map(|i| self.vector_parity(i));
            if let Some(first) = parities.next() {
                if parities.any(|p| p != first) {
                    return Err(Error::NotGraded);
                }
            }
        }
        let free: Vec<usize> = (0..d).filter(|c| !span.pivots().contains(c)).collect();
        let qd = free.len();
        let even_dim = free.iter().filter(|&&c| c < self.even_dim).count();
        let mut mats = Vec::with_capacity(self.mats.len());
        for mat in &self.mats {
            let mut q = QMatrix::zeros(qd, qd);
            for (col, &c) in free.iter().enumerate() {
                let mut unit = vec![Scalar::zero(); d];
                unit[c] = crate::scalar::qi(1);
                let img = span.reduce(&mat.mul_vec(&unit).expect("dimension verified"));
                for (row, &r) in free.iter().enumerate() {
                    if !img[r].is_zero() {
                        q.set(row, col, img[r].clone());
                    }
                }
            }
            mats.push(q);
        }
        Ok(GlRep { m: self.m, n: self.n, even_dim, odd_dim: qd - even_dim, mats })
    }

    /// Evidence of simplicity: true when every supplied nonzero vector
    /// generates the whole space.
    pub fn likely_simple(&self, trials: &[Vec<Scalar>]) -> Result<bool> {
        for v in trials {
            if v.iter().all(Scalar::is_zero) {
                continue;
            }
            if self.submodule_closure(core::slice::from_ref(v))?.dim() < self.dim() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
