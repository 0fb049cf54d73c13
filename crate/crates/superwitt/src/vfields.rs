//! Superderivations of the coefficient algebra: linear combinations of
//! `t^r x^p D_i` (Euler fields) and `t^r x^p P_a` (odd derivations), with the
//! supercommutator bracket, weight bookkeeping, and twists by unimodular
//! changes of the even lattice.
//!
//! Three algebras share this representation:
//!
//! * `Plain`: fields on `m` even and `n` odd variables.
//! * `SemiDirect`: the same fields extended by an abelian part `f D0` whose
//!   generator kills every coefficient; brackets with it follow the
//!   semidirect rule `[X, f D0] = X(f) D0`.
//! * `Extended`: fields on `m + 1` even variables, where `D0` is an honest
//!   Euler field for `t0`.  The first two embed into this one.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::scalar::{qi, Scalar};
use crate::superalg::{fmt_term, Context, Monomial, Parity, SuperPoly};

/// Which of the three vector-field algebras an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgebraKind {
    /// Fields on `t1..tm, x1..xn`.
    Plain { m: usize, n: usize },
    /// `Plain` extended by the abelian ideal of `D0`-terms with the same
    /// coefficients; `D0` acts as zero on coefficients.
    SemiDirect { m: usize, n: usize },
    /// Fields on `t0..tm, x1..xn`.
    Extended { m: usize, n: usize },
}

impl AlgebraKind {
    /// Coefficient algebra the fields act on.
    pub fn context(&self) -> Context {
        match *self {
            AlgebraKind::Plain { m, n } | AlgebraKind::SemiDirect { m, n } => Context::new(m, n),
            AlgebraKind::Extended { m, n } => Context::extended(m, n),
        }
    }

    pub fn m(&self) -> usize {
        match *self {
            AlgebraKind::Plain { m, .. }
            | AlgebraKind::SemiDirect { m, .. }
            | AlgebraKind::Extended { m, .. } => m,
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            AlgebraKind::Plain { n, .. }
            | AlgebraKind::SemiDirect { n, .. }
            | AlgebraKind::Extended { n, .. } => n,
        }
    }

    pub fn has_d0(&self) -> bool {
        !matches!(self, AlgebraKind::Plain { .. })
    }

    /// Labels of the even generators `D_i` available in this algebra.
    pub fn d_labels(&self) -> impl Iterator<Item = usize> {
        let start = usize::from(!self.has_d0());
        start..=self.m()
    }

    /// Whether the generator label is the formal `D0` that kills
    /// coefficients (only in the semidirect algebra).
    fn d0_is_formal(&self, label: usize) -> bool {
        matches!(self, AlgebraKind::SemiDirect { .. }) && label == 0
    }
}

/// A single derivation symbol: `D(i)` for `t_i d/dt_i`, `P(a)` for `d/dx_a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    D(usize),
    P(usize),
}

impl Generator {
    pub fn parity(&self) -> Parity {
        match self {
            Generator::D(_) => Parity::Even,
            Generator::P(_) => Parity::Odd,
        }
    }

    fn validate(&self, kind: AlgebraKind) -> Result<()> {
        match *self {
            Generator::D(i) => {
                let lo = usize::from(!kind.has_d0());
                if i < lo || i > kind.m() {
                    return Err(Error::BadIndex { index: i });
                }
            }
            Generator::P(a) => kind.context().check_odd(a)?,
        }
        Ok(())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::D(i) => write!(f, "D{i}"),
            Generator::P(a) => write!(f, "P{a}"),
        }
    }
}

/// A vector field: finite sum of `coef * monomial * generator` terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    kind: AlgebraKind,
    terms: BTreeMap<(Monomial, Generator), Scalar>,
}

impl VectorField {
    pub fn zero(kind: AlgebraKind) -> VectorField {
        VectorField { kind, terms: BTreeMap::new() }
    }

    /// `poly * gen` as a field.
    pub fn from_poly(kind: AlgebraKind, poly: &SuperPoly, gen: Generator) -> Result<VectorField> {
        if poly.ctx() != kind.context() {
            return Err(Error::ContextMismatch);
        }
        gen.validate(kind)?;
        let mut out = VectorField::zero(kind);
        for (m, c) in poly.terms() {
            out.add_term(m.clone(), gen, c.clone());
        }
        Ok(out)
    }

    /// The bare generator with unit coefficient.
    pub fn generator(kind: AlgebraKind, gen: Generator) -> Result<VectorField> {
        Self::from_poly(kind, &SuperPoly::one(kind.context()), gen)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Generator), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial, gen: Generator) -> Scalar {
        self.terms.get(&(mono.clone(), gen)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, mono: Monomial, gen: Generator, coef: Scalar) {
        if coef.is_zero() {
            return;
        }
        debug_assert!(mono.validate(self.kind.context()).is_ok());
        debug_assert!(gen.validate(self.kind).is_ok());
        let key = (mono, gen);
        let cur = self.terms.remove(&key).unwrap_or_else(Scalar::zero);
        let sum = cur + coef;
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn scale(&self, c: &Scalar) -> VectorField {
        if c.is_zero() {
            return VectorField::zero(self.kind);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn try_add(&self, rhs: &VectorField) -> Result<VectorField> {
        if self.kind != rhs.kind {
            return Err(Error::KindMismatch);
        }
        let mut out = self.clone();
        for ((m, g), c) in rhs.terms() {
            out.add_term(m.clone(), *g, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &VectorField) -> Result<VectorField> {
        self.try_add(&rhs.clone().neg())
    }

    /// Multiplies by a coefficient polynomial on the left.
    pub fn mul_poly(&self, f: &SuperPoly) -> Result<VectorField> {
        if f.ctx() != self.kind.context() {
            return Err(Error::ContextMismatch);
        }
        let mut out = VectorField::zero(self.kind);
        for ((m, g), c) in self.terms() {
            let part = f
                .try_mul(&SuperPoly::monomial(f.ctx(), m.clone(), c.clone())?)?;
            for (pm, pc) in part.terms() {
                out.add_term(pm.clone(), *g, pc.clone());
            }
        }
        Ok(out)
    }

    /// Parity when all terms agree; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Some(Parity::Even),
            Some((m, g)) => m.parity().xor(g.parity()),
        };
        for (m, g) in it {
            if m.parity().xor(g.parity()) != first {
                return None;
            }
        }
        Some(first)
    }

    /// Common eigenvalue vector under the commuting Euler fields, read off
    /// the exponents.  Errors on zero or mixed-weight fields.
    pub fn h_weight(&self) -> Result<Vec<i64>> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Err(Error::ZeroElement),
            Some((m, _)) => m.t.clone(),
        };
        for (m, _) in it {
            if m.t != first {
                return Err(Error::MixedWeight);
            }
        }
        Ok(first)
    }

    /// Applies the derivation represented by one generator to a polynomial.
    fn gen_apply(&self, gen: Generator, h: &SuperPoly) -> Result<SuperPoly> {
        match gen {
            Generator::D(i) => {
                if self.kind.d0_is_formal(i) {
                    Ok(SuperPoly::zero(h.ctx()))
                } else {
                    h.even_deriv(i)
                }
            }
            Generator::P(a) => h.left_deriv(a),
        }
    }

    /// Applies the field to a coefficient polynomial.
    pub fn apply(&self, h: &SuperPoly) -> Result<SuperPoly> {
        if h.ctx() != self.kind.context() {
            return Err(Error::ContextMismatch);
        }
        let mut out = SuperPoly::zero(h.ctx());
        for ((m, g), c) in self.terms() {
            let dh = self.gen_apply(*g, h)?;
            if dh.is_zero() {
                continue;
            }
            let f = SuperPoly::monomial(h.ctx(), m.clone(), c.clone())?;
            out = out.try_add(&f.try_mul(&dh)?)?;
        }
        Ok(out)
    }

    /// Supercommutator.  For terms `f A` and `g B` with generator symbols
    /// that commute among themselves, the composite contributions cancel and
    /// the bracket reduces to
    /// `f A(g) B  -  (-1)^{p(fA) p(gB)} g B(f) A`.
    pub fn try_bracket(&self, rhs: &VectorField) -> Result<VectorField> {
        if self.kind != rhs.kind {
            return Err(Error::KindMismatch);
        }
        let ctx = self.kind.context();
        let mut out = VectorField::zero(self.kind);
        for ((ma, ga), ca) in self.terms() {
            let pa = ma.parity().xor(ga.parity());
            let fa = SuperPoly::monomial(ctx, ma.clone(), ca.clone())?;
            for ((mb, gb), cb) in rhs.terms() {
                let pb = mb.parity().xor(gb.parity());
                let fb = SuperPoly::monomial(ctx, mb.clone(), cb.clone())?;
                let da_fb = self.gen_apply(*ga, &fb)?;
                for (m, c) in fa.try_mul(&da_fb)?.terms() {
                    out.add_term(m.clone(), *gb, c.clone());
                }
                let db_fa = rhs.gen_apply(*gb, &fa)?;
                let koszul = pa.koszul(pb);
                for (m, c) in fb.try_mul(&db_fa)?.terms() {
                    let c = if koszul { c.clone() } else { -c.clone() };
                    out.add_term(m.clone(), *ga, c);
                }
            }
        }
        Ok(out)
    }

    pub fn bracket(&self, rhs: &VectorField) -> VectorField {
        self.try_bracket(rhs).expect("kind mismatch in bracket")
    }

    /// Re-interprets the field in a larger algebra of the chain
    /// `Plain -> SemiDirect -> Extended`.  Exponent vectors gain a zero
    /// `t0`-slot when entering the extended algebra.
    pub fn include_into(&self, target: AlgebraKind) -> Result<VectorField> {
        use AlgebraKind::*;
        let ok = match (self.kind, target) {
            (a, b) if a == b => true,
            (Plain { m, n }, SemiDirect { m: m2, n: n2 })
            | (Plain { m, n }, Extended { m: m2, n: n2 })
            | (SemiDirect { m, n }, Extended { m: m2, n: n2 }) => m == m2 && n == n2,
            _ => false,
        };
        if !ok {
            return Err(Error::KindMismatch);
        }
        let grow = target.context().even_count() - self.kind.context().even_count();
        let mut out = VectorField::zero(target);
        for ((m, g), c) in self.terms() {
            let mut t = vec![0i64; grow];
            t.extend_from_slice(&m.t);
            out.add_term(Monomial { t, xi: m.xi }, *g, c.clone());
        }
        Ok(out)
    }
}

impl Neg for VectorField {
    type Output = VectorField;
    fn neg(mut self) -> VectorField {
        for v in self.terms.values_mut() {
            *v = -v.clone();
        }
        self
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        self.try_add(rhs).expect("kind mismatch in +")
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        self.try_sub(rhs).expect("kind mismatch in -")
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ctx = self.kind.context();
        let mut first = true;
        for ((m, g), c) in self.terms() {
            let factors = match crate::superalg::fmt_factors(ctx, m) {
                None => alloc::format!("{g}"),
                Some(s) => alloc::format!("{s}*{g}"),
            };
            fmt_term(f, first, c, Some(factors))?;
            first = false;
        }
        Ok(())
    }
}

/// A square integer matrix validated to be invertible over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    size: usize,
    rows: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<IntMatrix> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::BadDimensions);
        }
        let m = IntMatrix { size, rows };
        let d = m.det_bigint();
        if !(d.clone().abs()).is_one() {
            return Err(Error::NotUnimodular);
        }
        Ok(m)
    }

    pub fn identity(size: usize) -> IntMatrix {
        let rows = (0..size)
            .map(|i| (0..size).map(|j| i64::from(i == j)).collect())
            .collect();
        IntMatrix { size, rows }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    fn to_qmatrix(&self) -> QMatrix {
        let mut q = QMatrix::zeros(self.size, self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                q.set(i, j, qi(self.rows[i][j]));
            }
        }
        q
    }

    fn det_bigint(&self) -> BigInt {
        let d = self.to_qmatrix().det();
        debug_assert!(d.is_integer());
        d.to_integer()
    }

    pub fn det(&self) -> i64 {
        self.det_bigint().to_i64().expect("unimodular determinant fits i64")
    }

    /// Exact inverse; integral because the determinant is a unit.
    pub fn inverse(&self) -> IntMatrix {
        let inv = self.to_qmatrix().inverse().expect("unimodular matrix is invertible");
        let rows = (0..self.size)
            .map(|i| {
                (0..self.size)
                    .map(|j| {
                        let v = inv.at(i, j);
                        debug_assert!(v.is_integer());
                        v.to_integer().to_i64().expect("inverse entry fits i64")
                    })
                    .collect()
            })
            .collect();
        IntMatrix { size: self.size, rows }
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.size != rhs.size {
            return Err(Error::BadDimensions);
        }
        let rows = (0..self.size)
            .map(|i| {
                (0..self.size)
                    .map(|j| (0..self.size).map(|k| self.rows[i][k] * rhs.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        Ok(IntMatrix { size: self.size, rows })
    }

    /// Matrix times integer vector.
    pub fn apply_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.size, "vector length mismatch");
        (0..self.size)
            .map(|i| (0..self.size).map(|k| self.rows[i][k] * v[k]).sum())
            .collect()
    }

    /// Matrix times rational vector.
    pub fn apply_scalar_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.size, "vector length mismatch");
        (0..self.size)
            .map(|i| {
                let mut acc = Scalar::zero();
                for k in 0..self.size {
                    if self.rows[i][k] != 0 {
                        acc += qi(self.rows[i][k]) * &v[k];
                    }
                }
                acc
            })
            .collect()
    }
}

/// Exponent substitution `t^r -> t^(theta r)` on a polynomial; odd variables
/// are fixed pointwise.
pub fn twist_poly(theta: &IntMatrix, p: &SuperPoly) -> Result<SuperPoly> {
    if theta.size() != p.ctx().even_count() {
        return Err(Error::BadDimensions);
    }
    Ok(p.map_exponents(|r| theta.apply_vec(r)))
}

/// The automorphism induced on fields by `twist_poly`: conjugation.  Euler
/// generators mix by the inverse matrix, odd generators are fixed:
/// `t^r x^p D_j -> sum_i inv(theta)[j][i] t^(theta r) x^p D_i`.
pub fn twist_field(theta: &IntMatrix, x: &VectorField) -> Result<VectorField> {
    let kind = x.kind();
    if theta.size() != kind.context().even_count() {
        return Err(Error::BadDimensions);
    }
    let inv = theta.inverse();
    let first = kind.context().first_label();
    let mut out = VectorField::zero(kind);
    for ((m, g), c) in x.terms() {
        let t = theta.apply_vec(&m.t);
        let mono = Monomial { t, xi: m.xi };
        match *g {
            Generator::P(a) => out.add_term(mono, Generator::P(a), c.clone()),
            Generator::D(j) if kind.d0_is_formal(j) => {
                out.add_term(mono, Generator::D(0), c.clone());
            }
            Generator::D(j) => {
                let jp = j - first;
                for i in kind.d_labels().filter(|&i| !kind.d0_is_formal(i)) {
                    let e = inv.entry(jp, i - first);
                    if e != 0 {
                        out.add_term(mono.clone(), Generator::D(i), c * qi(e));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// How weight supports move under the twist: the twisted module, where a
/// field acts through its conjugate, has support `inv(theta) * old support`.
pub fn support_transform(
    theta: &IntMatrix,
    support: &BTreeSet<Vec<Scalar>>,
) -> Result<BTreeSet<Vec<Scalar>>> {
    let inv = theta.inverse();
    let mut out = BTreeSet::new();
    for w in support {
        if w.len() != theta.size() {
            return Err(Error::BadDimensions);
        }
        out.insert(inv.apply_scalar_vec(w));
    }
    Ok(out)
}

/// Canonical representative of a weight modulo the integer lattice: every
/// component shifted into `[0, 1)`.
pub fn normalize_coset(w: &[Scalar]) -> Vec<Scalar> {
    w.iter().map(|c| c - c.floor()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn w11() -> AlgebraKind {
        AlgebraKind::Plain { m: 1, n: 1 }
    }

    fn mono(kind: AlgebraKind, t: &[i64], xi: u32) -> Monomial {
        let _ = kind;
        Monomial { t: t.to_vec(), xi }
    }

    fn field(kind: AlgebraKind, t: &[i64], xi: u32, g: Generator) -> VectorField {
        let mut f = VectorField::zero(kind);
        f.add_term(mono(kind, t, xi), g, qi(1));
        f
    }

    #[test]
    fn euler_fields_commute_and_weight() {
        let kind = AlgebraKind::Plain { m: 2, n: 0 };
        let d1 = VectorField::generator(kind, Generator::D(1)).unwrap();
        let d2 = VectorField::generator(kind, Generator::D(2)).unwrap();
        assert!(d1.bracket(&d2).is_zero());
        let x = field(kind, &[3, -2], 0, Generator::D(1));
        assert_eq!(d1.bracket(&x), x.scale(&qi(3)));
        assert_eq!(x.h_weight().unwrap(), vec![3, -2]);
        assert_eq!(
            VectorField::zero(kind).h_weight().unwrap_err(),
            Error::ZeroElement
        );
    }

    #[test]
    fn odd_bracket_is_anticommutator() {
        // x1 P1 is even (odd coefficient, odd generator): self-bracket 0.
        let kind = w11();
        let e = field(kind, &[0], 1, Generator::P(1));
        assert_eq!(e.parity(), Some(Parity::Even));
        assert!(e.bracket(&e).is_zero());
        // X = x1 D1 + t1 P1 is odd and [X, X] = 2 t1 x1 P1 + 2 t1 D1.
        let x = &field(kind, &[0], 1, Generator::D(1)) + &field(kind, &[1], 0, Generator::P(1));
        assert_eq!(x.parity(), Some(Parity::Odd));
        let want = &field(kind, &[1], 1, Generator::P(1)).scale(&qi(2))
            + &field(kind, &[1], 0, Generator::D(1)).scale(&qi(2));
        assert_eq!(x.bracket(&x), want);
    }

    #[test]
    fn apply_matches_derivation_product() {
        // (t1 x1 P1)(x1 t1^2) = t1 x1 t1^2 = t1^3 x1.
        let kind = w11();
        let ctx = kind.context();
        let x = field(kind, &[1], 1, Generator::P(1));
        let h = SuperPoly::monomial(ctx, mono(kind, &[2], 1), qi(1)).unwrap();
        let got = x.apply(&h).unwrap();
        let want = SuperPoly::monomial(ctx, mono(kind, &[3], 1), qi(1)).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn semidirect_d0_is_central_in_the_ideal() {
        let kind = AlgebraKind::SemiDirect { m: 1, n: 1 };
        let a = field(kind, &[2], 0, Generator::D(0));
        let b = field(kind, &[-1], 1, Generator::D(0));
        assert!(a.bracket(&b).is_zero());
        // [t1 D1, f D0] = t1 D1(f) D0.
        let x = field(kind, &[1], 0, Generator::D(1));
        let got = x.bracket(&b);
        let want = field(kind, &[0], 1, Generator::D(0)).scale(&qi(-1));
        assert_eq!(got, want);
    }

    #[test]
    fn extended_d0_differentiates_t0() {
        let kind = AlgebraKind::Extended { m: 1, n: 0 };
        let ctx = kind.context();
        let d0 = VectorField::generator(kind, Generator::D(0)).unwrap();
        let t0 = SuperPoly::var_t(ctx, 0).unwrap();
        assert_eq!(d0.apply(&t0).unwrap(), t0);
        // [t0^2 D0, t0^-1 D0] = t0^2 (-1) t0^-1 D0 - t0^-1 (2) t0^2 D0 = -3 t0 D0.
        let a = field(kind, &[2, 0], 0, Generator::D(0));
        let b = field(kind, &[-1, 0], 0, Generator::D(0));
        let want = field(kind, &[1, 0], 0, Generator::D(0)).scale(&qi(-3));
        assert_eq!(a.bracket(&b), want);
    }

    #[test]
    fn inclusion_chain_preserves_brackets() {
        let kind = w11();
        let big = AlgebraKind::Extended { m: 1, n: 1 };
        let a = field(kind, &[2], 1, Generator::P(1));
        let b = field(kind, &[-1], 0, Generator::D(1));
        let inc = |v: &VectorField| v.include_into(big).unwrap();
        assert_eq!(inc(&a.bracket(&b)), inc(&a).bracket(&inc(&b)));
    }

    #[test]
    fn bracket_against_application_on_samples() {
        // [X, Y](h) = X(Y(h)) - (-1)^{p(X)p(Y)} Y(X(h)).
        let kind = AlgebraKind::Plain { m: 1, n: 2 };
        let ctx = kind.context();
        let xs = [
            field(kind, &[1], 0b01, Generator::P(2)),
            field(kind, &[-1], 0b10, Generator::D(1)),
            field(kind, &[2], 0b11, Generator::P(1)),
            field(kind, &[0], 0, Generator::D(1)),
        ];
        let hs = [
            SuperPoly::monomial(ctx, Monomial { t: vec![1], xi: 0b10 }, q(1, 3)).unwrap(),
            SuperPoly::monomial(ctx, Monomial { t: vec![-2], xi: 0b01 }, qi(2)).unwrap(),
            SuperPoly::monomial(ctx, Monomial { t: vec![3], xi: 0b11 }, qi(1)).unwrap(),
        ];
        for x in &xs {
            for y in &xs {
                let px = x.parity().unwrap();
                let py = y.parity().unwrap();
                for h in &hs {
                    let lhs = x.bracket(y).apply(h).unwrap();
                    let xy = x.apply(&y.apply(h).unwrap()).unwrap();
                    let yx = y.apply(&x.apply(h).unwrap()).unwrap();
                    let rhs = if px.koszul(py) { &xy + &yx } else { &xy - &yx };
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn unimodular_validation() {
        assert!(IntMatrix::new(vec![vec![1, 1], vec![0, 1]]).is_ok());
        assert_eq!(
            IntMatrix::new(vec![vec![2, 0], vec![0, 1]]).unwrap_err(),
            Error::NotUnimodular
        );
        assert_eq!(
            IntMatrix::new(vec![vec![1, 0]]).unwrap_err(),
            Error::BadDimensions
        );
        let m = IntMatrix::new(vec![vec![2, 3], vec![1, 2]]).unwrap();
        assert_eq!(m.det(), 1);
        assert_eq!(m.mul(&m.inverse()).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn twist_is_an_algebra_map() {
        // theta(X)(theta(f)) = theta(X(f)) and theta respects brackets.
        let kind = AlgebraKind::Plain { m: 2, n: 1 };
        let ctx = kind.context();
        let theta = IntMatrix::new(vec![vec![1, 2], vec![1, 1]]).unwrap();
        let x = field(kind, &[1, -1], 1, Generator::P(1));
        let y = field(kind, &[0, 2], 0, Generator::D(2));
        let f = SuperPoly::monomial(ctx, Monomial { t: vec![2, 1], xi: 1 }, q(5, 3)).unwrap();
        let tx = twist_field(&theta, &x).unwrap();
        let ty = twist_field(&theta, &y).unwrap();
        let tf = twist_poly(&theta, &f).unwrap();
        assert_eq!(tx.apply(&tf).unwrap(), twist_poly(&theta, &x.apply(&f).unwrap()).unwrap());
        assert_eq!(
            tx.bracket(&ty),
            twist_field(&theta, &x.bracket(&y)).unwrap()
        );
    }

    #[test]
    fn coset_normalization() {
        let w = vec![q(5, 2), qi(-3), q(-1, 3)];
        assert_eq!(normalize_coset(&w), vec![q(1, 2), qi(0), q(2, 3)]);
    }
}
