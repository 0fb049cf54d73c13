//! The supercommutative coefficient algebra: Laurent polynomials in the even
//! variables tensored with a Grassmann algebra in the odd variables.
//!
//! Odd monomials are kept in the canonical ascending order `x1 < x2 < ...`;
//! every product or derivation threads the resulting sign through the bit
//! mask representation.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{qi, signed, Scalar};

/// Upper bound on the number of odd variables, so subsets fit in a `u32`.
pub const MAX_ODD: usize = 16;

/// Parity of a homogeneous element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_mask(xi: u32) -> Parity {
        if xi.count_ones() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Parity of a product of two homogeneous factors.
    pub fn xor(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Koszul sign `(-1)^{p q}`: true means negative.
    pub fn koszul(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

/// Shape of the coefficient algebra: `m` even variables `t1..tm` (plus `t0`
/// in extended contexts) and `n` odd variables `x1..xn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    m: usize,
    n: usize,
    extended: bool,
}

impl Context {
    /// Variables `t1..tm`, `x1..xn`.
    pub fn new(m: usize, n: usize) -> Context {
        assert!(n <= MAX_ODD, "too many odd variables");
        Context { m, n, extended: false }
    }

    /// Variables `t0..tm`, `x1..xn`.
    pub fn extended(m: usize, n: usize) -> Context {
        assert!(n <= MAX_ODD, "too many odd variables");
        Context { m, n, extended: true }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    /// Number of even variables (length of every exponent vector).
    pub fn even_count(&self) -> usize {
        self.m + usize::from(self.extended)
    }

    /// Smallest even variable label: 0 in extended contexts, 1 otherwise.
    pub fn first_label(&self) -> usize {
        usize::from(!self.extended)
    }

    /// Labels of the even variables in order.
    pub fn labels(&self) -> impl Iterator<Item = usize> {
        self.first_label()..=self.m
    }

    /// Position of the even variable with the given label inside exponent
    /// vectors.
    pub fn pos(&self, label: usize) -> Result<usize> {
        if label < self.first_label() || label > self.m {
            return Err(Error::BadIndex { index: label });
        }
        Ok(label - self.first_label())
    }

    /// Validates a 1-based odd variable index.
    pub fn check_odd(&self, alpha: usize) -> Result<()> {
        if alpha == 0 || alpha > self.n {
            return Err(Error::BadIndex { index: alpha });
        }
        Ok(())
    }

    pub fn full_mask(&self) -> u32 {
        if self.n == 0 {
            0
        } else {
            (1u32 << self.n) - 1
        }
    }

    /// All Grassmann basis masks, ascending.
    pub fn xi_masks(&self) -> impl Iterator<Item = u32> {
        0..=self.full_mask()
    }
}

/// Product of two ascending Grassmann monomials given as bit masks.
/// Returns the merged mask and whether the reordering sign is negative;
/// `None` when a variable repeats.
pub fn grass_mul(a: u32, b: u32) -> Option<(u32, bool)> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some((a | b, inversions % 2 == 1))
}

/// Left derivation by the odd variable with 1-based index `alpha` on a
/// Grassmann monomial.  `None` when the variable is absent.
pub fn grass_left_deriv(p: u32, alpha: usize) -> Option<(u32, bool)> {
    let bit = 1u32 << (alpha - 1);
    if p & bit == 0 {
        return None;
    }
    let below = (p & (bit - 1)).count_ones();
    Some((p & !bit, below % 2 == 1))
}

/// Right derivation by the odd variable with 1-based index `alpha`.
pub fn grass_right_deriv(p: u32, alpha: usize) -> Option<(u32, bool)> {
    let bit = 1u32 << (alpha - 1);
    if p & bit == 0 {
        return None;
    }
    let above = (p >> alpha).count_ones();
    Some((p & !bit, above % 2 == 1))
}

/// A basis monomial `t^r x^p`: Laurent exponents plus a Grassmann subset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub t: Vec<i64>,
    pub xi: u32,
}

impl Monomial {
    pub fn one(ctx: Context) -> Monomial {
        Monomial { t: vec![0; ctx.even_count()], xi: 0 }
    }

    pub fn parity(&self) -> Parity {
        Parity::from_mask(self.xi)
    }

    pub fn validate(&self, ctx: Context) -> Result<()> {
        if self.t.len() != ctx.even_count() {
            return Err(Error::ContextMismatch);
        }
        if self.xi & !ctx.full_mask() != 0 {
            return Err(Error::BadIndex { index: self.xi as usize });
        }
        Ok(())
    }
}

/// A finite linear combination of monomials with rational coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperPoly {
    ctx: Context,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SuperPoly {
    pub fn zero(ctx: Context) -> SuperPoly {
        SuperPoly { ctx, terms: BTreeMap::new() }
    }

    pub fn one(ctx: Context) -> SuperPoly {
        Self::monomial(ctx, Monomial::one(ctx), Scalar::one()).expect("unit monomial")
    }

    pub fn monomial(ctx: Context, mono: Monomial, coef: Scalar) -> Result<SuperPoly> {
        mono.validate(ctx)?;
        let mut p = SuperPoly::zero(ctx);
        p.add_term(mono, coef);
        Ok(p)
    }

    /// The single even variable `t_label`.
    pub fn var_t(ctx: Context, label: usize) -> Result<SuperPoly> {
        let pos = ctx.pos(label)?;
        let mut mono = Monomial::one(ctx);
        mono.t[pos] = 1;
        Self::monomial(ctx, mono, Scalar::one())
    }

    /// The single odd variable `x_alpha`.
    pub fn var_xi(ctx: Context, alpha: usize) -> Result<SuperPoly> {
        ctx.check_odd(alpha)?;
        let mono = Monomial { t: vec![0; ctx.even_count()], xi: 1 << (alpha - 1) };
        Self::monomial(ctx, mono, Scalar::one())
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: &Monomial) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Adds `coef * mono`, dropping the entry when the sum cancels.
    pub fn add_term(&mut self, mono: Monomial, coef: Scalar) {
        if coef.is_zero() {
            return;
        }
        debug_assert!(mono.validate(self.ctx).is_ok());
        let entry = self.terms.entry(mono);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coef;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Parity when every monomial agrees; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Some(Parity::Even),
            Some(m) => m.parity(),
        };
        for m in it {
            if m.parity() != first {
                return None;
            }
        }
        Some(first)
    }

    pub fn try_add(&self, rhs: &SuperPoly) -> Result<SuperPoly> {
        if self.ctx != rhs.ctx {
            return Err(Error::ContextMismatch);
        }
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &SuperPoly) -> Result<SuperPoly> {
        self.try_add(&rhs.clone().neg())
    }

    pub fn scale(&self, c: &Scalar) -> SuperPoly {
        if c.is_zero() {
            return SuperPoly::zero(self.ctx);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    /// Supercommutative product.
    pub fn try_mul(&self, rhs: &SuperPoly) -> Result<SuperPoly> {
        if self.ctx != rhs.ctx {
            return Err(Error::ContextMismatch);
        }
        let mut out = SuperPoly::zero(self.ctx);
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                if let Some((xi, neg)) = grass_mul(ma.xi, mb.xi) {
                    let t: Vec<i64> =
                        ma.t.iter().zip(mb.t.iter()).map(|(a, b)| a + b).collect();
                    out.add_term(Monomial { t, xi }, signed(ca * cb, neg));
                }
            }
        }
        Ok(out)
    }

    /// Left odd derivation `d/dx_alpha` acting from the left.
    pub fn left_deriv(&self, alpha: usize) -> Result<SuperPoly> {
        self.ctx.check_odd(alpha)?;
        let mut out = SuperPoly::zero(self.ctx);
        for (m, c) in self.terms() {
            if let Some((xi, neg)) = grass_left_deriv(m.xi, alpha) {
                out.add_term(Monomial { t: m.t.clone(), xi }, signed(c.clone(), neg));
            }
        }
        Ok(out)
    }

    /// Right odd derivation `(f) d/dx_alpha` acting from the right.
    /// For homogeneous `f` it equals `(-1)^(p(f)+1)` times the left one.
    pub fn right_deriv(&self, alpha: usize) -> Result<SuperPoly> {
        self.ctx.check_odd(alpha)?;
        let mut out = SuperPoly::zero(self.ctx);
        for (m, c) in self.terms() {
            if let Some((xi, neg)) = grass_right_deriv(m.xi, alpha) {
                out.add_term(Monomial { t: m.t.clone(), xi }, signed(c.clone(), neg));
            }
        }
        Ok(out)
    }

    /// Euler derivation `d_label = t_label d/dt_label`; multiplies each
    /// monomial by its exponent of `t_label`.
    pub fn even_deriv(&self, label: usize) -> Result<SuperPoly> {
        let pos = self.ctx.pos(label)?;
        let mut out = SuperPoly::zero(self.ctx);
        for (m, c) in self.terms() {
            out.add_term(m.clone(), c * qi(m.t[pos]));
        }
        Ok(out)
    }

    /// Substitutes `t^r -> t^(theta r)` monomial-wise.  Odd variables are
    /// fixed pointwise.  The exponent map must be a bijection of the even
    /// lattice for this to be an algebra automorphism; callers pass a
    /// unimodular matrix.
    pub fn map_exponents(&self, map: impl Fn(&[i64]) -> Vec<i64>) -> SuperPoly {
        let mut out = SuperPoly::zero(self.ctx);
        for (m, c) in self.terms() {
            let t = map(&m.t);
            debug_assert_eq!(t.len(), m.t.len());
            out.add_term(Monomial { t, xi: m.xi }, c.clone());
        }
        out
    }
}

impl Neg for SuperPoly {
    type Output = SuperPoly;
    fn neg(mut self) -> SuperPoly {
        for v in self.terms.values_mut() {
            *v = -v.clone();
        }
        self
    }
}

impl Add for &SuperPoly {
    type Output = SuperPoly;
    fn add(self, rhs: &SuperPoly) -> SuperPoly {
        self.try_add(rhs).expect("context mismatch in +")
    }
}

impl Sub for &SuperPoly {
    type Output = SuperPoly;
    fn sub(self, rhs: &SuperPoly) -> SuperPoly {
        self.try_sub(rhs).expect("context mismatch in -")
    }
}

/// Formats one monomial factor list (no coefficient), or `None` for the
/// empty monomial.
pub(crate) fn fmt_factors(ctx: Context, m: &Monomial) -> Option<String> {
    let mut parts: Vec<String> = Vec::new();
    for (pos, e) in m.t.iter().enumerate() {
        if *e == 0 {
            continue;
        }
        let label = ctx.first_label() + pos;
        if *e == 1 {
            parts.push(alloc::format!("t{label}"));
        } else {
            parts.push(alloc::format!("t{label}^{e}"));
        }
    }
    for a in 1..=ctx.n() {
        if m.xi & (1 << (a - 1)) != 0 {
            parts.push(alloc::format!("x{a}"));
        }
    }
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("*"))
    }
}

/// Writes `coef * factors` with the sign pulled out; shared by the polynomial
/// and vector-field printers.
pub(crate) fn fmt_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    coef: &Scalar,
    factors: Option<String>,
) -> fmt::Result {
    let neg = coef.is_negative();
    let mag = if neg { -coef.clone() } else { coef.clone() };
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    match factors {
        None => write!(f, "{mag}"),
        Some(fs) => {
            if mag.is_one() {
                write!(f, "{fs}")
            } else {
                write!(f, "{mag}*{fs}")
            }
        }
    }
}

impl fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            fmt_term(f, first, c, fmt_factors(self.ctx, m))?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Best-effort display without a context: assumes labels start at 1.
        let ctx = Context::new(self.t.len(), MAX_ODD);
        match fmt_factors(ctx, self) {
            Some(s) => write!(f, "{s}"),
            None => write!(f, "1"),
        }
    }
}
