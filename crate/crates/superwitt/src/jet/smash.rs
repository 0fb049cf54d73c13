//! Degree-zero part of the smash product: Laurent coefficients against
//! vector-field generators, with the shift vector kept as a formal label.
//!
//! A basis term is `prefix * Tag(f, r)` where `prefix` and `f` are Grassmann
//! monomials and `r` is an integer shift vector. `D(i)` rows pair a
//! coefficient with the Euler field of direction `i`, `P(a)` rows with the
//! odd derivation, and `D0` rows with the adjoined scalar generator.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::jet::{mask_parity, mask_string, JetTag};
use crate::scalar::{qi, Scalar};
use crate::superalg::{grass_left_deriv, grass_mul, Parity};
use crate::{Error, Result};

/// Basis label: `prefix * tag(f, r)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SmashKey {
    pub tag: JetTag,
    pub f: u32,
    pub r: Vec<i64>,
    pub prefix: u32,
}

impl SmashKey {
    pub fn new(tag: JetTag, f: u32, r: Vec<i64>, prefix: u32) -> Self {
        SmashKey { tag, f, r, prefix }
    }

    /// Parity of the basis element: prefix, argument, and row parities add.
    pub fn parity(&self) -> Parity {
        mask_parity(self.prefix)
            .xor(mask_parity(self.f))
            .xor(self.tag.parity())
    }

    fn validate(&self, m: usize, n: usize) -> Result<()> {
        self.tag.validate(m, n)?;
        if self.r.len() != m {
            return Err(Error::BadDimensions);
        }
        let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
        if self.f & !full != 0 || self.prefix & !full != 0 {
            return Err(Error::InvalidElement("Grassmann mask out of range".into()));
        }
        Ok(())
    }
}

/// Element of the degree-zero smash algebra over `m` even and `n` odd
/// directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmashElement {
    m: usize,
    n: usize,
    terms: BTreeMap<SmashKey, Scalar>,
}

impl SmashElement {
    pub fn zero(m: usize, n: usize) -> Self {
        SmashElement {
            m,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(m: usize, n: usize, key: SmashKey, c: Scalar) -> Result<Self> {
        let mut e = SmashElement::zero(m, n);
        key.validate(m, n)?;
        e.add_term(key, c);
        Ok(e)
    }

    /// Generator `tag(f, r)` with trivial prefix and coefficient one.
    pub fn generator(m: usize, n: usize, tag: JetTag, f: u32, r: Vec<i64>) -> Result<Self> {
        SmashElement::single(m, n, SmashKey::new(tag, f, r, 0), qi(1))
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SmashKey, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &SmashKey) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, key: SmashKey, c: Scalar) {
        debug_assert!(key.validate(self.m, self.n).is_ok());
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
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

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ContextMismatch);
        }
        let mut out = self.clone();
        for (k, v) in other.terms.iter() {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ContextMismatch);
        }
        let mut out = self.clone();
        for (k, v) in other.terms.iter() {
            out.add_term(k.clone(), -v.clone());
        }
        Ok(out)
    }

    /// Parity when homogeneous; `MixedParity` otherwise, `ZeroElement` on zero.
    pub fn parity(&self) -> Result<Parity> {
        let mut seen: Option<Parity> = None;
        for key in self.terms.keys() {
            let p = key.parity();
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return Err(Error::MixedParity),
                _ => {}
            }
        }
        seen.ok_or(Error::ZeroElement)
    }

    /// Multiplies every term by a Grassmann monomial from the left.
    pub fn mul_mask(&self, mask: u32) -> Self {
        let mut out = SmashElement::zero(self.m, self.n);
        for (key, c) in self.terms.iter() {
            if let Some((pm, neg)) = grass_mul(mask, key.prefix) {
                let mut k = key.clone();
                k.prefix = pm;
                out.add_term(k, if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }
}

/// Table entry produced by a pure-generator bracket: coefficient, inner
/// prefix, and the generator data of the output term.
pub(crate) struct GenTerm {
    pub c: Scalar,
    pub prefix: u32,
    pub tag: JetTag,
    pub f: u32,
    pub idx: Vec<i64>,
}

fn vec_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

/// `f * deriv_a(g)` as a signed Grassmann monomial.
fn arg_deriv(f: u32, a: usize, g: u32) -> Option<(u32, bool)> {
    let (dg, s1) = grass_left_deriv(g, a)?;
    let (fg, s2) = grass_mul(f, dg)?;
    Some((fg, s1 ^ s2))
}

/// Bracket of two pure smash generators `ta(fa, ra)` and `tb(fb, rb)`.
///
/// Rows not listed directly are obtained from super-antisymmetry.
fn gen_bracket(ta: JetTag, fa: u32, ra: &[i64], tb: JetTag, fb: u32, rb: &[i64]) -> Vec<GenTerm> {
    let pa = mask_parity(fa);
    let pb = mask_parity(fb);
    let mut out = Vec::new();
    match (ta, tb) {
        (JetTag::D(i), JetTag::D(j)) => {
            let si = qi(rb[i - 1]);
            let rj = qi(ra[j - 1]);
            let rs = vec_add(ra, rb);
            if let Some((fg, neg)) = grass_mul(fa, fb) {
                let prod = crate::scalar::signed(si.clone(), neg);
                out.push(GenTerm {
                    c: prod,
                    prefix: 0,
                    tag: JetTag::D(j),
                    f: fg,
                    idx: rs.clone(),
                });
                out.push(GenTerm {
                    c: crate::scalar::signed(-rj.clone(), neg),
                    prefix: 0,
                    tag: JetTag::D(i),
                    f: fg,
                    idx: rs,
                });
            }
            out.push(GenTerm {
                c: -si,
                prefix: fa,
                tag: JetTag::D(j),
                f: fb,
                idx: rb.to_vec(),
            });
            let koszul = pa.koszul(pb);
            out.push(GenTerm {
                c: crate::scalar::signed(rj, koszul),
                prefix: fb,
                tag: JetTag::D(i),
                f: fa,
                idx: ra.to_vec(),
            });
        }
        (JetTag::D(i), JetTag::P(a)) => {
            let si = qi(rb[i - 1]);
            let rs = vec_add(ra, rb);
            if let Some((fg, neg)) = grass_mul(fa, fb) {
                out.push(GenTerm {
                    c: crate::scalar::signed(si.clone(), neg),
                    prefix: 0,
                    tag: JetTag::P(a),
                    f: fg,
                    idx: rs.clone(),
                });
            }
            out.push(GenTerm {
                c: -si,
                prefix: fa,
                tag: JetTag::P(a),
                f: fb,
                idx: rb.to_vec(),
            });
            // deriv_a(fa) * fb
            if let Some((df, s1)) = grass_left_deriv(fa, a) {
                if let Some((w, s2)) = grass_mul(df, fb) {
                    let sign = pa.xor(pb).is_odd() ^ s1 ^ s2;
                    out.push(GenTerm {
                        c: crate::scalar::signed(-qi(1), sign),
                        prefix: 0,
                        tag: JetTag::D(i),
                        f: w,
                        idx: rs,
                    });
                }
            }
        }
        (JetTag::P(a), JetTag::P(b)) => {
            let rs = vec_add(ra, rb);
            if let Some((w, neg)) = arg_deriv(fa, a, fb) {
                out.push(GenTerm {
                    c: crate::scalar::signed(qi(1), neg),
                    prefix: 0,
                    tag: JetTag::P(b),
                    f: w,
                    idx: rs.clone(),
                });
            }
            if let Some((df, s1)) = grass_left_deriv(fa, b) {
                if let Some((w, s2)) = grass_mul(df, fb) {
                    let sign = !pa.is_odd() ^ s1 ^ s2;
                    out.push(GenTerm {
                        c: crate::scalar::signed(-qi(1), sign),
                        prefix: 0,
                        tag: JetTag::P(a),
                        f: w,
                        idx: rs,
                    });
                }
            }
        }
        (JetTag::D(i), JetTag::D0) => {
            let si = qi(rb[i - 1]);
            if let Some((fg, neg)) = grass_mul(fa, fb) {
                out.push(GenTerm {
                    c: crate::scalar::signed(si.clone(), neg),
                    prefix: 0,
                    tag: JetTag::D0,
                    f: fg,
                    idx: vec_add(ra, rb),
                });
            }
            out.push(GenTerm {
                c: -si,
                prefix: fa,
                tag: JetTag::D0,
                f: fb,
                idx: rb.to_vec(),
            });
        }
        (JetTag::P(a), JetTag::D0) => {
            if let Some((w, neg)) = arg_deriv(fa, a, fb) {
                out.push(GenTerm {
                    c: crate::scalar::signed(qi(1), neg),
                    prefix: 0,
                    tag: JetTag::D0,
                    f: w,
                    idx: vec_add(ra, rb),
                });
            }
        }
        (JetTag::D0, JetTag::D0) => {}
        // Remaining orders follow from super-antisymmetry.
        (x, y) => {
            let px = mask_parity(fa).xor(x.parity());
            let py = mask_parity(fb).xor(y.parity());
            let koszul = px.koszul(py);
            for mut t in gen_bracket(y, fb, rb, x, fa, ra) {
                t.c = crate::scalar::signed(-t.c, koszul);
                out.push(t);
            }
        }
    }
    out.retain(|t| !t.c.is_zero());
    out
}

/// Action of a pure generator on a Grassmann monomial: only odd rows with
/// argument `f` differentiate, sending `v` to `f * deriv_a(v)`.
fn gen_der(tag: JetTag, f: u32, v: u32) -> Option<(u32, bool)> {
    match tag {
        JetTag::P(a) => arg_deriv(f, a, v),
        _ => None,
    }
}

pub(crate) struct PrefixedGen<'a> {
    pub tag: JetTag,
    pub f: u32,
    pub idx: &'a [i64],
    pub prefix: u32,
    pub c: &'a Scalar,
}

/// Bracket of two prefixed generators given the pure-generator table and the
/// generator-on-coefficient derivation. Shared by the smash and jet layers.
///
/// With `u, v` the prefixes and `X, Y` the pure generators:
/// `[uX, vY] = u X(v) Y  +  (-1)^{(u+X)v} (v u) [X, Y]
///           - (-1)^{(u+X)(v+Y)} (v Y(u)) X`.
pub(crate) fn prefixed_bracket<F, G, H>(
    a: PrefixedGen<'_>,
    b: PrefixedGen<'_>,
    table: F,
    der_a: G,
    der_b: H,
    mut emit: impl FnMut(JetTag, u32, Vec<i64>, u32, Scalar),
) where
    F: Fn(JetTag, u32, &[i64], JetTag, u32, &[i64]) -> Vec<GenTerm>,
    G: Fn(JetTag, u32, &[i64], u32) -> Option<(u32, bool)>,
    H: Fn(JetTag, u32, &[i64], u32) -> Option<(u32, bool)>,
{
    let px = mask_parity(a.f).xor(a.tag.parity());
    let py = mask_parity(b.f).xor(b.tag.parity());
    let pu = mask_parity(a.prefix);
    let pv = mask_parity(b.prefix);
    let cab = a.c.clone() * b.c.clone();

    // u X(v) Y
    if let Some((xv, s1)) = der_a(a.tag, a.f, a.idx, b.prefix) {
        if let Some((pm, s2)) = grass_mul(a.prefix, xv) {
            emit(
                b.tag,
                b.f,
                b.idx.to_vec(),
                pm,
                crate::scalar::signed(cab.clone(), s1 ^ s2),
            );
        }
    }

    // (-1)^{(u+X)v} (v u) [X, Y]
    if let Some((vu, s1)) = grass_mul(b.prefix, a.prefix) {
        let koszul = pu.xor(px).koszul(pv);
        for t in table(a.tag, a.f, a.idx, b.tag, b.f, b.idx) {
            if let Some((pm, s2)) = grass_mul(vu, t.prefix) {
                emit(
                    t.tag,
                    t.f,
                    t.idx,
                    pm,
                    crate::scalar::signed(cab.clone() * t.c, koszul ^ s1 ^ s2),
                );
            }
        }
    }

    // -(-1)^{(u+X)(v+Y)} (v Y(u)) X
    if let Some((yu, s1)) = der_b(b.tag, b.f, b.idx, a.prefix) {
        if let Some((pm, s2)) = grass_mul(b.prefix, yu) {
            let koszul = pu.xor(px).koszul(pv.xor(py));
            emit(
                a.tag,
                a.f,
                a.idx.to_vec(),
                pm,
                crate::scalar::signed(-cab, koszul ^ s1 ^ s2),
            );
        }
    }
}

/// Lie superbracket on the degree-zero smash algebra.
pub fn smash_bracket(a: &SmashElement, b: &SmashElement) -> Result<SmashElement> {
    if a.shape() != b.shape() {
        return Err(Error::ContextMismatch);
    }
    let mut out = SmashElement::zero(a.m, a.n);
    for (ka, ca) in a.terms.iter() {
        for (kb, cb) in b.terms.iter() {
            prefixed_bracket(
                PrefixedGen {
                    tag: ka.tag,
                    f: ka.f,
                    idx: &ka.r,
                    prefix: ka.prefix,
                    c: ca,
                },
                PrefixedGen {
                    tag: kb.tag,
                    f: kb.f,
                    idx: &kb.r,
                    prefix: kb.prefix,
                    c: cb,
                },
                gen_bracket,
                |t, f, _idx, v| gen_der(t, f, v),
                |t, f, _idx, v| gen_der(t, f, v),
                |tag, f, idx, prefix, c| {
                    out.add_term(SmashKey::new(tag, f, idx, prefix), c);
                },
            );
        }
    }
    Ok(out)
}

impl core::fmt::Display for SmashElement {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (key, c) in self.terms.iter() {
            let shift: Vec<alloc::string::String> =
                key.r.iter().map(|x| alloc::format!("{x}")).collect();
            let body = alloc::format!(
                "{}*{}({},[{}])",
                mask_string(self.n, key.prefix),
                key.tag,
                mask_string(self.n, key.f),
                shift.join(",")
            );
            crate::superalg::fmt_term(f, first, c, Some(body))?;
            first = false;
        }
        Ok(())
    }
}
