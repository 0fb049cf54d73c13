//! Jet generators: the polynomial coefficients of the smash generators in
//! their shift vector.
//!
//! A smash row with shift `r` expands as a series whose `k`-th coefficient
//! is weighted by `r^k / k!`. The jet label stored here is the shift the
//! term actually carries: `k - e_i` for the Euler row `D(i)` (so component
//! `i` may be `-1`), plain `k >= 0` for `P(a)` and `D0` rows. The label
//! `-e_i` on `D(i)` is the distinguished lowering row with its own bracket
//! behaviour.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::jet::smash::{GenTerm, PrefixedGen, SmashElement, SmashKey};
use crate::jet::{mask_parity, mask_string, JetTag};
use crate::scalar::{power_over_factorial, qi, Scalar};
use crate::superalg::{grass_left_deriv, grass_mul, Parity};
use crate::{Error, Result};

/// Basis label: `prefix * tag(f, shift)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct JetKey {
    pub tag: JetTag,
    pub f: u32,
    pub shift: Vec<i64>,
    pub prefix: u32,
}

impl JetKey {
    pub fn new(tag: JetTag, f: u32, shift: Vec<i64>, prefix: u32) -> Self {
        JetKey {
            tag,
            f,
            shift,
            prefix,
        }
    }

    pub fn parity(&self) -> Parity {
        mask_parity(self.prefix)
            .xor(mask_parity(self.f))
            .xor(self.tag.parity())
    }

    /// The jet index `k >= 0`: the stored shift, moved back by the row's own
    /// direction for Euler rows.
    pub fn jet_index(&self) -> Vec<i64> {
        let mut k = self.shift.clone();
        if let JetTag::D(i) = self.tag {
            k[i - 1] += 1;
        }
        k
    }

    /// Whether an Euler row sits at its lowering label `-e_i`.
    pub fn is_lowering(&self) -> bool {
        match self.tag {
            JetTag::D(i) => {
                self.shift.iter().enumerate().all(|(p, &v)| {
                    if p == i - 1 {
                        v == -1
                    } else {
                        v == 0
                    }
                })
            }
            _ => false,
        }
    }

    fn validate(&self, m: usize, n: usize) -> Result<()> {
        self.tag.validate(m, n)?;
        if self.shift.len() != m {
            return Err(Error::BadDimensions);
        }
        for (p, &v) in self.shift.iter().enumerate() {
            let floor = match self.tag {
                JetTag::D(i) if p == i - 1 => -1,
                _ => 0,
            };
            if v < floor {
                return Err(Error::InvalidElement("jet shift out of range".into()));
            }
        }
        let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
        if self.f & !full != 0 || self.prefix & !full != 0 {
            return Err(Error::InvalidElement("Grassmann mask out of range".into()));
        }
        Ok(())
    }
}

/// Element of the jet algebra over `m` even and `n` odd directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetElement {
    m: usize,
    n: usize,
    terms: BTreeMap<JetKey, Scalar>,
}

impl JetElement {
    pub fn zero(m: usize, n: usize) -> Self {
        JetElement {
            m,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(m: usize, n: usize, key: JetKey, c: Scalar) -> Result<Self> {
        key.validate(m, n)?;
        let mut e = JetElement::zero(m, n);
        e.add_term(key, c);
        Ok(e)
    }

    pub fn generator(m: usize, n: usize, tag: JetTag, f: u32, shift: Vec<i64>) -> Result<Self> {
        JetElement::single(m, n, JetKey::new(tag, f, shift, 0), qi(1))
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

    pub fn terms(&self) -> impl Iterator<Item = (&JetKey, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &JetKey) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, key: JetKey, c: Scalar) {
        debug_assert!(key.validate(self.m, self.n).is_ok(), "bad jet key {key:?}");
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

    pub fn mul_mask(&self, mask: u32) -> Self {
        let mut out = JetElement::zero(self.m, self.n);
        for (key, c) in self.terms.iter() {
            if let Some((pm, neg)) = grass_mul(mask, key.prefix) {
                let mut k = key.clone();
                k.prefix = pm;
                out.add_term(k, if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    /// Sum of the Euler diagonal jets `D(i)(1, 0)`; its adjoint action reads
    /// off total even degree.
    pub fn grading_even(m: usize, n: usize) -> Self {
        let mut e = JetElement::zero(m, n);
        for i in 1..=m {
            e.add_term(JetKey::new(JetTag::D(i), 0, alloc::vec![0; m], 0), qi(1));
        }
        e
    }

    /// Sum of the odd diagonal jets `P(a)(x_a, 0)`; its adjoint action reads
    /// off total odd degree.
    pub fn grading_odd(m: usize, n: usize) -> Self {
        let mut e = JetElement::zero(m, n);
        for a in 1..=n {
            e.add_term(
                JetKey::new(JetTag::P(a), 1 << (a - 1), alloc::vec![0; m], 0),
                qi(1),
            );
        }
        e
    }

    /// The full grading element: both diagonals together.
    pub fn grading_full(m: usize, n: usize) -> Self {
        Self::grading_even(m, n)
            .try_add(&Self::grading_odd(m, n))
            .expect("same shape")
    }
}

fn vec_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

fn vec_sub_unit(a: &[i64], i: usize) -> Vec<i64> {
    let mut v = a.to_vec();
    v[i - 1] -= 1;
    v
}

fn is_lowering(tag: JetTag, shift: &[i64]) -> bool {
    match tag {
        JetTag::D(i) => shift
            .iter()
            .enumerate()
            .all(|(p, &v)| if p == i - 1 { v == -1 } else { v == 0 }),
        _ => false,
    }
}

/// `f * deriv_a(g)` as a signed Grassmann monomial.
fn arg_deriv(f: u32, a: usize, g: u32) -> Option<(u32, bool)> {
    let (dg, s1) = grass_left_deriv(g, a)?;
    let (fg, s2) = grass_mul(f, dg)?;
    Some((fg, s1 ^ s2))
}

/// Bracket of two pure jet generators. Coefficients that vanish are skipped
/// before the output label is formed, which keeps every emitted label in
/// range.
fn gen_bracket(ta: JetTag, fa: u32, sa: &[i64], tb: JetTag, fb: u32, sb: &[i64]) -> Vec<GenTerm> {
    let pa = mask_parity(fa);
    let pb = mask_parity(fb);
    let mut out = Vec::new();
    let low_a = is_lowering(ta, sa);
    let low_b = is_lowering(tb, sb);
    match (ta, tb) {
        (JetTag::D(_), JetTag::D(_)) if low_a && low_b => {}
        (JetTag::D(i), JetTag::D(j)) if low_a => {
            // Lowering row against a general Euler jet at shift k:
            // (k_i + d_ij) (D(j)(fg, k - e_i) - f D(j)(g, k - e_i)).
            let coeff = qi(sb[i - 1] + if i == j { 1 } else { 0 });
            if !coeff.is_zero() {
                let idx = vec_sub_unit(sb, i);
                if let Some((fg, neg)) = grass_mul(fa, fb) {
                    out.push(GenTerm {
                        c: crate::scalar::signed(coeff.clone(), neg),
                        prefix: 0,
                        tag: JetTag::D(j),
                        f: fg,
                        idx: idx.clone(),
                    });
                }
                out.push(GenTerm {
                    c: -coeff,
                    prefix: fa,
                    tag: JetTag::D(j),
                    f: fb,
                    idx,
                });
            }
        }
        (JetTag::D(i), JetTag::D(j)) if !low_a && !low_b => {
            // k_i D(j)(fg, l + k) - l_j D(i)(fg, l + k). Equal rows fold
            // into one coefficient first: the difference can vanish on a
            // label that neither row admits on its own.
            if let Some((fg, neg)) = grass_mul(fa, fb) {
                let idx = vec_add(sa, sb);
                if i == j {
                    let c = qi(sb[i - 1] - sa[i - 1]);
                    if !c.is_zero() {
                        out.push(GenTerm {
                            c: crate::scalar::signed(c, neg),
                            prefix: 0,
                            tag: JetTag::D(i),
                            f: fg,
                            idx,
                        });
                    }
                } else {
                    let ki = qi(sb[i - 1]);
                    if !ki.is_zero() {
                        out.push(GenTerm {
                            c: crate::scalar::signed(ki, neg),
                            prefix: 0,
                            tag: JetTag::D(j),
                            f: fg,
                            idx: idx.clone(),
                        });
                    }
                    let lj = qi(sa[j - 1]);
                    if !lj.is_zero() {
                        out.push(GenTerm {
                            c: crate::scalar::signed(-lj, neg),
                            prefix: 0,
                            tag: JetTag::D(i),
                            f: fg,
                            idx,
                        });
                    }
                }
            }
        }
        (JetTag::D(i), JetTag::P(a)) if low_a => {
            // k_i P(a)(fg, k - e_i) - k_i f P(a)(g, k - e_i)
            //   - (-1)^{pf+pg} D(i)(deriv_a(f) g, k - e_i).
            let ki = qi(sb[i - 1]);
            if !ki.is_zero() {
                let idx = vec_sub_unit(sb, i);
                if let Some((fg, neg)) = grass_mul(fa, fb) {
                    out.push(GenTerm {
                        c: crate::scalar::signed(ki.clone(), neg),
                        prefix: 0,
                        tag: JetTag::P(a),
                        f: fg,
                        idx: idx.clone(),
                    });
                }
                out.push(GenTerm {
                    c: -ki,
                    prefix: fa,
                    tag: JetTag::P(a),
                    f: fb,
                    idx,
                });
            }
            if let Some((df, s1)) = grass_left_deriv(fa, a) {
                if let Some((w, s2)) = grass_mul(df, fb) {
                    let sign = pa.xor(pb).is_odd() ^ s1 ^ s2;
                    out.push(GenTerm {
                        c: crate::scalar::signed(-qi(1), sign),
                        prefix: 0,
                        tag: JetTag::D(i),
                        f: w,
                        idx: vec_sub_unit(sb, i),
                    });
                }
            }
        }
        (JetTag::D(i), JetTag::P(a)) => {
            // k_i P(a)(fg, l + k) - (-1)^{pf+pg} D(i)(deriv_a(f) g, l + k).
            let idx = vec_add(sa, sb);
            let ki = qi(sb[i - 1]);
            if !ki.is_zero() {
                if let Some((fg, neg)) = grass_mul(fa, fb) {
                    out.push(GenTerm {
                        c: crate::scalar::signed(ki, neg),
                        prefix: 0,
                        tag: JetTag::P(a),
                        f: fg,
                        idx: idx.clone(),
                    });
                }
            }
            if let Some((df, s1)) = grass_left_deriv(fa, a) {
                if let Some((w, s2)) = grass_mul(df, fb) {
                    let sign = pa.xor(pb).is_odd() ^ s1 ^ s2;
                    out.push(GenTerm {
                        c: crate::scalar::signed(-qi(1), sign),
                        prefix: 0,
                        tag: JetTag::D(i),
                        f: w,
                        idx,
                    });
                }
            }
        }
        (JetTag::P(a), JetTag::P(b)) => {
            let idx = vec_add(sa, sb);
            if let Some((w, neg)) = arg_deriv(fa, a, fb) {
                out.push(GenTerm {
                    c: crate::scalar::signed(qi(1), neg),
                    prefix: 0,
                    tag: JetTag::P(b),
                    f: w,
                    idx: idx.clone(),
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
                        idx,
                    });
                }
            }
        }
        (JetTag::D(i), JetTag::D0) if low_a => {
            // k_i D0(fg, k - e_i) - k_i f D0(g, k - e_i).
            let ki = qi(sb[i - 1]);
            if !ki.is_zero() {
                let idx = vec_sub_unit(sb, i);
                if let Some((fg, neg)) = grass_mul(fa, fb) {
                    out.push(GenTerm {
                        c: crate::scalar::signed(ki.clone(), neg),
                        prefix: 0,
                        tag: JetTag::D0,
                        f: fg,
                        idx: idx.clone(),
                    });
                }
                out.push(GenTerm {
                    c: -ki,
                    prefix: fa,
                    tag: JetTag::D0,
                    f: fb,
                    idx,
                });
            }
        }
        (JetTag::D(i), JetTag::D0) => {
            let ki = qi(sb[i - 1]);
            if !ki.is_zero() {
                if let Some((fg, neg)) = grass_mul(fa, fb) {
                    out.push(GenTerm {
                        c: crate::scalar::signed(ki, neg),
                        prefix: 0,
                        tag: JetTag::D0,
                        f: fg,
                        idx: vec_add(sa, sb),
                    });
                }
            }
        }
        (JetTag::P(a), JetTag::D0) => {
            if let Some((w, neg)) = arg_deriv(fa, a, fb) {
                out.push(GenTerm {
                    c: crate::scalar::signed(qi(1), neg),
                    prefix: 0,
                    tag: JetTag::D0,
                    f: w,
                    idx: vec_add(sa, sb),
                });
            }
        }
        (JetTag::D0, JetTag::D0) => {}
        (x, y) => {
            let px = mask_parity(fa).xor(x.parity());
            let py = mask_parity(fb).xor(y.parity());
            let koszul = px.koszul(py);
            for mut t in gen_bracket(y, fb, sb, x, fa, sa) {
                t.c = crate::scalar::signed(-t.c, koszul);
                out.push(t);
            }
        }
    }
    out.retain(|t| !t.c.is_zero());
    out
}

/// Derivation action of a pure jet generator on a Grassmann monomial: only
/// odd rows at jet label zero act, sending `v` to `f * deriv_a(v)`.
fn gen_der(tag: JetTag, f: u32, shift: &[i64], v: u32) -> Option<(u32, bool)> {
    match tag {
        JetTag::P(a) if shift.iter().all(|&x| x == 0) => arg_deriv(f, a, v),
        _ => None,
    }
}

/// Lie superbracket on the jet algebra.
pub fn jet_bracket(a: &JetElement, b: &JetElement) -> Result<JetElement> {
    if a.shape() != b.shape() {
        return Err(Error::ContextMismatch);
    }
    let mut out = JetElement::zero(a.m, a.n);
    for (ka, ca) in a.terms.iter() {
        for (kb, cb) in b.terms.iter() {
            crate::jet::smash::prefixed_bracket(
                PrefixedGen {
                    tag: ka.tag,
                    f: ka.f,
                    idx: &ka.shift,
                    prefix: ka.prefix,
                    c: ca,
                },
                PrefixedGen {
                    tag: kb.tag,
                    f: kb.f,
                    idx: &kb.shift,
                    prefix: kb.prefix,
                    c: cb,
                },
                gen_bracket,
                gen_der,
                gen_der,
                |tag, f, idx, prefix, c| {
                    out.add_term(JetKey::new(tag, f, idx, prefix), c);
                },
            );
        }
    }
    Ok(out)
}

/// Evaluates a jet family at a concrete shift vector `r`: each term
/// contributes `r^k / k!` times the matching smash generator at `r`, where
/// `k` is the term's jet index.
pub fn expand_eval(a: &JetElement, r: &[i64]) -> Result<SmashElement> {
    let (m, n) = a.shape();
    if r.len() != m {
        return Err(Error::BadDimensions);
    }
    let mut out = SmashElement::zero(m, n);
    for (key, c) in a.terms.iter() {
        let k = key.jet_index();
        let w = power_over_factorial(r, &k);
        if w.is_zero() {
            continue;
        }
        out.add_term(
            SmashKey::new(key.tag, key.f, r.to_vec(), key.prefix),
            c.clone() * w,
        );
    }
    Ok(out)
}

impl core::fmt::Display for JetElement {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (key, c) in self.terms.iter() {
            let shift: Vec<alloc::string::String> =
                key.shift.iter().map(|x| alloc::format!("{x}")).collect();
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
