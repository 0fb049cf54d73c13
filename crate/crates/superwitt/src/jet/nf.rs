//! Normal form of jet elements modulo the rows that act by zero on every
//! finite fiber, and the embedding of the general linear superalgebra.
//!
//! Modulo that null span, the jet algebra is a free module over the
//! Grassmann coefficients on a finite generator list: the lowering rows
//! `D(i)(1, -e_i)` and `D(i)(x_b, -e_i)`, the transvection rows
//! `D(i)(1, e_j - e_i)`, the odd rows `P(a)(1, 0)`, `P(a)(x_b, 0)` and
//! `P(a)(1, e_j)`, and the scalar row `D0(1, 0)`. [`jet_nf`] rewrites any
//! jet element into coordinates on that basis; [`gl_embed`] realizes matrix
//! units inside it.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::glmn::{GlElement, GlIndex};
use crate::jet::jets::{JetElement, JetKey};
use crate::jet::{mask_string, JetTag};
use crate::scalar::{qi, Scalar};
use crate::superalg::{grass_mul, grass_right_deriv, Parity};
use crate::{Error, Result};

/// Free generators of the jet algebra modulo its null rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum NfGen {
    /// `D(i)(1, -e_i)`: central lowering row.
    DLower(usize),
    /// `D(i)(x_b, -e_i)`: lowering row with one Grassmann factor.
    DLowerXi(usize, usize),
    /// `D(i)(1, e_j - e_i)`: transvection row; `j = i` is the Euler diagonal.
    DShift(usize, usize),
    /// `P(a)(1, 0)`: constant odd row.
    PZero(usize),
    /// `P(a)(x_b, 0)`: odd row with one Grassmann factor.
    PZeroXi(usize, usize),
    /// `P(a)(1, e_j)`: raised odd row.
    PShift(usize, usize),
    /// `D0(1, 0)`: central scalar row.
    DZero,
}

impl NfGen {
    pub fn parity(&self) -> Parity {
        match self {
            NfGen::DLower(_) | NfGen::DShift(_, _) | NfGen::DZero | NfGen::PZeroXi(_, _) => {
                Parity::Even
            }
            NfGen::DLowerXi(_, _) | NfGen::PZero(_) | NfGen::PShift(_, _) => Parity::Odd,
        }
    }

    fn validate(&self, m: usize, n: usize) -> Result<()> {
        let ok = match *self {
            NfGen::DLower(i) => i >= 1 && i <= m,
            NfGen::DLowerXi(i, b) => i >= 1 && i <= m && b >= 1 && b <= n,
            NfGen::DShift(i, j) => i >= 1 && i <= m && j >= 1 && j <= m,
            NfGen::PZero(a) => a >= 1 && a <= n,
            NfGen::PZeroXi(a, b) => a >= 1 && a <= n && b >= 1 && b <= n,
            NfGen::PShift(a, j) => a >= 1 && a <= n && j >= 1 && j <= m,
            NfGen::DZero => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadDimensions)
        }
    }

    /// The jet label this generator names.
    pub fn as_jet_key(&self, m: usize) -> JetKey {
        let zero = alloc::vec![0i64; m];
        let unit_down = |i: usize| {
            let mut v = alloc::vec![0i64; m];
            v[i - 1] = -1;
            v
        };
        match *self {
            NfGen::DLower(i) => JetKey::new(JetTag::D(i), 0, unit_down(i), 0),
            NfGen::DLowerXi(i, b) => JetKey::new(JetTag::D(i), 1 << (b - 1), unit_down(i), 0),
            NfGen::DShift(i, j) => {
                let mut v = unit_down(i);
                v[j - 1] += 1;
                JetKey::new(JetTag::D(i), 0, v, 0)
            }
            NfGen::PZero(a) => JetKey::new(JetTag::P(a), 0, zero, 0),
            NfGen::PZeroXi(a, b) => JetKey::new(JetTag::P(a), 1 << (b - 1), zero, 0),
            NfGen::PShift(a, j) => {
                let mut v = zero;
                v[j - 1] = 1;
                JetKey::new(JetTag::P(a), 0, v, 0)
            }
            NfGen::DZero => JetKey::new(JetTag::D0, 0, zero, 0),
        }
    }

    /// Enumerates all generators for the given sizes, scalar row last.
    pub fn all(m: usize, n: usize, with_scalar_row: bool) -> Vec<NfGen> {
        let mut out = Vec::new();
        for i in 1..=m {
            out.push(NfGen::DLower(i));
        }
        for i in 1..=m {
            for b in 1..=n {
                out.push(NfGen::DLowerXi(i, b));
            }
        }
        for i in 1..=m {
            for j in 1..=m {
                out.push(NfGen::DShift(i, j));
            }
        }
        for a in 1..=n {
            out.push(NfGen::PZero(a));
        }
        for a in 1..=n {
            for b in 1..=n {
                out.push(NfGen::PZeroXi(a, b));
            }
        }
        for a in 1..=n {
            for j in 1..=m {
                out.push(NfGen::PShift(a, j));
            }
        }
        if with_scalar_row {
            out.push(NfGen::DZero);
        }
        out
    }
}

impl core::fmt::Display for NfGen {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match *self {
            NfGen::DLower(i) => write!(f, "D{i}(1,-e{i})"),
            NfGen::DLowerXi(i, b) => write!(f, "D{i}(x{b},-e{i})"),
            NfGen::DShift(i, j) => write!(f, "D{i}(1,e{j}-e{i})"),
            NfGen::PZero(a) => write!(f, "P{a}(1,0)"),
            NfGen::PZeroXi(a, b) => write!(f, "P{a}(x{b},0)"),
            NfGen::PShift(a, j) => write!(f, "P{a}(1,e{j})"),
            NfGen::DZero => write!(f, "Dz(1,0)"),
        }
    }
}

/// Jet element written in Grassmann coordinates on the free generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetNF {
    m: usize,
    n: usize,
    terms: BTreeMap<(NfGen, u32), Scalar>,
}

impl JetNF {
    pub fn zero(m: usize, n: usize) -> Self {
        JetNF {
            m,
            n,
            terms: BTreeMap::new(),
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&(NfGen, u32), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, gen: NfGen, prefix: u32) -> Scalar {
        self.terms
            .get(&(gen, prefix))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, gen: NfGen, prefix: u32, c: Scalar) {
        debug_assert!(gen.validate(self.m, self.n).is_ok());
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((gen, prefix)).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(gen, prefix));
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
        for (&(g, p), v) in other.terms.iter() {
            out.add_term(g, p, v.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ContextMismatch);
        }
        let mut out = self.clone();
        for (&(g, p), v) in other.terms.iter() {
            out.add_term(g, p, -v.clone());
        }
        Ok(out)
    }

    /// The jet element these coordinates name.
    pub fn into_jet(&self) -> JetElement {
        let mut out = JetElement::zero(self.m, self.n);
        for (&(gen, prefix), c) in self.terms.iter() {
            let mut key = gen.as_jet_key(self.m);
            key.prefix = prefix;
            out.add_term(key, c.clone());
        }
        out
    }
}

impl core::fmt::Display for JetNF {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(gen, prefix), c) in self.terms.iter() {
            let body = alloc::format!("{}*{}", mask_string(self.n, prefix), gen);
            crate::superalg::fmt_term(f, first, c, Some(body))?;
            first = false;
        }
        Ok(())
    }
}

/// Rewrites one pure jet row into normal-form coordinates.
///
/// Rows whose jet index has total degree two or more act by zero on every
/// finite fiber, as do scalar rows with nonzero index; they rewrite to
/// nothing. Rows at index zero spread over the constant and one-factor
/// generators through right derivatives of the argument.
fn rewrite_row(n: usize, tag: JetTag, f: u32, shift: &[i64]) -> Vec<(NfGen, u32, Scalar)> {
    let mut k = shift.to_vec();
    if let JetTag::D(i) = tag {
        k[i - 1] += 1;
    }
    let k_total: i64 = k.iter().sum();
    let mut out = Vec::new();
    match k_total {
        0 => match tag {
            JetTag::D(i) => {
                out.push((NfGen::DLower(i), f, qi(1)));
                for b in 1..=n {
                    if let Some((w, s)) = grass_right_deriv(f, b) {
                        out.push((NfGen::DLowerXi(i, b), w, crate::scalar::signed(qi(1), s)));
                        if let Some((wb, s2)) = grass_mul(w, 1 << (b - 1)) {
                            out.push((NfGen::DLower(i), wb, crate::scalar::signed(qi(-1), s ^ s2)));
                        }
                    }
                }
            }
            JetTag::P(a) => {
                out.push((NfGen::PZero(a), f, qi(1)));
                for b in 1..=n {
                    if let Some((w, s)) = grass_right_deriv(f, b) {
                        out.push((NfGen::PZeroXi(a, b), w, crate::scalar::signed(qi(1), s)));
                        if let Some((wb, s2)) = grass_mul(w, 1 << (b - 1)) {
                            out.push((NfGen::PZero(a), wb, crate::scalar::signed(qi(-1), s ^ s2)));
                        }
                    }
                }
            }
            JetTag::D0 => out.push((NfGen::DZero, f, qi(1))),
        },
        1 => {
            // Jet index e_j: read j off the raised component.
            let j = k.iter().position(|&v| v == 1).expect("degree one") + 1;
            match tag {
                JetTag::D(i) => out.push((NfGen::DShift(i, j), f, qi(1))),
                JetTag::P(a) => out.push((NfGen::PShift(a, j), f, qi(1))),
                JetTag::D0 => {}
            }
        }
        _ => {}
    }
    out
}

/// Normal form of a jet element: coordinates on the free generators.
pub fn jet_nf(a: &JetElement) -> JetNF {
    let (m, n) = a.shape();
    let mut out = JetNF::zero(m, n);
    for (key, c) in a.terms() {
        for (gen, inner, w) in rewrite_row(n, key.tag, key.f, &key.shift) {
            if let Some((pm, s)) = grass_mul(key.prefix, inner) {
                out.add_term(gen, pm, crate::scalar::signed(c.clone() * w, s));
            }
        }
    }
    out
}

/// Embeds a general linear element: matrix units map to transvection rows
/// and odd-row combinations.
pub fn gl_embed(x: &GlElement) -> Result<JetNF> {
    let (m, n) = x.shape();
    let mut out = JetNF::zero(m, n);
    for (&(a, b), c) in x.terms() {
        match (a, b) {
            (GlIndex::Ev(i), GlIndex::Ev(j)) => {
                out.add_term(NfGen::DShift(j, i), 0, c.clone());
            }
            (GlIndex::Od(p), GlIndex::Od(q)) => {
                out.add_term(NfGen::PZeroXi(q, p), 0, c.clone());
                out.add_term(NfGen::PZero(q), 1 << (p - 1), -c.clone());
            }
            (GlIndex::Ev(i), GlIndex::Od(q)) => {
                out.add_term(NfGen::PShift(q, i), 0, c.clone());
            }
            (GlIndex::Od(p), GlIndex::Ev(j)) => {
                out.add_term(NfGen::DLowerXi(j, p), 0, c.clone());
                out.add_term(NfGen::DLower(j), 1 << (p - 1), -c.clone());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glmn::GlElement;
    use crate::jet::jets::jet_bracket;

    #[test]
    fn free_generators_are_fixed_points() {
        for gen in NfGen::all(2, 2, true) {
            let jet = JetElement::single(2, 2, gen.as_jet_key(2), qi(1)).unwrap();
            let nf = jet_nf(&jet);
            assert_eq!(nf.num_terms(), 1, "{gen}");
            assert_eq!(nf.coeff(gen, 0), qi(1), "{gen}");
            assert_eq!(nf.into_jet(), jet, "{gen}");
        }
    }

    #[test]
    fn two_factor_lowering_row_spreads() {
        // D1(x1 x2, -e1) in coordinates: -x1x2 on the constant lowering row,
        // -x2 on the x1 row, +x1 on the x2 row.
        let jet = JetElement::generator(1, 2, JetTag::D(1), 0b11, alloc::vec![-1]).unwrap();
        let nf = jet_nf(&jet);
        assert_eq!(nf.coeff(NfGen::DLower(1), 0b11), qi(-1));
        assert_eq!(nf.coeff(NfGen::DLowerXi(1, 1), 0b10), qi(-1));
        assert_eq!(nf.coeff(NfGen::DLowerXi(1, 2), 0b01), qi(1));
        assert_eq!(nf.num_terms(), 3);
        // The rewrite is idempotent.
        assert_eq!(jet_nf(&nf.into_jet()), nf);
    }

    #[test]
    fn high_index_rows_vanish() {
        // Jet index of total degree two or more.
        let z = jet_nf(&JetElement::generator(2, 1, JetTag::D(1), 0, alloc::vec![0, 1]).unwrap());
        assert!(z.is_zero());
        let z = jet_nf(&JetElement::generator(1, 1, JetTag::P(1), 1, alloc::vec![2]).unwrap());
        assert!(z.is_zero());
        let z = jet_nf(&JetElement::generator(1, 1, JetTag::D0, 0, alloc::vec![1]).unwrap());
        assert!(z.is_zero());
    }

    #[test]
    fn raised_rows_factor_out_the_argument() {
        // D2(x1, e1 - e2) = x1 * D2(1, e1 - e2).
        let jet = JetElement::generator(2, 1, JetTag::D(2), 1, alloc::vec![1, -1]).unwrap();
        let nf = jet_nf(&jet);
        assert_eq!(nf.num_terms(), 1);
        assert_eq!(nf.coeff(NfGen::DShift(2, 1), 1), qi(1));
        // P1(x1, e2) = x1 * P1(1, e2).
        let jet = JetElement::generator(2, 1, JetTag::P(1), 1, alloc::vec![0, 1]).unwrap();
        let nf = jet_nf(&jet);
        assert_eq!(nf.coeff(NfGen::PShift(1, 2), 1), qi(1));
        assert_eq!(nf.num_terms(), 1);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let m = 1;
        let n = 1;
        let idx = [GlIndex::Ev(1), GlIndex::Od(1)];
        for &a in idx.iter() {
            for &b in idx.iter() {
                for &c in idx.iter() {
                    for &d in idx.iter() {
                        let x = GlElement::unit(m, n, a, b).unwrap();
                        let y = GlElement::unit(m, n, c, d).unwrap();
                        let lhs = jet_nf(&jet_bracket(
                            &gl_embed(&x).unwrap().into_jet(),
                            &gl_embed(&y).unwrap().into_jet(),
                        )
                        .unwrap());
                        let rhs = gl_embed(&x.bracket(&y).unwrap()).unwrap();
                        assert_eq!(lhs, rhs, "[{a}{b}],[{c}{d}]");
                    }
                }
            }
        }
    }

    #[test]
    fn three_families_supercommute() {
        // Central lowering and scalar rows, constant odd rows, and the
        // embedded matrix units: brackets across families all vanish.
        let m = 1;
        let n = 1;
        let central = alloc::vec![
            JetElement::single(m, n, NfGen::DLower(1).as_jet_key(m), qi(1)).unwrap(),
            JetElement::single(m, n, NfGen::DZero.as_jet_key(m), qi(1)).unwrap(),
        ];
        let odd_rows = alloc::vec![
            JetElement::single(m, n, NfGen::PZero(1).as_jet_key(m), qi(1)).unwrap(),
        ];
        let mut gl_rows = alloc::vec![];
        let idx = [GlIndex::Ev(1), GlIndex::Od(1)];
        for &a in idx.iter() {
            for &b in idx.iter() {
                let x = GlElement::unit(m, n, a, b).unwrap();
                gl_rows.push(gl_embed(&x).unwrap().into_jet());
            }
        }
        let families = [central, odd_rows.clone(), gl_rows];
        for (fi, fam_a) in families.iter().enumerate() {
            for (fj, fam_b) in families.iter().enumerate() {
                if fi == fj {
                    continue;
                }
                for x in fam_a.iter() {
                    for y in fam_b.iter() {
                        let nf = jet_nf(&jet_bracket(x, y).unwrap());
                        assert!(nf.is_zero(), "fam{fi} x fam{fj}: [{x}, {y}] = {nf}");
                    }
                }
            }
        }
        // The odd family is abelian on the nose.
        for x in odd_rows.iter() {
            for y in odd_rows.iter() {
                assert!(jet_bracket(x, y).unwrap().is_zero());
            }
        }
    }
}
