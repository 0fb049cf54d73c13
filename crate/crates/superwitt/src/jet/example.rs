//! A worked finite module given by explicit formulas.
//!
//! The underlying space pairs a Grassmann monomial with a direction slot,
//! one slot per even and odd coordinate. The action of every smash and jet
//! generator is written out case by case rather than derived, so this
//! module serves as an independent witness for the fitted fiber machinery:
//! the same structure arises as the fiber with the dual of the defining
//! general-linear module, and the two code paths must agree everywhere.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::glmn::GlRep;
use crate::jet::fiber::{FiberSpec, FiberVector};
use crate::jet::jets::JetElement;
use crate::jet::smash::SmashElement;
use crate::jet::{mask_parity, JetTag};
use crate::scalar::{l1_norm, qi, signed, Scalar};
use crate::superalg::{grass_left_deriv, grass_mul, Parity};
use crate::vfields::Generator;
use crate::{Error, Result};

/// Basis label: Grassmann monomial times a direction slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExKey {
    pub xi: u32,
    pub slot: Generator,
}

impl ExKey {
    pub fn parity(&self) -> Parity {
        let slot = match self.slot {
            Generator::D(_) => Parity::Even,
            Generator::P(_) => Parity::Odd,
        };
        mask_parity(self.xi).xor(slot)
    }
}

/// Vector in the worked module.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExVector {
    terms: BTreeMap<ExKey, Scalar>,
}

impl ExVector {
    pub fn zero() -> ExVector {
        ExVector {
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(key: ExKey) -> ExVector {
        let mut v = ExVector::zero();
        v.add_term(key, qi(1));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExKey, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &ExKey) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, key: ExKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Scalar::zero);
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

    pub fn try_sub(&self, other: &ExVector) -> ExVector {
        let mut out = self.clone();
        for (key, v) in other.terms.iter() {
            out.add_term(*key, -v.clone());
        }
        out
    }
}

/// The worked module: an integer weight per even coordinate and a scalar
/// eigenvalue for the formal row.
#[derive(Debug, Clone)]
pub struct ExampleRep {
    m: usize,
    n: usize,
    weight: Vec<i64>,
    scalar0: Scalar,
}

impl ExampleRep {
    pub fn new(m: usize, n: usize, weight: Vec<i64>, scalar0: Scalar) -> Result<ExampleRep> {
        if weight.len() != m {
            return Err(Error::BadDimensions);
        }
        Ok(ExampleRep {
            m,
            n,
            weight,
            scalar0,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn weight(&self) -> &[i64] {
        &self.weight
    }

    pub fn scalar0(&self) -> &Scalar {
        &self.scalar0
    }

    /// All direction slots, even ones first.
    pub fn slots(&self) -> Vec<Generator> {
        let mut out = Vec::with_capacity(self.m + self.n);
        for j in 1..=self.m {
            out.push(Generator::D(j));
        }
        for a in 1..=self.n {
            out.push(Generator::P(a));
        }
        out
    }

    /// Position of a slot in the fiber ordering.
    pub fn slot_index(&self, slot: Generator) -> Result<usize> {
        match slot {
            Generator::D(j) if j >= 1 && j <= self.m => Ok(j - 1),
            Generator::P(a) if a >= 1 && a <= self.n => Ok(self.m + a - 1),
            Generator::D(j) => Err(Error::BadIndex { index: j }),
            Generator::P(a) => Err(Error::BadIndex { index: a }),
        }
    }

    /// The same module packaged as fiber data: the weight as eigenvalues
    /// and the dual of the defining general-linear module.
    pub fn as_fiber_spec(&self) -> FiberSpec {
        let lambda = self.weight.iter().map(|&w| qi(w)).collect();
        FiberSpec::new(
            lambda,
            self.scalar0.clone(),
            GlRep::natural(self.m, self.n).dual(),
        )
        .expect("weight length matches by construction")
    }

    /// Transports a vector to the flat fiber coordinates.
    pub fn to_fiber(&self, u: &ExVector) -> Result<FiberVector> {
        let mut out = FiberVector::zero();
        for (key, c) in u.terms() {
            out.add_term(key.xi, self.slot_index(key.slot)?, c.clone());
        }
        Ok(out)
    }

    fn check_key(&self, key: &ExKey) -> Result<()> {
        if key.xi >= (1u32 << self.n) {
            return Err(Error::BadIndex {
                index: key.xi as usize,
            });
        }
        self.slot_index(key.slot).map(|_| ())
    }

    /// Applies a smash element through the six closed formulas.
    pub fn smash_act(&self, a: &SmashElement, u: &ExVector) -> Result<ExVector> {
        if a.shape() != (self.m, self.n) {
            return Err(Error::ContextMismatch);
        }
        let mut out = ExVector::zero();
        for (key, c) in a.terms() {
            for (uk, d) in u.terms() {
                self.check_key(uk)?;
                let base = c.clone() * d.clone();
                let g = uk.xi;
                let f_odd = mask_parity(key.f).is_odd();
                let g_odd = mask_parity(g).is_odd();
                let mut emit = |mask: u32, slot: Generator, w: Scalar| {
                    if w.is_zero() {
                        return;
                    }
                    if let Some((pm, s)) = grass_mul(key.prefix, mask) {
                        out.add_term(ExKey { xi: pm, slot }, signed(w, s));
                    }
                };
                match (key.tag, uk.slot) {
                    (JetTag::D(i), Generator::D(j)) => {
                        if let Some((fg, s)) = grass_mul(key.f, g) {
                            emit(fg, Generator::D(j), signed(base.clone() * qi(self.weight[i - 1]), s));
                            emit(fg, Generator::D(i), signed(-base.clone() * qi(key.r[j - 1]), s));
                        }
                    }
                    (JetTag::D(i), Generator::P(be)) => {
                        if let Some((fg, s)) = grass_mul(key.f, g) {
                            emit(fg, Generator::P(be), signed(base.clone() * qi(self.weight[i - 1]), s));
                        }
                        if let Some((df, s1)) = grass_left_deriv(key.f, be) {
                            if let Some((dfg, s2)) = grass_mul(df, g) {
                                emit(
                                    dfg,
                                    Generator::D(i),
                                    signed(-base.clone(), s1 ^ s2 ^ f_odd ^ g_odd),
                                );
                            }
                        }
                    }
                    (JetTag::P(al), Generator::D(j)) => {
                        if let Some((dg, s1)) = grass_left_deriv(g, al) {
                            if let Some((fdg, s2)) = grass_mul(key.f, dg) {
                                emit(fdg, Generator::D(j), signed(base.clone(), s1 ^ s2));
                            }
                        }
                        if let Some((fg, s)) = grass_mul(key.f, g) {
                            emit(
                                fg,
                                Generator::P(al),
                                signed(-base.clone() * qi(key.r[j - 1]), s ^ g_odd),
                            );
                        }
                    }
                    (JetTag::P(al), Generator::P(be)) => {
                        if let Some((dg, s1)) = grass_left_deriv(g, al) {
                            if let Some((fdg, s2)) = grass_mul(key.f, dg) {
                                emit(fdg, Generator::P(be), signed(base.clone(), s1 ^ s2));
                            }
                        }
                        if let Some((df, s1)) = grass_left_deriv(key.f, be) {
                            if let Some((dfg, s2)) = grass_mul(df, g) {
                                emit(dfg, Generator::P(al), signed(base.clone(), s1 ^ s2 ^ f_odd));
                            }
                        }
                    }
                    (JetTag::D0, slot) => {
                        if let Some((fg, s)) = grass_mul(key.f, g) {
                            emit(fg, slot, signed(base.clone() * self.scalar0.clone(), s));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Applies a jet element through the thirteen case formulas; every jet
    /// of total index above one acts by zero.
    pub fn jet_act(&self, a: &JetElement, u: &ExVector) -> Result<ExVector> {
        if a.shape() != (self.m, self.n) {
            return Err(Error::ContextMismatch);
        }
        let mut out = ExVector::zero();
        for (key, c) in a.terms() {
            let k = key.jet_index();
            let ktot = l1_norm(&k);
            if ktot > 1 || (key.tag == JetTag::D0 && ktot > 0) {
                continue;
            }
            // Position of the raised coordinate for total index one.
            let raised = k.iter().position(|&v| v == 1).map(|p| p + 1);
            for (uk, d) in u.terms() {
                self.check_key(uk)?;
                let base = c.clone() * d.clone();
                let g = uk.xi;
                let f_odd = mask_parity(key.f).is_odd();
                let g_odd = mask_parity(g).is_odd();
                let mut emit = |mask: u32, slot: Generator, w: Scalar| {
                    if w.is_zero() {
                        return;
                    }
                    if let Some((pm, s)) = grass_mul(key.prefix, mask) {
                        out.add_term(ExKey { xi: pm, slot }, signed(w, s));
                    }
                };
                match (key.tag, raised, uk.slot) {
                    (JetTag::D(i), None, Generator::D(_)) => {
                        if let Some((fg, s)) = grass_mul(key.f, g) {
                            emit(fg, uk.slot, signed(base.clone() * qi(self.weight[i - 1]), s));
                        }
                    }
                    (JetTag::D(i), None, Generator::P(be)) => {
                        if let Some((fg, s)) = grass_mul(key.f, g) {
                            emit(fg, Generator::P(be), signed(base.clone() * qi(self.weight[i - 1]), s));
                        }
                        if let Some((df, s1)) = grass_left_deriv(key.f, be) {
                            if let Some((dfg, s2)) = grass_mul(df, g) {
                                emit(
                                    dfg,
                                    Generator::D(i),
                                    signed(-base.clone(), s1 ^ s2 ^ f_odd ^ g_odd),
                                );
                            }
                        }
                    }
                    (JetTag::D(i), Some(aa), Generator::D(j)) => {
                        if aa == j {
                            if let Some((fg, s)) = grass_mul(key.f, g) {
                                emit(fg, Generator::D(i), signed(-base.clone(), s));
                            }
                        }
                    }
                    (JetTag::D(_), Some(_), Generator::P(_)) => {}
                    (JetTag::P(al), None, Generator::D(_)) => {
                        if let Some((dg, s1)) = grass_left_deriv(g, al) {
                            if let Some((fdg, s2)) = grass_mul(key.f, dg) {
                                emit(fdg, uk.slot, signed(base.clone(), s1 ^ s2));
                            }
                        }
                    }
                    (JetTag::P(al), None, Generator::P(be)) => {
                        if let Some((dg, s1)) = grass_left_deriv(g, al) {
                            if let Some((fdg, s2)) = grass_mul(key.f, dg) {
                                emit(fdg, Generator::P(be), signed(base.clone(), s1 ^ s2));
                            }
                        }
                        if let Some((df, s1)) = grass_left_deriv(key.f, be) {
                            if let Some((dfg, s2)) = grass_mul(df, g) {
                                emit(dfg, Generator::P(al), signed(base.clone(), s1 ^ s2 ^ f_odd));
                            }
                        }
                    }
                    (JetTag::P(al), Some(aa), Generator::D(j)) => {
                        if aa == j {
                            if let Some((fg, s)) = grass_mul(key.f, g) {
                                emit(fg, Generator::P(al), signed(-base.clone(), s ^ g_odd));
                            }
                        }
                    }
                    (JetTag::P(_), Some(_), Generator::P(_)) => {}
                    (JetTag::D0, None, slot) => {
                        if let Some((fg, s)) = grass_mul(key.f, g) {
                            emit(fg, slot, signed(base.clone() * self.scalar0.clone(), s));
                        }
                    }
                    (JetTag::D0, Some(_), _) => {}
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::fiber::fiber_act;
    use crate::jet::jets::{jet_bracket, JetKey};
    use crate::jet::nf::jet_nf;
    use crate::scalar::{multi_indices, power_over_factorial, q, window};

    fn rep12() -> ExampleRep {
        ExampleRep::new(1, 2, alloc::vec![2], q(5, 3)).unwrap()
    }

    fn basis(rep: &ExampleRep) -> Vec<ExKey> {
        let mut out = Vec::new();
        for xi in 0..(1u32 << rep.shape().1) {
            for slot in rep.slots() {
                out.push(ExKey { xi, slot });
            }
        }
        out
    }

    fn all_generators(rep: &ExampleRep, radius: i64) -> Vec<SmashElement> {
        let (m, n) = rep.shape();
        let mut tags = Vec::new();
        for i in 1..=m {
            tags.push(JetTag::D(i));
        }
        for a in 1..=n {
            tags.push(JetTag::P(a));
        }
        tags.push(JetTag::D0);
        let mut out = Vec::new();
        for tag in tags {
            for f in 0..(1u32 << n) {
                for r in window(m, radius) {
                    out.push(SmashElement::generator(m, n, tag, f, r).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn explicit_action_matches_the_dual_fiber() {
        // The hand-written formulas and the closed fiber formulas with the
        // dual module agree on every generator and basis vector.
        let rep = rep12();
        let spec = rep.as_fiber_spec();
        for gen in all_generators(&rep, 2) {
            for key in basis(&rep) {
                let u = ExVector::unit(key);
                let explicit = rep.smash_act(&gen, &u).unwrap();
                let through_fiber = fiber_act(&spec, &gen, &rep.to_fiber(&u).unwrap()).unwrap();
                assert_eq!(
                    rep.to_fiber(&explicit).unwrap(),
                    through_fiber,
                    "gen={gen} key={key:?}"
                );
            }
        }
    }

    #[test]
    fn smash_action_is_the_weighted_sum_of_jets() {
        // Reassembling a generator from its jet rows reproduces the smash
        // action at every sampled shift.
        let rep = rep12();
        let (m, n) = rep.shape();
        for gen in all_generators(&rep, 2) {
            let (tag, f, r) = {
                let (key, _) = gen.terms().next().unwrap();
                (key.tag, key.f, key.r.clone())
            };
            for bk in basis(&rep) {
                let u = ExVector::unit(bk);
                let direct = rep.smash_act(&gen, &u).unwrap();
                let mut total = ExVector::zero();
                for k in multi_indices(m, 1) {
                    let w = power_over_factorial(&r, &k);
                    if w.is_zero() {
                        continue;
                    }
                    let mut shift = k.clone();
                    if let JetTag::D(i) = tag {
                        shift[i - 1] -= 1;
                    }
                    let jet = JetElement::generator(m, n, tag, f, shift).unwrap();
                    let mut part = rep.jet_act(&jet, &u).unwrap();
                    part.scale(&w);
                    for (kk, c) in part.terms() {
                        total.add_term(*kk, c.clone());
                    }
                }
                assert_eq!(direct, total, "gen={gen} key={bk:?}");
            }
        }
    }

    #[test]
    fn jet_rows_represent_the_jet_bracket() {
        // The explicit jet action intertwines the jet bracket with the
        // supercommutator of operators.
        let rep = rep12();
        let (m, n) = rep.shape();
        let mut jets = Vec::new();
        for tag in [JetTag::D(1), JetTag::P(1), JetTag::P(2), JetTag::D0] {
            for f in [0u32, 0b01, 0b11] {
                for k in multi_indices(m, 1) {
                    let mut shift = k.clone();
                    if let JetTag::D(i) = tag {
                        shift[i - 1] -= 1;
                    }
                    jets.push(JetElement::generator(m, n, tag, f, shift).unwrap());
                }
            }
        }
        // A prefixed element joins the sweep.
        jets.push(
            JetElement::single(
                m,
                n,
                JetKey::new(JetTag::D(1), 0, alloc::vec![-1], 0b10),
                qi(1),
            )
            .unwrap(),
        );
        for a in jets.iter() {
            for b in jets.iter() {
                let br = jet_bracket(a, b).unwrap();
                let pa = a.parity().unwrap();
                let pb = b.parity().unwrap();
                for bk in basis(&rep) {
                    let u = ExVector::unit(bk);
                    let direct = rep.jet_act(&br, &u).unwrap();
                    let ab = rep
                        .jet_act(a, &rep.jet_act(b, &u).unwrap())
                        .unwrap();
                    let mut ba = rep
                        .jet_act(b, &rep.jet_act(a, &u).unwrap())
                        .unwrap();
                    ba.scale(&signed(qi(1), pa.koszul(pb)));
                    assert_eq!(direct, ab.try_sub(&ba), "a={a} b={b} key={bk:?}");
                }
            }
        }
    }

    #[test]
    fn high_jets_act_by_zero() {
        let rep = rep12();
        let (m, n) = rep.shape();
        for tag in [JetTag::D(1), JetTag::P(1), JetTag::D0] {
            for k in multi_indices(m, 3) {
                let bound = match tag {
                    JetTag::D0 => 0,
                    _ => 1,
                };
                if l1_norm(&k) <= bound {
                    continue;
                }
                let mut shift = k.clone();
                if let JetTag::D(i) = tag {
                    shift[i - 1] -= 1;
                }
                let jet = JetElement::generator(m, n, tag, 0b01, shift).unwrap();
                for bk in basis(&rep) {
                    let got = rep.jet_act(&jet, &ExVector::unit(bk)).unwrap();
                    assert!(got.is_zero(), "tag={tag} k={k:?} key={bk:?}");
                }
            }
        }
    }

    #[test]
    fn distinguished_rows_act_by_scalars() {
        // The plain lowering rows read the weight, the formal row reads
        // its eigenvalue.
        let rep = rep12();
        let (m, n) = rep.shape();
        let lower = JetElement::generator(m, n, JetTag::D(1), 0, alloc::vec![-1]).unwrap();
        let formal = JetElement::generator(m, n, JetTag::D0, 0, alloc::vec![0]).unwrap();
        for bk in basis(&rep) {
            let u = ExVector::unit(bk);
            let mut by_weight = u.clone();
            by_weight.scale(&qi(rep.weight()[0]));
            assert_eq!(rep.jet_act(&lower, &u).unwrap(), by_weight);
            let mut by_scalar = u.clone();
            by_scalar.scale(rep.scalar0());
            assert_eq!(rep.jet_act(&formal, &u).unwrap(), by_scalar);
        }
    }

    #[test]
    fn normal_form_differences_act_by_zero() {
        // Rewriting a row to its normal form never changes its action.
        let rep = rep12();
        let (m, n) = rep.shape();
        let mut tags = Vec::new();
        for i in 1..=m {
            tags.push(JetTag::D(i));
        }
        for a in 1..=n {
            tags.push(JetTag::P(a));
        }
        tags.push(JetTag::D0);
        for tag in tags {
            for f in 0..(1u32 << n) {
                for k in multi_indices(m, 2) {
                    let mut shift = k.clone();
                    if let JetTag::D(i) = tag {
                        shift[i - 1] -= 1;
                    }
                    let jet = JetElement::generator(m, n, tag, f, shift).unwrap();
                    let diff = jet.try_sub(&jet_nf(&jet).into_jet()).unwrap();
                    for bk in basis(&rep) {
                        let got = rep.jet_act(&diff, &ExVector::unit(bk)).unwrap();
                        assert!(got.is_zero(), "tag={tag} f={f} k={k:?} key={bk:?}");
                    }
                }
            }
        }
    }
}
