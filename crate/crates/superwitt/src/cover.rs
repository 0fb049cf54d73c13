//! Functional covers of tensor modules and the annihilator calculus.
//!
//! A cover element is a finite sum of functionals pairing a basis vector
//! field with a module vector; evaluating at a coefficient-algebra element
//! multiplies it into the field and acts. Equality of cover elements is
//! equality of evaluations, checked on finite monomial windows. The
//! alternating-difference operators in the enveloping algebra annihilate
//! tensor modules for a large enough order, which drives the reduction of
//! any cover element to one supported on a bounded weight window.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::scalar::{binom, qi, signed, Scalar};
use crate::superalg::{grass_mul, Monomial, Parity, SuperPoly};
use crate::tensormod::{TensorModule, TensorVector};
use crate::vfields::{AlgebraKind, Generator, VectorField};
use crate::{Error, Result};

fn term_parity(mono: &Monomial, gen: Generator) -> Parity {
    mono.parity().xor(gen.parity())
}

fn single_field(kind: AlgebraKind, mono: Monomial, gen: Generator, c: Scalar) -> VectorField {
    let mut x = VectorField::zero(kind);
    x.add_term(mono, gen, c);
    x
}

/// Formal sum of functionals `psi(tau, u)`, stored per basis field `tau`
/// with the module part merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverElement {
    kind: AlgebraKind,
    terms: BTreeMap<(Monomial, Generator), TensorVector>,
}

impl CoverElement {
    pub fn zero(kind: AlgebraKind) -> CoverElement {
        CoverElement {
            kind,
            terms: BTreeMap::new(),
        }
    }

    /// The functional attached to a field and a module vector, extended
    /// bilinearly over the field's terms.
    pub fn psi(tau: &VectorField, u: &TensorVector) -> CoverElement {
        let mut out = CoverElement::zero(tau.kind());
        for ((mono, gen), c) in tau.terms() {
            out.add_psi(mono.clone(), *gen, &u.scale(c));
        }
        out
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

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Generator), &TensorVector)> {
        self.terms.iter()
    }

    pub fn add_psi(&mut self, mono: Monomial, gen: Generator, u: &TensorVector) {
        if u.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry((mono, gen))
            .or_insert_with(TensorVector::zero);
        for (key, c) in u.terms() {
            slot.add_term(key.clone(), c.clone());
        }
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &Scalar) -> CoverElement {
        let mut out = CoverElement::zero(self.kind);
        if c.is_zero() {
            return out;
        }
        for ((mono, gen), u) in self.terms.iter() {
            out.add_psi(mono.clone(), *gen, &u.scale(c));
        }
        out
    }

    pub fn try_add(&self, rhs: &CoverElement) -> Result<CoverElement> {
        if self.kind != rhs.kind {
            return Err(Error::KindMismatch);
        }
        let mut out = self.clone();
        for ((mono, gen), u) in rhs.terms.iter() {
            out.add_psi(mono.clone(), *gen, u);
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &CoverElement) -> Result<CoverElement> {
        self.try_add(&rhs.scale(&qi(-1)))
    }
}

fn homogeneous_parity(module: &TensorModule, u: &TensorVector) -> Result<Parity> {
    match module.vector_parity(u) {
        Some(p) => Ok(p),
        None => Err(Error::InvalidElement(
            "cover term has a mixed-parity module part".into(),
        )),
    }
}

/// Evaluates a cover element at a coefficient-algebra element:
/// `psi(tau, u)(g) = (-1)^{(|tau|+|u|)|g|} (g tau) u`.
pub fn psi_eval(module: &TensorModule, c: &CoverElement, g: &SuperPoly) -> Result<TensorVector> {
    if module.kind() != c.kind() {
        return Err(Error::KindMismatch);
    }
    let mut out = TensorVector::zero();
    for ((mono, gen), u) in c.terms() {
        if u.is_zero() {
            continue;
        }
        let pt = term_parity(mono, *gen);
        let pu = homogeneous_parity(module, u)?;
        let pc = pt.xor(pu);
        for (gm, gc) in g.terms() {
            let Some((xi, s)) = grass_mul(gm.xi, mono.xi) else {
                continue;
            };
            if gm.t.len() != mono.t.len() {
                return Err(Error::ContextMismatch);
            }
            let t: Vec<i64> = gm.t.iter().zip(mono.t.iter()).map(|(a, b)| a + b).collect();
            let coeff = signed(gc.clone(), s ^ pc.koszul(gm.parity()));
            let field = single_field(c.kind(), Monomial { t, xi }, *gen, coeff);
            let w = module.act(&field, u)?;
            for (key, v) in w.terms() {
                out.add_term(key.clone(), v.clone());
            }
        }
    }
    Ok(out)
}

/// Evaluation at the identity: the equivariant projection back to the
/// module, sending `psi(tau, u)` to `tau u`.
pub fn pi(module: &TensorModule, c: &CoverElement) -> Result<TensorVector> {
    if module.kind() != c.kind() {
        return Err(Error::KindMismatch);
    }
    let mut out = TensorVector::zero();
    for ((mono, gen), u) in c.terms() {
        let field = single_field(c.kind(), mono.clone(), *gen, qi(1));
        let w = module.act(&field, u)?;
        for (key, v) in w.terms() {
            out.add_term(key.clone(), v.clone());
        }
    }
    Ok(out)
}

/// Multiplication by a coefficient: `f psi(tau, u) = psi(f tau, u)`.
pub fn cover_mul(f: &SuperPoly, c: &CoverElement) -> Result<CoverElement> {
    let mut out = CoverElement::zero(c.kind());
    for ((mono, gen), u) in c.terms() {
        for (fm, fc) in f.terms() {
            let Some((xi, s)) = grass_mul(fm.xi, mono.xi) else {
                continue;
            };
            if fm.t.len() != mono.t.len() {
                return Err(Error::ContextMismatch);
            }
            let t: Vec<i64> = fm.t.iter().zip(mono.t.iter()).map(|(a, b)| a + b).collect();
            out.add_psi(Monomial { t, xi }, *gen, &u.scale(&signed(fc.clone(), s)));
        }
    }
    Ok(out)
}

/// Action of a vector field:
/// `eta psi(tau, u) = psi([eta, tau], u) + (-1)^{|eta||tau|} psi(tau, eta u)`.
pub fn cover_act(module: &TensorModule, x: &VectorField, c: &CoverElement) -> Result<CoverElement> {
    if module.kind() != c.kind() || x.kind() != c.kind() {
        return Err(Error::KindMismatch);
    }
    let mut out = CoverElement::zero(c.kind());
    for ((hm, hg), hc) in x.terms() {
        let eta = single_field(c.kind(), hm.clone(), *hg, hc.clone());
        let pe = term_parity(hm, *hg);
        for ((mono, gen), u) in c.terms() {
            let tau = single_field(c.kind(), mono.clone(), *gen, qi(1));
            let br = eta.bracket(&tau);
            for ((bm, bg), bc) in br.terms() {
                out.add_psi(bm.clone(), *bg, &u.scale(bc));
            }
            let pt = term_parity(mono, *gen);
            let w = module.act(&eta, u)?;
            out.add_psi(
                mono.clone(),
                *gen,
                &w.scale(&signed(qi(1), pe.koszul(pt))),
            );
        }
    }
    Ok(out)
}

/// One ordered word in the enveloping algebra: a coefficient times a
/// sequence of basis fields, leftmost letter acting last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UEnvWord {
    pub kind: AlgebraKind,
    pub coeff: Scalar,
    pub letters: Vec<(Monomial, Generator)>,
}

impl UEnvWord {
    pub fn new(kind: AlgebraKind, coeff: Scalar, letters: Vec<(Monomial, Generator)>) -> UEnvWord {
        UEnvWord {
            kind,
            coeff,
            letters,
        }
    }
}

/// Applies one word to a module vector, rightmost letter first.
pub fn word_act(module: &TensorModule, w: &UEnvWord, v: &TensorVector) -> Result<TensorVector> {
    if module.kind() != w.kind {
        return Err(Error::KindMismatch);
    }
    let mut cur = v.clone();
    for (mono, gen) in w.letters.iter().rev() {
        let field = single_field(w.kind, mono.clone(), *gen, qi(1));
        cur = module.act(&field, &cur)?;
        if cur.is_zero() {
            break;
        }
    }
    Ok(cur.scale(&w.coeff))
}

/// Applies a sum of words.
pub fn words_act(
    module: &TensorModule,
    ws: &[UEnvWord],
    v: &TensorVector,
) -> Result<TensorVector> {
    let mut out = TensorVector::zero();
    for w in ws.iter() {
        let part = word_act(module, w, v)?;
        for (key, c) in part.terms() {
            out.add_term(key.clone(), c.clone());
        }
    }
    Ok(out)
}

fn unit_exp(kind: AlgebraKind, i: usize, e: i64) -> Result<Monomial> {
    let ctx = kind.context();
    let mut t = alloc::vec![0i64; ctx.even_count()];
    t[ctx.pos(i)?] = e;
    Ok(Monomial { t, xi: 0 })
}

/// Alternating-difference element in one even direction:
/// sum over a of (-1)^a (l choose a) (t_i^{p+a} d_i)(t_i^{q-a} d_i).
pub fn omega(kind: AlgebraKind, ell: u64, p: i64, q: i64, i: usize) -> Result<Vec<UEnvWord>> {
    let mut out = Vec::with_capacity(ell as usize + 1);
    for a in 0..=ell {
        let coeff = signed(binom(ell, a), a % 2 == 1);
        let first = (unit_exp(kind, i, p + a as i64)?, Generator::D(i));
        let second = (unit_exp(kind, i, q - a as i64)?, Generator::D(i));
        out.push(UEnvWord::new(kind, coeff, alloc::vec![first, second]));
    }
    Ok(out)
}

/// Alternating-difference annihilators: for a target row `d_j`, an odd row,
/// or the formal row, the combination
/// sum over a of (-1)^a (N choose a)(t^p t_i^a x^r target)(t_i^{q-a} d_i).
pub fn ann_ops(
    kind: AlgebraKind,
    n_const: u64,
    p: &[i64],
    q: i64,
    r: u32,
    i: usize,
    target: Generator,
) -> Result<Vec<UEnvWord>> {
    let ctx = kind.context();
    if p.len() != ctx.even_count() {
        return Err(Error::BadDimensions);
    }
    let pos = ctx.pos(i)?;
    let mut out = Vec::with_capacity(n_const as usize + 1);
    for a in 0..=n_const {
        let coeff = signed(binom(n_const, a), a % 2 == 1);
        let mut t = p.to_vec();
        t[pos] += a as i64;
        let first = (Monomial { t, xi: r }, target);
        let second = (unit_exp(kind, i, q - a as i64)?, Generator::D(i));
        out.push(UEnvWord::new(kind, coeff, alloc::vec![first, second]));
    }
    Ok(out)
}

/// All lattice-window basis vectors of a tensor module.
pub fn window_basis(module: &TensorModule, radius: i64) -> Vec<TensorVector> {
    let kind = module.kind();
    let lattice = kind.context().even_count();
    let masks = 1u32 << kind.n();
    let mut out = Vec::new();
    for r in crate::scalar::window(lattice, radius) {
        for p in 0..masks {
            for j in 0..module.fiber().dim() {
                out.push(TensorVector::unit(crate::tensormod::TvKey {
                    r: r.clone(),
                    p,
                    j,
                }));
            }
        }
    }
    out
}

/// Smallest order for which the one-direction alternating differences
/// annihilate every window basis vector, for all window exponents.
pub fn minimal_omega_ell(
    module: &TensorModule,
    i: usize,
    radius: i64,
    bound: u64,
) -> Result<u64> {
    let basis = window_basis(module, radius);
    'outer: for ell in 0..=bound {
        for p in -radius..=radius {
            for q in -radius..=radius {
                let ws = omega(module.kind(), ell, p, q, i)?;
                for v in basis.iter() {
                    if !words_act(module, &ws, v)?.is_zero() {
                        continue 'outer;
                    }
                }
            }
        }
        return Ok(ell);
    }
    Err(Error::SearchExhausted { bound: bound as usize })
}

fn all_targets(kind: AlgebraKind) -> Vec<Generator> {
    let mut out = Vec::new();
    for j in 1..=kind.m() {
        out.push(Generator::D(j));
    }
    for a in 1..=kind.n() {
        out.push(Generator::P(a));
    }
    if kind.has_d0() {
        out.push(Generator::D(0));
    }
    out
}

/// Smallest order for which every annihilator instance over the window
/// kills every window basis vector.
pub fn minimal_n_search(module: &TensorModule, radius: i64, bound: u64) -> Result<u64> {
    let kind = module.kind();
    let basis = window_basis(module, radius);
    let targets = all_targets(kind);
    let masks = 1u32 << kind.n();
    let lattice = kind.context().even_count();
    'outer: for n_const in 0..=bound {
        for i in 1..=kind.m() {
            for target in targets.iter() {
                for r in 0..masks {
                    for p in crate::scalar::window(lattice, radius) {
                        for q in -radius..=radius {
                            let ws = ann_ops(kind, n_const, &p, q, r, i, *target)?;
                            for v in basis.iter() {
                                if !words_act(module, &ws, v)?.is_zero() {
                                    continue 'outer;
                                }
                            }
                        }
                    }
                }
            }
        }
        return Ok(n_const);
    }
    Err(Error::SearchExhausted { bound: bound as usize })
}

/// Rewrites a cover element to an evaluation-equal one whose module parts
/// sit in the weight window `2 max_i |s_i| <= N`. Each step trades a term
/// for terms strictly closer to the window, using the annihilators of
/// order `N`; weights with an integer obstruction are reported.
pub fn window_reduce(
    module: &TensorModule,
    c: &CoverElement,
    n_const: u64,
) -> Result<CoverElement> {
    if module.kind() != c.kind() {
        return Err(Error::KindMismatch);
    }
    let kind = c.kind();
    let ctx = kind.context();
    let mut out = CoverElement::zero(kind);
    let mut work: Vec<(Monomial, Generator, TensorVector)> = Vec::new();
    for ((mono, gen), u) in c.terms() {
        work.push((mono.clone(), *gen, u.clone()));
    }
    while let Some((mono, gen, u)) = work.pop() {
        // Split the module part by lattice point.
        let mut by_lattice: BTreeMap<Vec<i64>, TensorVector> = BTreeMap::new();
        for (key, v) in u.terms() {
            by_lattice
                .entry(key.r.clone())
                .or_insert_with(TensorVector::zero)
                .add_term(key.clone(), v.clone());
        }
        for (s, us) in by_lattice.into_iter() {
            let Some(pos) = s.iter().position(|&si| 2 * si.abs() > n_const as i64) else {
                out.add_psi(mono.clone(), gen, &us);
                continue;
            };
            let label = ctx.first_label() + pos;
            let lam = module.lambda()[pos].clone();
            let divisor = lam + qi(s[pos]);
            if divisor.is_zero() {
                return Err(Error::InvalidElement(alloc::format!(
                    "weight obstruction: direction {label} at lattice offset {}",
                    s[pos]
                )));
            }
            let v = us.scale(&divisor.recip());
            let dir = if s[pos] > 0 { -1i64 } else { 1i64 };
            for a in 1..=n_const {
                let coeff = signed(-binom(n_const, a), a % 2 == 1);
                let mut t = mono.t.clone();
                t[pos] -= dir * a as i64;
                let field = single_field(kind, unit_exp(kind, label, dir * a as i64)?, Generator::D(label), qi(1));
                let moved = module.act(&field, &v)?;
                work.push((
                    Monomial { t, xi: mono.xi },
                    gen,
                    moved.scale(&coeff),
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glmn::GlRep;
    use crate::scalar::q;
    use crate::tensormod::TvKey;

    fn witt_module(lam: Scalar) -> TensorModule {
        let kind = AlgebraKind::Plain { m: 1, n: 0 };
        TensorModule::new(kind, GlRep::trivial(1, 0), alloc::vec![lam], None).unwrap()
    }

    fn natural_module() -> TensorModule {
        let kind = AlgebraKind::Plain { m: 1, n: 1 };
        TensorModule::new(kind, GlRep::natural(1, 1), alloc::vec![q(1, 2)], None).unwrap()
    }

    fn field(kind: AlgebraKind, t: Vec<i64>, xi: u32, gen: Generator) -> VectorField {
        single_field(kind, Monomial { t, xi }, gen, qi(1))
    }

    fn sample_fields(kind: AlgebraKind) -> Vec<VectorField> {
        let mut out = Vec::new();
        for gen in all_targets(kind) {
            for tmask in crate::scalar::window(kind.context().even_count(), 1) {
                for xi in 0..(1u32 << kind.n()) {
                    out.push(field(kind, tmask.clone(), xi, gen));
                }
            }
        }
        out
    }

    fn sample_monomials(kind: AlgebraKind, radius: i64) -> Vec<SuperPoly> {
        let ctx = kind.context();
        let mut out = Vec::new();
        for t in crate::scalar::window(ctx.even_count(), radius) {
            for xi in 0..(1u32 << ctx.n()) {
                out.push(
                    SuperPoly::monomial(ctx, Monomial { t: t.clone(), xi }, qi(1)).unwrap(),
                );
            }
        }
        out
    }

    fn sample_covers(module: &TensorModule) -> Vec<CoverElement> {
        let kind = module.kind();
        let mut out = Vec::new();
        let vecs = [
            TensorVector::unit(TvKey {
                r: alloc::vec![0],
                p: 0,
                j: 0,
            }),
            TensorVector::unit(TvKey {
                r: alloc::vec![2],
                p: 1,
                j: 1,
            }),
            TensorVector::unit(TvKey {
                r: alloc::vec![-1],
                p: 1,
                j: 0,
            }),
        ];
        for tau in [
            field(kind, alloc::vec![0], 0, Generator::D(1)),
            field(kind, alloc::vec![1], 1, Generator::D(1)),
            field(kind, alloc::vec![-1], 0, Generator::P(1)),
            field(kind, alloc::vec![2], 1, Generator::P(1)),
        ] {
            for u in vecs.iter() {
                out.push(CoverElement::psi(&tau, u));
            }
        }
        out
    }

    #[test]
    fn evaluation_at_one_is_the_projection() {
        let module = natural_module();
        let kind = module.kind();
        let u = TensorVector::unit(TvKey {
            r: alloc::vec![1],
            p: 0,
            j: 0,
        });
        let tau = field(kind, alloc::vec![0], 0, Generator::D(1));
        let c = CoverElement::psi(&tau, &u);
        let one = SuperPoly::one(kind.context());
        let got = psi_eval(&module, &c, &one).unwrap();
        assert_eq!(got, module.act(&tau, &u).unwrap());
        assert_eq!(got, pi(&module, &c).unwrap());
        assert!(psi_eval(&module, &CoverElement::zero(kind), &one)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn odd_functional_picks_up_the_sign() {
        // psi(P1, u)(x1) = -act(x1 P1, u) for even u.
        let module = natural_module();
        let kind = module.kind();
        let u = TensorVector::unit(TvKey {
            r: alloc::vec![0],
            p: 0,
            j: 0,
        });
        let tau = field(kind, alloc::vec![0], 0, Generator::P(1));
        let c = CoverElement::psi(&tau, &u);
        let g = SuperPoly::monomial(
            kind.context(),
            Monomial {
                t: alloc::vec![0],
                xi: 1,
            },
            qi(1),
        )
        .unwrap();
        let got = psi_eval(&module, &c, &g).unwrap();
        let xtau = field(kind, alloc::vec![0], 1, Generator::P(1));
        let want = module.act(&xtau, &u).unwrap().scale(&qi(-1));
        assert_eq!(got, want);
    }

    #[test]
    fn coinduction_formulas_hold_on_the_window() {
        // For every sampled field X, cover element c, and window monomial
        // g: eval(X c, g) = X eval(c, g) - (-1)^{|X||c|} eval(c, X(g)), and
        // eval(f c, g) = (-1)^{|f||c|} eval(c, f g).
        let module = natural_module();
        let kind = module.kind();
        for c in sample_covers(&module) {
            let (pt, pu) = {
                let ((mono, gen), u) = c.terms().next().unwrap();
                (
                    term_parity(mono, *gen),
                    module.vector_parity(u).unwrap(),
                )
            };
            let pc = pt.xor(pu);
            for g in sample_monomials(kind, 2) {
                for x in sample_fields(kind) {
                    let px = x.parity().unwrap();
                    let lhs = psi_eval(&module, &cover_act(&module, &x, &c).unwrap(), &g).unwrap();
                    let direct = module.act(&x, &psi_eval(&module, &c, &g).unwrap()).unwrap();
                    let moved = psi_eval(&module, &c, &x.apply(&g).unwrap()).unwrap();
                    let rhs = direct.sub(&moved.scale(&signed(qi(1), px.koszul(pc))));
                    assert_eq!(lhs, rhs, "x={x} g={g}");
                }
                for f in sample_monomials(kind, 1) {
                    let pf = f.parity().unwrap();
                    let lhs = psi_eval(&module, &cover_mul(&f, &c).unwrap(), &g).unwrap();
                    let rhs = psi_eval(&module, &c, &f.try_mul(&g).unwrap())
                        .unwrap()
                        .scale(&signed(qi(1), pf.koszul(pc)));
                    assert_eq!(lhs, rhs, "f={f} g={g}");
                }
            }
        }
    }

    #[test]
    fn projection_intertwines_the_action() {
        let module = natural_module();
        let kind = module.kind();
        for c in sample_covers(&module) {
            for x in sample_fields(kind) {
                let lhs = pi(&module, &cover_act(&module, &x, &c).unwrap()).unwrap();
                let rhs = module.act(&x, &pi(&module, &c).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "x={x}");
            }
        }
    }

    #[test]
    fn first_order_difference_reads_the_weight() {
        // On the weight-zero module the order-one difference acts by k on
        // t^k, and the order-two difference vanishes identically.
        let module = witt_module(qi(0));
        let kind = module.kind();
        for k in -4..=4i64 {
            let v = TensorVector::unit(TvKey {
                r: alloc::vec![k],
                p: 0,
                j: 0,
            });
            for p in -4..=4i64 {
                for q in -4..=4i64 {
                    let w1 = words_act(&module, &omega(kind, 1, p, q, 1).unwrap(), &v).unwrap();
                    let want = TensorVector::unit(TvKey {
                        r: alloc::vec![k + p + q],
                        p: 0,
                        j: 0,
                    })
                    .scale(&qi(k));
                    assert_eq!(w1, want, "k={k} p={p} q={q}");
                    let w2 = words_act(&module, &omega(kind, 2, p, q, 1).unwrap(), &v).unwrap();
                    assert!(w2.is_zero(), "k={k} p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn minimal_orders_for_the_shifted_weight() {
        let module = witt_module(q(1, 2));
        assert_eq!(minimal_omega_ell(&module, 1, 3, 5).unwrap(), 2);
        assert_eq!(minimal_n_search(&module, 3, 5).unwrap(), 2);
    }

    #[test]
    fn annihilators_kill_a_formal_row_module() {
        // A module with a formal scalar row and nonzero eigenvalue.
        let kind = AlgebraKind::SemiDirect { m: 1, n: 1 };
        let module = TensorModule::new(
            kind,
            GlRep::natural(1, 1),
            alloc::vec![q(1, 3)],
            Some(q(2, 1)),
        )
        .unwrap();
        let n_const = minimal_n_search(&module, 2, 6).unwrap();
        assert!(n_const <= 4, "minimal order {n_const}");
        // Spot-check a formal-row annihilator instance beyond the search
        // window.
        let ws = ann_ops(kind, n_const, &[3], -2, 1, 1, Generator::D(0)).unwrap();
        for v in window_basis(&module, 2) {
            assert!(words_act(&module, &ws, &v).unwrap().is_zero());
        }
    }

    #[test]
    fn search_reports_exhaustion() {
        // A free one-term module is never annihilated at order zero bound.
        let module = witt_module(q(1, 2));
        let err = minimal_omega_ell(&module, 1, 2, 1).unwrap_err();
        assert_eq!(err, Error::SearchExhausted { bound: 1 });
    }

    #[test]
    fn window_reduction_preserves_evaluation() {
        let module = witt_module(q(1, 2));
        let kind = module.kind();
        let n_const = 4u64;
        // A functional far outside the window.
        let tau = field(kind, alloc::vec![-2], 0, Generator::D(1));
        let u = TensorVector::unit(TvKey {
            r: alloc::vec![5],
            p: 0,
            j: 0,
        });
        let c = CoverElement::psi(&tau, &u);
        let red = window_reduce(&module, &c, n_const).unwrap();
        for ((_, _), w) in red.terms() {
            for (key, _) in w.terms() {
                assert!(2 * key.r[0].abs() <= n_const as i64, "left at {:?}", key.r);
            }
        }
        for g in sample_monomials(kind, 3) {
            assert_eq!(
                psi_eval(&module, &c, &g).unwrap(),
                psi_eval(&module, &red, &g).unwrap(),
                "g={g}"
            );
        }
        // Inside the window nothing moves; reduction is idempotent.
        let again = window_reduce(&module, &red, n_const).unwrap();
        assert_eq!(again, red);
    }

    #[test]
    fn integer_weight_obstruction_is_reported() {
        let module = witt_module(qi(-5));
        let kind = module.kind();
        let tau = field(kind, alloc::vec![0], 0, Generator::D(1));
        let u = TensorVector::unit(TvKey {
            r: alloc::vec![5],
            p: 0,
            j: 0,
        });
        let err = window_reduce(&module, &CoverElement::psi(&tau, &u), 4).unwrap_err();
        assert!(matches!(err, Error::InvalidElement(_)));
    }
}
