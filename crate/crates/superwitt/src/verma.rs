//! Highest-weight-type modules in the distinguished even direction.
//!
//! Grading the algebra with one extra even variable by the eigenvalue of
//! the distinguished Euler field splits it into lowering, degree-zero, and
//! raising parts; the degree-zero part is the smaller algebra extended by
//! a formal scalar row. Inducing from a module over that part gives a
//! module freely spanned by ordered lowering words, and the quotient by
//! the maximal submodule missing the top level has its level dimensions
//! computed here by exact linear algebra. With no further even variables
//! every level is finite-dimensional and the computation is exact; with
//! more, levels are infinite-dimensional and all results are windowed
//! over-approximations, flagged as such.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::cover::UEnvWord;
use crate::linalg::RowSpan;
use crate::scalar::{q, qi, signed, window, Scalar};
use crate::superalg::{Monomial, Parity};
use crate::tensormod::{TensorModule, TensorVector, TvKey};
use crate::vfields::{AlgebraKind, Generator, VectorField};
use crate::{Error, Result};

/// One basis factor of an enveloping-algebra word.
pub type Letter = (Monomial, Generator);

fn letter_parity(l: &Letter) -> Parity {
    l.0.parity().xor(l.1.parity())
}

/// Fixed straightening order: even letters before odd, then by the
/// distinguished exponent, then lexicographic exponent vector, mask, row.
fn pbw_key(l: &Letter) -> (bool, i64, Vec<i64>, u32, Generator) {
    (
        letter_parity(l).is_odd(),
        l.0.t[0],
        l.0.t.clone(),
        l.0.xi,
        l.1,
    )
}

fn single_field(kind: AlgebraKind, mono: Monomial, gen: Generator, c: Scalar) -> VectorField {
    let mut x = VectorField::zero(kind);
    x.add_term(mono, gen, c);
    x
}

/// Splits a field over the extended algebra by the eigenvalue of the
/// distinguished Euler field: (lowering, degree-zero, raising). The
/// degree-zero part lives over the smaller algebra with a formal row.
pub fn triangular_parts(x: &VectorField) -> Result<(VectorField, VectorField, VectorField)> {
    let AlgebraKind::Extended { m, n } = x.kind() else {
        return Err(Error::KindMismatch);
    };
    let mut lo = VectorField::zero(x.kind());
    let mut mid = VectorField::zero(AlgebraKind::SemiDirect { m, n });
    let mut hi = VectorField::zero(x.kind());
    for ((mono, gen), c) in x.terms() {
        if mono.t[0] < 0 {
            lo.add_term(mono.clone(), *gen, c.clone());
        } else if mono.t[0] == 0 {
            let tail = Monomial {
                t: mono.t[1..].to_vec(),
                xi: mono.xi,
            };
            mid.add_term(tail, *gen, c.clone());
        } else {
            hi.add_term(mono.clone(), *gen, c.clone());
        }
    }
    Ok((lo, mid, hi))
}

fn normalize_letters(
    kind: AlgebraKind,
    letters: Vec<Letter>,
    coeff: Scalar,
) -> BTreeMap<Vec<Letter>, Scalar> {
    let mut done: BTreeMap<Vec<Letter>, Scalar> = BTreeMap::new();
    let mut work = alloc::vec![(letters, coeff)];
    while let Some((ls, c)) = work.pop() {
        if c.is_zero() {
            continue;
        }
        let mut violation = None;
        for i in 0..ls.len().saturating_sub(1) {
            let ka = pbw_key(&ls[i]);
            let kb = pbw_key(&ls[i + 1]);
            if ka > kb {
                violation = Some((i, false));
                break;
            }
            if ka == kb && letter_parity(&ls[i]).is_odd() {
                violation = Some((i, true));
                break;
            }
        }
        let Some((i, square)) = violation else {
            let slot = done.entry(ls).or_insert_with(Scalar::zero);
            *slot += c;
            if slot.is_zero() {
                done.retain(|_, v| !v.is_zero());
            }
            continue;
        };
        let x = ls[i].clone();
        let y = ls[i + 1].clone();
        let fx = single_field(kind, x.0.clone(), x.1, qi(1));
        let fy = single_field(kind, y.0.clone(), y.1, qi(1));
        let br = fx.bracket(&fy);
        // An odd letter squared collapses to half its self-bracket; an
        // out-of-order pair swaps with the Koszul sign plus the bracket.
        if !square {
            let mut sw = ls.clone();
            sw.swap(i, i + 1);
            let s = letter_parity(&x).koszul(letter_parity(&y));
            work.push((sw, signed(c.clone(), s)));
        }
        let half = q(1, 2);
        for ((bm, bg), bc) in br.terms() {
            let mut nl = ls.clone();
            nl.splice(i..i + 2, [(bm.clone(), *bg)]);
            let nc = if square { &(&c * bc) * &half } else { &c * bc };
            work.push((nl, nc));
        }
    }
    done
}

/// Rewrites a word into the fixed straightening order.
pub fn pbw_normalize(w: &UEnvWord) -> Vec<UEnvWord> {
    normalize_letters(w.kind, w.letters.clone(), w.coeff.clone())
        .into_iter()
        .map(|(letters, coeff)| UEnvWord::new(w.kind, coeff, letters))
        .collect()
}

/// Element of an induced module: ordered lowering words tensored with
/// vectors of the degree-zero module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VermaVector {
    terms: BTreeMap<(Vec<Letter>, TvKey), Scalar>,
}

impl VermaVector {
    pub fn zero() -> VermaVector {
        VermaVector {
            terms: BTreeMap::new(),
        }
    }

    /// The top-level vector `1 (x) key`.
    pub fn vacuum(key: TvKey) -> VermaVector {
        let mut v = VermaVector::zero();
        v.add_term(Vec::new(), key, qi(1));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Vec<Letter>, TvKey), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &[Letter], key: &TvKey) -> Scalar {
        self.terms
            .get(&(word.to_vec(), key.clone()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, word: Vec<Letter>, key: TvKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((word, key)).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &Scalar) -> VermaVector {
        let mut out = VermaVector::zero();
        if c.is_zero() {
            return out;
        }
        for ((w, k), v) in self.terms.iter() {
            out.add_term(w.clone(), k.clone(), c * v);
        }
        out
    }

    pub fn add(&self, rhs: &VermaVector) -> VermaVector {
        let mut out = self.clone();
        for ((w, k), v) in rhs.terms.iter() {
            out.add_term(w.clone(), k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &VermaVector) -> VermaVector {
        self.add(&rhs.scale(&qi(-1)))
    }
}

/// Per-level dimension report for the induced module, its candidate
/// radical, and the quotient. `windowed` marks the over-approximating
/// regime; `stabilized` records whether the candidate was unchanged when
/// the raising depth was incremented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalReport {
    pub depth: usize,
    pub raise_depth: usize,
    pub windowed: bool,
    pub m_dims: Vec<usize>,
    pub rad_dims: Vec<usize>,
    pub l_dims: Vec<usize>,
    pub stabilized: bool,
}

/// An induced module over the extended algebra, built from a module over
/// the degree-zero part and a lattice window for the non-distinguished
/// even directions (ignored when there are none).
pub struct VermaModule {
    base: TensorModule,
    window: i64,
    kind: AlgebraKind,
}

impl VermaModule {
    pub fn new(base: TensorModule, window: i64) -> Result<VermaModule> {
        let AlgebraKind::SemiDirect { m, n } = base.kind() else {
            return Err(Error::KindMismatch);
        };
        Ok(VermaModule {
            base,
            window,
            kind: AlgebraKind::Extended { m, n },
        })
    }

    pub fn base(&self) -> &TensorModule {
        &self.base
    }

    /// Kind of the acting (extended) algebra.
    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    /// With no non-distinguished even directions every level is
    /// finite-dimensional and all results are exact.
    pub fn is_exact(&self) -> bool {
        self.kind.m() == 0
    }

    fn small_m(&self) -> usize {
        self.kind.m()
    }

    /// Basis letters of the lowering part at distinguished degree `-k`,
    /// within the lattice window, in straightening order.
    pub fn lowering_letters(&self, k: i64) -> Vec<Letter> {
        self.letters_at(-k)
    }

    /// Window generators of the raising part at distinguished degree `e`.
    pub fn raising_letters(&self, e: i64) -> Vec<Letter> {
        self.letters_at(e)
    }

    fn letters_at(&self, deg: i64) -> Vec<Letter> {
        let m = self.small_m();
        let n = self.kind.n();
        let mut gens = Vec::new();
        for j in 0..=m {
            gens.push(Generator::D(j));
        }
        for a in 1..=n {
            gens.push(Generator::P(a));
        }
        let mut out = Vec::new();
        for tail in window(m, self.window) {
            let mut t = Vec::with_capacity(m + 1);
            t.push(deg);
            t.extend_from_slice(&tail);
            for xi in 0..(1u32 << n) {
                for gen in gens.iter() {
                    out.push((Monomial { t: t.clone(), xi }, *gen));
                }
            }
        }
        out.sort_by_key(pbw_key);
        out
    }

    /// Window basis keys of the degree-zero module.
    pub fn base_keys(&self) -> Vec<TvKey> {
        let m = self.small_m();
        let n = self.kind.n();
        let mut out = Vec::new();
        for r in window(m, self.window) {
            for p in 0..(1u32 << n) {
                for j in 0..self.base.fiber().dim() {
                    out.push(TvKey { r: r.clone(), p, j });
                }
            }
        }
        out
    }

    /// Ordered-word basis of the level at distinguished degree `-d`.
    pub fn basis(&self, d: usize) -> Vec<(Vec<Letter>, TvKey)> {
        let mut words: Vec<Vec<Letter>> = Vec::new();
        let mut letters: Vec<Letter> = Vec::new();
        for k in 1..=d {
            letters.extend(self.lowering_letters(k as i64));
        }
        letters.sort_by_key(pbw_key);
        fn rec(
            letters: &[Letter],
            start: usize,
            remaining: usize,
            cur: &mut Vec<Letter>,
            out: &mut Vec<Vec<Letter>>,
        ) {
            if remaining == 0 {
                out.push(cur.clone());
                return;
            }
            for idx in start..letters.len() {
                let k = (-letters[idx].0.t[0]) as usize;
                if k > remaining {
                    continue;
                }
                // Odd letters never repeat; an equal even letter may.
                let next = if letter_parity(&letters[idx]).is_odd() {
                    idx + 1
                } else {
                    idx
                };
                cur.push(letters[idx].clone());
                rec(letters, next, remaining - k, cur, out);
                cur.pop();
            }
        }
        rec(&letters, 0, d, &mut Vec::new(), &mut words);
        let mut out = Vec::new();
        for w in words {
            for key in self.base_keys() {
                out.push((w.clone(), key));
            }
        }
        out
    }

    fn act_letter(
        &self,
        lm: &Monomial,
        lg: Generator,
        word: &[Letter],
        key: &TvKey,
    ) -> Result<VermaVector> {
        let mut out = VermaVector::zero();
        if word.is_empty() {
            let deg = lm.t[0];
            if deg < 0 {
                out.add_term(alloc::vec![(lm.clone(), lg)], key.clone(), qi(1));
            } else if deg == 0 {
                let tail = Monomial {
                    t: lm.t[1..].to_vec(),
                    xi: lm.xi,
                };
                let field = single_field(self.base.kind(), tail, lg, qi(1));
                let w = self.base.act(&field, &TensorVector::unit(key.clone()))?;
                for (k2, c2) in w.terms() {
                    out.add_term(Vec::new(), k2.clone(), c2.clone());
                }
            }
            return Ok(out);
        }
        let y = &word[0];
        let rest = &word[1..];
        let fx = single_field(self.kind, lm.clone(), lg, qi(1));
        let fy = single_field(self.kind, y.0.clone(), y.1, qi(1));
        for ((bm, bg), bc) in fx.bracket(&fy).terms() {
            let part = self.act_letter(bm, *bg, rest, key)?;
            out = out.add(&part.scale(bc));
        }
        let px = lm.parity().xor(lg.parity());
        let s = signed(qi(1), px.koszul(letter_parity(y)));
        let inner = self.act_letter(lm, lg, rest, key)?;
        for ((w2, k2), c2) in inner.terms() {
            for (nw, nc) in normalize_letters(
                self.kind,
                core::iter::once(y.clone()).chain(w2.iter().cloned()).collect(),
                &s * c2,
            ) {
                out.add_term(nw, k2.clone(), nc);
            }
        }
        Ok(out)
    }

    /// Action of a field of the extended algebra.
    pub fn act(&self, x: &VectorField, v: &VermaVector) -> Result<VermaVector> {
        if x.kind() != self.kind {
            return Err(Error::KindMismatch);
        }
        let mut out = VermaVector::zero();
        for ((mono, gen), c) in x.terms() {
            for ((word, key), vc) in v.terms() {
                let part = self.act_letter(mono, *gen, word, key)?;
                out = out.add(&part.scale(&(c * vc)));
            }
        }
        Ok(out)
    }

    fn raising_words(&self, e: usize, len_max: usize) -> Vec<Vec<Letter>> {
        let ones = self.raising_letters(1);
        let twos = self.raising_letters(2);
        let mut out = Vec::new();
        fn rec(
            ones: &[Letter],
            twos: &[Letter],
            remaining: usize,
            len_left: usize,
            cur: &mut Vec<Letter>,
            out: &mut Vec<Vec<Letter>>,
        ) {
            if remaining == 0 {
                out.push(cur.clone());
                return;
            }
            if len_left == 0 {
                return;
            }
            for l in ones.iter() {
                cur.push(l.clone());
                rec(ones, twos, remaining - 1, len_left - 1, cur, out);
                cur.pop();
            }
            if remaining >= 2 {
                for l in twos.iter() {
                    cur.push(l.clone());
                    rec(ones, twos, remaining - 2, len_left - 1, cur, out);
                    cur.pop();
                }
            }
        }
        rec(&ones, &twos, e, len_max, &mut Vec::new(), &mut out);
        out
    }

    fn rad_dims_at(&self, depth: usize, raise_depth: usize) -> Result<Vec<usize>> {
        let bases: Vec<Vec<(Vec<Letter>, TvKey)>> = (0..=depth).map(|d| self.basis(d)).collect();
        let indexes: Vec<BTreeMap<&(Vec<Letter>, TvKey), usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, t)| (t, i)).collect())
            .collect();
        let mut spans: Vec<RowSpan> = Vec::new();
        let mut span0 = RowSpan::new(bases[0].len());
        for i in 0..bases[0].len() {
            let mut row = alloc::vec![Scalar::zero(); bases[0].len()];
            row[i] = qi(1);
            span0.insert(&row);
        }
        spans.push(span0);
        let mut rad = alloc::vec![0usize];
        for d in 1..=depth {
            let dim = bases[d].len();
            let mut span = RowSpan::new(dim);
            for e in 1..=d {
                for u in self.raising_words(e, raise_depth) {
                    let tgt_index = &indexes[d - e];
                    let tgt_dim = bases[d - e].len();
                    // Column j holds the target coordinates of u applied
                    // to the j-th basis vector; out-of-window components
                    // are dropped (the candidate stays a superset).
                    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(dim);
                    for (word, key) in bases[d].iter() {
                        let mut v = VermaVector::zero();
                        v.add_term(word.clone(), key.clone(), qi(1));
                        for (lm, lg) in u.iter().rev() {
                            let field = single_field(self.kind, lm.clone(), *lg, qi(1));
                            v = self.act(&field, &v)?;
                        }
                        let mut coord = alloc::vec![Scalar::zero(); tgt_dim];
                        for ((w2, k2), c2) in v.terms() {
                            match tgt_index.get(&(w2.clone(), k2.clone())) {
                                Some(&i) => coord[i] += c2,
                                None => {
                                    if self.is_exact() {
                                        return Err(Error::InvalidElement(
                                            "level basis missed an exact-mode component".into(),
                                        ));
                                    }
                                }
                            }
                        }
                        cols.push(coord);
                    }
                    for crow in spans[d - e].basis() {
                        let mut row = alloc::vec![Scalar::zero(); dim];
                        for (j, col) in cols.iter().enumerate() {
                            let mut acc = Scalar::zero();
                            for (i, ci) in crow.iter().enumerate() {
                                if !ci.is_zero() && !col[i].is_zero() {
                                    acc += ci * &col[i];
                                }
                            }
                            row[j] = acc;
                        }
                        span.insert(&row);
                    }
                }
            }
            rad.push(dim - span.dim());
            spans.push(span);
        }
        Ok(rad)
    }

    /// Candidate radical and quotient dimensions per level, with raising
    /// words up to the given length. The candidate is a superset of the
    /// true radical within the window; it shrinks or stays as the raising
    /// depth grows, never meets the top level, and `stabilized` reports
    /// whether one more unit of depth left it unchanged.
    pub fn radical(&self, depth: usize, raise_depth: usize) -> Result<RadicalReport> {
        let m_dims: Vec<usize> = (0..=depth).map(|d| self.basis(d).len()).collect();
        let rad_dims = self.rad_dims_at(depth, raise_depth)?;
        let next = self.rad_dims_at(depth, raise_depth + 1)?;
        let l_dims: Vec<usize> = m_dims
            .iter()
            .zip(rad_dims.iter())
            .map(|(m, r)| m - r)
            .collect();
        Ok(RadicalReport {
            depth,
            raise_depth,
            windowed: !self.is_exact(),
            stabilized: next == rad_dims,
            m_dims,
            rad_dims,
            l_dims,
        })
    }

    /// Quotient dimensions per level.
    pub fn lt_dims(&self, depth: usize, raise_depth: usize) -> Result<Vec<usize>> {
        Ok(self.radical(depth, raise_depth)?.l_dims)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::word_act;
    use crate::glmn::GlRep;
    use crate::scalar::q;

    fn witt_verma(lambda0: Scalar) -> VermaModule {
        let base = TensorModule::new(
            AlgebraKind::SemiDirect { m: 0, n: 0 },
            GlRep::trivial(0, 0),
            Vec::new(),
            Some(lambda0),
        )
        .unwrap();
        VermaModule::new(base, 0).unwrap()
    }

    fn odd_verma(lambda0: Scalar) -> VermaModule {
        let base = TensorModule::new(
            AlgebraKind::SemiDirect { m: 0, n: 1 },
            GlRep::trivial(0, 1),
            Vec::new(),
            Some(lambda0),
        )
        .unwrap();
        VermaModule::new(base, 0).unwrap()
    }

    fn letter(kind: AlgebraKind, t: Vec<i64>, xi: u32, gen: Generator) -> Letter {
        let _ = kind;
        (Monomial { t, xi }, gen)
    }

    #[test]
    fn triangular_split_matches_the_distinguished_exponent() {
        let kind = AlgebraKind::Extended { m: 1, n: 1 };
        let mut x = VectorField::zero(kind);
        x.add_term(
            Monomial {
                t: alloc::vec![-1, 0],
                xi: 0,
            },
            Generator::D(0),
            qi(1),
        );
        x.add_term(
            Monomial {
                t: alloc::vec![0, 2],
                xi: 1,
            },
            Generator::P(1),
            qi(3),
        );
        x.add_term(
            Monomial {
                t: alloc::vec![2, 0],
                xi: 0,
            },
            Generator::D(1),
            qi(-1),
        );
        let (lo, mid, hi) = triangular_parts(&x).unwrap();
        assert_eq!(lo.terms().count(), 1);
        assert_eq!(hi.terms().count(), 1);
        assert_eq!(mid.kind(), AlgebraKind::SemiDirect { m: 1, n: 1 });
        let mut want = VectorField::zero(AlgebraKind::SemiDirect { m: 1, n: 1 });
        want.add_term(
            Monomial {
                t: alloc::vec![2],
                xi: 1,
            },
            Generator::P(1),
            qi(3),
        );
        assert_eq!(mid, want);
        assert!(matches!(
            triangular_parts(&VectorField::zero(AlgebraKind::Plain { m: 1, n: 0 })),
            Err(Error::KindMismatch)
        ));
    }

    #[test]
    fn straightening_swap_produces_the_bracket_letter() {
        // Two lowering letters in the wrong order differ from the swap by
        // the single bracket letter of their supercommutator.
        let kind = AlgebraKind::Extended { m: 0, n: 0 };
        let x = letter(kind, alloc::vec![-1], 0, Generator::D(0));
        let y = letter(kind, alloc::vec![-2], 0, Generator::D(0));
        let z = letter(kind, alloc::vec![-3], 0, Generator::D(0));
        let w = UEnvWord::new(kind, qi(1), alloc::vec![x.clone(), y.clone()]);
        let got = pbw_normalize(&w);
        assert_eq!(got.len(), 2);
        let as_map: BTreeMap<Vec<Letter>, Scalar> =
            got.iter().map(|u| (u.letters.clone(), u.coeff.clone())).collect();
        assert_eq!(as_map.get(&alloc::vec![y, x]), Some(&qi(1)));
        assert_eq!(as_map.get(&alloc::vec![z]), Some(&qi(-1)));
    }

    #[test]
    fn straightening_squares_an_odd_letter() {
        // An odd letter times itself rewrites to half its self-bracket;
        // for a one-term letter that bracket vanishes, so the square is
        // zero. An even letter with an odd coefficient squares freely.
        let kind = AlgebraKind::Extended { m: 0, n: 1 };
        let x = letter(kind, alloc::vec![-1], 0, Generator::P(1));
        assert!(letter_parity(&x).is_odd());
        let w = UEnvWord::new(kind, qi(1), alloc::vec![x.clone(), x]);
        assert!(pbw_normalize(&w).is_empty());
        let y = letter(kind, alloc::vec![-1], 1, Generator::P(1));
        assert!(!letter_parity(&y).is_odd());
        let wy = UEnvWord::new(kind, qi(1), alloc::vec![y.clone(), y.clone()]);
        let got = pbw_normalize(&wy);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].letters, alloc::vec![y.clone(), y]);
        assert_eq!(got[0].coeff, qi(1));
    }

    #[test]
    fn straightening_is_idempotent_and_operator_equal() {
        // Scrambled three-letter words over the extended algebra with one
        // odd variable: normalizing twice equals normalizing once, and
        // both sides act identically on a tensor module.
        let kind = AlgebraKind::Extended { m: 0, n: 1 };
        let module = TensorModule::new(
            kind,
            GlRep::natural(1, 1),
            alloc::vec![q(1, 2)],
            None,
        )
        .unwrap();
        let pool = [
            letter(kind, alloc::vec![-1], 0, Generator::D(0)),
            letter(kind, alloc::vec![-2], 1, Generator::D(0)),
            letter(kind, alloc::vec![-1], 0, Generator::P(1)),
            letter(kind, alloc::vec![-1], 1, Generator::P(1)),
        ];
        let samples = crate::tensormod::TvKey {
            r: alloc::vec![0],
            p: 0,
            j: 0,
        };
        let vectors = [
            TensorVector::unit(samples),
            TensorVector::unit(crate::tensormod::TvKey {
                r: alloc::vec![1],
                p: 1,
                j: 1,
            }),
        ];
        for a in 0..pool.len() {
            for b in 0..pool.len() {
                for c in 0..pool.len() {
                    let w = UEnvWord::new(
                        kind,
                        qi(1),
                        alloc::vec![pool[a].clone(), pool[b].clone(), pool[c].clone()],
                    );
                    let once = pbw_normalize(&w);
                    let twice: BTreeMap<Vec<Letter>, Scalar> = once
                        .iter()
                        .flat_map(pbw_normalize)
                        .map(|u| (u.letters, u.coeff))
                        .fold(BTreeMap::new(), |mut acc, (l, c)| {
                            let slot = acc.entry(l).or_insert_with(Scalar::zero);
                            *slot += c;
                            acc
                        });
                    let once_map: BTreeMap<Vec<Letter>, Scalar> = once
                        .iter()
                        .map(|u| (u.letters.clone(), u.coeff.clone()))
                        .collect();
                    for (l, c) in twice.iter() {
                        assert_eq!(once_map.get(l).cloned().unwrap_or_else(Scalar::zero), *c);
                    }
                    for v in vectors.iter() {
                        let direct = word_act(&module, &w, v).unwrap();
                        let mut via = TensorVector::zero();
                        for u in once.iter() {
                            let part = word_act(&module, u, v).unwrap();
                            for (k, s) in part.terms() {
                                via.add_term(k.clone(), s.clone());
                            }
                        }
                        assert_eq!(direct, via, "a={a} b={b} c={c}");
                    }
                }
            }
        }
    }

    #[test]
    fn level_dimensions_count_ordered_words() {
        let vm = witt_verma(qi(1));
        assert_eq!(vm.basis(0).len(), 1);
        assert_eq!(vm.basis(1).len(), 1);
        assert_eq!(vm.basis(2).len(), 2);
        assert_eq!(vm.basis(3).len(), 3);
        let ov = odd_verma(qi(1));
        assert_eq!(ov.basis(0).len(), 2);
        assert_eq!(ov.lowering_letters(1).len(), 4);
        assert_eq!(ov.basis(1).len(), 8);
    }

    #[test]
    fn vacuum_eigenvalue_of_the_distinguished_row() {
        // The formal row reads the scalar on the vacuum and drops by the
        // level on deeper vectors.
        let lam = q(2, 3);
        let vm = witt_verma(lam.clone());
        let kind = vm.kind();
        let d0 = single_field(
            kind,
            Monomial {
                t: alloc::vec![0],
                xi: 0,
            },
            Generator::D(0),
            qi(1),
        );
        let key = TvKey {
            r: alloc::vec![],
            p: 0,
            j: 0,
        };
        let vac = VermaVector::vacuum(key.clone());
        assert_eq!(vm.act(&d0, &vac).unwrap(), vac.scale(&lam));
        let mut deep = VermaVector::zero();
        deep.add_term(
            alloc::vec![letter(kind, alloc::vec![-1], 0, Generator::D(0))],
            key.clone(),
            qi(1),
        );
        let got = vm.act(&d0, &deep).unwrap();
        assert_eq!(got, deep.scale(&(lam - qi(1))));
        // Raising the vacuum gives zero.
        let up = single_field(
            kind,
            Monomial {
                t: alloc::vec![1],
                xi: 0,
            },
            Generator::D(0),
            qi(1),
        );
        assert!(vm.act(&up, &vac).unwrap().is_zero());
    }

    #[test]
    fn one_letter_raising_matches_the_hand_bracket() {
        // Raising the level-one vector returns minus twice the scalar.
        let lam = q(5, 7);
        let vm = witt_verma(lam.clone());
        let kind = vm.kind();
        let key = TvKey {
            r: alloc::vec![],
            p: 0,
            j: 0,
        };
        let mut low = VermaVector::zero();
        low.add_term(
            alloc::vec![letter(kind, alloc::vec![-1], 0, Generator::D(0))],
            key.clone(),
            qi(1),
        );
        let up = single_field(
            kind,
            Monomial {
                t: alloc::vec![1],
                xi: 0,
            },
            Generator::D(0),
            qi(1),
        );
        let got = vm.act(&up, &low).unwrap();
        assert_eq!(got, VermaVector::vacuum(key).scale(&(qi(-2) * lam)));
    }

    #[test]
    fn quotient_dimensions_in_the_even_rank_one_case() {
        let vm1 = witt_verma(qi(1));
        let rep = vm1.radical(2, 4).unwrap();
        assert_eq!(rep.m_dims, alloc::vec![1, 1, 2]);
        assert_eq!(rep.rad_dims, alloc::vec![0, 0, 0]);
        assert_eq!(rep.l_dims, alloc::vec![1, 1, 2]);
        assert!(rep.stabilized);
        assert!(!rep.windowed);

        let vm0 = witt_verma(qi(0));
        let rep0 = vm0.radical(2, 4).unwrap();
        assert_eq!(rep0.l_dims, alloc::vec![1, 0, 0]);
        assert_eq!(rep0.rad_dims[0], 0);
        assert!(rep0.stabilized);
    }

    #[test]
    fn candidate_radical_shrinks_as_raising_depth_grows() {
        for lam in [qi(0), qi(1), q(1, 2)] {
            let vm = witt_verma(lam);
            let mut prev: Option<Vec<usize>> = None;
            for e in 1..=4 {
                let dims = vm.rad_dims_at(3, e).unwrap();
                if let Some(p) = prev {
                    for (a, b) in dims.iter().zip(p.iter()) {
                        assert!(a <= b);
                    }
                }
                prev = Some(dims);
            }
        }
    }

    #[test]
    fn odd_case_tables_are_produced_and_stabilize() {
        for lam in [qi(1), q(1, 2)] {
            let vm = odd_verma(lam);
            let rep = vm.radical(2, 4).unwrap();
            assert_eq!(rep.m_dims, alloc::vec![2, 8, 24]);
            assert_eq!(rep.rad_dims[0], 0);
            assert!(rep.stabilized);
            for (l, (m, r)) in rep
                .l_dims
                .iter()
                .zip(rep.m_dims.iter().zip(rep.rad_dims.iter()))
            {
                assert_eq!(*l, m - r);
            }
        }
    }
}
