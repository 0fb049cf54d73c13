//! The formal-coefficient regrading of the vector-field algebra.
//!
//! Two graded Lie superalgebras share the generator alphabet `D(i)` (Euler
//! rows), `P(a)` (odd rows), `D0` (the adjoined scalar row):
//!
//! * [`smash`]: generators carry a Grassmann argument and an integer shift
//!   vector; brackets follow the degree-zero product tables.
//! * [`jets`]: generators carry a Grassmann argument and a non-negative jet
//!   index (shifted by the row's own direction for `D(i)`); the smash
//!   generators expand into these as polynomials in the shift.
//!
//! On top of those sit the normal form of the jet algebra modulo its
//! distinguished ideal ([`nf`]), the embedding of the general linear
//! superalgebra ([`nf::gl_embed`]), finite-dimensional fiber actions with
//! polynomial fitting ([`fiber`]), and the explicit small representation on
//! a root space of the adjoint module ([`example`]).

pub mod example;
pub mod fiber;
pub mod jets;
pub mod nf;
pub mod smash;

use crate::superalg::Parity;

/// Generator alphabet shared by the smash and jet layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JetTag {
    /// Euler row for the even direction `i` (1-based).
    D(usize),
    /// Odd derivation row for the odd direction `a` (1-based).
    P(usize),
    /// The adjoined scalar row.
    D0,
}

impl JetTag {
    pub fn parity(&self) -> Parity {
        match self {
            JetTag::P(_) => Parity::Odd,
            _ => Parity::Even,
        }
    }

    pub(crate) fn validate(&self, m: usize, n: usize) -> crate::Result<()> {
        match *self {
            JetTag::D(i) => {
                if i < 1 || i > m {
                    return Err(crate::Error::BadIndex { index: i });
                }
            }
            JetTag::P(a) => {
                if a < 1 || a > n {
                    return Err(crate::Error::BadIndex { index: a });
                }
            }
            JetTag::D0 => {}
        }
        Ok(())
    }
}

impl core::fmt::Display for JetTag {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            JetTag::D(i) => write!(f, "D{i}"),
            JetTag::P(a) => write!(f, "P{a}"),
            JetTag::D0 => write!(f, "Dz"),
        }
    }
}

pub(crate) fn mask_parity(mask: u32) -> Parity {
    Parity::from_mask(mask)
}

/// Writes a Grassmann mask as `x`-factors, or "1".
pub(crate) fn mask_string(n: usize, mask: u32) -> alloc::string::String {
    use alloc::string::ToString;
    let mut parts: alloc::vec::Vec<alloc::string::String> = alloc::vec::Vec::new();
    for a in 1..=n {
        if mask & (1 << (a - 1)) != 0 {
            parts.push(alloc::format!("x{a}"));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}
