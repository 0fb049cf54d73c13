use alloc::string::String;
use core::fmt;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two operands live over different coefficient contexts.
    ContextMismatch,
    /// Two vector fields (or a field and a module) belong to different
    /// algebra kinds.
    KindMismatch,
    /// A variable, generator, or basis index is out of range.
    BadIndex { index: usize },
    /// Matrix or vector dimensions do not match.
    BadDimensions,
    /// The element has support in more than one weight.
    MixedWeight,
    /// The element is zero where a nonzero one is required.
    ZeroElement,
    /// The element mixes even and odd components where a homogeneous one is
    /// required.
    MixedParity,
    /// An integer matrix does not have determinant +1 or -1.
    NotUnimodular,
    /// A claimed invariant subspace is not closed under the action.
    NotInvariant,
    /// A subspace is not spanned by parity-homogeneous vectors.
    NotGraded,
    /// Action matrices fail the defining commutator relation on the listed
    /// pair of basis units.
    NotARep { a: usize, b: usize, c: usize, d: usize },
    /// A sampled operator family is not polynomial within the degree bound.
    DegreeBoundTooSmall,
    /// A reduction step would divide by a vanishing weight component.
    WeightShiftZero { label: usize, component: String },
    /// A bounded search ran out of candidates.
    SearchExhausted { bound: usize },
    /// Malformed input data.
    InvalidElement(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ContextMismatch => write!(f, "operands have different coefficient contexts"),
            Error::KindMismatch => write!(f, "operands belong to different algebra kinds"),
            Error::BadIndex { index } => write!(f, "index {index} out of range"),
            Error::BadDimensions => write!(f, "dimension mismatch"),
            Error::MixedWeight => write!(f, "element is not concentrated in a single weight"),
            Error::ZeroElement => write!(f, "element is zero"),
            Error::MixedParity => write!(f, "element is not parity-homogeneous"),
            Error::NotUnimodular => write!(f, "matrix determinant is not +1 or -1"),
            Error::NotInvariant => write!(f, "subspace is not invariant under the action"),
            Error::NotGraded => write!(f, "subspace is not parity-graded"),
            Error::NotARep { a, b, c, d } => {
                write!(f, "action fails the commutator relation on units ({a},{b}),({c},{d})")
            }
            Error::DegreeBoundTooSmall => {
                write!(f, "operator family is not polynomial within the degree bound")
            }
            Error::WeightShiftZero { label, component } => {
                write!(f, "weight component {component} for variable {label} vanishes; cannot divide")
            }
            Error::SearchExhausted { bound } => {
                write!(f, "search exhausted without success up to bound {bound}")
            }
            Error::InvalidElement(msg) => write!(f, "invalid element: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
