use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:e})")]
    NotSymmetric { max_asymmetry: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("weight on edge {{{u},{v}}} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsdEdge { u: usize, v: usize, min_eigenvalue: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {{{u},{v}}} listed more than once")]
    DuplicateEdge { u: usize, v: usize },
    #[error("orientation ({tail} -> {head}) does not match edge {{{u},{v}}}")]
    InvalidOrientation { u: usize, v: usize, tail: usize, head: usize },
    #[error("invalid tolerance `{0}`: must be finite and nonnegative")]
    InvalidTolerance(&'static str),
    #[error("negative or non-finite scalar weight on edge {{{u},{v}}}")]
    InvalidScalarWeight { u: usize, v: usize },
    #[error("graph is not dI-regular")]
    NotScalarRegular,
    #[error("subset must be nonempty and proper")]
    EmptyOrFullSubset,
    #[error("vol(G) is singular (min eigenvalue {min_eigenvalue:e})")]
    SingularVolume { min_eigenvalue: f64 },
    #[error("{n} vertices exceeds the exhaustive limit of {limit}; use sampling instead")]
    TooLarge { n: usize, limit: usize },
    #[error("bar {{{u},{v}}} has zero length")]
    DegenerateEdge { u: usize, v: usize },
    #[error("bar {{{u},{v}}} has non-positive or non-finite stiffness")]
    InvalidStiffness { u: usize, v: usize },
    #[error("frame is not tight (residual {residual:e})")]
    NotTight { residual: f64 },
    #[error("frame element {index} is not an orthogonal projection (residual {residual:e})")]
    NotProjection { index: usize, residual: f64 },
    #[error("graph has no proper edge coloring with {colors} colors")]
    NotColorable { colors: usize },
    #[error("edge coloring is not a proper coloring using every color at every vertex ({0})")]
    NotProperlyColored(&'static str),
    #[error("frame has {found} elements but the coloring uses {expected} colors")]
    FrameSizeMismatch { expected: usize, found: usize },
    #[error("weight on edge {{{u},{v}}} is not an orthogonal projection")]
    NotProjectionWeights { u: usize, v: usize },
    #[error("domain error: {0}")]
    DomainError(&'static str),
}
