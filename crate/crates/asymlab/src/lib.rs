//! asymlab: a computational convex-geometry toolkit for asymmetry
//! functionals of polytopes.
//!
//! The crate computes the symmetric kernel and the asymmetry ratio m(K), the
//! pseudo-center, the Blaschke body via a discrete Minkowski-problem solver,
//! Wulff-shape deformations, projection bodies as zonotopes and the
//! associated affine invariants, together with batch verification suites and
//! a stochastic search over extremal shapes.
//!
//! Everything works on bounded, full-dimensional polytopes in dimensions
//! 2..=6 with both vertex and halfspace representations kept in sync.

pub mod bodies;
pub mod geometry;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod measures;
pub mod optim;
pub mod plot;
pub mod projection;
pub mod report;
pub mod search;
pub mod suites;
pub mod wulff;

pub use geometry::{hausdorff_2d, Facet, Halfspace, Polytope, SurfaceMeasure};
pub use linalg::{Matrix, Vector, MAX_DIM, MIN_DIM};

/// Errors shared across the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("halfspace normals do not positively span the space; the intersection is unbounded")]
    Unbounded,
    #[error("the intersection is empty")]
    Empty,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("optimizer failed to converge: {0}")]
    ConvergenceFailure(String),
    #[error("measure cannot be realized by a convex body: {0}")]
    InfeasibleMeasure(String),
    #[error("combinatorial workload too large: {0}")]
    TooLarge(String),
    #[error("zonotope generators do not span the space")]
    DegenerateZonotope,
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unsupported dimension {0} for this operation")]
    UnsupportedDim(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension {0} outside the supported range 2..=6")]
    DimOutOfRange(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
