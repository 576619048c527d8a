use thiserror::Error;

/// Everything that can go wrong in the numerical pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("direction has norm {0:e}, too small to normalize")]
    DegenerateDirection(f64),
    #[error("point set is empty")]
    EmptySet,
    #[error("consecutive vertices {0} and {1} coincide")]
    ZeroEdge(usize, usize),
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("non-finite value produced")]
    NonFinite,
    #[error("Jacobian is singular (|det| = {0:e})")]
    SingularJacobian(f64),
    #[error("inverse map failed to converge after {0} Newton iterations")]
    NoConvergence(usize),
    #[error("scenario validation failed: {0}")]
    ValidationFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("image reached the boundary ring of the working window")]
    WindowEscape,
    #[error("cell sets did not stabilize within {0} iterations")]
    NoStabilization(usize),
    #[error("minimality certificate failed: max defect {max_defect} exceeds {threshold}")]
    CertificateFailed { max_defect: f64, threshold: f64 },
    #[error("box set is not invariant at grid resolution")]
    NotInvariant,
    #[error("curve is self-intersecting")]
    SelfIntersecting,
    #[error("curve has {0} vertices, at least {1} required")]
    TooFewVertices(usize, usize),
    #[error("loop is not Legendrian: max contact residual {0}")]
    NonLegendrian(f64),
    #[error("front projection became singular at {0} vertices")]
    SingularFront(usize),
    #[error("contact residual drifted to {0}")]
    ContactDrift(f64),
    #[error("relaxation did not converge within {0} iterations")]
    NonConvergent(usize),
    #[error("raster cell {raster} is coarser than eps/10 = {limit}")]
    RasterTooCoarse { raster: f64, limit: f64 },
    #[error("loop is not invariant: one step moves it by {0:e}")]
    NotInvariantLoop(f64),
    #[error("base scenario is not normally attracting: {0}")]
    BaseNotAttracting(String),
}

pub type Result<T> = std::result::Result<T, Error>;
