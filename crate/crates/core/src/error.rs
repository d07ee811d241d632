/// Errors raised by the geometric operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A zero vector, or two proportional vectors where distinct ones are required.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    /// Three of the four frame points are collinear.
    #[error("degenerate frame: points {0}, {1}, {2} are collinear")]
    DegenerateFrame(usize, usize, usize),
    /// A linear fit did not determine a unique curve.
    #[error("fit underdetermined: nullspace dimension {dimension}")]
    UnderdeterminedFit { dimension: usize },
    /// Too few data points for the requested fit.
    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    /// The gradient of the form vanishes at the point.
    #[error("point {0} is a singular point of the conic")]
    SingularPoint(String),
    /// The line is contained in the conic.
    #[error("line {0} is a component of the conic")]
    ComponentLine(String),
    #[error("conic has rank {rank}, expected 3")]
    DegenerateConic { rank: usize },
    #[error("line {0} coincides with the chart line")]
    ChartCollision(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),
    #[error("degenerate seed: {0}")]
    DegenerateSeed(String),
    #[error("near pencil needs at least 3 lines, got {0}")]
    InsufficientLines(usize),
    #[error("invalid range {0}..{1}: lower bound must be below upper bound")]
    InvalidRange(i64, i64),
    #[error("cell is not a simplicial interior cell: {0}")]
    NotSimplicial(String),
    #[error("not an arrangement of type A2-tilde-0: {0}")]
    NotA2TildeZero(String),
    #[error("no rational base point: {0}")]
    NoRationalPoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
