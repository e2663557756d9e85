use thiserror::Error;

/// Errors raised by the geometry kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("point {point:?} lies inside the closed unit ball (|A| = {norm})")]
    PointInsideBall { point: [f64; 3], norm: f64 },

    #[error("vector is not on the upper de Sitter sheet: <v,v> = {norm_sq}, x0 = {x0}")]
    NotDeSitter { norm_sq: f64, x0: f64 },

    #[error("vector is not on the upper hyperbolic sheet: <v,v> = {norm_sq}, x0 = {x0}")]
    NotHyperbolic { norm_sq: f64, x0: f64 },

    #[error("point pair is outside the image of the Pogorelov map (|xi|^2 - |eta|^2 = {difference})")]
    OutOfDomain { difference: f64 },

    #[error("pre-normalized vector has Minkowski square {norm_sq}, cannot rescale onto de Sitter space")]
    NormalizationFailure { norm_sq: f64 },

    #[error("only {found} admissible samples found, need at least {needed}")]
    InsufficientSamples { found: usize, needed: usize },

    #[error("segment is not time-like: {0}")]
    NotTimeLike(String),

    #[error("degenerate face {0}")]
    DegenerateFace(String),

    #[error("degenerate triangle with side lengths {0:?}")]
    DegenerateTriangle([f64; 3]),

    #[error("no spherical realization: cos l would be {cos_l}")]
    Infeasible { cos_l: f64 },

    #[error("invalid circle: {0}")]
    InvalidCircle(String),

    #[error("lift matrix has rank {rank} < 4, Gram comparison is inconclusive")]
    RankDeficient { rank: usize },

    #[error("configurations have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),

    #[error("invalid triangulation: {0}")]
    Triangulation(String),

    #[error("invalid packing input: {0}")]
    PackingInput(String),

    #[error("unsupported export format `{0}`")]
    UnsupportedFormat(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("flex direction disagrees with the rigidity null space (error {0})")]
    FlexMismatch(f64),
}

pub type Result<T> = std::result::Result<T, GeomError>;
