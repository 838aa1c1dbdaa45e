use thiserror::Error;

/// Everything that can go wrong while evaluating a metric or one of its bounds.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("point ({re}, {im}) lies outside the {domain}")]
    OutsideDomain { domain: String, re: f64, im: f64 },

    #[error("cross-ratio is undefined: a coincides with b or c coincides with d")]
    DegenerateCrossRatio,

    #[error("hyperplane normal must be non-zero")]
    ZeroNormal,

    #[error("angle at the origin is undefined for the origin itself")]
    OriginArgument,

    #[error("the two points coincide")]
    CoincidentPoints,

    #[error("no root of the reflection quartic lies on the circle |z| = {radius}")]
    NoAdmissibleRoot { radius: f64 },

    #[error("points are not collinear with the origin in the required orientation")]
    NotCollinear,

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("midpoint of the pair is the origin; the collinear rotation is undefined")]
    MidpointAtOrigin,

    #[error("closed ball B({re}+{im}i, {radius}) is not contained in the domain")]
    BallNotContained { re: f64, im: f64, radius: f64 },

    #[error("root t = {0} of the u(v) quadratic lies outside [0, 1]")]
    RootOutOfRange(f64),

    #[error("leading coefficient of the u(v) quadratic vanishes")]
    DegenerateCoefficients,

    #[error("a midpoint-rotation point falls outside the domain")]
    EmrPointOutsideDomain,

    #[error("the closures of E and F intersect")]
    SetsNotDisjoint,

    #[error("boundary set has no samples")]
    EmptySet,

    #[error("invalid set description `{0}`")]
    BadSetDescription(String),
}

pub type Result<T> = std::result::Result<T, MetricError>;
