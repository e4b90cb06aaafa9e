use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero vector has no projective meaning")]
    ZeroVector,

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("need at least {needed} elements, got {got}")]
    TooFewElements { needed: usize, got: usize },

    #[error("operation needs a finite point, got a point at infinity")]
    PointAtInfinity,

    #[error("hyperplane at infinity has no tangency data")]
    HyperplaneAtInfinity,

    #[error("elements are not in one pencil (rank residual {residual:.3e})")]
    NotInPencil { residual: f64 },

    #[error("points are not collinear (rank residual {residual:.3e})")]
    NotCollinear { residual: f64 },

    #[error("coincident elements among the cross-ratio arguments")]
    Coincident,

    #[error("invalid confocal family: {0}")]
    InvalidFamily(String),

    #[error("parameter {lambda} coincides with the semi-axis {axis}")]
    DegenerateParameter { lambda: f64, axis: f64 },

    #[error("hyperplane touches the degenerate member at semi-axis {axis} (lambda = {lambda})")]
    DegenerateTangency { lambda: f64, axis: f64 },

    #[error("unsupported dimension {0} (closed-form root finding covers d <= 3)")]
    UnsupportedDimension(usize),

    #[error("unsupported lattice dimension m = {0} (expected 2 or 3)")]
    UnsupportedLatticeDimension(usize),

    #[error("line has no real intersection with the quadric lambda = {lambda}")]
    NoIntersection { lambda: f64 },

    #[error("tangential incidence on the quadric lambda = {lambda}")]
    TangentialIncidence { lambda: f64 },

    #[error("point is off the quadric lambda = {lambda} (residual {residual:.3e})")]
    OffQuadric { lambda: f64, residual: f64 },

    #[error("point is off the line (distance {distance:.3e})")]
    OffLine { distance: f64 },

    #[error(
        "hyperplane is not tangent to the quadric lambda = {lambda} (residual {residual:.3e})"
    )]
    NotTangent { lambda: f64, residual: f64 },

    #[error("complex caustic parameters (discriminant {discriminant:.3e})")]
    ComplexCaustics { discriminant: f64 },

    #[error("quadric parameters must be pairwise distinct")]
    RepeatedQuadrics,

    #[error("degenerate pencil: {0}")]
    DegeneratePencil(String),

    #[error("no branch completes the double reflection (pencil residuals {residuals:?})")]
    BranchFailure { residuals: Vec<f64> },

    #[error("the two constructions of the fourth line disagree (angle {angle:.3e}, offset {offset:.3e})")]
    ClosureMismatch { angle: f64, offset: f64 },

    #[error("construction failed at lattice vertex {vertex:?}: {source}")]
    Construction {
        vertex: Vec<usize>,
        #[source]
        source: Box<Error>,
    },

    #[error("net does not pass verification: {0}")]
    InvalidNet(String),

    #[error("incomplete cell or face: missing vertex {0:?}")]
    IncompleteCell(Vec<i64>),

    #[error("wrong cell kind for this check")]
    WrongCellKind,

    #[error("invalid lattice vertex {0:?}: exactly one doubled coordinate must be odd")]
    InvalidMidVertex(Vec<i64>),

    #[error("configuration error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("could not parse document: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn at_vertex(self, vertex: &[usize]) -> Error {
        match self {
            e @ Error::Construction { .. } => e,
            e => Error::Construction {
                vertex: vertex.to_vec(),
                source: Box::new(e),
            },
        }
    }

    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Error {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
