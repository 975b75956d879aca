use thiserror::Error;

use crate::grid_module::Point;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("modulus {0} is not a prime in [2, 2^31-1]")]
    BadModulus(u32),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("index {s} is not below {t}")]
    NotComparable { s: Point, t: Point },
    #[error("point {0} lies outside the {1}x{2} grid")]
    OutOfGrid(Point, usize, usize),
    #[error("grid mismatch: {0}x{1} vs {2}x{3}")]
    GridMismatch(usize, usize, usize, usize),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("{kind} map at {at} has shape {got:?}, expected {want:?}")]
    Shape {
        kind: &'static str,
        at: Point,
        got: (usize, usize),
        want: (usize, usize),
    },
    #[error("empty index selection")]
    EmptySelection,
    #[error("index selection is not strictly increasing inside the grid")]
    BadSelection,
    #[error("inconsistent square invariants: multiplicity of {label} would be {value}")]
    InconsistentInvariants { label: &'static str, value: i64 },
    #[error("negative 1-parameter multiplicity {value} for bar [{s}, {t}]")]
    NegativeBar { s: usize, t: usize, value: i64 },
    #[error("module is not 1-parameter (grid {0}x{1})")]
    NotOneParameter(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BifiltrationError {
    #[error("simplex {simplex:?} is missing its face {face:?}")]
    MissingFace { simplex: Vec<u32>, face: Vec<u32> },
    #[error("simplex {simplex:?} at {grade} enters before its face {face:?} at {face_grade}")]
    NonMonotone {
        simplex: Vec<u32>,
        grade: Point,
        face: Vec<u32>,
        face_grade: Point,
    },
    #[error("simplex {0:?} listed twice")]
    Duplicate(Vec<u32>),
    #[error("simplex {0:?} has vertices that are not strictly increasing")]
    Unsorted(Vec<u32>),
    #[error("grade {0} outside the {1}x{2} grid")]
    OutOfGrid(Point, usize, usize),
    #[error("zigzag step {step} is not a valid complex: {reason}")]
    BadZigzag { step: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("{which} entry ({row}, {col}) breaks homogeneity: row grade {row_grade} is not below column grade {col_grade}")]
    Inhomogeneous {
        which: &'static str,
        row: usize,
        col: usize,
        row_grade: Point,
        col_grade: Point,
    },
    #[error("column {0} has no nonzero entry, so it has no lub")]
    ZeroColumn(usize),
    #[error("shape mismatch in {0}")]
    Shape(&'static str),
    #[error("phi * psi is not zero")]
    NotComplex,
    #[error("grade {0} outside the {1}x{2} grid")]
    OutOfGrid(Point, usize, usize),
    #[error("exactness fails at {t}: {what}")]
    NotExact { t: Point, what: &'static str },
    #[error("negative rank {value} computed for {s} <= {t}")]
    NegativeRank { s: Point, t: Point, value: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("parameter n must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("embedding is not fully faithful: {0}")]
    NotFaithful(String),
    #[error("invalid poset: {0}")]
    BadPoset(String),
    #[error("invalid poset module: {0}")]
    BadPosetModule(String),
    #[error("modules live on different posets")]
    PosetMismatch,
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// Parse failure with a 1-based line number (0 when the whole input is at fault).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, msg: impl Into<String>) -> Self {
        ParseError { line, msg: msg.into() }
    }
}

/// Failure to load one of the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Field(#[from] LinalgError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Bifiltration(#[from] BifiltrationError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
}
