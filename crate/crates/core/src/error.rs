use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge label {label} out of range 1..={n}")]
    LabelRange { label: usize, n: usize },
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("shape mismatch: word and polygons disagree on edge count ({0} vs {1})")]
    ShapeMismatch(usize, usize),
    #[error("closure is not a translation")]
    ClosureNotTranslation,
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("classification error: {0}")]
    Classification(String),
    #[error("no integer relation: the word is stable")]
    NoRelation,
    #[error("lattice vector ({0}, {1}) is not primitive")]
    NotPrimitive(i64, i64),
    #[error("matrix is not in the congruence subgroup: {0}")]
    NotInG(String),
    #[error("decoration counts violate the case bounds: {0}")]
    DecorationBound(String),
    #[error("parameter {0} must be odd")]
    Parity(i64),
    #[error("invalid component: {0}")]
    InvalidComponent(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate region: {0}")]
    DegenerateRegion(String),
    #[error("empty word")]
    EmptyWord,
    #[error("n = {0} is handled separately (see the S_j enumeration)")]
    DeferredCase(u32),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::LabelRange { .. } => "label_range",
            Error::InvalidWord(_) => "invalid_word",
            Error::InvalidShape(_) => "invalid_shape",
            Error::ShapeMismatch(..) => "shape_mismatch",
            Error::ClosureNotTranslation => "closure_not_translation",
            Error::OutOfScope(_) => "out_of_scope",
            Error::Classification(_) => "classification",
            Error::NoRelation => "no_relation",
            Error::NotPrimitive(..) => "not_primitive",
            Error::NotInG(_) => "not_in_g",
            Error::DecorationBound(_) => "decoration_bound",
            Error::Parity(_) => "parity",
            Error::InvalidComponent(_) => "invalid_component",
            Error::Precondition(_) => "precondition",
            Error::DegenerateRegion(_) => "degenerate_region",
            Error::EmptyWord => "empty_word",
            Error::DeferredCase(_) => "deferred_case",
            Error::Parse(_) => "parse",
        }
    }
}
