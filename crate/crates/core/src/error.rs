use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed dataset: {0}")]
    Parse(String),

    #[error("schema violation in {context}: {message}")]
    Schema { context: String, message: String },

    #[error("object `{object}`: {message}")]
    ObjectValue { object: String, message: String },

    #[error(
        "objects `{first}` and `{second}` of class `{class}` have identical attribute maps; \
         set \"inject_identifier\": true in the dataset to add a unique `Id` attribute"
    )]
    DuplicateAttributes {
        class: String,
        first: String,
        second: String,
    },

    #[error("unknown object id `{0}`")]
    UnknownObject(String),

    #[error("objects labeled both positive and negative: {}", .0.join(", "))]
    LabelOverlap(Vec<String>),

    #[error("no positive objects were labeled")]
    EmptyPositives,

    #[error("arity mismatch: expected {expected} coordinates, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("element does not belong to this lattice: {0}")]
    ContextMismatch(String),

    #[error("operation is undefined on the bottom element")]
    BottomInput,

    #[error("value {value} of attribute `{attribute}` is not a grid point of this lattice")]
    NotOnGrid { attribute: String, value: f64 },

    #[error("element is not an atom (every coordinate must be a single value)")]
    NotAnAtom,

    #[error("no element covers all of the requested positives while excluding the negatives")]
    Infeasible,

    #[error("positives are not covered by any candidate: {}", .0.join(", "))]
    Uncovered(Vec<String>),

    #[error("lattice for class `{class}` has {size} elements, above the materialization cap of {cap}")]
    ContextTooLarge {
        class: String,
        size: String,
        cap: u64,
    },

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown class `{0}`")]
    UnknownClass(String),

    #[error("class `{class}` has no attribute `{attribute}`")]
    UnknownAttribute { class: String, attribute: String },

    #[error("attribute `{attribute}`: {message}")]
    TypeMismatch { attribute: String, message: String },

    #[error("while evaluating object `{object}`: {source}")]
    Eval {
        object: String,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid action: {0}")]
    Action(String),

    #[error("invalid generator settings: {0}")]
    Generator(String),

    #[error("search exceeded its time budget")]
    Timeout,

    #[error("search was cancelled")]
    Cancelled,
}

impl Error {
    pub(crate) fn schema(context: impl fmt::Display, message: impl fmt::Display) -> Self {
        Error::Schema {
            context: context.to_string(),
            message: message.to_string(),
        }
    }

    pub(crate) fn object(object: impl fmt::Display, message: impl fmt::Display) -> Self {
        Error::ObjectValue {
            object: object.to_string(),
            message: message.to_string(),
        }
    }

    /// True for errors caused by the user's labels or inputs rather than by
    /// resource limits.
    pub fn is_specification_error(&self) -> bool {
        !matches!(self, Error::Timeout | Error::Cancelled)
    }
}
