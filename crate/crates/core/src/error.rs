use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate element name `{0}`")]
    DuplicateName(String),

    #[error("cover relations form a directed cycle through `{0}`")]
    Cycle(String),

    #[error("budget `{budget}` exceeded (limit {limit})")]
    Budget { budget: &'static str, limit: usize },

    #[error("lattice is not planar (width {width})")]
    NonPlanar { width: usize },

    #[error("poset width {width} is smaller than the requested antichain size {requested}")]
    WidthTooSmall { width: usize, requested: usize },

    #[error("monomial degrees differ ({left} vs {right})")]
    DegreeMismatch { left: usize, right: usize },

    #[error("monomial set is not sortable: pair ({0}, {1}) sorts outside the set")]
    NotSortable(usize, usize),

    #[error("cycle witness needs at least 3 low elements, got {0}")]
    CycleTooShort(usize),

    #[error("integer overflow while accumulating {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    Invalid(String),

    /// A computed quantity disagreed with a result that holds unconditionally.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
