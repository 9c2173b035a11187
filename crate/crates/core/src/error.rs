use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("elements belong to different alphabets")]
    AlphabetMismatch,

    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),

    #[error("generator '{0}' has no conjugate image")]
    MissingConjugate(String),

    #[error("inhomogeneous element: {}", .words.iter().map(|(w, g)| format!("{w} has {g}")).collect::<Vec<_>>().join("; "))]
    Inhomogeneous {
        /// Each offending word with its grading.
        words: Vec<(String, String)>,
    },

    #[error("the zero element has no grading")]
    ZeroGrading,

    #[error("cannot multiply a traced word")]
    TraceProduct,

    #[error("derivation '{derivation}' has no rule for generator '{generator}'")]
    UndefinedAction { derivation: String, generator: String },

    #[error("derivative depth {depth} exceeds bound {bound} on '{generator}'")]
    DepthExceeded {
        generator: String,
        depth: u8,
        bound: u8,
    },

    #[error("grading mismatch: {0}")]
    GradingMismatch(String),

    #[error("unknown suite '{0}'")]
    UnknownSuite(String),

    #[error("search space too large: {0}")]
    SearchSpace(String),

    #[error("division by a non-constant or zero scalar")]
    Division,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown identifier '{name}' at {pos}{}", if .suggestions.is_empty() { String::new() } else { format!(" (did you mean {}?)", .suggestions.join(", ")) })]
    Resolution {
        name: String,
        pos: usize,
        suggestions: Vec<String>,
    },

    #[error("wrong basis: {0}")]
    Basis(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
