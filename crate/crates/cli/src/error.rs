use compomat::double::SquareError;
use compomat::groupoid::GroupoidError;
use compomat::material::MaterialError;

/// Everything the command line can fail with. [`CliError::code`] is stable
/// and printed alongside the message.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{source_name}: line {line}, column {column}: {message}")]
    Parse { source_name: String, line: usize, column: usize, message: String },
    #[error("{location}: {message}")]
    Schema { location: String, message: String },
    #[error("{0}")]
    Resolution(String),
    #[error("{0}")]
    ObjectMismatch(String),
    #[error("{0}")]
    InvalidPartial(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    NotClosed(String),
    #[error("{0}")]
    NotTransitive(String),
    #[error("{0}")]
    SizeCap(String),
    #[error("{0}")]
    Engine(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse_error",
            CliError::Schema { .. } => "schema_error",
            CliError::Resolution(_) => "resolution_error",
            CliError::ObjectMismatch(_) => "object_mismatch",
            CliError::InvalidPartial(_) => "invalid_partial",
            CliError::Io { .. } => "io_error",
            CliError::Usage(_) => "usage_error",
            CliError::NotClosed(_) => "not_closed",
            CliError::NotTransitive(_) => "not_transitive",
            CliError::SizeCap(_) => "size_cap",
            CliError::Engine(_) => "engine_error",
        }
    }

    /// 2 for anything wrong with the input, 1 when the engine cannot finish
    /// an analysis of valid input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::NotClosed(_) | CliError::NotTransitive(_) | CliError::SizeCap(_) | CliError::Engine(_) => 1,
            _ => 2,
        }
    }

    pub fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema { location: location.into(), message: message.into() }
    }
}

impl From<GroupoidError> for CliError {
    fn from(e: GroupoidError) -> Self {
        match e {
            GroupoidError::ObjectMismatch => CliError::ObjectMismatch(e.to_string()),
            GroupoidError::NotClosed(_) => CliError::NotClosed(e.to_string()),
            GroupoidError::ClosureExceedsCap(_) => CliError::SizeCap(e.to_string()),
            GroupoidError::UnknownObject(_)
            | GroupoidError::DuplicateName(_)
            | GroupoidError::DuplicateLabel(_)
            | GroupoidError::ModeMismatch(_)
            | GroupoidError::Singular(_) => CliError::Resolution(e.to_string()),
            GroupoidError::NotComposable(..) | GroupoidError::NotInGroupoid(_) => CliError::Engine(e.to_string()),
        }
    }
}

impl From<MaterialError> for CliError {
    fn from(e: MaterialError) -> Self {
        match e {
            MaterialError::Groupoid(g) => g.into(),
            MaterialError::ObjectMismatch => CliError::ObjectMismatch(e.to_string()),
            MaterialError::NotClosed(_) => CliError::NotClosed(e.to_string()),
            MaterialError::NotTransitive { .. } => CliError::NotTransitive(e.to_string()),
            MaterialError::EmptySampleSet
            | MaterialError::Singular
            | MaterialError::UnknownKind(_)
            | MaterialError::BadParams { .. }
            | MaterialError::NotMatrixDerived => CliError::Resolution(e.to_string()),
            MaterialError::MissingTableEntry { .. } => CliError::Engine(e.to_string()),
        }
    }
}

impl From<SquareError> for CliError {
    fn from(e: SquareError) -> Self {
        match e {
            SquareError::InvalidPartial(_) | SquareError::CornerMismatch(_) | SquareError::WrongGroupoid { .. } => {
                CliError::InvalidPartial(e.to_string())
            }
            SquareError::SizeCap(_) => CliError::SizeCap(e.to_string()),
            _ => CliError::Engine(e.to_string()),
        }
    }
}
